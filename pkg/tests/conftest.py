"""Shared strategies and independent oracles for the test suite.

The oracles here deliberately avoid the library's internal representations:
polynomials are dicts {exponent: coefficient}, so agreement between the two
is a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from lscf.gfpoly import FieldSpec, Poly
from lscf.laurent import RationalFunction

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F5 = FieldSpec(5)
FIELDS = (F2, F3, F5)


# ---------------------------------------------------------------------------
# Dict-based polynomial oracle (exponent -> residue).

def d_trim(q: int, a: dict[int, int]) -> dict[int, int]:
    return {e: c % q for e, c in a.items() if c % q}


def d_from_poly(p: Poly) -> dict[int, int]:
    return {e: c for e, c in p.terms()}


def d_to_poly(field: FieldSpec, a: dict[int, int]) -> Poly:
    if not a:
        return Poly.zero(field)
    coeffs = [0] * (max(a) + 1)
    for e, c in a.items():
        coeffs[e] = c
    return Poly.from_coeffs(field, coeffs)


def d_add(q: int, a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return d_trim(q, out)


def d_sub(q: int, a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) - c
    return d_trim(q, out)


def d_mul(q: int, a: dict, b: dict) -> dict:
    out: dict[int, int] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return d_trim(q, out)


def d_deg(a: dict) -> int:
    return max(a) if a else -1


def d_divmod(q: int, a: dict, b: dict) -> tuple[dict, dict]:
    """Schoolbook long division on term dicts."""
    assert b, "division by zero"
    inv = pow(b[d_deg(b)], -1, q)
    quo: dict[int, int] = {}
    rem = dict(a)
    while rem and d_deg(rem) >= d_deg(b):
        shift = d_deg(rem) - d_deg(b)
        coef = (rem[d_deg(rem)] * inv) % q
        quo[shift] = coef
        rem = d_sub(q, rem, d_mul(q, {shift: coef}, b))
    return d_trim(q, quo), d_trim(q, rem)


def sieve_irreducible(field: FieldSpec, p: Poly) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = int(p.degree)
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for v in range(field.q**e, field.q ** (e + 1)):
            cand = Poly.from_value(field, v)
            if (p % cand).is_zero:
                return False
    return True


# ---------------------------------------------------------------------------
# Hypothesis strategies.

def coeff_lists(q: int, min_deg: int = 0, max_deg: int = 8):
    return st.lists(
        st.integers(min_value=0, max_value=q - 1),
        min_size=min_deg + 1,
        max_size=max_deg + 1,
    )


def polys(field: FieldSpec, min_deg: int = 0, max_deg: int = 8):
    """Polynomials of degree in [min_deg, max_deg] (leading coeff forced)."""

    def build(coeffs, lead):
        return Poly.from_coeffs(field, coeffs[:-1] + [lead])

    return st.builds(
        build,
        coeff_lists(field.q, min_deg, max_deg),
        st.integers(min_value=1, max_value=field.q - 1),
    )


def nonzero_polys(field: FieldSpec, max_deg: int = 8):
    return polys(field, 0, max_deg)


def rationals_in_delta(field: FieldSpec, max_den_deg: int = 8):
    """Rational functions with deg num < deg den (norm < 1), zero included."""

    def build(den, num_coeffs, make_zero):
        if make_zero:
            return RationalFunction(Poly.zero(field), Poly.one(field))
        num = Poly.from_coeffs(field, num_coeffs[: int(den.degree)])
        return RationalFunction(num, den)

    return st.builds(
        build,
        polys(field, 1, max_den_deg),
        coeff_lists(field.q, 0, max_den_deg),
        st.booleans().filter(lambda b: True),
    ).filter(lambda r: r.is_zero or r.degree() < 0)


@pytest.fixture(scope="session")
def f2() -> FieldSpec:
    return F2


# ---------------------------------------------------------------------------
# Independent implementation of the factorial-block counting function,
# structured as a per-block accumulation loop (the library uses a prefix-sum
# closed form).  Shared by the module tests and the acceptance suite.

def count_p_blockwise(T: int) -> int:
    import math as _math

    total = 0
    k = 2
    while _math.factorial(k) <= T:
        f = _math.factorial(k)
        block_last = f + k * (f - 1)
        if block_last <= T:
            total += f
        else:
            total += (T - f) // k + 1
        k += 1
    return total
