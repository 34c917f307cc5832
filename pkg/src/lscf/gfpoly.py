"""Exact polynomial arithmetic over a prime field GF(q).

Polynomials over GF(2) are stored as bit-packed integers (bit i holds the
coefficient of X^i), so ring operations reduce to native shifts and xors and
stay cheap even at degrees in the hundreds of thousands.  For q > 2 the
coefficients are stored as a tuple of residues in [0, q), lowest degree
first.  Values are immutable and hashable either way.

The canonical order on polynomials is: ascending degree, then ascending
integer value of the coefficient word sum(c_i * q**i) with the leading
coefficient most significant.  Because every integer >= q^d with d digits
decodes to a valid degree-d polynomial, this order coincides with the order
of the packed values themselves, and ranking the degree >= 1 polynomials is
constant time:

    rank(p) = value(p) - q + 1,   #{p : 1 <= deg p <= N} = q^(N+1) - q.

Counts and ranks are plain Python integers, hence arbitrary precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import CapExceeded, DivisionByZero, FieldMismatch, OutOfDomain

NEG_INF = float("-inf")

#: Default ceiling on (q-1) * q^d for full-degree enumeration streams.
DEFAULT_ENUM_CAP = 1 << 22


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(q), identified by its size."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not _is_prime(self.q):
            raise ValueError(f"field size must be a prime integer, got {self.q!r}")


# ---------------------------------------------------------------------------
# GF(2) primitives on bit-packed ints.

def _mul2(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    if a.bit_count() > b.bit_count():
        a, b = b, a
    acc = 0
    while a:
        low = a & -a
        acc ^= b << (low.bit_length() - 1)
        a ^= low
    return acc


def _divmod2(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise DivisionByZero("division by zero polynomial")
    db = b.bit_length() - 1
    quo = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        quo |= 1 << shift
        a ^= b << shift
    return quo, a


# ---------------------------------------------------------------------------
# GF(q) primitives on coefficient lists (lowest degree first, no trailing 0s).

def _trimp(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _addp(q: int, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, b_i in enumerate(b):
        c[i] = (c[i] + b_i) % q
    return _trimp(c)


def _subp(q: int, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    c = list(a) + [0] * (len(b) - len(a))
    for i, b_i in enumerate(b):
        c[i] = (c[i] - b_i) % q
    return _trimp(c)


def _mulp(q: int, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    c = [0] * (len(a) + len(b) - 1)
    for i, a_i in enumerate(a):
        if a_i:
            for j, b_j in enumerate(b):
                c[i + j] += a_i * b_j
    return _trimp([x % q for x in c])


def _divmodp(q: int, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise DivisionByZero("division by zero polynomial")
    if len(a) < len(b):
        return (), a
    inv = pow(b[-1], -1, q)
    r = list(a)
    quo = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        if len(r) >= i + len(b):
            quo[i] = q_i = (r[-1] * inv) % q
            if q_i:
                for j in range(len(b)):
                    r[i + j] = (r[i + j] - q_i * b[j]) % q
            while r and r[-1] == 0:
                r.pop()
    return _trimp(quo), _trimp(r)


class Poly:
    """Immutable polynomial over a prime field.

    Construct through the classmethods; the raw constructor takes the internal
    representation (an int for q = 2, a coefficient tuple otherwise).
    """

    __slots__ = ("field", "_v")

    def __init__(self, field: FieldSpec, rep, _checked: bool = False):
        if not _checked:
            if field.q == 2:
                rep = int(rep)
                if rep < 0:
                    raise ValueError("negative bit-packed value")
            else:
                rep = _trimp([c % field.q for c in rep])
        self.field = field
        self._v = rep

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field, 0 if field.q == 2 else (), _checked=True)

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls(field, 1 if field.q == 2 else (1,), _checked=True)

    @classmethod
    def x(cls, field: FieldSpec) -> "Poly":
        return cls.monomial(field, 1)

    @classmethod
    def monomial(cls, field: FieldSpec, d: int, c: int = 1) -> "Poly":
        c %= field.q
        if c == 0:
            return cls.zero(field)
        if field.q == 2:
            return cls(field, 1 << d, _checked=True)
        return cls(field, (0,) * d + (c,), _checked=True)

    @classmethod
    def from_coeffs(cls, field: FieldSpec, coeffs) -> "Poly":
        """Coefficients lowest degree first; values reduced mod q."""
        coeffs = [c % field.q for c in coeffs]
        if field.q == 2:
            v = 0
            for i, c in enumerate(coeffs):
                if c:
                    v |= 1 << i
            return cls(field, v, _checked=True)
        return cls(field, _trimp(coeffs), _checked=True)

    @classmethod
    def from_value(cls, field: FieldSpec, v: int) -> "Poly":
        """Decode the base-q packed coefficient word."""
        if v < 0:
            raise ValueError("packed value must be nonnegative")
        q = field.q
        if q == 2:
            return cls(field, v, _checked=True)
        coeffs = []
        while v:
            v, r = divmod(v, q)
            coeffs.append(r)
        return cls(field, tuple(coeffs), _checked=True)

    @classmethod
    def from_text(cls, field: FieldSpec, s: str) -> "Poly":
        """Parse the canonical text form, e.g. "X^3+2X+1"; spaces tolerated."""
        s = "".join(s.split())
        if not s:
            raise ValueError("empty polynomial string")
        if s == "0":
            return cls.zero(field)
        coeffs: dict[int, int] = {}
        for term in s.split("+"):
            if not term:
                raise ValueError(f"malformed polynomial text {s!r}")
            body = term.replace("x", "X")
            if "X" not in body:
                c, e = int(body), 0
            else:
                head, _, tail = body.partition("X")
                c = 1 if head == "" else int(head)
                if tail == "":
                    e = 1
                elif tail.startswith("^"):
                    e = int(tail[1:])
                else:
                    raise ValueError(f"malformed term {term!r}")
            if e < 0:
                raise ValueError(f"negative exponent in {term!r}")
            coeffs[e] = coeffs.get(e, 0) + c
        out = [0] * (max(coeffs) + 1)
        for e, c in coeffs.items():
            out[e] = c % field.q
        return cls.from_coeffs(field, out)

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._v

    @property
    def degree(self):
        """Degree; the zero polynomial gets -inf so it sorts below everything."""
        if self.field.q == 2:
            return self._v.bit_length() - 1 if self._v else NEG_INF
        return len(self._v) - 1 if self._v else NEG_INF

    def coeff(self, i: int) -> int:
        if i < 0:
            return 0
        if self.field.q == 2:
            return (self._v >> i) & 1
        return self._v[i] if i < len(self._v) else 0

    @property
    def constant_term(self) -> int:
        return self.coeff(0)

    @property
    def leading_coeff(self) -> int:
        if self.is_zero:
            return 0
        if self.field.q == 2:
            return 1
        return self._v[-1]

    @property
    def is_monic(self) -> bool:
        return self.leading_coeff == 1

    @property
    def value(self) -> int:
        """The base-q packed coefficient word (canonical order key)."""
        if self.field.q == 2:
            return self._v
        v = 0
        for c in reversed(self._v):
            v = v * self.field.q + c
        return v

    def terms(self) -> Iterator[tuple[int, int]]:
        """Nonzero (exponent, coefficient) pairs, highest degree first."""
        if self.field.q == 2:
            v = self._v
            exps = []
            while v:
                low = v & -v
                exps.append(low.bit_length() - 1)
                v ^= low
            for e in reversed(exps):
                yield e, 1
        else:
            for e in range(len(self._v) - 1, -1, -1):
                if self._v[e]:
                    yield e, self._v[e]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.q}) vs GF({other.field.q})")

    def __add__(self, other: "Poly") -> "Poly":
        self._coerce(other)
        if self.field.q == 2:
            return Poly(self.field, self._v ^ other._v, _checked=True)
        return Poly(self.field, _addp(self.field.q, self._v, other._v), _checked=True)

    def __sub__(self, other: "Poly") -> "Poly":
        self._coerce(other)
        if self.field.q == 2:
            return Poly(self.field, self._v ^ other._v, _checked=True)
        return Poly(self.field, _subp(self.field.q, self._v, other._v), _checked=True)

    def __neg__(self) -> "Poly":
        if self.field.q == 2:
            return self
        return Poly(self.field, tuple((-c) % self.field.q for c in self._v), _checked=True)

    def __mul__(self, other: "Poly") -> "Poly":
        self._coerce(other)
        if self.field.q == 2:
            return Poly(self.field, _mul2(self._v, other._v), _checked=True)
        return Poly(self.field, _mulp(self.field.q, self._v, other._v), _checked=True)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._coerce(other)
        if self.field.q == 2:
            quo, rem = _divmod2(self._v, other._v)
        else:
            quo, rem = _divmodp(self.field.q, self._v, other._v)
        return (Poly(self.field, quo, _checked=True), Poly(self.field, rem, _checked=True))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def scale(self, c: int) -> "Poly":
        """Multiply by a scalar residue."""
        c %= self.field.q
        if c == 0:
            return Poly.zero(self.field)
        if self.field.q == 2 or c == 1:
            return self
        return Poly(self.field, tuple((c * a) % self.field.q for a in self._v), _checked=True)

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k (k >= 0)."""
        if k < 0:
            raise ValueError("negative shift")
        if self.is_zero or k == 0:
            return self
        if self.field.q == 2:
            return Poly(self.field, self._v << k, _checked=True)
        return Poly(self.field, (0,) * k + self._v, _checked=True)

    def monic(self) -> "Poly":
        if self.is_zero or self.leading_coeff == 1:
            return self
        return self.scale(pow(self.leading_coeff, -1, self.field.q))

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.field == other.field
            and self._v == other._v
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self._v))

    def __lt__(self, other: "Poly") -> bool:
        self._coerce(other)
        return (self.degree, self.value) < (other.degree, other.value)

    def __le__(self, other: "Poly") -> bool:
        return self == other or self < other

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e, c in self.terms():
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c if c != 1 else ''}X")
            else:
                parts.append(f"{c if c != 1 else ''}X^{e}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Poly(GF({self.field.q}), {self})"


# ---------------------------------------------------------------------------
# Canonical ranking of the degree >= 1 alphabet.

def rank(p: Poly) -> int:
    """1-based position of p among all degree >= 1 polynomials."""
    if p.degree < 1:
        raise OutOfDomain("rank is defined for polynomials of degree >= 1")
    return p.value - p.field.q + 1


def unrank(field: FieldSpec, r: int) -> Poly:
    """Inverse of rank."""
    if r < 1:
        raise OutOfDomain("rank must be >= 1")
    return Poly.from_value(field, r + field.q - 1)


def count_degree_leq(field: FieldSpec, N: int) -> int:
    """#{p : 1 <= deg p <= N} = q^(N+1) - q."""
    if N < 1:
        return 0
    return field.q ** (N + 1) - field.q


def enumerate_degree(field: FieldSpec, d: int, cap: int | None = None) -> Iterator[Poly]:
    """All degree-d polynomials in canonical order, cap-guarded."""
    if d < 1:
        raise OutOfDomain("enumeration starts at degree 1")
    total = (field.q - 1) * field.q ** d
    limit = DEFAULT_ENUM_CAP if cap is None else cap
    if total > limit:
        raise CapExceeded(f"degree-{d} enumeration needs {total} polynomials")
    lo = field.q ** d
    hi = field.q ** (d + 1)
    return (Poly.from_value(field, v) for v in range(lo, hi))


# ---------------------------------------------------------------------------
# GCD and irreducibility.

def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    a._coerce(b)
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def powmod(a: Poly, e: int, modulus: Poly) -> Poly:
    """a^e mod modulus by square and multiply."""
    if e < 0:
        raise ValueError("negative exponent")
    result = Poly.one(a.field)
    base = a % modulus
    while e:
        if e & 1:
            result = (result * base) % modulus
        base = (base * base) % modulus
        e >>= 1
    return result


def is_irreducible(p: Poly) -> bool:
    """Exact irreducibility test.

    A polynomial of degree d >= 2 is reducible iff it shares a factor with
    X^(q^k) - X for some k <= d // 2, since any nontrivial factorization has
    a factor of degree at most d // 2.
    """
    if p.degree < 1:
        raise OutOfDomain("irreducibility is defined for degree >= 1")
    if p.degree == 1:
        return True
    x = Poly.x(p.field)
    b = x
    for _ in range(int(p.degree) // 2):
        b = powmod(b, p.field.q, p)
        if gcd(b - x, p).degree != 0:
            return False
    return True


def _mobius(n: int) -> int:
    m = 1
    f = 2
    while f * f <= n:
        if n % f == 0:
            n //= f
            if n % f == 0:
                return 0
            m = -m
        f += 1
    if n > 1:
        m = -m
    return m


def _divisors(n: int) -> list[int]:
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def count_irreducible(field: FieldSpec, d: int, monic_only: bool = True) -> int:
    """Number of irreducible polynomials of degree d.

    Monic count is the necklace sum (1/d) * sum_{e | d} mobius(e) * q^(d/e);
    the full count multiplies by the q - 1 leading-coefficient choices.
    """
    if d < 1:
        raise OutOfDomain("degree must be >= 1")
    total = 0
    for e in _divisors(d):
        total += _mobius(e) * field.q ** (d // e)
    assert total % d == 0, "necklace sum must be divisible by the degree"
    n = total // d
    return n if monic_only else (field.q - 1) * n


def irreducibles_of_degree(field: FieldSpec, d: int, cap: int | None = None) -> list[Poly]:
    """All irreducible degree-d polynomials in canonical order (sieve)."""
    return [p for p in enumerate_degree(field, d, cap=cap) if is_irreducible(p)]
