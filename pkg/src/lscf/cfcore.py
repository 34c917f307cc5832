"""The continued-fraction algorithm for Laurent series.

A point of the open unit disc is driven by the map x -> 1/x - [1/x]; the
integral parts [1/x] are its digits, polynomials of degree >= 1.  Points
constructed here are digit-first: a DigitSeq holds a materialized prefix and
optionally a generator for more digits, and series or rational views are
derived from convergents when needed.

Certification rule: a digit prefix A_1..A_n read off a truncation known
through index m is valid for every series agreeing with that truncation iff

    2 * (deg A_1 + ... + deg A_n) + 1 <= m,

because the prefix's cylinder is a disc of diameter q^-(2*sum deg - 1), which
then strictly exceeds the q^-(m+1) uncertainty radius, so every perturbation
stays inside the same cylinder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import NoDivergence, OutOfDomain, PlanViolation, PrecisionExhausted
from .gfpoly import FieldSpec, Poly
from .laurent import LaurentSeries, RationalFunction, from_rational

import json


class DigitSeq:
    """A digit sequence: materialized prefix plus an optional generator tail."""

    def __init__(self, field: FieldSpec, digits: Iterable[Poly] = (), tail: Iterator[Poly] | None = None):
        self.field = field
        self._digits: list[Poly] = []
        self._tail = tail
        self._exhausted = tail is None
        for d in digits:
            self._admit(d)

    def _admit(self, d: Poly) -> None:
        if d.field != self.field:
            raise OutOfDomain("digit over the wrong field")
        if d.degree < 1:
            raise OutOfDomain(f"digit {d} has degree < 1")
        self._digits.append(d)

    @classmethod
    def from_generator(cls, field: FieldSpec, gen: Iterator[Poly]) -> "DigitSeq":
        return cls(field, (), tail=gen)

    def materialize(self, n: int) -> int:
        """Ensure the first n digits are materialized; returns how many exist."""
        while len(self._digits) < n and not self._exhausted:
            try:
                self._admit(next(self._tail))
            except StopIteration:
                self._exhausted = True
        return min(n, len(self._digits))

    def digit(self, n: int) -> Poly:
        """1-based digit access."""
        if self.materialize(n) < n:
            raise OutOfDomain(f"sequence has only {len(self._digits)} digits")
        return self._digits[n - 1]

    def prefix(self, n: int) -> tuple[Poly, ...]:
        got = self.materialize(n)
        return tuple(self._digits[:got])

    @property
    def available(self) -> int:
        return len(self._digits)

    @property
    def is_finite(self) -> bool:
        return self._exhausted

    def __len__(self) -> int:
        if not self._exhausted:
            raise OutOfDomain("length of a sequence with a live generator tail")
        return len(self._digits)

    def __iter__(self) -> Iterator[Poly]:
        i = 0
        while True:
            if self.materialize(i + 1) <= i:
                return
            yield self._digits[i]
            i += 1

    def pairwise_distinct(self, through: int | None = None) -> bool:
        """All materialized digits (or the first `through`) mutually distinct."""
        digits = self._digits if through is None else self.prefix(through)
        return len(set(digits)) == len(digits)

    def degree_sum(self, n: int) -> int:
        return sum(int(d.degree) for d in self.prefix(n))


@dataclass(frozen=True)
class ConvergentPair:
    """Numerator and denominator of one convergent."""

    p: Poly
    qden: Poly

    def as_rational(self) -> RationalFunction:
        return RationalFunction(self.p, self.qden)


@dataclass(frozen=True)
class CertifiedDigits:
    """Digits valid for every completion of a truncated series."""

    digits: DigitSeq
    certified_count: int
    terminated: bool


def cf_expand_rational(r: RationalFunction) -> DigitSeq:
    """Finite digit expansion of a rational point of the unit disc.

    Iterated Euclidean division: with r = n/d and deg n < deg d, the digit is
    the quotient of d by n and the tail is the remainder over n.
    """
    if not r.is_zero and r.degree() >= 0:
        raise OutOfDomain(f"{r} has norm >= 1")
    digits = []
    num, den = r.num, r.den
    while not num.is_zero:
        quo, rem = divmod(den, num)
        digits.append(quo)
        num, den = rem, num
    return DigitSeq(r.field, digits)


def convergents(d: DigitSeq, n: int) -> list[ConvergentPair]:
    """The first n convergents, by p_k = A_k p_(k-1) + p_(k-2) (q alike)."""
    field = d.field
    if d.materialize(n) < n:
        raise OutOfDomain(f"only {d.available} digits available, need {n}")
    p_prev, p_cur = Poly.one(field), Poly.zero(field)
    q_prev, q_cur = Poly.zero(field), Poly.one(field)
    out = []
    for k in range(1, n + 1):
        a = d.digit(k)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append(ConvergentPair(p_cur, q_cur))
    return out


def cf_value(d: DigitSeq) -> RationalFunction:
    """Exact value of a finite digit sequence."""
    n = len(d)
    if n == 0:
        field = d.field
        return RationalFunction(Poly.zero(field), Poly.one(field))
    return convergents(d, n)[-1].as_rational()


def cf_digits_certified(x: LaurentSeries, max_digits: int) -> CertifiedDigits:
    """Digits of x valid for every series agreeing with it through its window.

    Exact inputs (rational provenance) expand fully and certify termination;
    plain truncations expand their window rational and keep digits while the
    certification rule 2 * sum(deg) + 1 <= known_through holds.
    """
    field = x.field
    if x.exact is not None:
        seq = cf_expand_rational(x.exact)
        n = min(len(seq), max_digits)
        return CertifiedDigits(DigitSeq(field, seq.prefix(n)), n, terminated=n == len(seq))
    if not x.in_unit_disc():
        raise OutOfDomain("series is not certified inside the unit disc")
    m = x.known_through
    if m < 1 or x.window_is_zero:
        return CertifiedDigits(DigitSeq(field), 0, terminated=False)
    num_coeffs = [x.coeff(i) for i in range(m, 0, -1)]  # X^(m-i) coefficient = c_i
    num = Poly.from_coeffs(field, num_coeffs)
    den = Poly.monomial(field, m)
    seq = cf_expand_rational(RationalFunction(num, den))
    kept = []
    degsum = 0
    for a in seq:
        degsum += int(a.degree)
        if 2 * degsum + 1 > m or len(kept) >= max_digits:
            break
        kept.append(a)
    return CertifiedDigits(DigitSeq(field, kept), len(kept), terminated=False)


# ---------------------------------------------------------------------------
# Cylinders.

@dataclass(frozen=True)
class Cylinder:
    """The set of unit-disc points whose expansion starts with a fixed prefix."""

    prefix: tuple[Poly, ...]

    def __post_init__(self):
        if not self.prefix:
            raise OutOfDomain("cylinder needs a nonempty prefix")
        for a in self.prefix:
            if a.degree < 1:
                raise OutOfDomain(f"prefix digit {a} has degree < 1")

    @property
    def field(self) -> FieldSpec:
        return self.prefix[0].field

    def degree_sum(self) -> int:
        return sum(int(a.degree) for a in self.prefix)

    def diameter(self) -> Fraction:
        """Exact diameter q^(-2 * sum(deg A_i) - 1)."""
        return Fraction(self.field.q) ** (-2 * self.degree_sum() - 1)

    def center(self) -> RationalFunction:
        """The rational point with exactly this expansion."""
        return cf_value(DigitSeq(self.field, self.prefix))


def cylinder_diameter(c: Cylinder) -> Fraction:
    return c.diameter()


def cylinder_contains(c: Cylinder, x: LaurentSeries) -> bool:
    """Digit-agreement membership; needs enough certified digits to decide."""
    n = len(c.prefix)
    cert = cf_digits_certified(x, n)
    got = cert.digits.prefix(cert.certified_count)
    for i, a in enumerate(got):
        if a != c.prefix[i]:
            return False
    if len(got) >= n:
        return True
    if cert.terminated:
        # exact rational with a strictly shorter expansion: proper prefix only
        return False
    raise PrecisionExhausted(
        f"only {len(got)} digits certified, cylinder needs {n}"
    )


# ---------------------------------------------------------------------------
# Exact distances between digit-defined points.

def divergence_index(a: DigitSeq, b: DigitSeq, horizon: int) -> int:
    """1-based index of the first differing digit; NoDivergence if none."""
    for n in range(1, horizon + 1):
        have_a = a.materialize(n) >= n
        have_b = b.materialize(n) >= n
        if not (have_a and have_b):
            raise NoDivergence(
                f"a sequence ended after {min(a.available, b.available)} digits "
                f"with no divergence"
            )
        if a.digit(n) != b.digit(n):
            return n
    raise NoDivergence(f"sequences agree through horizon {horizon}")


def _distance_exponent(a: DigitSeq, b: DigitSeq, horizon: int) -> int:
    """log_q of the distance between the points with these digit prefixes.

    Certification argument.  Let the sequences share A_1..A_m and split at
    digits B != C.  Extending both by one convergent step from the shared
    state (P, P', Q, Q') gives rationals

        c1 = (B P + P') / (B Q + Q'),   c2 = (C P + P') / (C Q + Q'),

    whose cross-difference numerator collapses by the determinant identity
    P Q' - P' Q = (-1)^m to

        c1 - c2 = +-(B - C) / ((B Q + Q')(C Q + Q')),

    so norm(c1 - c2) = q^(deg(B-C) - deg B - deg C - 2 sum_{i<=m} deg A_i).
    Any completion of either sequence stays within its depth-(m+1) cylinder,
    of diameter q^(-2 sum deg - 2 deg B - 1) < norm(c1 - c2) (the inequality
    reduces to deg(B - C) > deg C - deg B - 1, true for all B != C), so by
    the ultrametric the distance of the completed points equals norm(c1 - c2)
    exactly.  Only the divergent digits and the shared degree sum are needed.
    """
    n = divergence_index(a, b, horizon)
    m = n - 1
    dB, dC = a.digit(n), b.digit(n)
    diff = dB - dC
    shared = a.degree_sum(m)
    return int(diff.degree) - int(dB.degree) - int(dC.degree) - 2 * shared


def point_distance_by_digits(a: DigitSeq, b: DigitSeq, horizon: int = 512) -> Fraction:
    """Exact common distance between any completions of two digit sequences."""
    if a.field != b.field:
        raise OutOfDomain("sequences over different fields")
    return Fraction(a.field.q) ** _distance_exponent(a, b, horizon)


def series_from_digits(d: DigitSeq, through: int) -> LaurentSeries:
    """Certified series prefix of the point with digit sequence d.

    Convergents are taken until the cylinder diameter drops below the
    requested depth; the final convergent's expansion is then exact through
    min(through, 2 * sum deg), since the point sits inside that cylinder.
    """
    field = d.field
    degsum = 0
    n = 0
    while 2 * degsum < through and d.materialize(n + 1) > n:
        n += 1
        degsum += int(d.digit(n).degree)
    if n == 0:
        if d.is_finite and d.available == 0:
            return LaurentSeries.zero(field, through)
        return LaurentSeries(field, through + 1, (), through)
    value = convergents(d, n)[-1].as_rational()
    if d.is_finite and d.available == n:
        return from_rational(value, through)  # the point is this rational
    depth = min(through, 2 * degsum)
    out = from_rational(value, depth)
    return LaurentSeries(field, out.start, out.coeffs, depth)  # drop provenance


# ---------------------------------------------------------------------------
# Digit-sequence files: JSON Lines, header {"q": ...}, one canonical
# polynomial string per line.

def write_digits(fp, d: DigitSeq, count: int) -> int:
    got = d.materialize(count)
    fp.write(json.dumps({"q": d.field.q}) + "\n")
    for a in d.prefix(got):
        fp.write(json.dumps(str(a)) + "\n")
    return got


def read_digits(fp) -> DigitSeq:
    header = json.loads(fp.readline())
    field = FieldSpec(int(header["q"]))
    digits = []
    for line in fp:
        line = line.strip()
        if line:
            digits.append(Poly.from_text(field, json.loads(line)))
    return DigitSeq(field, digits)
