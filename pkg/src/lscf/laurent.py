"""Truncated formal Laurent series in 1/X with certified precision.

A series sum_{i >= start} c_i X^(-i) is stored densely over a finite window
[start, known_through]; every coefficient inside the window is exact and
nothing is claimed beyond it.  The uncertainty radius is therefore
q^-(known_through + 1).  Arithmetic propagates a sound (possibly
conservative) known_through:

    add/sub:   min of the operands' windows,
    multiply:  min(m_x + v_y, m_y + v_x) where v is the first stored index,
    invert:    m - 2 v, since 1/x - 1/x' = (x' - x)/(x x').

Series produced from an exact rational function carry that rational along,
which lets downstream code certify terminating expansions and take exact
differences; all other series are opaque truncations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, FieldMismatch, OutOfDomain, PrecisionExhausted
from .gfpoly import FieldSpec, Poly, gcd


@dataclass(frozen=True)
class RationalFunction:
    """Quotient of polynomials, reduced and with monic denominator."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if self.den.field != self.num.field:
            raise FieldMismatch("numerator and denominator over different fields")
        if self.den.is_zero:
            raise DivisionByZero("zero denominator")
        num, den = self.num, self.den
        if num.is_zero:
            num, den = Poly.zero(num.field), Poly.one(num.field)
        else:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading_coeff
            if lead != 1:
                inv = pow(lead, -1, den.field.q)
                num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def degree(self):
        """deg num - deg den; -inf for zero."""
        return self.num.degree - self.den.degree if not self.is_zero else float("-inf")

    def norm(self) -> Fraction:
        """The absolute value q^degree, 0 for the zero function."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.field.q) ** (int(self.num.degree) - int(self.den.degree))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero:
            raise DivisionByZero("reciprocal of zero")
        return RationalFunction(self.den, self.num)

    def __str__(self) -> str:
        return f"({self.num})/({self.den})"


class LaurentSeries:
    """A certified truncation of an element of GF(q)((1/X))."""

    __slots__ = ("field", "start", "coeffs", "known_through", "exact")

    def __init__(
        self,
        field: FieldSpec,
        start: int,
        coeffs,
        known_through: int | None = None,
        exact: RationalFunction | None = None,
    ):
        coeffs = [c % field.q for c in coeffs]
        if known_through is None:
            known_through = start + len(coeffs) - 1
        if start + len(coeffs) - 1 > known_through:
            raise ValueError("coefficients extend past known_through")
        # normalize: pad to the full window, then strip leading zeros
        coeffs = coeffs + [0] * (known_through - start + 1 - len(coeffs))
        nz = 0
        while nz < len(coeffs) and coeffs[nz] == 0:
            nz += 1
        start += nz
        coeffs = coeffs[nz:]
        self.field = field
        self.start = start
        self.coeffs = tuple(coeffs)
        self.known_through = known_through
        self.exact = exact

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec, known_through: int) -> "LaurentSeries":
        one = Poly.one(field)
        return cls(field, known_through + 1, (), known_through,
                   exact=RationalFunction(Poly.zero(field), one))

    @classmethod
    def from_poly(cls, p: Poly, known_through: int = 0) -> "LaurentSeries":
        r = RationalFunction(p, Poly.one(p.field))
        return from_rational(r, max(known_through, 0))

    # -- queries -------------------------------------------------------------

    @property
    def lead_exp(self) -> int:
        """Largest power of X with a known coefficient."""
        return -self.start

    @property
    def window_is_zero(self) -> bool:
        return not self.coeffs

    def valuation_floor(self) -> int:
        """Index of the first known nonzero coefficient, else known_through + 1."""
        return self.start if self.coeffs else self.known_through + 1

    def coeff(self, i: int) -> int:
        """Coefficient of X^(-i); raises past the certified window."""
        if i > self.known_through:
            if self.exact is not None:
                return self.refine(i).coeff(i)
            raise PrecisionExhausted(f"coefficient at index {i} is not certified")
        if i < self.start:
            return 0
        return self.coeffs[i - self.start]

    def refine(self, through: int) -> "LaurentSeries":
        """Recompute a deeper window; only possible with exact provenance."""
        if through <= self.known_through:
            return self
        if self.exact is None:
            raise PrecisionExhausted("cannot deepen a plain truncation")
        return from_rational(self.exact, through)

    def in_unit_disc(self) -> bool:
        """Certified norm < 1 (every known coefficient sits at index >= 1)."""
        if self.exact is not None:
            return self.exact.is_zero or self.exact.degree() < 0
        return self.start >= 1

    # -- textual form --------------------------------------------------------

    def to_text(self) -> str:
        return (
            f"deg:{-self.start};coeffs:{','.join(str(c) for c in self.coeffs)};"
            f"through:{self.known_through}"
        )

    @classmethod
    def from_text(cls, field: FieldSpec, s: str) -> "LaurentSeries":
        parts = dict(item.split(":", 1) for item in s.strip().split(";"))
        start = -int(parts["deg"])
        coeffs = [int(c) for c in parts["coeffs"].split(",") if c != ""]
        return cls(field, start, coeffs, known_through=int(parts["through"]))

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentSeries(GF({self.field.q}), {self.to_text()})"

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other: "LaurentSeries") -> None:
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected LaurentSeries, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"GF({self.field.q}) vs GF({other.field.q})")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self._addsub(other, +1)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self._addsub(other, -1)

    def _addsub(self, other: "LaurentSeries", sign: int) -> "LaurentSeries":
        self._coerce(other)
        through = min(self.known_through, other.known_through)
        start = min(self.valuation_floor(), other.valuation_floor(), through + 1)
        coeffs = [
            (self.coeff(i) + sign * other.coeff(i)) % self.field.q
            for i in range(start, through + 1)
        ]
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact + other.exact if sign > 0 else self.exact - other.exact
        return LaurentSeries(self.field, start, coeffs, through, exact=exact)

    def __neg__(self) -> "LaurentSeries":
        exact = None
        if self.exact is not None:
            exact = RationalFunction(-self.exact.num, self.exact.den)
        return LaurentSeries(
            self.field, self.start, [(-c) % self.field.q for c in self.coeffs],
            self.known_through, exact=exact,
        )

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._coerce(other)
        vx, vy = self.valuation_floor(), other.valuation_floor()
        through = min(self.known_through + vy, other.known_through + vx)
        start = vx + vy
        coeffs = []
        for j in range(start, through + 1):
            s = 0
            lo = max(vx, j - other.known_through)
            hi = min(self.known_through, j - vy)
            for a in range(lo, hi + 1):
                s += self.coeff(a) * other.coeff(j - a)
            coeffs.append(s % self.field.q)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact * other.exact
        return LaurentSeries(self.field, start, coeffs, through, exact=exact)


# ---------------------------------------------------------------------------
# Operations.

def from_rational(r: RationalFunction, want_through: int) -> LaurentSeries:
    """Expand a rational function at infinity, exactly through want_through."""
    field = r.field
    ipart, rem = divmod(r.num, r.den)
    window: dict[int, int] = {}
    lowest = 1
    for e, c in ipart.terms():
        window[-e] = c
        lowest = min(lowest, -e)
    run = rem
    for i in range(1, want_through + 1):
        run = run.shift(1)
        quo, run = divmod(run, r.den)
        assert quo.degree <= 0
        if quo.constant_term:
            window[i] = quo.constant_term
    start = min(lowest, want_through + 1)
    coeffs = [window.get(i, 0) for i in range(start, want_through + 1)]
    return LaurentSeries(field, start, coeffs, want_through, exact=r)


def norm(x: LaurentSeries) -> Fraction:
    """The absolute value q^(deg x); 0 only for the exact zero series."""
    if x.coeffs:
        return Fraction(x.field.q) ** (-x.start)
    if x.exact is not None and x.exact.is_zero:
        return Fraction(0)
    raise PrecisionExhausted(
        f"all coefficients vanish through {x.known_through}; leading term uncertified"
    )


def distance(x: LaurentSeries, y: LaurentSeries) -> Fraction:
    """Exact ultrametric distance norm(x - y)."""
    if x is y:
        return Fraction(0)
    return norm(x - y)


def integral_part(x: LaurentSeries) -> Poly:
    """The polynomial part (terms X^(-i) with i <= 0)."""
    if x.known_through < 0 and x.exact is None:
        raise PrecisionExhausted("window does not certify all nonnegative powers")
    if x.exact is not None:
        return x.exact.num // x.exact.den
    coeffs = {}
    for i in range(x.start, 1):
        c = x.coeff(i)
        if c:
            coeffs[-i] = c
    if not coeffs:
        return Poly.zero(x.field)
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return Poly.from_coeffs(x.field, out)


def invert(x: LaurentSeries, want_through: int) -> LaurentSeries:
    """Multiplicative inverse, certified through want_through.

    The residual satisfies norm(x * result - 1) <= q^-(want_through + v + 1)
    where v >= 1 whenever x lies in the open unit disc; for norm(x) >= 1 the
    guarantee is correspondingly weaker but the returned window stays sound.
    """
    if x.exact is not None:
        if x.exact.is_zero:
            raise DivisionByZero("inverse of the zero series")
        return from_rational(x.exact.reciprocal(), want_through)
    if x.window_is_zero:
        raise PrecisionExhausted("cannot certify a nonzero leading coefficient")
    v = x.start
    if want_through > x.known_through - 2 * v:
        raise PrecisionExhausted(
            f"inverse through {want_through} needs the operand through "
            f"{want_through + 2 * v}, have {x.known_through}"
        )
    q = x.field.q
    unit = x.coeffs  # coefficients of the unit part, aligned at index v
    n_terms = want_through + v + 1  # indices -v .. want_through
    inv0 = pow(unit[0], -1, q)
    out = [0] * n_terms
    out[0] = inv0
    for j in range(1, n_terms):
        s = 0
        for i in range(1, min(j, len(unit) - 1) + 1):
            s += unit[i] * out[j - i]
        out[j] = (-s * inv0) % q
    return LaurentSeries(x.field, -v, out, want_through)
