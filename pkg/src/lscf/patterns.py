"""Combinatorial pattern detectors: arithmetic progressions in integer sets
and affine families {F + A G : deg A < k} in polynomial sets.

Detection only; every returned witness is re-verifiable member by member.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cfcore import DigitSeq
from .densities import degree_set
from .digitsource import DigitSource
from .errors import CapExceeded, OutOfDomain
from .gfpoly import FieldSpec, Poly

#: Default ceiling on (F, G) candidate pairs scanned by find_affine.
DEFAULT_AFFINE_CAP = 500_000


@dataclass(frozen=True)
class APWitness:
    start: int
    step: int
    length: int

    def terms(self) -> list[int]:
        return [self.start + j * self.step for j in range(self.length)]


@dataclass(frozen=True)
class AffineConfig:
    """The family {F + A G : deg A < k}, with A = 0 included (deg 0 = -inf)."""

    F: Poly
    G: Poly
    k: int

    def __post_init__(self):
        if self.G.is_zero:
            raise OutOfDomain("G must be nonzero")
        if self.k < 1:
            raise OutOfDomain("k must be >= 1")

    def members(self) -> frozenset[Poly]:
        field = self.F.field
        q = field.q
        out = set()
        for v in range(q**self.k):
            a = Poly.from_value(field, v)
            out.add(self.F + a * self.G)
        assert len(out) == q**self.k
        return frozenset(out)


def find_ap(values: set[int], length: int) -> APWitness | None:
    """First arithmetic progression of the given length, scanning starts then
    steps in increasing order; None if the set has none."""
    if length < 3:
        raise OutOfDomain("progression length must be >= 3")
    if len(values) < length:
        return None
    ordered = sorted(values)
    for start in ordered:
        steps = sorted({v - start for v in ordered if v > start})
        for step in steps:
            if start + (length - 1) * step > ordered[-1]:
                break
            if all(start + j * step in values for j in range(2, length)):
                return APWitness(start, step, length)
    return None


def find_affine(
    members: set[Poly], k: int, cap: int = DEFAULT_AFFINE_CAP
) -> AffineConfig | None:
    """First affine family fully inside the set; F from the set, G from the
    nonzero pairwise differences, both scanned in canonical order."""
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    if not members:
        return None
    field = next(iter(members)).field
    if len(members) < field.q**k:
        return None
    ordered = sorted(members)
    diffs = sorted({a - b for a in ordered for b in ordered if a != b})
    if len(ordered) * len(diffs) > cap:
        raise CapExceeded(
            f"{len(ordered)} x {len(diffs)} candidate pairs exceed cap {cap}"
        )
    for f in ordered:
        for g in diffs:
            config = AffineConfig(f, g, k)
            if config.members() <= members:
                return config
    return None


@dataclass(frozen=True)
class PatternReport:
    horizon: int
    ap: APWitness | None
    affine: AffineConfig | None

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "ap": None
            if self.ap is None
            else {"start": self.ap.start, "step": self.ap.step, "length": self.ap.length},
            "affine": None
            if self.affine is None
            else {"F": str(self.affine.F), "G": str(self.affine.G), "k": self.affine.k},
        }


def scan_point_patterns(
    x_digits: DigitSeq,
    U: DigitSource,
    horizon: int,
    length: int,
    k: int,
    degree_cap: int | None = None,
    affine_cap: int = DEFAULT_AFFINE_CAP,
) -> PatternReport:
    """Scan a point's first `horizon` digits for both pattern kinds.

    The affine search runs over the digits lying in U; the progression search
    runs over their degrees restricted to U's populated degrees.  Degrees
    past `degree_cap` (default: U's own cap where it has one) are left out of
    the progression ground set, since populated-degree membership is only
    decidable by counting.
    """
    digits = set(x_digits.prefix(horizon))
    in_u = {d for d in digits if U.contains(d)}
    cap = degree_cap
    if cap is None:
        cap = getattr(U, "degree_cap", None)
    degs = {int(d.degree) for d in in_u}
    if cap is not None:
        degs = {d for d in degs if d <= cap}
    if degs:
        u_degrees = set(degree_set(U, max(degs)))
        degs &= u_degrees
    ap = find_ap(degs, length) if len(degs) >= length else None
    affine = find_affine(in_u, k, cap=affine_cap)
    return PatternReport(horizon=horizon, ap=ap, affine=affine)
