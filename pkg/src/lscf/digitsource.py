"""Digit sources: subsets of the degree >= 1 polynomials with exact counting.

A source knows, capability permitting, its per-degree counts D_d, cumulative
counts #Q_N = sum_{d<=N} D_d, membership, canonical enumeration, and ranking
within itself.  The full alphabet and the irreducibles count in closed form
at any degree; predicate and explicit sources count by enumeration under a
declared degree cap and raise past it rather than silently exploding.

Count tables are append-only memo caches; queries are deterministic and safe
to issue concurrently.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import CapExceeded, DegenerateWindow, NotMember, OutOfDomain
from .gfpoly import (
    FieldSpec,
    Poly,
    count_degree_leq,
    count_irreducible,
    enumerate_degree,
    is_irreducible,
    rank,
    unrank,
)

import numpy as np

#: Default degree cap for enumeration-backed sources.
DEFAULT_DEGREE_CAP = 16


def _exp2(x: float) -> float:
    return 2.0**x


class DigitSource:
    """Base class; subclasses fill in counting/enumeration/ranking."""

    kind: str

    def __init__(self, field: FieldSpec):
        self.field = field
        self._cum_cache: dict[int, int] = {}

    # capabilities
    closed_form_counts = False
    can_unrank = False

    def count_by_degree(self, d: int) -> int:
        raise NotImplementedError

    def cumulative_count(self, N: int) -> int:
        """#Q_N = number of members with degree in [1, N]."""
        if N < 1:
            return 0
        if N not in self._cum_cache:
            self._cum_cache[N] = sum(self.count_by_degree(d) for d in range(1, N + 1))
        return self._cum_cache[N]

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        raise NotImplementedError

    def contains(self, p: Poly) -> bool:
        raise NotImplementedError

    def rank_of(self, p: Poly) -> int:
        """1-based position of p in the source's canonical enumeration."""
        if not self.contains(p):
            raise NotMember(f"{p} is not in source {self.kind}")
        d = int(p.degree)
        below = self.cumulative_count(d - 1)
        within = sum(1 for m in self.enumerate_degree(d) if m < p)
        return below + within + 1

    def unrank_in(self, r: int) -> Poly:
        if r < 1:
            raise OutOfDomain("rank must be >= 1")
        d = 1
        while self.cumulative_count(d) < r:
            d += 1
        offset = r - self.cumulative_count(d - 1)
        for i, p in enumerate(self.enumerate_degree(d), start=1):
            if i == offset:
                return p
        raise NotMember(f"rank {r} beyond source")

    def members_through(self, N: int) -> list[Poly]:
        out: list[Poly] = []
        for d in range(1, N + 1):
            out.extend(self.enumerate_degree(d))
        return out


class FullSource(DigitSource):
    """The whole digit alphabet: every polynomial of degree >= 1."""

    kind = "full"
    closed_form_counts = True
    can_unrank = True

    def count_by_degree(self, d: int) -> int:
        if d < 1:
            raise OutOfDomain("degrees start at 1")
        return (self.field.q - 1) * self.field.q ** d

    def cumulative_count(self, N: int) -> int:
        if N < 1:
            return 0
        return count_degree_leq(self.field, N)

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        return enumerate_degree(self.field, d)

    def contains(self, p: Poly) -> bool:
        return p.field == self.field and p.degree >= 1

    def rank_of(self, p: Poly) -> int:
        if not self.contains(p):
            raise NotMember(f"{p} has degree < 1")
        return rank(p)

    def unrank_in(self, r: int) -> Poly:
        return unrank(self.field, r)


class IrreducibleSource(DigitSource):
    """Irreducible polynomials (all leading coefficients).

    Counts in closed form at any degree via the necklace sum; enumeration,
    ranking, and unranking sieve per degree and are capped.
    """

    kind = "irreducible"
    closed_form_counts = True

    def __init__(self, field: FieldSpec, degree_cap: int = DEFAULT_DEGREE_CAP):
        super().__init__(field)
        self.degree_cap = degree_cap
        self._levels: dict[int, list[Poly]] = {}

    def count_by_degree(self, d: int) -> int:
        if d < 1:
            raise OutOfDomain("degrees start at 1")
        return count_irreducible(self.field, d, monic_only=False)

    def _level(self, d: int) -> list[Poly]:
        if d > self.degree_cap:
            raise CapExceeded(f"irreducible enumeration capped at degree {self.degree_cap}")
        if d not in self._levels:
            self._levels[d] = [p for p in enumerate_degree(self.field, d) if is_irreducible(p)]
        return self._levels[d]

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        return iter(self._level(d))

    def contains(self, p: Poly) -> bool:
        return p.field == self.field and p.degree >= 1 and is_irreducible(p)

    def rank_of(self, p: Poly) -> int:
        if not self.contains(p):
            raise NotMember(f"{p} is not irreducible")
        d = int(p.degree)
        return self.cumulative_count(d - 1) + sorted(self._level(d)).index(p) + 1


class PredicateSource(DigitSource):
    """Members of the full alphabet passing a predicate, capped by degree."""

    def __init__(
        self,
        field: FieldSpec,
        name: str,
        fn: Callable[[Poly], bool],
        degree_cap: int = DEFAULT_DEGREE_CAP,
    ):
        super().__init__(field)
        self.kind = f"predicate:{name}"
        self.name = name
        self.fn = fn
        self.degree_cap = degree_cap
        self._levels: dict[int, list[Poly]] = {}

    def _level(self, d: int) -> list[Poly]:
        if d > self.degree_cap:
            raise CapExceeded(f"predicate source {self.name!r} capped at degree {self.degree_cap}")
        if d not in self._levels:
            self._levels[d] = [p for p in enumerate_degree(self.field, d) if self.fn(p)]
        return self._levels[d]

    def count_by_degree(self, d: int) -> int:
        if d < 1:
            raise OutOfDomain("degrees start at 1")
        return len(self._level(d))

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        return iter(self._level(d))

    def contains(self, p: Poly) -> bool:
        return p.field == self.field and p.degree >= 1 and self.fn(p)


class ExplicitSource(DigitSource):
    """A finite, explicitly listed digit set."""

    kind = "explicit"

    def __init__(self, field: FieldSpec, polys: Iterable[Poly]):
        super().__init__(field)
        members = set()
        for p in polys:
            if p.field != field:
                raise OutOfDomain("member over the wrong field")
            if p.degree < 1:
                raise OutOfDomain(f"member {p} has degree < 1")
            members.add(p)
        self._by_degree: dict[int, list[Poly]] = {}
        for p in sorted(members):
            self._by_degree.setdefault(int(p.degree), []).append(p)
        self.members = frozenset(members)

    def count_by_degree(self, d: int) -> int:
        if d < 1:
            raise OutOfDomain("degrees start at 1")
        return len(self._by_degree.get(d, []))

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        return iter(self._by_degree.get(d, []))

    def contains(self, p: Poly) -> bool:
        return p in self.members


class ExcludeFiniteSource(DigitSource):
    """A base source minus a finite set of its members.

    Ranks shift down by the number of removed elements at or below a given
    position, so closed-form ranking and unranking survive the removal.
    """

    def __init__(self, base: DigitSource, removed: Iterable[Poly]):
        super().__init__(base.field)
        self.base = base
        removed = set(removed)
        for p in removed:
            if not base.contains(p):
                raise NotMember(f"cannot exclude {p}: not in base source")
        self.removed = frozenset(removed)
        self._removed_ranks = sorted(base.rank_of(p) for p in removed)
        self.kind = f"difference:{base.kind}-minus-{len(removed)}"

    @property
    def closed_form_counts(self) -> bool:  # type: ignore[override]
        return self.base.closed_form_counts

    @property
    def can_unrank(self) -> bool:  # type: ignore[override]
        return self.base.can_unrank

    def count_by_degree(self, d: int) -> int:
        hit = sum(1 for p in self.removed if p.degree == d)
        return self.base.count_by_degree(d) - hit

    def cumulative_count(self, N: int) -> int:
        if N < 1:
            return 0
        hit = sum(1 for p in self.removed if p.degree <= N)
        return self.base.cumulative_count(N) - hit

    def enumerate_degree(self, d: int) -> Iterator[Poly]:
        return (p for p in self.base.enumerate_degree(d) if p not in self.removed)

    def contains(self, p: Poly) -> bool:
        return self.base.contains(p) and p not in self.removed

    def rank_of(self, p: Poly) -> int:
        if not self.contains(p):
            raise NotMember(f"{p} not in {self.kind}")
        r = self.base.rank_of(p)
        drop = sum(1 for s in self._removed_ranks if s < r)
        return r - drop

    def unrank_in(self, r: int) -> Poly:
        if r < 1:
            raise OutOfDomain("rank must be >= 1")
        # fixed point of r + #removed-at-or-below; converges in <= len(removed)+1 steps
        base_r = r
        while True:
            lift = r + sum(1 for s in self._removed_ranks if s <= base_r)
            if lift == base_r:
                break
            base_r = lift
        return self.base.unrank_in(base_r)


# ---------------------------------------------------------------------------
# Spec-level operations.

def count_by_degree(s: DigitSource, d: int) -> int:
    return s.count_by_degree(d)


def cumulative_count(s: DigitSource, N: int) -> int:
    return s.cumulative_count(N)


def source_rank(s: DigitSource, p: Poly) -> int:
    return s.rank_of(p)


@dataclass(frozen=True)
class GrowthFit:
    """Envelope constants for #Q_N ~ q^(N/alpha) / N^beta over a window."""

    alpha: float
    beta: float
    gamma_lo: float
    gamma_hi: float
    window: tuple[int, int]
    raw_alpha: float
    raw_beta: float

    def envelope_ratio(self, s: DigitSource, N: int) -> float:
        q = s.field.q
        return _exp2(
            math.log2(s.cumulative_count(N))
            + self.beta * math.log2(N)
            - (N / self.alpha) * math.log2(q)
        )


def _snap(x: float, max_den: int = 4, rel: float = 0.02, abs_tol: float = 0.1) -> float:
    best = x
    best_err = float("inf")
    for den in range(1, max_den + 1):
        cand = round(x * den) / den
        err = abs(cand - x)
        if err <= max(rel * abs(x), abs_tol) and err < best_err:
            best, best_err = cand, err
    return best


def fit_growth(s: DigitSource, window: tuple[int, int]) -> GrowthFit:
    """Least-squares fit of log #Q_N, then exact envelope extraction.

    The fitted exponent is snapped to a nearby small rational (growth
    exponents are structural constants, not empirical floats); the envelope
    bounds are recomputed from the snapped exponents and hold on the window
    by construction, which the caller can and should re-verify.
    """
    n_lo, n_hi = window
    ns = [N for N in range(n_lo, n_hi + 1) if s.cumulative_count(N) > 0]
    if len(ns) < 4:
        raise DegenerateWindow(f"window {window} has {len(ns)} usable points")
    logq = math.log2(s.field.q)
    ys = np.array([math.log2(s.cumulative_count(N)) for N in ns])
    design = np.column_stack([np.array(ns, dtype=float), np.log2(ns), np.ones(len(ns))])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    if not coef[0] > 1e-9:  # no exponential growth: the envelope model is vacuous
        raise DegenerateWindow(f"counts do not grow on window {window}")
    raw_alpha = logq / coef[0]
    raw_beta = -coef[1]
    alpha = _snap(raw_alpha)
    # N and log N are nearly collinear on short windows, which lets the joint
    # fit trade exponent between them; refit beta with alpha pinned.
    resid = ys - np.array(ns, dtype=float) * (logq / alpha)
    design_b = np.column_stack([np.log2(ns), np.ones(len(ns))])
    coef_b, *_ = np.linalg.lstsq(design_b, resid, rcond=None)
    beta = _snap(-coef_b[0])
    ratios = [
        _exp2(math.log2(s.cumulative_count(N)) + beta * math.log2(N) - (N / alpha) * logq)
        for N in ns
    ]
    return GrowthFit(
        alpha=alpha,
        beta=beta,
        gamma_lo=min(ratios),
        gamma_hi=max(ratios),
        window=(n_lo, n_hi),
        raw_alpha=float(raw_alpha),
        raw_beta=float(raw_beta),
    )


@dataclass(frozen=True)
class ConvergenceProfile:
    """Ratios log(D_n) / (2 n log q); degrees with D_n = 0 are skipped."""

    entries: tuple[tuple[int, float], ...]
    tail_max: float

    def ratio(self, n: int) -> float:
        for m, r in self.entries:
            if m == n:
                return r
        raise KeyError(n)


def _exact_power_log(value: int, q: int) -> int | None:
    """e with q**e == value, else None."""
    if value <= 0:
        return None
    if q == 2:
        e = value.bit_length() - 1
        return e if value == 1 << e else None
    e = round(math.log(value, q))
    for cand in (e - 1, e, e + 1):
        if cand >= 0 and q**cand == value:
            return cand
    return None


def convergence_profile(s: DigitSource, n_max: int) -> ConvergenceProfile:
    """Per-degree digit-count ratios whose limsup bounds restricted-digit dimension."""
    if n_max < 1:
        raise OutOfDomain("n_max must be >= 1")
    q = s.field.q
    entries = []
    for n in range(1, n_max + 1):
        d_n = s.count_by_degree(n)
        if d_n <= 0:
            continue
        e = _exact_power_log(d_n, q)
        if e is not None:
            r = e / (2 * n)
        else:
            r = math.log2(d_n) / (2 * n * math.log2(q))
        entries.append((n, r))
    if not entries:
        return ConvergenceProfile((), 0.0)
    half = [r for n, r in entries if n > n_max // 2]
    tail = max(half) if half else entries[-1][1]
    return ConvergenceProfile(tuple(entries), tail)


# ---------------------------------------------------------------------------
# Count-table cache files.

def export_counts(fp, s: DigitSource, max_d: int) -> None:
    payload = {
        "q": s.field.q,
        "kind": s.kind,
        "counts": {str(d): str(s.count_by_degree(d)) for d in range(1, max_d + 1)},
    }
    json.dump(payload, fp, sort_keys=True)
    fp.write("\n")


def import_counts(fp) -> dict[int, int]:
    payload = json.load(fp)
    return {int(d): int(c) for d, c in payload["counts"].items()}


# ---------------------------------------------------------------------------
# Named predicate registry (shared with the CLI).

def zero_constant(p: Poly) -> bool:
    return p.constant_term == 0


def monic(p: Poly) -> bool:
    return p.is_monic


PREDICATES: dict[str, Callable[[Poly], bool]] = {
    "zero-constant": zero_constant,
    "monic": monic,
}


def make_source(field: FieldSpec, spec: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> DigitSource:
    """Build a source from a CLI-style spec string."""
    if spec == "full":
        return FullSource(field)
    if spec == "irreducible":
        return IrreducibleSource(field, degree_cap=degree_cap)
    if spec in PREDICATES:
        return PredicateSource(field, spec, PREDICATES[spec], degree_cap=degree_cap)
    if spec.startswith("explicit:"):
        polys = [Poly.from_text(field, t) for t in spec[len("explicit:"):].split(",")]
        return ExplicitSource(field, polys)
    raise OutOfDomain(f"unknown source spec {spec!r}")
