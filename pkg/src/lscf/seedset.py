"""Sparse seed subsets and degree-window machinery.

The sparse index set is a union of factorial blocks,

    P = union over k >= 2 of {k! + i k : i = 0, ..., k! - 1},

whose counting function is pinned between T/(2 mu(T)) and 3T/mu(T), where
mu(T) = k for T in [k!, (k+1)!).  Filtering a digit source by rank membership
in P produces a subset of relative density zero that still leaves members in
every degree window [(2n)^t, (2n+1)^t): counting inside a window reduces to
two evaluations of the P-counting closed form at cumulative source counts, so
astronomically large windows never get enumerated.

Digit selection only ever needs the *next* P member past a rank threshold,
which requires mu and one exact factorial but not the factorial prefix sums;
selection therefore stays fast even where counting a window would not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Sequence

from .errors import InfeasibleWindow, OutOfDomain, SearchExhausted
from .digitsource import DigitSource
from .gfpoly import Poly

import random


def _exp2(x: float) -> float:
    return 2.0**x


# ---------------------------------------------------------------------------
# Factorial-block gauge mu and the index set P.

def _factorial(k: int) -> int:
    return math.factorial(k)


def mu(T: int) -> int:
    """The k with k! <= T < (k+1)!."""

    if T < 1:
        raise OutOfDomain("mu is defined on [1, infinity)")
    if T < 2:
        return 1
    # bracket k via Stirling on log T, then pin down with exact factorials
    log_t = math.log(T)
    lo, hi = 1, 2
    while math.lgamma(hi + 2) <= log_t:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if math.lgamma(mid + 2) <= log_t:
            lo = mid
        else:
            hi = mid
    k = lo
    while _factorial(k + 1) <= T:
        k += 1
    while _factorial(k) > T:
        k -= 1
    return k


def member_P(n: int) -> bool:
    """Membership in the factorial-block index set."""
    if n < 1:
        raise OutOfDomain("indices start at 1")
    k = mu(n)
    return k >= 2 and (n - _factorial(k)) % k == 0


def count_P(T: int) -> int:
    """#(P intersect [1, T]), in closed form.

    Blocks below mu(T) are complete (block j contributes j! elements and ends
    at (j+1)! - j <= mu(T)!); the block at k = mu(T) contributes its members
    k! + i k <= T, clamped to the block size.
    """
    if T < 2:
        return 0
    k = mu(T)
    if k < 2:
        return 0
    total = sum(_factorial(j) for j in range(2, k))
    f = _factorial(k)
    total += min(f, (T - f) // k + 1)
    return total


def next_P(a: int) -> int:
    """The least element of P strictly greater than a."""
    if a < 2:
        return 2
    k = mu(a + 1)
    if k < 2:
        return 2
    f = _factorial(k)
    i = (a + 1 - f + k - 1) // k  # ceil((a+1-f)/k)
    if i <= f - 1:
        return f + i * k
    return _factorial(k + 1)


# ---------------------------------------------------------------------------
# Sparse subsets by rank filtering.

class SparseSubset:
    """The members of a source whose source rank lies in P."""

    def __init__(self, base: DigitSource):
        self.base = base

    def member(self, p: Poly) -> bool:
        if not self.base.contains(p):
            return False
        return member_P(self.base.rank_of(p))

    def count_through(self, N: int) -> int:
        """Count of members with degree <= N: count_P of the cumulative count."""
        total = self.base.cumulative_count(N)
        return count_P(total) if total >= 1 else 0

    def members_through(self, N: int) -> list[Poly]:
        """Explicit listing (enumeration-backed; small N only)."""
        out = []
        for r, p in enumerate(self.base.members_through(N), start=1):
            if member_P(r):
                out.append(p)
        return out


# ---------------------------------------------------------------------------
# Degree windows.

DigitPolicy = Literal["canonical_min"] | tuple[str, int]


@dataclass(frozen=True)
class SeedSpec:
    """Windowed digit selection: digit n comes from degrees [(2n)^t, (2n+1)^t)."""

    source: DigitSource
    t: int
    policy: DigitPolicy = "canonical_min"

    def __post_init__(self):
        if self.t < 3:
            raise OutOfDomain("window exponent t must be >= 3")

    def window(self, n: int) -> tuple[int, int]:
        """Half-open degree window [lo, hi) for position n."""
        if n < 1:
            raise OutOfDomain("window positions start at 1")
        return ((2 * n) ** self.t, (2 * n + 1) ** self.t)


def window_rank_interval(spec: SeedSpec, n: int) -> tuple[int, int]:
    """Source ranks (a, b] covering the n-th degree window."""
    lo, hi = spec.window(n)
    a = spec.source.cumulative_count(lo - 1)
    b = spec.source.cumulative_count(hi - 1)
    return a, b


def window_count(spec: SeedSpec, sparse: SparseSubset, n: int) -> int:
    """#C_n: sparse members in window n, via the P-count closed form."""
    a, b = window_rank_interval(spec, n)
    return count_P(b) - count_P(a)


def choose_t(source: DigitSource, horizon: int, t_cap: int = 8) -> int:
    """Smallest t >= 3 with nonempty windows for all n <= horizon."""
    if horizon < 1:
        raise OutOfDomain("horizon must be >= 1")
    sparse = SparseSubset(source)
    for t in range(3, t_cap + 1):
        spec = SeedSpec(source, t)
        if all(window_count(spec, sparse, n) > 0 for n in range(1, horizon + 1)):
            return t
    raise SearchExhausted(f"no t <= {t_cap} gives nonempty windows through {horizon}")


def seed_digit(spec: SeedSpec, sparse: SparseSubset, n: int) -> Poly:
    """One sparse-subset digit from window n, per the digit policy.

    canonical_min unranks the least P rank past the window's lower edge;
    seeded_random snaps a pseudorandom rank in the interval to the next P
    member (deterministic for a fixed seed).  Both need closed-form
    unranking on the base source.
    """
    a, b = window_rank_interval(spec, n)
    if spec.policy == "canonical_min":
        r = next_P(a)
    else:
        kind, seed = spec.policy
        if kind != "seeded_random":
            raise OutOfDomain(f"unknown digit policy {spec.policy!r}")
        if b <= a:
            raise InfeasibleWindow(f"window {n} is empty")
        pick = random.Random((seed << 32) ^ n).randrange(a + 1, b + 1)
        r = next_P(pick - 1)
        if r > b:  # snapped past the window: wrap to its first member
            r = next_P(a)
    if r > b:
        raise InfeasibleWindow(f"window {n} holds no sparse-subset member")
    return spec.source.unrank_in(r)


def seed_digit_variants(spec: SeedSpec, sparse: SparseSubset, n: int, count: int) -> list[Poly]:
    """The first `count` sparse members of window n in canonical order."""
    a, b = window_rank_interval(spec, n)
    out = []
    r = a
    for _ in range(count):
        r = next_P(r)
        if r > b:
            raise InfeasibleWindow(f"window {n} has fewer than {count} sparse members")
        out.append(spec.source.unrank_in(r))
    return out


def seed_digit_stream(spec: SeedSpec, sparse: SparseSubset) -> Iterator[Poly]:
    n = 1
    while True:
        yield seed_digit(spec, sparse, n)
        n += 1


# ---------------------------------------------------------------------------
# Cylinder measure weights and local-dimension diagnostics.

def measure_weight(counts: Sequence[int], n: int) -> Fraction:
    """Cylinder weight 1 / (#C_1 ... #C_n) of the window measure."""
    if n < 1 or n > len(counts):
        raise OutOfDomain(f"need counts for 1..{n}")
    w = Fraction(1)
    for c in counts[:n]:
        if c <= 0:
            raise InfeasibleWindow("empty window in weight product")
        w /= c
    return w


def local_dim_profile(
    spec: SeedSpec, sparse: SparseSubset, digit_choices: Sequence[Poly], n_max: int
) -> list[float]:
    """Ratios log(#C_1...#C_n) / log(1/diameter) for the chosen digit branch."""
    if n_max > len(digit_choices):
        raise OutOfDomain("need a digit choice per window")
    logs = []
    degsum = 0
    out = []
    log2q = math.log2(spec.source.field.q)
    for n in range(1, n_max + 1):
        c = window_count(spec, sparse, n)
        if c <= 0:
            raise InfeasibleWindow(f"window {n} is empty")
        logs.append(math.log2(c))
        degsum += int(digit_choices[n - 1].degree)
        out.append(sum(logs) / ((2 * degsum + 1) * log2q))
    return out


def fit_window_constants(spec: SeedSpec, counts: Sequence[int]) -> tuple[float, float]:
    """Empirical (c0, rho) with #C_n >= c0 * q^((2n+1)^t / alpha) / n^rho.

    rho comes from a least-squares fit of the log-deficit against log n
    (alpha = 1 for the sources used here); c0 is then the exact envelope
    minimum, so the bound holds on the fitted range by construction.
    """
    q = spec.source.field.q
    deficits = []
    for n, c in enumerate(counts, start=1):
        if c <= 0:
            raise InfeasibleWindow(f"window {n} is empty")
        hi_edge = (2 * n + 1) ** spec.t
        deficits.append(hi_edge * math.log2(q) - math.log2(c))
    xs = [math.log2(n) for n in range(1, len(counts) + 1)]
    n = len(xs)
    sx, sy = sum(xs), sum(deficits)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in zip(xs, deficits))
    denom = n * sxx - sx * sx
    rho = (n * sxy - sx * sy) / denom if denom else 0.0
    rho = max(rho, 0.0)
    log_c0 = min(-d + rho * x for d, x in zip(deficits, xs))
    return _exp2(log_c0), rho
