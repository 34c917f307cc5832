"""Finite-horizon estimators for relative upper densities.

Two flavours: polynomial sets counted degree-by-degree (#Q_N(U) / #Q_N(S))
and integer sets counted on initial segments.  Ratios are exact rationals;
the limsup is reported as the running maximum together with the positions
where it is attained (the record points), and nothing is extrapolated past
the horizon.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import InsufficientArgmax, NotMember, OutOfDomain
from .digitsource import DigitSource

#: Members of U sampled for the U subset-of S spot check.
_SPOT_CHECK_SAMPLES = 100


@dataclass(frozen=True)
class DensityProfile:
    """Exact counting ratios over a horizon.

    entries holds (N, ratio) for every N where the denominator count is
    positive; argmax_points are the prefix-record positions, i.e. the N whose
    ratio matches the running maximum so far (candidates for a
    limsup-realizing subsequence).
    """

    horizon: int
    entries: tuple[tuple[int, Fraction], ...]
    running_max: Fraction
    argmax_points: tuple[int, ...]

    def ratio_at(self, N: int) -> Fraction:
        for m, r in self.entries:
            if m == N:
                return r
        raise KeyError(N)

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "ratios": [
                {"N": n, "num": str(r.numerator), "den": str(r.denominator)}
                for n, r in self.entries
            ],
            "argmax": list(self.argmax_points),
        }


def _profile_from_counts(horizon: int, num_at: Callable[[int], int], den_at: Callable[[int], int]) -> DensityProfile:
    entries = []
    records = []
    best: Fraction | None = None
    for N in range(1, horizon + 1):
        den = den_at(N)
        if den == 0:
            continue  # empty denominator: this N is skipped
        ratio = Fraction(num_at(N), den)
        entries.append((N, ratio))
        if best is None or ratio >= best:
            best = ratio
            records.append(N)
    if best is None:
        raise OutOfDomain("denominator set is empty through the whole horizon")
    # keep only records that still match the final maximum of their prefix
    argmax = tuple(n for n in records if _prefix_max(entries, n))
    return DensityProfile(horizon, tuple(entries), best, argmax)


def _prefix_max(entries: list[tuple[int, Fraction]], n: int) -> bool:
    target = None
    best = None
    for m, r in entries:
        if m > n:
            break
        if m == n:
            target = r
        if best is None or r > best:
            best = r
    return target is not None and target == best


def poly_density_profile(U: DigitSource, S: DigitSource, horizon: int) -> DensityProfile:
    """Exact #Q_N(U) / #Q_N(S) for N = 1..horizon.

    U must be a subset of S; full verification can be exponential, so 100
    pseudo-random members of U (fixed seed, deterministic) are spot-checked.
    """
    _spot_check_subset(U, S, horizon)
    return _profile_from_counts(horizon, U.cumulative_count, S.cumulative_count)


def _spot_check_subset(U: DigitSource, S: DigitSource, horizon: int) -> None:
    rng = random.Random(0)
    pool = []
    for d in range(1, horizon + 1):
        try:
            pool.extend(U.enumerate_degree(d))
        except Exception:
            break  # enumeration capped: check what we can
        if len(pool) >= 4 * _SPOT_CHECK_SAMPLES:
            break
    if not pool:
        return
    sample = rng.sample(pool, min(_SPOT_CHECK_SAMPLES, len(pool)))
    for p in sample:
        if not S.contains(p):
            raise NotMember(f"{p} in U but not in S: U is not a subset of S")


def int_density_profile(
    B: Callable[[int], bool], G: Callable[[int], bool], horizon: int
) -> DensityProfile:
    """Exact #(B cap [1,N]) / #(G cap [1,N]) for N = 1..horizon."""
    count_b = 0
    count_g = 0
    entries = []
    records = []
    best: Fraction | None = None
    for N in range(1, horizon + 1):
        in_b = bool(B(N))
        in_g = bool(G(N))
        if in_b and not in_g:
            raise NotMember(f"{N} in B but not in G: B is not a subset of G")
        count_b += in_b
        count_g += in_g
        if count_g == 0:
            continue
        ratio = Fraction(count_b, count_g)
        entries.append((N, ratio))
        if best is None or ratio >= best:
            best = ratio
            records.append(N)
    if best is None:
        raise OutOfDomain("G is empty through the whole horizon")
    argmax = tuple(n for n in records if _prefix_max(entries, n))
    return DensityProfile(horizon, tuple(entries), best, argmax)


def degree_set(s: DigitSource, cap: int) -> tuple[int, ...]:
    """Degrees d <= cap at which the source has members."""
    return tuple(d for d in range(1, cap + 1) if s.count_by_degree(d) > 0)


def choose_argmax_subsequence(profile: DensityProfile, count: int) -> tuple[int, ...]:
    """The last `count` argmax points: strictly increasing N with nondecreasing ratios."""
    if count < 1:
        raise OutOfDomain("count must be >= 1")
    points = profile.argmax_points
    if len(points) < count:
        raise InsufficientArgmax(f"profile has {len(points)} argmax points, need {count}")
    return points[-count:]


# Named integer-set predicates for the CLI.
INT_SETS: dict[str, Callable[[int], bool]] = {
    "all": lambda n: True,
    "even": lambda n: n % 2 == 0,
    "odd": lambda n: n % 2 == 1,
    "square": lambda n: int(n**0.5 + 0.5) ** 2 == n,
}
