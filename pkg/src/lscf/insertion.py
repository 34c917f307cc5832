"""Insertion plans: splicing dense digit blocks into sparse seed sequences.

A plan fixes, for a base source S and a relatively dense U inside it:

  * one representative of U per degree (u_deg), removed from S up front so
    the degree set of U survives the sparsification;
  * the sparse subset of S~ = S minus those representatives;
  * cut points N_1 < N_2 < ... (argmax points of the finite density profile
    of U minus the sparse subset, relative to S);
  * blocks W_k = members of U outside the sparse subset with degree in
    (N_{k-1}, N_k], sorted by degree;
  * positions M_1 < M_2 < ... after which the blocks are spliced in, chosen
    minimally subject to the two growth inequalities below.

Inequality (a): sum of deg over W_k is at most eps_k * sum of (2i)^t for i in
(M_{k-1}, M_k].  Inequality (b): for every n >= M_k,
sum_{i<=n+1} (2i+1)^t <= (1 + eps_k) * sum_{i<=n} (2i)^t; (b) is an infinite
condition and is certified by a monotone analytic threshold (see
verify_gap_threshold) rather than sampling.

Splicing the same blocks at the same positions into every branch of the
windowed seed family keeps digits pairwise distinct (blocks avoid the sparse
subset, windows are disjoint), so every emitted point has pairwise-distinct
digits inside S while its digit set contains every W block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cfcore import DigitSeq, divergence_index, _distance_exponent
from .densities import DensityProfile, choose_argmax_subsequence, poly_density_profile
from .digitsource import (
    DigitSource,
    ExcludeFiniteSource,
    ExplicitSource,
    FullSource,
    IrreducibleSource,
    PredicateSource,
    make_source,
)
from .errors import CapExceeded, OutOfDomain, PlanViolation
from .gfpoly import FieldSpec, Poly
from .seedset import (
    SeedSpec,
    SparseSubset,
    choose_t,
    seed_digit_stream,
    seed_digit_variants,
)


def build_u_deg(U: DigitSource, cap: int) -> dict[int, Poly]:
    """The canonical-minimum member of U at each populated degree <= cap."""
    out: dict[int, Poly] = {}
    for d in range(1, cap + 1):
        first = next(iter(U.enumerate_degree(d)), None)
        if first is not None:
            out[d] = first
    return out


def choose_nk(profile: DensityProfile, count: int) -> tuple[int, ...]:
    """The last `count` argmax points of the profile."""
    return choose_argmax_subsequence(profile, count)


def build_wk(
    U: DigitSource, sparse: SparseSubset, n_prev: int, n_k: int
) -> tuple[Poly, ...]:
    """Members of U outside the sparse subset with degree in (n_prev, n_k].

    Exactly the difference of the two cumulative slices of U minus the sparse
    subset, sorted by nondecreasing degree then canonical order.
    """
    if n_k <= n_prev:
        raise OutOfDomain("cut points must increase")
    out = []
    for d in range(n_prev + 1, n_k + 1):
        for u in U.enumerate_degree(d):
            if not sparse.member(u):
                out.append(u)
    return tuple(sorted(out))


def sum_even_powers(t: int, lo: int, hi: int) -> int:
    """sum of (2i)^t for i in [lo, hi]."""
    return sum((2 * i) ** t for i in range(lo, hi + 1))


def sum_odd_powers(t: int, hi: int) -> int:
    """sum of (2i+1)^t for i in [1, hi]."""
    return sum((2 * i + 1) ** t for i in range(1, hi + 1))


def verify_gap_threshold(t: int, eps: Fraction) -> int:
    """A certified n* past which the odd/even cumulative-power gap stays small.

    Bounding termwise, (2i+1)^t - (2i)^t <= t (2i+1)^(t-1) <= t (2n+1)^(t-1)
    and sum_{i<=n} (2i)^t >= 2^t n^(t+1) / (t+1) (integral comparison), so

        t ((2n+1)/n)^(t-1) + ((2n+3)/n)^t  <=  eps 2^t n / (t+1)        (*)

    is sufficient for the target inequality at n.  The left side of (*) is
    decreasing in n and the right side increasing, so the minimal n
    satisfying (*) works for every larger n as well.  The returned threshold
    is additionally cross-checked by direct evaluation on [n*, n* + 1000].
    """
    if t < 3:
        raise OutOfDomain("t must be >= 3")
    eps = Fraction(eps)
    if eps <= 0:
        raise OutOfDomain("eps must be positive")
    n = 1
    while True:
        lhs = t * Fraction(2 * n + 1, n) ** (t - 1) + Fraction(2 * n + 3, n) ** t
        rhs = eps * (2**t) * n / (t + 1)
        if lhs <= rhs:
            break
        n += 1
    nstar = n
    even = sum_even_powers(t, 1, nstar)
    odd = sum_odd_powers(t, nstar + 1)
    for m in range(nstar, nstar + 1001):
        if odd > (1 + eps) * even:
            raise PlanViolation(f"direct check failed at n={m} for t={t}, eps={eps}")
        even += (2 * (m + 1)) ** t
        odd += (2 * (m + 2) + 1) ** t
    return nstar


def choose_mk(prev_m: int, w_degree_sum: int, eps: Fraction, t: int, nstar: int) -> int:
    """Minimal M > prev_m meeting inequality (a) and the certified threshold."""
    m = max(prev_m + 1, nstar)
    s = sum_even_powers(t, prev_m + 1, m)
    while w_degree_sum > eps * s:
        m += 1
        s += (2 * m) ** t
    return m


@dataclass(frozen=True)
class InsertionPlan:
    """All data needed to splice U blocks into windowed seed sequences."""

    S: DigitSource
    U: DigitSource
    t: int
    eps: tuple[Fraction, ...]
    N: tuple[int, ...]
    M: tuple[int, ...]
    W: tuple[tuple[Poly, ...], ...]
    u_deg: Mapping[int, Poly]
    thresholds: tuple[int, ...]
    horizon: int

    @property
    def k_count(self) -> int:
        return len(self.N)

    def base_tilde(self) -> ExcludeFiniteSource:
        return ExcludeFiniteSource(self.S, self.u_deg.values())

    def sparse(self) -> SparseSubset:
        return SparseSubset(self.base_tilde())

    def seed_spec(self, policy="canonical_min") -> SeedSpec:
        return SeedSpec(self.base_tilde(), self.t, policy)

    def blocks_at(self) -> dict[int, tuple[Poly, ...]]:
        return {m: w for m, w in zip(self.M, self.W)}

    def tier_of(self, depth: int) -> int:
        """Largest k with M_k <= depth (0 if depth < M_1)."""
        k = 0
        for i, m in enumerate(self.M, start=1):
            if m <= depth:
                k = i
        return k


def build_plan(
    S: DigitSource,
    U: DigitSource,
    horizon: int,
    count: int = 3,
    t: int | None = None,
    eps: Sequence[Fraction] | None = None,
    t_horizon: int = 6,
) -> InsertionPlan:
    """Construct and validate a full insertion plan."""
    u_deg = build_u_deg(U, horizon)
    s_tilde = ExcludeFiniteSource(S, u_deg.values())
    sparse = SparseSubset(s_tilde)
    if t is None:
        t = choose_t(s_tilde, t_horizon)
    u_free = [u for u in U.members_through(horizon) if not sparse.member(u)]
    profile = poly_density_profile(ExplicitSource(S.field, u_free), S, horizon)
    cuts = choose_nk(profile, count)
    if eps is None:
        eps = tuple(Fraction(1, k + 1) for k in range(1, count + 1))
    else:
        eps = tuple(Fraction(e) for e in eps)
    if len(eps) != count:
        raise OutOfDomain(f"need {count} eps values, got {len(eps)}")
    blocks: list[tuple[Poly, ...]] = []
    prev_n = 0
    for n_k in cuts:
        blocks.append(build_wk(U, sparse, prev_n, n_k))
        prev_n = n_k
    positions: list[int] = []
    thresholds: list[int] = []
    prev_m = 0
    for k in range(count):
        nstar = verify_gap_threshold(t, eps[k])
        thresholds.append(nstar)
        w_sum = sum(int(w.degree) for w in blocks[k])
        prev_m = choose_mk(prev_m, w_sum, eps[k], t, nstar)
        positions.append(prev_m)
    plan = InsertionPlan(
        S=S,
        U=U,
        t=t,
        eps=eps,
        N=tuple(cuts),
        M=tuple(positions),
        W=tuple(blocks),
        u_deg=dict(sorted(u_deg.items())),
        thresholds=tuple(thresholds),
        horizon=horizon,
    )
    validate_plan(plan)
    return plan


def validate_plan(plan: InsertionPlan) -> None:
    """Re-check every plan inequality and invariant from scratch.

    Raises PlanViolation with the first failure found.
    """
    k_count = plan.k_count
    if not (len(plan.M) == len(plan.W) == len(plan.eps) == k_count):
        raise PlanViolation("component lengths disagree")
    if any(e <= 0 for e in plan.eps) or any(
        a <= b for a, b in zip(plan.eps, plan.eps[1:])
    ):
        raise PlanViolation("eps must be positive and strictly decreasing")
    if any(a >= b for a, b in zip(plan.N, plan.N[1:])) or (plan.N and plan.N[0] < 1):
        raise PlanViolation("cut points must be strictly increasing and >= 1")
    if any(a >= b for a, b in zip(plan.M, plan.M[1:])) or (plan.M and plan.M[0] < 1):
        raise PlanViolation("insert positions must be strictly increasing and >= 1")
    sparse = plan.sparse()
    seen: set[Poly] = set()
    prev_n = 0
    for k in range(k_count):
        block = plan.W[k]
        degs = [int(w.degree) for w in block]
        if degs != sorted(degs):
            raise PlanViolation(f"W_{k + 1} is not sorted by degree")
        for w in block:
            if w in seen:
                raise PlanViolation(f"{w} appears in two blocks")
            seen.add(w)
            if not plan.U.contains(w):
                raise PlanViolation(f"{w} in W_{k + 1} but not in U")
            if sparse.member(w):
                raise PlanViolation(f"{w} in W_{k + 1} is a sparse-subset member")
            if not (prev_n < w.degree <= plan.N[k]):
                raise PlanViolation(
                    f"{w} in W_{k + 1} has degree outside ({prev_n}, {plan.N[k]}]"
                )
        prev_n = plan.N[k]
    prev_m = 0
    for k in range(k_count):
        w_sum = sum(int(w.degree) for w in plan.W[k])
        budget = plan.eps[k] * sum_even_powers(plan.t, prev_m + 1, plan.M[k])
        if plan.W[k] and w_sum > budget:
            raise PlanViolation(
                f"block degree sum {w_sum} exceeds budget {budget} at k={k + 1}"
            )
        nstar = verify_gap_threshold(plan.t, plan.eps[k])
        if plan.M[k] < nstar:
            raise PlanViolation(
                f"M_{k + 1} = {plan.M[k]} below certified threshold {nstar}"
            )
        # direct window check of the cumulative-power inequality
        even = sum_even_powers(plan.t, 1, plan.M[k])
        odd = sum_odd_powers(plan.t, plan.M[k] + 1)
        for n in range(plan.M[k], plan.M[k] + 1001):
            if odd > (1 + plan.eps[k]) * even:
                raise PlanViolation(f"cumulative-power inequality fails at n={n}, k={k + 1}")
            even += (2 * (n + 1)) ** plan.t
            odd += (2 * (n + 2) + 1) ** plan.t
        prev_m = plan.M[k]


# ---------------------------------------------------------------------------
# Splicing and its inverse.

def insert_digits(seed: DigitSeq, plan: InsertionPlan, horizon: int) -> DigitSeq:
    """Interleave the plan's blocks after their seed positions.

    Output digit n runs ..., A_{M_k}, w_1^{(k)}, ..., w_{i(k)}^{(k)},
    A_{M_k + 1}, ...; truncated to `horizon` digits.  Collisions between
    blocks and seed digits cannot occur for plan-conforming seeds but are
    checked anyway, as is pairwise distinctness of the emitted prefix.
    """
    blocks = plan.blocks_at()
    w_all = {w for block in plan.W for w in block}
    out: list[Poly] = []
    n = 0
    while len(out) < horizon and seed.materialize(n + 1) > n:
        n += 1
        a = seed.digit(n)
        if a in w_all:
            raise PlanViolation(f"seed digit {n} collides with an insertion block")
        out.append(a)
        if n in blocks and len(out) < horizon:
            room = horizon - len(out)
            out.extend(blocks[n][:room])
    result = DigitSeq(seed.field, out)
    if not result.pairwise_distinct():
        raise PlanViolation("emitted digits are not pairwise distinct")
    return result


def eliminate(x: DigitSeq, plan: InsertionPlan, horizon: int) -> DigitSeq:
    """Strip the plan's blocks back out; inverse of insert_digits.

    Raises PlanViolation when an expected block digit is missing or wrong; a
    sequence may end cleanly anywhere (truncated insertions are accepted).
    """
    blocks = plan.blocks_at()
    out: list[Poly] = []
    pos = 0
    n = 0
    while len(out) < horizon and x.materialize(pos + 1) > pos:
        pos += 1
        n += 1
        out.append(x.digit(pos))
        if n in blocks:
            for w in blocks[n]:
                if x.materialize(pos + 1) <= pos:
                    return DigitSeq(x.field, out)  # truncated mid-block
                pos += 1
                if x.digit(pos) != w:
                    raise PlanViolation(
                        f"expected block digit {w} at position {pos}, found {x.digit(pos)}"
                    )
    return DigitSeq(x.field, out)


def emit_point(plan: InsertionPlan, horizon: int, policy="canonical_min") -> DigitSeq:
    """Digits of one point of the constructed family, through `horizon`."""
    spec = plan.seed_spec(policy)
    sparse = SparseSubset(spec.source)
    seed = DigitSeq.from_generator(spec.source.field, seed_digit_stream(spec, sparse))
    return insert_digits(seed, plan, horizon)


# ---------------------------------------------------------------------------
# Elimination-map regularity diagnostics.

@dataclass(frozen=True)
class HolderSample:
    depth: int
    tier: int
    eps: Fraction | None
    exponent_inserted: int
    exponent_seed: int
    measured: float
    threshold: float
    ok: bool
    base_digit: str
    variant_digit: str


@dataclass(frozen=True)
class HolderReport:
    tolerance: float
    samples: tuple[HolderSample, ...]
    tier_min: tuple[tuple[int, float], ...]

    @property
    def all_ok(self) -> bool:
        return all(s.ok for s in self.samples)

    def to_json(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "samples": [
                {
                    "depth": s.depth,
                    "tier": s.tier,
                    "eps": None if s.eps is None else {
                        "num": str(s.eps.numerator), "den": str(s.eps.denominator)
                    },
                    "log_q_distance_inserted": str(s.exponent_inserted),
                    "log_q_distance_seed": str(s.exponent_seed),
                    "measured_exponent": s.measured,
                    "threshold": s.threshold,
                    "ok": s.ok,
                    "base_digit": s.base_digit,
                    "variant_digit": s.variant_digit,
                }
                for s in self.samples
            ],
            "tier_min": [{"tier": k, "min_measured": v} for k, v in self.tier_min],
        }


def holder_diagnostic(
    plan: InsertionPlan,
    spec: SeedSpec,
    sparse: SparseSubset,
    depths: Sequence[int],
    variants_per_depth: int = 1,
    tolerance: float = 0.05,
) -> HolderReport:
    """Measured distance-contraction exponents of the elimination map.

    For each depth s, pairs of points are built whose seed sequences diverge
    exactly at window s + 1 (the canonical minimum against the next sparse
    members of the window).  The measured exponent compares the exact
    distance of the stripped pair against that of the spliced pair; for a
    depth in tier k (the k with M_k <= s < M_{k+1}) it must stay above
    1 / (1 + 2 eps_k) minus the tolerance.
    """
    if not depths:
        raise OutOfDomain("need at least one depth")
    max_depth = max(depths)
    prefix = []
    gen = seed_digit_stream(spec, sparse)
    for _ in range(max_depth + 1):
        prefix.append(next(gen))
    block_sizes = plan.blocks_at()
    samples: list[HolderSample] = []
    for s in sorted(depths):
        variants = seed_digit_variants(spec, sparse, s + 1, variants_per_depth + 1)
        base = variants[0]
        tier = plan.tier_of(s)
        if tier == 0:
            eps_k = None
            threshold = 1.0
        else:
            eps_k = plan.eps[tier - 1]
            threshold = float(1 / (1 + 2 * eps_k))
        inserted_shift = sum(len(block_sizes[m]) for m in plan.M if m <= s)
        pos = s + 1 + inserted_shift
        y1 = DigitSeq(spec.source.field, prefix[: s] + [base])
        for var in variants[1:]:
            y2 = DigitSeq(spec.source.field, prefix[: s] + [var])
            x1 = insert_digits(y1, plan, pos)
            x2 = insert_digits(y2, plan, pos)
            e_seed = _distance_exponent(y1, y2, s + 1)
            e_ins = _distance_exponent(x1, x2, pos)
            measured = e_seed / e_ins
            ok = measured >= threshold - tolerance
            samples.append(
                HolderSample(
                    depth=s,
                    tier=tier,
                    eps=eps_k,
                    exponent_inserted=e_ins,
                    exponent_seed=e_seed,
                    measured=measured,
                    threshold=threshold,
                    ok=ok,
                    base_digit=str(base),
                    variant_digit=str(var),
                )
            )
    tiers = sorted({s.tier for s in samples})
    tier_min = tuple(
        (k, min(s.measured for s in samples if s.tier == k)) for k in tiers
    )
    return HolderReport(tolerance=tolerance, samples=tuple(samples), tier_min=tier_min)


# ---------------------------------------------------------------------------
# Plan files.

def plan_to_json(plan: InsertionPlan, s_spec: str, u_spec: str) -> dict:
    return {
        "q": plan.S.field.q,
        "S": s_spec,
        "U": u_spec,
        "t": plan.t,
        "eps": [{"num": str(e.numerator), "den": str(e.denominator)} for e in plan.eps],
        "N": list(plan.N),
        "M": list(plan.M),
        "W": [[str(w) for w in block] for block in plan.W],
        "u_deg": {str(d): str(p) for d, p in plan.u_deg.items()},
        "thresholds": list(plan.thresholds),
        "horizon": plan.horizon,
    }


def plan_from_json(payload: dict) -> InsertionPlan:
    field = FieldSpec(int(payload["q"]))
    S = make_source(field, payload["S"])
    U = make_source(field, payload["U"])
    return InsertionPlan(
        S=S,
        U=U,
        t=int(payload["t"]),
        eps=tuple(Fraction(int(e["num"]), int(e["den"])) for e in payload["eps"]),
        N=tuple(int(n) for n in payload["N"]),
        M=tuple(int(m) for m in payload["M"]),
        W=tuple(
            tuple(Poly.from_text(field, w) for w in block) for block in payload["W"]
        ),
        u_deg={int(d): Poly.from_text(field, p) for d, p in payload["u_deg"].items()},
        thresholds=tuple(int(x) for x in payload["thresholds"]),
        horizon=int(payload["horizon"]),
    )
