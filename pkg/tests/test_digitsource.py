"""Tests for digit sources: counts, ranks, growth fits, and profiles."""

import io
import math

import pytest

from lscf.digitsource import (
    ExcludeFiniteSource,
    ExplicitSource,
    FullSource,
    IrreducibleSource,
    PredicateSource,
    convergence_profile,
    export_counts,
    fit_growth,
    import_counts,
    make_source,
    zero_constant,
)
from lscf.errors import CapExceeded, DegenerateWindow, NotMember
from lscf.gfpoly import Poly, count_irreducible, enumerate_degree, is_irreducible

from conftest import F2, F3


class TestCounts:
    def test_full(self):
        full = FullSource(F2)
        assert full.count_by_degree(3) == 8
        assert full.cumulative_count(2) == 6  # 2 + 4, = q^(N+1) - q
        for N in range(1, 20):
            assert full.cumulative_count(N) == 2 ** (N + 1) - 2

    def test_irreducible(self):
        irr = IrreducibleSource(F2)
        assert irr.count_by_degree(4) == 3
        assert irr.cumulative_count(4) == 2 + 1 + 2 + 3

    def test_explicit(self):
        src = ExplicitSource(F2, [Poly.x(F2), Poly.monomial(F2, 2)])
        assert src.count_by_degree(2) == 1
        assert src.cumulative_count(0) == 0

    def test_closed_form_matches_enumeration(self):
        for src in (FullSource(F3), IrreducibleSource(F3)):
            for d in range(1, 5):
                assert src.count_by_degree(d) == sum(1 for _ in src.enumerate_degree(d))

    def test_predicate_counts(self):
        src = PredicateSource(F2, "zero-constant", zero_constant, degree_cap=10)
        for d in range(1, 8):
            assert src.count_by_degree(d) == 2 ** (d - 1)
        with pytest.raises(CapExceeded):
            src.count_by_degree(11)


class TestRanks:
    def test_full_rank_example(self):
        assert FullSource(F2).rank_of(Poly.from_text(F2, "X^2+1")) == 4

    def test_irreducible_rank_example(self):
        irr = IrreducibleSource(F2)
        assert irr.rank_of(Poly.from_text(F2, "X^2+X+1")) == 3  # after X, X+1

    def test_first_element_rank_one(self):
        for src in (FullSource(F2), IrreducibleSource(F2),
                    ExplicitSource(F2, [Poly.monomial(F2, 3)])):
            first = next(iter(src.enumerate_degree(
                next(d for d in range(1, 5) if src.count_by_degree(d) > 0))))
            assert src.rank_of(first) == 1

    def test_rank_against_sort_oracle(self):
        from lscf.digitsource import PredicateSource, zero_constant

        for field, max_deg in ((F2, 8), (F3, 8)):
            sources = (
                FullSource(field),
                IrreducibleSource(field),
                PredicateSource(field, "zc", zero_constant, degree_cap=max_deg),
                ExplicitSource(field, [Poly.monomial(field, d) for d in range(1, 6)]),
            )
            for src in sources:
                members = []
                for d in range(1, max_deg + 1):
                    members.extend(src.enumerate_degree(d))
                ordered = sorted(members, key=lambda p: (p.degree, p.value))
                for i, p in enumerate(ordered, start=1):
                    assert src.rank_of(p) == i

    def test_not_member(self):
        with pytest.raises(NotMember):
            IrreducibleSource(F2).rank_of(Poly.from_text(F2, "X^2+1"))

    def test_unrank_round_trip(self):
        for src in (FullSource(F3), IrreducibleSource(F2)):
            for r in range(1, 40):
                assert src.rank_of(src.unrank_in(r)) == r


class TestExcludeFinite:
    def setup_method(self):
        self.removed = [Poly.x(F2), Poly.monomial(F2, 2)]
        self.src = ExcludeFiniteSource(FullSource(F2), self.removed)

    def test_counts(self):
        assert self.src.count_by_degree(1) == 1
        assert self.src.count_by_degree(2) == 3
        assert self.src.cumulative_count(2) == 4

    def test_membership(self):
        assert not self.src.contains(Poly.x(F2))
        assert self.src.contains(Poly.from_text(F2, "X+1"))

    def test_rank_shift(self):
        # X (rank 1) and X^2 (rank 3) removed; X+1 is first, X^2+1 second
        assert self.src.rank_of(Poly.from_text(F2, "X+1")) == 1
        assert self.src.rank_of(Poly.from_text(F2, "X^2+1")) == 2

    def test_unrank_fixed_point(self):
        for r in range(1, 30):
            assert self.src.rank_of(self.src.unrank_in(r)) == r

    def test_enumeration_skips_removed(self):
        assert list(self.src.enumerate_degree(1)) == [Poly.from_text(F2, "X+1")]

    def test_rejects_non_member_exclusion(self):
        with pytest.raises(NotMember):
            ExcludeFiniteSource(IrreducibleSource(F2), [Poly.from_text(F2, "X^2+1")])


class TestGrowthFit:
    def test_full_alphabet(self):
        fit = fit_growth(FullSource(F2), (4, 16))
        assert fit.alpha == 1.0 and fit.beta == 0.0

    def test_full_envelope_invariant(self):
        src = FullSource(F2)
        fit = fit_growth(src, (4, 16))
        for N in range(4, 17):
            ratio = fit.envelope_ratio(src, N)
            assert fit.gamma_lo <= ratio * (1 + 1e-12)
            assert ratio <= fit.gamma_hi * (1 + 1e-12)

    def test_irreducible_window(self):
        fit = fit_growth(IrreducibleSource(F2, degree_cap=20), (8, 20))
        assert fit.alpha == 1.0 and fit.beta == 1.0
        # envelope bracket frozen from the counting oracle
        assert 2.0 <= fit.gamma_lo <= fit.gamma_hi <= 2.4

    def test_degenerate_window(self):
        tiny = ExplicitSource(F2, [Poly.x(F2)])
        with pytest.raises(DegenerateWindow):
            fit_growth(tiny, (1, 10))


class TestConvergenceProfile:
    def test_full_exactly_half(self):
        prof = convergence_profile(FullSource(F2), 64)
        assert all(r == 0.5 for _, r in prof.entries)
        assert prof.tail_max == 0.5

    def test_irreducible_below_half_increasing(self):
        prof = convergence_profile(IrreducibleSource(F2), 64)
        ratios = dict(prof.entries)
        assert ratios[4] == pytest.approx(math.log2(3) / 8)
        assert all(r <= 0.5 for r in ratios.values())
        assert all(ratios[n] < ratios[n + 1] for n in range(2, 64))

    def test_single_degree_set_skips_empty(self):
        src = ExplicitSource(F2, list(enumerate_degree(F2, 3)))
        prof = convergence_profile(src, 6)
        assert [n for n, _ in prof.entries] == [3]


class TestIO:
    def test_count_cache_round_trip(self):
        src = IrreducibleSource(F2)
        buf = io.StringIO()
        export_counts(buf, src, 8)
        buf.seek(0)
        table = import_counts(buf)
        assert table == {d: count_irreducible(F2, d, monic_only=False) for d in range(1, 9)}

    def test_make_source(self):
        assert make_source(F2, "full").kind == "full"
        assert make_source(F2, "irreducible").kind == "irreducible"
        assert make_source(F2, "zero-constant").kind == "predicate:zero-constant"
        src = make_source(F2, "explicit:X,X^2+1")
        assert src.contains(Poly.from_text(F2, "X^2+1"))
