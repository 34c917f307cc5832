"""Tests for exact GF(q)[X] arithmetic, ranking, and irreducibility."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lscf.errors import CapExceeded, DivisionByZero, FieldMismatch, OutOfDomain
from lscf.gfpoly import (
    FieldSpec,
    Poly,
    _divisors,
    _mobius,
    count_degree_leq,
    count_irreducible,
    enumerate_degree,
    gcd,
    is_irreducible,
    rank,
    unrank,
)

from conftest import (
    F2,
    F3,
    F5,
    FIELDS,
    d_add,
    d_divmod,
    d_from_poly,
    d_mul,
    d_to_poly,
    polys,
    sieve_irreducible,
)


class TestFieldSpec:
    def test_prime_required(self):
        FieldSpec(2)
        FieldSpec(13)
        with pytest.raises(ValueError):
            FieldSpec(4)
        with pytest.raises(ValueError):
            FieldSpec(1)


class TestArithmetic:
    def test_char2_add(self):
        a = Poly.from_text(F2, "X+1")
        assert (a + a).is_zero

    def test_char2_square(self):
        a = Poly.from_text(F2, "X+1")
        assert str(a * a) == "X^2+1"

    def test_add_zero_identity(self):
        rng = random.Random(1)
        for field in FIELDS:
            for _ in range(50):
                p = Poly.from_value(field, rng.randrange(0, field.q**6))
                assert p + Poly.zero(field) == p

    def test_divmod_example(self):
        n = Poly.from_text(F2, "X^3+X+1")
        d = Poly.from_text(F2, "X^2+1")
        quo, rem = divmod(n, d)
        assert str(quo) == "X" and str(rem) == "1"

    def test_self_division(self):
        for field in FIELDS:
            p = Poly.from_text(field, "X^2+1")
            quo, rem = divmod(p, p)
            assert quo == Poly.one(field) and rem.is_zero

    def test_low_degree_dividend(self):
        quo, rem = divmod(Poly.from_text(F2, "X^2+1"), Poly.monomial(F2, 3))
        assert quo.is_zero and str(rem) == "X^2+1"

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            divmod(Poly.one(F2), Poly.zero(F2))

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            Poly.one(F2) + Poly.one(F3)

    def test_divmod_exhaustive_f2_deg6(self):
        # every pair a, b != 0 with deg <= 6: a = q*b + r with deg r < deg b
        all_polys = [Poly.from_value(F2, v) for v in range(0, 128)]
        for a in all_polys:
            for b in all_polys:
                if b.is_zero:
                    continue
                quo, rem = divmod(a, b)
                assert quo * b + rem == a
                assert rem.degree < b.degree

    @given(x=st.integers(0, 3**7), y=st.integers(0, 3**7), z=st.integers(0, 3**7))
    @settings(max_examples=60)
    def test_ring_axioms_f3(self, x, y, z):
        a, b, c = (Poly.from_value(F3, v) for v in (x, y, z))
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a - b == -(b - a)

    @given(data=st.data())
    @settings(max_examples=80)
    def test_mul_against_dict_oracle(self, data):
        field = data.draw(st.sampled_from(FIELDS))
        a = data.draw(polys(field, 0, 7))
        b = data.draw(polys(field, 0, 7))
        expect = d_to_poly(field, d_mul(field.q, d_from_poly(a), d_from_poly(b)))
        assert a * b == expect

    @given(data=st.data())
    @settings(max_examples=80)
    def test_divmod_against_dict_oracle(self, data):
        field = data.draw(st.sampled_from(FIELDS))
        a = data.draw(polys(field, 0, 9))
        b = data.draw(polys(field, 0, 6))
        quo, rem = divmod(a, b)
        oq, orr = d_divmod(field.q, d_from_poly(a), d_from_poly(b))
        assert quo == d_to_poly(field, oq)
        assert rem == d_to_poly(field, orr)


class TestCanonicalRank:
    def test_spec_listing(self):
        expect = ["X", "X+1", "X^2", "X^2+1", "X^2+X", "X^2+X+1"]
        for i, s in enumerate(expect, start=1):
            assert rank(Poly.from_text(F2, s)) == i
            assert unrank(F2, i) == Poly.from_text(F2, s)

    def test_rank_refines_degree(self):
        assert count_degree_leq(F2, 2) == 6 == 2**3 - 2

    def test_exhaustive_sort_oracle(self):
        # ranks agree with an explicit sort for q in {2, 3} through degree 8
        for field, max_deg in ((F2, 8), (F3, 8)):
            everything = [
                Poly.from_value(field, v)
                for v in range(field.q, field.q ** (max_deg + 1))
            ]
            ordered = sorted(everything, key=lambda p: (p.degree, p.value))
            for i, p in enumerate(ordered, start=1):
                assert rank(p) == i
            assert [unrank(field, i) for i in range(1, 50)] == ordered[:49]

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(10_000):
            field = rng.choice(FIELDS)
            v = rng.randrange(field.q, field.q**9)
            p = Poly.from_value(field, v)
            assert unrank(field, rank(p)) == p

    def test_out_of_domain(self):
        with pytest.raises(OutOfDomain):
            rank(Poly.one(F2))
        with pytest.raises(OutOfDomain):
            rank(Poly.zero(F2))
        with pytest.raises(OutOfDomain):
            unrank(F2, 0)


class TestEnumeration:
    def test_degree_one(self):
        assert [str(p) for p in enumerate_degree(F2, 1)] == ["X", "X+1"]
        assert len(list(enumerate_degree(F3, 1))) == 6

    def test_stream_strictly_increasing(self):
        for field in (F2, F3):
            for d in (1, 2, 3):
                ranks = [rank(p) for p in enumerate_degree(field, d)]
                assert ranks == sorted(ranks) and len(set(ranks)) == len(ranks)

    def test_cap(self):
        with pytest.raises(CapExceeded) as err:
            list(enumerate_degree(F2, 40))
        assert str((2 - 1) * 2**40) in str(err.value)


class TestIrreducibility:
    def test_spec_examples(self):
        assert is_irreducible(Poly.from_text(F2, "X^2+X+1"))
        assert not is_irreducible(Poly.from_text(F2, "X^2+1"))  # (X+1)^2
        for field in FIELDS:
            assert is_irreducible(Poly.x(field))

    def test_against_sieve_f2(self):
        for d in range(1, 9):
            for p in enumerate_degree(F2, d):
                assert is_irreducible(p) == sieve_irreducible(F2, p)

    def test_against_sieve_f3(self):
        for d in range(1, 5):
            for p in enumerate_degree(F3, d):
                assert is_irreducible(p) == sieve_irreducible(F3, p)

    def test_counts_match_sieve(self):
        for field, dmax in ((F2, 10), (F3, 6)):
            for d in range(1, dmax + 1):
                by_sieve = sum(1 for p in enumerate_degree(field, d) if is_irreducible(p))
                assert count_irreducible(field, d, monic_only=False) == by_sieve

    def test_monic_counts(self):
        assert count_irreducible(F2, 4, monic_only=True) == 3
        assert count_irreducible(F3, 2, monic_only=True) == 3
        assert count_irreducible(F3, 2, monic_only=False) == 6
        assert count_irreducible(F2, 1, monic_only=True) == 2

    def test_necklace_integrality(self):
        for field in FIELDS:
            for d in range(1, 30):
                total = sum(_mobius(e) * field.q ** (d // e) for e in _divisors(d))
                assert total % d == 0


class TestText:
    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(300):
            field = rng.choice(FIELDS)
            p = Poly.from_value(field, rng.randrange(0, field.q**9))
            assert Poly.from_text(field, str(p)) == p

    def test_spaces_tolerated(self):
        assert str(Poly.from_text(F3, " X^3 + 2X + 1 ")) == "X^3+2X+1"

    def test_zero(self):
        assert str(Poly.zero(F5)) == "0"
        assert Poly.from_text(F5, "0").is_zero

    def test_gcd_monic(self):
        a = Poly.from_text(F3, "2X^2+X")  # 2X(X+2)
        b = Poly.from_text(F3, "2X")
        assert str(gcd(a, b)) == "X"
