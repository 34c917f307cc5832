"""Tests for progression and affine-family detectors."""

import itertools
import random

import pytest

from lscf.digitsource import IrreducibleSource, PredicateSource, zero_constant
from lscf.errors import CapExceeded, OutOfDomain
from lscf.gfpoly import Poly
from lscf.patterns import (
    AffineConfig,
    APWitness,
    find_affine,
    find_ap,
    scan_point_patterns,
)
from lscf.cfcore import DigitSeq

from conftest import F2, F3


def ap_oracle(values, length):
    """Exhaustive tuple enumeration: any length-subset forming a progression."""
    for combo in itertools.combinations(sorted(values), length):
        gaps = {b - a for a, b in zip(combo, combo[1:])}
        if len(gaps) == 1:
            return combo
    return None


def affine_oracle(members, k):
    """Exhaustive scan over F in the set and every nonzero G up to the max degree."""
    if not members:
        return None
    field = next(iter(members)).field
    max_deg = max(int(p.degree) for p in members)
    for f in sorted(members):
        for gv in range(1, field.q ** (max_deg + 1)):
            g = Poly.from_value(field, gv)
            family = {
                f + Poly.from_value(field, av) * g for av in range(field.q**k)
            }
            if family <= members:
                return f, g
    return None


class TestFindAP:
    def test_spec_example(self):
        w = find_ap({1, 3, 5, 9}, 3)
        assert w == APWitness(1, 2, 3)

    def test_powers_of_two_have_none(self):
        assert find_ap({1, 2, 4, 8, 16}, 3) is None

    def test_too_short(self):
        assert find_ap({1, 2}, 3) is None

    def test_length_validation(self):
        with pytest.raises(OutOfDomain):
            find_ap({1, 2, 3}, 2)

    def test_against_oracle_200_random(self):
        rng = random.Random(17)
        for trial in range(200):
            size = rng.randrange(3, 31)
            values = set(rng.sample(range(1, 120), size))
            length = rng.choice((3, 4))
            got = find_ap(values, length)
            expect = ap_oracle(values, length)
            assert (got is None) == (expect is None)
            if got is not None:
                assert set(got.terms()) <= values
                assert len(got.terms()) == length


class TestFindAffine:
    def test_two_element_line(self):
        members = {Poly.x(F2), Poly.from_text(F2, "X+1")}
        config = find_affine(members, 1)
        assert config is not None
        assert config.members() == frozenset(members)

    def test_constructed_recovered(self):
        f = Poly.monomial(F2, 3)
        g = Poly.x(F2)
        built = AffineConfig(f, g, 2)
        got = find_affine(set(built.members()), 2)
        assert got is not None
        assert got.members() == built.members()

    def test_small_set_none(self):
        assert find_affine({Poly.x(F2)}, 2) is None

    def test_zero_g_rejected(self):
        with pytest.raises(OutOfDomain):
            AffineConfig(Poly.x(F2), Poly.zero(F2), 1)

    def test_member_count_exact(self):
        cfg = AffineConfig(Poly.monomial(F3, 2), Poly.from_text(F3, "2X"), 2)
        assert len(cfg.members()) == 9

    def test_cap(self):
        members = {Poly.from_value(F2, v) for v in range(2, 200)}
        with pytest.raises(CapExceeded):
            find_affine(members, 1, cap=100)

    def test_against_oracle_random(self):
        rng = random.Random(23)
        for trial in range(200):
            size = rng.randrange(2, 9)
            members = {
                Poly.from_value(F2, rng.randrange(2, 64)) for _ in range(size)
            }
            k = 1 if trial % 3 else 2
            got = find_affine(members, k)
            expect = affine_oracle(members, k)
            assert (got is None) == (expect is None)
            if got is not None:
                assert got.members() <= members

    def test_constructed_random_recovered(self):
        rng = random.Random(29)
        for _ in range(60):
            field = F2 if rng.random() < 0.7 else F3
            f = Poly.from_value(field, rng.randrange(0, field.q**4))
            g = Poly.from_value(field, rng.randrange(1, field.q**3))
            k = rng.choice((1, 2)) if field is F2 else 1
            built = AffineConfig(f, g, k)
            got = find_affine(set(built.members()), k)
            assert got is not None
            assert got.members() == built.members()


class TestScanPoint:
    def test_pipeline_degrees(self):
        # digits covering all zero-constant polynomials through degree 6
        U = PredicateSource(F2, "zc", zero_constant, degree_cap=8)
        digits = [p for d in range(1, 7) for p in U.enumerate_degree(d)]
        filler = [Poly.from_value(F2, (1 << d) | 1) for d in range(8, 12)]
        seq = DigitSeq(F2, digits + filler)
        report = scan_point_patterns(seq, U, horizon=seq.available, length=3, k=2)
        assert report.ap is not None
        assert set(report.ap.terms()) <= set(range(1, 7))
        assert report.affine is not None
        assert report.affine.members() <= set(digits)

    def test_empty_horizon(self):
        U = IrreducibleSource(F2)
        seq = DigitSeq(F2, [])
        report = scan_point_patterns(seq, U, horizon=0, length=3, k=1)
        assert report.ap is None and report.affine is None

    def test_witnesses_reverified(self):
        U = PredicateSource(F2, "zc", zero_constant, degree_cap=8)
        digits = [p for d in range(1, 5) for p in U.enumerate_degree(d)]
        seq = DigitSeq(F2, digits)
        report = scan_point_patterns(seq, U, horizon=seq.available, length=3, k=1)
        if report.ap is not None:
            degs = {int(d.degree) for d in digits}
            assert set(report.ap.terms()) <= degs
        if report.affine is not None:
            assert report.affine.members() <= set(digits)
