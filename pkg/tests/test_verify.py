import itertools

import numpy as np
import pytest

from stci.equations import build_system
from stci.polyring import evaluate, term
from stci.semigroup import CurveSpec, LevelOutOfRangeError, SelectionPolicy, validate_curve
from stci.verify import (
    FAIL,
    PASS,
    SKIPPED,
    SUSPECT,
    BezoutWitness,
    BudgetExceededError,
    FiniteFieldConfig,
    ProjectivePoint,
    brute_force_locus_equality,
    bezout_witness,
    check_base_case,
    check_ideal_membership,
    check_infinity_locus,
    check_substitution_identity,
    curve_points,
    enumerate_projective,
    full_verify,
    point_on_curve,
    projective_point_count,
    vanishing_binomials,
)


def system(exps, **kw):
    return build_system(validate_curve(exps), **kw)


def all_points(n, p):
    return np.concatenate(list(enumerate_projective(n, p)))


def naive_points(n, p):
    """Every nonzero vector scaled to leading coefficient 1, deduplicated."""
    out = set()
    for v in itertools.product(range(p), repeat=n + 1):
        if any(v):
            out.add(ProjectivePoint(v, p).coords)
    return out


class TestEnumeration:
    def test_counts(self):
        assert projective_point_count(3, 5) == 156
        assert len(all_points(3, 5)) == 156
        assert len(np.concatenate(list(enumerate_projective(3, 5, first_chart=1)))) == 31
        assert projective_point_count(4, 7) == 2801

    @pytest.mark.parametrize("n,p", [(2, 3), (3, 5), (2, 7)])
    def test_matches_naive(self, n, p):
        rows = [tuple(int(x) for x in r) for r in all_points(n, p)]
        assert len(rows) == len(set(rows))
        assert set(rows) == naive_points(n, p)
        assert rows == sorted(rows, key=lambda r: (next(i for i, x in enumerate(r) if x),) + r)

    def test_chunk_size_irrelevant(self):
        a = all_points(3, 5)
        b = np.concatenate(list(enumerate_projective(3, 5, chunk_size=7)))
        assert (a == b).all()


class TestPointOnCurve:
    curve = CurveSpec((1, 2, 3))

    def test_infinity_and_origin(self):
        w = bezout_witness(self.curve)
        assert point_on_curve((0, 0, 0, 1), self.curve, w, 5)
        assert point_on_curve((1, 0, 0, 0), self.curve, w, 5)
        assert not point_on_curve((0, 1, 0, 0), self.curve, w, 5)

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_parametrization(self, p):
        w = bezout_witness(self.curve)
        for t in range(p):
            assert point_on_curve((1, t, t * t, t ** 3), self.curve, w, p)
        # scaling does not matter
        assert point_on_curve((3, 3 * 2, 3 * 4, 3 * 8), self.curve, w, p)

    def test_off_curve_exhaustive(self):
        assert not any((t % 5, t * t % 5, t ** 3 % 5) == (1, 2, 1) for t in range(5))
        assert not point_on_curve((1, 1, 2, 1), self.curve, bezout_witness(self.curve), 5)

    @pytest.mark.parametrize("exps", [(1, 2, 3), (2, 3, 7), (2, 3, 8), (1, 2, 3, 5)])
    @pytest.mark.parametrize("p", [5, 7])
    def test_witness_independent(self, exps, p):
        curve = CurveSpec(exps)
        w1 = bezout_witness(curve)
        m1, m2 = exps[:2]
        shifted = list(w1.coeffs)
        shifted[0] += m2
        shifted[1] -= m1
        w2 = BezoutWitness(tuple(shifted))
        assert w2.check(curve) and w2 != w1
        for row in all_points(curve.n, p):
            pt = tuple(int(x) for x in row)
            assert point_on_curve(pt, curve, w1, p) == point_on_curve(pt, curve, w2, p) == (pt in curve_points(curve, p))

    def test_projective_point_normalizes(self):
        assert ProjectivePoint((0, 3, 1), 5).coords == (0, 1, 2)
        with pytest.raises(ValueError):
            ProjectivePoint((0, 5, 10), 5)


class TestMembership:
    def test_f1_passes(self):
        v = check_ideal_membership(term(4, x1=2) - term(4, x0=1, x2=1), CurveSpec((1, 2, 3)))
        assert v.passed and v.details["oracles_agree"]
        # the oracle behind it
        assert evaluate(term(4, x1=2) - term(4, x0=1, x2=1), (27, 18, 12, 8)) == 0

    def test_linear_fails(self):
        v = check_ideal_membership(term(4, x1=1) - term(4, x0=1), CurveSpec((1, 2, 3)))
        assert v.status == FAIL
        assert v.details["graded_pieces"] == 2 and len(v.details["nonzero_sums"]) == 2
        assert v.details["oracles_agree"]

    def test_f3_passes(self):
        s = system((1, 2, 3, 4))
        assert check_ideal_membership(s.polys[2], s.curve).passed

    def test_deterministic_points(self):
        F = term(4, x1=1) - term(4, x0=1)
        a = check_ideal_membership(F, CurveSpec((1, 2, 3)))
        b = check_ideal_membership(F, CurveSpec((1, 2, 3)))
        assert a.details == b.details


class TestSubstitution:
    def test_pass(self):
        s = system((1, 2, 3, 5))
        for level in (3, 4):
            assert check_substitution_identity(s.level_poly(level), s.curve, level).passed

    def test_corrupted(self):
        s = system((1, 2, 3))
        bad = s.polys[1] + term(4, -1, x1=1, x2=1, x3=1)
        v = check_substitution_identity(bad, s.curve, 3)
        assert v.status == FAIL and v.details["difference"]

    def test_level_range(self):
        s = system((1, 2, 3))
        with pytest.raises(LevelOutOfRangeError):
            check_substitution_identity(s.polys[1], s.curve, 4)

    def test_foreign_variable(self):
        s = system((1, 2, 3, 5))
        v = check_substitution_identity(s.polys[2], s.curve, 3)
        assert v.status == FAIL and "error" in v.details


class TestBaseCase:
    @pytest.mark.parametrize("exps", [(1, 2, 3), (2, 3)])
    def test_pass(self, exps):
        curve = CurveSpec(exps)
        assert check_base_case(system(exps).polys[0], curve).passed

    def test_gcd_flag(self):
        curve = CurveSpec((2, 4, 5))
        F1 = term(4, x1=4) - term(4, x0=2, x2=2)
        v = check_base_case(F1, curve)
        assert v.status == FAIL and v.details["identity_holds"] and not v.details["bezout_available"]
        assert "Bezout" in v.details["note"]


class TestInfinity:
    @pytest.mark.parametrize("exps,p", [((1, 2, 3), 5), ((1, 2, 3, 4), 7), ((1, 2), 5)])
    def test_pass(self, exps, p):
        v = check_infinity_locus(system(exps), p)
        assert v.passed and v.details["solutions"] == 1

    def test_drop_equation(self):
        s = system((1, 2, 3))
        v = check_infinity_locus(s.replace(1, s.polys[0]), 5)
        assert v.status == FAIL and v.details["unexpected"]


class TestLocus:
    def test_rational_normal_f5(self):
        s = system((1, 2, 3))
        v = brute_force_locus_equality(s, 5)
        assert v.passed and v.details["zeros"] == 6 == v.details["curve_points"]
        assert v.details["witness_matches_parametrization"] and v.counterexample is None
        # independent count: naive enumeration and exact evaluation
        zeros = [q for q in naive_points(3, 5) if all(evaluate(F, q, 5) == 0 for F in s.polys)]
        assert len(zeros) == 6 and set(zeros) == curve_points(s.curve, 5)

    def test_p4_f7(self):
        v = brute_force_locus_equality(system((1, 2, 3, 5)), 7)
        assert v.passed and v.details["points"] == 2801 and v.details["zeros"] == 8

    def test_mutation_counterexample(self):
        s = system((1, 2, 3))
        bad = s.replace(1, term(4, x2=3))
        v = brute_force_locus_equality(bad, 5)
        assert v.status == FAIL
        assert v.counterexample is not None and v.details["counterexample"] == list(v.counterexample)
        # x2^3 vanishes at (1,0,0,1) and misses most curve points
        assert not v.details["curve_in_zeros"] and not v.details["zeros_in_curve"]
        w = bezout_witness(s.curve)
        assert all(evaluate(F, v.counterexample, 5) == 0 for F in bad.polys)
        assert not point_on_curve(v.counterexample, s.curve, w, 5)

    def test_counterexample_independent_of_chunking(self):
        bad = system((1, 2, 3, 5))
        bad = bad.replace(2, term(5, x3=5))
        a = brute_force_locus_equality(bad, 7)
        b = brute_force_locus_equality(bad, 7, chunk_size=13)
        assert a.counterexample == b.counterexample and a.details == b.details

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            brute_force_locus_equality(system((1, 2, 3, 5)), 7, budget=1000)

    def test_vanishing_binomials(self):
        # C(5,k) vanishes mod 5 for 0 < k < 5
        s = system((1, 2, 5, 8))
        assert vanishing_binomials(s, 5) == [{"level": 4, "k": k} for k in range(1, 5)]
        assert vanishing_binomials(s, 7) == []

    def test_vanishing_binomials_alone_do_not_fail(self):
        v = brute_force_locus_equality(system((1, 2, 5, 8)), 5)
        assert v.status == PASS

    def test_suspect_status(self):
        s = system((1, 2, 5, 8))
        bad = s.replace(2, term(5, x3=8))
        assert brute_force_locus_equality(bad, 5).status == SUSPECT
        assert brute_force_locus_equality(bad, 7).status == FAIL


class TestFullVerify:
    def test_rational_normal(self):
        r = full_verify(system((1, 2, 3)), FiniteFieldConfig(primes=(5, 7, 11)))
        assert r.passed and r.status == PASS and r.failures() == []

    def test_p4(self):
        assert full_verify(system((1, 2, 3, 4)), FiniteFieldConfig(primes=(5, 7))).passed

    def test_corrupted(self):
        s = system((1, 2, 3))
        r = full_verify(s.replace(1, s.polys[1] + term(4, 1, x1=3)), FiniteFieldConfig(primes=(5,)))
        assert not r.passed and r.status == FAIL
        names = {v.name for v in r.failures()}
        assert "membership[F2]" in names and "substitution[3]" in names

    def test_budget_skip(self):
        r = full_verify(system((1, 2, 3, 5)), FiniteFieldConfig(primes=(7,), budget=100))
        assert r.passed and r.locus[0].status == SKIPPED
        assert any("skipped" in n for n in r.notices)

    def test_direct_system(self):
        s = system((1, 3, 5, 12), policy=SelectionPolicy.ALLOW_DIRECT)
        r = full_verify(s, FiniteFieldConfig(primes=(5, 7)))
        assert r.passed and r.empirical_levels == [4]
        assert any("empirical" in n for n in r.notices)

    def test_render_deterministic(self):
        cfg = FiniteFieldConfig(primes=(5,))
        a = full_verify(system((2, 3, 7)), cfg).render()
        b = full_verify(system((2, 3, 7)), cfg).render()
        assert a == b
        assert a.splitlines()[0] == "curve: [2, 3, 7]" and "overall: PASS" in a

    def test_config_validation(self):
        with pytest.raises(ValueError):
            FiniteFieldConfig(primes=(4,))
        with pytest.raises(ValueError):
            FiniteFieldConfig(trials=0)
