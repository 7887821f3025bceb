import math

import pytest

from factorkit.asymptotics import (
    DegreeSpec,
    check_case,
    disjoint_prob_asym,
    error_scale,
    join_prob_asym,
    mcleod_f_asym,
    multi_disjoint_prob_asym,
    r_prime,
    r_regular_asym,
    triple_degree_sum,
)
from factorkit.errors import InvalidInputError


def mp_log_rprime(n, degrees):
    """High-precision substitution of the closed form, as an oracle."""
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    lam = [mp.mpf(d) / (n - 1) for d in degrees]
    k = len(degrees) - 1
    ent = sum(x * mp.log(x) for x in lam)
    logmult = mp.log(mp.factorial(n - 1)) - sum(mp.log(mp.factorial(d)) for d in degrees)
    return float(mp.binomial(n, 2) * ent + n * logmult + mp.mpf(k) / 4 + k * mp.log(2) / 2)


class TestDegreeSpec:
    def test_parse(self):
        s = DegreeSpec.parse("10:8,1")
        assert (s.n, s.degrees, s.k) == (10, (8, 1), 1)

    @pytest.mark.parametrize(
        "n,degrees",
        [(4, (1, 1)), (4, (0, 3)), (9, (3, 3, 2)), (4, (4,)), (1, (0,))],
    )
    def test_invalid(self, n, degrees):
        with pytest.raises(InvalidInputError):
            DegreeSpec(n, degrees)

    def test_odd_n_even_degrees_ok(self):
        DegreeSpec(9, (2, 2, 2, 2))

    def test_k_zero_allowed(self):
        assert DegreeSpec(6, (5,)).k == 0


class TestRegularAsym:
    def test_symmetry_in_degree(self):
        for n in (6, 10, 15, 40):
            for d in range(1, n - 1):
                if n % 2 and d % 2:
                    continue
                a = r_regular_asym(n, d).log()
                b = r_regular_asym(n, n - 1 - d).log()
                assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_equals_two_factor_rprime(self):
        assert r_regular_asym(4, 1).log() == pytest.approx(
            r_prime(DegreeSpec(4, (2, 1))).log(), abs=1e-12
        )

    def test_matching_count_ballpark(self):
        # R_1(10) = 9!! = 945 exactly
        ratio = 945 / r_regular_asym(10, 1).to_float()
        assert 0.8 < ratio < 1.1

    def test_range_and_parity_errors(self):
        with pytest.raises(InvalidInputError):
            r_regular_asym(5, 4)
        with pytest.raises(InvalidInputError):
            r_regular_asym(9, 3)


class TestRPrime:
    def test_value_4_1_2(self):
        got = r_prime(DegreeSpec(4, (1, 2)))
        assert got.to_float() == pytest.approx(3.2282420599316776, rel=1e-12)
        assert got.log() == pytest.approx(mp_log_rprime(4, (1, 2)), abs=1e-12)

    @pytest.mark.parametrize("degrees", [(3, 2, 4), (1, 1, 2, 1, 4), (5, 1, 1, 1, 1)])
    def test_high_precision_substitution(self, degrees):
        n = sum(degrees) + 1
        assert r_prime(DegreeSpec(n, degrees)).log() == pytest.approx(
            mp_log_rprime(n, degrees), abs=1e-10
        )

    def test_k1_specialisation_grid(self):
        for n in range(4, 101):
            for d in range(1, n - 1):
                if n % 2 and d % 2:
                    continue
                a = r_prime(DegreeSpec(n, (n - 1 - d, d))).log()
                b = r_regular_asym(n, d).log()
                assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_permutation_invariance(self):
        base = r_prime(DegreeSpec(12, (4, 3, 2, 1, 1))).log()
        for perm in [(1, 4, 3, 2, 1), (3, 4, 1, 2, 1), (1, 1, 2, 3, 4)]:
            assert r_prime(DegreeSpec(12, perm)).log() == pytest.approx(base, abs=1e-12)


class TestMcLeod:
    def test_small_value(self):
        # direct substitution at (4, 1): 3 * (4!/(4*3!))^2 * (3/4) * e^(1/4)
        want = 3 * (24 / (4 * 6)) ** 2 * 0.75 * math.exp(0.25)
        assert mcleod_f_asym(4, 1).to_float() == pytest.approx(want, rel=1e-12)

    def test_matches_rprime_asymptotically(self):
        gaps = []
        for n in (100, 1000, 10000):
            spec = DegreeSpec(n, (n - 6,) + (1,) * 5)
            gaps.append(abs(mcleod_f_asym(n, 5).log() - r_prime(spec).log()))
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] <= 0.01

    def test_k_range(self):
        mcleod_f_asym(10, 8)  # k = n-2 accepted
        with pytest.raises(InvalidInputError):
            mcleod_f_asym(10, 9)
        with pytest.raises(InvalidInputError):
            mcleod_f_asym(9, 2)


class TestProbabilities:
    def test_disjoint_values(self):
        assert disjoint_prob_asym(1, 1) == pytest.approx(math.exp(-0.5))
        assert disjoint_prob_asym(2, 2) == pytest.approx(math.exp(-2.0))

    def test_multi_values(self):
        assert multi_disjoint_prob_asym([3]) == 1.0
        assert multi_disjoint_prob_asym([1, 1]) == pytest.approx(math.exp(-0.5))
        assert multi_disjoint_prob_asym([1, 1, 1]) == pytest.approx(math.exp(-1.5))
        assert multi_disjoint_prob_asym([1, 1]) == disjoint_prob_asym(1, 1)

    def test_join_degenerate_cases(self):
        # d2 = 2 kills the exponential factor
        lam1 = 50 / 99
        assert join_prob_asym(100, 50, 2) == pytest.approx((1 - lam1) ** 100, rel=1e-12)
        # d1 -> 0 gives probability 1
        assert join_prob_asym(100, 0, 3) == 1.0

    def test_join_example_value(self):
        lam1 = 50 / 99
        want = (1 - lam1) ** 50 * math.exp(-lam1 * 1 * (1 - 2) / (4 * (1 - lam1)))
        assert join_prob_asym(100, 50, 1) == pytest.approx(want, rel=1e-12)

    def test_join_rejects_saturated_degree(self):
        with pytest.raises(InvalidInputError):
            join_prob_asym(10, 9, 1)


class TestErrorScale:
    def test_all_ones(self):
        # d = 3, triple sum = 4 -> (27 + 4)/1000
        spec = DegreeSpec(1000, (996, 1, 1, 1))
        assert error_scale(spec) == pytest.approx(0.031)

    def test_k1_reduces_to_cube(self):
        assert error_scale(DegreeSpec(100, (96, 3))) == pytest.approx(27 / 100)

    def test_monotone_in_degrees(self):
        a = error_scale(DegreeSpec(100, (95, 2, 1, 1)))
        b = error_scale(DegreeSpec(100, (94, 3, 1, 1)))
        assert b > a

    def test_triple_sum_indexing(self):
        # 1<=i<=j<t<=k over (1,1,1): (1,1,2),(1,1,3),(1,2,3),(2,2,3)
        assert triple_degree_sum([1, 1, 1]) == 4
        assert triple_degree_sum([2]) == 0


class TestCheckCase:
    def test_case1(self):
        rep = check_case(DegreeSpec(10, (8, 1)))
        assert rep.case_id == 1

    def test_case3_margins(self):
        rep = check_case(DegreeSpec(100, (96, 1, 1, 1)))
        assert rep.case_id is None
        ones = [c for c in rep.conditions if c.case_id == 3 and c.satisfied is not None]
        assert ones and ones[0].satisfied is True
        margin = [c for c in rep.conditions if c.case_id == 3 and c.margin is not None]
        assert margin[0].margin == pytest.approx(3 / 100 ** (5 / 6))

    def test_case2_margins_parity_valid(self):
        rep = check_case(DegreeSpec(9, (2, 2, 2, 2)))
        margins = [c.margin for c in rep.conditions if c.case_id == 2]
        assert margins[0] == pytest.approx(6 / 9 ** (1 / 3))
        assert margins[1] == pytest.approx(triple_degree_sum([2, 2, 2]) / 9)

    def test_no_asymptotic_verdicts(self):
        rep = check_case(DegreeSpec(100, (50, 49)))
        for c in rep.conditions:
            if "o(" in c.description or "O(" in c.description:
                assert c.satisfied is None
