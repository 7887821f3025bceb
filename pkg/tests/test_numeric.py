import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factorkit.errors import InvalidInputError
from factorkit.numeric import (
    LogReal,
    SummationInput,
    log_binomial,
    log_factorial,
    log_multinomial,
    sum_bounds,
)


class TestLogFactorial:
    def test_empty_product(self):
        assert log_factorial(0) == 0.0

    @pytest.mark.parametrize("m", [1, 2, 4, 10, 20, 170, 500, 1023, 1024, 5000, 100000])
    def test_against_exact_integer_factorial(self, m):
        exact = math.log(math.factorial(m))
        assert abs(log_factorial(m) - exact) <= 1e-12 * max(1.0, exact)

    def test_million_against_lgamma(self):
        got = log_factorial(10**6)
        want = math.lgamma(10**6 + 1)
        assert abs(got - want) <= 1e-12 * want

    def test_rejects_negative_and_nonint(self):
        with pytest.raises(InvalidInputError):
            log_factorial(-1)
        with pytest.raises(InvalidInputError):
            log_factorial(2.5)


class TestLogMultinomial:
    def test_three_choose_one_two(self):
        # oracle: arrangements of AAB = 3
        assert log_multinomial(3, [1, 2]) == pytest.approx(math.log(3), abs=1e-12)

    def test_single_block(self):
        assert log_multinomial(5, [5]) == 0.0

    def test_four_over_1_1_2(self):
        # 4!/2! = 12
        assert log_multinomial(4, [1, 1, 2]) == pytest.approx(math.log(12), abs=1e-12)

    def test_parts_must_sum(self):
        with pytest.raises(InvalidInputError):
            log_multinomial(4, [1, 2])

    def test_binomial_matches_pascal_recurrence(self):
        # independent oracle: integer Pascal triangle
        row = [1]
        for n in range(1, 61):
            row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
            for k in range(n + 1):
                want = math.log(row[k])
                assert abs(log_multinomial(n, [k, n - k]) - want) <= 1e-10 * max(1.0, want)
                assert abs(log_binomial(n, k) - want) <= 1e-10 * max(1.0, want)


nonzero = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False).flatmap(
    lambda m: st.sampled_from([m, -m])
)


class TestLogReal:
    @given(nonzero, nonzero, nonzero)
    def test_mul_associative(self, x, y, z):
        a, b, c = map(LogReal.from_float, (x, y, z))
        lhs = (a * b) * c
        rhs = a * (b * c)
        assert lhs.sign == rhs.sign
        assert abs(lhs.log_mag - rhs.log_mag) <= 1e-10 * max(1.0, abs(lhs.log_mag))

    @given(nonzero)
    def test_mul_inverse(self, x):
        a = LogReal.from_float(x)
        unit = a * a.inverse()
        assert unit.sign == 1
        assert abs(unit.log_mag) <= 1e-12

    @given(nonzero, nonzero)
    def test_add_matches_float(self, x, y):
        got = (LogReal.from_float(x) + LogReal.from_float(y)).to_float()
        want = x + y
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12)

    @given(nonzero, nonzero)
    def test_sub_matches_float(self, x, y):
        got = (LogReal.from_float(x) - LogReal.from_float(y)).to_float()
        assert got == pytest.approx(x - y, rel=1e-9, abs=1e-12)

    def test_zero_behaviour(self):
        z = LogReal.zero()
        a = LogReal.from_float(3.0)
        assert (z * a).is_zero
        assert (a + z).to_float() == pytest.approx(3.0, rel=1e-15)
        assert (a - a).is_zero
        with pytest.raises(ZeroDivisionError):
            a / z

    def test_huge_values_stay_finite_in_log_space(self):
        big = LogReal.exp(5e5)
        prod = big * big
        assert prod.log_mag == pytest.approx(1e6)
        assert prod.to_float() == math.inf  # only the float view overflows

    def test_from_int_bignum(self):
        v = LogReal.from_int(math.factorial(300))
        assert v.log_mag == pytest.approx(math.lgamma(301), rel=1e-13)


class TestSumBounds:
    def test_demo_reproduces_e(self):
        res = sum_bounds(SummationInput.constant(20, 1.0, 0.0, 1.0 / 15.0))
        assert res.total == pytest.approx(math.e, abs=1e-9)
        assert res.sigma1 <= res.total <= res.sigma2
        assert res.sigma2 - res.sigma1 < 1e-3
        # the exp bound itself hits e exactly before the slack term
        assert math.exp(res.a1 - 0.5 * res.a1 * res.c2) == pytest.approx(math.e, abs=1e-12)

    def test_zero_truncation(self):
        res = sum_bounds(SummationInput.constant(2, 0.0, 0.0, 0.1))
        assert res.total == 1.0

    def test_truncation_midway(self):
        # 1 - (i-1)B(i) hits zero exactly at i = 3: n_3 = n_4 = ... = 0
        inp = SummationInput(6, (0.6,) * 6, (0.0, 0.5, 0.5, 1 / 3, 0.25, 0.2), 0.3)
        res = sum_bounds(inp)
        assert res.total == pytest.approx(1.0 + 0.6 + 0.6 * 0.6 * 0.5 / 2, abs=1e-12)

    def test_sandwich_example(self):
        res = sum_bounds(SummationInput.constant(30, 2.0, 0.01, 0.1))
        assert res.sigma1 <= res.total <= res.sigma2

    @pytest.mark.parametrize(
        "kwargs,fragment",
        [
            (dict(Z=1, a=1.0, b=0.0, c=0.1), "Z must be"),
            (dict(Z=5, a=-0.1, b=0.0, c=0.1), "A("),
            (dict(Z=5, a=1.0, b=0.5, c=0.3), "1 - (i-1)B(i)"),
            (dict(Z=5, a=3.0, b=0.0, c=0.2), "A/Z"),
            (dict(Z=5, a=1.0, b=0.25, c=0.2), "|C|"),
            (dict(Z=5, a=1.0, b=0.0, c=0.5), "c_hat"),
        ],
    )
    def test_hypothesis_violations_named(self, kwargs, fragment):
        inp = SummationInput.constant(kwargs["Z"], kwargs["a"], kwargs["b"], kwargs["c"])
        with pytest.raises(InvalidInputError) as err:
            sum_bounds(inp)
        assert fragment.split("(")[0] in str(err.value)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_sandwich_property(self, data):
        Z = data.draw(st.integers(min_value=2, max_value=40))
        a = data.draw(
            st.lists(st.floats(0.0, 3.0, allow_nan=False), min_size=Z, max_size=Z)
        )
        b = data.draw(
            st.lists(st.floats(-0.005, 0.02, allow_nan=False), min_size=Z, max_size=Z)
        )
        b = [min(bi, 1.0 / (Z + 1)) for bi in b]
        inp = SummationInput(Z, tuple(a), tuple(b), 0.32)
        try:
            inp.validate()
        except InvalidInputError:
            return  # drawn outside the lemma's hypotheses
        res = sum_bounds(inp)
        assert res.sigma1 <= res.total <= res.sigma2
