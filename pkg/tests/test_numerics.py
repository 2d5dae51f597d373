import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma as gamma_fn
from scipy.special import gammaincc

from eqatlas.errors import BracketError, ConvergenceError, DomainError
from eqatlas.numerics import (
    QuadratureSpec,
    RootBracket,
    erf,
    erfc,
    erfc_scaled_tail,
    find_root,
    igamma_ratio,
    integrate,
    log_sum_exp,
    log_sum_exp_stream,
)

finite = st.floats(min_value=-50, max_value=50, allow_nan=False)


class TestErf:
    def test_values(self):
        assert erf(0.0) == 0.0
        assert abs(erf(10.0) - 1.0) <= 1e-15
        assert abs(erf(1.0) - 0.8427007929497149) <= 1e-15

    def test_against_defining_integral(self):
        for x in (0.1, 0.7, 1.3, 2.5, 4.0):
            ref = float(mpmath.quad(lambda t: 2 / mpmath.sqrt(mpmath.pi) * mpmath.exp(-t * t), [0, x]))
            assert abs(erf(x) - ref) <= 1e-14

    @given(finite)
    def test_odd_and_bounded(self, x):
        assert erf(-x) == -erf(x)
        assert -1.0 <= erf(x) <= 1.0

    def test_non_finite(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(DomainError):
                erf(bad)
            with pytest.raises(DomainError):
                erfc(bad)

    def test_erfc_tail_is_accurate(self):
        assert erfc(10.0) == pytest.approx(float(mpmath.erfc(10)), rel=1e-13)


class TestErfcScaledTail:
    @pytest.mark.parametrize("y,N,tau", [(1.0, 100, 0.0), (0.5, 400, 0.5)])
    def test_ratio_to_direct(self, y, N, tau):
        z = math.sqrt(2 / (1 - tau * tau)) * y * math.sqrt(N)
        direct = float(mpmath.erfc(z))
        assert 0.99 < erfc_scaled_tail(y, N, tau) / direct < 1.01

    def test_one_percent_threshold(self):
        # first-order error 1/(2 z^2): about 5.5% at z = 3, under 1% from z ~ 7.1 on
        for z, ok in ((3.0, False), (7.2, True), (12.0, True)):
            y = z / math.sqrt(2.0)  # N = 1, tau = 0
            ratio = erfc_scaled_tail(y, 1, 0.0) / float(mpmath.erfc(z))
            assert (abs(ratio - 1) < 0.01) is ok

    def test_tau_to_one(self):
        vals = [erfc_scaled_tail(0.05, 10, t) for t in (0.9, 0.99, 0.999)]
        assert vals[0] > vals[1] > vals[2] >= 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            erfc_scaled_tail(0.0, 10, 0.1)
        with pytest.raises(DomainError):
            erfc_scaled_tail(1.0, 10, 1.0)


class TestIgamma:
    def test_limits(self):
        assert igamma_ratio(7, 0.0) == 1.0
        assert igamma_ratio(2000, 0.9) > 0.999
        assert igamma_ratio(2000, 1.1) < 0.001
        assert abs(igamma_ratio(2000, 1.0) - 0.5) < 0.02

    def test_against_scipy(self):
        for N in (2, 5, 50, 400, 10_000):
            for a in (0.3, 0.95, 1.0, 1.02, 2.0):
                assert igamma_ratio(N, a) == pytest.approx(gammaincc(N - 1, N * a), rel=1e-10, abs=1e-300)

    def test_large_n_against_mpmath(self):
        for N in (1000, 10_000, 30_000):
            for a in (0.97, 0.999, 1.0, 1.001, 1.03):
                ref = float(mpmath.gammainc(N - 1, mpmath.mpf(N) * a, regularized=True))
                assert igamma_ratio(N, a) == pytest.approx(ref, rel=1e-12)

    def test_exact_small_n(self):
        for N in range(2, 51):
            for a in (0.1, 0.8, 1.5):
                lam = mpmath.mpf(N) * a
                ref = mpmath.e ** (-lam) * mpmath.fsum(lam**k / mpmath.factorial(k) for k in range(N - 1))
                assert igamma_ratio(N, a) == pytest.approx(float(ref), rel=1e-13)

    @given(st.integers(2, 3000), st.lists(st.floats(0, 5), min_size=2, max_size=10))
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_a(self, N, grid):
        vals = [igamma_ratio(N, a) for a in sorted(grid)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            igamma_ratio(1, 0.5)
        with pytest.raises(DomainError):
            igamma_ratio(10, -0.1)


class TestIntegrate:
    def test_half_gaussian_root_moment(self):
        # closed form Gamma(3/4) 2^(-1/4); checked by the u = q^2 substitution too
        val = integrate(lambda q: math.exp(-q * q / 2) * math.sqrt(q), 0.0, math.inf)
        assert val == pytest.approx(gamma_fn(0.75) * 2**-0.25, rel=1e-10)
        sub = integrate(lambda u: 0.5 * math.exp(-u / 2) * u**-0.25, 0.0, math.inf)
        assert val == pytest.approx(sub, rel=1e-9)

    def test_unit(self):
        assert integrate(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_tolerance_stability(self):
        f = lambda q: math.exp(-1.5 * q * q) * math.sqrt(q)  # noqa: E731
        a = integrate(f, 0.0, math.inf, QuadratureSpec(1e-10, 1e-8))
        b = integrate(f, 0.0, math.inf, QuadratureSpec(1e-14, 1e-13))
        assert abs(a - b) <= 1e-8

    @given(st.floats(0.05, 2.95))
    @settings(max_examples=30, deadline=None)
    def test_split_invariance(self, c):
        f = lambda x: math.sin(3 * x) * math.exp(-x)  # noqa: E731
        whole = integrate(f, 0.0, 3.0)
        assert whole == pytest.approx(integrate(f, 0.0, c) + integrate(f, c, 3.0), abs=1e-11)

    def test_reversed_and_doubly_infinite(self):
        assert integrate(lambda x: x, 1.0, 0.0) == pytest.approx(-0.5)
        g = integrate(lambda x: math.exp(-x * x), -math.inf, math.inf)
        assert g == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_convergence_error(self):
        with pytest.raises(ConvergenceError) as ei:
            integrate(lambda x: math.sin(1 / x) / x, 1e-6, 1.0, QuadratureSpec(1e-14, 1e-14, 3))
        assert math.isfinite(ei.value.estimate)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            QuadratureSpec(0.0, 0.0)
        with pytest.raises(DomainError):
            QuadratureSpec(max_subdivisions=0)


class TestRoots:
    def test_basic(self):
        assert find_root(lambda x: x - 0.5, RootBracket(0, 1)) == pytest.approx(0.5, abs=1e-15)
        assert find_root(math.cos, RootBracket(1, 2)) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_m_alpha_residual(self):
        def f(m):
            return (math.acos(m) - m * math.sqrt(1 - m * m)) / math.pi - 0.25

        assert find_root(f, RootBracket(-1, 1)) == pytest.approx(0.404, abs=1e-3)

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_root(lambda x: x * x + 1, RootBracket(-1, 1))
        with pytest.raises(DomainError):
            RootBracket(1, 1)


class TestLogSumExp:
    def test_values(self):
        assert log_sum_exp_stream([0.0, 0.0]) == pytest.approx(math.log(2))
        assert log_sum_exp_stream([-math.inf, 3.5]) == 3.5
        assert log_sum_exp_stream([710.0] * 3) == pytest.approx(710 + math.log(3), rel=1e-15)
        assert log_sum_exp_stream([]) == -math.inf
        assert log_sum_exp([]) == -math.inf

    @given(st.lists(st.floats(-300, 300), min_size=1, max_size=40), st.randoms(use_true_random=False))
    def test_naive_and_order(self, vals, rnd):
        naive = math.log(math.fsum(math.exp(v) for v in vals))
        got = log_sum_exp_stream(vals)
        assert got == pytest.approx(naive, rel=1e-12, abs=1e-12)
        shuffled = list(vals)
        rnd.shuffle(shuffled)
        assert log_sum_exp_stream(shuffled) == pytest.approx(got, rel=1e-12, abs=1e-12)
        assert log_sum_exp(np.array(vals)) == pytest.approx(got, rel=1e-12, abs=1e-12)

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            log_sum_exp_stream([0.0, math.nan])
