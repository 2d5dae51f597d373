import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate as spi

from eqatlas import analytic as an
from eqatlas.analytic import EllipticSupport, ModelParams, PhaseRegion
from eqatlas.errors import DomainError

TAUS = [i / 10 for i in range(10)]


def phi_quadrature(x, tau):
    """Direct 2-D integral of ln|x - z| over the uniform ellipse (polar-type coordinates)."""
    a, b = 1 + tau, 1 - tau
    dens = 1 / (math.pi * a * b)

    def inner(r, th):
        zx, zy = a * r * math.cos(th), b * r * math.sin(th)
        return 0.5 * math.log((x - zx) ** 2 + zy**2) * a * b * r * dens

    val, _ = spi.dblquad(inner, 0, 2 * math.pi, 0, 1, epsabs=1e-11, epsrel=1e-11)
    return val


def psi_reference(x, tau):
    """Rate function in the original (non-conjugate) coding, at 40 digits."""
    with mpmath.workdps(40):
        x, tau = mpmath.mpf(x), mpmath.mpf(tau)
        s = mpmath.sqrt(x * x - 4 * tau)
        phi_out = (x - s) ** 2 / (8 * tau) + mpmath.log((x + s) / 2)
        return float(-mpmath.mpf(1) / 2 + x * x / (2 * (1 + tau)) - phi_out)


class TestTypes:
    def test_model_params(self):
        ModelParams(0.5, 0.0, 3)
        for bad in ((0.0, 0.5, 1), (0.5, 1.0, 1), (0.5, -0.1, 1), (0.5, 0.5, 0)):
            with pytest.raises(DomainError):
                ModelParams(*bad)

    def test_support(self):
        s = EllipticSupport(0.5)
        assert (s.semi_axis_x, s.semi_axis_y) == (1.5, 0.5)
        assert s.density == pytest.approx(1 / (math.pi * 0.75))
        assert s.contains(1.5, 0.0) and not s.contains(1.6, 0.0)


class TestEllipticLaw:
    def test_rho_eq_values(self):
        assert an.rho_eq(0, 0, 0.0) == pytest.approx(1 / math.pi)
        assert an.rho_eq(2.1, 0, 0.5) == 0.0
        assert an.rho_eq(1.5, 0, 0.5) == pytest.approx(1 / (math.pi * 0.75))

    def test_rho_eq_normalised(self):
        tau = 0.3
        a, b = 1 + tau, 1 - tau
        val, _ = spi.dblquad(
            lambda y, x: an.rho_eq(x, y, tau), -a, a,
            lambda x: -b * math.sqrt(max(0.0, 1 - (x / a) ** 2)),
            lambda x: b * math.sqrt(max(0.0, 1 - (x / a) ** 2)),
            epsabs=1e-12, epsrel=1e-12,
        )
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_phi_edge_and_origin(self):
        for tau in TAUS:
            assert an.phi_eq(1 + tau, tau) == tau / 2
            assert an.phi_eq(-(1 + tau), tau) == tau / 2
            assert an.phi_eq(0.0, tau) == pytest.approx(-0.5, abs=1e-15)

    @pytest.mark.parametrize("x,tau", [(2.0, 0.5), (0.7, 0.5), (3.0, 0.0), (1.2, 0.8)])
    def test_phi_against_2d_quadrature(self, x, tau):
        assert an.phi_eq(x, tau) == pytest.approx(phi_quadrature(x, tau), abs=1e-6)

    def test_phi_at_two(self):
        # the independent 2-D quadrature gives 0.6205864 (not 0.620686)
        assert an.phi_eq(2.0, 0.5) == pytest.approx(0.6205864343664753, abs=1e-9)

    @pytest.mark.parametrize("tau", TAUS)
    def test_phi_continuity(self, tau):
        e = 1 + tau
        for h in (1e-3, 1e-5, 1e-7, 1e-9):
            jump = abs(an.phi_eq(e - h, tau) - an.phi_eq(e + h, tau))
            assert jump <= 3 * h

    @given(st.floats(-5, 5), st.sampled_from(TAUS))
    def test_phi_even(self, x, tau):
        assert an.phi_eq(x, tau) == an.phi_eq(-x, tau)

    def test_phi_prime_values(self):
        assert an.phi_eq_prime(1.5, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert an.phi_eq_prime(2.0, 0.5) == pytest.approx(2 - math.sqrt(2), abs=1e-12)
        assert an.phi_eq_prime(0.6, 0.2) == pytest.approx(0.5, abs=1e-15)
        assert an.phi_eq_prime(-2.0, 0.5) == -an.phi_eq_prime(2.0, 0.5)

    @pytest.mark.parametrize("tau", [0.0, 0.3, 0.5, 0.9])
    def test_phi_prime_finite_difference(self, tau):
        h = 1e-5
        xs = np.linspace(-4, 4, 161)
        xs = xs[np.abs(np.abs(xs) - (1 + tau)) > 1e-3]
        fd = (an.phi_eq(xs + h, tau) - an.phi_eq(xs - h, tau)) / (2 * h)
        assert np.max(np.abs(fd - an.phi_eq_prime(xs, tau))) < 1e-6

    def test_phi_array(self):
        xs = np.array([0.0, 1.0, 2.0])
        assert an.phi_eq(xs, 0.5).shape == (3,)


class TestRealEigenvalues:
    def test_psi_values(self):
        assert an.psi_r(1.5, 0.5) == 0.0
        assert an.psi_r(1.7, 0.5) == pytest.approx(psi_reference(1.7, 0.5), abs=1e-13)
        assert an.psi_r(2.0, 0.5) == pytest.approx(psi_reference(2.0, 0.5), abs=1e-13)
        assert an.psi_r(1.7, 0.5) == pytest.approx(0.0413037, abs=1e-7)
        assert an.psi_r(2.0, 0.5) == pytest.approx(0.2127469, abs=1e-7)

    @pytest.mark.parametrize("tau", TAUS)
    def test_psi_increasing_and_zero(self, tau):
        x = np.linspace(1 + tau, 4 + tau, 100)
        v = an.psi_r(x, tau)
        assert abs(v[0]) <= 1e-12
        assert np.all(np.diff(v) > 0)
        assert np.all(an.psi_r_prime(x[1:], tau) > 0)

    def test_psi_prime_matches_finite_difference(self):
        for x in (1.7, 2.0, 3.0):
            fd = (an.psi_r(x + 1e-6, 0.5) - an.psi_r(x - 1e-6, 0.5)) / 2e-6
            assert an.psi_r_prime(x, 0.5) == pytest.approx(fd, abs=1e-7)

    def test_psi_domain(self):
        with pytest.raises(DomainError):
            an.psi_r(1.4, 0.5)

    def test_q_r(self):
        # direct reading of sqrt(N/(2 pi (1+tau)) / (s (x+s))) with s = sqrt(x^2 - 4 tau)
        s = math.sqrt(2.0)
        expected = math.sqrt(100 / (2 * math.pi * 1.5) / (s * (2 + s)))
        assert an.q_r(2.0, 0.5, 100) == pytest.approx(expected, rel=1e-14)
        assert an.q_r(2.0, 0.5, 100) == pytest.approx(1.48239, abs=1e-5)
        assert an.q_r(2.0, 0.5, 400) == pytest.approx(2 * an.q_r(2.0, 0.5, 100), rel=1e-14)
        near = an.q_r(1.5 + 1e-12, 0.5, 100)
        assert near == pytest.approx(math.sqrt(100 / (2 * math.pi * 1.5) / (0.5 * 2)), rel=1e-5)
        with pytest.raises(DomainError):
            an.q_r(1.5, 0.5, 100)

    def test_tail_density_and_log_prob(self):
        assert an.p_real_tail(2.0, 50, 0.5) == pytest.approx(
            an.q_r(2.0, 0.5, 50) * math.exp(-50 * an.psi_r(2.0, 0.5)), rel=1e-14)
        assert an.xmax_tail_log_prob(1.7, 80, 0.5) == pytest.approx(-80 * an.psi_r(1.7, 0.5))

    def test_bulk(self):
        assert an.p_real_bulk(100, 0.0) == pytest.approx(3.9894, abs=1e-4)
        assert an.p_real_bulk(100, 0.5) == pytest.approx(4.6066, abs=1e-4)
        assert an.p_real_bulk(400, 0.3) == pytest.approx(2 * an.p_real_bulk(100, 0.3), rel=1e-15)

    def test_edge(self):
        bulk = an.p_real_bulk(100, 0.5)
        assert an.p_real_edge(-6, 100, 0.5) == pytest.approx(bulk, rel=0.005)
        assert an.p_real_edge(0, 100, 0.5) == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)) * bulk, abs=1e-12)
        assert an.p_real_edge(0, 100, 0.5) == pytest.approx(3.9321, abs=1e-3)
        ratio = an.p_real_edge(4, 100, 0.5) / an.p_real_edge_tail_asymptote(4, 100, 0.5)
        assert 0.98 < ratio < 1.02

    def test_edge_monotone_beyond_edge(self):
        d = np.linspace(0, 6, 61)
        v = [an.p_real_edge(x, 100, 0.5) for x in d]
        assert all(b < a for a, b in zip(v, v[1:]))


class TestComplexProjection:
    def test_bulk_values(self):
        assert an.p_complex_bulk(0.0, 100, 0.5) == pytest.approx(200 / (1.5 * math.pi), abs=1e-3)
        assert an.p_complex_bulk(1.5, 100, 0.5) == 0.0
        assert an.p_complex_bulk(-1.5, 100, 0.5) == 0.0
        assert an.p_complex_bulk(2.0, 100, 0.5) == 0.0

    def test_bulk_normalised(self):
        val, _ = spi.quad(lambda x: an.p_complex_bulk(x, 100, 0.5), -1.5, 1.5, epsabs=1e-12, epsrel=1e-12)
        assert val == pytest.approx(100, abs=1e-6 * 100)

    def test_tail_two_codings(self):
        x, tau, N = 2.0, 0.5, 50
        b = ((x - math.sqrt(x * x - 4 * tau)) / (2 * tau)) ** 2
        assert b == pytest.approx(0.343146, abs=1e-6)
        q = math.sqrt(N / (2 * (1 + tau))) * b * b / (math.pi * (1 - b) ** 1.5 * math.sqrt(1 - tau * b))
        direct = q * math.exp(-2 * N * psi_reference(x, tau))
        assert an.p_complex_tail(x, N, tau) == pytest.approx(direct, rel=1e-10)

    def test_tail_rate_is_twice_real(self):
        x, tau = 2.2, 0.4
        r = [math.log(an.p_complex_tail(x, n, tau)) - 2 * math.log(an.p_real_tail(x, n, tau)) for n in (50, 100)]
        # only prefactors remain: they scale like sqrt(N) / N
        assert r[1] - r[0] == pytest.approx(-0.5 * math.log(2), abs=1e-10)

    def test_q_c_edge_divergence(self):
        assert an.q_c(1.5 + 1e-6, 0.5, 100) > 1e3 * an.q_c(2.0, 0.5, 100)

    def test_edge_asymptotes(self):
        for d in (3.0, 5.0):
            assert abs(an.p_complex_edge(d, 100, 0.5) / an.p_complex_edge_asymptote(d, 100, 0.5) - 1) < 0.1
            assert abs(an.p_complex_edge(-d, 100, 0.5) / an.p_complex_edge_asymptote(-d, 100, 0.5) - 1) < 0.2
        ratio = an.p_complex_edge(-5, 100, 0.5) / (2**1.5 * 100**0.75 / (math.pi * 1.5) * math.sqrt(5))
        assert 0.9 < ratio < 1.1

    def test_edge_at_zero(self):
        from eqatlas.numerics import QuadratureSpec

        a = an.p_complex_edge(0.0, 100, 0.5, QuadratureSpec(0.0, 1e-9))
        b = an.p_complex_edge(0.0, 100, 0.5, QuadratureSpec(0.0, 1e-13))
        assert a > 0 and abs(a - b) <= 1e-8 * b
        # closed form at delta = 0: (1/2) (2/k)^(3/4) Gamma(3/4) with k = 3
        k = 3.0
        pref = math.sqrt(2) * 100**0.75 / math.pi**1.5 / math.sqrt(0.75)
        assert b == pytest.approx(pref * 0.5 * (2 / k) ** 0.75 * math.gamma(0.75), rel=1e-10)


class TestComplexity:
    def test_sigma_eq(self):
        assert an.sigma_eq(1.0) == 0.0
        assert an.sigma_eq(0.5) == pytest.approx(0.3181472, abs=1e-7)
        assert an.sigma_eq(0.3) == pytest.approx(float(0.5 * (0.09 - 1) - mpmath.log(0.3)), abs=1e-15)
        with pytest.raises(DomainError):
            an.sigma_eq(0.0)

    @given(st.floats(1e-3, 10))
    def test_sigma_eq_nonnegative(self, m):
        assert an.sigma_eq(m) >= 0.0

    def test_profile(self):
        p = ModelParams(0.3, 0.5)
        assert an.sigma_eq_profile(0.45, p) == pytest.approx(an.sigma_eq(0.3), abs=1e-14)
        xs = np.linspace(-3, 3, 601)
        assert xs[np.argmax(an.sigma_eq_profile(xs, p))] == pytest.approx(0.45, abs=0.01)
        out = np.linspace(1.5, 4, 100)
        deriv = np.gradient(an.sigma_eq_profile(out, p), out)
        assert np.all(deriv <= (0.3 - 1) / 0.5 + 1e-6)
        for m, tau in ((0.3, 0.5), (0.6, 0.2)):
            edge = an.sigma_eq_profile(1 + tau, ModelParams(m, tau))
            assert edge == pytest.approx(tau / 2 - (1 + tau - m) ** 2 / (2 * tau) - math.log(m), abs=1e-14)
            assert edge == pytest.approx(an.sigma_st(m, tau), abs=1e-12)
        with pytest.raises(DomainError):
            an.sigma_eq_profile(0.1, ModelParams(0.3, 0.0))

    def test_sigma_st(self):
        assert an.sigma_st(0.5, 0.5) == pytest.approx(-0.0568528, abs=1e-6)
        assert an.sigma_st(0.5, 0.5, "difference") == pytest.approx(-0.0568528, abs=1e-6)
        assert abs(an.sigma_st(1 - 1e-9, 0.5)) < 1e-12
        assert an.sigma_st(0.5, an.tau0(0.5)) == pytest.approx(0.0, abs=1e-10)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_sigma_st_forms_agree(self, m, tau):
        assert an.sigma_st(m, tau, "bracket") == pytest.approx(an.sigma_st(m, tau, "difference"), abs=1e-12)

    def test_tau0(self):
        assert an.tau0(0.5) == pytest.approx(0.6471749, abs=1e-7)
        assert an.tau0(0.999) == pytest.approx(1.0, abs=1e-3)
        for bad in (0.0, 1.0):
            with pytest.raises(DomainError):
                an.tau0(bad)


class TestIndex:
    def test_m_alpha_values(self):
        assert an.m_alpha(0.0) == 1.0
        assert an.m_alpha(0.5) == pytest.approx(0.0, abs=1e-12)
        assert an.m_alpha(1.0) == -1.0
        assert an.m_alpha(0.25) == pytest.approx(0.4040, abs=1e-3)
        small = 1 - (3 * math.pi * 1e-4 / (4 * math.sqrt(2))) ** (2 / 3)
        assert abs(an.m_alpha(1e-4) / small - 1) < 0.01
        with pytest.raises(DomainError):
            an.m_alpha(1.1)

    def test_m_alpha_against_integral_form(self):
        for a in (0.1, 0.25, 0.7):
            m = an.m_alpha(a)
            val, _ = spi.quad(lambda t: 2 / math.pi * math.sqrt(1 - t * t), m, 1, epsabs=1e-13)
            assert val == pytest.approx(a, abs=1e-11)

    def test_alpha_m_values(self):
        assert an.alpha_m(1.0) == 0.0
        assert an.alpha_m(0.0) == pytest.approx(0.5, abs=1e-15)
        assert an.alpha_m(-1.0) == pytest.approx(1.0, abs=1e-15)
        assert an.alpha_m(0.4040) == pytest.approx(0.25, abs=1e-3)
        # the arccos form at m = 0.6 is 0.14238 (not 0.2532)
        ref = (math.acos(0.6) - 0.6 * math.sqrt(1 - 0.36)) / math.pi
        assert an.alpha_m(0.6) == pytest.approx(ref, abs=1e-15)
        assert 0.98 < an.alpha_m(0.99) / (4 * math.sqrt(2) / (3 * math.pi) * 0.01**1.5) < 1.02

    def test_alpha_m_near_one_is_accurate(self):
        for eps in (1e-3, 1e-6, 1e-9):
            m = 1 - eps
            with mpmath.workdps(50):
                mm = mpmath.mpf(1) - mpmath.mpf(eps)
                ref = float((mpmath.acos(mm) - mm * mpmath.sqrt(1 - mm * mm)) / mpmath.pi)
            assert an.alpha_m(m) == pytest.approx(ref, rel=1e-9)

    @given(st.floats(0, 1))
    def test_roundtrip_alpha(self, a):
        assert an.alpha_m(an.m_alpha(a)) == pytest.approx(a, abs=1e-10)

    @given(st.floats(-1, 1))
    def test_roundtrip_m(self, m):
        assert an.m_alpha(an.alpha_m(m)) == pytest.approx(m, abs=1e-7)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_m_alpha_decreasing(self, a, b):
        assume(a < b)
        assert an.m_alpha(a) >= an.m_alpha(b)

    def test_x_of_alpha(self):
        assert an.x_of_alpha(0.0, 0.5) == 1.5
        assert an.x_of_alpha(0.5, 0.3) == pytest.approx(0.0, abs=1e-12)
        assert an.x_of_alpha(0.25, 0.5) == pytest.approx(0.6060, abs=2e-3)
        assert an.mu_eq_right(an.x_of_alpha(0.3, 0.4), 0.4) == pytest.approx(0.3, abs=1e-12)

    def test_sigma_st_alpha(self):
        assert an.sigma_st_alpha(0.5, 0.5, 0.0) == pytest.approx(an.sigma_st(0.5, 0.5), abs=1e-12)
        assert an.sigma_st_alpha(0.5, 0.5, 0.5) == pytest.approx(0.3181472, abs=1e-7)
        assert an.sigma_st_alpha(0.3, 0.5, 0.7) == an.sigma_eq(0.3)
        ma = an.m_alpha(0.25)
        left = an.sigma_st_alpha(ma * (1 - 1e-14), 0.5, 0.25)
        right = an.sigma_st_alpha(ma, 0.5, 0.25)
        assert right == pytest.approx(an.sigma_eq(ma), abs=1e-12)
        assert left == pytest.approx(right, abs=1e-10)

    def test_tau0_alpha(self):
        assert an.tau0_alpha(0.5, 0.0) == pytest.approx(an.tau0(0.5), abs=1e-10)
        ma = an.m_alpha(0.1)
        assert an.tau0_alpha(ma, 0.1) == 0.0
        t = an.tau0_alpha(0.2, 0.1)
        assert an.sigma_st_alpha(0.2, t, 0.1) == pytest.approx(0.0, abs=1e-9)
        with pytest.raises(DomainError):
            an.tau0_alpha(ma + 0.01, 0.1)

    def test_nu_density(self):
        p = ModelParams(0.6, 0.8, 625)
        peak = an.alpha_m(0.6)
        assert an.nu_density(peak, p) == pytest.approx(29.375, abs=0.01)
        grid = np.linspace(0, 1, 4001)
        assert grid[np.argmax(an.nu_density(grid, p))] == pytest.approx(peak, abs=1e-3)

    def test_nu_width_scaling(self):
        def width(n):
            p = ModelParams(0.6, 0.5, n)
            g = np.linspace(0.05, 0.25, 20001)
            v = an.nu_density(g, p)
            above = g[v >= v.max() / 2]
            return above[-1] - above[0]

        assert width(2500) / width(10000) == pytest.approx(2.0, rel=0.02)

    def test_annealed_probability(self):
        assert an.ln_p_st_annealed(ModelParams(0.5, 0.5, 100)) == pytest.approx(-37.5)
        assert an.ln_p_st_annealed(ModelParams(1 - 1e-12, 0.5, 100)) == pytest.approx(0.0, abs=1e-18)
        for m in np.linspace(0.05, 0.95, 10):
            for tau in (0.1, 0.3, 0.5, 0.7, 0.9):
                lhs = an.ln_p_st_annealed(ModelParams(m, tau, 7))
                rhs = 7 * (an.sigma_st(m, tau) - an.sigma_eq(m))
                assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_ln_n_eq(self):
        assert an.ln_n_eq(ModelParams(2.0, 0.5, 10)) == 0.0
        assert an.ln_n_eq(ModelParams(0.5, 0.5, 16)) == pytest.approx(0.5 * math.log(6) + 16 * an.sigma_eq(0.5))

    def test_sigma_gamma(self):
        val, _ = spi.quad(lambda g: an.sigma_gamma(g, 6.0, 0.5, 10_000), 0, np.inf, limit=200)
        assert val == pytest.approx(1.0, abs=0.02)
        d = 6.0
        mode = 2 / (3 * math.pi) * (2 * d) ** 1.5
        pref = math.sqrt(math.pi * 1.5 / (16 * 0.5 * d))
        assert an.sigma_gamma(mode, d, 0.5, 10_000) == pytest.approx(pref, rel=1e-12)
        v0 = an.sigma_gamma(0.0, 5.0, 0.5, 10_000)
        assert 0 < v0 < 1e-6
        assert v0 == pytest.approx(math.sqrt(math.pi * 1.5 / (16 * 0.5 * 5)) * math.exp(-1.5 * 25 / 1.0), rel=1e-12)
        with pytest.raises(DomainError):
            an.sigma_gamma(1.0, 0.0, 0.5, 100)
        with pytest.warns(UserWarning):
            an.sigma_gamma(1.0, 1.0, 0.5, 10_000)

    def test_alpha_of_params(self):
        assert an.alpha_of_params(1.2, 0.5) == 0.0
        assert an.alpha_of_params(0.5, 0.7) == 0.0  # above tau0
        for m, tau in ((0.5, 0.3), (0.2, 0.1), (0.8, 0.05)):
            a = an.alpha_of_params(m, tau)
            assert 0 < a < 0.5
            assert an.sigma_st_alpha(m, tau, a) == pytest.approx(0.0, abs=1e-9)


class TestPhases:
    def test_examples(self):
        assert an.classify_phase(ModelParams(1.2, 0.3)) is PhaseRegion.ABSOLUTE_STABILITY
        assert an.classify_phase(ModelParams(0.5, 0.7)) is PhaseRegion.RELATIVE_INSTABILITY
        assert an.classify_phase(ModelParams(0.5, 0.5)) is PhaseRegion.ABSOLUTE_INSTABILITY
        assert str(PhaseRegion.ABSOLUTE_INSTABILITY) == "AbsoluteInstability"

    def test_boundary(self):
        assert an.is_phase_boundary(ModelParams(0.5, an.tau0(0.5)))
        assert an.is_phase_boundary(ModelParams(1.0, 0.2))
        assert not an.is_phase_boundary(ModelParams(0.5, 0.5))

    @given(st.floats(0.02, 1.5), st.floats(0.01, 0.98), st.floats(-1e-13, 1e-13), st.floats(-1e-13, 1e-13))
    @settings(max_examples=200)
    def test_stable_under_tiny_perturbations(self, m, tau, dm, dt):
        p = ModelParams(m, tau)
        assume(not an.is_phase_boundary(p, tol=1e-10))
        assert an.classify_phase(ModelParams(m + dm, tau + dt)) is an.classify_phase(p)

    def test_total(self):
        for m in np.linspace(0.01, 2, 30):
            for tau in np.linspace(0, 0.99, 30):
                assert isinstance(an.classify_phase(ModelParams(m, tau)), PhaseRegion)
