import numpy as np
import pytest

from model import (
    EIGHT_NINTHS, ModelParams, Branch, ImSign, AlphaSide,
    DegenerateConstant, OutsideAdmissibleRegion, NegativeRadicand, SingularAngle, ZeroC,
    admissible_intervals, branch_interval, alpha_from_sin_sq, default_alpha0,
    y_squared, a_of_alpha, tau_of_a, a_of_tau, tau_real_part, abs_a_sq_from_tau,
    F_of_alpha, da_dalpha, d_abs_a_sq_dalpha, re_da_dalpha_sum, dlogmu_dalpha,
    dtau_dalpha, y_sq_ode_residual, mu_of, ricci_radicand, c_modulus, c_modulus_closed,
    c_of, k1_expression, k1_numerator_residual, angle_factor_product,
    gauss_curvature_from_a, gauss_curvature_closed, real_a_curvatures,
    gamma_target, gamma_numerator_residual, hopf_coefficients, point_at
)
from conftest import ANCHOR_ALPHA, ANCHOR_A




def sample_branch(rng, c3, n, margin=1e-3):
    interval = admissible_intervals(c3)[0]
    lo, hi = interval.lo + margin * interval.width, interval.hi - margin * interval.width
    params = ModelParams(b=1.0, c3=c3, branch=interval.branch)
    return params, alpha_from_sin_sq(rng.uniform(lo, hi, n))




#Admissible domain
@pytest.mark.parametrize('c3, lo, hi, branch, closed', [
    (0.5, 0.5, EIGHT_NINTHS, Branch.LOW_POS, False),
    (-0.25, EIGHT_NINTHS, 1.0, Branch.NEG, True),
    (1.0, EIGHT_NINTHS, 1.0, Branch.HIGH_POS, False),
    (0.95, EIGHT_NINTHS, 0.95, Branch.HIGH_POS, False),
    (1.5, EIGHT_NINTHS, 1.0, Branch.HIGH_POS, True),
])
def test_admissible_intervals(c3, lo, hi, branch, closed):
    [interval] = admissible_intervals(c3)
    assert interval.lo == pytest.approx(lo)
    assert interval.hi == pytest.approx(hi)
    assert interval.branch is branch
    assert interval.hi_closed is closed


@pytest.mark.parametrize('c3', [0.0, 8.0 / 9.0])
def test_excluded_constants(c3):
    with pytest.raises(DegenerateConstant):
        admissible_intervals(c3)


def test_intervals_match_positive_y_squared():
    for c3 in (0.3, 1.0, -0.25):
        interval = admissible_intervals(c3)[0]
        s = np.linspace(interval.lo, interval.hi, 203)[1:-1]
        assert np.all(y_squared(s, c3) > 0.0)


def test_describe():
    assert admissible_intervals(0.5)[0].describe() == '(0.5, 0.888889)'
    assert admissible_intervals(-0.25)[0].describe() == '(0.888889, 1]'


def test_branch_must_match_c3():
    with pytest.raises(DegenerateConstant):
        ModelParams(b=1.0, c3=0.5, branch=Branch.NEG)
    with pytest.raises(DegenerateConstant):
        ModelParams(b=0.0, c3=0.5, branch=Branch.LOW_POS)


def test_wrong_positive_branch_is_empty():
    params = ModelParams(b=1.0, c3=0.5, branch=Branch.HIGH_POS)
    with pytest.raises(OutsideAdmissibleRegion):
        branch_interval(params)


def test_default_alpha0_sits_mid_interval(anchor_params):
    s = np.sin(default_alpha0(anchor_params)) ** 2
    assert s == pytest.approx(0.5 * (0.5 + EIGHT_NINTHS))

    obtuse = ModelParams(b=1.0, c3=0.5, branch=Branch.LOW_POS, alpha_side=AlphaSide.OBTUSE)
    assert default_alpha0(obtuse) == pytest.approx(np.pi - default_alpha0(anchor_params))




#y^2
def test_y_squared_anchor():
    assert y_squared(0.75, 0.5) == pytest.approx(12.8, rel=1e-14)


@pytest.mark.parametrize('s', [8.0 / 9.0, 0.5])
def test_y_squared_poles(s):
    with pytest.raises(OutsideAdmissibleRegion):
        y_squared(s, 0.5)


def test_y_squared_solves_its_ode():
    alpha, step = ANCHOR_ALPHA, 1e-5
    y_sq = lambda x: y_squared(np.sin(x) ** 2, 0.5)
    dy_sq = (y_sq(alpha + step) - y_sq(alpha - step)) / (2.0 * step)
    assert abs(y_sq_ode_residual(alpha, y_sq(alpha), dy_sq)) < 1e-5




#a and tau
def test_a_anchor(anchor_a):
    assert anchor_a.real == pytest.approx(-0.7619047619047619, rel=1e-13)
    assert anchor_a.imag == pytest.approx(0.1330993, rel=1e-6)
    assert anchor_a == pytest.approx(ANCHOR_A, rel=1e-13)


def test_a_through_tau(anchor_a):
    tau = complex(-5.4, np.sqrt(12.8))
    assert abs(a_of_tau(tau, 1.0) - anchor_a) < 1e-12


def test_tau_anchor(anchor_a):
    tau = tau_of_a(anchor_a, 1.0)
    assert tau.real == pytest.approx(-5.4, rel=1e-12)
    assert tau.imag == pytest.approx(3.5777087640, rel=1e-10)
    assert tau.real == pytest.approx(tau_real_part(0.75), rel=1e-12)
    assert abs_a_sq_from_tau(tau, 1.0) == pytest.approx(abs(anchor_a) ** 2, rel=1e-12)


def test_tau_trivial_values():
    assert tau_of_a(1.0, 1.0) == 0.0
    assert tau_of_a(0.0, 1.0) == -1.0


def test_a_tends_to_minus_b_at_eight_ninths(anchor_params):
    a = a_of_alpha(alpha_from_sin_sq(EIGHT_NINTHS - 1e-5), anchor_params)
    assert abs(a + 1.0) < 1e-3


def test_a_rejects_points_outside_branch(anchor_params):
    with pytest.raises(OutsideAdmissibleRegion):
        a_of_alpha(alpha_from_sin_sq(0.95), anchor_params)
    with pytest.raises(OutsideAdmissibleRegion):
        a_of_alpha(np.array([ANCHOR_ALPHA, alpha_from_sin_sq(0.4)]), anchor_params)


def test_exact_symmetries(rng):
    for c3 in (0.5, 1.2, -0.25):
        params, alpha = sample_branch(rng, c3, 1000)
        double = ModelParams(b=2.0, c3=c3, branch=params.branch)
        minus = ModelParams(b=1.0, c3=c3, branch=params.branch, im_sign=ImSign.MINUS)

        a = a_of_alpha(alpha, params)
        assert np.array_equal(a_of_alpha(alpha, double), 2.0 * a)
        assert np.array_equal(a_of_alpha(alpha, minus), np.conj(a))

        K = gauss_curvature_closed(alpha, 1.0, c3)
        assert np.array_equal(gauss_curvature_closed(alpha, 2.0, c3), 4.0 * K)
        assert np.array_equal(
            gauss_curvature_from_a(alpha, 2.0 * a, 2.0, -12.0),
            4.0 * gauss_curvature_from_a(alpha, a, 1.0, -3.0)
        )
        assert np.array_equal(
            gauss_curvature_from_a(alpha, np.conj(a), 1.0, -3.0),
            gauss_curvature_from_a(alpha, a, 1.0, -3.0)
        )


def test_im_sign_conjugation(rng):
    for c3 in (0.5, 1.2, -0.25):
        params, alpha = sample_branch(rng, c3, 1000)
        minus = ModelParams(b=1.0, c3=c3, branch=params.branch, im_sign=ImSign.MINUS)
        a, a_minus = a_of_alpha(alpha, params), a_of_alpha(alpha, minus)

        np.testing.assert_allclose(tau_of_a(a_minus, 1.0), np.conj(tau_of_a(a, 1.0)), rtol=1e-14)
        assert np.array_equal(np.angle(a_minus + 1.0), -np.angle(a + 1.0))
        assert np.array_equal(F_of_alpha(alpha, a_minus, 1.0, -3.0), F_of_alpha(alpha, a, 1.0, -3.0))
        assert np.array_equal(np.abs(a_minus), np.abs(a))
        if 8.0 - 9.0 * c3 < 0.0:
            continue

        assert np.array_equal(c_modulus(alpha, a_minus, -3.0), c_modulus(alpha, a, -3.0))
        gamma = [
            hopf_coefficients(alpha, x, c_of(alpha, 0.0, x, 1.0, -3.0), mu_of(1.0, x, 1.0), 1.0, -3.0).gamma
            for x in (a, a_minus)
        ]
        np.testing.assert_allclose(np.abs(gamma[1]) ** 2, np.abs(gamma[0]) ** 2, rtol=1e-13)


def test_obtuse_side_mirrors_acute(anchor_params):
    assert a_of_alpha(np.pi - ANCHOR_ALPHA, anchor_params) == pytest.approx(
        a_of_alpha(ANCHOR_ALPHA, anchor_params), rel=1e-12
    )




#Ordinary differential equations in alpha
def test_F_anchor(anchor_a):
    F = F_of_alpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)
    assert F == pytest.approx(-1.9629791, rel=1e-7)
    assert F == pytest.approx(-3.4 / np.sqrt(3.0), rel=1e-12)


def test_F_vanishes_at_right_angle(anchor_a):
    assert F_of_alpha(np.pi / 2, anchor_a, 1.0, -3.0) == pytest.approx(0.0, abs=1e-13)


def test_F_with_a_equal_b():
    alpha = 1.1
    expected = 1.5 * 2.0 * np.sin(alpha) ** 2 / 4.0 / np.tan(alpha)
    assert F_of_alpha(alpha, 1.0, 1.0, 2.0) == pytest.approx(expected, rel=1e-12)


def test_da_dalpha_matches_finite_difference(anchor_params, anchor_a):
    step = 1e-6
    fd = (
        a_of_alpha(ANCHOR_ALPHA + step, anchor_params)
        - a_of_alpha(ANCHOR_ALPHA - step, anchor_params)
    ) / (2.0 * step)
    exact = da_dalpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)
    assert exact == pytest.approx(complex(-0.934759, -1.168044), abs=1e-5)
    assert abs(fd - exact) < 1e-6 * abs(exact)


def test_da_dalpha_trivial_and_scaling(anchor_a):
    assert da_dalpha(np.pi / 2, 1.0, 1.0, -3.0) == pytest.approx(0.0, abs=1e-13)
    double = da_dalpha(ANCHOR_ALPHA, 2.0 * anchor_a, 2.0, -12.0)
    assert double == pytest.approx(2.0 * da_dalpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0), rel=1e-13)


def test_d_abs_a_sq_dalpha(anchor_a):
    derivative = d_abs_a_sq_dalpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)
    chain = 2.0 * (np.conj(anchor_a) * da_dalpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)).real
    assert derivative == pytest.approx(chain, rel=1e-10)
    assert derivative == pytest.approx(1.11346, abs=1e-4)

    assert d_abs_a_sq_dalpha(0.7, 1j, 1.0, -3.0) == pytest.approx(0.0, abs=1e-15)
    assert d_abs_a_sq_dalpha(np.pi / 2, anchor_a, 1.0, -3.0) == pytest.approx(0.0, abs=1e-13)


def test_re_da_dalpha_sum(rng):
    a = rng.normal(size=50) + 1j * rng.normal(size=50)
    alpha = rng.uniform(0.2, 1.4, 50)
    expected = 2.0 * np.real(da_dalpha(alpha, a, 1.3, -2.0))
    np.testing.assert_allclose(re_da_dalpha_sum(alpha, a, 1.3, -2.0), expected, rtol=1e-9, atol=1e-9)


def test_dlogmu_dalpha(anchor_a):
    value = dlogmu_dalpha(ANCHOR_ALPHA, anchor_a, 1.0)
    assert value == pytest.approx(complex(3.1176915, 2.0655909), abs=1e-6)
    tau = tau_of_a(anchor_a, 1.0)
    assert value == pytest.approx(-np.conj(tau) / np.sqrt(3.0), rel=1e-12)
    assert dlogmu_dalpha(0.9, 1.0, 1.0) == 0.0


def test_dtau_dalpha_is_the_moebius_image(anchor_a):
    tau = tau_of_a(anchor_a, 1.0)
    chain = 2.0 / (anchor_a + 1.0) ** 2 * da_dalpha(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)
    value = dtau_dalpha(ANCHOR_ALPHA, tau)
    assert value == pytest.approx(chain, rel=1e-10)
    assert value == pytest.approx(complex(-39.91, 4.96), abs=0.02)


def test_cot_rejects_holomorphic_points():
    with pytest.raises(SingularAngle):
        F_of_alpha(0.0, 0.5, 1.0, -3.0)




#Metric and normal data
def test_mu(anchor_a):
    assert mu_of(1.0, 0.0, 1.0) == 1.0
    mu = mu_of(1.0, anchor_a, 1.0)
    assert mu == pytest.approx(complex(3.2, -1.7888544), abs=1e-6)
    assert abs(mu) ** 2 == pytest.approx(1.0 / 0.0744048, rel=1e-6)
    assert mu_of(2.0, anchor_a, 1.0) == 2.0 * mu


def test_c_modulus(anchor_a):
    assert c_modulus(ANCHOR_ALPHA, anchor_a, -3.0) == pytest.approx(0.4724556, rel=1e-6)
    assert ricci_radicand(ANCHOR_ALPHA, anchor_a, -3.0) == pytest.approx(0.2232143, rel=1e-6)
    assert c_modulus_closed(ANCHOR_ALPHA, 1.0, 0.5) == pytest.approx(
        c_modulus(ANCHOR_ALPHA, anchor_a, -3.0), rel=1e-12
    )
    assert c_modulus(0.8, 0.3 + 0.4j, 0.0) == pytest.approx(0.5, rel=1e-14)
    assert c_modulus(alpha_from_sin_sq(2.0 / 3.0), 0.0, 5.0) == pytest.approx(0.0, abs=1e-7)


def test_radicand_is_negative_on_high_pos(rng):
    params, alpha = sample_branch(rng, 0.95, 200)
    a = a_of_alpha(alpha, params)
    assert np.all(ricci_radicand(alpha, a, params.rho) < 0.0)
    with pytest.raises(NegativeRadicand):
        c_modulus(alpha, a, params.rho)
    with pytest.raises(NegativeRadicand):
        c_modulus_closed(alpha, 1.0, 0.95)


def test_c_phase(anchor_a):
    c = c_of(ANCHOR_ALPHA, 0.0, anchor_a, 1.0, -3.0)
    theta = np.angle(anchor_a + 1.0)
    assert theta == pytest.approx(0.50964, abs=1e-5)
    assert abs(c) == pytest.approx(0.4724556, rel=1e-6)
    assert np.angle(c) == pytest.approx(-2.0 * theta, rel=1e-12)
    assert c_of(ANCHOR_ALPHA, 3.7, anchor_a, 1.0, -3.0) == c

    real = c_of(0.8, 0.0, 0.5, 1.0, -3.0)
    assert real.imag == 0.0 and real.real > 0.0


def test_c_with_nonzero_k1(anchor_a):
    c0 = c_of(ANCHOR_ALPHA, 0.0, anchor_a, 1.0, -3.0)
    c = c_of(ANCHOR_ALPHA, 0.5, anchor_a, 1.0, -3.0, k1=2.0)
    assert c == pytest.approx(c0 * np.exp(-1j), rel=1e-14)




#k1 = 0 and the rho constraint
def test_k1_vanishes_on_family(anchor_a):
    mu = mu_of(1.0, anchor_a, 1.0)
    assert abs(k1_expression(ANCHOR_ALPHA, anchor_a, mu, 1.0, -3.0)) < 1e-10
    assert abs(k1_numerator_residual(ANCHOR_ALPHA, anchor_a, 1.0)) < 1e-10
    assert k1_expression(ANCHOR_ALPHA, anchor_a, mu, 1.0, 0.0) == 0.0


def test_k1_numerator_residual_trivial_cases():
    for s in (0.2, 0.6, 0.95):
        assert k1_numerator_residual(alpha_from_sin_sq(s), -2.0, 2.0) == pytest.approx(0.0, abs=1e-12)
    assert k1_numerator_residual(np.pi / 2, 1.0, 1.0) == pytest.approx(36.0, rel=1e-14)


def test_k1_numerator_vanishes_across_branches(rng):
    for c3 in (0.3, 1.2, -0.5):
        params, alpha = sample_branch(rng, c3, 200)
        residual = k1_numerator_residual(alpha, a_of_alpha(alpha, params), 1.0)
        assert np.max(np.abs(residual)) < 1e-10


def test_angle_factor_product(anchor_a):
    assert angle_factor_product(ANCHOR_ALPHA, anchor_a, 1.0, -3.0) == 0.0
    assert abs(angle_factor_product(ANCHOR_ALPHA, anchor_a, 1.0, -3.03)) > 1e-4




#Curvature
def test_curvature_anchor(anchor_a):
    K_gauss = gauss_curvature_from_a(ANCHOR_ALPHA, anchor_a, 1.0, -3.0)
    K_closed = gauss_curvature_closed(ANCHOR_ALPHA, 1.0, 0.5)
    assert K_closed == pytest.approx(-2.8928571428571, rel=1e-12)
    assert K_gauss == pytest.approx(K_closed, rel=1e-12)


def test_curvature_trivial_cases():
    assert gauss_curvature_from_a(np.pi / 2, -1.0, 1.0, 7.0) == pytest.approx(0.0, abs=1e-14)
    assert gauss_curvature_from_a(0.0, 0.0, 1.5, -0.5) == pytest.approx(4.0 * 2.25 - 3.0)
    assert gauss_curvature_closed(alpha_from_sin_sq(EIGHT_NINTHS), 1.5, 0.3) == pytest.approx(-4.5)
    assert real_a_curvatures(-1.0, 1.0) == (-2.0, -2.0)
    assert real_a_curvatures(0.0, 1.0) == (-2.0, -6.0)


def test_dual_curvature_formulas(rng):
    for c3 in (0.2, 0.6, 0.95, 1.5, -0.25, -2.0):
        params, alpha = sample_branch(rng, c3, 1700)
        a = a_of_alpha(alpha, params)
        K_gauss = gauss_curvature_from_a(alpha, a, 1.0, params.rho)
        K_closed = gauss_curvature_closed(alpha, 1.0, c3)
        assert np.max(np.abs(K_gauss - K_closed)) <= 1e-9


@pytest.mark.parametrize('c3', [0.1, 0.3, 0.5, 0.7, 0.85])
def test_curvature_bound(c3):
    interval = admissible_intervals(c3)[0]
    s = interval.lo + interval.width * np.arange(1, 1001) / 1001
    K = gauss_curvature_closed(alpha_from_sin_sq(s), 1.0, c3)
    assert np.max(K) <= -2.0 + 1e-9
    limit = gauss_curvature_closed(alpha_from_sin_sq(EIGHT_NINTHS), 1.0, c3)
    assert limit == pytest.approx(-2.0, abs=1e-6)




#Hopf data
def test_gamma_anchor(anchor_a):
    c = c_of(ANCHOR_ALPHA, 0.0, anchor_a, 1.0, -3.0)
    mu = mu_of(1.0, anchor_a, 1.0)
    hopf = hopf_coefficients(ANCHOR_ALPHA, anchor_a, c, mu, 1.0, -3.0)
    assert abs(hopf.gamma) ** 2 == pytest.approx(7.0, abs=1e-6)
    assert gamma_target(0.5) == 7.0
    assert hopf.c1 == hopf.phi1_coeff and hopf.c2 == hopf.phi2_coeff
    assert abs(hopf.k1) < 1e-10
    assert gamma_numerator_residual(ANCHOR_ALPHA, anchor_a, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_gamma_modulus_random_families(rng):
    for _ in range(20):
        b = rng.uniform(0.5, 3.0)
        c3 = rng.uniform(0.05, 0.85) if rng.uniform() < 0.5 else -rng.uniform(0.05, 3.0)
        interval = admissible_intervals(c3)[0]
        params = ModelParams(b=b, c3=c3, branch=interval.branch)
        s = interval.lo + interval.width * rng.uniform(0.05, 0.95, 30)
        alpha = alpha_from_sin_sq(s)

        a = a_of_alpha(alpha, params)
        c = c_of(alpha, 0.0, a, b, params.rho)
        gamma = hopf_coefficients(alpha, a, c, mu_of(1.0, a, b), b, params.rho).gamma
        assert np.max(np.abs(np.abs(gamma) ** 2 - gamma_target(c3))) <= 1e-8
        assert np.max(np.abs(gamma - gamma.mean())) <= 1e-8


def test_hopf_rejects_zero_c(anchor_a):
    with pytest.raises(ZeroC):
        hopf_coefficients(ANCHOR_ALPHA, anchor_a, 0.0, 1.0, 1.0, -3.0, require_gamma=True)


def test_hopf_zero_c_keeps_coefficients():
    hopf = hopf_coefficients(0.7, 0.2 + 0.1j, 0.0, 1.0, 1.0, -3.0)
    assert hopf.phi2_coeff == 0.0
    assert np.isnan(hopf.gamma)
    assert np.isfinite(hopf.k1)
    assert hopf.phi1_coeff == pytest.approx(8.0 * (0.2 + 0.1j) + 9.0 * np.sin(0.7) ** 2)


def test_hopf_trivial_point():
    #a = 0 and rho = 0: both terms of phi1 vanish and k1 has no denominator
    hopf = hopf_coefficients(0.7, 0.0, 0.3 + 0.2j, 1.0, 1.0, 0.0)
    assert hopf.phi1_coeff == 0.0
    assert hopf.phi2_coeff == pytest.approx(0.3 - 0.2j)
    assert np.isnan(hopf.k1)


def test_q_sum_and_difference(rng):
    n = 500
    alpha = rng.uniform(0.1, 3.0, n)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    mu = rng.normal(size=n) + 1j * rng.normal(size=n)
    b, rho = rng.uniform(0.5, 2.0), rng.uniform(-5.0, 5.0)

    hopf = hopf_coefficients(alpha, a, c, mu, b, rho)
    s = np.sin(alpha) ** 2
    scale = 16.0 * b * (np.abs(a) + np.abs(c)) + 6.0 * abs(rho)
    np.testing.assert_allclose(
        hopf.q_coeff - hopf.qprime_coeff, 2.0 * (8.0 * a * b - 3.0 * rho * s), rtol=0, atol=1e-14 * scale.max()
    )
    np.testing.assert_allclose(
        hopf.q_coeff + hopf.qprime_coeff, 16.0 * b * np.conj(c), rtol=0, atol=1e-14 * scale.max()
    )
    np.testing.assert_allclose(
        hopf.phi1_coeff, mu ** 2 * (hopf.q_coeff - hopf.qprime_coeff) / 2.0,
        rtol=1e-12, atol=1e-13 * scale.max() * np.max(np.abs(mu)) ** 2
    )


def test_point_at(anchor_params):
    point = point_at(ANCHOR_ALPHA, anchor_params)
    assert point.y ** 2 == pytest.approx(12.8, rel=1e-12)
    assert point.c_modulus == pytest.approx(0.4724556, rel=1e-6)
    assert point.nu == pytest.approx(-2.0 * point.theta, rel=1e-12)
    assert point.mu == pytest.approx(complex(3.2, -1.7888544), abs=1e-6)
