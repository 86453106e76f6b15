"""
Closed-form pointwise evaluators for parallel mean curvature surfaces of general type
in a complex space form.

Every function accepts scalars or numpy arrays (broadcasting as numpy does) and returns
python scalars for scalar input. Validation is done on the whole input: a single
offending element raises.
"""
import numpy as np
from .components import (
    EIGHT_NINTHS, DEGENERACY_EPS, SINGULAR_EPS,
    Branch, AlphaSide, SinSqInterval, SecondFundamentalPoint, HopfCoefficients,
    DegenerateConstant, OutsideAdmissibleRegion, SingularDenominator,
    SingularAngle, NegativeRadicand, ZeroC
)





def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def _abs2(z):
    z = np.asarray(z)
    return z.real * z.real + z.imag * z.imag


def _sin_sq(alpha):
    sin_alpha = np.sin(alpha)
    return sin_alpha * sin_alpha


def _cot(alpha):
    sin_alpha = np.sin(np.asarray(alpha, dtype=float))
    if np.any(np.abs(sin_alpha) < SINGULAR_EPS):
        raise SingularAngle("sin(alpha) vanishes: holomorphic or anti-holomorphic point")
    return np.cos(alpha) / sin_alpha


def _check_denominator(z, b, what):
    if np.any(np.abs(np.asarray(z)) < SINGULAR_EPS * b):
        raise SingularDenominator(f"{what} vanishes")


def _check_c3(c3):
    if c3 == 0.0:
        raise DegenerateConstant("c3 = 0 forces Im a = 0 (a real)")
    if abs(8.0 - 9.0 * c3) < DEGENERACY_EPS:
        raise DegenerateConstant("8 - 9 c3 = 0 forces y^2 < 0")




#Admissible domain
def admissible_intervals(c3):
    _check_c3(c3)

    if c3 < 0.0:
        return [SinSqInterval(EIGHT_NINTHS, 1.0, Branch.NEG, hi_closed=True)]

    if c3 < EIGHT_NINTHS:
        return [SinSqInterval(c3, EIGHT_NINTHS, Branch.LOW_POS)]

    #sin^2 = 1 is a regular point once c3 exceeds it
    if c3 > 1.0:
        return [SinSqInterval(EIGHT_NINTHS, 1.0, Branch.HIGH_POS, hi_closed=True)]
    return [SinSqInterval(EIGHT_NINTHS, c3, Branch.HIGH_POS)]



def branch_interval(params):
    for interval in admissible_intervals(params.c3):
        if interval.branch is params.branch:
            return interval
    raise OutsideAdmissibleRegion(
        f"branch {params.branch.value} is empty for c3 = {params.c3}"
    )



def alpha_from_sin_sq(s, side=AlphaSide.ACUTE):
    alpha = np.arcsin(np.sqrt(s))
    if side is AlphaSide.OBTUSE:
        alpha = np.pi - alpha
    return _out(alpha)



def default_alpha0(params):
    return alpha_from_sin_sq(branch_interval(params).midpoint, params.alpha_side)



def y_squared(s, c3):
    s = np.asarray(s, dtype=float)
    lin = 8.0 - 9.0 * s
    gap = s - c3
    if np.any(np.abs(lin) < DEGENERACY_EPS) or np.any(np.abs(gap) < DEGENERACY_EPS):
        raise OutsideAdmissibleRegion("sin^2(alpha) sits on a pole of y^2")

    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        y_sq = 8.0 * c3 / (lin * gap)
    if not np.all(np.isfinite(y_sq) & (y_sq > 0.0)):
        raise OutsideAdmissibleRegion("y^2 is not positive: sin^2(alpha) outside the admissible set")
    return _out(y_sq)




#Second fundamental form of the family
def a_of_alpha(alpha, params):
    alpha = np.asarray(alpha, dtype=float)
    s = _sin_sq(alpha)
    interval = branch_interval(params)

    inside = np.vectorize(lambda x: interval.contains(x, params.delta), otypes=[bool])(s)
    if not np.all(inside):
        raise OutsideAdmissibleRegion(
            f"sin^2(alpha) leaves {interval.describe()} (guard {params.delta:g})"
        )
    y_squared(s, params.c3)

    c3, b = params.c3, params.b
    lin = 8.0 - 9.0 * c3
    re_factor = (-16.0 * c3 + (8.0 + 27.0 * c3) * s - 18.0 * s * s) / (lin * s)

    if c3 > 0.0:
        root = np.sqrt((8.0 - 9.0 * s) * (s - c3))
        im_factor = np.sqrt(c3) / (np.sqrt(2.0) * lin) * (8.0 - 9.0 * s) * root / s
    else:
        c4 = params.c4
        root = np.sqrt((9.0 * s - 8.0) * (c4 + s))
        im_factor = np.sqrt(c4) / (np.sqrt(2.0) * (8.0 + 9.0 * c4)) * (9.0 * s - 8.0) * root / s

    re_a = b * re_factor
    im_a = b * im_factor
    if params.im_sign.factor < 0.0:
        im_a = -im_a
    return _out(re_a + 1j * im_a)



def tau_of_a(a, b):
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")
    return _out((a - b) / (a + b))



def a_of_tau(tau, b):
    tau = np.asarray(tau, dtype=complex)
    _check_denominator(1.0 - tau, 1.0, "1 - tau")
    return _out(b * (1.0 + tau) / (1.0 - tau))



def tau_real_part(s):
    s = np.asarray(s, dtype=float)
    return _out(-9.0 * s / (8.0 - 9.0 * s))



def abs_a_sq_from_tau(tau, b):
    tau = np.asarray(tau, dtype=complex)
    trace = 2.0 * tau.real
    norm = _abs2(tau)
    return _out(b * b * (1.0 + trace + norm) / (1.0 - trace + norm))




#Ordinary differential equations in alpha
def F_of_alpha(alpha, a, b, rho):
    cot = _cot(alpha)
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")

    numerator = _abs2(a - b) + 1.5 * rho * _sin_sq(alpha)
    return _out(numerator / _abs2(a + b) * cot)



def da_dalpha(alpha, a, b, rho):
    cot = _cot(alpha)
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")

    bracket = -2.0 * b * a + 2.0 * _abs2(a) + 1.5 * rho * _sin_sq(alpha)
    return _out(cot / (np.conj(a) + b) * bracket)



def d_abs_a_sq_dalpha(alpha, a, b, rho):
    """d|a|^2/dalpha along the family (uses the k1 = 0 constraint)."""
    cot = _cot(alpha)
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")

    abs_sq = _abs2(a)
    lead = (abs_sq - b * b) * (4.0 * abs_sq - 4.0 / 3.0 * rho + 3.0 * rho * _sin_sq(alpha))
    return _out(cot / _abs2(a + b) * lead)



def re_da_dalpha_sum(alpha, a, b, rho):
    """da/dalpha + conj(da/dalpha) regrouped around |a|^2 - b^2."""
    cot = _cot(alpha)
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")

    abs_sq, trace = _abs2(a), 2.0 * a.real
    scale = cot / _abs2(a + b)
    inner = -2.0 * b * trace + 2.0 * b * b + 2.0 * abs_sq + 1.5 * rho * _sin_sq(alpha)
    return _out(4.0 * b * scale * (abs_sq - b * b) + scale * (trace + 2.0 * b) * inner)



def dlogmu_dalpha(alpha, a, b):
    cot = _cot(alpha)
    a_bar = np.conj(np.asarray(a, dtype=complex))
    _check_denominator(a_bar + b, b, "conj(a) + b")
    return _out(-(a_bar - b) / (a_bar + b) * cot)



def dtau_dalpha(alpha, tau):
    """Right-hand side of the Moebius-transformed equation for tau (rho = -3b^2)."""
    cot = _cot(alpha)
    tau = np.asarray(tau, dtype=complex)
    tau_bar = np.conj(tau)
    sin_cos = np.sin(alpha) * np.cos(alpha)
    return _out(
        (1.0 + tau) * (1.0 - tau) * tau_bar * cot
        - 9.0 / 8.0 * (1.0 - tau) ** 2 * (1.0 - tau_bar) * sin_cos
    )



def y_sq_ode_residual(alpha, y_sq, dy_sq):
    cot = _cot(alpha)
    lin = 8.0 - 9.0 * _sin_sq(alpha)
    return _out(
        dy_sq + 4.0 * cot * (4.0 - 9.0 * _sin_sq(alpha)) / lin * y_sq
        + cot * lin / 4.0 * y_sq * y_sq
    )




#Metric and normal data
def mu_of(g, a, b):
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")
    return _out(g / (a + b))



def ricci_radicand(alpha, a, rho):
    return _out(_abs2(a) + 0.5 * rho * (-2.0 + 3.0 * _sin_sq(alpha)))



def c_modulus(alpha, a, rho):
    radicand = np.asarray(ricci_radicand(alpha, a, rho))
    #roundoff floor for radicands that vanish exactly
    floor = -1e-14 * (_abs2(a) + abs(rho))
    if np.any(radicand < floor):
        raise NegativeRadicand(f"|c|^2 = {np.min(radicand):.6g} < 0")
    return _out(np.sqrt(np.maximum(radicand, 0.0)))



def c_modulus_closed(alpha, b, c3):
    """|c| on the family: |c|^2 = b^2 (9 sin^2 - 8)^2 / (2 (8 - 9 c3))."""
    _check_c3(c3)
    lin = 8.0 - 9.0 * c3
    if lin < 0.0:
        raise NegativeRadicand("|c|^2 < 0 whenever 8 - 9 c3 < 0")
    excess = 9.0 * _sin_sq(alpha) - 8.0
    return _out(b * np.abs(excess) / np.sqrt(2.0 * lin))



def c_of(alpha, v, a, b, rho, k1=0.0):
    a = np.asarray(a, dtype=complex)
    _check_denominator(a + b, b, "a + b")
    modulus = np.asarray(c_modulus(alpha, a, rho))
    c = modulus * ((np.conj(a) + b) / (a + b))

    if k1 != 0.0:
        c = c * np.exp(-1j * k1 * np.asarray(v, dtype=float))
    else:
        c = c + 0.0 * np.asarray(v, dtype=float)
    return _out(c)



def k1_expression(alpha, a, mu, b, rho):
    cot = _cot(alpha)
    a = np.asarray(a, dtype=complex)
    radicand = np.asarray(ricci_radicand(alpha, a, rho))
    denominator = (np.conj(a) + b) * radicand
    #both factors vanish together at sin^2 = 8/9, so only an exact zero is singular
    if np.any(denominator == 0.0):
        raise SingularDenominator("(conj(a) + b) |c|^2 vanishes")

    numerator = k1_numerator_residual(alpha, a, b)
    return _out(0.5 * rho * np.asarray(mu) * numerator / denominator * cot)



def k1_numerator_residual(alpha, a, b):
    a = np.asarray(a, dtype=complex)
    s = _sin_sq(alpha)
    return _out(
        8.0 * _abs2(a) + 9.0 * b * (2.0 * a.real) * s - 8.0 * b * b + 18.0 * b * b * s
    )



def angle_factor_product(alpha, a, b, rho):
    """Vanishes on a general-type k1 = 0 surface; the last factor forces rho = -3b^2."""
    cot = _cot(alpha)
    return _out(
        cot * (_sin_sq(alpha) - EIGHT_NINTHS) * (_abs2(a) - b * b) * (rho + 3.0 * b * b)
    )




#Curvature
def gauss_curvature_from_a(alpha, a, b, rho):
    cos_alpha = np.cos(alpha)
    return _out(-4.0 * (_abs2(a) - b * b) + 6.0 * rho * cos_alpha * cos_alpha)



def gauss_curvature_closed(alpha, b, c3):
    lin = 8.0 - 9.0 * c3
    if abs(lin) < DEGENERACY_EPS:
        raise DegenerateConstant("8 - 9 c3 = 0")

    excess = 9.0 * _sin_sq(alpha) - 8.0
    factor = -2.0 / lin * (excess * excess + lin)
    return _out(b * b * factor)



def real_a_curvatures(a, b):
    """(constant-alpha value, nonconstant-alpha value) when a is real."""
    return -2.0 * b * b, -2.0 * (2.0 * (a + b) ** 2 + b * b)




#Hopf differentials
def gamma_target(c3):
    return 2.0 * (8.0 - 9.0 * c3)



def gamma_numerator_residual(alpha, a, b):
    s = _sin_sq(alpha)
    a = np.asarray(a, dtype=complex)
    excess = 9.0 * s - 8.0
    return _out(_abs2(8.0 * a + 9.0 * b * s) - b * b * excess * excess)



def hopf_coefficients(alpha, a, c, mu, b, rho, require_gamma=False):
    """
    Pointwise Hopf data. gamma is NaN where c = 0 and k1 is NaN where its
    denominator (conj(a) + b) |c|^2 vanishes; require_gamma turns c = 0 into ZeroC.
    c1 and c2 are the pointwise values of the two coefficients; on a surface
    they are the constants, and build_grid stores their grid means.
    """
    alpha = np.asarray(alpha, dtype=float)
    a = np.asarray(a, dtype=complex)
    c_bar = np.conj(np.asarray(c, dtype=complex))
    mu = np.asarray(mu, dtype=complex)
    mu_sq = mu ** 2
    s_term = 3.0 * rho * _sin_sq(alpha)

    core = 8.0 * b * a - s_term
    phi1 = mu_sq * core
    phi2 = mu_sq * c_bar

    zero_c = c_bar == 0.0
    if require_gamma and np.any(zero_c):
        raise ZeroC("gamma is undefined where c = 0")
    with np.errstate(invalid='ignore', divide='ignore'):
        gamma = np.where(zero_c, np.nan + 0j, core / (b * np.where(zero_c, 1.0, c_bar)))

    alpha, a, mu = np.broadcast_arrays(alpha, a, mu)
    radicand = np.asarray(ricci_radicand(alpha, a, rho))
    defined = (np.conj(a) + b) * radicand != 0.0
    k1 = np.full(defined.shape, np.nan)
    if np.any(defined):
        k1[defined] = np.real(np.asarray(
            k1_expression(alpha[defined], a[defined], mu[defined], b, rho)
        ))

    return HopfCoefficients(
        phi1_coeff=_out(phi1),
        phi2_coeff=_out(phi2),
        q_coeff=_out(8.0 * b * (c_bar + a) - s_term),
        qprime_coeff=_out(8.0 * b * (c_bar - a) + s_term),
        c1=_out(phi1),
        c2=_out(phi2),
        gamma=_out(gamma),
        k1=_out(k1)
    )




def point_at(alpha, params, g=1.0, v=0.0):
    """Every pointwise quantity of the family at one Kaehler angle."""
    b, rho = params.b, params.rho
    a = a_of_alpha(alpha, params)
    tau = tau_of_a(a, b)
    c = c_of(alpha, v, a, b, rho)

    return SecondFundamentalPoint(
        alpha=float(alpha),
        a=a,
        tau=tau,
        y=float(np.imag(tau)),
        c=c,
        c_modulus=abs(c),
        theta=float(np.angle(a + b)),
        nu=float(np.angle(c)),
        mu=mu_of(g, a, b),
        g=float(g)
    )
