from .components import (
    EIGHT_NINTHS, ENDPOINT_GUARD,
    GeometryError, DegenerateConstant, OutsideAdmissibleRegion, SingularDenominator,
    SingularAngle, NegativeRadicand, ZeroC, InadmissibleStart, NonFiniteState,
    GridTooSmall, NonUniformGrid, ConfigError,
    Branch, ImSign, AlphaSide, StopReason, parse_enum,
    SinSqInterval, ModelParams, SecondFundamentalPoint, HopfCoefficients, ResidualEntry
)
from .formulas import (
    admissible_intervals, branch_interval, alpha_from_sin_sq, default_alpha0,
    y_squared, a_of_alpha, tau_of_a, a_of_tau, tau_real_part, abs_a_sq_from_tau,
    F_of_alpha, da_dalpha, d_abs_a_sq_dalpha, re_da_dalpha_sum, dlogmu_dalpha,
    dtau_dalpha, y_sq_ode_residual, mu_of, ricci_radicand, c_modulus, c_modulus_closed,
    c_of, k1_expression, k1_numerator_residual, angle_factor_product,
    gauss_curvature_from_a, gauss_curvature_closed, real_a_curvatures,
    gamma_target, gamma_numerator_residual, hopf_coefficients, point_at
)
