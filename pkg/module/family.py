from model import (
    ModelParams, Branch, ImSign, AlphaSide, ConfigError,
    parse_enum, admissible_intervals, branch_interval, default_alpha0,
    gauss_curvature_closed, c_modulus_closed, gamma_target
)




def print_params_desc(params):
    interval = branch_interval(params)
    lin = 8.0 - 9.0 * params.c3

    print(f"--- Family b = {params.b:g}, c3 = {params.c3:g}, rho = {params.rho:g}")
    print(f"--- Branch {params.branch.value}: sin^2(alpha) in {interval.describe()}")
    print(f"--- Im a sign: {params.im_sign.value} | alpha side: {params.alpha_side.value}")
    if lin > 0.0:
        print(f"--- |gamma|^2 target: {gamma_target(params.c3):.6f} | K <= {-2.0 * params.b ** 2:g}\n")
    else:
        print("--- 8 - 9 c3 < 0: Ricci radicand is negative, c is undefined on this branch\n")




def resolve_branch(c3, branch):
    if branch is None or str(branch).lower() == 'auto':
        return admissible_intervals(c3)[0].branch
    return parse_enum(Branch, branch)




def load_params(config):
    """Builds ModelParams from a flattened run config (rho pinned to -3 b^2)."""
    try:
        params = ModelParams(
            b=float(config.b),
            c3=float(config.c3),
            branch=resolve_branch(float(config.c3), config.branch),
            im_sign=parse_enum(ImSign, config.im_sign),
            alpha_side=parse_enum(AlphaSide, config.alpha_side),
            delta=float(config.delta)
        )
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err

    #Fail early on an empty branch
    branch_interval(params)
    return params




def load_alpha0(config, params):
    if getattr(config, 'alpha0', None) is None:
        return default_alpha0(params)
    return float(config.alpha0)




def anchor_summary(alpha, params):
    """Closed-form curvature and |c| at one angle, used by the CLI banner."""
    K = gauss_curvature_closed(alpha, params.b, params.c3)
    if 8.0 - 9.0 * params.c3 > 0.0:
        return K, c_modulus_closed(alpha, params.b, params.c3)
    return K, float('nan')
