from .family import load_params, load_alpha0, resolve_branch, print_params_desc, anchor_summary
from .integrate import AlphaProfile, Integrator, integrate_profile
from .grid import GRID_COLUMNS, SurfaceGrid, build_grid
from .verify import (
    RESIDUALS, RESIDUAL_NAMES, ResidualReport, Verifier,
    run_residual_suite, negative_control, convergence_study
)
from .report import (
    SWEEP_COLUMNS, write_grid_csv, write_grid_json, write_report_json,
    sweep, sweep_c3, write_sweep_csv
)
