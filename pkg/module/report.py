import csv, json
import numpy as np
from pathlib import Path
from model import (
    EIGHT_NINTHS, DegenerateConstant, ConfigError, ModelParams,
    admissible_intervals, alpha_from_sin_sq, a_of_alpha, mu_of, c_of,
    gauss_curvature_closed, gamma_target, hopf_coefficients
)
from .grid import GRID_COLUMNS




SWEEP_COLUMNS = (
    'c3', 'branch', 'sin_sq', 'alpha', 'K_closed', 'K_sup',
    'gamma_gap', 'K_limit', 'bound_ok', 'gamma_ok'
)

BOUND_SLACK = 1e-9
GAMMA_SLACK = 1e-8




def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return format(float(value), '.17g')
    return str(value)



def _jsonable(value):
    """numpy scalars to python, nan/inf to null."""
    if isinstance(value, dict):
        return {key: _jsonable(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(val) for val in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value



def _prepare(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path



def _write_csv(path, header, rows):
    with open(_prepare(path), 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(value) for value in row])



def _write_json(path, payload):
    with open(_prepare(path), 'w', encoding='utf-8') as f:
        json.dump(_jsonable(payload), f, indent=2)
        f.write('\n')




#Grid and report files
def write_grid_csv(grid, path):
    _write_csv(path, GRID_COLUMNS, grid.rows())
    return Path(path)



def write_grid_json(grid, path):
    profile = grid.profile
    payload = {
        'params': grid.params.as_dict(),
        'grid': {
            'u_count': grid.shape[0], 'v_count': grid.shape[1], 'h': profile.h,
            'stop_reason': profile.stop_reason.value,
            'invalid_nodes': grid.invalid_count
        },
        'columns': list(GRID_COLUMNS),
        'rows': [list(row) for row in grid.rows()]
    }
    _write_json(path, payload)
    return Path(path)



def write_report_json(report, path):
    _write_json(path, report.as_dict())
    return Path(path)




#Curvature and gamma landscape over c3
def _check_range(c3_lo, c3_hi):
    if not c3_lo <= c3_hi:
        raise ConfigError(f"empty c3 range [{c3_lo}, {c3_hi}]")
    for excluded in (0.0, EIGHT_NINTHS):
        if c3_lo <= excluded <= c3_hi:
            raise DegenerateConstant(f"c3 range [{c3_lo}, {c3_hi}] contains {excluded:g}")



def sweep_c3(b, c3, samples):
    """Rows for one c3: interior sin^2 samples of every admissible interval."""
    if samples < 1:
        raise ConfigError("samples must be positive")

    rows = []
    for interval in admissible_intervals(c3):
        params = ModelParams(b=b, c3=c3, branch=interval.branch)
        #samples stay inside the same guard a_of_alpha enforces
        lo = interval.lo + params.delta
        hi = interval.hi if interval.hi_closed else interval.hi - params.delta
        s = lo + (hi - lo) * np.arange(1, samples + 1) / (samples + 1)
        alpha = np.asarray(alpha_from_sin_sq(s), dtype=float)

        K = np.asarray(gauss_curvature_closed(alpha, b, c3), dtype=float)
        K_sup = float(K.max())
        K_limit = gauss_curvature_closed(alpha_from_sin_sq(EIGHT_NINTHS), b, c3)

        #|c|^2 < 0 on the whole interval when 8 - 9 c3 < 0
        applicable = 8.0 - 9.0 * c3 > 0.0
        if applicable:
            a = np.asarray(a_of_alpha(alpha, params))
            c = c_of(alpha, 0.0, a, b, params.rho)
            gamma = hopf_coefficients(alpha, a, c, mu_of(1.0, a, b), b, params.rho).gamma
            gap = np.abs(np.asarray(gamma)) ** 2 - gamma_target(c3)
        else:
            gap = np.full(s.shape, np.nan)

        for k in range(s.size):
            rows.append((
                c3, interval.branch.value, s[k], alpha[k], K[k], K_sup, gap[k], K_limit,
                bool(K[k] <= -2.0 * b * b + BOUND_SLACK * b * b) if applicable else None,
                bool(abs(gap[k]) <= GAMMA_SLACK) if applicable else None
            ))
    return rows



def sweep(b, c3_lo, c3_hi, steps, samples):
    _check_range(c3_lo, c3_hi)
    if steps < 1:
        raise ConfigError("steps must be positive")

    rows = []
    for c3 in np.linspace(c3_lo, c3_hi, steps):
        rows.extend(sweep_c3(b, float(c3), samples))
    return rows



def write_sweep_csv(rows, path):
    _write_csv(path, SWEEP_COLUMNS, rows)
    return Path(path)
