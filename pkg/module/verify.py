import numpy as np
from dataclasses import dataclass, field
from model import (
    ResidualEntry, GridTooSmall, NonUniformGrid, ConfigError,
    branch_interval, default_alpha0, dlogmu_dalpha, da_dalpha, d_abs_a_sq_dalpha,
    dtau_dalpha, y_sq_ode_residual, k1_expression, k1_numerator_residual,
    angle_factor_product, gamma_target
)
from .integrate import integrate_profile
from .grid import build_grid




#name: (relation, kind, default tolerance)
RESIDUALS = {
    'dalpha_structure':   ("structure equation for d alpha", 'fd', 2e-4),
    'dphi_structure':     ("structure equation for d phi", 'fd', 2e-4),
    'codazzi_a':          ("Codazzi equation for a", 'fd', 2e-4),
    'codazzi_c':          ("Codazzi equation for c", 'fd', 2e-4),
    'gauss_consistency':  ("Gauss equation against the conformal metric", 'fd', 2e-4),
    'ricci_radicand':     ("Ricci equation: |c|^2 > 0", 'analytic', 0.0),
    'hopf_constancy':     ("holomorphic Hopf coefficients are constant", 'analytic', 1e-6),
    'mu_ode':             ("d log mu / d alpha", 'fd', 2e-4),
    'a_ode':              ("d a / d alpha", 'fd', 2e-4),
    'y_ode_36':           ("Riccati-type equation for y^2", 'fd', 2e-4),
    'eq_33':              ("d |a|^2 / d alpha on the k1 = 0 family", 'fd', 2e-4),
    'k1_zero':            ("k1 expression, its numerator and the rho + 3b^2 factor", 'analytic', 1e-8),
    'log_mu2c_const':     ("d/du log(|mu|^2 |c|) = k1 = 0", 'fd', 2e-4),
    'gamma_lemma42':      ("|gamma|^2 = 2 (8 - 9 c3) and gamma constant", 'analytic', 1e-8),
    'curvature_bound':    ("K <= -2 b^2 when 8 - 9 c3 > 0", 'analytic', 1e-9),
    'closed_form_K':      ("Gauss equation against the closed curvature formula", 'analytic', 1e-9),
    'tau_ode':            ("Moebius-transformed equation for tau", 'fd', 2e-4),
}

RESIDUAL_NAMES = tuple(RESIDUALS)




@dataclass
class ResidualReport:
    entries: list
    provenance: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return all(entry.verdict for entry in self.entries)

    def entry(self, name):
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def failing(self):
        return [entry.name for entry in self.entries if not entry.verdict]

    def as_dict(self):
        return {
            'params': self.provenance.get('params', {}),
            'grid': self.provenance.get('grid', {}),
            'residuals': [
                {
                    'name': entry.name,
                    'relation': entry.relation,
                    'max_abs': entry.max_abs_residual,
                    'tolerance': entry.tolerance,
                    'order': entry.convergence_order,
                    'pass': entry.verdict
                }
                for entry in self.entries
            ],
            'verdict': 'pass' if self.verdict else 'fail'
        }




def _masked_max(values, mask):
    values = np.abs(np.asarray(values))
    if not np.any(mask):
        return float('inf')
    return float(np.max(values[mask]))



def _relative(diff, ref, mask):
    num, den = _masked_max(diff, mask), _masked_max(ref, mask)
    if not np.isfinite(num) or not np.isfinite(den):
        return float('nan') if np.any(mask) else float('inf')
    return num / den if den > 0.0 else num




class Verifier:
    """Finite-difference and closed-form residuals of the structure equations on a grid."""

    def __init__(self, grid, h, tolerances=None, band=0.25, exclude_boundary=True):
        self.grid = grid
        self.h = h
        self.band = band
        self.exclude_boundary = exclude_boundary

        unknown = set(tolerances or {}) - set(RESIDUALS)
        if unknown:
            raise ConfigError(f"unknown residual names: {sorted(unknown)}")
        self.tolerances = {name: row[2] for name, row in RESIDUALS.items()}
        self.tolerances.update(tolerances or {})

        params = grid.params
        self.b, self.rho, self.c3 = params.b, params.rho, params.c3
        self.interval = branch_interval(params)
        self.check_grid()


    def check_grid(self):
        nu, nv = self.grid.shape
        if nu < 5:
            raise GridTooSmall(f"need at least 5 u-nodes for the stencils, got {nu}")

        u = np.asarray(self.grid.u_nodes)
        if not np.allclose(np.diff(u), self.h, rtol=1e-9, atol=0.0):
            raise NonUniformGrid("u-nodes are not spaced by h")

        v = np.asarray(self.grid.v_nodes)
        self.hv = float(v[1] - v[0]) if nv > 1 else 1.0
        if not self.hv > 0.0:
            raise NonUniformGrid("v-nodes must be strictly increasing")
        if nv > 1 and not np.allclose(np.diff(v), self.hv, rtol=1e-9, atol=0.0):
            raise NonUniformGrid("v-nodes are not uniformly spaced")


    #Stencils
    def d_u(self, f):
        return np.gradient(f, self.h, axis=0, edge_order=2)

    def d_v(self, f):
        nv = f.shape[1]
        if nv == 1:
            return np.zeros_like(f)
        return np.gradient(f, self.hv, axis=1, edge_order=2 if nv >= 3 else 1)

    def laplacian(self, f):
        """5-point Laplacian on interior cells; returns (values, cell mask)."""
        nu, nv = f.shape
        lap = np.zeros_like(f)
        cells = np.zeros(f.shape, dtype=bool)

        lap[1:-1, :] = (f[2:, :] - 2.0 * f[1:-1, :] + f[:-2, :]) / self.h ** 2
        if nv >= 3:
            lap[1:-1, 1:-1] += (f[1:-1, 2:] - 2.0 * f[1:-1, 1:-1] + f[1:-1, :-2]) / self.hv ** 2
            cells[1:-1, 1:-1] = True
        else:
            cells[1:-1, :] = True
        return lap, cells


    def node_mask(self):
        """Every node, minus the first and last u-rows when the boundary is excluded."""
        keep = np.ones(self.grid.shape[0], dtype=bool)
        if self.exclude_boundary:
            keep[0] = keep[-1] = False
        return np.broadcast_to(keep[:, None], self.grid.shape)


    def band_mask(self):
        """Cells far enough from the singular interval endpoints (and off the boundary)."""
        s = np.sin(self.grid.profile.alpha) ** 2
        distance = np.array([self.interval.singular_distance(x) for x in s])
        keep = distance >= self.band * self.interval.width
        if self.exclude_boundary:
            keep[0] = keep[-1] = False

        mask = np.broadcast_to(keep[:, None], self.grid.shape)
        if not np.any(mask):
            raise GridTooSmall("no grid node lies inside the verification band")
        return mask


    def entry(self, name, value, **detail):
        relation, kind, _ = RESIDUALS[name]
        return ResidualEntry(
            name=name, relation=relation, max_abs_residual=float(value),
            tolerance=float(self.tolerances[name]), kind=kind, detail=detail
        )


    def verify(self):
        grid, b, rho = self.grid, self.b, self.rho
        mask = self.band_mask()
        mask_c = mask & grid.valid
        #pointwise relations need no stencil conditioning
        nodes = self.node_mask()
        checked = int(np.count_nonzero(nodes))

        alpha, a, mu, c, tau = grid.alpha, grid.a, grid.mu, grid.c, grid.tau
        sin_alpha, cos_alpha = np.sin(alpha), np.cos(alpha)
        cot = cos_alpha / sin_alpha
        mu_sq = np.abs(mu) ** 2
        a_bar = np.conj(a)
        alpha_u = self.d_u(alpha)
        entries = []

        #d alpha = (a + b) phi + conj
        flow = (a + b) * mu
        diff = np.maximum(
            np.abs(alpha_u - 2.0 * flow.real),
            np.abs(self.d_v(alpha) + 2.0 * flow.imag)
        )
        entries.append(self.entry('dalpha_structure', _relative(diff, 2.0 * flow.real, mask)))

        #d phi = (conj(a) - b) cot phi ^ conj(phi)
        rhs = 2.0 * (a_bar - b) * cot * mu_sq
        entries.append(self.entry('dphi_structure', _relative(self.d_u(mu) + rhs, rhs, mask)))

        #Codazzi for a and c
        a_u = self.d_u(a)
        rhs = 2.0 * (2.0 * a * (a_bar - b) * cot + 1.5 * rho * sin_alpha * cos_alpha) * mu_sq
        entries.append(self.entry('codazzi_a', _relative(a_u * mu - rhs, rhs, mask)))

        rhs = 4.0 * c * (a - b) * cot * mu_sq
        spread = _masked_max(c - c[:, :1], mask_c) if np.any(mask_c) else float('nan')
        entries.append(self.entry(
            'codazzi_c', _relative(self.d_u(c) * np.conj(mu) - rhs, rhs, mask_c),
            v_slice_spread=spread
        ))

        #Gauss curvature of |mu|^2 |dw|^2
        lap, cells = self.laplacian(np.log(np.abs(mu)))
        K_metric = -lap / mu_sq
        entries.append(self.entry(
            'gauss_consistency',
            _relative(K_metric - grid.K_gauss, grid.K_gauss, mask & cells)
        ))

        #Ricci radicand positivity
        radicand = grid.radicand[nodes]
        minimum = float(np.min(radicand))
        entries.append(self.entry(
            'ricci_radicand', max(0.0, -minimum) / b ** 2, min_radicand=minimum, nodes=checked
        ))

        #Hopf coefficients
        deviations = []
        for coeff in (grid.hopf.phi1_coeff, grid.hopf.phi2_coeff):
            if not np.any(mask_c):
                deviations.append(float('inf'))
                continue
            values = coeff[mask_c]
            mean = values.mean()
            deviations.append(float(np.max(np.abs(values - mean)) / abs(mean)))
        entries.append(self.entry(
            'hopf_constancy', max(deviations),
            phi1_deviation=deviations[0], phi2_deviation=deviations[1]
        ))

        #Ordinary differential equations in alpha
        lhs = self.d_u(mu) / mu / alpha_u
        rhs = np.asarray(dlogmu_dalpha(alpha, a, b))
        entries.append(self.entry('mu_ode', _relative(lhs - rhs, rhs, mask)))

        rhs = np.asarray(da_dalpha(alpha, a, b, rho))
        entries.append(self.entry('a_ode', _relative(a_u / alpha_u - rhs, rhs, mask)))

        y_sq = tau.imag ** 2
        dy_sq = self.d_u(y_sq) / alpha_u
        residual = np.asarray(y_sq_ode_residual(alpha, y_sq, dy_sq))
        entries.append(self.entry('y_ode_36', _relative(residual, dy_sq, mask)))

        rhs = np.asarray(d_abs_a_sq_dalpha(alpha, a, b, rho))
        lhs = self.d_u(np.abs(a) ** 2) / alpha_u
        entries.append(self.entry('eq_33', _relative(lhs - rhs, rhs, mask)))

        #k1 = 0 and the constraint that forces rho = -3 b^2
        numerator = np.asarray(k1_numerator_residual(alpha, a, b)) / b ** 2
        product = np.asarray(angle_factor_product(alpha, a, b, rho)) / b ** 4
        if np.any(mask_c):
            k1 = np.asarray(k1_expression(alpha[mask_c], a[mask_c], mu[mask_c], b, rho))
            k1_max = float(np.max(np.abs(k1)))
        else:
            k1_max = float('inf')
        numerator_max = _masked_max(numerator, mask)
        product_max = _masked_max(product, mask)
        entries.append(self.entry(
            'k1_zero', max(k1_max, numerator_max, product_max),
            k1=k1_max, numerator=numerator_max, rho_factor=product_max
        ))

        #|mu|^2 |c| is constant along u
        with np.errstate(invalid='ignore', divide='ignore'):
            log_mass = np.log(mu_sq * np.abs(c))
        entries.append(self.entry(
            'log_mu2c_const',
            _relative(self.d_u(log_mass), self.d_u(np.log(mu_sq)), mask_c)
        ))

        #gamma = (8ba - 3 rho sin^2) / (b conj(c))
        target = gamma_target(self.c3)
        if np.any(mask_c):
            gamma = grid.hopf.gamma[mask_c]
            modulus_gap = float(np.max(np.abs(np.abs(gamma) ** 2 - target)) / abs(target))
            mean = gamma.mean()
            constancy = float(np.max(np.abs(gamma - mean)) / abs(mean))
        else:
            modulus_gap = constancy = float('inf')
        entries.append(self.entry(
            'gamma_lemma42', max(modulus_gap, constancy),
            modulus_gap=modulus_gap, constancy=constancy
        ))

        #Curvature bound and closed form
        applicable = 8.0 - 9.0 * self.c3 > 0.0
        sup = float(np.max(grid.K_closed[nodes] + 2.0 * b * b)) / b ** 2
        entries.append(self.entry(
            'curvature_bound', max(0.0, sup) if applicable else 0.0,
            sup_excess=sup, applicable=applicable, nodes=checked
        ))
        entries.append(self.entry(
            'closed_form_K', _relative(grid.K_gauss - grid.K_closed, grid.K_closed, nodes),
            nodes=checked
        ))

        #tau as a function of alpha
        rhs = np.asarray(dtau_dalpha(alpha, tau))
        entries.append(self.entry('tau_ode', _relative(self.d_u(tau) / alpha_u - rhs, rhs, mask)))

        return ResidualReport(entries=entries, provenance=self.provenance(mask))


    def provenance(self, mask):
        profile = self.grid.profile
        nu, nv = self.grid.shape
        return {
            'params': self.grid.params.as_dict(),
            'grid': {
                'u_count': nu, 'v_count': nv,
                'h': self.h, 'v_step': self.hv if nv > 1 else None,
                'u_min': float(profile.u_nodes[0]), 'u_max': float(profile.u_nodes[-1]),
                'stop_reason': profile.stop_reason.value,
                'band': self.band, 'band_rows': int(np.count_nonzero(mask[:, 0])),
                'invalid_nodes': self.grid.invalid_count
            }
        }


    @staticmethod
    def print_report(report):
        print(f"Residual suite | verdict: {'PASS' if report.verdict else 'FAIL'}")
        for entry in report.entries:
            mark = 'ok ' if entry.verdict else 'BAD'
            print(f"  [{mark}] {entry.name:<18} {entry.max_abs_residual:>12.3e}  (tol {entry.tolerance:.1e})")
        print()




def run_residual_suite(grid, h, tolerances=None, band=0.25, exclude_boundary=True):
    verifier = Verifier(grid, h, tolerances, band=band, exclude_boundary=exclude_boundary)
    return verifier.verify()




def negative_control(params, rho_scale, alpha0=None, u_span=0.5, h=1e-3,
                     v_nodes=(0.0,), tolerances=None, band=0.25):
    """Suite on a grid whose rho is -3 b^2 * rho_scale while a(alpha) keeps its closed form."""
    perturbed = params.with_rho(-3.0 * params.b * params.b * rho_scale)
    alpha0 = default_alpha0(params) if alpha0 is None else alpha0

    profile = integrate_profile(perturbed, alpha0, u_span, h)
    grid = build_grid(profile, v_nodes)
    report = run_residual_suite(grid, h, tolerances, band=band)
    report.provenance['rho_scale'] = rho_scale
    return report




def convergence_study(params, alpha0, u_span, h_list, v_nodes=(0.0,), band=0.25):
    """Empirical orders log(r(h_i)/r(h_i+1)) / log(h_i/h_i+1), averaged over the list."""
    h_list = [float(h) for h in h_list]
    if len(h_list) < 3 or any(h1 <= h2 for h1, h2 in zip(h_list, h_list[1:])):
        raise ConfigError("h_list needs at least 3 strictly decreasing step sizes")

    profiles, reports = [], []
    for h in h_list:
        profile = integrate_profile(params, alpha0, u_span, h)
        profiles.append(profile)
        reports.append(run_residual_suite(build_grid(profile, v_nodes), h, band=band))

    def order(errors):
        slopes = []
        for (e1, e2), (h1, h2) in zip(zip(errors, errors[1:]), zip(h_list, h_list[1:])):
            if not (e1 > 0.0 and e2 > 0.0 and np.isfinite(e1) and np.isfinite(e2)):
                return None
            slopes.append(np.log(e1 / e2) / np.log(h1 / h2))
        return float(np.mean(slopes))

    table = []
    for name, (_, kind, _) in RESIDUALS.items():
        if kind != 'fd':
            table.append((name, None))
            continue
        table.append((name, order([report.entry(name).max_abs_residual for report in reports])))

    #Terminal alpha on the coarsest lattice node every run reached
    reach = min(profile.u_nodes[-1] for profile in profiles)
    terminal = h_list[0] * np.floor(0.5 * reach / h_list[0])
    if terminal > 0.0:
        alphas = [profile.alpha[profile.node_at(terminal)] for profile in profiles]
        gaps = [abs(x - y) for x, y in zip(alphas, alphas[1:])]
        pairs = list(zip(h_list, h_list[1:]))
        slopes = [
            np.log(g1 / g2) / np.log(p1[0] / p2[0])
            for g1, g2, p1, p2 in zip(gaps, gaps[1:], pairs, pairs[1:])
            if g1 > 0.0 and g2 > 0.0
        ]
        table.append(('terminal_alpha', float(np.mean(slopes)) if slopes else None))
    else:
        table.append(('terminal_alpha', None))

    for report in reports:
        for entry in report.entries:
            entry.convergence_order = dict(table).get(entry.name)
    return table
