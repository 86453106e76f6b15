import sys
import numpy as np
from dataclasses import dataclass
from model import (
    GridTooSmall, HopfCoefficients,
    a_of_alpha, tau_of_a, ricci_radicand, c_of,
    gauss_curvature_closed, gauss_curvature_from_a, hopf_coefficients
)




GRID_COLUMNS = (
    'u', 'v', 'alpha', 're_a', 'im_a', 're_mu', 'im_mu', 're_c', 'im_c', 'g',
    'K_closed', 'K_gauss', 're_phi1', 'im_phi1', 're_phi2', 'im_phi2',
    're_gamma', 'im_gamma'
)




@dataclass
class SurfaceGrid:
    profile: object
    v_nodes: np.ndarray
    alpha: np.ndarray
    a: np.ndarray
    tau: np.ndarray
    mu: np.ndarray
    g: np.ndarray
    c: np.ndarray
    radicand: np.ndarray
    K_closed: np.ndarray
    K_gauss: np.ndarray
    hopf: HopfCoefficients
    valid: np.ndarray

    @property
    def params(self):
        return self.profile.params

    @property
    def u_nodes(self):
        return self.profile.u_nodes

    @property
    def shape(self):
        return self.alpha.shape

    @property
    def invalid_count(self):
        return int(np.size(self.valid) - np.count_nonzero(self.valid))

    def rows(self):
        """Cells in (u, v) row-major order with the columns of GRID_COLUMNS."""
        hopf = self.hopf
        for i, u in enumerate(self.u_nodes):
            for j, v in enumerate(self.v_nodes):
                yield (
                    u, v, self.alpha[i, j],
                    self.a[i, j].real, self.a[i, j].imag,
                    self.mu[i, j].real, self.mu[i, j].imag,
                    self.c[i, j].real, self.c[i, j].imag,
                    self.g[i, j], self.K_closed[i, j], self.K_gauss[i, j],
                    hopf.phi1_coeff[i, j].real, hopf.phi1_coeff[i, j].imag,
                    hopf.phi2_coeff[i, j].real, hopf.phi2_coeff[i, j].imag,
                    hopf.gamma[i, j].real, hopf.gamma[i, j].imag
                )




def _scatter(values, mask, dtype):
    out = np.full(mask.shape, np.nan, dtype=dtype)
    if np.any(mask):
        out[mask] = values
    return out



def build_grid(profile, v_nodes):
    if len(profile) == 0:
        raise GridTooSmall("profile has no nodes")
    v_nodes = np.atleast_1d(np.asarray(v_nodes, dtype=float))
    if v_nodes.ndim != 1 or v_nodes.size == 0:
        raise GridTooSmall("v_nodes must be a nonempty list")

    params = profile.params
    b, rho = params.b, params.rho
    shape = (len(profile), v_nodes.size)

    #Every field depends on u only; v enters through the phase of c (k1 = 0)
    alpha = np.broadcast_to(profile.alpha[:, None], shape).copy()
    g = np.broadcast_to(profile.g[:, None], shape).copy()
    mu = np.broadcast_to(profile.mu[:, None], shape).copy()
    V = np.broadcast_to(v_nodes[None, :], shape)

    a = np.asarray(a_of_alpha(alpha, params))
    tau = np.asarray(tau_of_a(a, b))
    radicand = np.asarray(ricci_radicand(alpha, a, rho))
    valid = radicand > 0.0

    c = _scatter(c_of(alpha[valid], V[valid], a[valid], b, rho, 0.0), valid, complex)

    if np.any(valid):
        coeffs = hopf_coefficients(alpha[valid], a[valid], c[valid], mu[valid], b, rho)
    else:
        coeffs = None
    fields = {
        name: _scatter(
            getattr(coeffs, name) if coeffs is not None else None, valid,
            float if name == 'k1' else complex
        )
        for name in HopfCoefficients.__dataclass_fields__
    }
    #the holomorphic coefficients are constants of the surface
    for const, coeff in (('c1', 'phi1_coeff'), ('c2', 'phi2_coeff')):
        mean = fields[coeff][valid].mean() if coeffs is not None else np.nan
        fields[const] = np.where(valid, mean, np.nan)
    hopf = HopfCoefficients(**fields)

    grid = SurfaceGrid(
        profile=profile,
        v_nodes=v_nodes,
        alpha=alpha,
        a=a,
        tau=tau,
        mu=mu,
        g=g,
        c=c,
        radicand=radicand,
        K_closed=np.asarray(gauss_curvature_closed(alpha, b, params.c3)),
        K_gauss=np.asarray(gauss_curvature_from_a(alpha, a, b, rho)),
        hopf=hopf,
        valid=valid
    )

    if grid.invalid_count:
        print(
            f"build_grid: NegativeRadicand at {grid.invalid_count} of {valid.size} nodes "
            f"(min |c|^2 = {radicand.min():.6g}); c and Hopf data set to nan there",
            file=sys.stderr
        )
    return grid
