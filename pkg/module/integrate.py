import sys
import numpy as np
from dataclasses import dataclass, field
from model import (
    StopReason, GeometryError, InadmissibleStart, NonFiniteState,
    branch_interval, a_of_alpha, F_of_alpha, mu_of
)





@dataclass
class AlphaProfile:
    params: object
    h: float
    u_nodes: np.ndarray
    alpha: np.ndarray
    g: np.ndarray
    mu: np.ndarray
    stop_reason: StopReason
    origin: int = 0
    detail: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.u_nodes)

    @property
    def a(self):
        return np.asarray(a_of_alpha(self.alpha, self.params))

    def node_at(self, u):
        """Index of the lattice node closest to u."""
        return self.origin + int(round(u / self.h))




class _StageFailure(Exception):
    pass



_SEVERITY = {
    StopReason.SPAN_EXHAUSTED: 0,
    StopReason.ENDPOINT_PROXIMITY: 1,
    StopReason.STEP_UNDERFLOW: 2
}




class Integrator:
    """
    Marches (alpha, g) along u with classical RK4:
        dalpha/du = 2 g,   dg/du = 2 F(alpha) g^2,
    which is the u-form of dalpha = 2 exp(int F dalpha) du. Output nodes stay on the
    lattice u = k h; refinement only happens inside a lattice step.
    """

    def __init__(self, params, h, h_min=None, g0=1.0):
        if not h > 0.0:
            raise InadmissibleStart(f"step h must be positive, got {h}")
        if not g0 > 0.0:
            raise InadmissibleStart(f"g0 must be positive, got {g0}")

        self.params = params
        self.b = params.b
        self.rho = params.rho
        self.delta = params.delta
        self.interval = branch_interval(params)

        self.h = h
        self.h_min = h_min if h_min is not None else h * 2.0 ** -20
        self.g0 = g0


    def rhs(self, state):
        alpha, g = state
        try:
            a = a_of_alpha(alpha, self.params)
            F = F_of_alpha(alpha, a, self.b, self.rho)
        except GeometryError as err:
            raise _StageFailure(str(err)) from err

        deriv = np.array([2.0 * g, 2.0 * F * g * g])
        if not np.all(np.isfinite(deriv)):
            raise NonFiniteState(f"non-finite derivative at alpha={alpha!r}, g={g!r}")
        return deriv


    def rk4(self, state, step):
        k1 = self.rhs(state)
        k2 = self.rhs(state + 0.5 * step * k1)
        k3 = self.rhs(state + 0.5 * step * k2)
        k4 = self.rhs(state + step * k3)
        return state + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


    def land(self, state):
        alpha, g = state
        if not np.all(np.isfinite(state)):
            raise NonFiniteState(f"state overflowed: alpha={alpha!r}, g={g!r}")

        #g changes sign only past the pole at an interval endpoint
        if g <= 0.0 or not (0.0 < alpha < np.pi):
            return StopReason.ENDPOINT_PROXIMITY
        if not self.interval.contains(np.sin(alpha) ** 2, self.delta):
            return StopReason.ENDPOINT_PROXIMITY
        return state


    def advance(self, state, step):
        try:
            return self.land(self.rk4(state, step))
        except _StageFailure:
            pass

        half = 0.5 * step
        if abs(half) < self.h_min:
            #refinement piled up against the guard band
            if self.near_endpoint(state):
                return StopReason.ENDPOINT_PROXIMITY
            return StopReason.STEP_UNDERFLOW

        middle = self.advance(state, half)
        if isinstance(middle, StopReason):
            return middle
        return self.advance(middle, half)


    def near_endpoint(self, state):
        s = np.sin(state[0]) ** 2
        return self.interval.singular_distance(s) < 10.0 * self.delta


    def march(self, alpha0, n_steps, step):
        states = [np.array([alpha0, self.g0], dtype=float)]
        reason = StopReason.SPAN_EXHAUSTED

        for _ in range(n_steps):
            current = states[-1]

            if self.near_endpoint(current):
                result = self.advance(current, 0.5 * step)
                if not isinstance(result, StopReason):
                    result = self.advance(result, 0.5 * step)
            else:
                result = self.advance(current, step)

            if isinstance(result, StopReason):
                reason = result
                break
            states.append(result)

        return states, reason


    def check_start(self, alpha0):
        s0 = np.sin(alpha0) ** 2
        if not (0.0 < alpha0 < np.pi) or not self.interval.contains(s0, self.delta):
            raise InadmissibleStart(
                f"sin^2(alpha0) = {s0:.6g} is outside {self.interval.describe()}"
            )


    def integrate(self, alpha0, u_span, symmetric=True):
        self.check_start(alpha0)
        if symmetric and u_span < 0.0:
            raise InadmissibleStart("symmetric integration needs u_span >= 0")

        n_steps = int(round(abs(u_span) / self.h))
        direction = -1.0 if u_span < 0.0 else 1.0

        forward, forward_reason = self.march(alpha0, n_steps, direction * self.h)
        backward, backward_reason = [forward[0]], StopReason.SPAN_EXHAUSTED
        if symmetric:
            backward, backward_reason = self.march(alpha0, n_steps, -self.h)

        if direction > 0.0:
            states = backward[:0:-1] + forward
            index = np.arange(-(len(backward) - 1), len(forward))
        else:
            states = forward[:0:-1] + backward
            index = np.arange(-(len(forward) - 1), len(backward))
        origin = int(np.argmax(index == 0))

        reason = max(forward_reason, backward_reason, key=_SEVERITY.get)
        states = np.array(states)
        alpha, g = states[:, 0], states[:, 1]
        mu = np.asarray(mu_of(g, a_of_alpha(alpha, self.params), self.b), dtype=complex)

        return AlphaProfile(
            params=self.params,
            h=self.h,
            u_nodes=index * self.h,
            alpha=alpha,
            g=g,
            mu=mu,
            stop_reason=reason,
            origin=origin,
            detail={'forward': forward_reason.value, 'backward': backward_reason.value}
        )


    @staticmethod
    def print_summary(profile):
        s = np.sin(profile.alpha) ** 2
        txt = f"""Profile | nodes: {len(profile)} | h: {profile.h:g} | stop: {profile.stop_reason.value}
            >> u range:     [{profile.u_nodes[0]:.6f}, {profile.u_nodes[-1]:.6f}]
            >> alpha range: [{profile.alpha.min():.6f}, {profile.alpha.max():.6f}]
            >> sin^2 range: [{s.min():.6f}, {s.max():.6f}]
            >> g range:     [{profile.g.min():.6f}, {profile.g.max():.6f}]\n"""
        print(txt.replace(' ' * 12, ''))




def integrate_profile(params, alpha0, u_span, h, g0=1.0, symmetric=True, h_min=None):
    integrator = Integrator(params, h, h_min=h_min, g0=g0)
    profile = integrator.integrate(alpha0, u_span, symmetric=symmetric)

    if profile.stop_reason is not StopReason.SPAN_EXHAUSTED:
        print(
            f"integrate_profile: halted early ({profile.stop_reason.value}) "
            f"at u in [{profile.u_nodes[0]:.6g}, {profile.u_nodes[-1]:.6g}]",
            file=sys.stderr
        )
    return profile
