"""The compactified cohomogeneity one Einstein system: vector field, critical
points, the unstable family at p0+, event-driven integration, shooting for
heteroclines and the theta initial value problem."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .thresholds import StructuralTriple, discriminant_and_mu, s_bullet, tau_param, sigma_param

CROSS_X1_EQ_X2 = "CrossX1eqX2"
CROSS_H0 = "CrossH0"
EXIT_E = "ExitE"
NEAR_P0_MINUS = "NearP0Minus"
HIT_GAMMA = "HitGamma"


class DynamicsError(RuntimeError):
    pass


class DriftError(DynamicsError):
    """Conservation residual exceeded the drift tolerance."""

    def __init__(self, max_drift: float, eta: float, tol: float):
        super().__init__(f"conservation drift {max_drift:.3e} > {tol:.1e} at eta = {eta:.6g}")
        self.max_drift = max_drift
        self.eta = eta
        self.tol = tol


class NoSignChange(DynamicsError):
    """The shooting objective kept one sign over the whole sweep."""

    def __init__(self, history):
        super().__init__("no sign change of X1 at H = 0 over the s sweep")
        self.history = history


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseState:
    X1: float
    X2: float
    Y: float
    Z: float

    @classmethod
    def from_array(cls, a) -> "PhaseState":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.X1, self.X2, self.Y, self.Z], dtype=float)

    def H(self, triple: StructuralTriple) -> float:
        return triple.d1 * self.X1 + triple.d2 * self.X2

    def G(self, triple: StructuralTriple) -> float:
        return triple.d1 * self.X1**2 + triple.d2 * self.X2**2

    def R1(self, triple: StructuralTriple) -> float:
        return (triple.d1 - 1) * self.Y**2 + float(triple.A) * self.Z**2

    def R2(self, triple: StructuralTriple) -> float:
        d1, d2, A = triple.d1, triple.d2, float(triple.A)
        return (d2 - 1) * self.Y * self.Z - 2 * d1 / d2 * A * self.Z**2

    def distance(self, other: "PhaseState") -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))


def _rhs_factory(triple: StructuralTriple, with_tau: bool = False) -> Callable:
    d1, d2, A, n = triple.d1, triple.d2, float(triple.A), triple.n
    c2 = 2.0 * d1 / d2 * A

    def rhs(_eta, y):
        X1, X2, Y, Z = y[0], y[1], y[2], y[3]
        G = d1 * X1 * X1 + d2 * X2 * X2
        H = d1 * X1 + d2 * X2
        q = (1.0 - H * H) / n
        R1 = (d1 - 1) * Y * Y + A * Z * Z
        R2 = (d2 - 1) * Y * Z - c2 * Z * Z
        c = H * (G + q)
        out = [X1 * (c - H) + R1 - q, X2 * (c - H) + R2 - q, Y * (c - X1), Z * (c + X1 - 2.0 * X2)]
        if with_tau:
            out.append(math.sqrt(max(q, 0.0)))
        return out

    return rhs


def vector_field(state: PhaseState, triple: StructuralTriple) -> PhaseState:
    return PhaseState.from_array(_rhs_factory(triple)(0.0, state.as_array()))


def conservation_residual(state, triple: StructuralTriple):
    """(G - H^2 + d1 R1 + d2 R2)/(n-1) - (1 - H^2)/n; accepts a state or a (4, N) array."""
    d1, d2, A, n = triple.d1, triple.d2, float(triple.A), triple.n
    if isinstance(state, PhaseState):
        X1, X2, Y, Z = state.X1, state.X2, state.Y, state.Z
    else:
        X1, X2, Y, Z = state[0], state[1], state[2], state[3]
    G = d1 * X1 * X1 + d2 * X2 * X2
    H = d1 * X1 + d2 * X2
    R1 = (d1 - 1) * Y * Y + A * Z * Z
    R2 = (d2 - 1) * Y * Z - 2.0 * d1 / d2 * A * Z * Z
    return (G - H * H + d1 * R1 + d2 * R2) / (n - 1) - (1.0 - H * H) / n


def project_Y(y: np.ndarray, triple: StructuralTriple, iters: int = 8) -> np.ndarray:
    """Newton correction of Y onto the conservation surface."""
    d1, d2, n = triple.d1, triple.d2, triple.n
    y = np.array(y, dtype=float)
    for _ in range(iters):
        r = conservation_residual(y, triple)
        if r == 0.0:
            break
        dr = (2.0 * d1 * (d1 - 1) * y[2] + d2 * (d2 - 1) * y[3]) / (n - 1)
        if dr == 0.0:
            break
        y[2] -= r / dr
    return y


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalPointSet:
    p0_plus: PhaseState
    p0_minus: PhaseState
    p1_plus: Optional[PhaseState]
    p1_minus: Optional[PhaseState]
    p2_plus: Optional[PhaseState]
    p2_minus: Optional[PhaseState]
    mu1: Optional[float]
    mu2: Optional[float]
    y2: Optional[float]
    p0_eigenvalue: float
    v1: tuple
    v2: tuple
    p2_lambdas: Optional[tuple]


def y_on_ray(triple: StructuralTriple, mu: float) -> float:
    """Y of the homogeneous point with Z = mu Y on the conservation surface."""
    d1, d2, A, n = triple.d1, triple.d2, float(triple.A), triple.n
    K = d1 * (d1 - 1) + d2 * (d2 - 1) * mu - d1 * A * mu * mu
    return math.sqrt((n - 1) / (n * K))


def critical_points(triple: StructuralTriple) -> CriticalPointSet:
    d1, d2, n, A = triple.d1, triple.d2, triple.n, float(triple.A)
    p0p = PhaseState(1.0 / d1, 0.0, 1.0 / d1, 0.0)
    p0m = PhaseState(-1.0 / d1, 0.0, 1.0 / d1, 0.0)
    v1 = (-2 * d2 * (d2 - 1), 2 * d1 * (d2 - 1), -d2 * (d2 - 1), 2 * d1 * (d1 + 1))
    v2 = (-d1 * d1 + d1 * d2 - n, -2 * d1 * d1, -d2, 0)
    mu = discriminant_and_mu(triple)
    pts = {}
    mus = {}
    for name, m in (("1", mu.mu1), ("2", mu.mu2)):
        if m is None:
            pts[name] = (None, None)
            mus[name] = None
            continue
        mv = float(m)
        y = y_on_ray(triple, mv)
        pts[name] = (PhaseState(1.0 / n, 1.0 / n, y, mv * y), PhaseState(-1.0 / n, -1.0 / n, y, mv * y))
        mus[name] = mv
    lambdas = None
    y2 = None
    if mus["2"] is not None:
        m2 = mus["2"]
        y2 = pts["2"][0].Y
        c0 = 2 * y2 * y2 * ((d2 - 1) * m2 - 2 * (n + d1) / d2 * A * m2 * m2)
        lambdas = tuple(np.roots([1.0, (n - 1) / n, c0]))
    return CriticalPointSet(p0p, p0m, pts["1"][0], pts["1"][1], pts["2"][0], pts["2"][1],
                            mus["1"], mus["2"], y2, 2.0 / d1, v1, v2, lambdas)


def gamma_init(triple: StructuralTriple, s: float, eps: float = 1e-6) -> PhaseState:
    """Point at distance ~eps from p0+ along s*v1 + v2, projected onto the surface."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    if s < 0:
        raise ValueError("s must be non-negative")
    cp = critical_points(triple)
    w = s * np.array(cp.v1, dtype=float) + np.array(cp.v2, dtype=float)
    w /= np.linalg.norm(w)
    y = cp.p0_plus.as_array() + eps * w
    return PhaseState.from_array(project_Y(y, triple))


def phi_state(triple: StructuralTriple, H: float) -> PhaseState:
    """Point on the sine-cone trajectory (X1 = X2, Z = mu2 Y) with the given H."""
    cp = critical_points(triple)
    if cp.mu2 is None:
        raise DynamicsError("no homogeneous Einstein ratio mu2 (Delta < 0)")
    y = cp.y2
    return PhaseState(H / triple.n, H / triple.n, y, cp.mu2 * y)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegrationControls:
    method: str = "DOP853"
    rtol: float = 1e-11
    atol: float = 1e-14
    horizon: float = 200.0
    drift_tol: float = 1e-8
    endpoint_tol: float = 1e-5
    exit_tol: float = 1e-10
    eps: float = 1e-6
    stop_at_h0: bool = False
    max_step: float = math.inf

    def __post_init__(self):
        for name in ("rtol", "atol", "horizon", "drift_tol", "endpoint_tol", "exit_tol", "eps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.rtol < 1e-13:
            raise ValueError("rtol below 1e-13 is not supported")

    def to_json(self) -> dict:
        return {"method": self.method, "rtol": self.rtol, "atol": self.atol,
                "horizon": self.horizon, "drift_tol": self.drift_tol,
                "endpoint_tol": self.endpoint_tol, "exit_tol": self.exit_tol, "eps": self.eps}


@dataclass(frozen=True)
class Event:
    kind: str
    eta: float
    state: PhaseState
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "eta": self.eta, "detail": self.detail,
                "state": [self.state.X1, self.state.X2, self.state.Y, self.state.Z]}


@dataclass
class TrajectoryRecord:
    triple: StructuralTriple
    eta: np.ndarray
    states: np.ndarray  # shape (4, N)
    tau: np.ndarray  # integral of sqrt((1 - H^2)/n) d eta
    events: list = field(default_factory=list)
    winding: int = 0
    winding_flagged: bool = False
    max_drift: float = 0.0
    status: str = ""
    dense: Optional[Callable] = None

    @property
    def samples(self) -> list:
        return [(float(e), PhaseState.from_array(self.states[:, i])) for i, e in enumerate(self.eta)]

    @property
    def H(self) -> np.ndarray:
        return self.triple.d1 * self.states[0] + self.triple.d2 * self.states[1]

    @property
    def final(self) -> PhaseState:
        return PhaseState.from_array(self.states[:, -1])

    def events_of(self, kind: str) -> list:
        return [e for e in self.events if e.kind == kind]

    def residuals(self) -> np.ndarray:
        return conservation_residual(self.states, self.triple)

    def resample(self, step: float) -> "TrajectoryRecord":
        """Uniform-in-eta resampling through the dense interpolant."""
        if self.dense is None:
            raise DynamicsError("trajectory has no dense output")
        count = max(int(round((self.eta[-1] - self.eta[0]) / step)), 2) + 1
        eta = np.linspace(self.eta[0], self.eta[-1], count)
        full = self.dense(eta)
        return replace(self, eta=eta, states=full[:4], tau=full[4])

    def to_csv(self) -> str:
        res = self.residuals()
        H = self.H
        lines = ["eta,X1,X2,Y,Z,H,residual"]
        for i in range(len(self.eta)):
            vals = (self.eta[i], *self.states[:, i], H[i], res[i])
            lines.append(",".join(f"{float(v):.17g}" for v in vals))
        return "\n".join(lines) + "\n"


def _make_events(triple: StructuralTriple, controls: IntegrationControls, mu1: Optional[float]):
    d1, d2 = triple.d1, triple.d2
    p0m = np.array([-1.0 / d1, 0.0, 1.0 / d1, 0.0])
    tol = controls.exit_tol

    def cross_x(_e, y):
        return y[0] - y[1]

    def cross_h(_e, y):
        return d1 * y[0] + d2 * y[1]

    def near_p0m(_e, y):
        return float(np.linalg.norm(y[:4] - p0m)) - controls.endpoint_tol

    def exit_y(_e, y):
        return y[2] + tol

    def exit_z(_e, y):
        return y[3] + tol

    def exit_h(_e, y):
        # H -> -1 away from p0-: the curve sinks somewhere else on {H = -1}
        H = d1 * y[0] + d2 * y[1]
        far = float(np.linalg.norm(y[:4] - p0m)) > 1e-2
        return (H + 1.0 - tol) if far else 1.0

    def bad_set(_e, y):
        # Z - mu1 Y crossing upward, only recorded when X1 >= X2
        return (y[3] - mu1 * y[2]) if (mu1 is not None and y[0] >= y[1]) else -1.0

    cross_h.terminal = controls.stop_at_h0
    cross_h.direction = -1
    near_p0m.terminal = True
    near_p0m.direction = -1
    for ev in (exit_y, exit_z, exit_h):
        ev.terminal = True
        ev.direction = -1
    bad_set.direction = 1
    kinds = [(CROSS_X1_EQ_X2, ""), (CROSS_H0, ""), (NEAR_P0_MINUS, ""),
             (EXIT_E, "Y<0"), (EXIT_E, "Z<0"), (EXIT_E, "H->-1"), (EXIT_E, "bad_set")]
    return [cross_x, cross_h, near_p0m, exit_y, exit_z, exit_h, bad_set], kinds


def winding_count(traj: TrajectoryRecord, tol: float = 1e-10) -> tuple[int, bool]:
    """Transversal X1 - X2 sign changes with H > 0, frozen at the first exit.

    Returns (count, flagged); flagged marks a crossing where R1 - R2 is
    numerically zero so that transversality is not guaranteed.
    """
    count, flagged = 0, False
    for ev in traj.events:
        if ev.kind == EXIT_E:
            break
        if ev.kind != CROSS_X1_EQ_X2 or ev.state.H(traj.triple) <= 0:
            continue
        if abs(ev.state.R1(traj.triple) - ev.state.R2(traj.triple)) < tol:
            flagged = True
        count += 1
    return count, flagged


def integrate(start: PhaseState, triple: StructuralTriple,
              controls: IntegrationControls = IntegrationControls(),
              dense: bool = False) -> TrajectoryRecord:
    rhs = _rhs_factory(triple, with_tau=True)
    mu1 = critical_points(triple).mu1
    events, kinds = _make_events(triple, controls, mu1)
    y0 = np.append(start.as_array(), 0.0)
    sol = solve_ivp(rhs, (0.0, controls.horizon), y0, method=controls.method,
                    rtol=controls.rtol, atol=controls.atol, events=events,
                    dense_output=dense, max_step=controls.max_step)
    if sol.status == -1:
        raise DynamicsError(f"integrator failed: {sol.message}")
    log = []
    for (kind, detail), te, ye in zip(kinds, sol.t_events, sol.y_events):
        for t, y in zip(te, ye):
            log.append(Event(kind, float(t), PhaseState.from_array(y), detail))
    log.sort(key=lambda e: e.eta)
    states = sol.y[:4]
    drift = np.abs(conservation_residual(states, triple))
    max_drift = float(drift.max())
    if max_drift > controls.drift_tol:
        i = int(np.argmax(drift))
        raise DriftError(max_drift, float(sol.t[i]), controls.drift_tol)
    if sol.status == 1:
        last = max((e for e in log if e.kind in (NEAR_P0_MINUS, EXIT_E, CROSS_H0)),
                   key=lambda e: e.eta, default=None)
        status = last.kind if last is not None else "event"
    else:
        status = "horizon"
    traj = TrajectoryRecord(triple, sol.t, states, sol.y[4], log, 0, False, max_drift, status,
                            sol.sol if dense else None)
    traj.winding, traj.winding_flagged = winding_count(traj)
    return traj


def reflect(traj: TrajectoryRecord) -> TrajectoryRecord:
    """The Z2 image (X1, X2, Y, Z)(eta) -> (-X1, -X2, Y, Z)(-eta), re-based to eta = 0."""
    flip = np.array([[-1.0], [-1.0], [1.0], [1.0]])
    e_end = traj.eta[-1]
    events = [Event(ev.kind, e_end - ev.eta,
                    PhaseState(-ev.state.X1, -ev.state.X2, ev.state.Y, ev.state.Z), ev.detail)
              for ev in reversed(traj.events)]
    return TrajectoryRecord(traj.triple, e_end - traj.eta[::-1], traj.states[:, ::-1] * flip,
                            traj.tau[-1] - traj.tau[::-1], events, 0, False, traj.max_drift,
                            "reflected")


def phi_trajectory(triple: StructuralTriple, eta_half: float = 30.0, samples: int = 20001,
                   controls: IntegrationControls = IntegrationControls()) -> TrajectoryRecord:
    """Sine-cone trajectory on Phi, symmetric about its H = 0 midpoint.

    Only the half from H = 0 towards p2- is integrated; near p2+- the
    directions transverse to Phi are unstable (in forward resp. backward
    time) and rounding errors would be amplified without bound.
    """
    c = replace(controls, horizon=eta_half)
    half = integrate(phi_state(triple, 0.0), triple, c, dense=True)
    half = half.resample(half.eta[-1] / ((samples - 1) // 2))
    first = reflect(half)
    eta = np.concatenate([first.eta, first.eta[-1] + half.eta[1:]])
    states = np.concatenate([first.states, half.states[:, 1:]], axis=1)
    tau = np.concatenate([first.tau, first.tau[-1] + half.tau[1:]])
    events = first.events + [Event(e.kind, e.eta + first.eta[-1], e.state, e.detail)
                             for e in half.events]
    return TrajectoryRecord(triple, eta, states, tau, events, 0, False, half.max_drift, "phi")


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------

def objective(triple: StructuralTriple, s: float, controls: IntegrationControls,
              dense: bool = False) -> tuple[float, TrajectoryRecord]:
    """X1 at the first H = 0 crossing of gamma_s (nan if H never vanishes)."""
    c = replace(controls, stop_at_h0=True)
    traj = integrate(gamma_init(triple, s, controls.eps), triple, c, dense=dense)
    hits = traj.events_of(CROSS_H0)
    return (hits[0].state.X1 if hits else math.nan), traj


@dataclass
class ShootingResult:
    triple: StructuralTriple
    s_star: float
    objective_at_root: float
    bracket: tuple
    trajectory: TrajectoryRecord
    heterocline: TrajectoryRecord
    certified: bool
    roots: list
    history: list
    s_star_half_eps: float
    richardson_shift: float
    endpoint_gap: float
    eta_star: float
    s_reference: float
    s_reference_kind: str
    controls: IntegrationControls
    bracket_windings: tuple = (0, 0)
    forward_closure: float = math.nan

    @property
    def winding(self) -> int:
        return self.trajectory.winding

    def to_json(self) -> dict:
        return {
            "triple": {"d1": self.triple.d1, "d2": self.triple.d2, "A": str(self.triple.A)},
            "s_star": self.s_star,
            "objective_at_root": self.objective_at_root,
            "bracket": list(self.bracket),
            "certified": self.certified,
            "roots": self.roots,
            "winding": self.winding,
            "bracket_windings": list(self.bracket_windings),
            "forward_closure": self.forward_closure,
            "s_star_half_eps": self.s_star_half_eps,
            "richardson_shift": self.richardson_shift,
            "endpoint_gap": self.endpoint_gap,
            "eta_star": self.eta_star,
            "s_reference": self.s_reference,
            "s_reference_kind": self.s_reference_kind,
            "max_drift": max(self.trajectory.max_drift, self.heterocline.max_drift),
            "history": [[s, g] for s, g in self.history],
            "controls": self.controls.to_json(),
        }


def shooting_reference(triple: StructuralTriple) -> tuple[float, str]:
    """s_bullet when tau > 0, otherwise the unit fallback."""
    sb = s_bullet(triple.d1, triple.d2, triple.A)
    if sb is None:
        return 1.0, "fallback"
    return float(sb), "s_bullet"


def sweep_points(s_ref: float, max_doublings: int = 20) -> list:
    pts = [0.0, s_ref / 8, s_ref / 4, s_ref / 2, s_ref]
    return pts, [s_ref * 2.0**j for j in range(1, max_doublings + 1)]


def _root(triple, lo, hi, controls):
    return brentq(lambda s: objective(triple, s, controls)[0], lo, hi,
                  xtol=1e-15, rtol=1e-15, maxiter=200)


def mirror(traj: TrajectoryRecord) -> TrajectoryRecord:
    """Glue the forward half (ending on H = 0) with its Z2 reflection."""
    eta_s = traj.eta[-1]
    flip = np.array([[-1.0], [-1.0], [1.0], [1.0]])
    eta = np.concatenate([traj.eta, 2 * eta_s - traj.eta[::-1][1:]])
    states = np.concatenate([traj.states, (traj.states[:, ::-1] * flip)[:, 1:]], axis=1)
    tau = np.concatenate([traj.tau, 2 * traj.tau[-1] - traj.tau[::-1][1:]])
    events = list(traj.events)
    for ev in reversed(traj.events):
        if ev.kind == CROSS_X1_EQ_X2:
            s = ev.state
            events.append(Event(ev.kind, 2 * eta_s - ev.eta, PhaseState(-s.X1, -s.X2, s.Y, s.Z)))
    events.sort(key=lambda e: e.eta)
    out = TrajectoryRecord(traj.triple, eta, states, tau, events, traj.winding,
                           traj.winding_flagged, traj.max_drift, "mirrored")
    return out


def shoot(triple: StructuralTriple, controls: IntegrationControls = IntegrationControls(),
          objective_tol: float = 1e-9, max_doublings: int = 20,
          samples: int = 20001) -> ShootingResult:
    s_ref, kind = shooting_reference(triple)
    first, extra = sweep_points(s_ref, max_doublings)
    history = []
    for s in first:
        history.append((s, objective(triple, s, controls)[0]))
    brackets = _sign_changes(history)
    for s in extra:
        if brackets:
            break
        history.append((s, objective(triple, s, controls)[0]))
        brackets = _sign_changes(history)
    if not brackets:
        raise NoSignChange(history)

    roots = [_root(triple, lo, hi, controls) for lo, hi in brackets]
    s_star = roots[0]
    lo, hi = brackets[0]
    g_star, traj = objective(triple, s_star, controls, dense=True)
    if samples:
        traj = traj.resample(traj.eta[-1] / (samples - 1))

    half = replace(controls, eps=controls.eps / 2)
    try:
        s_half = _root(triple, lo, hi, half)
    except ValueError:
        s_half = math.nan
    shift = abs(s_half - s_star)

    if abs(g_star) < objective_tol:
        hit = traj.events_of(CROSS_H0)[0]
        traj.events.append(Event(HIT_GAMMA, hit.eta, hit.state))
        traj.events.sort(key=lambda e: e.eta)
    full = mirror(traj)
    p0m = critical_points(triple).p0_minus
    gap = PhaseState.from_array(full.states[:, -1]).distance(p0m)
    exited = any(e.kind == EXIT_E and e.detail != "bad_set" for e in traj.events)
    certified = (abs(g_star) < objective_tol and gap < controls.endpoint_tol
                 and shift < 1e-6 * abs(s_star) and not exited)
    wind = (objective(triple, lo, controls)[1].winding, objective(triple, hi, controls)[1].winding)
    closure = forward_closure(triple, s_star, controls)
    return ShootingResult(triple, s_star, g_star, (lo, hi), traj, full, certified, roots,
                          history, s_half, shift, gap, float(traj.eta[-1]), s_ref, kind, controls,
                          wind, closure)


def forward_closure(triple: StructuralTriple, s: float,
                    controls: IntegrationControls = IntegrationControls()) -> float:
    """Smallest distance to p0- reached by integrating gamma_s forward past H = 0.

    Diagnostic only: p0- repels in one direction, so an exact heterocline
    computed in floating point gets close and then peels away.
    """
    c = replace(controls, stop_at_h0=False, horizon=max(controls.horizon, 100.0))
    traj = integrate(gamma_init(triple, s, controls.eps), triple, c)
    p0m = critical_points(triple).p0_minus.as_array()
    return float(np.min(np.linalg.norm(traj.states - p0m[:, None], axis=0)))


def _sign_changes(history):
    pts = sorted((s, g) for s, g in history if not math.isnan(g))
    out = []
    for (s0, g0), (s1, g1) in zip(pts, pts[1:]):
        if g0 == 0.0:
            out.append((s0, s0))
        elif g0 * g1 < 0:
            out.append((s0, s1))
    return [b for b in out if b[0] != b[1]] or []


# ---------------------------------------------------------------------------
# theta initial value problem
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaIVPResult:
    theta_limit: float
    eta_horizon: float
    mu2_used: float
    c: float
    stabilized: bool
    upgrade: bool

    def to_json(self) -> dict:
        return {"theta_limit": self.theta_limit, "eta_horizon": self.eta_horizon,
                "mu2_used": self.mu2_used, "c": self.c, "stabilized": self.stabilized,
                "upgrade": self.upgrade}


class FocusConditionError(DynamicsError):
    pass


def theta_drift_constant(triple: StructuralTriple) -> tuple[float, float]:
    """(c, mu2) for the theta equation; c is exactly 0.0 on the boundary.

    mu2 = 2(d1-1)/(d2-1 + sqrt(D)) is the smaller homogeneous root, so the
    surd from discriminant_and_mu is reused and the sign test stays exact.
    """
    d1, d2, n = triple.d1, triple.d2, triple.n
    mu = discriminant_and_mu(triple)
    if mu.mu2 is None:
        raise FocusConditionError("A exceeds the Boehm bound: mu2 is not real")
    num = mu.mu2 * (-2 * (d2 - 1)) + 4 * (d1 - 1)
    s = num.sign()
    if s < 0:
        raise FocusConditionError(
            "radicand 4(d1-1) - 2(d2-1) mu2 is negative: focus condition fails")
    mu2f = float(mu.mu2)
    if s == 0:
        return 0.0, mu2f
    den = 2 * d1 * (d1 - 1) + d2 * (d2 - 1) * mu2f
    c = math.sqrt((n - 1) * (n + d1)) / n * math.sqrt(float(num) / den)
    return c, mu2f


def theta_ivp(triple: StructuralTriple, horizon: float = 400.0, window: float = 20.0,
              rtol: float = 1e-12, atol: float = 1e-14) -> ThetaIVPResult:
    n = triple.n
    c, mu2 = theta_drift_constant(triple)
    if c == 0.0:
        return ThetaIVPResult(0.0, 0.0, mu2, 0.0, True, True)
    a = (n - 1) / (2.0 * n)

    def rhs(eta, th):
        return [a * math.tanh(eta / n) * math.sin(2 * th[0]) + c]

    sol = solve_ivp(rhs, (0.0, horizon), [0.0], method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True)
    grid = np.linspace(max(horizon - window, 0.0), horizon, 2001)
    th = sol.sol(grid)[0]
    slope = np.array([rhs(e, [t])[0] for e, t in zip(grid, th)])
    stabilized = bool(np.max(np.abs(slope)) < 1e-10)
    limit = float(th[-1]) if stabilized else math.inf
    return ThetaIVPResult(limit, horizon, mu2, c, stabilized,
                          stabilized and limit < 3 * math.pi / 4)


# ---------------------------------------------------------------------------
# barrier functions
# ---------------------------------------------------------------------------

def barrier_values(state: PhaseState, triple: StructuralTriple) -> dict:
    d1, d2, n = triple.d1, triple.d2, triple.n
    X1, X2, Y, Z = state.X1, state.X2, state.Y, state.Z
    H = state.H(triple)
    q = (1.0 - H * H) / n
    R1, R2 = state.R1(triple), state.R2(triple)
    w = X1 + d2 / (2.0 * d1) * X2
    S = None if X2 == 0 or Y == 0 else Z / Y * w / X2
    T = None if Y == 0 or Z == 0 else q / (Y * Z)
    P = X1 * (R2 - q) - X2 * (R1 - q) - 2 * X2 * (X1 - X2) * w
    Q = (4 * X2 * w * (H + d2 / (2.0 * d1) * X2) + (2 * X1 + 2 * X2 + 3.0 * d2 / d1 * X2) * q
         - 2 * (d2 - 1) * X1 * Y * Z
         - X2 * (2 * (d1 - 1) * Y * Y + 3.0 * d2 / d1 * (d2 - 1) * Y * Z))
    return {"S": S, "T": T, "P": P, "Q": Q}


def sigma_tau_float(triple: StructuralTriple) -> tuple[Optional[float], float]:
    s = sigma_param(triple.d1, triple.d2, triple.A)
    return (None if s is None else float(s)), float(tau_param(triple.d1, triple.d2, triple.A))
