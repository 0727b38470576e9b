"""Back from the compactified phase space to the metric dt^2 + f1^2 b1 + f2^2 b2.

With W = sqrt(tr^2 L + n Lambda) the conservation law gives
Lambda = W^2 (1 - H^2)/n, so W = sqrt(n Lambda/(1 - H^2)) and

    f1 = 1/(Y W),  f2 = sqrt(f1/(Z W)),  f1' = X1 W f1,  f2' = X2 W f2,
    dt = d eta / W.

The trajectory record carries tau = int sqrt((1 - H^2)/n) d eta, so that
t = t0 + tau/sqrt(Lambda) with no further quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TrajectoryRecord, critical_points
from .thresholds import StructuralTriple


class ReconstructionError(ValueError):
    pass


@dataclass
class MetricProfile:
    Lambda: float
    t: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f1dot: np.ndarray
    f2dot: np.ndarray
    t_star: float
    eta: np.ndarray
    start_limits: dict = field(default_factory=dict)
    end_limits: dict = field(default_factory=dict)

    @property
    def samples(self) -> list:
        return list(zip(self.t, self.f1, self.f2, self.f1dot, self.f2dot))

    def to_csv(self) -> str:
        lines = ["t,f1,f2,f1dot,f2dot"]
        for row in zip(self.t, self.f1, self.f2, self.f1dot, self.f2dot):
            lines.append(",".join(f"{float(v):.17g}" for v in row))
        return "\n".join(lines) + "\n"

    def metadata(self, residual: float | None = None) -> dict:
        out = {"Lambda": self.Lambda, "t_star": self.t_star,
               "start": self.start_limits, "end": self.end_limits}
        if residual is not None:
            out["residual"] = residual
        return out

    def metadata_json(self, residual: float | None = None) -> str:
        return json.dumps(self.metadata(residual), indent=2, sort_keys=True)


def _offset(H: float, G: float, n: int, Lambda: float) -> float:
    # dt/dH = -1/(sqrt(n Lambda) sqrt(1 - H^2) (G + (1 - H^2)/n)); freezing the
    # last factor at the end sample and integrating to |H| = 1 gives arccos
    q = (1.0 - H * H) / n
    return math.acos(min(abs(H), 1.0)) / (math.sqrt(n * Lambda) * (G + q))


def _extrapolate(t: np.ndarray, values: dict, at: float) -> dict:
    """Value at ``at`` of the quadratic through three samples (Lagrange form)."""
    t0, t1, t2 = (float(x) for x in t)
    w0 = (at - t1) * (at - t2) / ((t0 - t1) * (t0 - t2))
    w1 = (at - t0) * (at - t2) / ((t1 - t0) * (t1 - t2))
    w2 = (at - t0) * (at - t1) / ((t2 - t0) * (t2 - t1))
    return {k: float(w0 * v[0] + w1 * v[1] + w2 * v[2]) for k, v in values.items()}


def reconstruct_profile(traj: TrajectoryRecord, triple: StructuralTriple,
                        Lambda: float | None = None) -> MetricProfile:
    d1, d2, n = triple.d1, triple.d2, triple.n
    Lam = float(n - 1) if Lambda is None else float(Lambda)
    if not Lam > 0:
        raise ReconstructionError("Lambda must be positive")
    X1, X2, Y, Z = traj.states
    H = d1 * X1 + d2 * X2
    G = d1 * X1 * X1 + d2 * X2 * X2
    one_m = 1.0 - H * H
    if np.any(one_m <= 0):
        raise ReconstructionError("H^2 reaches 1 inside the trajectory")
    if np.any(Z <= 0) or np.any(Y <= 0):
        raise ReconstructionError("Y or Z vanishes inside the trajectory; f2 is undefined")
    W = np.sqrt(n * Lam / one_m)
    f1 = 1.0 / (Y * W)
    f2 = np.sqrt(f1 / (Z * W))
    f1dot = X1 * W * f1
    f2dot = X2 * W * f2
    t0 = _offset(H[0], G[0], n, Lam)
    t = t0 + traj.tau / math.sqrt(Lam)
    t_star = float(t[-1] + _offset(H[-1], G[-1], n, Lam))
    vals = {"f1": f1, "f1dot": f1dot, "f2": f2, "f2dot": f2dot}
    start = _extrapolate(t[:3], {k: v[:3] for k, v in vals.items()}, 0.0)
    end = _extrapolate(t[-3:], {k: v[-3:] for k, v in vals.items()}, t_star)
    return MetricProfile(Lam, t, f1, f2, f1dot, f2dot, t_star, traj.eta, start, end)


def to_phase(profile: MetricProfile, triple: StructuralTriple) -> np.ndarray:
    """Apply the coordinate change to a profile; returns a (4, N) array."""
    d1, d2, n = triple.d1, triple.d2, triple.n
    L1 = profile.f1dot / profile.f1
    L2 = profile.f2dot / profile.f2
    W = np.sqrt((d1 * L1 + d2 * L2) ** 2 + n * profile.Lambda)
    return np.array([L1 / W, L2 / W, 1.0 / (profile.f1 * W),
                     profile.f1 / (profile.f2**2 * W)])


def _centered_derivative(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    h1 = t[1:-1] - t[:-2]
    h2 = t[2:] - t[1:-1]
    return ((v[2:] - v[1:-1]) / h2 * (h1 / (h1 + h2))
            + (v[1:-1] - v[:-2]) / h1 * (h2 / (h1 + h2)))


def einstein_residuals(profile: MetricProfile, triple: StructuralTriple) -> dict:
    """Interior residuals of the two second-order equations and the constraint.

    The i-th equation is multiplied by f_i^2 and the constraint by f1^2, so
    every term stays bounded where f1 collapses.
    """
    if len(profile.t) < 7:
        raise ReconstructionError("need at least 5 interior samples")
    d1, d2, n, A = triple.d1, triple.d2, triple.n, float(triple.A)
    Lam = profile.Lambda
    t, f1, f2, g1, g2 = profile.t, profile.f1, profile.f2, profile.f1dot, profile.f2dot
    s = slice(1, -1)
    g1d = _centered_derivative(t, g1)
    g2d = _centered_derivative(t, g2)
    trL = d1 * g1 / f1 + d2 * g2 / f2
    r1 = (d1 - 1) / f1**2 + A * f1**2 / f2**4
    r2 = (d2 - 1) / f2**2 - 2.0 * d1 / d2 * A * f1**2 / f2**4
    E1 = f1[s] * g1d - g1[s] ** 2 + trL[s] * g1[s] * f1[s] - (r1[s] - Lam) * f1[s] ** 2
    E2 = f2[s] * g2d - g2[s] ** 2 + trL[s] * g2[s] * f2[s] - (r2[s] - Lam) * f2[s] ** 2
    trL2 = d1 * (g1 / f1) ** 2 + d2 * (g2 / f2) ** 2
    C = (trL2 - trL**2 + d1 * r1 + d2 * r2 - (n - 1) * Lam) * f1**2
    return {"E1": float(np.max(np.abs(E1))), "E2": float(np.max(np.abs(E2))),
            "C": float(np.max(np.abs(C[s])))}


def einstein_residual(profile: MetricProfile, triple: StructuralTriple) -> float:
    return max(einstein_residuals(profile, triple).values())


def sine_cone_closed_form(triple: StructuralTriple, Lambda: float, t) -> tuple:
    """f_i = c_i sin(sqrt(Lambda/n) t) over the homogeneous metric with ratio mu2."""
    n, d1, A = triple.n, triple.d1, float(triple.A)
    mu2 = critical_points(triple).mu2
    if mu2 is None:
        raise ReconstructionError("no homogeneous Einstein ratio mu2")
    a = math.sqrt(Lambda / n)
    c1 = math.sqrt(((d1 - 1) + A * mu2 * mu2) * n / ((n - 1) * Lambda))
    c2 = c1 / math.sqrt(mu2)
    t = np.asarray(t, dtype=float)
    return c1 * np.sin(a * t), c2 * np.sin(a * t), a * c1 * np.cos(a * t), a * c2 * np.cos(a * t)
