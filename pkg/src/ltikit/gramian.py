"""Finite-horizon Gramians, minimum-energy steering and initial-state
reconstruction."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import GridMismatch, InvalidHorizon, SingularGramian, SingularMatrix
from .simulate import (
    DEFAULT_SUBINTERVALS,
    InputSignal,
    Samples,
    Trajectory,
    simulate_continuous,
    simulate_discrete,
)
from .statespace import StateSpaceModel

QUAD_TOL = 1e-9
MAX_PANELS = 2 ** 14
MIN_EIG_RTOL = 1e-10


class GramianKind(str, enum.Enum):
    CONTROLLABILITY = "Controllability"
    OBSERVABILITY = "Observability"


@dataclass(frozen=True, eq=False)
class GramianReport:
    kind: GramianKind
    horizon: tuple
    W: np.ndarray
    det: float
    nonsingular: bool
    min_eigenvalue: float
    panels: int = 0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "horizon": list(self.horizon),
            "W": self.W.tolist(),
            "det": self.det,
            "nonsingular": self.nonsingular,
            "min_eigenvalue": self.min_eigenvalue,
        }


def _report(kind, horizon, W, cond_limit, panels=0) -> GramianReport:
    W = 0.5 * (W + W.T)
    scale = mc.norm_inf(W)
    lo, _ = mc.symmetric_extremes(W) if scale > 0 else (0.0, 0.0)
    det = mc.determinant(W)
    nonsingular = (scale > 0 and det != 0.0 and lo >= MIN_EIG_RTOL * scale
                   and not mc.is_singular(W, cond_limit))
    return GramianReport(kind, horizon, W, det, nonsingular, lo, panels)


def _simpson_gram(F: np.ndarray, G: np.ndarray, T: float, panels: int) -> np.ndarray:
    """Composite Simpson for int_0^T expm(F s) G expm(F s)' ds."""
    h = T / panels
    step = mc.expm(F, h)
    K = np.eye(F.shape[0])
    acc = np.zeros_like(G)
    for k in range(panels + 1):
        w = 1.0 if k in (0, panels) else (4.0 if k % 2 else 2.0)
        acc += w * (K @ G @ K.T)
        K = step @ K
    return acc * (h / 3.0)


def gram_integral(F, G, T: float, quad_tol: float = QUAD_TOL) -> tuple[np.ndarray, int]:
    """Refine panels by doubling until successive estimates agree to
    ``quad_tol * max(1, ||W||)`` entrywise, or the panel cap is reached."""
    if T == 0:
        return np.zeros_like(G), 0
    panels = 16
    prev = _simpson_gram(F, G, T, panels)
    while panels < MAX_PANELS:
        panels *= 2
        cur = _simpson_gram(F, G, T, panels)
        if np.max(np.abs(cur - prev)) < quad_tol * max(1.0, mc.norm_inf(cur)):
            return cur, panels
        prev = cur
    return prev, panels


def _discrete_sum(F, G, count: int) -> np.ndarray:
    acc = np.zeros_like(G)
    K = np.eye(F.shape[0])
    for _ in range(count):
        acc += K @ G @ K.T
        K = F @ K
    return acc


def _integer_horizon(t1, t0=0):
    if int(t1) != t1 or int(t0) != t0 or t0 < 0:
        raise InvalidHorizon("discrete horizons must be non-negative integers")
    if t1 <= t0:
        raise InvalidHorizon(f"need t1 > t0, got t0={t0}, t1={t1}")
    return int(t1), int(t0)


def controllability_gramian(model: StateSpaceModel, t0, t1, *, quad_tol: float = QUAD_TOL,
                            cond_limit: float = mc.COND_LIMIT) -> GramianReport:
    """W(t0, t1) = int phi(t1, tau) B B' phi(t1, tau)' dtau (or the sum)."""
    G = model.B @ model.B.T
    kind = GramianKind.CONTROLLABILITY
    if model.is_discrete:
        t1, t0 = _integer_horizon(t1, t0)
        return _report(kind, (t0, t1), _discrete_sum(model.A, G, t1 - t0), cond_limit)
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
        raise InvalidHorizon(f"need t1 >= t0, got t0={t0}, t1={t1}")
    W, panels = gram_integral(model.A, G, t1 - t0, quad_tol)
    return _report(kind, (t0, t1), W, cond_limit, panels)


def observability_gramian(model: StateSpaceModel, t1, *, quad_tol: float = QUAD_TOL,
                          cond_limit: float = mc.COND_LIMIT) -> GramianReport:
    """M(0, t1) = int_0^t1 phi(tau, 0)' C' C phi(tau, 0) dtau (or the sum)."""
    G = model.C.T @ model.C
    kind = GramianKind.OBSERVABILITY
    if model.is_discrete:
        t1, _ = _integer_horizon(t1)
        return _report(kind, (0, t1), _discrete_sum(model.A.T, G, t1), cond_limit)
    if not math.isfinite(t1) or t1 <= 0:
        raise InvalidHorizon(f"need t1 > 0, got {t1}")
    M, panels = gram_integral(model.A.T, G, t1, quad_tol)
    return _report(kind, (0, t1), M, cond_limit, panels)


# -- steering -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SteeringInput(InputSignal):
    """u(t) = B' expm(A' (t1 - t)) eta, the minimum-energy control.

    ``grid`` is the number of equal intervals used by :meth:`table`.
    """

    A: np.ndarray
    B: np.ndarray
    eta: np.ndarray
    t0: float
    t1: float
    grid: int
    energy: float

    def channels(self):
        return self.B.shape[1]

    def sample(self, t, m):
        return self.B.T @ mc.expm(self.A.T, self.t1 - t) @ self.eta

    def table(self) -> tuple[np.ndarray, np.ndarray]:
        times = np.linspace(self.t0, self.t1, self.grid + 1)
        return times, np.array([self.sample(t, self.B.shape[1]) for t in times])

    def describe(self):
        return {"kind": "min-energy", "eta": self.eta.tolist(), "t0": self.t0,
                "t1": self.t1, "energy": self.energy}


def min_energy_input(model: StateSpaceModel, x0, x1, t1, grid: int = 200, *,
                     t0: float = 0.0, quad_tol: float = QUAD_TOL,
                     cond_limit: float = mc.COND_LIMIT) -> InputSignal:
    """Smallest-energy input steering ``x0`` at ``t0`` to ``x1`` at ``t1``.

    Continuous models get an analytic :class:`SteeringInput`; discrete models
    a sample table on ``t0 .. t1-1`` followed by zero.
    """
    x0 = mc.as_vector(x0, model.n, "x0")
    x1 = mc.as_vector(x1, model.n, "x1")
    rep = controllability_gramian(model, t0, t1, quad_tol=quad_tol, cond_limit=cond_limit)
    if not rep.nonsingular:
        raise SingularGramian(f"controllability Gramian is singular on [{t0}, {t1}]")
    A, B = model.A, model.B
    if model.is_discrete:
        steps = int(t1) - int(t0)
        gap = x1 - mc.matrix_power(A, steps) @ x0
    else:
        gap = x1 - mc.expm(A, t1 - t0) @ x0
    try:
        eta = mc.solve(rep.W, gap, cond_limit)
    except SingularMatrix as exc:
        raise SingularGramian(str(exc)) from exc
    energy = float(eta @ rep.W @ eta)
    if not model.is_discrete:
        return SteeringInput(A, B, eta, float(t0), float(t1), int(grid), energy)
    values = []
    for tau in range(int(t0), int(t1)):
        values.append(B.T @ mc.matrix_power(A.T, int(t1) - tau - 1) @ eta)
    values.append(np.zeros(model.m))
    return Samples(np.arange(int(t0), int(t1) + 1, dtype=float), np.array(values))


# -- reconstruction ---------------------------------------------------------------

def _trapezoid_weights(times):
    w = np.zeros_like(times)
    d = np.diff(times)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


def reconstruct_initial_state(model: StateSpaceModel, u: InputSignal, y, t1, *,
                              subintervals: int = DEFAULT_SUBINTERVALS,
                              quad_tol: float = QUAD_TOL,
                              cond_limit: float = mc.COND_LIMIT) -> np.ndarray:
    """Least-squares initial state from an input/output record.

    ``y`` is a :class:`Trajectory` or a ``(times, outputs)`` pair.  Discrete
    records must cover t = 0 .. t1-1; continuous records must lie on an
    equally spaced grid from 0 to t1.
    """
    if isinstance(y, Trajectory):
        times, outputs = y.times, y.outputs
    else:
        times, outputs = (np.asarray(a, dtype=float) for a in y)
    outputs = np.asarray(outputs, dtype=float).reshape(len(times), -1)
    if outputs.shape[1] != model.p:
        raise GridMismatch(f"record has {outputs.shape[1]} output channels, model has {model.p}")

    rep = observability_gramian(model, t1, quad_tol=quad_tol, cond_limit=cond_limit)
    if not rep.nonsingular:
        raise SingularGramian(f"observability Gramian is singular at t1={t1}")

    C = model.C
    if model.is_discrete:
        t1 = int(t1)
        index = {float(t): k for k, t in enumerate(times)}
        try:
            rows = [index[float(t)] for t in range(t1)]
        except KeyError as exc:
            raise GridMismatch(f"record lacks sample t={exc.args[0]}") from None
        forced = simulate_discrete(model, np.zeros(model.n), u, t1).outputs[:t1]
        resid = outputs[rows] - forced
        weights = np.ones(t1)
        step = model.A
        count = t1
    else:
        k = len(times) - 1
        if k < 1 or abs(times[0]) > 1e-12 * max(1.0, t1) or abs(times[-1] - t1) > 1e-9 * max(1.0, t1):
            raise GridMismatch("continuous record must span [0, t1]")
        if np.max(np.abs(np.diff(times) - t1 / k)) > 1e-9 * t1:
            raise GridMismatch("continuous record must be equally spaced")
        forced = simulate_continuous(model, np.zeros(model.n), u, 0.0, float(t1), k,
                                     subintervals=subintervals).outputs
        resid = outputs - forced
        weights = _trapezoid_weights(np.linspace(0.0, float(t1), k + 1))
        step = mc.expm(model.A, t1 / k)
        count = k + 1

    normal = np.zeros((model.n, model.n))
    rhs = np.zeros(model.n)
    Phi = np.eye(model.n)
    for j in range(count):
        CP = C @ Phi
        normal += weights[j] * CP.T @ CP
        rhs += weights[j] * CP.T @ resid[j]
        Phi = step @ Phi
    try:
        return mc.solve(normal, rhs, cond_limit)
    except SingularMatrix as exc:
        raise SingularGramian(str(exc)) from exc
