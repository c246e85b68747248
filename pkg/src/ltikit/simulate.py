"""Trajectories of LTI models under declarative input signals.

Continuous models advance grid step by grid step with the
variation-of-constants formula.  Piecewise-constant inputs are integrated in
closed form through an augmented exponential; anything else uses composite
Simpson quadrature of ``expm(A (t - tau)) B u(tau)`` on each step.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import matrixcore as mc
from .errors import DimensionMismatch, DomainMismatch, GridMismatch, InvalidGrid
from .statespace import StateSpaceModel, transition_matrix

DEFAULT_SUBINTERVALS = 8


# -- input signals ----------------------------------------------------------

class InputSignal:
    """Base class; subclasses define ``sample(t, m)``."""

    piecewise_constant = False

    def channels(self) -> int | None:
        return None

    def bind(self, m: int) -> "InputSignal":
        k = self.channels()
        if k is not None and k != m:
            raise DimensionMismatch(f"input has {k} channels, model expects {m}")
        return self

    def sample(self, t: float, m: int) -> np.ndarray:
        raise NotImplementedError

    def breakpoints(self) -> Sequence[float]:
        """Times where a piecewise-constant signal may jump."""
        return ()

    def describe(self) -> dict:
        raise NotImplementedError


def _levels(level) -> np.ndarray:
    v = np.atleast_1d(np.asarray(level, dtype=float))
    if v.ndim != 1 or not np.all(np.isfinite(v)):
        raise DimensionMismatch("signal levels must be a finite scalar or vector")
    return v


def _broadcast(v: np.ndarray, m: int) -> np.ndarray:
    if v.shape[0] == m:
        return v
    if v.shape[0] == 1:
        return np.full(m, v[0])
    raise DimensionMismatch(f"signal has {v.shape[0]} channels, model expects {m}")


@dataclass(frozen=True)
class Zero(InputSignal):
    piecewise_constant = True

    def sample(self, t, m):
        return np.zeros(m)

    def describe(self):
        return {"kind": "zero"}


@dataclass(frozen=True)
class Constant(InputSignal):
    """Constant level; a scalar level is applied to every channel."""

    level: object = 1.0
    piecewise_constant = True

    def channels(self):
        n = _levels(self.level).shape[0]
        return None if n == 1 else n

    def sample(self, t, m):
        return _broadcast(_levels(self.level), m)

    def describe(self):
        return {"kind": "constant", "level": _levels(self.level).tolist()}


@dataclass(frozen=True)
class Step(InputSignal):
    """Zero before ``onset``, ``level`` from then on."""

    level: object = 1.0
    onset: float = 0.0
    piecewise_constant = True

    def channels(self):
        n = _levels(self.level).shape[0]
        return None if n == 1 else n

    def sample(self, t, m):
        if t < self.onset:
            return np.zeros(m)
        return _broadcast(_levels(self.level), m)

    def breakpoints(self):
        return (float(self.onset),)

    def describe(self):
        return {"kind": "step", "level": _levels(self.level).tolist(), "onset": self.onset}


@dataclass(frozen=True)
class Sinusoid(InputSignal):
    """``amplitude * sin(omega * t + phase)`` on every channel."""

    amplitude: object = 1.0
    omega: float = 1.0
    phase: float = 0.0

    def channels(self):
        n = _levels(self.amplitude).shape[0]
        return None if n == 1 else n

    def sample(self, t, m):
        return _broadcast(_levels(self.amplitude), m) * math.sin(self.omega * t + self.phase)

    def describe(self):
        return {"kind": "sinusoid", "amplitude": _levels(self.amplitude).tolist(),
                "omega": self.omega, "phase": self.phase}


@dataclass(frozen=True, eq=False)
class Samples(InputSignal):
    """Zero-order hold of a sample table.

    ``values[k]`` holds on ``[times[k], times[k+1])``; the last value holds
    forever and the signal is zero before ``times[0]``.
    """

    times: np.ndarray
    values: np.ndarray
    piecewise_constant = True

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.shape[0] != t.shape[0] or t.shape[0] == 0:
            raise DimensionMismatch("sample table needs one value row per time")
        if np.any(np.diff(t) <= 0):
            raise InvalidGrid("sample times must be strictly increasing")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise DimensionMismatch("sample table contains non-finite entries")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def channels(self):
        return self.values.shape[1]

    def sample(self, t, m):
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        if k < 0:
            return np.zeros(m)
        return _broadcast(self.values[k], m)

    def breakpoints(self):
        return tuple(self.times)

    def describe(self):
        return {"kind": "samples", "times": self.times.tolist(), "values": self.values.tolist()}


# -- trajectories -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    outputs: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __len__(self):
        return self.times.shape[0]

    def state_at(self, k: int) -> np.ndarray:
        return self.states[k]

    def to_csv(self, path: str | Path | None = None) -> str:
        n = self.states.shape[1]
        p = self.outputs.shape[1]
        header = ["t"] + [f"x{i + 1}" for i in range(n)] + [f"y{i + 1}" for i in range(p)]
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for t, x, y in zip(self.times, self.states, self.outputs):
            buf.write(",".join(f"{v:.17g}" for v in (t, *x, *y)) + "\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, newline="\n")
        return text


def read_output_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Read ``t`` and the ``y*`` columns of a trajectory CSV."""
    lines = Path(path).read_text().strip().splitlines()
    header = [h.strip() for h in lines[0].split(",")]
    if not header or header[0] != "t":
        raise GridMismatch("CSV must start with a 't' column")
    ycols = [i for i, h in enumerate(header) if h.startswith("y")]
    if not ycols:
        raise GridMismatch("CSV has no y columns")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return rows[:, 0], rows[:, ycols]


# -- continuous ---------------------------------------------------------------

def _hold_response(A: np.ndarray, B: np.ndarray, d: float) -> tuple[np.ndarray, np.ndarray]:
    """(expm(A d), integral_0^d expm(A s) ds B) from one augmented exponential."""
    n, m = B.shape
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = A
    aug[:n, n:] = B
    E = mc.expm(aug, d)
    return E[:n, :n], E[:n, n:]


def _simpson_weights(q: int) -> np.ndarray:
    w = np.ones(q + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def _check_continuous(model, t0, t1, steps):
    if model.is_discrete:
        raise DomainMismatch("continuous simulation needs a continuous model")
    if not (math.isfinite(t0) and math.isfinite(t1)) or t1 <= t0:
        raise InvalidGrid(f"need t1 > t0, got t0={t0}, t1={t1}")
    if int(steps) != steps or steps < 1:
        raise InvalidGrid(f"steps must be a positive integer, got {steps}")


def simulate_continuous(model: StateSpaceModel, x0, u: InputSignal, t0: float, t1: float,
                        steps: int, *, subintervals: int = DEFAULT_SUBINTERVALS,
                        method: str = "auto") -> Trajectory:
    """Variation-of-constants solution on ``steps`` equal intervals.

    ``method`` is ``"auto"`` (closed form for piecewise-constant inputs,
    quadrature otherwise), ``"hold"`` or ``"quadrature"``.
    """
    _check_continuous(model, t0, t1, steps)
    x = mc.as_vector(x0, model.n, "x0")
    u = u.bind(model.m)
    if subintervals < 2 or subintervals % 2:
        raise InvalidGrid("Simpson needs an even number of subintervals")
    if method == "auto":
        method = "hold" if u.piecewise_constant else "quadrature"
    if method == "hold" and not u.piecewise_constant:
        raise InvalidGrid("hold integration needs a piecewise-constant input")

    steps = int(steps)
    times = np.linspace(t0, t1, steps + 1)
    h = (t1 - t0) / steps
    A, B = model.A, model.B
    states = np.empty((steps + 1, model.n))
    states[0] = x

    if method == "hold":
        cache = {}

        def step_maps(d):
            key = round(d / h, 12)
            if key not in cache:
                cache[key] = _hold_response(A, B, d)
            return cache[key]

        jumps = np.array(sorted(set(u.breakpoints())))
        for k in range(steps):
            a, b = times[k], times[k + 1]
            cuts = jumps[(jumps > a) & (jumps < b)]
            edges = [a, *cuts, b]
            for lo, hi in zip(edges[:-1], edges[1:]):
                E, G = step_maps(hi - lo)
                x = E @ x + G @ u.sample(lo, model.m)
            states[k + 1] = x
        diag = {"integration": "exact-hold"}
    else:
        q = int(subintervals)
        offsets = np.linspace(0.0, h, q + 1)
        kernels = [mc.expm(A, h - s) @ B for s in offsets]
        weights = _simpson_weights(q) * (h / q)
        E = mc.expm(A, h)
        for k in range(steps):
            a = times[k]
            forced = np.zeros(model.n)
            for w, K, s in zip(weights, kernels, offsets):
                forced += w * (K @ u.sample(a + s, model.m))
            x = E @ x + forced
            states[k + 1] = x
        diag = {"integration": "simpson", "subintervals": q}

    outputs = states @ model.C.T
    return Trajectory(times, states, outputs, diag)


# -- discrete -----------------------------------------------------------------

def _check_discrete(model, t1):
    if not model.is_discrete:
        raise DomainMismatch("discrete simulation needs a discrete model")
    if int(t1) != t1 or t1 < 0:
        raise InvalidGrid(f"horizon must be a non-negative integer, got {t1}")


def simulate_discrete(model: StateSpaceModel, x0, u: InputSignal, t1: int) -> Trajectory:
    """Forward recursion ``x(t+1) = A x(t) + B u(t)`` for t = 0..t1."""
    _check_discrete(model, t1)
    x = mc.as_vector(x0, model.n, "x0")
    u = u.bind(model.m)
    t1 = int(t1)
    states = np.empty((t1 + 1, model.n))
    states[0] = x
    for t in range(t1):
        x = model.A @ x + model.B @ u.sample(t, model.m)
        states[t + 1] = x
    return Trajectory(np.arange(t1 + 1, dtype=float), states, states @ model.C.T,
                      {"integration": "recursion"})


def convolution_states(model: StateSpaceModel, x0, u: InputSignal, t1: int) -> np.ndarray:
    """States from the closed-form convolution sum.

    x(t) = phi(t, 0) x0 + sum_{tau=0}^{t-1} phi(t, tau+1) B u(tau)
    """
    _check_discrete(model, t1)
    x0 = mc.as_vector(x0, model.n, "x0")
    u = u.bind(model.m)
    t1 = int(t1)
    inputs = [model.B @ u.sample(tau, model.m) for tau in range(t1)]
    out = np.empty((t1 + 1, model.n))
    for t in range(t1 + 1):
        x = transition_matrix(model, t, 0) @ x0
        for tau in range(t):
            x = x + transition_matrix(model, t, tau + 1) @ inputs[tau]
        out[t] = x
    return out
