"""Equilibria, eigenvalue classification, quadratic Lyapunov checks and the
impulse-response integral used for BIBO analysis."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import DomainMismatch, InvalidGrid, NotPositiveDefinite, NonSymmetricWeight
from .statespace import StateSpaceModel

EIG_TOL = 1e-9
DEFINITE_RTOL = 1e-9


class Classification(str, enum.Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    MARGINAL = "Marginal"
    UNSTABLE = "Unstable"


class LyapunovVerdict(str, enum.Enum):
    CERTIFIES_ASYMPTOTIC = "CertifiesAsymptotic"
    CERTIFIES_STABILITY = "CertifiesStability"
    FAILS = "Fails"


class BiboVerdict(str, enum.Enum):
    BOUNDED = "Bounded"
    GROWING = "Growing"


@dataclass(frozen=True, eq=False)
class LyapunovCertificate:
    """Quadratic candidate ``V(x) = (x - x_bar)' P (x - x_bar)``.

    ``S = A'P + PA`` is the matrix of dV/dt along the free motion about
    ``x_bar``.
    """

    P: np.ndarray
    S: np.ndarray
    x_bar: np.ndarray
    verdict: LyapunovVerdict
    max_derivative_eig: float

    def value(self, x) -> float:
        d = np.asarray(x, dtype=float) - self.x_bar
        return float(d @ self.P @ d)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    eigenvalues: mc.Spectrum
    classification: Classification
    bibo_by_eigenvalues: bool
    lyapunov_certificate: LyapunovCertificate | None = None


@dataclass(frozen=True, eq=False)
class BiboProfile:
    """I(t) = int_0^t |T_ij(t, tau)| dtau per (output i, input j)."""

    sample_times: np.ndarray
    integral_values: np.ndarray  # shape (len(times), p, m)
    verdict: BiboVerdict
    method: str
    final_slope: float

    def to_csv(self) -> str:
        k, p, m = self.integral_values.shape
        cols = [f"I_{i + 1}{j + 1}" for i in range(p) for j in range(m)]
        lines = [",".join(["t", *cols])]
        for t, block in zip(self.sample_times, self.integral_values):
            lines.append(",".join(f"{v:.17g}" for v in (t, *block.reshape(-1))))
        return "\n".join(lines) + "\n"


def equilibrium(model: StateSpaceModel, u_const) -> np.ndarray:
    """x_bar with ``A x_bar + B u = 0``."""
    if model.is_discrete:
        raise DomainMismatch("equilibrium is defined here for continuous models")
    u = mc.as_vector(u_const, model.m, "u")
    return mc.solve(model.A, -(model.B @ u))


def _classify_spectrum(spec: mc.Spectrum, discrete: bool, tol: float) -> Classification:
    if discrete:
        mags = [abs(z) for z in spec]
        if all(r < 1.0 - tol for r in mags):
            return Classification.ASYMPTOTICALLY_STABLE
        if any(r > 1.0 + tol for r in mags):
            return Classification.UNSTABLE
    else:
        re = [z.real for z in spec]
        if all(r < -tol for r in re):
            return Classification.ASYMPTOTICALLY_STABLE
        if any(r > tol for r in re):
            return Classification.UNSTABLE
    return Classification.MARGINAL


def classify(model: StateSpaceModel, tol: float = EIG_TOL, P=None, x_bar=None) -> StabilityReport:
    """Eigenvalue verdict; optionally attaches a Lyapunov check with ``P``."""
    spec = mc.eigenvalues(model.A)
    cls = _classify_spectrum(spec, model.is_discrete, tol)
    cert = None
    if P is not None:
        xb = np.zeros(model.n) if x_bar is None else x_bar
        cert = lyapunov_check(model, xb, P)
    return StabilityReport(spec, cls, cls is Classification.ASYMPTOTICALLY_STABLE, cert)


def lyapunov_check(model: StateSpaceModel, x_bar, P) -> LyapunovCertificate:
    if model.is_discrete:
        raise DomainMismatch("quadratic certificate check is for continuous models")
    P = mc.as_matrix(P, "P")
    if P.shape != (model.n, model.n):
        raise NonSymmetricWeight(f"P must be {model.n}x{model.n}")
    if np.max(np.abs(P - P.T)) > 1e-10:
        raise NonSymmetricWeight("P is not symmetric")
    xb = mc.as_vector(x_bar, model.n, "x_bar")
    lo, _ = mc.symmetric_extremes(P)
    if lo <= DEFINITE_RTOL * mc.norm_inf(P):
        raise NotPositiveDefinite(f"P has minimum eigenvalue {lo:.3g}")
    A = model.A
    S = A.T @ P + P @ A
    snorm = mc.norm_inf(S)
    _, hi = mc.symmetric_extremes(S) if snorm > 0 else (0.0, 0.0)
    if hi < -DEFINITE_RTOL * snorm:
        verdict = LyapunovVerdict.CERTIFIES_ASYMPTOTIC
    elif hi <= DEFINITE_RTOL * snorm:
        verdict = LyapunovVerdict.CERTIFIES_STABILITY
    else:
        verdict = LyapunovVerdict.FAILS
    return LyapunovCertificate(P, S, xb, verdict, hi)


# -- BIBO integral ------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def _gauss_abs(f, a, b):
    if b <= a:
        return 0.0
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * sum(w * abs(f(mid + half * x)) for x, w in zip(_GL_NODES, _GL_WEIGHTS))


def _bisect_root(f, a, b, fa):
    for _ in range(60):
        c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0.0 or b - a < 1e-15 * max(1.0, abs(c)):
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def bibo_integral(model: StateSpaceModel, t_end: float, samples: int = 101, *,
                  panels: int = 64, slope_tol: float = 1e-6, tol: float = EIG_TOL) -> BiboProfile:
    """Impulse-response absolute integral at ``samples`` equally spaced times.

    The kernel ``C expm(A s) B`` is smooth; its absolute value is integrated
    with Simpson's rule on cells where it keeps its sign and with Gauss
    quadrature on either side of a bisected zero crossing otherwise.

    The verdict is Bounded whenever every eigenvalue is strictly stable.
    Otherwise it is a trend heuristic: Growing if the mean slope of I over
    the last quarter of the window exceeds ``slope_tol``.
    """
    if model.is_discrete:
        raise DomainMismatch("impulse-response integral is for continuous models")
    if not math.isfinite(t_end) or t_end <= 0:
        raise InvalidGrid(f"t_end must be positive, got {t_end}")
    if int(samples) != samples or samples < 2:
        raise InvalidGrid("need at least two sample times")
    if panels < 1:
        raise InvalidGrid("panels must be positive")
    samples = int(samples)
    A, B, C = model.A, model.B, model.C
    p, m = C.shape[0], B.shape[1]
    times = np.linspace(0.0, t_end, samples)
    h = t_end / ((samples - 1) * panels)
    nodes = (samples - 1) * panels * 2 + 1
    half = mc.expm(A, h / 2)

    # kernel values on the half-step grid by repeated propagation
    vals = np.empty((nodes, p, m))
    X = B.copy()
    for k in range(nodes):
        vals[k] = C @ X
        X = half @ X

    def kernel(i, j):
        return lambda s: float((C[i] @ mc.expm(A, s) @ B[:, j]))

    cumulative = np.zeros((samples, p, m))
    for i in range(p):
        for j in range(m):
            f = kernel(i, j)
            g = vals[:, i, j]
            acc = 0.0
            for c in range(nodes // 2):
                lo, md, hi = g[2 * c], g[2 * c + 1], g[2 * c + 2]
                a = 2 * c * (h / 2)
                b = a + h
                signs = {np.sign(lo), np.sign(md), np.sign(hi)} - {0.0}
                if len(signs) <= 1:
                    acc += h / 6.0 * (abs(lo) + 4 * abs(md) + abs(hi))
                else:
                    # split at each crossing between the three nodes
                    pts = [(a, lo), (a + h / 2, md), (b, hi)]
                    edges = [a]
                    for (s0, v0), (s1, v1) in zip(pts[:-1], pts[1:]):
                        if v0 * v1 < 0:
                            edges.append(_bisect_root(f, s0, s1, v0))
                    edges.append(b)
                    acc += sum(_gauss_abs(f, e0, e1) for e0, e1 in zip(edges[:-1], edges[1:]))
                if (c + 1) % panels == 0:
                    cumulative[(c + 1) // panels, i, j] = acc

    stable = _classify_spectrum(mc.eigenvalues(A), False, tol) is Classification.ASYMPTOTICALLY_STABLE
    q = max(1, (samples - 1) // 4)
    span = times[-1] - times[-1 - q]
    slope = float(np.max((cumulative[-1] - cumulative[-1 - q]) / span))
    if stable:
        verdict, method = BiboVerdict.BOUNDED, "eigenvalue-certificate"
    else:
        verdict = BiboVerdict.GROWING if slope > slope_tol else BiboVerdict.BOUNDED
        method = "trend-heuristic"
    return BiboProfile(times, cumulative, verdict, method, slope)
