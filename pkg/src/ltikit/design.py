"""Single-input pole placement (deadbeat included) and finite-horizon
discrete LQR."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import (
    DimensionMismatch,
    DomainMismatch,
    IndefiniteWeight,
    InvalidHorizon,
    NonSymmetricWeight,
)
from .statespace import CharPoly, StateSpaceModel, to_phase_variable

SYMMETRY_TOL = 1e-10
DEFINITE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class FeedbackGain:
    """Static law ``u = -F x``."""

    F: np.ndarray
    desired_poly: CharPoly
    canonical_gain: np.ndarray | None = None
    T: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {"F": self.F.tolist(), "desired_poly": list(self.desired_poly.coefficients)}
        if self.canonical_gain is not None:
            d["canonical_gain"] = self.canonical_gain.tolist()
        if self.T is not None:
            d["T"] = self.T.tolist()
        return d


def state_feedback_gain(model: StateSpaceModel, desired, *, cond_limit: float = mc.COND_LIMIT) -> FeedbackGain:
    """Place the closed-loop characteristic polynomial at ``desired``.

    In phase-variable coordinates the gain is the coefficient difference
    ``f'_j = d_j - a_j`` (ascending); it is mapped back with ``F = F' T^-1``.
    """
    if not isinstance(desired, CharPoly):
        desired = CharPoly(tuple(desired))
    if desired.degree != model.n:
        raise DimensionMismatch(f"desired polynomial has degree {desired.degree}, model order {model.n}")
    canon = to_phase_variable(model, cond_limit)
    f_canon = (desired.ascending - canon.poly.ascending).reshape(1, -1)
    # F T = F'  <=>  T' F' = F'^T
    F = mc.solve(canon.T.T, f_canon.T, cond_limit).T
    return FeedbackGain(F, desired, f_canon, canon.T)


def deadbeat_gain(model: StateSpaceModel, **kw) -> FeedbackGain:
    """All closed-loop eigenvalues at zero, so (A - B F)^n = 0."""
    return state_feedback_gain(model, CharPoly.deadbeat(model.n), **kw)


def closed_loop(model: StateSpaceModel, gain) -> StateSpaceModel:
    F = gain.F if isinstance(gain, FeedbackGain) else mc.as_matrix(gain, "F")
    if F.shape != (model.m, model.n):
        raise DimensionMismatch(f"gain must be {model.m}x{model.n}, got {F.shape}")
    return model.with_A(model.A - model.B @ F)


# -- LQR ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LqrSolution:
    """Gains F(i), i = i0..i1-1, and Riccati matrices P(i), i = i0..i1."""

    i0: int
    i1: int
    gains: tuple
    riccati: tuple

    def gain(self, i: int) -> np.ndarray:
        return self.gains[i - self.i0]

    def P(self, i: int) -> np.ndarray:
        return self.riccati[i - self.i0]

    def cost_of(self, x0) -> float:
        x0 = np.asarray(x0, dtype=float)
        return float(x0 @ self.riccati[0] @ x0)

    def to_dict(self) -> dict:
        return {
            "horizon": [self.i0, self.i1],
            "gains": [F.tolist() for F in self.gains],
            "riccati": [P.tolist() for P in self.riccati],
        }


def output_weight(D, R3) -> np.ndarray:
    """State weight ``D' R3 D`` for a penalty on the controlled output D x."""
    D = mc.as_matrix(D, "D")
    R3 = mc.as_matrix(R3, "R3")
    return D.T @ R3 @ D


def _weight(M, n, name, *, definite):
    M = mc.as_matrix(M, name)
    if M.shape != (n, n):
        raise DimensionMismatch(f"{name} must be {n}x{n}, got {M.shape}")
    if np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
        raise NonSymmetricWeight(f"{name} is not symmetric")
    M = 0.5 * (M + M.T)
    scale = mc.norm_inf(M)
    if scale == 0.0:
        if definite:
            raise IndefiniteWeight(f"{name} must be positive definite")
        return M
    lo, _ = mc.symmetric_extremes(M)
    if definite and lo <= DEFINITE_RTOL * scale:
        raise IndefiniteWeight(f"{name} must be positive definite (min eigenvalue {lo:.3g})")
    if not definite and lo < -DEFINITE_RTOL * scale:
        raise IndefiniteWeight(f"{name} must be positive semidefinite (min eigenvalue {lo:.3g})")
    return M


def lqr(model: StateSpaceModel, R1, R, P1, i0: int, i1: int) -> LqrSolution:
    """Backward Riccati recursion for

        J = sum_{i=i0}^{i1-1} [x(i+1)' R1 x(i+1) + u(i)' R u(i)] + x(i1)' P1 x(i1)

    F(i) = [R + B'(R1 + P(i+1))B]^-1 B'(R1 + P(i+1)) A
    P(i) = A'(R1 + P(i+1))(A - B F(i)),   P(i1) = P1
    """
    if not model.is_discrete:
        raise DomainMismatch("finite-horizon LQR is implemented for discrete models")
    if int(i0) != i0 or int(i1) != i1 or i1 <= i0:
        raise InvalidHorizon(f"need integers i1 > i0, got i0={i0}, i1={i1}")
    n, m = model.n, model.m
    R1 = _weight(R1, n, "R1", definite=False)
    R = _weight(R, m, "R", definite=True)
    P_next = _weight(P1, n, "P1", definite=False)
    A, B = model.A, model.B
    gains = []
    riccati = [np.array(P1, dtype=float)]
    for _ in range(int(i0), int(i1)):
        Q = R1 + P_next
        F = mc.solve(R + B.T @ Q @ B, B.T @ Q @ A)
        P = A.T @ Q @ (A - B @ F)
        P = 0.5 * (P + P.T)
        gains.append(F)
        riccati.append(P)
        P_next = P
    gains.reverse()
    riccati.reverse()
    return LqrSolution(int(i0), int(i1), tuple(gains), tuple(riccati))
