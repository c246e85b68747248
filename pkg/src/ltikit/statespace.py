"""State-space models, transition matrices and the phase-variable form."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import matrixcore as mc
from .errors import DimensionMismatch, InvalidTime, MultiInput, Uncontrollable


class Domain(str, enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"


@dataclass(frozen=True, eq=False)
class StateSpaceModel:
    """LTI model ``x' = A x + B u``, ``y = C x`` (or the difference analog)."""

    domain: Domain
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    metadata: Mapping = field(default_factory=dict)

    def __post_init__(self):
        A = mc.as_matrix(self.A, "A")
        B = mc.as_matrix(self.B, "B")
        # a flat C is a single output row
        C = mc.as_matrix(np.atleast_2d(np.asarray(self.C, dtype=float)), "C")
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatch(f"A must be square, got {A.shape}")
        if B.shape[0] != A.shape[0]:
            raise DimensionMismatch(f"B has {B.shape[0]} rows, A is {A.shape[0]}x{A.shape[0]}")
        if C.shape[1] != A.shape[0]:
            raise DimensionMismatch(f"C has {C.shape[1]} columns, A is {A.shape[0]}x{A.shape[0]}")
        for name, arr in (("A", A), ("B", B), ("C", C)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "metadata", dict(self.metadata))

    @classmethod
    def continuous(cls, A, B, C, **metadata) -> "StateSpaceModel":
        return cls(Domain.CONTINUOUS, A, B, C, metadata)

    @classmethod
    def discrete(cls, A, B, C, **metadata) -> "StateSpaceModel":
        return cls(Domain.DISCRETE, A, B, C, metadata)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def is_discrete(self) -> bool:
        return self.domain is Domain.DISCRETE

    def with_A(self, A) -> "StateSpaceModel":
        return StateSpaceModel(self.domain, A, self.B, self.C, self.metadata)

    def __eq__(self, other):
        if not isinstance(other, StateSpaceModel):
            return NotImplemented
        return (self.domain is other.domain
                and all(np.array_equal(getattr(self, k), getattr(other, k)) for k in "ABC"))

    __hash__ = None


@dataclass(frozen=True)
class CharPoly:
    """Monic polynomial, coefficients from the highest degree down."""

    coefficients: tuple

    def __post_init__(self):
        c = tuple(float(x) for x in self.coefficients)
        if not c or c[0] != 1.0:
            raise ValueError("characteristic polynomial must be monic")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_roots(cls, roots) -> "CharPoly":
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.append(c, 0) - r * np.insert(c, 0, 0)
        return cls((1.0, *np.real(c[1:])))

    @classmethod
    def deadbeat(cls, n: int) -> "CharPoly":
        return cls((1.0,) + (0.0,) * n)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def ascending(self) -> np.ndarray:
        """(a0, a1, ..., a_{n-1}) without the leading one."""
        return np.array(self.coefficients[:0:-1])

    def __call__(self, z):
        acc = 0.0
        for c in self.coefficients:
            acc = acc * z + c
        return acc

    def companion(self) -> np.ndarray:
        """Phase-variable state matrix: superdiagonal ones, last row -a."""
        n = self.degree
        A = np.zeros((n, n))
        A[:-1, 1:] = np.eye(n - 1)
        A[-1, :] = -self.ascending
        return A


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    model: StateSpaceModel
    T: np.ndarray
    poly: CharPoly


def transition_matrix(model: StateSpaceModel, t, tau) -> np.ndarray:
    """phi(t, tau): expm(A (t - tau)) or A**(t - tau)."""
    if t == tau:
        return np.eye(model.n)
    if model.is_discrete:
        if int(t) != t or int(tau) != tau or tau < 0:
            raise InvalidTime("discrete times must be non-negative integers")
        if t < tau:
            raise InvalidTime(f"discrete transition needs t >= tau, got t={t}, tau={tau}")
        return mc.matrix_power(model.A, int(t) - int(tau))
    return mc.expm(model.A, t - tau)


def characteristic_polynomial(A) -> CharPoly:
    """Expanded from the computed eigenvalues."""
    return CharPoly.from_roots(mc.eigenvalues(A))


def controllability_matrix(A, B) -> np.ndarray:
    A = mc.as_matrix(A, "A")
    B = mc.as_matrix(B, "B")
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def observability_matrix(A, C) -> np.ndarray:
    return controllability_matrix(np.asarray(A).T, np.asarray(C).T).T


def to_phase_variable(model: StateSpaceModel, cond_limit: float = mc.COND_LIMIT) -> CanonicalForm:
    """Similarity transform to phase-variable form, ``x = T x'``.

    T = ctrb(A, B) @ inv(ctrb(A', B')).
    """
    if model.m != 1:
        raise MultiInput(f"phase-variable form needs a single input, model has {model.m}")
    ctrb = controllability_matrix(model.A, model.B)
    if mc.is_singular(ctrb, cond_limit):
        raise Uncontrollable("controllability matrix is singular")
    poly = characteristic_polynomial(model.A)
    A_c = poly.companion()
    B_c = np.zeros((model.n, 1))
    B_c[-1, 0] = 1.0
    ctrb_c = controllability_matrix(A_c, B_c)
    # T ctrb_c = ctrb  <=>  ctrb_c^T T^T = ctrb^T
    T = mc.solve(ctrb_c.T, ctrb.T).T
    canon = StateSpaceModel(model.domain, A_c, B_c, model.C @ T, model.metadata)
    return CanonicalForm(canon, T, poly)
