"""Dense real linear-algebra kernel.

Matrices are plain float64 numpy arrays; numpy supplies storage and
elementwise arithmetic only.  Factorizations, eigenvalues and the matrix
exponential are computed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFiniteValue,
    SingularMatrix,
)

COND_LIMIT = 1e12
PIVOT_RTOL = 1e-13
MAX_ORDER = 32

_EPS = np.finfo(float).eps
_QR_MAX_ITS = 60


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D float array; 1-D input becomes a column."""
    a = np.array(value, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue(f"{name} contains NaN or infinite entries")
    return a


def as_vector(value, n: int, name: str = "vector") -> np.ndarray:
    v = np.array(value, dtype=float).reshape(-1)
    if v.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {v.shape[0]}, expected {n}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue(f"{name} contains NaN or infinite entries")
    return v


def _square(A, name="A") -> np.ndarray:
    a = as_matrix(A, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {a.shape}")
    return a


def norm_inf(A) -> float:
    a = np.atleast_2d(np.asarray(A, dtype=float))
    return float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0


def norm_1(A) -> float:
    a = np.atleast_2d(np.asarray(A, dtype=float))
    return float(np.max(np.sum(np.abs(a), axis=0))) if a.size else 0.0


# -- LU factorization -------------------------------------------------------

@dataclass(frozen=True)
class LU:
    """Packed LU factors with row permutation (PA = LU)."""

    lu: np.ndarray
    perm: np.ndarray
    sign: float
    min_pivot: float
    scale: float

    def solve(self, b: np.ndarray) -> np.ndarray:
        lu = self.lu
        n = lu.shape[0]
        b = np.asarray(b, dtype=float)
        vector = b.ndim == 1
        x = (b.reshape(-1, 1) if vector else b)[self.perm].copy()
        for k in range(n):
            x[k + 1:] -= np.outer(lu[k + 1:, k], x[k])
        for k in range(n - 1, -1, -1):
            x[k] /= lu[k, k]
            x[:k] -= np.outer(lu[:k, k], x[k])
        return x[:, 0] if vector else x

    @property
    def pivots_ok(self) -> bool:
        return self.min_pivot > PIVOT_RTOL * self.scale


def lu_factor(A) -> LU:
    a = _square(A).copy()
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1.0
    min_pivot = math.inf
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        pivot = a[k, k]
        min_pivot = min(min_pivot, abs(pivot))
        if pivot == 0.0:
            continue
        a[k + 1:, k] /= pivot
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return LU(a, perm, sign, min_pivot, norm_inf(A))


def condition_number(A) -> float:
    """1-norm condition number; inf when a pivot vanishes."""
    f = lu_factor(A)
    if f.min_pivot == 0.0:
        return math.inf
    inv = f.solve(np.eye(f.lu.shape[0]))
    return norm_1(A) * norm_1(inv)


def is_singular(A, cond_limit: float = COND_LIMIT) -> bool:
    f = lu_factor(A)
    if not f.pivots_ok:
        return True
    inv = f.solve(np.eye(f.lu.shape[0]))
    return norm_1(A) * norm_1(inv) > cond_limit


def solve(A, b, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Solve ``A x = b`` by partial-pivoting LU.

    Raises SingularMatrix when a pivot is below ``PIVOT_RTOL * ||A||_inf``
    or the estimated condition number exceeds ``cond_limit``.
    """
    a = _square(A)
    rhs = np.array(b, dtype=float)
    if rhs.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"right-hand side has {rhs.shape[0]} rows, expected {a.shape[0]}")
    f = lu_factor(a)
    if not f.pivots_ok:
        raise SingularMatrix(f"pivot {f.min_pivot:.3g} below threshold")
    inv = f.solve(np.eye(a.shape[0]))
    cond = norm_1(a) * norm_1(inv)
    if cond > cond_limit:
        raise SingularMatrix(f"condition number {cond:.3g} exceeds {cond_limit:.3g}")
    return f.solve(rhs)


def inv(A, cond_limit: float = COND_LIMIT) -> np.ndarray:
    a = _square(A)
    return solve(a, np.eye(a.shape[0]), cond_limit)


def determinant(A) -> float:
    f = lu_factor(A)
    if f.min_pivot == 0.0:
        return 0.0
    return float(f.sign * np.prod(np.diag(f.lu)))


def matrix_power(A, k: int) -> np.ndarray:
    """Non-negative integer power by repeated squaring."""
    a = _square(A)
    if k < 0:
        raise ValueError("negative powers are not supported")
    result = np.eye(a.shape[0])
    base = a.copy()
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


# -- eigenvalues ------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a real square matrix, sorted by (real, imag)."""

    eigenvalues: tuple

    def __iter__(self):
        return iter(self.eigenvalues)

    def __len__(self):
        return len(self.eigenvalues)

    def as_array(self) -> np.ndarray:
        return np.array(self.eigenvalues, dtype=complex)

    @property
    def abscissa(self) -> float:
        return max(z.real for z in self.eigenvalues)

    @property
    def radius(self) -> float:
        return max(abs(z) for z in self.eigenvalues)


def _balance(a: list) -> None:
    n = len(a)
    radix, sqrdx = 2.0, 4.0
    done = False
    while not done:
        done = True
        for i in range(n):
            r = c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j][i])
                    r += abs(a[i][j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                g = 1.0 / f
                for j in range(n):
                    a[i][j] *= g
                for j in range(n):
                    a[j][i] *= f


def _hessenberg(a: list) -> None:
    # Gaussian elimination with pivoting; similarity preserved.
    n = len(a)
    for m in range(1, n - 1):
        x = 0.0
        i = m
        for j in range(m, n):
            if abs(a[j][m - 1]) > abs(x):
                x = a[j][m - 1]
                i = j
        if i != m:
            for j in range(m - 1, n):
                a[i][j], a[m][j] = a[m][j], a[i][j]
            for j in range(n):
                a[j][i], a[j][m] = a[j][m], a[j][i]
        if x != 0.0:
            for i in range(m + 1, n):
                y = a[i][m - 1]
                if y != 0.0:
                    y /= x
                    a[i][m - 1] = y
                    for j in range(m, n):
                        a[i][j] -= y * a[m][j]
                    for j in range(n):
                        a[j][m] += y * a[j][i]
    for i in range(n):
        for j in range(i - 1):
            a[i][j] = 0.0


def _hqr(a: list) -> list:
    """Francis double-shift QR on an upper Hessenberg matrix (in place)."""
    n = len(a)
    w = [0j] * n
    anorm = sum(abs(a[i][j]) for i in range(n) for j in range(max(i - 1, 0), n))
    nn = n - 1
    t = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = 0
            for ll in range(nn, 0, -1):
                s = abs(a[ll - 1][ll - 1]) + abs(a[ll][ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll][ll - 1]) <= _EPS * s:
                    a[ll][ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn][nn]
            if l == nn:
                w[nn] = complex(x + t)
                nn -= 1
            else:
                y = a[nn - 1][nn - 1]
                ww = a[nn][nn - 1] * a[nn - 1][nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + ww
                    z = math.sqrt(abs(q))
                    x += t
                    if q >= 0.0:
                        z = p + math.copysign(z, p)
                        w[nn - 1] = w[nn] = complex(x + z)
                        if z != 0.0:
                            w[nn] = complex(x - ww / z)
                    else:
                        w[nn - 1] = complex(x + p, -z)
                        w[nn] = complex(x + p, z)
                    nn -= 2
                else:
                    if its == _QR_MAX_ITS:
                        raise ConvergenceFailure("QR sweeps exceeded budget")
                    if its and its % 10 == 0:
                        t += x
                        for i in range(nn + 1):
                            a[i][i] -= x
                        s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                        x = y = 0.75 * s
                        ww = -0.4375 * s * s
                    its += 1
                    m = nn - 2
                    while True:
                        z = a[m][m]
                        r = x - z
                        s = y - z
                        p = (r * s - ww) / a[m + 1][m] + a[m][m + 1]
                        q = a[m + 1][m + 1] - z - r - s
                        r = a[m + 2][m + 1]
                        s = abs(p) + abs(q) + abs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                        v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                        if u <= _EPS * v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i][i - 2] = 0.0
                        if i != m + 2:
                            a[i][i - 3] = 0.0
                    for k in range(m, nn):
                        if k != m:
                            p = a[k][k - 1]
                            q = a[k + 1][k - 1]
                            r = a[k + 2][k - 1] if k + 1 != nn else 0.0
                            x = abs(p) + abs(q) + abs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                        if s == 0.0:
                            continue
                        if k == m:
                            if l != m:
                                a[k][k - 1] = -a[k][k - 1]
                        else:
                            a[k][k - 1] = -s * x
                        p += s
                        x = p / s
                        y = q / s
                        z = r / s
                        q /= p
                        r /= p
                        for j in range(k, nn + 1):
                            p = a[k][j] + q * a[k + 1][j]
                            if k + 1 != nn:
                                p += r * a[k + 2][j]
                                a[k + 2][j] -= p * z
                            a[k + 1][j] -= p * y
                            a[k][j] -= p * x
                        mmin = nn if nn < k + 3 else k + 3
                        for i in range(l, mmin + 1):
                            p = x * a[i][k] + y * a[i][k + 1]
                            if k + 1 != nn:
                                p += z * a[i][k + 2]
                                a[i][k + 2] -= p * r
                            a[i][k + 1] -= p * q
                            a[i][k] -= p
            if l >= nn - 1:
                break
    return w


def eigenvalues(A) -> Spectrum:
    """Eigenvalues via balancing, Hessenberg reduction and shifted QR."""
    a = _square(A)
    n = a.shape[0]
    if n > MAX_ORDER:
        raise DimensionMismatch(f"order {n} exceeds supported maximum {MAX_ORDER}")
    work = a.tolist()
    _balance(work)
    _hessenberg(work)
    vals = _hqr(work)
    # conjugate pairs come out exactly paired; sort for a stable order
    vals.sort(key=lambda z: (z.real, z.imag))
    return Spectrum(tuple(vals))


def symmetric_extremes(S) -> tuple[float, float]:
    """(min, max) eigenvalue of the symmetric part of S."""
    s = _square(S, "S")
    sym = 0.5 * (s + s.T)
    ev = [z.real for z in eigenvalues(sym)]
    return min(ev), max(ev)


# -- matrix exponential -----------------------------------------------------

_PADE_ORDER = 8
_PADE = [
    math.factorial(2 * _PADE_ORDER - k) * math.factorial(_PADE_ORDER)
    / (math.factorial(2 * _PADE_ORDER) * math.factorial(k) * math.factorial(_PADE_ORDER - k))
    for k in range(_PADE_ORDER + 1)
]


def expm(A, t: float = 1.0) -> np.ndarray:
    """exp(A t) by scaling and squaring with a diagonal Pade approximant.

    The argument is scaled by 2**-s so that its 1-norm is at most 0.5.
    """
    a = _square(A)
    if not math.isfinite(t):
        raise NonFiniteValue("time must be finite")
    n = a.shape[0]
    x = a * t
    nrm = norm_1(x)
    s = 0
    if nrm > 0.5:
        s = int(math.ceil(math.log2(nrm / 0.5)))
        x = x / 2.0 ** s
    eye = np.eye(n)
    num = _PADE[0] * eye
    den = _PADE[0] * eye
    power = eye
    for k in range(1, _PADE_ORDER + 1):
        power = power @ x
        term = _PADE[k] * power
        num = num + term
        den = den + term if k % 2 == 0 else den - term
    r = lu_factor(den).solve(num)
    for _ in range(s):
        r = r @ r
    return r
