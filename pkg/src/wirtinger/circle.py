"""Discrete Wirtinger matrices on the circle and on an interval.

Index convention: angles are alpha_1..alpha_N, stored 0-based. Wedge j lies
between rays j-1 and j, so row i of the matrix pairs ``1/sin alpha_{i+1}``
with position (i, i+1); in closed mode alpha_{N+1} means alpha_1 and the
corner entry (1, N) is ``1/sin alpha_1``. Weights are
``w_i = tan(alpha_i/2) + tan(alpha_{i+1}/2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .angles import CLOSED, DIRICHLET, AngleVector
from .errors import DomainError, InputError, PreconditionError
from .spectral import Signature

__all__ = [
    "EqualAngleSpectrum",
    "GapReport",
    "WirtingerMatrix",
    "WirtingerVerdict",
    "build",
    "build_closed",
    "build_dirichlet",
    "check_wirtinger",
    "energy_matrix",
    "equal_angle_spectrum",
    "find_violation",
    "predicted_signature",
    "spectral_gap",
    "trig_kernel",
    "wirtinger_ratio",
]


@dataclass(frozen=True)
class WirtingerMatrix:
    matrix: np.ndarray
    angles: AngleVector
    omega: float
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def tolerance(self) -> float:
        return spectral.default_tolerance(self.matrix)


@dataclass(frozen=True)
class WirtingerVerdict:
    lhs: float
    rhs: float
    constraint_residual: float | None
    holds: bool
    equality_case: bool

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs


def _weights(a: np.ndarray, closed: bool) -> np.ndarray:
    t = np.tan(a / 2)
    if closed:
        return t + np.roll(t, -1)
    return t[:-1] + t[1:]


def _assemble(a: np.ndarray, closed: bool) -> np.ndarray:
    # per-wedge summation: wedge j joins rays j-1 and j
    n = len(a) if closed else len(a) - 1
    m = np.zeros((n, n))
    cot = np.cos(a) / np.sin(a)
    csc = 1.0 / np.sin(a)
    if closed:
        for j in range(n):
            lo, hi = (j - 1) % n, j
            m[lo, lo] -= cot[j]
            m[hi, hi] -= cot[j]
            m[lo, hi] += csc[j]
            m[hi, lo] += csc[j]
    else:
        # rays 0 and n+1 are boundary rays; variables live on rays 1..n
        for j in range(n + 1):
            lo, hi = j - 1, j
            if lo >= 0:
                m[lo, lo] -= cot[j]
            if hi < n:
                m[hi, hi] -= cot[j]
            if lo >= 0 and hi < n:
                m[lo, hi] += csc[j]
                m[hi, lo] += csc[j]
    return m


def build_closed(angles: AngleVector) -> WirtingerMatrix:
    """Circulant tridiagonal matrix of a cyclic angle vector."""
    if angles.mode != CLOSED:
        raise InputError("build_closed needs a closed-mode angle vector")
    a = angles.array
    return WirtingerMatrix(_assemble(a, True), angles, angles.total(), _weights(a, True))


def build_dirichlet(angles: AngleVector) -> WirtingerMatrix:
    """Tridiagonal n x n matrix from n + 1 angles (zero boundary values)."""
    if angles.mode != DIRICHLET:
        raise InputError("build_dirichlet needs a dirichlet-mode angle vector")
    a = angles.array
    return WirtingerMatrix(_assemble(a, False), angles, angles.total(), _weights(a, False))


def build(angles: AngleVector) -> WirtingerMatrix:
    return build_closed(angles) if angles.mode == CLOSED else build_dirichlet(angles)


def predicted_signature(angles: AngleVector) -> Signature:
    """Signature the theorems predict, with the default numeric tolerance attached."""
    n = angles.size
    m, hit = angles.resonance()
    if angles.mode == CLOSED:
        sig = (2 * m - 1, 2, n - 2 * m - 1) if hit else (2 * m + 1, 0, n - 2 * m - 1)
    else:
        sig = (m - 1, 1, n - m) if hit else (m, 0, n - m)
    if min(sig) < 0:
        # unreachable for valid angle vectors: every alpha_i < pi bounds m
        raise InputError(f"no signature for omega={angles.total()} with n={n}")
    return Signature(*sig, tolerance=build(angles).tolerance())


@dataclass(frozen=True)
class EqualAngleSpectrum:
    """Closed-form eigenvalues of the equal-angle matrix times ``scale``.

    ``eigenvalues[k-1]`` belongs to index k = 1..n of the formula.
    """

    eigenvalues: np.ndarray
    scale: float
    mode: str


def equal_angle_spectrum(n: int, omega: float, mode: str = CLOSED) -> EqualAngleSpectrum:
    """Spectrum of the equal-angle matrix after scaling by ``sin`` of the common angle.

    closed:    2 cos(2 pi k / n) - 2 cos(omega / n),             k = 1..n
    dirichlet: 2 cos(pi k / (n+1)) - 2 cos(omega / (n+1)),       k = 1..n
    """
    if n < 1 or omega <= 0:
        raise InputError("need n >= 1 and omega > 0")
    k = np.arange(1, n + 1)
    if mode == CLOSED:
        lam = 2 * np.cos(2 * np.pi * k / n) - 2 * np.cos(omega / n)
        scale = math.sin(omega / n)
    elif mode == DIRICHLET:
        lam = 2 * np.cos(np.pi * k / (n + 1)) - 2 * np.cos(omega / (n + 1))
        scale = math.sin(omega / (n + 1))
    else:
        raise InputError(f"unknown mode {mode!r}")
    return EqualAngleSpectrum(lam, scale, mode)


def trig_kernel(angles: AngleVector) -> list[np.ndarray]:
    """Kernel vectors built from partial angle sums (unnormalized).

    closed (omega = 0 mod 2 pi): cos and sin of the partial sums.
    dirichlet (omega = 0 mod pi): sin of the partial sums over the n interior rays.
    """
    m, hit = angles.resonance()
    if not hit:
        raise PreconditionError(
            f"omega = {angles.total()!r} is not a multiple of {angles.period!r}; no kernel")
    theta = angles.cumulative()
    if angles.mode == CLOSED:
        return [np.cos(theta), np.sin(theta)]
    return [np.sin(theta[:-1])]


def _extended(angles: AngleVector, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (angles.size,):
        raise InputError(f"x must have length {angles.size}, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InputError("x must be finite")
    if angles.mode == CLOSED:
        return x
    return np.concatenate([[0.0], x, [0.0]])


def check_wirtinger(angles: AngleVector, x) -> WirtingerVerdict:
    """Evaluate both sides of the discrete Wirtinger inequality for ``x``.

    Both sides come from the explicit sums, not from the matrix. In dirichlet
    mode ``x`` is the interior part; the zero boundary values are implicit.
    """
    a = angles.array
    xe = _extended(angles, x)
    if angles.mode == CLOSED:
        diffs = xe - np.roll(xe, -1)          # x_i - x_{i+1}, i = 1..n
        lhs = math.fsum(diffs ** 2 / np.sin(np.roll(a, -1)))
        w = _weights(a, True)
        rhs = math.fsum(w * xe ** 2)
        residual = abs(math.fsum(w * xe))
    else:
        diffs = xe[:-1] - xe[1:]              # i = 0..n
        lhs = math.fsum(diffs ** 2 / np.sin(a))
        rhs = math.fsum(_weights(a, False) * xe[1:-1] ** 2)
        residual = None
    scale = 1e-9 * max(1.0, abs(rhs))
    return WirtingerVerdict(
        lhs=lhs, rhs=rhs, constraint_residual=residual,
        holds=bool(lhs - rhs >= -scale),
        equality_case=bool(abs(lhs - rhs) <= scale))


def energy_matrix(angles: AngleVector) -> np.ndarray:
    """Matrix of the left-hand side: sum of (x_i - x_{i+1})^2 / sin(alpha_{i+1})."""
    a = angles.array
    n = angles.size
    e = np.zeros((n, n))
    if angles.mode == CLOSED:
        for i in range(n):
            j = (i + 1) % n
            c = 1.0 / math.sin(a[j])
            e[i, i] += c
            e[j, j] += c
            e[i, j] -= c
            e[j, i] -= c
    else:
        for i in range(n + 1):
            c = 1.0 / math.sin(a[i])
            if i >= 1:
                e[i - 1, i - 1] += c
            if i < n:
                e[i, i] += c
            if 1 <= i < n:
                e[i - 1, i] -= c
                e[i, i - 1] -= c
    return e


def wirtinger_ratio(angles: AngleVector) -> float:
    """Minimum of lhs / rhs over admissible nonzero x.

    Closed mode minimizes over the constraint hyperplane, dirichlet mode over
    all of R^n. The inequality holds for every admissible x iff this is >= 1.
    """
    e = energy_matrix(angles)
    w = build(angles).weights
    if angles.mode == CLOSED:
        return float(spectral.restricted_eigh(e, w, weight=w).eigenvalues[0])
    return float(spectral.geneigh(e, w).eigenvalues[0])


def find_violation(angles: AngleVector) -> np.ndarray | None:
    """A unit x on the constraint hyperplane with <Mx, x> > 0, if omega > 2 pi.

    Picks the eigenvector of the largest restricted eigenvalue; sign fixed so
    the first nonzero component is positive. Returns None for omega <= 2 pi.
    """
    if angles.mode != CLOSED:
        raise InputError("find_violation is defined for closed mode")
    m, hit = angles.resonance()
    if m == 0 or (m == 1 and hit):
        return None
    wm = build_closed(angles)
    dec = spectral.restricted_eigh(wm.matrix, wm.weights)
    top = dec.eigenvalues[-1]
    if top <= wm.tolerance():
        # unreachable by the signature theorem
        raise PreconditionError("no positive restricted eigenvalue found")
    x = dec.eigenvectors[:, -1]
    return x / np.linalg.norm(x)


@dataclass(frozen=True)
class GapReport:
    mu0: float
    mu1: float
    gap: float
    eigenvalues: np.ndarray


def spectral_gap(angles: AngleVector) -> GapReport:
    """Generalized spectrum of ``(-M) x = mu W x`` and its lowest gap ``mu1 - mu0``.

    The constant vector is an eigenvector with mu = -1 because M 1 = W 1.
    """
    if angles.mode != CLOSED:
        raise InputError("spectral_gap is defined for closed mode")
    m, hit = angles.resonance()
    if m >= 2 or (m == 1 and not hit):
        raise DomainError("spectral gap needs omega <= 2 pi")
    wm = build_closed(angles)
    dec = spectral.geneigh(-wm.matrix, wm.weights)
    mu = dec.eigenvalues
    return GapReport(float(mu[0]), float(mu[1]), float(mu[1] - mu[0]), mu)
