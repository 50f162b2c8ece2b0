"""Dense symmetric eigen-machinery: decomposition, signature, kernels.

Everything here works on plain ``numpy`` arrays. Symmetry is checked, never
repaired: a matrix that is not exactly symmetric is rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError

__all__ = [
    "EigenDecomposition",
    "Signature",
    "check_symmetric",
    "default_tolerance",
    "eigh",
    "geneigh",
    "kernel_basis",
    "restricted_eigh",
    "signature",
]

# components below this are treated as zero when fixing eigenvector signs
_SIGN_EPS = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in nondecreasing order, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


@dataclass(frozen=True)
class Signature:
    positive: int
    zero: int
    negative: int
    tolerance: float

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.positive, self.zero, self.negative)

    @property
    def n(self) -> int:
        return self.positive + self.zero + self.negative

    def __str__(self) -> str:
        return "({}, {}, {})".format(*self.as_tuple())


def check_symmetric(m) -> np.ndarray:
    """Return ``m`` as a float array after validating shape, finiteness, symmetry."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InputError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix has non-finite entries")
    if not np.array_equal(a, a.T):
        raise InputError("matrix is not exactly symmetric")
    return a


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # first component with |v_i| > eps made positive, column by column
    v = vectors.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        idx = np.flatnonzero(np.abs(col) > _SIGN_EPS)
        if idx.size and col[idx[0]] < 0:
            v[:, k] = -col
    return v


def eigh(m) -> EigenDecomposition:
    """Full spectral decomposition of a symmetric matrix (LAPACK ``syevd``)."""
    a = check_symmetric(m)
    w, v = np.linalg.eigh(a)
    return EigenDecomposition(w, _fix_signs(v))


def spectral_norm(eigenvalues) -> float:
    return float(np.max(np.abs(eigenvalues)))


def default_tolerance(m) -> float:
    """Zero threshold ``1e-9 * max(1, ||M||_2)``."""
    w = np.linalg.eigvalsh(check_symmetric(m))
    return 1e-9 * max(1.0, spectral_norm(w))


def _count(w: np.ndarray, tol: float) -> Signature:
    pos = int(np.count_nonzero(w > tol))
    neg = int(np.count_nonzero(w < -tol))
    sig = Signature(pos, len(w) - pos - neg, neg, float(tol))
    assert sig.n == len(w)
    return sig


def signature(m, tol: float | None = None) -> Signature:
    """Count positive, zero and negative eigenvalues of ``m``.

    An eigenvalue counts as zero when ``|lambda| <= tol``. The default
    tolerance is relative to the spectral norm, see :func:`default_tolerance`.
    """
    a = check_symmetric(m)
    w = np.linalg.eigvalsh(a)
    if tol is None:
        tol = 1e-9 * max(1.0, spectral_norm(w))
    elif tol < 0:
        raise InputError("tolerance must be nonnegative")
    return _count(w, tol)


def kernel_basis(m, tol: float | None = None) -> list[np.ndarray]:
    """Orthonormal basis of the numerical null space (possibly empty)."""
    w, v = eigh(m)
    if tol is None:
        tol = 1e-9 * max(1.0, spectral_norm(w))
    return [v[:, k].copy() for k in np.flatnonzero(np.abs(w) <= tol)]


def geneigh(m, weights) -> EigenDecomposition:
    """Solve ``M x = lambda W x`` for a diagonal positive ``W``.

    ``weights`` is the diagonal of ``W`` (a full diagonal matrix is accepted
    too). Returned eigenvectors are W-orthonormal.
    """
    a = check_symmetric(m)
    d = np.asarray(weights, dtype=float)
    if d.ndim == 2:
        if not np.array_equal(d, np.diag(np.diag(d))):
            raise InputError("weight matrix must be diagonal")
        d = np.diag(d)
    if d.shape != (a.shape[0],):
        raise InputError("weight vector has the wrong length")
    if not np.all(np.isfinite(d)) or np.any(d <= 0):
        raise InputError("weights must be finite and strictly positive")
    s = 1.0 / np.sqrt(d)
    scaled = s[:, None] * a * s[None, :]
    # scaled is symmetric in exact arithmetic; enforce bitwise symmetry of the product
    scaled = np.triu(scaled) + np.triu(scaled, 1).T
    w, u = eigh(scaled)
    return EigenDecomposition(w, s[:, None] * u)


def hyperplane_basis(normal) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of ``normal``."""
    c = np.asarray(normal, dtype=float)
    nrm = np.linalg.norm(c)
    if nrm == 0 or not np.isfinite(nrm):
        raise InputError("constraint vector must be nonzero and finite")
    q, _ = np.linalg.qr((c / nrm)[:, None], mode="complete")
    return q[:, 1:]


def restricted_eigh(m, normal, weight=None) -> EigenDecomposition:
    """Eigen-pairs of the form ``m`` restricted to ``{x : <normal, x> = 0}``.

    With ``weight`` given, solves the restricted generalized problem
    ``Q^T M Q y = lambda Q^T W Q y`` instead. Eigenvectors are returned in
    the ambient coordinates.
    """
    a = check_symmetric(m)
    q = hyperplane_basis(normal)
    if q.shape[1] == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((a.shape[0], 0)))
    r = q.T @ a @ q
    r = 0.5 * (r + r.T)
    if weight is None:
        w, y = np.linalg.eigh(r)
    else:
        b = np.asarray(weight, dtype=float)
        if b.ndim == 1:
            b = np.diag(b)
        rb = q.T @ b @ q
        w, y = scipy.linalg.eigh(r, 0.5 * (rb + rb.T))
    return EigenDecomposition(w, _fix_signs(q @ y))
