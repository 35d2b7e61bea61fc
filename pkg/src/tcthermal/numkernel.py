"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects (complex128, C order). The
eigensolver is LAPACK's Hermitian driver via :func:`numpy.linalg.eigh`;
everything else is reshapes and einsums.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when matrix shapes and subsystem dimensions disagree."""


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def hermiticity_defect(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - A.conj().T))


def hermitian_eig(A) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(A + A^dagger)/2`` before solving. Inputs whose
    anti-Hermitian part exceeds ``1e-10 * max(1, ||A||_F)`` are rejected.

    Returns
    -------
    HermitianSpectrum
        Ascending real eigenvalues and unitary eigenvector matrix (columns).
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionError(f"matrix is not square: {A.shape}")
    scale = max(1.0, float(np.linalg.norm(A)))
    if hermiticity_defect(A) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    return HermitianSpectrum(w, V)


def expm_from_spectrum(spectrum: HermitianSpectrum, t: float) -> np.ndarray:
    V = spectrum.eigenvectors
    return (V * np.exp(-1j * spectrum.eigenvalues * t)) @ V.conj().T


def expm_skew(H, t: float) -> np.ndarray:
    """Return ``exp(-i H t)`` for Hermitian ``H`` by spectral calculus."""
    return expm_from_spectrum(hermitian_eig(H), t)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def _check_dims(rho: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive: {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"dims {dims} inconsistent with matrix shape {rho.shape}")
    return dims


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int] | int) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` lists subsystem dimensions in tensor-product order (first factor
    is the slowest-varying index). Kept subsystems retain their order.
    """
    rho = as_matrix(rho)
    dims = _check_dims(rho, dims)
    keep = sorted({keep} if isinstance(keep, int) else set(keep))
    k = len(dims)
    if any(i < 0 or i >= k for i in keep):
        raise DimensionError(f"keep indices {keep} out of range for {k} subsystems")
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * k > len(letters):
        raise DimensionError("too many subsystems")
    row = list(letters[:k])
    col = list(letters[k : 2 * k])
    for i in range(k):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    spec = "".join(row) + "".join(col) + "->" + out
    reduced = np.einsum(spec, rho.reshape(dims + dims))
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(d, d)


def partial_transpose(rho, dims: Sequence[int], which: Sequence[int] | int) -> np.ndarray:
    """Transpose the row and column indices of the subsystems in ``which``."""
    rho = as_matrix(rho)
    dims = _check_dims(rho, dims)
    which = {which} if isinstance(which, int) else set(which)
    k = len(dims)
    if any(i < 0 or i >= k for i in which):
        raise DimensionError(f"subsystem indices {which} out of range for {k} subsystems")
    axes = list(range(2 * k))
    for i in which:
        axes[i], axes[k + i] = axes[k + i], axes[i]
    n = rho.shape[0]
    return rho.reshape(dims + dims).transpose(axes).reshape(n, n)
