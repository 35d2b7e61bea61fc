"""Thermal-field Kraus channel acting on the two-atom state.

For photon number ``n`` the five operators are the nonzero Fock blocks
``<m|U|n>`` with ``m = n, n-1, n+1, n-2, n+2``. The channel is
``rho -> sum_n P_n sum_mu K_mu^n rho K_mu^n^dagger``; no trace renormalization
is applied, so any truncation loss is visible in the output trace.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import numkernel
from .field_thermal import FockTruncation
from .propagator import EE, EG, GE, GG, analytic_elements

SQRT2 = np.sqrt(2.0)
KET_S = np.array([0, 1, 1, 0], dtype=complex) / SQRT2
KET_A = np.array([0, 1, -1, 0], dtype=complex) / SQRT2

PSD_TOL = 1e-10
TRACE_TOL = 1e-12


@dataclass(frozen=True)
class KrausSet:
    n: int
    operators: np.ndarray  # shape (5, 4, 4)

    def __iter__(self):
        return iter(self.operators)


def _kraus_stack(n_max: int, gamma: float, t: float) -> np.ndarray:
    ns = np.arange(n_max + 1)
    el = analytic_elements(ns, gamma, t)
    K = np.zeros((n_max + 1, 5, 4, 4), dtype=complex)
    K[:, 0, EE, EE] = el.U11
    K[:, 0, EG, EG] = el.U22
    K[:, 0, GE, GE] = el.U33
    K[:, 0, GG, GG] = el.U44
    K[:, 0, EG, GE] = el.U23
    K[:, 0, GE, EG] = el.U23
    # sqrt(2) U12 |ee><s| + sqrt(2) U24 |s><gg|
    K[:, 1, EE, EG] = K[:, 1, EE, GE] = el.U12
    K[:, 1, EG, GG] = K[:, 1, GE, GG] = el.U24
    # sqrt(2) U21 |s><ee| + sqrt(2) U42 |gg><s|
    K[:, 2, EG, EE] = K[:, 2, GE, EE] = el.U21
    K[:, 2, GG, EG] = K[:, 2, GG, GE] = el.U42
    K[:, 3, EE, GG] = el.U14
    K[:, 4, GG, EE] = el.U41
    return K


@functools.lru_cache(maxsize=64)
def _cached_stack(n_max: int, gamma: float, t: float) -> np.ndarray:
    K = _kraus_stack(n_max, gamma, t)
    K.setflags(write=False)
    return K


def kraus_stack(n_max: int, gamma: float, t: float) -> np.ndarray:
    """All Kraus operators for ``n = 0..n_max`` as an array of shape ``(n_max+1, 5, 4, 4)``."""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    return _cached_stack(int(n_max), float(gamma), float(t))


def build_kraus_set(n: int, gamma: float, t: float) -> KrausSet:
    if n < 0:
        raise ValueError(f"Fock index must be nonnegative, got {n}")
    return KrausSet(n, np.array(_kraus_stack(n, gamma, t)[n]))


def validate_density_matrix(rho, *, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """Return ``rho`` as a 4x4 complex array or raise ``ValueError``."""
    rho = numkernel.as_matrix(rho)
    if rho.shape != (4, 4):
        raise numkernel.DimensionError(f"two-atom state must be 4x4, got {rho.shape}")
    if numkernel.hermiticity_defect(rho) > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real!r} is not 1")
    if np.linalg.eigvalsh(rho)[0] < -PSD_TOL:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def apply_channel(rho0, trunc: FockTruncation, gamma: float, t: float) -> np.ndarray:
    """Atomic state after interacting with the Fock-diagonal field ``trunc`` for time ``t``."""
    rho0 = validate_density_matrix(rho0)
    K = kraus_stack(len(trunc.weights) - 1, gamma, t)
    out = np.einsum("n,nkij,jl,nkml->im", trunc.weights, K, rho0, K.conj())
    return out


def completeness_defect(trunc: FockTruncation, gamma: float, t: float) -> float:
    """Frobenius distance of ``sum_n P_n sum_mu K^dagger K`` from the identity."""
    K = kraus_stack(len(trunc.weights) - 1, gamma, t)
    S = np.einsum("n,nkji,nkjl->il", trunc.weights, K.conj(), K)
    return float(np.linalg.norm(S - np.eye(4)))
