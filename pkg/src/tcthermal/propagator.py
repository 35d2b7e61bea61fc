"""Resonant two-atom Tavis-Cummings propagator.

Two routes to the same evolution operator:

* :func:`analytic_elements` -- closed-form scalar matrix elements
  ``U_ij^{nm} = <i, m| U(t) |j, n>`` between atomic basis states
  ``{ee, eg, ge, gg}`` and Fock states.
* :func:`joint_unitary_oracle` -- the dense matrix ``exp(-i H t)`` on a
  truncated field, used as an independent check of the former.

Joint basis ordering is ``field (x) atom 1 (x) atom 2`` with single-atom order
``(e, g)``, so the joint index is ``4 * n + atomic_index``. ``hbar = 1`` and
every closed form depends on time only through ``gamma * t``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, fields

import numpy as np

from . import numkernel

EE, EG, GE, GG = 0, 1, 2, 3
ATOM_LABELS = ("ee", "eg", "ge", "gg")

# name -> (row atomic index, column atomic index, field shift m - n)
ELEMENT_INDEX = {
    "U11": (EE, EE, 0),
    "U22": (EG, EG, 0),
    "U23": (EG, GE, 0),
    "U33": (GE, GE, 0),
    "U44": (GG, GG, 0),
    "U12": (EE, EG, -1),
    "U24": (EG, GG, -1),
    "U21": (EG, EE, +1),
    "U42": (GG, EG, +1),
    "U14": (EE, GG, -2),
    "U41": (GG, EE, +2),
}


@dataclass(frozen=True)
class RabiFrequency:
    n: int
    gamma: float
    omega: float

    @property
    def theta(self) -> float:
        return 1.0 / self.omega**2


def rabi(n: int, gamma: float = 1.0) -> RabiFrequency:
    """Symmetric-manifold Rabi frequency ``sqrt(2 gamma^2 (2n + 1))`` at Fock level ``n``."""
    if n < 0:
        raise ValueError(f"Fock index must be nonnegative, got {n}")
    if gamma <= 0:
        raise ValueError(f"coupling must be positive, got {gamma}")
    return RabiFrequency(n, gamma, float(np.sqrt(2.0 * gamma**2 * (2 * n + 1))))


def ladder_operators(field_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation and creation operators on ``field_dim`` levels."""
    a = np.diag(np.sqrt(np.arange(1, field_dim, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def build_hamiltonian(field_dim: int, gamma: float = 1.0) -> np.ndarray:
    """Interaction-picture RWA Hamiltonian ``gamma * sum_i (a s_i^+ + a^dag s_i^-)``."""
    if field_dim < 2:
        raise ValueError(f"field_dim must be at least 2, got {field_dim}")
    a, ad = ladder_operators(field_dim)
    sp = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g| in (e, g) order
    sm = sp.T.copy()
    id2 = np.eye(2)
    H = np.zeros((4 * field_dim, 4 * field_dim), dtype=complex)
    for s_plus, s_minus in ((np.kron(sp, id2), np.kron(sm, id2)),
                            (np.kron(id2, sp), np.kron(id2, sm))):
        H += np.kron(a, s_plus) + np.kron(ad, s_minus)
    return gamma * H


def excitation_operator(field_dim: int) -> np.ndarray:
    """Diagonal of ``a^dag a + sum_i |e><e|_i`` in the joint basis."""
    n = np.repeat(np.arange(field_dim), 4)
    atoms = np.tile(np.array([2, 1, 1, 0]), field_dim)
    return np.diag((n + atoms).astype(complex))


@functools.lru_cache(maxsize=8)
def _joint_spectrum(field_dim: int, gamma: float) -> numkernel.HermitianSpectrum:
    return numkernel.hermitian_eig(build_hamiltonian(field_dim, gamma))


def joint_spectrum(field_dim: int, gamma: float = 1.0) -> numkernel.HermitianSpectrum:
    """Cached eigendecomposition of the truncated joint Hamiltonian."""
    if field_dim < 2:
        raise ValueError(f"field_dim must be at least 2, got {field_dim}")
    return _joint_spectrum(int(field_dim), float(gamma))


@dataclass(frozen=True)
class JointUnitary:
    field_dim: int
    matrix: np.ndarray

    def block(self, m: int, n: int) -> np.ndarray:
        """The 4x4 atomic operator ``<m| U |n>``."""
        return self.matrix[4 * m : 4 * m + 4, 4 * n : 4 * n + 4]

    def element(self, name: str, n: int) -> complex:
        """Oracle value of the named element at column Fock index ``n``; 0 off the lattice."""
        i, j, shift = ELEMENT_INDEX[name]
        m = n + shift
        if m < 0 or n < 0:
            return 0j
        if m >= self.field_dim or n >= self.field_dim:
            raise IndexError(f"element {name} at n={n} lies outside field_dim={self.field_dim}")
        return complex(self.matrix[4 * m + i, 4 * n + j])


def joint_unitary_oracle(field_dim: int, gamma: float, t: float) -> JointUnitary:
    """Dense ``exp(-i H t)`` on the truncated joint space."""
    U = numkernel.expm_from_spectrum(joint_spectrum(field_dim, gamma), t)
    return JointUnitary(field_dim, U)


@dataclass(frozen=True)
class PropagatorElements:
    """Closed-form matrix elements at column Fock index ``n``.

    Attribute names follow ``U<row><col>`` with atomic indices 1..4 for
    ``ee, eg, ge, gg``; the field shift of each element is listed in
    :data:`ELEMENT_INDEX`. Elements that would need a negative photon number
    are zero. Values broadcast over array-valued ``n`` and ``gamma_t``.
    """

    n: np.ndarray | int
    gamma_t: np.ndarray | float
    U11: np.ndarray | complex
    U22: np.ndarray | complex
    U23: np.ndarray | complex
    U33: np.ndarray | complex
    U44: np.ndarray | complex
    U12: np.ndarray | complex
    U24: np.ndarray | complex
    U21: np.ndarray | complex
    U42: np.ndarray | complex
    U14: np.ndarray | complex
    U41: np.ndarray | complex

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name in ELEMENT_INDEX}


def _unit_omega(k):
    # Omega_k / gamma
    return np.sqrt(2.0 * (2.0 * k + 1.0))


def analytic_elements(n, gamma: float, t) -> PropagatorElements:
    """Closed-form elements of ``U(t)`` for initial photon number ``n``.

    The excitation-number block containing ``|ee, k-1>, |s, k>, |gg, k+1>``
    rotates at ``Omega_k``; hence elements that start from ``ee`` at ``n``
    use ``Omega_{n+1}``, those starting from ``eg``/``ge`` use ``Omega_n`` and
    those starting from ``gg`` use ``Omega_{n-1}``.
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise ValueError("Fock index must be nonnegative")
    if gamma <= 0:
        raise ValueError(f"coupling must be positive, got {gamma}")
    n_arr, gt = np.broadcast_arrays(n_arr.astype(float), np.asarray(gamma * np.asarray(t), dtype=float))

    # ee-started block, frequency Omega_{n+1}
    wa = _unit_omega(n_arr + 1)
    ca, sa = np.cos(wa * gt), np.sin(wa * gt)
    U11 = 1.0 + (n_arr + 1) * (ca - 1.0) / (2 * n_arr + 3)
    U21 = -1j * np.sqrt(n_arr + 1) * sa / wa
    U41 = np.sqrt((n_arr + 1) * (n_arr + 2)) * (ca - 1.0) / (2 * n_arr + 3)

    # eg/ge-started block, frequency Omega_n
    wb = _unit_omega(n_arr)
    cb, sb = np.cos(wb * gt), np.sin(wb * gt)
    U22 = 0.5 * (cb + 1.0) + 0j
    U23 = 0.5 * (cb - 1.0) + 0j
    U12 = -1j * np.sqrt(n_arr) * sb / wb
    U42 = -1j * np.sqrt(n_arr + 1) * sb / wb

    # gg-started block, frequency Omega_{n-1}; empty below n = 1
    has_photon = n_arr >= 1
    nc = np.where(has_photon, n_arr, 1.0)
    wc = _unit_omega(nc - 1)
    cc, sc = np.cos(wc * gt), np.sin(wc * gt)
    U44 = np.where(has_photon, 1.0 + nc * (cc - 1.0) / (2 * nc - 1), 1.0) + 0j
    U24 = np.where(has_photon, -1j * np.sqrt(nc) * sc / wc, 0j)
    U14 = np.where(n_arr >= 2, np.sqrt(nc * (nc - 1)) * (cc - 1.0) / (2 * nc - 1), 0.0) + 0j

    def out(x):
        x = np.asarray(x, dtype=complex)
        return complex(x) if x.ndim == 0 else x

    n_out = int(n_arr) if n_arr.ndim == 0 else n_arr.astype(int)
    gt_out = float(gt) if gt.ndim == 0 else gt
    return PropagatorElements(
        n=n_out, gamma_t=gt_out,
        U11=out(U11), U22=out(U22), U23=out(U23), U33=out(U22), U44=out(U44),
        U12=out(U12), U24=out(U24), U21=out(U21), U42=out(U42),
        U14=out(U14), U41=out(U41),
    )
