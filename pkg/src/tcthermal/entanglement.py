"""Two-qubit entanglement: negativity, concurrence-based EoF and closed-form criteria."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numkernel
from .kraus_channel import KET_A, KET_S, validate_density_matrix
from .propagator import EE, GG

NEGATIVE_EIG_TOL = 1e-11
SEPARABLE_TOL = 1e-10

SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class NegativityResult:
    value: float
    negative_eigenvalues: np.ndarray

    @property
    def entangled(self) -> bool:
        return self.value > SEPARABLE_TOL


def negativity(rho, *, validate: bool = True, trace_tol: float = 1e-9) -> NegativityResult:
    """``-2 * (sum of negative eigenvalues)`` of the partial transpose over atom 2.

    Eigenvalues above ``-1e-11`` are treated as round-off and ignored.
    """
    rho = validate_density_matrix(rho, trace_tol=trace_tol) if validate else numkernel.as_matrix(rho)
    mu = numkernel.hermitian_eig(numkernel.partial_transpose(rho, (2, 2), 1)).eigenvalues
    neg = mu[mu < -NEGATIVE_EIG_TOL]
    return NegativityResult(float(-2.0 * neg.sum()) if neg.size else 0.0, neg)


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def concurrence(rho) -> float:
    """Wootters concurrence from the Hermitian form ``sqrt(rho) rho~ sqrt(rho)``."""
    rho = numkernel.as_matrix(rho)
    if rho.shape != (4, 4):
        raise numkernel.DimensionError(f"two-qubit state must be 4x4, got {rho.shape}")
    spec = numkernel.hermitian_eig(rho)
    if spec.eigenvalues[0] < -1e-10:
        raise ValueError("density matrix is not positive semidefinite")
    V = spec.eigenvectors
    sqrt_rho = (V * np.sqrt(np.clip(spec.eigenvalues, 0.0, None))) @ V.conj().T
    flipped = SIGMA_YY @ rho.conj() @ SIGMA_YY
    M = sqrt_rho @ flipped @ sqrt_rho
    lam = numkernel.hermitian_eig(0.5 * (M + M.conj().T)).eigenvalues
    r = np.sqrt(np.clip(lam, 0.0, None))[::-1]
    return float(max(0.0, r[0] - r[1] - r[2] - r[3]))


def concurrence_batch(rhos: np.ndarray) -> np.ndarray:
    """Concurrence of a stack of PSD 4x4 matrices, shape ``(k, 4, 4)``; no validation."""
    rhos = np.asarray(rhos, dtype=complex)
    w, V = np.linalg.eigh(0.5 * (rhos + np.conj(np.swapaxes(rhos, -1, -2))))
    sqrt_rho = (V * np.sqrt(np.clip(w, 0.0, None))[:, None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    M = sqrt_rho @ SIGMA_YY @ rhos.conj() @ SIGMA_YY @ sqrt_rho
    lam = np.linalg.eigvalsh(0.5 * (M + np.conj(np.swapaxes(M, -1, -2))))
    r = np.sqrt(np.clip(lam, 0.0, None))
    return np.clip(r[:, 3] - r[:, 2] - r[:, 1] - r[:, 0], 0.0, None)


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return _binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def eof_two_qubit(rho, *, trace_tol: float = 1e-9) -> float:
    """Entanglement of formation (in ebits) of a normalized two-qubit state."""
    rho = numkernel.as_matrix(rho)
    if rho.shape != (4, 4):
        raise numkernel.DimensionError(f"two-qubit state must be 4x4, got {rho.shape}")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise ValueError("density matrix must have unit trace")
    return eof_from_concurrence(concurrence(rho))


# --- populations in the {ee, s, a, gg} frame --------------------------------

@dataclass(frozen=True)
class DiagonalCoefficients:
    """Weights of ``|ee>, |s>, |a>, |gg>`` in a state diagonal in that frame.

    ``doubled=False``: ``rho = A_e|ee><ee| + A_s|s><s| + A_a|a><a| + A_g|gg><gg|``.
    ``doubled=True``: the symmetric and antisymmetric weights are ``2 A_s`` and
    ``2 A_a``, the normalization under which the excited-start closed forms
    (PT eigenvalues ``A_s`` and ``mu_+-``) are written.
    """

    A_e: float
    A_s: float
    A_a: float
    A_g: float
    doubled: bool = False

    def assemble(self) -> np.ndarray:
        f = 2.0 if self.doubled else 1.0
        rho = np.zeros((4, 4), dtype=complex)
        rho[EE, EE] = self.A_e
        rho[GG, GG] = self.A_g
        rho += f * self.A_s * np.outer(KET_S, KET_S.conj())
        rho += f * self.A_a * np.outer(KET_A, KET_A.conj())
        return rho

    @classmethod
    def from_state(cls, rho, doubled: bool = False) -> "DiagonalCoefficients":
        """Project ``rho`` onto the four frame states (off-frame coherences are dropped)."""
        rho = numkernel.as_matrix(rho)
        f = 0.5 if doubled else 1.0
        return cls(
            A_e=float(rho[EE, EE].real),
            A_s=f * float(np.real(KET_S.conj() @ rho @ KET_S)),
            A_a=f * float(np.real(KET_A.conj() @ rho @ KET_A)),
            A_g=float(rho[GG, GG].real),
            doubled=doubled,
        )


def analytic_pt_eigenvalues_ee(A: DiagonalCoefficients) -> np.ndarray:
    """Closed-form PT spectrum ``(mu_-, mu_o, mu_o, mu_+)`` of ``A_e|ee> + 2A_s|s> + A_g|gg>``.

    Coefficients must be in the doubled convention with ``A_a = 0``.
    """
    if not A.doubled:
        A = DiagonalCoefficients(A.A_e, 0.5 * A.A_s, 0.5 * A.A_a, A.A_g, doubled=True)
    if abs(A.A_a) > 1e-12:
        raise ValueError("closed form assumes no antisymmetric population")
    ae, s, ag = A.A_e, A.A_s, A.A_g
    disc = (ae + ag) ** 2 - 4 * ae * ag + 4 * s**2
    if disc < -1e-12:
        raise ValueError("negative discriminant: coefficients do not describe a state")
    root = math.sqrt(max(disc, 0.0))
    return np.array([0.5 * (ae + ag - root), s, s, 0.5 * (ae + ag + root)])


def ee_family_entangled(A: DiagonalCoefficients) -> bool:
    """Excited-start criterion ``A_s > sqrt(A_e A_g)`` (doubled convention)."""
    if not A.doubled:
        A = DiagonalCoefficients(A.A_e, 0.5 * A.A_s, 0.5 * A.A_a, A.A_g, doubled=True)
    return A.A_s > math.sqrt(max(A.A_e * A.A_g, 0.0))


def mixed_entanglement_condition(A: DiagonalCoefficients) -> float:
    """Margin ``|A_s - A_a| - 2 sqrt(A_e A_g)`` (plain convention); positive iff entangled.

    For the thermally mixed atoms ``A_s >= A_a`` and the absolute value is inert.
    """
    if A.doubled:
        A = DiagonalCoefficients(A.A_e, 2 * A.A_s, 2 * A.A_a, A.A_g)
    if A.A_e < -1e-12 or A.A_g < -1e-12:
        raise ValueError("populations of |ee> and |gg> must be nonnegative")
    return abs(A.A_s - A.A_a) - 2.0 * math.sqrt(max(A.A_e, 0.0) * max(A.A_g, 0.0))


# --- ground-state start with the field in a Fock state ----------------------

def _inv_d(ell: int) -> float:
    # 1/d with d = (2l-1)/sqrt(l(l-1)); d -> infinity at l = 1
    return math.sqrt(ell * (ell - 1)) / (2 * ell - 1)


def fock_gg_criterion(ell: int, c: float) -> float:
    """Entanglement indicator for ``|gg>`` after a Fock-``ell`` interaction.

    ``c = cos(Omega_{ell-1} t)``. Returns
    ``(1-c)/(2l-1) * [l(1+c) - (2/d)|l(1+c) - 1|]``, which equals
    ``2(|U24|^2 - |U44 U14|)``: positive exactly when the partial transpose has
    a negative eigenvalue.
    """
    if abs(c) > 1.0:
        raise ValueError(f"|c| must not exceed 1, got {c}")
    if ell < 0:
        raise ValueError(f"Fock index must be nonnegative, got {ell}")
    if ell == 0:
        return 0.0
    x = ell * (1.0 + c)
    return (1.0 - c) / (2 * ell - 1) * (x - 2.0 * _inv_d(ell) * abs(x - 1.0))


def fock_gg_threshold(ell: int) -> float:
    """Lower sign-change point ``c_s``: the criterion is positive for ``c_s < c < 1``."""
    if ell < 1:
        raise ValueError("threshold defined for ell >= 1")
    k = 2.0 * _inv_d(ell)
    return -1.0 + k / (ell * (1.0 + k))


def fock_gg_maximum(ell: int) -> tuple[float, float]:
    """``(argmax_c, max)`` of :func:`fock_gg_criterion` over ``c`` in ``[-1, 1]``.

    The criterion is quadratic in ``c`` on either side of the kink
    ``l(1+c) = 1``; each piece is fitted exactly and the maximum taken over
    its vertex, the kink and the interval ends.
    """
    if ell < 1:
        raise ValueError("maximum defined for ell >= 1")
    kink = -1.0 + 1.0 / ell
    candidates = [-1.0, 1.0, kink]
    for lo, hi in ((-1.0, kink), (kink, 1.0)):
        if hi - lo <= 0.0:
            continue
        xs = np.linspace(lo, hi, 5)[1:4]
        a, b, _ = np.polyfit(xs, [fock_gg_criterion(ell, x) for x in xs], 2)
        if a < 0:
            v = -b / (2 * a)
            if lo <= v <= hi:
                candidates.append(float(v))
    values = [fock_gg_criterion(ell, c) for c in candidates]
    k = int(np.argmax(values))
    return candidates[k], values[k]
