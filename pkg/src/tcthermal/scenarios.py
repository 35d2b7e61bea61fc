"""End-to-end experiments: initial states, joint evolution and time sweeps.

Atom-atom measures go through the Kraus channel; anything that needs the
field (atom-field bounds, oracle checks) goes through the dense joint unitary.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import numkernel
from .entanglement import concurrence_batch, eof_from_concurrence, negativity
from .field_thermal import DEFAULT_EPSILON, FockTruncation, choose_truncation, thermal_weight
from .kraus_channel import apply_channel, validate_density_matrix
from .propagator import analytic_elements, joint_spectrum

MAX_JOINT_DIM = 4096
INITIAL_KINDS = ("ee", "eg", "gg", "mixed")
MEASURES = ("atom_atom_negativity", "atom_field_lower_bound")


class ResourceGuardError(RuntimeError):
    """The requested joint Hilbert space exceeds :data:`MAX_JOINT_DIM`."""


def initial_state(kind: str, lam: float | None = None) -> np.ndarray:
    """Two-atom initial density matrix in the ``{ee, eg, ge, gg}`` basis.

    ``mixed`` is the product of single-atom mixtures ``lam|e><e| + (1-lam)|g><g|``.
    """
    if kind == "mixed":
        if lam is None or not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {lam}")
        one = np.array([lam, 1.0 - lam])
        return np.diag(np.kron(one, one)).astype(complex)
    try:
        idx = ("ee", "eg", "ge", "gg").index(kind)
    except ValueError:
        raise ValueError(f"unknown initial state {kind!r}") from None
    rho = np.zeros((4, 4), dtype=complex)
    rho[idx, idx] = 1.0
    return rho


def check_joint_dim(field_dim: int) -> None:
    if 4 * field_dim > MAX_JOINT_DIM:
        raise ResourceGuardError(
            f"joint dimension {4 * field_dim} exceeds the limit of {MAX_JOINT_DIM}; "
            "lower nbar or raise epsilon")


def field_density(trunc: FockTruncation) -> np.ndarray:
    """Fock-diagonal field state padded with empty guard levels."""
    w = np.zeros(trunc.field_dim)
    w[: len(trunc.weights)] = trunc.weights
    return np.diag(w).astype(complex)


class JointEvolver:
    """Dense evolution on ``field (x) atoms`` with the Hamiltonian spectrum reused across times."""

    def __init__(self, field_dim: int, gamma: float = 1.0):
        check_joint_dim(field_dim)
        self.field_dim = field_dim
        self.gamma = gamma
        self.spectrum = joint_spectrum(field_dim, gamma)

    def unitary(self, t: float) -> np.ndarray:
        return numkernel.expm_from_spectrum(self.spectrum, t)

    def evolve(self, rho_joint: np.ndarray, t: float) -> np.ndarray:
        U = self.unitary(t)
        return U @ rho_joint @ U.conj().T

    def factor_propagator(self, Y0: np.ndarray):
        """Return ``t -> U(t) @ Y0`` with ``V^dagger Y0`` computed once."""
        V = self.spectrum.eigenvectors
        B = V.conj().T @ Y0
        w = self.spectrum.eigenvalues

        def at(t: float) -> np.ndarray:
            return V @ (np.exp(-1j * w * t)[:, None] * B)

        return at


def initial_factor(rho0: np.ndarray, trunc: FockTruncation) -> np.ndarray:
    """Columns ``Y0`` with ``Y0 Y0^dagger = rho_E (x) rho0`` on the padded joint space."""
    w, V = np.linalg.eigh(0.5 * (rho0 + rho0.conj().T))
    keep = w > 1e-15
    L = V[:, keep] * np.sqrt(w[keep])
    cols = []
    D = trunc.field_dim
    for n, p in enumerate(trunc.weights):
        if p <= 0.0:
            continue
        block = np.zeros((4 * D, L.shape[1]), dtype=complex)
        block[4 * n : 4 * n + 4] = np.sqrt(p) * L
        cols.append(block)
    if not cols:
        return np.zeros((4 * D, 0), dtype=complex)
    return np.hstack(cols)


def joint_evolve(rho0, trunc: FockTruncation, gamma: float, t: float) -> np.ndarray:
    """Full joint state ``U (rho_E (x) rho0) U^dagger``; index ``4 n + atomic index``."""
    rho0 = validate_density_matrix(rho0)
    evolver = JointEvolver(trunc.field_dim, gamma)
    Y = evolver.factor_propagator(initial_factor(rho0, trunc))(t)
    return Y @ Y.conj().T


def reduced_atoms(joint: np.ndarray) -> np.ndarray:
    D = joint.shape[0] // 4
    return numkernel.partial_trace(joint, (D, 2, 2), keep=(1, 2))


def traced_joint_map(trunc: FockTruncation, gamma: float, t: float,
                     evolver: JointEvolver | None = None) -> np.ndarray:
    """Superoperator (16x16, row-major vec) of ``rho -> Tr_field U(rho_E (x) rho)U^dagger``.

    Built from the dense unitary's Fock blocks ``<m|U|n>`` over every ``m`` in
    the truncated space; it shares no formulas with the Kraus construction.
    """
    evolver = evolver or JointEvolver(trunc.field_dim, gamma)
    D = trunc.field_dim
    n_src = len(trunc.weights)
    V, w = evolver.spectrum.eigenvectors, evolver.spectrum.eigenvalues
    # columns of U(t) for the populated Fock levels only
    X = (V * np.exp(-1j * w * t)) @ V[: 4 * n_src].conj().T
    X = X.reshape(D, 4, n_src, 4) * np.sqrt(trunc.weights)[None, None, :, None]
    # vec(B rho B^dagger) = (B (x) conj(B)) vec(rho), summed over both Fock labels
    A = X.transpose(1, 3, 0, 2).reshape(16, -1)
    G = A @ A.conj().T
    return G.reshape(4, 4, 4, 4).transpose(0, 2, 1, 3).reshape(16, 16)


def apply_superoperator(S: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return (S @ np.asarray(rho, dtype=complex).reshape(16)).reshape(4, 4)


# --- atom-field ---------------------------------------------------------------

@dataclass(frozen=True)
class AtomFieldState:
    """One atom together with the field; index ``2 n + atom`` with atom order ``(e, g)``."""

    field_dim: int
    matrix: np.ndarray


def atom_field_state(joint: np.ndarray, keep_atom: int = 1) -> AtomFieldState:
    if keep_atom not in (1, 2):
        raise ValueError(f"keep_atom must be 1 or 2, got {keep_atom}")
    if joint.shape[0] % 4 or joint.shape[0] != joint.shape[1]:
        raise numkernel.DimensionError(f"not a joint field-atom-atom matrix: {joint.shape}")
    D = joint.shape[0] // 4
    return AtomFieldState(D, numkernel.partial_trace(joint, (D, 2, 2), keep=(0, keep_atom)))


def atom_field_from_factor(Y: np.ndarray, keep_atom: int = 1) -> AtomFieldState:
    """Same as ``atom_field_state(Y Y^dagger)`` without forming the joint matrix."""
    D = Y.shape[0] // 4
    T = Y.reshape(D, 2, 2, -1)
    out = np.zeros((2 * D, 2 * D), dtype=complex)
    for other in range(2):
        M = (T[:, :, other, :] if keep_atom == 1 else T[:, other, :, :]).reshape(2 * D, -1)
        out += M @ M.conj().T
    return AtomFieldState(D, out)


def partition_bounds(af: AtomFieldState, min_prob: float = 1e-14) -> tuple[float, float]:
    """Probability-weighted EoF averages for field pairs starting at levels 0 and 1.

    Each pair ``{|k>, |k+1>}`` is a local two-outcome field measurement; the
    surviving block is a two-qubit state (field qubit (x) atom).
    """
    rho = af.matrix
    ks = np.arange(af.field_dim - 1)
    idx = 2 * ks[:, None] + np.arange(4)[None, :]
    blocks = rho[idx[:, :, None], idx[:, None, :]]
    probs = np.trace(blocks, axis1=1, axis2=2).real
    ok = probs > min_prob
    eof = np.zeros(len(ks))
    if np.any(ok):
        conc = concurrence_batch(blocks[ok] / probs[ok, None, None])
        eof[ok] = [eof_from_concurrence(c) for c in conc]
    weighted = np.where(ok, probs * eof, 0.0)
    return float(weighted[0::2].sum()), float(weighted[1::2].sum())


def projected_lower_bound(af: AtomFieldState) -> float:
    """Lower bound on atom-field entanglement from local two-level field projections."""
    return max(partition_bounds(af))


def witness_ee(gamma: float, t: float, nbar: float) -> float:
    """``P_0^2 |U21(0,1)|^2 U11(0,0)^2`` for atoms starting in ``|ee>``."""
    el = analytic_elements(0, gamma, t)
    p0 = thermal_weight(0, nbar)
    return float(p0**2 * abs(el.U21) ** 2 * abs(el.U11) ** 2)


# --- sweeps -------------------------------------------------------------------

def default_grid(tmax: float = 20.0, steps: int = 400) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be positive")
    return np.linspace(0.0, tmax, steps)


@dataclass(frozen=True)
class ScenarioConfig:
    initial: str
    nbar: float
    lam: float | None = None
    gamma: float = 1.0
    t_grid: np.ndarray = field(default_factory=default_grid, repr=False)
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.initial not in INITIAL_KINDS:
            raise ValueError(f"initial must be one of {INITIAL_KINDS}, got {self.initial!r}")
        if self.initial == "mixed" and (self.lam is None or not 0.0 <= self.lam <= 1.0):
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.nbar < 0:
            raise ValueError("nbar must be nonnegative")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        grid = np.asarray(self.t_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0):
            raise ValueError("t_grid must be ascending and start at 0")
        object.__setattr__(self, "t_grid", grid)

    def rho0(self) -> np.ndarray:
        return initial_state(self.initial, self.lam)

    def truncation(self) -> FockTruncation:
        return choose_truncation(self.nbar, self.epsilon)


@dataclass(frozen=True)
class SweepSeries:
    config: ScenarioConfig
    measure_kind: str
    gamma_t: np.ndarray
    values: np.ndarray
    trace_deficit: np.ndarray
    truncation: FockTruncation

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.gamma_t.tolist(), self.values.tolist()))


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep(config: ScenarioConfig, measure_kind: str = "atom_atom_negativity",
          workers: int = 1) -> SweepSeries:
    """Evaluate one entanglement measure at every point of ``config.t_grid``."""
    if measure_kind not in MEASURES:
        raise ValueError(f"measure_kind must be one of {MEASURES}, got {measure_kind!r}")
    trunc = config.truncation()
    rho0 = config.rho0()
    # the untruncated tail is lost from the trace, never renormalized away
    trace_tol = max(1e-9, 2.0 * trunc.tail_mass)

    if measure_kind == "atom_atom_negativity":
        def point(t):
            rho = apply_channel(rho0, trunc, config.gamma, t)
            return (negativity(rho, trace_tol=trace_tol).value,
                    1.0 - float(np.trace(rho).real))
    else:
        evolver = JointEvolver(trunc.field_dim, config.gamma)
        at = evolver.factor_propagator(initial_factor(rho0, trunc))

        def point(t):
            af = atom_field_from_factor(at(t))
            return projected_lower_bound(af), 1.0 - float(np.trace(af.matrix).real)

    results = _map(point, config.t_grid.tolist(), workers)
    values = np.array([r[0] for r in results])
    deficit = np.array([r[1] for r in results])
    return SweepSeries(config, measure_kind, config.gamma * config.t_grid, values, deficit, trunc)


@functools.lru_cache(maxsize=None)
def _peak(nbar: float, lam: float, tmax: float, steps: int) -> float:
    cfg = ScenarioConfig("mixed", nbar, lam=lam, t_grid=default_grid(tmax, steps))
    return float(sweep(cfg).values.max())


def peak_negativity(nbar: float, lam: float, tmax: float = 20.0, steps: int = 400) -> float:
    """Largest atom-atom negativity over a time grid for thermally mixed atoms."""
    return _peak(float(nbar), float(lam), float(tmax), int(steps))
