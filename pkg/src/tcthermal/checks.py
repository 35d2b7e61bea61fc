"""Oracle-equivalence and invariant checks run by ``tcthermal verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numkernel
from .entanglement import (eof_two_qubit, fock_gg_criterion, fock_gg_maximum,
                           fock_gg_threshold, negativity)
from .field_thermal import FockTruncation, choose_truncation
from .kraus_channel import apply_channel, completeness_defect
from .propagator import analytic_elements, joint_unitary_oracle, rabi
from .scenarios import (JointEvolver, ScenarioConfig, apply_superoperator, default_grid,
                        initial_state, peak_negativity, sweep, traced_joint_map, witness_ee)

NBARS = (0.1, 1.0, 10.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: defect={self.defect:.3e} tol={self.tolerance:.1e}"


def _le(name, defect, tol):
    return CheckResult(name, float(defect), tol, bool(defect <= tol))


def hermitian_basis_states(weight: float = 0.25) -> list[np.ndarray]:
    """Sixteen valid states spanning all 4x4 Hermitian matrices (unit-mixed with I/4)."""
    states = []
    for i in range(4):
        for j in range(4):
            H = np.zeros((4, 4), dtype=complex)
            if i == j:
                H[i, i] = 1.0
            elif i < j:
                H[i, j] = H[j, i] = 0.5
            else:
                H[i, j], H[j, i] = 0.5j, -0.5j
            states.append((1.0 - weight * np.trace(H).real) * np.eye(4) / 4 + weight * H)
    return states


def check_propagator(n_max: int = 12, gamma_t_max: float = 20.0, points: int = 201):
    field_dim = n_max + 4
    worst = 0.0
    for t in np.linspace(0.0, gamma_t_max, points):
        U = joint_unitary_oracle(field_dim, 1.0, t)
        for n in range(n_max + 1):
            for name, value in analytic_elements(n, 1.0, t).as_dict().items():
                worst = max(worst, abs(value - U.element(name, n)))
    unit = 0.0
    for t in (0.7, 13.0):
        U = joint_unitary_oracle(field_dim, 1.0, t).matrix
        unit = max(unit, np.linalg.norm(U.conj().T @ U - np.eye(4 * field_dim)))
    return [_le("analytic elements vs dense unitary (n<=12, 201 times)", worst, 1e-9),
            _le("dense unitary ||U^dag U - I||_F", unit, 1e-10)]


def check_channel(times=None):
    times = np.arange(41) * 0.5 if times is None else times
    states = hermitian_basis_states()
    a = np.array([0, 1, -1, 0]) / np.sqrt(2)
    dark = np.outer(a, a).astype(complex)
    worst_eq = worst_ratio = worst_dark = 0.0
    for nbar in NBARS:
        trunc = choose_truncation(nbar)
        evolver = JointEvolver(trunc.field_dim, 1.0)
        for t in times:
            S = traced_joint_map(trunc, 1.0, t, evolver)
            for rho in states:
                d = np.linalg.norm(apply_channel(rho, trunc, 1.0, t) - apply_superoperator(S, rho))
                worst_eq = max(worst_eq, d)
            worst_ratio = max(worst_ratio, completeness_defect(trunc, 1.0, t) / trunc.tail_mass)
            worst_dark = max(worst_dark, np.linalg.norm(apply_channel(dark, trunc, 1.0, t) - dark))
    return [_le("Kraus channel vs traced joint evolution (16 states, 3 nbar, 41 times)", worst_eq, 1e-9),
            _le("completeness defect / tail_mass", worst_ratio, 10.0),
            _le("dark antisymmetric state invariance", worst_dark, 1e-10)]


def check_entanglement(samples: int = 2000, seed: int = 7):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = A @ A.conj().T
        rho /= np.trace(rho).real
        neg = negativity(rho).value
        eof = eof_two_qubit(rho)
        if (neg > 1e-8 and eof <= 0.0) or (neg <= 1e-11 and eof > 1e-6):
            bad += 1
    max_err = max(abs(fock_gg_maximum(ell)[1] - 1.0 / ell) for ell in range(1, 7))
    arg_err = max(abs(fock_gg_maximum(ell)[0] - (-1.0 + 1.0 / ell)) for ell in range(1, 7))
    sign_bad = 0
    for ell in range(1, 6):
        trunc = FockTruncation.fock(ell)
        w = rabi(ell - 1).omega
        gg = initial_state("gg")
        for t in np.linspace(0.05, 20.0, 400):
            c = np.cos(w * t)
            crit = fock_gg_criterion(ell, c)
            if abs(crit) < 1e-9:
                continue
            pt = numkernel.partial_transpose(apply_channel(gg, trunc, 1.0, t), (2, 2), 1)
            sign_bad += (crit > 0) != (np.linalg.eigvalsh(pt)[0] < 0)
    return [_le("PPT vs EoF disagreements on random states", bad, 0),
            _le("max_c E_g^l - 1/l (l=1..6)", max_err, 1e-9),
            _le("argmax_c E_g^l - (-1+1/l)", arg_err, 1e-9),
            _le("|c_s(1) + 1|", abs(fock_gg_threshold(1) + 1.0), 0.0),
            _le("|c_s(2) + 0.7574|", abs(fock_gg_threshold(2) + 0.7574), 5e-3),
            _le("E_g^l sign vs simulated Fock negativity (l=1..5)", sign_bad, 0)]


def check_scenarios(af_steps: int = 100):
    out = []
    worst_ee = 0.0
    for ell in range(6):
        trunc = FockTruncation.fock(ell)
        for t in default_grid():
            worst_ee = max(worst_ee, negativity(apply_channel(initial_state("ee"), trunc, 1.0, t)).value)
    for nbar in NBARS:
        worst_ee = max(worst_ee, sweep(ScenarioConfig("ee", nbar)).values.max())
    out.append(_le("|ee> no-go: max negativity", worst_ee, 1e-10))

    min_eg = min(sweep(ScenarioConfig("eg", nbar)).values[1:].min() for nbar in NBARS)
    out.append(CheckResult("|eg> always entangled: min negativity for t>0", min_eg, 0.0, min_eg > 0))

    peaks = [peak_negativity(1.0, lam) for lam in (0.0, 0.05, 0.065)]
    decreasing = peaks[0] > peaks[1] > peaks[2]
    ratio = peaks[2] / peaks[0]
    out.append(CheckResult("mixedness: peaks decreasing and lambda=0.065 peak / lambda=0 peak",
                           ratio, 0.25, bool(decreasing and ratio < 0.25)))

    grid = default_grid(20.0, af_steps)
    min_af, min_w, at_zero = np.inf, np.inf, 0.0
    for nbar in NBARS:
        s = sweep(ScenarioConfig("ee", nbar, t_grid=grid), "atom_field_lower_bound")
        min_af = min(min_af, s.values[1:].min())
        at_zero = max(at_zero, abs(s.values[0]))
        min_w = min(min_w, min(witness_ee(1.0, t, nbar) for t in grid[1:]))
    out.append(CheckResult("atom-field lower bound: min over t>0", min_af, 0.0, min_af > 0))
    out.append(_le("atom-field lower bound at t=0", at_zero, 0.0))
    out.append(CheckResult("witness P0^2|U21|^2 U11^2: min over t>0", min_w, 0.0, min_w > 0))
    return out


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "propagator": check_propagator,
    "channel": check_channel,
    "entanglement": check_entanglement,
    "scenarios": check_scenarios,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [r for key in SUITES for r in SUITES[key]()]
    return SUITES[name]()
