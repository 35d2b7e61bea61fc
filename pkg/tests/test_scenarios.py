import numpy as np
import pytest

from helpers import random_density
from tcthermal.field_thermal import FockTruncation, choose_truncation, thermal_weight
from tcthermal.kraus_channel import apply_channel
from tcthermal.numkernel import partial_trace
from tcthermal.propagator import excitation_operator, joint_unitary_oracle
from tcthermal.scenarios import (AtomFieldState, JointEvolver, ResourceGuardError, ScenarioConfig,
                                 apply_superoperator, atom_field_from_factor, atom_field_state,
                                 default_grid, field_density, initial_factor, initial_state,
                                 joint_evolve, partition_bounds, projected_lower_bound,
                                 reduced_atoms, sweep, traced_joint_map, witness_ee)

EE = initial_state("ee")


def test_initial_states():
    np.testing.assert_array_equal(initial_state("mixed", 0.0), initial_state("gg"))
    np.testing.assert_array_equal(initial_state("mixed", 1.0), EE)
    np.testing.assert_allclose(np.diag(initial_state("mixed", 0.05)).real,
                               [0.0025, 0.0475, 0.0475, 0.9025], atol=1e-15)
    assert initial_state("eg")[1, 1] == 1
    with pytest.raises(ValueError):
        initial_state("mixed", 1.2)
    with pytest.raises(ValueError):
        initial_state("xx")


def test_joint_at_time_zero_is_product():
    tr = choose_truncation(1.0)
    rho = random_density(np.random.default_rng(3))
    joint = joint_evolve(rho, tr, 1.0, 0.0)
    np.testing.assert_allclose(joint, np.kron(field_density(tr), rho), atol=1e-14)


def test_initial_factor_reconstructs():
    tr = choose_truncation(0.7)
    rho = random_density(np.random.default_rng(4), rank=2)
    Y = initial_factor(rho, tr)
    np.testing.assert_allclose(Y @ Y.conj().T, np.kron(field_density(tr), rho), atol=1e-15)


def test_joint_conserves_excitation():
    tr = choose_truncation(1.0)
    rho = initial_state("mixed", 0.3)
    N = excitation_operator(tr.field_dim)
    n0 = np.trace(N @ joint_evolve(rho, tr, 1.0, 0.0)).real
    for t in (1.0, 5.0, 12.0):
        assert np.trace(N @ joint_evolve(rho, tr, 1.0, t)).real == pytest.approx(n0, abs=1e-9)


@pytest.mark.parametrize("kind", ["ee", "eg", "gg"])
def test_joint_trace_matches_channel(kind):
    tr = choose_truncation(1.0)
    for t in (0.9, 7.0):
        traced = reduced_atoms(joint_evolve(initial_state(kind), tr, 1.0, t))
        assert np.linalg.norm(traced - apply_channel(initial_state(kind), tr, 1.0, t)) <= 1e-10


def test_traced_map_matches_partial_trace():
    tr = choose_truncation(0.4)
    S = traced_joint_map(tr, 1.0, 3.3)
    rho = random_density(np.random.default_rng(5))
    np.testing.assert_allclose(apply_superoperator(S, rho),
                               reduced_atoms(joint_evolve(rho, tr, 1.0, 3.3)), atol=1e-12)


def test_dimension_guard():
    with pytest.raises(ResourceGuardError):
        JointEvolver(1025)
    with pytest.raises(ResourceGuardError):
        joint_evolve(EE, choose_truncation(1000.0, 1e-3), 1.0, 1.0)


def test_atom_field_state_at_zero():
    tr = choose_truncation(1.0)
    af = atom_field_state(joint_evolve(EE, tr, 1.0, 0.0), keep_atom=1)
    np.testing.assert_allclose(af.matrix, np.kron(field_density(tr), np.diag([1.0, 0])), atol=1e-15)
    assert projected_lower_bound(af) == 0.0


def test_atom_field_swap_symmetry_and_trace():
    tr = choose_truncation(1.0)
    joint = joint_evolve(EE, tr, 1.0, 1.0)
    a1, a2 = atom_field_state(joint, 1), atom_field_state(joint, 2)
    assert np.max(np.abs(a1.matrix - a2.matrix)) <= 1e-12
    assert 1 - 2 * tr.tail_mass <= np.trace(a1.matrix).real <= 1 + 1e-10
    with pytest.raises(ValueError):
        atom_field_state(joint, 3)


@pytest.mark.parametrize("keep", [1, 2])
def test_atom_field_from_factor(keep):
    tr = choose_truncation(0.5)
    rho = initial_state("mixed", 0.2)
    ev = JointEvolver(tr.field_dim, 1.0)
    Y = ev.factor_propagator(initial_factor(rho, tr))(2.4)
    expected = atom_field_state(joint_evolve(rho, tr, 1.0, 2.4), keep)
    np.testing.assert_allclose(atom_field_from_factor(Y, keep).matrix, expected.matrix, atol=1e-13)


def test_projected_bound_product_state_is_zero():
    rng = np.random.default_rng(8)
    field = random_density(rng, 6)
    atom = random_density(rng, 2)
    assert projected_lower_bound(AtomFieldState(6, np.kron(field, atom))) <= 1e-12


def test_projected_bound_maximally_entangled_pair():
    psi = np.zeros(8)
    psi[0] = psi[3] = 1 / np.sqrt(2)  # (|0,e> + |1,g>)/sqrt2
    af = AtomFieldState(4, np.outer(psi, psi).astype(complex))
    first, shifted = partition_bounds(af)
    assert first == pytest.approx(1.0, abs=1e-10)
    assert shifted == pytest.approx(0.0, abs=1e-12)
    assert projected_lower_bound(af) == pytest.approx(1.0, abs=1e-10)


def test_witness_values():
    assert witness_ee(1.0, 0.0, 1.0) == 0.0
    assert witness_ee(1.0, 0.5, 1e12) < 1e-20
    U = joint_unitary_oracle(8, 1.0, 0.5)
    p0 = thermal_weight(0, 1.0)
    expected = p0**2 * abs(U.element("U21", 0)) ** 2 * abs(U.element("U11", 0)) ** 2
    assert witness_ee(1.0, 0.5, 1.0) == pytest.approx(expected, rel=1e-10)
    assert expected > 0


def test_witness_implies_projected_bound():
    tr = choose_truncation(1.0)
    ev = JointEvolver(tr.field_dim, 1.0)
    at = ev.factor_propagator(initial_factor(EE, tr))
    for t in np.linspace(0.1, 20, 25):
        af = atom_field_from_factor(at(t))
        b0, b1 = partition_bounds(af)
        bound = projected_lower_bound(af)
        assert bound == max(b0, b1) and bound <= 1.0
        if witness_ee(1.0, t, 1.0) > 0:
            assert bound > 0


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig("mixed", 1.0)
    with pytest.raises(ValueError):
        ScenarioConfig("ee", 1.0, t_grid=np.array([0.5, 1.0]))
    with pytest.raises(ValueError):
        ScenarioConfig("ee", 1.0, epsilon=1.0)
    with pytest.raises(ValueError):
        ScenarioConfig("ee", -1.0)


def test_sweep_shapes_and_workers():
    cfg = ScenarioConfig("eg", 1.0, t_grid=default_grid(20, 41))
    s1, s2 = sweep(cfg), sweep(cfg, workers=3)
    assert len(s1.points) == 41 and s1.gamma_t[-1] == 20
    np.testing.assert_array_equal(s1.values, s2.values)
    assert np.all(s1.values >= 0) and np.all(s1.values[1:] > 0)
    assert np.all(np.abs(s1.trace_deficit) <= 2 * s1.truncation.tail_mass)


def test_sweep_gamma_scaling():
    # everything depends on gamma * t only
    a = sweep(ScenarioConfig("eg", 1.0, gamma=1.0, t_grid=default_grid(10, 21)))
    b = sweep(ScenarioConfig("eg", 1.0, gamma=2.0, t_grid=default_grid(10, 21) / 2))
    np.testing.assert_allclose(a.gamma_t, b.gamma_t, atol=1e-15)
    np.testing.assert_allclose(a.values, b.values, atol=1e-13)


def test_sweep_points_agree_with_joint_path():
    from tcthermal.entanglement import negativity
    cfg = ScenarioConfig("mixed", 1.0, lam=0.05, t_grid=default_grid(20, 21))
    series = sweep(cfg)
    tr = cfg.truncation()
    ev = JointEvolver(tr.field_dim, 1.0)
    for t, v in zip(cfg.t_grid, series.values):
        joint_rho = apply_superoperator(traced_joint_map(tr, 1.0, t, ev), cfg.rho0())
        assert abs(negativity(joint_rho).value - v) <= 1e-9


def test_unknown_measure():
    with pytest.raises(ValueError):
        sweep(ScenarioConfig("eg", 1.0, t_grid=default_grid(1, 2)), "bogus")


def test_fock_field_joint_path():
    tr = FockTruncation.fock(2)
    traced = partial_trace(joint_evolve(initial_state("gg"), tr, 1.0, 1.1), (tr.field_dim, 2, 2), (1, 2))
    np.testing.assert_allclose(traced, apply_channel(initial_state("gg"), tr, 1.0, 1.1), atol=1e-12)


def test_sweep_accepts_coarse_truncation():
    cfg = ScenarioConfig("eg", 10.0, t_grid=default_grid(5.0, 6), epsilon=1e-4)
    s = sweep(cfg)
    assert np.all(s.trace_deficit <= 2 * s.truncation.tail_mass)
    assert np.all(s.values[1:] > 0)
