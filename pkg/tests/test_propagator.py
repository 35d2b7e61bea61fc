import numpy as np
import pytest
from hypothesis import given, strategies as st

from tcthermal.propagator import (ELEMENT_INDEX, analytic_elements, build_hamiltonian,
                                  excitation_operator, joint_unitary_oracle, rabi)

D = 16
SQ2 = np.sqrt(2.0)


def test_rabi_values():
    assert rabi(0, 1.0).omega == pytest.approx(np.sqrt(2), abs=1e-15)
    assert rabi(1, 1.0).omega == pytest.approx(np.sqrt(6), abs=1e-15)
    r = rabi(4, 0.3)
    assert r.omega**2 == pytest.approx(2 * 0.3**2 * 9, rel=1e-14)
    assert r.theta == pytest.approx(1 / r.omega**2)


@given(st.integers(0, 100), st.floats(0.01, 10))
def test_rabi_linear_in_gamma(n, g):
    assert rabi(n, 2 * g).omega == pytest.approx(2 * rabi(n, g).omega, rel=1e-14)


def test_rabi_rejects_negative_index():
    with pytest.raises(ValueError):
        rabi(-1, 1.0)


def test_hamiltonian_matrix_element():
    H = build_hamiltonian(D, 1.7)
    for n in range(D - 1):
        # <eg; n| H |gg; n+1> = gamma sqrt(n+1)
        assert H[4 * n + 1, 4 * (n + 1) + 3] == pytest.approx(1.7 * np.sqrt(n + 1))


def test_hamiltonian_hermitian_and_conserving():
    H = build_hamiltonian(D, 1.0)
    assert np.linalg.norm(H - H.conj().T) == 0.0
    N = excitation_operator(D)
    assert np.linalg.norm(H @ N - N @ H) <= 1e-12


def test_hamiltonian_needs_two_levels():
    with pytest.raises(ValueError):
        build_hamiltonian(1, 1.0)


def test_oracle_identity_and_group_property():
    np.testing.assert_allclose(joint_unitary_oracle(D, 1.0, 0.0).matrix, np.eye(4 * D), atol=1e-13)
    U1 = joint_unitary_oracle(D, 1.0, 0.8).matrix
    U2 = joint_unitary_oracle(D, 1.0, 1.9).matrix
    U12 = joint_unitary_oracle(D, 1.0, 2.7).matrix
    assert np.linalg.norm(U1 @ U2 - U12) <= 1e-9
    assert np.linalg.norm(U12.conj().T @ U12 - np.eye(4 * D)) <= 1e-10


def test_elements_at_time_zero():
    for n in range(6):
        el = analytic_elements(n, 1.0, 0.0)
        for name, value in el.as_dict().items():
            i, j, shift = ELEMENT_INDEX[name]
            assert value == (1.0 if shift == 0 and i == j else 0.0)


def test_two_photon_element_closed_form():
    for t in np.linspace(0, 5, 11):
        expected = SQ2 / 3 * (np.cos(np.sqrt(6) * t) - 1)
        assert analytic_elements(0, 1.0, t).U41 == pytest.approx(expected, abs=1e-14)
        assert joint_unitary_oracle(D, 1.0, t).element("U41", 0) == pytest.approx(expected, abs=1e-12)


def test_one_photon_element_closed_form():
    for t in np.linspace(0, 5, 11):
        expected = -1j * np.sin(np.sqrt(6) * t) / np.sqrt(6)
        assert analytic_elements(0, 1.0, t).U21 == pytest.approx(expected, abs=1e-14)
        U = joint_unitary_oracle(D, 1.0, t)
        assert U.element("U21", 0) == pytest.approx(expected, abs=1e-12)
        # <s,1|U|ee,0> carries the sqrt(2) of the Kraus operators
        s1 = (U.matrix[4 + 1, 0] + U.matrix[4 + 2, 0]) / SQ2
        assert s1 == pytest.approx(SQ2 * expected, abs=1e-12)


def test_negative_photon_elements_vanish():
    for t in (0.3, 2.0):
        e0, e1 = analytic_elements(0, 1.0, t), analytic_elements(1, 1.0, t)
        assert e0.U12 == 0 and e0.U24 == 0 and e0.U14 == 0 and e1.U14 == 0
        assert e0.U44 == 1


def test_off_diagonal_structure():
    el = analytic_elements(np.arange(10), 1.0, 1.3)
    assert np.all(el.U22 == el.U33)
    for name in ("U12", "U24", "U21", "U42"):
        assert np.all(getattr(el, name).real == 0.0)
    for name in ("U11", "U22", "U23", "U44", "U14", "U41"):
        assert np.all(getattr(el, name).imag == 0.0)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.3])
def test_elements_match_oracle(gamma):
    worst = 0.0
    for gt in np.linspace(0, 20, 41):
        U = joint_unitary_oracle(D, gamma, gt / gamma)
        for n in range(13):
            for name, v in analytic_elements(n, gamma, gt / gamma).as_dict().items():
                worst = max(worst, abs(v - U.element(name, n)))
    assert worst <= 1e-9


def test_vectorized_elements_agree_with_scalar():
    ts = np.linspace(0, 7, 9)
    vec = analytic_elements(3, 1.0, ts)
    for k, t in enumerate(ts):
        sc = analytic_elements(3, 1.0, t)
        for name in ELEMENT_INDEX:
            assert getattr(vec, name)[k] == pytest.approx(getattr(sc, name), abs=1e-15)


def test_excitation_blocks():
    U = joint_unitary_oracle(D, 1.0, 4.4).matrix
    exc = np.diag(excitation_operator(D)).real
    mask = exc[:, None] != exc[None, :]
    assert np.max(np.abs(U[mask])) <= 1e-12
    # blocks fully inside the truncation are unitary
    for k in range(D - 1):
        idx = np.flatnonzero(exc == k)
        B = U[np.ix_(idx, idx)]
        assert np.linalg.norm(B.conj().T @ B - np.eye(len(idx))) <= 1e-10


def test_antisymmetric_state_decouples():
    U = joint_unitary_oracle(D, 1.0, 3.1).matrix.reshape(D, 4, D, 4)
    a = np.array([0, 1, -1, 0]) / SQ2
    s = np.array([0, 1, 1, 0]) / SQ2
    overlap = np.einsum("i,minj,j->mn", a.conj(), U, s)
    assert np.max(np.abs(overlap)) <= 1e-12
