import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleclone.phase_space import (
    GaussianState,
    SymplecticMap,
    apply_symplectic,
    beam_splitter,
    displace,
    duan_zeta,
    gaussian_overlap,
    identity_map,
    linear_form_stats,
    log_negativity,
    partial_trace,
    squeezer,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    vacuum_state,
)
from teleclone.states import tmsv

squeeze = st.floats(-1.5, 1.5)
transmissivity = st.floats(0.0, 1.0)


def test_vacuum():
    vac = vacuum_state(2)
    assert np.array_equal(vac.cov, np.eye(4))
    assert vac.purity() == 1.0
    assert vac.is_physical()
    with pytest.raises(ValueError):
        vacuum_state(0)


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState(np.zeros(3), np.eye(3))
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), np.eye(4))
    with pytest.raises(ValueError):
        GaussianState(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
    assert not GaussianState(np.zeros(2), 0.5 * np.eye(2)).is_physical()


def test_squeezer_variances():
    out = apply_symplectic(vacuum_state(1), squeezer(0, 0.5))
    assert out.cov[0, 0] == pytest.approx(np.exp(-1.0))
    assert out.cov[1, 1] == pytest.approx(np.exp(1.0))


def test_beam_splitter_extremes():
    full = beam_splitter(0, 1, 1.0).matrix
    assert np.allclose(full, np.diag([1, 1, -1, -1]))
    swap = beam_splitter(0, 1, 0.0).matrix
    assert np.allclose(swap[0:2, 2:4], np.eye(2))
    with pytest.raises(ValueError):
        beam_splitter(0, 1, 1.5)
    with pytest.raises(ValueError):
        beam_splitter(1, 1, 0.5)
    with pytest.raises(IndexError):
        beam_splitter(0, 2, 0.5)


@given(squeeze, transmissivity)
def test_generators_are_symplectic(r, tau):
    assert squeezer(1, r, 3).is_symplectic()
    assert beam_splitter(2, 0, tau, 3).is_symplectic()
    assert squeezer(0, r, 3).then(beam_splitter(0, 1, tau, 3)).is_symplectic()


@given(st.floats(0.0, 1.5), transmissivity)
@settings(max_examples=50)
def test_physicality_preserved(r, tau):
    state = apply_symplectic(tensor(tmsv(r), vacuum_state(1)), beam_splitter(1, 2, tau, 3))
    assert state.is_physical()
    assert state.purity() == pytest.approx(1.0, rel=1e-9)


def test_composition_order():
    a, b = squeezer(0, 0.3), SymplecticMap(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    composed = a.then(b)
    assert np.allclose(composed.matrix, b.matrix @ a.matrix)
    assert not SymplecticMap(np.ones((2, 4))).is_symplectic()


def test_tmsv_entries():
    cov = tmsv(0.5).cov
    c, s = np.cosh(1.0), np.sinh(1.0)
    assert np.allclose(cov, [[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def test_partial_trace_and_displace():
    state = displace(tensor(tmsv(0.4), vacuum_state(1)), 2, 1.0, -2.0)
    red = partial_trace(state, [2, 0])
    assert np.allclose(red.mean, [1.0, -2.0, 0.0, 0.0])
    assert red.cov[2, 2] == pytest.approx(np.cosh(0.8))
    with pytest.raises(ValueError):
        partial_trace(state, [])


def test_linear_form_stats():
    mx, vx, mp, vp = linear_form_stats(tmsv(0.5), [1, -1], [1, 1])
    assert (mx, mp) == (0.0, 0.0)
    assert vx == pytest.approx(2 * np.exp(-1.0))
    assert vp == pytest.approx(2 * np.exp(-1.0))
    with pytest.raises(ValueError):
        linear_form_stats(tmsv(0.5), [1], [1])


def test_duan_zeta_tmsv():
    assert duan_zeta(tmsv(0.5), 0, 1) == pytest.approx(4 * np.exp(-1.0))
    assert duan_zeta(vacuum_state(2), 0, 1) == pytest.approx(4.0)


def test_symplectic_eigenvalues_and_negativity():
    assert np.allclose(symplectic_eigenvalues(np.eye(4)), [1.0, 1.0])
    assert log_negativity(tmsv(0.5)) == pytest.approx(2 * 0.5 / np.log(2))
    assert log_negativity(vacuum_state(2)) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        log_negativity(vacuum_state(3))


def test_overlap_coherent_states():
    a = displace(vacuum_state(1), 0, 2.0, 0.0)
    # |<0|alpha>|^2 = exp(-|alpha|^2) with mean (2 Re alpha, 2 Im alpha)
    assert gaussian_overlap(vacuum_state(1), a) == pytest.approx(np.exp(-1.0))
    assert gaussian_overlap(tmsv(0.7), tmsv(0.7)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gaussian_overlap(vacuum_state(1), vacuum_state(2))


def test_symplectic_form_shape():
    omega = symplectic_form(2)
    assert np.allclose(omega @ omega, -np.eye(4))
    assert identity_map(2).is_symplectic()
