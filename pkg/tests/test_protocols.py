import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleclone.measures import prop1_bound
from teleclone.oracle import mc_integral
from teleclone.protocols import (
    ProtocolSpec,
    anticlone_fidelity,
    asymmetric_clone_moments_closed,
    asymmetric_clone_moments_literal,
    asymmetric_clone_moments_sim,
    asymmetric_fidelity,
    asymmetric_fidelity_closed,
    clone_moments_gaussian,
    fidelity_gaussian,
    network_modes,
    output_matrix,
    run_protocol,
    teleclone_wigner,
)
from teleclone.states import InputSpec, ResourceSpec, coherent, degaussify, tmsv
from teleclone.wigner_engine import lift_gaussian, linear_pushforward, overlap, tensor

COH = InputSpec()
IRR = ProtocolSpec("irreversible")
REV = ProtocolSpec("reversible")
TAUS = (0.5, 0.05, 0.125, 0.1)


def _f(text, r, p, inp=COH):
    return run_protocol(ResourceSpec.parse(text, r), inp, p).fidelities[0]


def test_protocol_spec_validation():
    with pytest.raises(ValueError):
        ProtocolSpec("teleport")
    with pytest.raises(ValueError):
        ProtocolSpec("irreversible", num_clones=1)
    with pytest.raises(ValueError):
        ProtocolSpec("reversible", epsilon=-0.1)
    with pytest.raises(ValueError):
        ProtocolSpec("reversible", ancilla="sender")
    assert ProtocolSpec("asymmetric", sender="reversible").reversible
    assert IRR.gain == 1.0


def test_network_modes_layout():
    modes = network_modes(REV)
    assert modes.labels == ("in", "S", "R", "v1", "vS")
    assert np.allclose(modes.h, [0, 1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])
    # the two clones share the receiver mode equally
    assert np.allclose(np.abs(modes.clones[0][2:4]), [np.sqrt(0.5)] * 2)
    assert network_modes(ProtocolSpec("irreversible", 3)).labels == ("in", "S", "R", "v1", "v2")
    with pytest.raises(ValueError):
        network_modes(ProtocolSpec("asymmetric"))


@given(st.floats(0.0, 1.2))
@settings(max_examples=30, deadline=None)
def test_tmsv_closed_forms(r):
    irr = 4 / (5 + 3 * np.cosh(2 * r) - 2 * np.sqrt(2) * np.sinh(2 * r))
    assert _f("tmsv", r, IRR) == pytest.approx(irr, abs=1e-12)
    assert _f("tmsv", r, REV) == pytest.approx(2 / (3 + np.exp(-2 * r)), abs=1e-12)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_symmetric_clones_are_equal(m):
    rep = fidelity_gaussian(tmsv(0.6), COH, ProtocolSpec("irreversible", m))
    assert len(rep.fidelities) == m
    assert np.allclose(rep.fidelities, rep.fidelities[0])
    assert fidelity_gaussian(tmsv(0.0), COH, ProtocolSpec("irreversible", m)).fidelities[0] == pytest.approx(0.5)


def test_clone_moments_of_tmsv():
    vx, vp = clone_moments_gaussian(tmsv(0.0), COH, IRR)
    assert (vx, vp) == pytest.approx((3.0, 3.0))


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.sampled_from(["irreversible", "reversible"]))
@settings(max_examples=20, deadline=None)
def test_wigner_path_equals_covariance_path(r, eps, variant):
    p = ProtocolSpec(variant, epsilon=eps)
    inp = InputSpec("squeezed", 0.3 + 0.1j, 0.4)
    g = fidelity_gaussian(tmsv(r), inp, p)
    w = teleclone_wigner(lift_gaussian(tmsv(r)), inp, p)
    assert w.fidelities[0] == pytest.approx(g.fidelities[0], abs=1e-10)
    assert w.q[0] == pytest.approx(g.q[0], abs=1e-10)


@pytest.mark.parametrize(
    "text, r, p, expected",
    [
        ("ps:1,1", 0.3, IRR, 0.6401714634983345),
        ("ps:1,1", 0.6, REV, 0.6294324494419903),
        ("pa:1,1", 0.6, IRR, 0.5203940186204234),
        ("pa:1,1", 0.6, REV, 0.5739470395725372),
        ("ps:1,0", 0.6, IRR, 0.6319579460064485),
        ("pa:1,0", 0.6, IRR, 0.4213052973376329),
        ("ps:2,2", 0.3, IRR, 0.6491939930134734),
    ],
)
def test_non_gaussian_fidelities_frozen(text, r, p, expected):
    assert _f(text, r, p) == pytest.approx(expected, rel=1e-10)


def test_ps11_fidelity_against_monte_carlo():
    # sampling the network and evaluating the input at the clone point avoids the pushforward
    w_res, _ = degaussify(ResourceSpec.parse("ps:1,1", 0.4137))
    w_in = lift_gaussian(coherent(0.4 - 0.3j))
    net = tensor(tensor(w_in, w_res), lift_gaussian(coherent(0)))
    a = output_matrix(*network_modes(IRR).clone_outputs[0])
    res = mc_integral(net, w_in, a, samples=200_000, seed=2)
    exact = overlap(w_in, linear_pushforward(net, a))
    assert exact == pytest.approx(0.6549, abs=1e-3)
    assert abs(res.estimate - exact) < 3 * res.std_error


def test_unit_gain_makes_fidelity_amplitude_independent():
    a = _f("pa:1,1", 0.5, REV, InputSpec("coherent", 0j))
    b = _f("pa:1,1", 0.5, REV, InputSpec("coherent", 1.5 - 2j))
    assert a == pytest.approx(b, abs=1e-12)


def test_subtraction_on_sender_equals_addition_on_receiver():
    for p in (IRR, REV):
        assert _f("ps:1,0", 0.5, p) == pytest.approx(_f("pa:0,1", 0.5, p), abs=1e-10)


@pytest.mark.parametrize("text", ["tmsv", "ps:1,1", "pa:1,1"])
def test_anticlone_is_half(text):
    rep = run_protocol(ResourceSpec.parse(text, 0.5), COH, REV)
    assert rep.anticlone_fidelity == pytest.approx(0.5, abs=1e-12)
    assert run_protocol(ResourceSpec.parse(text, 0.5), COH, IRR).anticlone_fidelity is None
    with pytest.raises(ValueError):
        anticlone_fidelity(COH, IRR)


@given(st.floats(0.0, 1.0), st.sampled_from(["irreversible", "reversible"]))
@settings(max_examples=25, deadline=None)
def test_fidelity_equals_q_bound_for_tmsv(r, variant):
    rep = run_protocol(ResourceSpec("tmsv", r), COH, ProtocolSpec(variant))
    assert rep.fidelities[0] == pytest.approx(prop1_bound(rep.q[0]), abs=1e-12)


def test_herald_weight_reported():
    rep = run_protocol(ResourceSpec.parse("ps:1,0", 0.3), COH, IRR)
    assert rep.herald_weight == pytest.approx(np.sinh(0.3) ** 2)
    assert run_protocol(ResourceSpec("tmsv", 0.3), COH, IRR).herald_weight is None


def test_run_protocol_rejects_mismatched_asymmetric():
    with pytest.raises(ValueError):
        run_protocol(ResourceSpec("asym", 0.3, taus=TAUS), COH, IRR)
    with pytest.raises(ValueError):
        run_protocol(ResourceSpec("tmsv", 0.3), COH, ProtocolSpec("asymmetric"))


@given(
    st.floats(0.0, 1.0),
    st.lists(st.floats(0.0, 1.0), min_size=2, max_size=4),
    st.integers(1, 4),
)
@settings(max_examples=60, deadline=None)
def test_asymmetric_closed_forms_match_simulation(r, taus, m):
    m = min(m, len(taus))
    sim = asymmetric_clone_moments_sim(r, taus, m)
    closed = asymmetric_clone_moments_closed(r, taus, m)
    for key in sim:
        assert closed[key] == pytest.approx(sim[key], abs=1e-10)


def test_literal_forms_agree_for_even_clones_only():
    for m in (2, 4):
        lit = asymmetric_clone_moments_literal(0.7, TAUS, m)
        closed = asymmetric_clone_moments_closed(0.7, TAUS, m)
        assert all(lit[k] == pytest.approx(closed[k]) for k in lit)
    lit = asymmetric_clone_moments_literal(0.7, TAUS, 1)
    assert lit["p_m2"] != pytest.approx(asymmetric_clone_moments_closed(0.7, TAUS, 1)["p_m2"])


def test_asymmetric_index_and_tau_validation():
    with pytest.raises(ValueError):
        asymmetric_clone_moments_sim(0.3, TAUS, 5)
    with pytest.raises(ValueError):
        asymmetric_clone_moments_closed(0.3, (0.5, 1.5), 1)
    with pytest.raises(ValueError):
        asymmetric_fidelity(0.3, TAUS, IRR, 1)


@pytest.mark.parametrize("sender", ["irreversible", "reversible"])
def test_asymmetric_fidelity_closed_matches_sim(sender):
    p = ProtocolSpec("asymmetric", sender=sender)
    inp = InputSpec("squeezed", 0j, 0.3)
    for r in (0.0, 0.4, 1.3):
        for m in range(1, 5):
            f, v, rep = asymmetric_fidelity(r, TAUS, p, m, inp)
            fc, vc, repc = asymmetric_fidelity_closed(r, TAUS, p, m, inp)
            assert fc == pytest.approx(f, abs=1e-12)
            assert vc == pytest.approx(v, abs=1e-12)
            assert repc.q == pytest.approx(rep.q, abs=1e-12)


def test_asymmetric_exemplary_first_clone():
    p = ProtocolSpec("asymmetric")
    f, (vx, vp), rep = asymmetric_fidelity(0.66, TAUS, p, 1)
    assert f == pytest.approx(0.6659, abs=5e-4)
    report = run_protocol(ResourceSpec("asym", 0.66, taus=TAUS), COH, p)
    assert report.num_clones == 4
    assert report.fidelities[0] == pytest.approx(f)
