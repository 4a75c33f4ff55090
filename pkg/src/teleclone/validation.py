"""
Acceptance and oracle checks, shared by ``teleclone validate`` and the test suite.

Each check returns a :class:`Check` carrying the measured quantities, so a
failing run explains itself.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .experiments import EXEMPLARY_TAUS, SQUEEZED_SCAN_R, optimize
from .measures import classical_threshold, eln_closed_form, ggm_closed_form, prop1_bound
from .oracle import RNG_ALGORITHM, fock_ladder, fock_moment, fock_tmsv, mc_integral
from .phase_space import log_negativity
from .protocols import (
    output_matrix,
    ProtocolSpec,
    asymmetric_clone_moments_closed,
    asymmetric_clone_moments_literal,
    asymmetric_clone_moments_sim,
    asymmetric_fidelity,
    fidelity_gaussian,
    network_modes,
    reduced_sender_clone_state,
    run_protocol,
    teleclone_wigner,
)
from .search import maximize
from .states import InputSpec, ResourceSpec, coherent, degaussify, squeezed_input, tmsv
from .wigner_engine import (
    OVERLAP_PREFACTOR,
    evaluate,
    lift_gaussian,
    linear_pushforward,
    overlap,
    raw_moment,
    tensor,
    trace,
)

R_GRID = np.round(np.linspace(0.0, 1.0, 101), 12)
R_GRID_POSITIVE = R_GRID[1:]
SIGN_TOL = 1e-12

# epsilon optima for squeezed input s = 0.5 at the SQUEEZED_SCAN_R resource settings
TABLE_EPS = {
    "irreversible": {"tmsv": 0.38, "ps:1,1": 0.33, "pa:1,1": 0.22, "ps:1,0": 0.02, "pa:1,0": 0.42},
    "reversible": {"tmsv": 0.45, "ps:1,1": 0.46, "pa:1,1": 0.46, "ps:1,0": 0.25, "pa:1,0": 0.23},
}


@dataclass(frozen=True)
class Check:
    id: str
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.id} {self.name}: {self.detail}"


COH = InputSpec()
IRR = ProtocolSpec("irreversible")
REV = ProtocolSpec("reversible")


def _fid(resource: str, r: float, p: ProtocolSpec = IRR, inp: InputSpec = COH) -> float:
    return run_protocol(ResourceSpec.parse(resource, r), inp, p).fidelities[0]


def _sign(x: float, ref: float) -> int:
    return 0 if abs(x - ref) < SIGN_TOL else (1 if x > ref else -1)


def check_tmsv_irreversible() -> Check:
    closed = lambda r: 4 / (5 + 3 * np.cosh(2 * r) - 2 * np.sqrt(2) * np.sinh(2 * r))  # noqa: E731
    err = max(abs(_fid("tmsv", r) - closed(r)) for r in R_GRID)
    opt = optimize(IRR, ResourceSpec("tmsv"), COH, "r", 0.0, 1.0)
    ok = err < 1e-9 and abs(opt.location - 0.8814) < 1e-3 and abs(opt.value - 2 / 3) < 1e-6
    return Check("C1", "irreversible TMSV fidelity and optimum", ok,
                 f"max |F - closed| = {err:.2e}; r_opt = {opt.location:.6f}; F_max = {opt.value:.9f}")


def check_tmsv_reversible() -> Check:
    err = max(abs(_fid("tmsv", r, REV) - 2 / (3 + np.exp(-2 * r))) for r in R_GRID)
    f0 = _fid("tmsv", 0.0, REV)
    ok = err < 1e-9 and abs(f0 - 0.5) < 1e-15
    return Check("C2", "reversible TMSV fidelity", ok, f"max |F - closed| = {err:.2e}; F(0) = {f0!r}")


def check_path_equivalence() -> Check:
    worst = 0.0
    for variant, eps, r in itertools.product(("irreversible", "reversible"), (0.0, 0.3, 0.7), R_GRID[::10]):
        p = ProtocolSpec(variant, epsilon=eps)
        g = fidelity_gaussian(tmsv(r), COH, p).fidelities[0]
        w = teleclone_wigner(lift_gaussian(tmsv(r)), COH, p).fidelities[0]
        worst = max(worst, abs(g - w))
    return Check("C3", "Wigner path equals covariance path for TMSV", worst < 1e-9, f"max |dF| = {worst:.2e}")


def check_ps11_irreversible() -> Check:
    opt = optimize(IRR, ResourceSpec.parse("ps:1,1"), COH, "r", 0.05, 1.0)
    grid = np.round(np.arange(0.05, 0.4501, 0.01), 12)
    margin = min(_fid("ps:1,1", r) - _fid("tmsv", r) for r in grid)
    ok_val = abs(opt.value - 0.656) <= 0.005
    ok_loc = abs(opt.location - 0.414) <= 0.010
    ok = ok_val and ok_loc and margin > 0
    return Check("C4", "PS-1,1 irreversible optimum and low-r advantage", ok,
                 f"F_max = {opt.value:.5f} (target 0.656 +/- 0.005: {ok_val}); "
                 f"r_opt = {opt.location:.4f} (target 0.414 +/- 0.010: {ok_loc}); "
                 f"min F(PS-1,1) - F(TMSV) on [0.05, 0.45] = {margin:.4f}")


def check_single_photon_irreversible() -> Check:
    maxes = {res: max(_fid(res, r) for r in R_GRID_POSITIVE) for res in ("pa:1,0", "ps:1,0")}
    above = [r for r in R_GRID_POSITIVE if _fid("pa:1,1", r) > 0.5]
    inside = bool(above) and min(above) > 0.4 and max(above) < 1.0
    ok = all(v <= 0.5 + 1e-6 for v in maxes.values()) and inside
    interval = f"[{min(above):.2f}, {max(above):.2f}]" if above else "empty"
    return Check("C5", "single-photon resources and PA-1,1 window (irreversible)", ok,
                 f"max F: PA-1,0 = {maxes['pa:1,0']:.5f}, PS-1,0 = {maxes['ps:1,0']:.5f} (bound 0.5); "
                 f"PA-1,1 above 1/2 on {interval} (must lie in (0.4, 1.0))")


def check_reversible_ordering() -> Check:
    tm = {r: _fid("tmsv", r, REV) for r in R_GRID_POSITIVE}
    ps_margin = min(_fid("ps:1,1", r, REV) - tm[r] for r in R_GRID_POSITIVE)
    parts, ok = [], ps_margin > 0
    for res in ("pa:1,1", "pa:1,0", "ps:1,0"):
        f = {r: _fid(res, r, REV) for r in R_GRID_POSITIVE}
        low = min(f[r] for r in R_GRID_POSITIVE if r >= 0.4)
        gap = max(f[r] - tm[r] for r in R_GRID_POSITIVE)
        ok = ok and low > 0.5 and gap <= 1e-12
        parts.append(f"{res}: min F(r>=0.4) = {low:.4f}, max F - F_TMSV = {gap:.2e}")
    return Check("C6", "reversible resource ordering", ok,
                 f"min F(PS-1,1) - F(TMSV) = {ps_margin:.4f}; " + "; ".join(parts))


def check_anticlone() -> Check:
    worst = 0.0
    for res in ("tmsv", "ps:1,1", "pa:1,1"):
        for r in (0.1, 0.5, 0.9):
            rep = run_protocol(ResourceSpec.parse(res, r), COH, REV)
            worst = max(worst, abs(rep.anticlone_fidelity - 0.5))
    return Check("C7", "anticlone fidelity is 1/2 for every resource", worst < 1e-9, f"max |F_aC - 1/2| = {worst:.2e}")


def check_q_calibration() -> Check:
    q_opt = run_protocol(ResourceSpec("tmsv", 0.8814), COH, IRR).q[0]
    ident, mismatches = 0.0, 0
    for variant in ("irreversible", "reversible"):
        for r in R_GRID:
            rep = run_protocol(ResourceSpec("tmsv", r), COH, ProtocolSpec(variant))
            f, q = rep.fidelities[0], rep.q[0]
            ident = max(ident, abs(f - prop1_bound(q)))
            mismatches += _sign(q, 0.0) != _sign(f, 0.5)
    ok = abs(q_opt - 0.5) <= 1e-3 and ident < 1e-9 and mismatches == 0
    return Check("C8", "Q calibration and F = 1/(2 - q)", ok,
                 f"q(r=0.8814) = {q_opt:.6f}; max |F - 1/(2-q)| = {ident:.2e}; sign mismatches = {mismatches}")


def check_entanglement_closed_forms() -> Check:
    diffs, ratios = [], []
    for r in R_GRID:
        ln = log_negativity(reduced_sender_clone_state(r))
        closed = eln_closed_form(r)
        diffs.append(abs(ln - closed))
        if ln > 1e-9:
            ratios.append(closed / ln)
    ggm = [ggm_closed_form(r) for r in R_GRID]
    ggm_ok = ggm[0] == 0.0 and all(b > a for a, b in zip(ggm, ggm[1:]))
    err = max(diffs)
    ok = err < 1e-6 and ggm_ok
    return Check("C9", "closed-form log-negativity on (S, C1) and GGM", ok,
                 f"max |E_LN(S,C1) - closed form| = {err:.4f}; closed/measured ratio in "
                 f"[{min(ratios):.6f}, {max(ratios):.6f}]; GGM(0) = 0 and increasing: {ggm_ok}")


def table_eps_optima() -> dict:
    """Epsilon optimum for every (protocol, resource) pair of the squeezed-input table."""
    inp = InputSpec("squeezed", 0j, 0.5)
    out = {}
    for variant, table in SQUEEZED_SCAN_R.items():
        for res, r in table.items():
            opt = optimize(ProtocolSpec(variant), ResourceSpec.parse(res), inp, "epsilon", 0.0, 1.2, r=r, grid=61)
            out[(variant, res)] = opt.location
    return out


def check_squeezed_table() -> Check:
    thr = classical_threshold(InputSpec("squeezed", 0j, 0.5))
    optima = table_eps_optima()
    parts, misses = [], 0
    for (variant, res), eps in optima.items():
        ref = TABLE_EPS[variant][res]
        hit = abs(eps - ref) <= 0.03
        misses += not hit
        parts.append(f"{variant[:3]} {res} {eps:.3f}/{ref:.2f}{'' if hit else ' X'}")
    ok = abs(thr - 0.4434) <= 1e-4 and misses == 0
    return Check("C10", "squeezed-input threshold and epsilon optima", ok,
                 f"F_cl(s=0.5) = {thr:.5f}; {10 - misses}/10 optima within 0.03 "
                 f"(found/reference): " + ", ".join(parts))


def check_asymmetric(seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    worst, literal = 0.0, 0.0
    for n in (2, 3, 4):
        for _ in range(20):
            taus, r = rng.uniform(0.0, 1.0, n), rng.uniform(0.0, 1.0)
            for m in range(1, n + 1):
                a = asymmetric_clone_moments_sim(r, taus, m)
                b = asymmetric_clone_moments_closed(r, taus, m)
                worst = max(worst, max(abs(a[k] - b[k]) for k in a))
                lit = asymmetric_clone_moments_literal(r, taus, m)
                literal = max(literal, max(abs(lit[k] - a[k]) for k in lit))
    p_irr = ProtocolSpec("asymmetric")
    f1 = maximize(lambda r: asymmetric_fidelity(r, EXEMPLARY_TAUS, p_irr, 1)[0], 0.0, 2.0).value
    grid = np.round(np.linspace(0.0, 2.0, 201), 12)
    f34, mismatches, quantum = 0.0, 0, set()
    for sender in ("irreversible", "reversible"):
        p = ProtocolSpec("asymmetric", sender=sender)
        for r in grid:
            for m in range(1, len(EXEMPLARY_TAUS) + 1):
                f, _, rep = asymmetric_fidelity(r, EXEMPLARY_TAUS, p, m)
                if m >= 3:
                    f34 = max(f34, f)
                if f > 0.5 + 1e-9:
                    quantum.add(m)
                mismatches += _sign(rep.q, 0.0) != _sign(f, 0.5)
    ok = worst < 1e-9 and abs(f1 - 2 / 3) <= 1e-3 and f34 <= 0.5 + 1e-9 and mismatches == 0
    return Check("C11", "asymmetric network", ok,
                 f"closed vs simulated max diff = {worst:.2e} "
                 f"(term-by-term reference transcription: {literal:.2e}); max F_C1 = {f1:.5f}; "
                 f"max F_C3,C4 = {f34:.5f} (bound 0.5); q/F sign mismatches = {mismatches}; "
                 f"clones above 1/2: {sorted(quantum)}")


def check_higher_order() -> Check:
    opts = []
    for n in range(1, 5):
        res = ResourceSpec.parse(f"ps:{n},{n}")
        opts.append(optimize(IRR, res, COH, "r", 0.05, 1.0))
    locs = [o.location for o in opts]
    vals = [o.value for o in opts]
    ok = all(b < a for a, b in zip(locs, locs[1:])) and all(b < a for a, b in zip(vals, vals[1:]))
    return Check("C12", "PS-n,n optima decrease with n", ok,
                 "r_opt = " + ", ".join(f"{x:.4f}" for x in locs) + "; F_max = " + ", ".join(f"{x:.5f}" for x in vals))


def _pure_states():
    states = {"vacuum": lift_gaussian(coherent(0)), "coherent": lift_gaussian(coherent(0.7 - 0.2j)),
              "squeezed": lift_gaussian(squeezed_input(0.5, 0.3j)), "tmsv": lift_gaussian(tmsv(0.6))}
    for text in ("ps:1,1", "pa:1,1", "ps:1,0", "pa:1,0", "ps:2,2", "pa:2,1"):
        states[text] = degaussify(ResourceSpec.parse(text, 0.5))[0]
    return states


def check_purity(prefactor: float = OVERLAP_PREFACTOR) -> Check:
    worst, name = 0.0, ""
    for label, w in _pure_states().items():
        dev = abs(overlap(w, w, prefactor=prefactor) - 1.0)
        if dev >= worst:
            worst, name = dev, label
    return Check("C13a", "purity of pure constructions", worst < 1e-9, f"max |Tr rho^2 - 1| = {worst:.2e} ({name})")


def _mc_cases(seed: int):
    """Ten randomized integrals with their analytic values."""
    rng = np.random.default_rng([seed, 13])
    cases = []
    families = ["ps:1,1", "pa:1,1", "ps:1,0", "pa:1,0", "ps:2,2", "pa:2,1"]
    for k in range(4):
        res = ResourceSpec.parse(families[rng.integers(len(families))], rng.uniform(0.2, 0.8))
        w = degaussify(res)[0]
        cases.append((f"trace {res.label()} r={res.r:.3f}", w, None, None, trace(w)))
    for k in range(3):
        a = ResourceSpec.parse(families[rng.integers(len(families))], rng.uniform(0.2, 0.8))
        b = ResourceSpec.parse(families[rng.integers(len(families))], rng.uniform(0.2, 0.8))
        wa, wb = degaussify(a)[0], degaussify(b)[0]
        cases.append((f"overlap {a.label()}@{a.r:.3f} vs {b.label()}@{b.r:.3f}", wa, wb, None, overlap(wa, wb)))
    for variant, res, r in (("irreversible", "ps:1,1", 0.4137), ("reversible", "pa:1,1", rng.uniform(0.3, 0.9)),
                            ("irreversible", "pa:1,0", rng.uniform(0.3, 0.9))):
        p = ProtocolSpec(variant)
        w_res = degaussify(ResourceSpec.parse(res, r))[0]
        w_in = lift_gaussian(coherent(complex(*rng.normal(0, 0.5, 2))))
        net = tensor(w_in, w_res)
        for _ in range(p.num_clones - 1 + (1 if p.reversible else 0)):
            net = tensor(net, lift_gaussian(coherent(0)))
        modes = network_modes(p)
        x, pp = modes.clone_outputs[0]
        a = output_matrix(x, pp)
        exact = overlap(w_in, linear_pushforward(net, a))
        cases.append((f"clone fidelity {variant} {res} r={r:.4f}", net, w_in, a, exact))
    return cases


def check_monte_carlo(seed: int = 0, samples: int = 1_000_000) -> Check:
    worst, parts = 0.0, []
    for name, w, other, a, exact in _mc_cases(seed):
        res = mc_integral(w, other, a, samples=samples, seed=seed)
        z = abs(res.estimate - exact) / res.std_error
        worst = max(worst, z)
        parts.append(f"{name}: {z:.2f} sigma")
    return Check("C13b", "Monte-Carlo agreement of analytic integrals", worst < 3.0,
                 f"{len(parts)} integrals, {samples} samples each, {RNG_ALGORITHM}; worst {worst:.2f} sigma; " + "; ".join(parts))


def check_fock_moments(cutoff: int = 40) -> Check:
    worst = 0.0
    exps = [e for e in itertools.product(range(5), repeat=4) if 0 < sum(e) <= 4]
    for text, r in itertools.product(("ps:1,1", "pa:1,1", "ps:1,0", "pa:1,0", "ps:0,1", "pa:0,1"), (0.4, 0.8)):
        res = ResourceSpec.parse(text, r)
        w = degaussify(res)[0]
        state = fock_tmsv(r, cutoff)
        kind = "subtract" if res.family == "ps" else "add"
        for mode, count in enumerate(res.photons):
            for _ in range(count):
                state, _ = fock_ladder(state, mode, kind)
        for e in exps:
            worst = max(worst, abs(raw_moment(w, e) - fock_moment(state, e)))
    return Check("C13c", "Fock-oracle moment agreement", worst < 1e-6,
                 f"max moment difference (degree <= 4, r in {{0.4, 0.8}}, cutoff {cutoff}) = {worst:.2e}")


def check_completion_independence(seed: int = 0) -> Check:
    rng = np.random.default_rng([seed, 17])
    w = tensor(degaussify(ResourceSpec.parse("ps:1,1", 0.5))[0], lift_gaussian(squeezed_input(0.3, 0.2)))
    a = rng.normal(size=(2, 6))
    pts = rng.normal(size=(10, 2))
    base = linear_pushforward(w, a)
    ref = evaluate(base, pts)
    worst = 0.0
    for _ in range(2):
        comp = rng.normal(size=(4, 6))
        worst = max(worst, np.max(np.abs(evaluate(linear_pushforward(w, a, completion=comp), pts) - ref)))
    return Check("C13d", "pushforward independent of completion", worst < 1e-9, f"max pointwise difference = {worst:.2e}")


ACCEPTANCE = (
    check_tmsv_irreversible,
    check_tmsv_reversible,
    check_path_equivalence,
    check_ps11_irreversible,
    check_single_photon_irreversible,
    check_reversible_ordering,
    check_anticlone,
    check_q_calibration,
    check_entanglement_closed_forms,
    check_squeezed_table,
    check_asymmetric,
    check_higher_order,
)


def run_validation(seed: int = 0, *, samples: int = 1_000_000, overlap_prefactor: float = OVERLAP_PREFACTOR) -> list:
    """Run every check. ``overlap_prefactor`` exists to inject faults (negative control)."""
    checks = [fn(seed) if fn is check_asymmetric else fn() for fn in ACCEPTANCE]
    checks.append(check_purity(overlap_prefactor))
    checks.append(check_monte_carlo(seed, samples))
    checks.append(check_fock_moments())
    checks.append(check_completion_independence(seed))
    return checks


def summary(checks, seed: int) -> dict:
    return {
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }


