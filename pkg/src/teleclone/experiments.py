"""Parameter sweeps, optimum searches and figure data bundles."""
from __future__ import annotations

from dataclasses import replace

import numpy as np
from joblib import Parallel, delayed

from .measures import eln_closed_form, ggm_closed_form
from .phase_space import log_negativity
from .protocols import (
    ProtocolSpec,
    asymmetric_fidelity,
    asymmetric_fidelity_closed,
    reduced_sender_clone_state,
    run_protocol,
)
from .search import OptimumResult, maximize
from .states import InputSpec, ResourceSpec

COLUMNS = (
    "protocol",
    "resource",
    "input",
    "r",
    "epsilon",
    "clone_index",
    "fidelity",
    "var_x",
    "var_p",
    "q",
    "zeta",
)
EXTRA_COLUMNS = ("eln", "ggm", "herald_weight")

# resource squeezing used for the squeezed-input epsilon scans: the r that
# maximizes Q for coherent inputs (irreversible); reversible uses r = 1
SQUEEZED_SCAN_R = {
    "irreversible": {"tmsv": 0.89, "ps:1,1": 0.47, "pa:1,1": 0.73, "ps:1,0": 0.88, "pa:1,0": 0.02},
    "reversible": {"tmsv": 1.0, "ps:1,1": 1.0, "pa:1,1": 1.0, "ps:1,0": 1.0, "pa:1,0": 1.0},
}
FIG_RESOURCES = ("tmsv", "ps:1,1", "pa:1,1", "ps:1,0", "pa:1,0")
EXEMPLARY_TAUS = (0.5, 0.05, 0.125, 0.1)
FIGURES = ("fig2", "fig3", "fig4", "fig5", "fig6")


def protocol_label(p: ProtocolSpec) -> str:
    if p.variant == "asymmetric":
        return f"asymmetric-{p.sender}"
    return p.variant


def evaluate_point(p: ProtocolSpec, resource: ResourceSpec, inp: InputSpec, r: float, epsilon: float) -> list:
    """CSV rows for one grid point: clone 1 for symmetric variants, every clone otherwise."""
    res = resource.with_r(r)
    proto = replace(p, epsilon=float(epsilon)) if p.variant != "asymmetric" else p
    rep = run_protocol(res, inp, proto)
    indices = range(rep.num_clones) if p.variant == "asymmetric" else range(1)
    rows = []
    for k in indices:
        row = {
            "protocol": protocol_label(p),
            "resource": resource.label(),
            "input": inp.label(),
            "r": float(r),
            "epsilon": float(proto.epsilon),
            "clone_index": k + 1,
            "fidelity": rep.fidelities[k],
            "var_x": rep.variances[k][0],
            "var_p": rep.variances[k][1],
            "q": rep.q[k],
            "zeta": rep.zeta[k],
        }
        if resource.family == "tmsv":
            row["eln"] = eln_closed_form(r)
            row["ggm"] = ggm_closed_form(r)
        if rep.herald_weight is not None:
            row["herald_weight"] = rep.herald_weight
        rows.append(row)
    return rows


def _sort_key(row: dict):
    return (row["protocol"], row["resource"], row["input"], row["r"], row["epsilon"], row["clone_index"])


def sweep(
    p: ProtocolSpec,
    resource: ResourceSpec,
    inp: InputSpec,
    r_values,
    eps_values=None,
    *,
    threads: int = 1,
) -> list:
    """Rows over the ``r x epsilon`` grid, sorted so output is independent of ``threads``."""
    eps_values = [p.epsilon] if eps_values is None else list(eps_values)
    points = [(float(r), float(e)) for r in r_values for e in eps_values]
    if threads > 1 and len(points) > 1:
        chunks = Parallel(n_jobs=threads)(
            delayed(evaluate_point)(p, resource, inp, r, e) for r, e in points
        )
    else:
        chunks = [evaluate_point(p, resource, inp, r, e) for r, e in points]
    rows = [row for chunk in chunks for row in chunk]
    return sorted(rows, key=_sort_key)


def optimize(
    p: ProtocolSpec,
    resource: ResourceSpec,
    inp: InputSpec,
    target: str,
    lo: float,
    hi: float,
    *,
    r: float | None = None,
    clone_index: int = 1,
    grid: int = 41,
) -> OptimumResult:
    """Maximize clone fidelity over ``r`` (at ``p.epsilon``) or over epsilon (at fixed ``r``)."""
    if target == "r":
        def objective(x):
            return run_protocol(resource.with_r(x), inp, p).fidelities[clone_index - 1]
    elif target == "epsilon":
        if r is None:
            raise ValueError("an epsilon search needs a fixed r")
        res = resource.with_r(r)

        def objective(x):
            return run_protocol(res, inp, replace(p, epsilon=x)).fidelities[clone_index - 1]
    else:
        raise ValueError("target must be 'r' or 'epsilon'")
    return maximize(objective, lo, hi, grid=grid)


def network_rows(taus, r_values, sender: str = "irreversible", inp: InputSpec | None = None) -> list:
    """Per-clone fidelity and q from the simulated covariance and from the closed forms."""
    inp = inp or InputSpec()
    p = ProtocolSpec("asymmetric", sender=sender)
    res = ResourceSpec("asym", 0.0, taus=tuple(taus))
    rows = []
    for r in r_values:
        for m in range(1, len(taus) + 1):
            f, (vx, vp), rep = asymmetric_fidelity(r, taus, p, m, inp)
            fc, (vxc, vpc), repc = asymmetric_fidelity_closed(r, taus, p, m, inp)
            rows.append({
                "protocol": protocol_label(p),
                "resource": res.label(),
                "input": inp.label(),
                "r": float(r),
                "epsilon": 0.0,
                "clone_index": m,
                "fidelity": f,
                "var_x": vx,
                "var_p": vp,
                "q": rep.q,
                "zeta": rep.zeta,
                "fidelity_closed": fc,
                "q_closed": repc.q,
                "max_discrepancy": max(abs(f - fc), abs(rep.q - repc.q), abs(vx - vxc), abs(vp - vpc)),
            })
    return rows


def _fig2(r_values, threads):
    rows = []
    p = ProtocolSpec("irreversible")
    fids = sweep(p, ResourceSpec("tmsv"), InputSpec(), r_values, threads=threads)
    for row in fids:
        r = row["r"]
        rows.append({
            "r": r,
            "fidelity": row["fidelity"],
            "eln": eln_closed_form(r),
            "ggm": ggm_closed_form(r),
            "ln_sender_clone": log_negativity(reduced_sender_clone_state(r)),
        })
    return {"fig2.csv": rows}


def _fig_resources(inp, r_values, threads, resources, eps_values=None):
    rows = []
    for variant in ("irreversible", "reversible"):
        for text in resources:
            rows += sweep(ProtocolSpec(variant), ResourceSpec.parse(text), inp, r_values, eps_values, threads=threads)
    return rows


def _fig4(r_values, threads):
    inp = InputSpec("squeezed", 0j, 0.5)
    eps_grid = np.round(np.linspace(0.0, 1.0, 101), 12)
    eps_rows = []
    for variant, table in SQUEEZED_SCAN_R.items():
        for text, r in table.items():
            eps_rows += sweep(ProtocolSpec(variant), ResourceSpec.parse(text), inp, [r], eps_grid, threads=threads)
    return {
        "fig4_epsilon.csv": eps_rows,
        "fig4_r.csv": _fig_resources(inp, r_values, threads, FIG_RESOURCES),
    }


def _fig6(r_values, threads):
    rows = []
    for sender in ("irreversible", "reversible"):
        rows += network_rows(EXEMPLARY_TAUS, r_values, sender)
    return {"fig6.csv": rows}


def figure_data(fig: str, r_values=None, threads: int = 1) -> dict:
    """CSV row bundles for one figure, keyed by file name."""
    if fig not in FIGURES:
        raise ValueError(f"unknown figure {fig!r}; choose from {', '.join(FIGURES)}")
    if r_values is None:
        stop = 2.0 if fig == "fig6" else 1.0
        r_values = np.round(np.linspace(0.0, stop, 101 if stop == 1.0 else 201), 12)
    if fig == "fig2":
        return _fig2(r_values, threads)
    if fig == "fig3":
        return {"fig3.csv": _fig_resources(InputSpec(), r_values, threads, FIG_RESOURCES)}
    if fig == "fig4":
        return _fig4(r_values, threads)
    if fig == "fig5":
        return {"fig5.csv": _fig_resources(InputSpec(), r_values, threads, [f"ps:{n},{n}" for n in range(1, 5)])}
    return _fig6(r_values, threads)


def plot_script(fig: str, files) -> str:
    """Plain gnuplot script drawing the bundle's fidelity and q columns against r (or epsilon)."""
    lines = [
        f"# {fig}: fidelity and q curves",
        "set datafile separator ','",
        "set key outside",
        "set xlabel 'r'",
        "set ylabel 'value'",
    ]
    for name in files:
        xcol = "epsilon" if "epsilon" in name else "r"
        lines.append(f"set output '{name[:-4]}.png'")
        lines.append("set terminal pngcairo size 900,600")
        lines.append(f"set xlabel '{xcol}'")
        if fig == "fig2":
            lines.append(
                f"plot '{name}' using 'r':'fidelity' with lines title 'F', "
                f"'' using 'r':'eln' with lines title 'E_LN', '' using 'r':'ggm' with lines title 'GGM'"
            )
        else:
            lines.append(
                f"plot '{name}' using '{xcol}':'fidelity' with points pt 7 ps 0.3 title 'F', "
                f"'' using '{xcol}':'q' with points pt 6 ps 0.3 title 'q'"
            )
    return "\n".join(lines) + "\n"
