"""Command-line front end: ``sweep``, ``optimize``, ``figure``, ``network`` and ``validate``.

Settings resolve as command-line flags, then a ``--config`` file of
``key = value`` lines, then the ``TELECLONE_THREADS`` environment variable
(thread count only), then built-in defaults.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .experiments import COLUMNS, EXTRA_COLUMNS, FIGURES, figure_data, network_rows, optimize, plot_script, sweep
from .protocols import ANCILLA_TARGETS, VARIANTS, ProtocolSpec
from .states import InputSpec, ResourceSpec

THREADS_ENV = "TELECLONE_THREADS"
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "protocol": "irreversible",
    "resource": "tmsv",
    "input": "coherent:0,0",
    "r_min": 0.0,
    "r_max": 1.0,
    "r_steps": 101,
    "epsilon": 0.0,
    "eps_min": None,
    "eps_max": None,
    "eps_steps": 11,
    "num_clones": 2,
    "ancilla": "both",
    "sender": "irreversible",
    "taus": "0.5,0.05,0.125,0.1",
    "seed": 0,
    "threads": 1,
    "out": None,
}


class UsageError(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def rows_to_csv(rows) -> str:
    """CSV text with the fixed column order; floats use 12 significant digits."""
    if not rows:
        return ""
    keys = set().union(*rows)
    if set(COLUMNS) <= keys:
        header = list(COLUMNS) + [c for c in EXTRA_COLUMNS if c in keys]
        header += [k for k in rows[0] if k not in header]
    else:
        header = list(rows[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(row.get(k)) for k in header])
    return buf.getvalue()


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment and dashes in keys become underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{num}: expected key = value")
        key = key.strip().replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{num}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _add_shared(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("shared options")
    g.add_argument("--protocol", choices=VARIANTS)
    g.add_argument("--resource", help="tmsv | ps:n1,n2 | pa:n1,n2 | asym:t1,t2,...")
    g.add_argument("--input", help="coherent:re,im | squeezed:s[,re,im][:p]")
    g.add_argument("--r-min", type=float)
    g.add_argument("--r-max", type=float)
    g.add_argument("--r-steps", type=int)
    g.add_argument("--epsilon", type=float, help="ancilla squeezing")
    g.add_argument("--eps-min", type=float)
    g.add_argument("--eps-max", type=float)
    g.add_argument("--eps-steps", type=int)
    g.add_argument("--num-clones", type=int)
    g.add_argument("--ancilla", choices=ANCILLA_TARGETS, help="reversible ancillas carrying epsilon")
    g.add_argument("--sender", choices=("irreversible", "reversible"), help="asymmetric sender scheme")
    g.add_argument("--taus", help="comma-separated transmissivities")
    g.add_argument("--out", help="output file (directory for figure); stdout when omitted")
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int, help=f"worker count; falls back to ${THREADS_ENV}")
    g.add_argument("--config", help="file of key = value settings; flags win")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="teleclone", description="Continuous-variable telecloning calculator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="fidelity and Q over an r (and epsilon) grid")
    _add_shared(p)

    p = sub.add_parser("optimize", help="maximize clone fidelity over r or epsilon")
    p.add_argument("--target", choices=("r", "epsilon"), default="r")
    p.add_argument("--r", type=float, dest="r_fixed", help="fixed r for an epsilon search")
    p.add_argument("--clone-index", type=int, default=1)
    _add_shared(p)

    p = sub.add_parser("figure", help="CSV bundle and plot script for one figure")
    p.add_argument("figure_id", choices=FIGURES)
    _add_shared(p)

    p = sub.add_parser("network", help="asymmetric network: simulated and closed-form clone figures")
    _add_shared(p)

    p = sub.add_parser("validate", help="run the oracle and acceptance checks")
    p.add_argument("--samples", type=int, default=1_000_000, help="Monte-Carlo samples per integral")
    p.add_argument("--json", dest="json_out", help="write the machine-readable summary here")
    p.add_argument("--overlap-prefactor", type=float, help=argparse.SUPPRESS)
    _add_shared(p)
    return parser


def _convert(key: str, raw: str):
    if key in ("r_steps", "eps_steps", "num_clones", "seed", "threads"):
        return int(raw)
    if key in ("r_min", "r_max", "epsilon", "eps_min", "eps_max"):
        return float(raw)
    return raw


def resolve(args: argparse.Namespace, environ=None) -> argparse.Namespace:
    """Fill unset options from the config file, the environment and the defaults."""
    environ = os.environ if environ is None else environ
    config = read_config(args.config) if args.config else {}
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is not None:
            continue
        if key in config:
            try:
                value = _convert(key, config[key])
            except ValueError:
                raise UsageError(f"config value for {key} is not valid: {config[key]!r}") from None
        elif key == "threads" and environ.get(THREADS_ENV):
            try:
                value = int(environ[THREADS_ENV])
            except ValueError:
                raise UsageError(f"{THREADS_ENV} must be an integer") from None
        else:
            value = default
        setattr(args, key, value)
    if args.threads < 1:
        raise UsageError("threads must be at least 1")
    if args.r_steps < 2 or args.eps_steps < 2:
        raise UsageError("step counts must be at least 2")
    if not args.r_max >= args.r_min:
        raise UsageError("r range is empty")
    return args


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    return np.round(np.linspace(lo, hi, steps), 12)


def _taus(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse taus {text!r}") from None


def _protocol(args) -> ProtocolSpec:
    if args.protocol == "asymmetric":
        return ProtocolSpec("asymmetric", sender=args.sender)
    return ProtocolSpec(args.protocol, args.num_clones, args.epsilon, args.ancilla)


def _resource(args, p: ProtocolSpec) -> ResourceSpec:
    if p.variant == "asymmetric" and args.resource == DEFAULTS["resource"]:
        return ResourceSpec("asym", 0.0, taus=_taus(args.taus))
    return ResourceSpec.parse(args.resource)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)


def _eps_values(args):
    if args.eps_min is None and args.eps_max is None:
        return None
    lo = 0.0 if args.eps_min is None else args.eps_min
    hi = lo if args.eps_max is None else args.eps_max
    if hi < lo:
        raise UsageError("epsilon range is empty")
    return _grid(lo, hi, args.eps_steps)


def cmd_sweep(args) -> int:
    p = _protocol(args)
    res = _resource(args, p)
    eps = _eps_values(args)
    if eps is not None and p.variant == "asymmetric":
        raise UsageError("the asymmetric variant has no epsilon parameter")
    rows = sweep(p, res, InputSpec.parse(args.input), _grid(args.r_min, args.r_max, args.r_steps), eps,
                 threads=args.threads)
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    p = _protocol(args)
    if p.variant == "asymmetric" and args.target == "epsilon":
        raise UsageError("the asymmetric variant has no epsilon parameter")
    res = _resource(args, p)
    inp = InputSpec.parse(args.input)
    if args.target == "r":
        lo, hi, fixed = args.r_min, args.r_max, None
    else:
        if args.r_fixed is None:
            raise UsageError("an epsilon search needs --r")
        lo = 0.0 if args.eps_min is None else args.eps_min
        hi = 1.2 if args.eps_max is None else args.eps_max
        fixed = args.r_fixed
    if not hi > lo:
        raise UsageError("search interval is empty")
    opt = optimize(p, res, inp, args.target, lo, hi, r=fixed, clone_index=args.clone_index)
    row = {
        "protocol": args.protocol,
        "resource": res.label(),
        "input": inp.label(),
        "target": args.target,
        "r": fixed,
        "epsilon": p.epsilon if args.target == "r" else None,
        "clone_index": args.clone_index,
        "location": opt.location,
        "value": opt.value,
        "bracket_lo": opt.bracket[0],
        "bracket_hi": opt.bracket[1],
        "degenerate": opt.degenerate,
    }
    _emit(rows_to_csv([row]), args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    r_values = None
    if (args.r_min, args.r_max, args.r_steps) != (DEFAULTS["r_min"], DEFAULTS["r_max"], DEFAULTS["r_steps"]):
        r_values = _grid(args.r_min, args.r_max, args.r_steps)
    bundle = figure_data(args.figure_id, r_values, args.threads)
    script = plot_script(args.figure_id, list(bundle))
    if args.out is None:
        for name, rows in bundle.items():
            sys.stdout.write(f"# {name}\n{rows_to_csv(rows)}")
        sys.stdout.write(script)
        return EXIT_OK
    folder = Path(args.out)
    folder.mkdir(parents=True, exist_ok=True)
    for name, rows in bundle.items():
        (folder / name).write_text(rows_to_csv(rows))
    (folder / f"{args.figure_id}.gp").write_text(script)
    return EXIT_OK


def cmd_network(args) -> int:
    taus = _taus(args.taus)
    sender = args.sender
    if args.protocol in ("irreversible", "reversible") and args.protocol != DEFAULTS["protocol"]:
        sender = args.protocol
    ResourceSpec("asym", 0.0, taus=taus)  # validates the transmissivities
    rows = network_rows(taus, _grid(args.r_min, args.r_max, args.r_steps), sender, InputSpec.parse(args.input))
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_validation, summary
    from .wigner_engine import OVERLAP_PREFACTOR

    if args.samples < 1000:
        raise UsageError("validation needs at least 1000 samples")
    prefactor = OVERLAP_PREFACTOR if args.overlap_prefactor is None else args.overlap_prefactor
    checks = run_validation(args.seed, samples=args.samples, overlap_prefactor=prefactor)
    text = "".join(c.line() + "\n" for c in checks)
    passed = sum(c.passed for c in checks)
    text += f"{passed}/{len(checks)} checks passed\n"
    _emit(text, args.out)
    report = json.dumps(summary(checks, args.seed), indent=2, sort_keys=True) + "\n"
    if args.json_out:
        Path(args.json_out).write_text(report)
    return EXIT_OK if passed == len(checks) else EXIT_FAILED


COMMANDS = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "figure": cmd_figure,
    "network": cmd_network,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args)
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"teleclone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"teleclone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
