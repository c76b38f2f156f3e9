"""Command-line entry point.

Subcommands::

    sample     draw one error configuration
    decode     run one decoding trial and narrate it
    sweep      logical failure rates over a parameter grid
    threshold  bisection search for the threshold
    bath       Lambda(t) and p_d(t) on a time grid
    times      A/B/C error budget on a time grid, or the maximal QEC periods
    channel    ebit fidelity of the two-qubit bath channel

Any subcommand accepts ``--config FILE`` with ``key = value`` lines; keys are
option names (``failures``, ``max-trials``, ...) and their values override
the flags given on the command line.  Bad configuration exits with code 2.
"""

import argparse
import itertools
import json
import math
import sys

import numpy as np

from .. import lattice
from ..bath.budget import BathParams, error_budget, qec_times, P_CRITICAL
from ..bath.channel import ebit_fidelity
from ..bath.spectral import MODES, SpectralParams, p_d, spectral_lambda
from ..decoder import match_syndrome, decode as decode_syndrome
from ..noise import format_model, parse_model, sample as sample_model
from .output import emit_results, emit_table, emit_threshold
from .sweep import SweepConfig, matched_decoder, run_sweep, trial_rng
from .threshold import NoSignChange, find_threshold

EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def _floats(text):
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in str(text).split(",") if v.strip()]


def _grid(text):
    """``start,stop,count`` evenly spaced, or ``log:start,stop,count``."""
    text = str(text)
    log = text.startswith("log:")
    start, stop, count = _floats(text[4:] if log else text)
    count = int(count)
    if log:
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _common(p, sizes=False):
    p.add_argument("--config", help="key = value file overriding the flags")
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    if sizes:
        p.add_argument("--L", type=_ints, default=[8, 12, 16, 24],
                       help="comma-separated code sizes")
    else:
        p.add_argument("--L", type=int, default=8, help="code size")


def _mc(p):
    p.add_argument("--model", type=parse_model, default=parse_model("iid:p=0.1"),
                   help="e.g. iid:p=0.1, ballistic:f=0.02,l=2, cluster:m=2,l=4,f=0.05, "
                        "pair:p1=0,p2=0.05")
    p.add_argument("--decoder", choices=("manhattan", "correlated"), default="manhattan")


def build_parser():
    parser = argparse.ArgumentParser(prog="toricbath",
                                     description="Toric-code decoding under correlated noise and bath models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw one error configuration")
    _common(p)
    _mc(p)

    p = sub.add_parser("decode", help="decode one sampled configuration verbosely")
    _common(p)
    _mc(p)
    p.add_argument("--index", type=int, default=0, help="trial index within the seed stream")

    for name in ("sweep", "threshold"):
        p = sub.add_parser(name, help=f"Monte Carlo {name}")
        _common(p, sizes=True)
        _mc(p)
        p.add_argument("--axis", default="p", help="model parameter to vary")
        p.add_argument("--failures", type=int, default=1000)
        p.add_argument("--max-trials", type=int, default=200_000)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--chunk", type=int, default=200)
        if name == "sweep":
            p.add_argument("--values", type=_floats, required=False, default=None,
                           help="comma-separated parameter values")
        else:
            p.add_argument("--bracket", type=_floats, default=None, help="lo,hi")
            p.add_argument("--width", type=float, default=1e-3)

    p = sub.add_parser("bath", help="decoherence function on a time grid")
    _common(p)
    p.add_argument("--s", type=float, default=1.0, help="spectral exponent")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--omega-0", type=float, default=1.0)
    p.add_argument("--omega-c", type=float, default=30.0)
    p.add_argument("--T", type=float, default=0.01, help="temperature (0 for zero temperature)")
    p.add_argument("--mode", choices=MODES, default="closed")
    p.add_argument("--t", type=_grid, default=_grid("log:0.01,1000,41"),
                   help="start,stop,count or log:start,stop,count")

    p = sub.add_parser("times", help="A/B/C error budget and maximal QEC periods")
    _common(p)
    p.set_defaults(L=100)
    p.add_argument("--lam", type=float, default=0.1)
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--T", type=float, default=0.01)
    p.add_argument("--omega-c", type=float, default=30.0)
    p.add_argument("--p-tilde-c", type=float, default=P_CRITICAL)
    p.add_argument("--t", type=_grid, default=_grid("log:0.1,10000,81"))
    p.add_argument("--summary", action="store_true",
                   help="print tau_d, tau_sub, tau_super and the regime instead of the budget")

    p = sub.add_parser("channel", help="ebit fidelity over (Lambda, C, J) grids")
    _common(p)
    p.add_argument("--Lambda", type=_floats, default=[0.0, 0.05, 0.1])
    p.add_argument("--C", type=_floats, default=None,
                   help="correlator values (default: C = -Lambda)")
    p.add_argument("--J", type=_floats, default=[math.pi / 4])
    return parser


def _actions(parser, command):
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    return {a.dest: a for a in sub.choices[command]._actions if a.dest != "help"}


def read_config(path):
    """Parse a ``key = value`` file; ``#`` starts a comment."""
    entries = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq or not key.strip():
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        entries[key.strip().replace("-", "_").lstrip("_")] = value.strip()
    return entries


def apply_config(args, parser):
    actions = _actions(parser, args.command)
    for key, text in read_config(args.config).items():
        action = actions.get(key)
        if action is None or key == "config":
            raise ConfigError(f"unknown config key {key!r}")
        try:
            if isinstance(action, argparse._StoreTrueAction):
                value = text.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                value = action.type(text)
            else:
                value = text
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{key!r} must be one of {list(action.choices)}")
        setattr(args, key, value)


def _write(args, data: bytes):
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _sweep_config(args, values):
    cfg = SweepConfig(model=args.model, axis=args.axis, values=list(values),
                      decoder=args.decoder, L_list=list(args.L), failures=args.failures,
                      max_trials=args.max_trials, seed=args.seed, workers=args.workers,
                      chunk=args.chunk)
    try:
        cfg.validate()
        matched_decoder(args.model, args.decoder)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def cmd_sample(args):
    c = lattice.CodeParams(args.L)
    e = sample_model(args.model, c, trial_rng(args.seed, args.L, 0.0, 0))
    flipped = [str(q) for q in lattice.flipped_qubits(e, c)]
    if args.format == "json":
        body = {"L": args.L, "model": format_model(args.model), "seed": args.seed,
                "hex": lattice.to_hex(e, c), "flipped": flipped}
        _write(args, (json.dumps(body, indent=1) + "\n").encode())
    else:
        rows = [{"orientation": q.orientation, "x": q.x, "y": q.y}
                for q in lattice.flipped_qubits(e, c)]
        _write(args, emit_table(("orientation", "x", "y"), rows))


def cmd_decode(args):
    c = lattice.CodeParams(args.L)
    try:
        kind = matched_decoder(args.model, args.decoder)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    e = sample_model(args.model, c, trial_rng(args.seed, args.L, 0.0, args.index))
    s = lattice.syndrome_of(e, c)
    pairs, _, _ = match_syndrome(s, kind, c) if len(s) else ([], None, None)
    correction = decode_syndrome(s, kind, c)
    residual = e ^ correction
    winding = lattice.winding_class(residual, c)
    lines = [f"model      {format_model(args.model)}",
             f"decoder    {args.decoder}",
             f"flipped    {int(e.sum())} of {c.n_qubits} qubits",
             f"anyons     {len(s)}: " + " ".join(f"({x},{y})" for x, y in s),
             "matching   " + " ".join(f"({s[i][0]},{s[i][1]})-({s[j][0]},{s[j][1]})" for i, j in pairs),
             f"correction {int(correction.sum())} qubits",
             f"residual winding {winding}",
             "result     " + ("success" if winding == (0, 0) else "logical failure")]
    _write(args, ("\n".join(lines) + "\n").encode())


def cmd_sweep(args):
    if not args.values:
        raise ConfigError("sweep needs --values")
    cfg = _sweep_config(args, args.values)
    _write(args, emit_results(run_sweep(cfg), args.format))


def cmd_threshold(args):
    if not args.bracket or len(args.bracket) != 2:
        raise ConfigError("threshold needs --bracket lo,hi")
    cfg = _sweep_config(args, [args.bracket[0]])

    def log(d):
        print(f"{args.axis}={d.value:.6g} above={d.above} resolved={d.resolved} "
              f"rate(L={d.small.L})={d.small.rate:.4f} rate(L={d.large.L})={d.large.rate:.4f}",
              file=sys.stderr, flush=True)

    try:
        result = find_threshold(cfg, args.bracket, width=args.width, log=log)
    except NoSignChange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"threshold {args.axis} = {result.estimate:.6g} in [{result.interval[0]:.6g}, "
          f"{result.interval[1]:.6g}]", file=sys.stderr)
    _write(args, emit_threshold(result, args.format))


def cmd_bath(args):
    beta = math.inf if args.T == 0 else 1.0 / args.T
    try:
        sp = SpectralParams(s=args.s, alpha=args.alpha, omega_0=args.omega_0,
                            omega_c=args.omega_c, beta=beta)
        lam = spectral_lambda(sp, args.t, mode=args.mode)
    except (ValueError, NotImplementedError) as exc:
        raise ConfigError(str(exc)) from None
    if not sp.large_cutoff_ok() and args.s in (0.5, 1.0):
        print("warning: beta*omega_c < 100; large-cutoff forms are outside their range",
              file=sys.stderr)
    rows = [{"t": float(t), "Lambda": float(x), "p_d": p_d(float(x))} for t, x in zip(args.t, lam)]
    _write(args, emit_table(("t", "Lambda", "p_d"), rows, args.format))


def cmd_times(args):
    try:
        bath = BathParams(lam=args.lam, v=args.v, T=args.T, omega_c=args.omega_c)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.summary:
        q = qec_times(args.L, bath, args.p_tilde_c)
        row = {"L": args.L, "tau_d": q.tau_d, "tau_sub": q.tau_sub,
               "tau_super": q.tau_super, "regime": q.regime, "tau": q.tau}
        _write(args, emit_table(tuple(row), [row], args.format))
        return
    rows = []
    for t in args.t:
        b = error_budget(float(t), args.L, bath)
        rows.append({"t": b.t, "A": b.A, "B": b.B, "C": b.C, "p_x": b.p_x})
    _write(args, emit_table(("t", "A", "B", "C", "p_x"), rows, args.format))


def cmd_channel(args):
    rows = []
    for lam, j in itertools.product(args.Lambda, args.J):
        corrs = args.C if args.C is not None else [-lam]
        for corr in corrs:
            try:
                fid = ebit_fidelity(lam, corr, j)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            rows.append({"Lambda": lam, "C": corr, "J": j, "fidelity": fid})
    _write(args, emit_table(("Lambda", "C", "J", "fidelity"), rows, args.format))


COMMANDS = {"sample": cmd_sample, "decode": cmd_decode, "sweep": cmd_sweep,
            "threshold": cmd_threshold, "bath": cmd_bath, "times": cmd_times,
            "channel": cmd_channel}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            apply_config(args, parser)
        if args.command in ("sample", "decode"):
            lattice.CodeParams(args.L)
        return COMMANDS[args.command](args) or 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
