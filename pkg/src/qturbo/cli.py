"""Command-line front end: bound | code | simulate | exit | qircc."""

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, gf2
from .channel import DomainError, capacity, distance_db, noise_limit
from .clifford import (
    SEED_CONVENTION, SeedDataError, SeedFileError, SeedTransformation, integers_to_matrix,
    load_seed, read_seed_integers,
)
from .convolutional import random_recursive_seed
from .exit import DEFAULT_GRID, ExitCurve, inner_curve, outer_curve, tunnel_metrics
from .qircc import (
    SUBCODES, IrregularCode, SubcodeBank, WeightVector, mixed_curve, optimize_weights, subcode,
)
from .siso import DecodeFailure
from .turbo import ConcatenatedCode, simulate_wer

EXIT_CONFIG, EXIT_DOMAIN, EXIT_DECODE = 2, 3, 4
SEED_DIR_ENV = "QTURBO_SEED_DIR"


class ConfigError(Exception):
    pass


# --- helpers ------------------------------------------------------------------


def _resolve(path):
    p = Path(path)
    if not p.exists() and not p.is_absolute() and os.environ.get(SEED_DIR_ENV):
        p = Path(os.environ[SEED_DIR_ENV]) / p
    if not p.exists():
        raise ConfigError(f"no such file: {path}")
    return p


def _seed_arg(spec):
    """A seed file path or the name of a bank subcode (U1..U10)."""
    names = [s[0] for s in SUBCODES]
    if spec in names:
        return subcode(names.index(spec))
    return load_seed(_resolve(spec))


def _inner_arg(args):
    if args.inner:
        return _seed_arg(args.inner)
    n, k, m, c = args.inner_random
    return random_recursive_seed(n, k, m, c, seed=args.inner_seed, name=f"random-{n}{k}{m}{c}-s{args.inner_seed}")


def _floats(text):
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _p_values(args):
    if args.p is not None:
        return args.p
    if args.p_range is not None:
        start, stop, step = args.p_range
        if step <= 0 or stop < start:
            raise ConfigError("--p-range needs start <= stop and a positive step")
        return [round(float(v), 12) for v in np.arange(start, stop + step / 2, step)]
    raise ConfigError("give --p or --p-range")


def _grid(args):
    return np.linspace(0.0, 1.0, args.grid_points) if args.grid_points else DEFAULT_GRID


def _write_manifest(out, command, args, complete, extra=None):
    manifest = {
        "toolkit": "qturbo",
        "version": __version__,
        "command": command,
        "argv": sys.argv[1:],
        "parameters": {k: v for k, v in vars(args).items() if k != "func"},
        "complete": complete,
    }
    manifest.update(extra or {})
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# --- commands -----------------------------------------------------------------


def cmd_bound(args):
    E = args.ebit_rate
    rows = []
    if args.rate is not None:
        p_star = noise_limit(args.rate, E)
        rows.append({"R_Q": args.rate, "E": E, "p_star": p_star, "formula": "1 - H2(p) - p log2(3) + E"})
    for p in args.p or []:
        row = {"p": p, "E": E, "capacity": capacity(p, E)}
        if rows:
            row["distance_db"] = distance_db(p, rows[0]["p_star"]) if rows[0]["p_star"] else None
        rows.append(row)
    if not rows:
        raise ConfigError("give --rate and/or --p")
    if args.json:
        _emit(rows)
    else:
        for row in rows:
            print(",".join(f"{k}={v}" for k, v in row.items()))
    return 0


def cmd_code(args):
    path = _resolve(args.file)
    (n, k, m, c), values = read_seed_integers(path.read_text())
    dim = 2 * (n + m)
    if len(values) != dim:
        raise SeedFileError(f"expected {dim} integers")
    U = integers_to_matrix(values, SEED_CONVENTION)
    ok = gf2.is_symplectic(U)
    report = {
        "file": str(path), "n": n, "k": k, "m": m, "c": c, "a": n - k - c,
        "shape": [dim, dim], "symplectic": bool(ok), "invertible": gf2.rank(U) == dim,
    }
    if ok:
        u = SeedTransformation(n, k, m, c, U, name=path.stem)
        report["U_M"] = ["".join(map(str, r)) for r in u.U_M]
        report["U_P"] = ["".join(map(str, r)) for r in u.U_P]
    if args.json:
        _emit(report)
    else:
        print(f"{dim}x{dim}, symplectic: {'yes' if ok else 'no'}")
        print(f"n={n} k={k} m={m} c={c} rate={k}/{n}")
        if ok:
            print("U_M (memory columns):")
            print("\n".join("  " + r for r in report["U_M"]))
            print("U_P (physical columns):")
            print("\n".join("  " + r for r in report["U_P"]))
    return 0 if ok else EXIT_DOMAIN


def cmd_code_export(args):
    u = _seed_arg(args.name)
    Path(args.out).write_text(u.to_text())
    return 0


def _outer_arg(args, length):
    if args.weights is not None:
        bank = SubcodeBank.default()
        w = WeightVector(args.weights, bank.rates)
        return IrregularCode.build(bank, w, length)
    from .convolutional import ConvolutionalCode

    u = _seed_arg(args.outer)
    if length % u.n:
        raise ConfigError(f"length {length} is not a multiple of the outer n={u.n}")
    return ConvolutionalCode(u, length // u.n)


def cmd_simulate(args):
    ps = _p_values(args)
    inner = _inner_arg(args)
    outer = _outer_arg(args, args.length)
    cc = ConcatenatedCode.build(outer, inner, args.interleaver_seed)
    out = Path(args.out)
    header = ["p", "iter", "WER", "WER_stderr", "QBER", "frames"]
    complete = False
    try:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for p in ps:
                r = simulate_wer(cc, p, args.frames, args.max_iter, args.seed, workers=args.threads)
                for it, (wer, qber) in enumerate(zip(r.wer_trace, r.qber_trace), 1):
                    se = math.sqrt(wer * (1 - wer) / r.frames)
                    w.writerow([repr(float(p)), it, repr(float(wer)), repr(float(se)), repr(float(qber)), r.frames])
                fh.flush()
                print(f"p={p}: WER={r.wer:.4g} QBER={r.qber:.4g} mean iterations={r.mean_iterations:.2f}", file=sys.stderr)
        complete = True
    finally:
        _write_manifest(out, "simulate", args, complete, {"rate": cc.rate, "inner": inner.name, "inner_integers": inner.integers()})
    return 0


def cmd_exit(args):
    grid = _grid(args)
    u = _seed_arg(args.code)
    if args.kind == "inner":
        if args.p is None:
            raise ConfigError("inner curves need --p")
        curve = inner_curve(u, args.p, grid, args.symbols, args.seed, code=u.name)
    else:
        curve = outer_curve(u, grid, args.symbols, args.seed, code=u.name)
    curve.to_csv(args.out)
    if args.xy:
        curve.to_xy(args.xy)
    _write_manifest(args.out, f"exit {args.kind}", args, True)
    return 0


def _threshold(bank, w, inner, lo, hi, args):
    """Largest p in [lo, hi] at which the tunnel stays open, by bisection."""
    mixed = mixed_curve(bank, w)

    def is_open(p):
        return tunnel_metrics(inner_curve(inner, p, _grid(args), args.symbols, args.seed), mixed).open

    if not is_open(lo):
        return None
    if is_open(hi):
        return hi
    for _ in range(args.bisect_steps):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if is_open(mid) else (lo, mid)
    return lo


def cmd_qircc(args):
    inner = ExitCurve.from_csv(_resolve(args.inner))
    bank = SubcodeBank.default().with_curves(inner.i_a, args.symbols, args.seed)
    opt = optimize_weights(bank, inner, args.rate, args.margin)
    result = {
        "weights": opt.weights.rho.tolist(),
        "sum": opt.weights.total,
        "rate": opt.weights.rate,
        "objective": opt.objective,
        "min_gap": opt.min_gap,
        "inner_p": inner.p,
    }
    if args.inner_code:
        code = _seed_arg(args.inner_code)
        E = code.c / code.n
        R = args.rate * code.k / code.n
        p_star = noise_limit(R, E)
        thr = _threshold(bank, opt.weights, code, args.p_min, args.p_max, args)
        result.update(p_star=p_star, predicted_threshold=thr,
                      distance_db=distance_db(thr, p_star) if thr else None)
    _emit(result, args.out)
    if args.out:
        _write_manifest(args.out, "qircc optimize", args, True)
    return 0


# --- parser -------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="qturbo", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="hashing bound, noise limit and dB distance")
    b.add_argument("--rate", type=float, help="quantum coding rate R_Q")
    b.add_argument("--ebit-rate", type=float, default=0.0, help="entanglement consumption rate c/n")
    b.add_argument("--p", type=_floats, help="depolarizing probabilities to tabulate")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("code", help="seed transformation files")
    csub = c.add_subparsers(dest="action", required=True)
    ci = csub.add_parser("inspect", help="parameters, symplectic check and U_M/U_P split")
    ci.add_argument("file")
    ci.add_argument("--json", action="store_true")
    ci.set_defaults(func=cmd_code)
    ce = csub.add_parser("export", help="write a bank subcode as a seed file")
    ce.add_argument("name", choices=[s[0] for s in SUBCODES])
    ce.add_argument("--out", required=True)
    ce.set_defaults(func=cmd_code_export)

    def inner_opts(p):
        p.add_argument("--inner", help="inner seed file (default: random recursive EA code)")
        p.add_argument("--inner-random", type=int, nargs=4, default=[3, 1, 3, 2], metavar=("N", "K", "M", "C"))
        p.add_argument("--inner-seed", type=int, default=0)

    s = sub.add_parser("simulate", help="Monte-Carlo WER/QBER sweep")
    s.add_argument("--p", type=_floats)
    s.add_argument("--p-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    s.add_argument("--frames", type=int, default=100)
    s.add_argument("--max-iter", type=int, default=15)
    s.add_argument("--length", type=int, default=3000, help="interleaver length in qubits")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--interleaver-seed", type=int, default=0)
    group = s.add_mutually_exclusive_group()
    group.add_argument("--outer", default="U8", help="outer seed file or subcode name")
    group.add_argument("--weights", type=_floats, help="QIRCC weight vector over U1..U10")
    inner_opts(s)
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--out", default="wer.csv")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("exit", help="EXIT transfer curves")
    e.add_argument("kind", choices=["inner", "outer"])
    e.add_argument("--code", required=True, help="seed file or subcode name")
    e.add_argument("--p", type=float)
    e.add_argument("--grid-points", type=int, default=0)
    e.add_argument("--symbols", type=int, default=20000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out", default="curve.csv")
    e.add_argument("--xy", help="also write a two-column I_A I_E file")
    e.set_defaults(func=cmd_exit)

    q = sub.add_parser("qircc", help="QIRCC weight optimization")
    qsub = q.add_subparsers(dest="action", required=True)
    qo = qsub.add_parser("optimize")
    qo.add_argument("--inner", required=True, help="inner EXIT curve CSV")
    qo.add_argument("--rate", type=float, required=True)
    qo.add_argument("--margin", type=float, default=1e-3)
    qo.add_argument("--symbols", type=int, default=20000, help="symbols per subcode curve point")
    qo.add_argument("--seed", type=int, default=0)
    qo.add_argument("--grid-points", type=int, default=0)
    qo.add_argument("--inner-code", help="inner seed file; enables the threshold prediction")
    qo.add_argument("--p-min", type=float, default=0.2)
    qo.add_argument("--p-max", type=float, default=0.45)
    qo.add_argument("--bisect-steps", type=int, default=8)
    qo.add_argument("--out")
    qo.set_defaults(func=cmd_qircc)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SeedFileError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, (DomainError, SeedDataError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DecodeFailure as exc:
        print(f"decode failure: {exc}", file=sys.stderr)
        return EXIT_DECODE


if __name__ == "__main__":
    sys.exit(main())
