"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage/input error,
3 target out of range, 4 divergent sum.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys

import numpy as np

from . import __version__
from .detkernel import StructuredMatrix, structured_det
from .errors import DivergentSum, NoConvergence, SpectrumError, TargetOutOfRange
from .extremum import hessian_at_gibbs, verify_maximum
from .gibbs import TemperatureParam, gibbs_state, stats
from .inverse import SolveConfig, solve_lambda
from .spectrum import TailPolicy, dumps, dumps_json, gen_binary_programs, load_spectrum, tail_cutoff, truncated_spectrum

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RANGE = 3
EXIT_DIVERGENT = 4

CSV_HEADER = ["lambda", "temperature", "logZ", "L", "S_nats", "S_bits", "F", "var_length"]


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """Shortest round-trip decimal; integral values drop the trailing ``.0``."""
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _read_spectrum(path):
    if path is None:
        raise UsageError("--spectrum is required")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read spectrum {path!r}: {exc.strerror}") from None
    return load_spectrum(text)


def _param(args) -> TemperatureParam:
    if (args.lam is None) == (args.temp is None):
        raise UsageError("give exactly one of --lambda or --temp")
    try:
        if args.lam is not None:
            return TemperatureParam(args.lam, args.kconst, args.base2)
        return TemperatureParam.from_temperature(args.temp, args.kconst, args.base2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _row(param: TemperatureParam, spectrum) -> list[float]:
    st = stats(gibbs_state(spectrum, param.lam))
    return [param.lam, param.temperature, st.logZ, st.L, st.S, st.S_bits, st.F, st.var_length]


def cmd_stats(args) -> int:
    param = _param(args)
    lines = []
    if args.tail_check is not None:
        policy = TailPolicy(args.tail_check, args.tail_eps)
        n = tail_cutoff(policy, param.lam)
        lines.append(f"tail_cutoff {n}")
        spectrum = _read_spectrum(args.spectrum) if args.spectrum else truncated_spectrum(policy, param.lam)
    else:
        spectrum = _read_spectrum(args.spectrum)
    row = _row(param, spectrum)
    lines += [f"{k} {fmt(v)}" for k, v in zip(CSV_HEADER, row)]
    with _output(args.out) as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.lambda_min < args.lambda_max:
        raise UsageError("--lambda-min must be below --lambda-max")
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    spectrum = _read_spectrum(args.spectrum)
    grid = np.linspace(args.lambda_min, args.lambda_max, args.steps)
    rows = [_row(TemperatureParam(float(lam), args.kconst, args.base2), spectrum) for lam in grid]
    with _output(args.out) as fh:
        if args.format == "json":
            # infinite temperature (lambda = 0) becomes null; JSON has no inf
            records = [{k: (v if np.isfinite(v) else None) for k, v in zip(CSV_HEADER, r)} for r in rows]
            fh.write(json.dumps(records, indent=1) + "\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            w.writerows([fmt(v) for v in r] for r in rows)
    return EXIT_OK


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_verify(args) -> int:
    param = _param(args)
    spectrum = _read_spectrum(args.spectrum)
    if args.subset is not None and not 1 <= args.subset <= spectrum.m:
        raise UsageError(f"--subset must lie in 1..{spectrum.m}")
    rep = verify_maximum(spectrum, param.lam, fd_step=args.fd_step, samples=args.samples, seed=args.seed)
    out = [
        f"entries {spectrum.m}",
        f"lambda {fmt(param.lam)}",
        f"logZ {fmt(rep.logZ)}",
        f"[a] grad_at_gibbs max_abs={fmt(rep.grad_at_gibbs)} tol={fmt(rep.grad_tol)} {_verdict(rep.grad_ok)}",
        f"[b] grad_vs_fd max_dev={fmt(rep.fd_max_dev)} tol={fmt(rep.fd_tol)} {_verdict(rep.fd_ok)}",
    ]
    if not rep.hessians:
        out.append("[c] hessian_sign none (single entry)")
    for h in rep.hessians:
        out.append(
            f"[c] hessian_sign n={h.n} sign={h.sign:+d} expected={h.expected_sign:+d} "
            f"det={fmt(h.det)} closed_form={fmt(h.closed_form_det)} "
            f"{'kernel' if h.kernel_resolved else 'closed-form'} {_verdict(h.sign == h.expected_sign)}"
        )
    out.append(
        f"[d] simplex_max samples={rep.samples} max_gap={fmt(rep.simplex_max_gap)} "
        f"tol={fmt(rep.simplex_tol)} {_verdict(rep.simplex_ok)}"
    )
    if args.subset is not None:
        h = hessian_at_gibbs(spectrum, param.lam, args.subset)
        note = "degenerate: all coordinates varied, det vanishes by scale invariance" if h.degenerate else f"sign={h.sign:+d}"
        out.append(f"subset n={h.n} det={fmt(h.det)} closed_form={fmt(h.closed_form_det)} scale={fmt(h.scale)} {note}")
    out.append(f"overall {_verdict(rep.passed)}")
    with _output(args.out) as fh:
        fh.write("\n".join(out) + "\n")
    if not rep.passed:
        print("aitgibbs: verification failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_solve(args) -> int:
    spectrum = _read_spectrum(args.spectrum)
    cfg = SolveConfig(tol=args.tol, max_iter=args.max_iter)
    lam = solve_lambda(spectrum, args.target_L, cfg)
    with _output(args.out) as fh:
        fh.write(fmt(lam) + "\n")
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_det(args) -> int:
    try:
        mat = StructuredMatrix(args.r, args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    with _output(args.out) as fh:
        fh.write(fmt(structured_det(mat)) + "\n")
    return EXIT_OK


def cmd_gen_binary(args) -> int:
    spectrum = gen_binary_programs(args.max_len)
    with _output(args.out) as fh:
        fh.write(dumps_json(spectrum) if args.format == "json" else dumps(spectrum))
    return EXIT_OK


def _add_param_flags(p, required_spectrum=True):
    p.add_argument("--spectrum", metavar="PATH", required=required_spectrum)
    p.add_argument("--lambda", dest="lam", type=float, metavar="X")
    p.add_argument("--temp", type=float, metavar="T")
    p.add_argument("--kconst", type=float, default=1.0, metavar="K")
    p.add_argument("--base2", action="store_true", help="read T in base-2 units: lambda = -ln2 / T")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aitgibbs", description="Gibbs ensembles over program-length spectra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="ensemble statistics at one temperature")
    _add_param_flags(p, required_spectrum=False)
    p.add_argument("--tail-check", type=float, metavar="G",
                   help="check convergence for multiplicities growing like G**l")
    p.add_argument("--tail-eps", type=float, default=1e-12, metavar="EPS")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("sweep", help="statistics over a lambda grid")
    p.add_argument("--spectrum", metavar="PATH", required=True)
    p.add_argument("--lambda-min", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--kconst", type=float, default=1.0, metavar="K")
    p.add_argument("--base2", action="store_true")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check that the Gibbs weights maximize F")
    _add_param_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--subset", type=int, metavar="N", help="also report the Hessian over the first N coordinates")
    p.add_argument("--fd-step", type=float, default=1e-6)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="find lambda for a target mean length")
    p.add_argument("--spectrum", metavar="PATH", required=True)
    p.add_argument("--target-L", dest="target_L", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("det", help="determinant of the constant-off-diagonal matrix")
    p.add_argument("--r", type=_float_list, required=True, metavar="R1,R2,...")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("gen-binary", help="write the spectrum of all binary strings up to a length")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_gen_binary)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DivergentSum as exc:
        print(f"aitgibbs: divergent sum: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except TargetOutOfRange as exc:
        print(f"aitgibbs: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except NoConvergence as exc:
        print(f"aitgibbs: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, SpectrumError, ValueError) as exc:
        print(f"aitgibbs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
