"""Command line interface.

    lptvinv analyze SYSTEM.json [--oracle] [--tol-sv X] [--tol-stab X] [--out FILE]
    lptvinv invert SYSTEM.json [--out FILE]
    lptvinv reconstruct SYSTEM.json --signal sine:1,0.05,0 [--x0 ..] [--zeta0 ..]
                                    [--horizon T] [--out FILE]
    lptvinv examples [4.1|4.2|4.3|all] [--trace-dir DIR]

Exit codes: 0 success with a stable inverse, 1 bad input, 2 unstable or
marginal inverse, 3 unsupported relative degree structure, 4 simulation
diverged, 64 command line usage error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import DEFAULT_DROP_TOL, DEFAULT_STAB_TOL, stability_report, verify_zeros_pencil
from .errors import LptvError, NonSquare, SimulationDiverged, UnsupportedStructure
from .examples import EXAMPLES, run_example
from .inversion import invert, oracle_invert_cycled
from .io import complex_pairs, dump_json, inverse_to_dict, parse_system, trace_to_csv
from .markov import DEFAULT_SV_TOL, detect_relative_degree
from .simulation import SignalSpec, reconstruct

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNSTABLE = 2
EXIT_UNSUPPORTED = 3
EXIT_DIVERGED = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with EXIT_UNSTABLE
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_signal(text: str, dimension: int) -> SignalSpec:
    """Parse ``kind:params``.

    sine:amp,freq,phase (freq in cycles/step), step:level,onset,
    impulse:level,time, constant:level, sequence:v0,v1,... (scalar input)
    or sequence:a,b;c,d;... (one vector per step, separated by ';').
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "sequence":
        steps = [s for s in rest.split(";") if s.strip()]
        if len(steps) == 1 and dimension == 1:
            values = np.array(_floats(steps[0]))[:, None]
        else:
            values = np.array([_floats(s) for s in steps])
        if values.ndim != 2 or values.shape[1] != dimension:
            raise ValueError(f"sequence needs {dimension} values per step")
        return SignalSpec.sequence(values)
    params = _floats(rest)
    defaults = {"sine": [1.0, 0.05, 0.0], "step": [1.0, 0.0], "impulse": [1.0, 0.0],
                "constant": [0.0]}
    if kind not in defaults:
        raise ValueError(f"unknown signal kind {kind!r}")
    if len(params) > len(defaults[kind]):
        raise ValueError(f"{kind} takes at most {len(defaults[kind])} parameters")
    params = params + defaults[kind][len(params):]
    if kind == "sine":
        return SignalSpec.sine(*params, dimension=dimension)
    if kind == "step":
        return SignalSpec.step(params[0], int(params[1]), dimension=dimension)
    if kind == "impulse":
        return SignalSpec.impulse(params[0], int(params[1]), dimension=dimension)
    return SignalSpec.constant(params[0], dimension=dimension)


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_report(system, name, sv_tol=DEFAULT_SV_TOL, stab_tol=DEFAULT_STAB_TOL,
                 drop_tol=DEFAULT_DROP_TOL, oracle=False):
    """Analysis report document and the exit code it maps to."""
    result = detect_relative_degree(system, sv_tol=sv_tol)
    doc = {
        "system": {"name": name, "period": system.N,
                   "dims": {"n": system.n, "m": system.m, "p": system.p}},
        "relativeDegree": result.to_dict(),
        "inverse": None,
        "stability": None,
        "zeroVerification": None,
        "tolerances": {"sv": sv_tol, "stab": stab_tol, "drop": drop_tol},
    }
    if not result.supported:
        doc["diagnostic"] = (f"{result.describe()}; non-uniform relative degree across phases "
                             "is not covered by the closed-form inverse")
        return doc, EXIT_UNSUPPORTED
    inv = invert(system, sv_tol=sv_tol)
    report = stability_report(inv, stab_tol=stab_tol)
    doc["inverse"] = inverse_to_dict(inv)
    doc["stability"] = {
        "verdict": report.verdict,
        "minimumPhase": report.minimum_phase,
        "spectralRadius": report.spectral_radius,
        "monodromyInv": report.monodromy_inv.tolist(),
        "monodromyEigenvalues": complex_pairs(report.monodromy_eigs),
        "cycledZeros": complex_pairs(report.cycled_zeros),
        "rootRelationResidual": report.root_relation_residual,
        "verdictsAgree": report.consistent,
        "delayPolesAtOrigin": system.N * inv.delay * system.m,
        "nonfinite": report.nonfinite,
    }
    checks = verify_zeros_pencil(system, report.cycled_zeros, drop_tol=drop_tol)
    doc["zeroVerification"] = [
        {"z": [c.candidate.real, c.candidate.imag], "sigma": c.sigma,
         "sigmaProbe": c.sigma_probe, "passed": c.passed, "degenerate": c.degenerate}
        for c in checks
    ]
    if oracle:
        doc["oracle"] = {"maxDeviation": inv.max_abs_difference(
            oracle_invert_cycled(system, sv_tol=sv_tol))}
    return doc, EXIT_OK if report.is_schur_stable else EXIT_UNSTABLE


def cmd_analyze(args) -> int:
    system, name = parse_system(args.system)
    doc, code = build_report(system, name, args.tol_sv, args.tol_stab, oracle=args.oracle)
    _emit(dump_json(doc), args.out)
    if code == EXIT_UNSUPPORTED:
        print(f"error: {doc['diagnostic']}", file=sys.stderr)
    elif code == EXIT_UNSTABLE:
        print(f"inverse is {doc['stability']['verdict']} "
              f"(spectral radius {doc['stability']['spectralRadius']:.6g})", file=sys.stderr)
    return code


def cmd_invert(args) -> int:
    system, _ = parse_system(args.system)
    inv = invert(system, sv_tol=args.tol_sv)
    _emit(dump_json(inverse_to_dict(inv)), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    system, _ = parse_system(args.system)
    signal = parse_signal(args.signal, system.m)
    inv = invert(system, sv_tol=args.tol_sv)
    report = stability_report(inv, stab_tol=args.tol_stab)
    trace = reconstruct(system, inv, signal, args.x0, args.zeta0, args.horizon)
    _emit(trace_to_csv(trace), args.out)
    tail = trace.error[system.N:]
    late = float(np.max(np.abs(tail))) if tail.size else 0.0
    print(f"delay {inv.delay}, spectral radius {report.spectral_radius:.6g} ({report.verdict}), "
          f"max |error| after first period {late:.3e}", file=sys.stderr)
    return EXIT_OK if report.is_schur_stable else EXIT_UNSTABLE


def cmd_examples(args) -> int:
    which = list(EXAMPLES) if args.which == "all" else [args.which]
    failed = 0
    for name in which:
        for check in run_example(name, trace_dir=args.trace_dir):
            print(check.line())
            failed += not check.passed
    print(f"{'all checks passed' if not failed else f'{failed} check(s) failed'}")
    return EXIT_OK if not failed else EXIT_INPUT


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lptvinv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, stab=True):
        p.add_argument("system", help="system JSON file")
        p.add_argument("--tol-sv", type=float, default=DEFAULT_SV_TOL,
                       help="relative singular value threshold (default %(default)g)")
        if stab:
            p.add_argument("--tol-stab", type=float, default=DEFAULT_STAB_TOL,
                           help="stability margin around the unit circle (default %(default)g)")
        p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("analyze", help="relative degree, inverse, stability and zeros report")
    common(p)
    p.add_argument("--oracle", action="store_true",
                   help="also invert through dense cycled matrices and report the deviation")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("invert", help="write the periodic inverse as JSON")
    common(p, stab=False)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("reconstruct", help="simulate plant and inverse, write a CSV trace")
    common(p)
    p.add_argument("--signal", default="sine:1,0.05,0",
                   help="input, e.g. sine:amp,freq,phase (freq in cycles/step), step:level,onset, "
                        "impulse:level,time, constant:level, sequence:v0,v1,...")
    p.add_argument("--x0", type=_floats, default=None, help="plant initial state, comma-separated")
    p.add_argument("--zeta0", type=_floats, default=None,
                   help="inverse initial state, comma-separated")
    p.add_argument("--horizon", type=int, default=200)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("examples", help="run the bundled examples and check reference numbers")
    p.add_argument("which", nargs="?", default="all", choices=[*EXAMPLES, "all"])
    p.add_argument("--trace-dir", help="also write each example's CSV trace here")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        # --help and usage errors; report the code instead of exiting
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UnsupportedStructure, NonSquare) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except SimulationDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (LptvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
