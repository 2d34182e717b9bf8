"""Command-line front end.

Exit codes: 0 success, 1 property or criterion failure, 2 input/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import constructor, fdcheck
from .certifier import certify_all
from .errors import ParameterError, SendovError
from .poly import CandidateParams, spectrum
from .probe import neighborhood_scan
from .reference import THEOREM_DEGREES, load_reference_table, reference_params

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _read_candidate(path) -> CandidateParams:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ParameterError(f"{path} is empty")
    params = CandidateParams.from_json(text)
    params.validate()
    return params


def _write(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _candidate_from_args(args) -> CandidateParams:
    if args.input:
        return _read_candidate(args.input)
    if args.n is None:
        raise ParameterError("give --in CANDIDATE.json or --n DEGREE")
    _, res, params, _ = constructor.construct_reference(args.n)
    if params is None:
        raise ParameterError(f"reference seed for n={args.n} did not converge: {res.message}")
    return params


def cmd_construct(args) -> int:
    if args.n is None:
        raise ParameterError("construct needs --n")
    if args.discover:
        seeds = constructor.grid_seeds(args.n)
    else:
        base = reference_params(args.n).vector
        seeds = list(constructor.jittered_seeds(base, args.jitter, rng_seed=args.rng_seed))
    result = constructor.construct(args.n, seeds)
    _write(args.out, "".join(p.to_json() + "\n" for p in result.candidates))
    if args.log:
        Path(args.log).write_text(result.log_lines())
    print(f"n={args.n}: {len(seeds)} seeds, {len(result.candidates)} certified, "
          f"{len(result.rejected)} rejected", file=sys.stderr)
    return EXIT_OK if result.candidates else EXIT_FAIL


def cmd_verify(args) -> int:
    if not args.input:
        raise ParameterError("verify needs --in")
    params = _read_candidate(args.input)
    report = certify_all(params)
    _write(args.report or args.out, report.to_json(indent=1) + "\n")
    for p in report.properties:
        print(f"{p.id}: {'pass' if p.passed else 'FAIL'}  margin={p.margin:+.3e}", file=sys.stderr)
    return EXIT_OK if report.overall else EXIT_FAIL


def cmd_table(args) -> int:
    table = load_reference_table(args.seeds)
    missing = [n for n in THEOREM_DEGREES if n not in table]
    if missing:
        raise ParameterError(f"reference file lacks degrees {missing}")
    rows = []
    first_bad = None
    header = f"{'n':>3} {'beta':>13} {'a':>13} {'b':>13} {'c':>13} {'r':>13} {'d(P)':>13}  pass"
    print(header)
    for n in THEOREM_DEGREES:
        ref, res, params, report = constructor.construct_reference(n, table)
        ok = res.converged and report is not None and report.overall
        dev = float("inf")
        if params is not None:
            dev = float(np.max(np.abs(params.vector[:4] - ref.vector[:4])))
            ok = ok and dev <= args.tolerance
            spec = spectrum(params)
            print(f"{n:>3} {params.beta:13.10f} {params.a:13.10f} {params.b:13.10f} "
                  f"{params.c:13.10f} {spec.r:13.10f} {spec.dP:13.10f}  {'yes' if ok else 'NO'}")
        else:
            print(f"{n:>3} {'(newton failed: ' + res.message + ')':>69}  NO")
        rows.append({
            "n": n,
            "candidate": params.to_dict() if params else None,
            "newton_iterations": res.iterations,
            "max_deviation_from_reference": dev if np.isfinite(dev) else None,
            "report": report.to_dict() if report else None,
            "pass": bool(ok),
        })
        if not ok and first_bad is None:
            first_bad = n
    out = args.out or "table.json"
    Path(out).write_text(json.dumps({"tolerance": args.tolerance, "rows": rows}, indent=1) + "\n")
    if first_bad is not None:
        print(f"first failing row: n={first_bad}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_probe(args) -> int:
    if args.samples <= 0 or args.scale < 0:
        raise ParameterError("--samples must be positive and --scale non-negative")
    params = _candidate_from_args(args)
    stats = neighborhood_scan(params, args.samples, args.scale, args.rng_seed)
    _write(args.out, stats.to_json() + "\n")
    ok = stats.improvements == 0 and (stats.max_dQ is None or stats.max_dQ <= stats.dP + 1e-10)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_derivcheck(args) -> int:
    params = _candidate_from_args(args)
    worst = fdcheck.run_derivative_checks(params)
    tols = fdcheck.derivative_tolerances()
    ok = True
    for kind, err in worst.items():
        good = err <= tols[kind]
        ok = ok and good
        print(f"{kind:>17}: worst relative error {err:.3e} (tol {tols[kind]:.0e}) "
              f"{'ok' if good else 'FAIL'}")
    if args.out:
        Path(args.out).write_text(json.dumps({"worst": worst, "tolerances": tols}) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "table": cmd_table,
    "probe": cmd_probe,
    "derivcheck": cmd_derivcheck,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sendov", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--n", type=int)
    ap.add_argument("--in", dest="input")
    ap.add_argument("--out")
    ap.add_argument("--report")
    ap.add_argument("--log")
    ap.add_argument("--seeds", help="reference solution file for `table`")
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--scale", type=float, default=1e-3)
    ap.add_argument("--rng-seed", type=int, default=0)
    ap.add_argument("--tolerance", type=float, default=1e-8)
    ap.add_argument("--jitter", type=int, default=4, help="jittered seeds for `construct`")
    ap.add_argument("--discover", action="store_true", help="seed `construct` from a coarse grid")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SendovError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
