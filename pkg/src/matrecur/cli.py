"""Command line interface.

Exit codes: 0 ok, 2 invalid input, 3 analytic error (e.g. a zero norm),
4 truncated simulation under ``--strict``, 5 verify found a contradiction.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import specfile
from .errors import RecurrenceError
from .matrix import NormKind
from .multiplicity import expand_word, multiplicity_profile
from .simulate import Mode, iterate, surrogate, verify
from .snacci import make_index_set, snacci_coefficient, snacci_constant, snacci_terms
from .specfile import NORM_CHOICES, SpecFileError
from .stability import VERDICT_TOL, analyze, overall_verdict

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ANALYTIC = 3
EXIT_TRUNCATED = 4
EXIT_INCONSISTENT = 5


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _print_json(obj) -> None:
    print(json.dumps(_jsonable(obj), indent=2))


def _parse_set(text: str):
    try:
        raw = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SpecFileError("--set", f"expected comma-separated positive integers, got {text!r}")
    return make_index_set(raw)


def _kinds(args, file_kinds):
    if args.norm is not None:
        return NORM_CHOICES[args.norm]
    return file_kinds


def cmd_analyze(args) -> int:
    spec, file_kinds = specfile.load(args.path)
    kinds = _kinds(args, file_kinds)
    if args.dump_spec:
        print(specfile.dumps(spec, kinds))
        return EXIT_OK
    reports = analyze(spec, kinds, args.tol)
    _print_json({
        "kind": spec.kind.value,
        "S": list(spec.S),
        "per_norm": [r.to_dict() for r in reports],
        "overall_verdict": overall_verdict(reports).value,
    })
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec, file_kinds = specfile.load(args.path)
    kind = _kinds(args, file_kinds)[0]
    n_max = args.steps - 1
    if n_max < spec.S.j:
        raise SpecFileError("--steps", f"must exceed max(S) = {spec.S.j}")
    if args.mode == Mode.DIRECT.value:
        traj = iterate(spec, n_max, args.budget, kind)
    else:
        traj = surrogate(spec, n_max, kind)
    text = traj.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        summary_stream = sys.stdout
    else:
        sys.stdout.write(text)
        summary_stream = sys.stderr
    last = traj.steps[-1]
    status = "none" if traj.truncated_at is None else f"at n={traj.truncated_at} ({traj.reason})"
    print(
        f"mode={traj.mode.value} norm={kind.value} rows={traj.n_max + 1} "
        f"final_n={last.n} final_log_norm={last.log_norm!r} truncation={status}",
        file=summary_stream,
    )
    if traj.truncated_at is not None and args.strict:
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_snacci(args) -> int:
    S = _parse_set(args.set)
    terms = snacci_terms(S, args.count)
    if args.json:
        out = {"set": list(S), "j": S.j, "m": S.m, "terms": [str(t) for t in terms]}
        if len(S) > 1:
            out["phi"] = snacci_constant(S)
            if S.m == 1:
                out["c"] = snacci_coefficient(S)
        _print_json(out)
    else:
        print(" ".join(str(t) for t in terms))
    return EXIT_OK


def cmd_multiplicity(args) -> int:
    S = _parse_set(args.set)
    prof = multiplicity_profile(S, args.n)
    word = expand_word(S, args.n, include_B=args.with_b) if args.word else None
    if args.json:
        out = {"set": list(S), "n": args.n, "counts": [str(c) for c in prof.counts]}
        if args.with_b:
            out["b"] = str(prof.b_count)
        if word is not None:
            out["word"] = list(word.letters)
        _print_json(out)
    else:
        print("counts: " + ",".join(str(c) for c in prof.counts))
        if args.with_b:
            print(f"b: {prof.b_count}")
        if word is not None:
            print("word: " + word.compact())
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, file_kinds = specfile.load(args.path)
    kinds = _kinds(args, file_kinds)
    agreement = verify(spec, args.steps, kinds, args.tol)
    _print_json(agreement.to_dict())
    return EXIT_OK if agreement.consistent else EXIT_INCONSISTENT


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # registered on the main parser and each subcommand so they work in either position
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--norm", choices=sorted(NORM_CHOICES), default=default,
                   help="norm(s) to use; overrides the spec file (default: from file, else both)")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS if suppress else VERDICT_TOL,
                   help="verdict tolerance on margin and ratio (default: %(default)s)")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="JSON output for snacci/multiplicity")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matrecur",
        description="Stability of matrix recurrences A_n = B * prod A_{n-l} (matrix or Kronecker product).",
        parents=[_global_flags(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(True)

    p = sub.add_parser("analyze", parents=[flags], help="analytic verdict per norm (JSON)")
    p.add_argument("path", help="spec file (JSON)")
    p.add_argument("--dump-spec", action="store_true", help="print the normalized spec file and exit")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", parents=[flags], help="trajectory CSV by direct iteration or surrogate")
    p.add_argument("path", help="spec file (JSON)")
    p.add_argument("--steps", type=int, default=60, help="number of rows, n = 0..steps-1 (default: %(default)s)")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.DIRECT.value)
    p.add_argument("--budget", type=int, default=10**6, help="max entries per matrix in direct mode")
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.add_argument("--strict", action="store_true", help="exit 4 if the run was truncated")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("snacci", parents=[flags], help="exact S-nacci terms")
    p.add_argument("--set", required=True, help="comma-separated S, e.g. 1,2")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_snacci)

    p = sub.add_parser("multiplicity", parents=[flags], help="multiplicity of each A_k (and B) in A_n")
    p.add_argument("--set", required=True, help="comma-separated S, e.g. 1,2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--with-b", action="store_true", help="also count B")
    p.add_argument("--word", action="store_true", help="print the fully expanded word")
    p.set_defaults(func=cmd_multiplicity)

    p = sub.add_parser("verify", parents=[flags], help="check analytic verdicts against simulated trends")
    p.add_argument("path", help="spec file (JSON)")
    p.add_argument("--steps", type=int, default=60, help="surrogate horizon n_max (default: %(default)s)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RecurrenceError as exc:
        # set/shape validation is an input error; everything else is analytic
        code = EXIT_INVALID if args.command in ("snacci", "multiplicity") else EXIT_ANALYTIC
        print(f"error: {exc}", file=sys.stderr)
        return code
