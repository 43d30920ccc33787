"""Command-line entry point: construct, extend, verify, decode, sweep, golden.

Exit status is 0 on success, 1 when a verification fails and 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .codes import LinearCode
from .constructions import CONSTRUCTIBLE, ClassConditionError, LambdaRequiredError, build
from .problem import AntidoteCountError, ProblemSpec, one_sided_problem, vector_problem
from .sweep import DEFAULT_SEED, SweepSpec, format_table, roundtrip, run_sweep
from .vector import (
    DecodingSchedule,
    InterferenceError,
    UndecodableError,
    decode_with_schedule,
    encode,
    extend,
    receiver_side_info,
)
from .verify import check_optimality, load_errata

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _parse_json(text: str, path: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_code(path: str, K: Optional[int] = None, t: int = 1) -> LinearCode:
    """Read a code from JSON, or from a 0/1 matrix when ``K`` is known."""
    text = _read(path)
    stripped = text.lstrip()
    if not stripped.startswith("{") and K is not None:
        try:
            return LinearCode.from_matrix_text(text, K, t)
        except ValueError as exc:
            raise UsageError(f"{path}: {exc}") from None
    data = _parse_json(text, path)
    try:
        return LinearCode.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a code: {exc}") from None


def load_problem(path: str) -> ProblemSpec:
    data = _parse_json(_read(path), path)
    try:
        return ProblemSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a problem: {exc}") from None


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _code_text(code: LinearCode, fmt: str) -> str:
    if fmt == "matrix":
        return code.to_matrix_text()
    return json.dumps(code.to_dict()) + "\n"


def parse_range(text: str) -> tuple[int, ...]:
    """'3', '2-40' and '4,15' style integer lists."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            a, b = int(lo), int(hi)
            if b < a:
                raise argparse.ArgumentTypeError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return tuple(out)


# -- commands ------------------------------------------------------------------

def cmd_construct(args) -> int:
    try:
        code = build(args.cls, args.K, args.delta, args.lam)
    except (ClassConditionError, LambdaRequiredError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(_code_text(code, args.format), args.output)
    return EXIT_OK


def cmd_problem(args) -> int:
    try:
        if args.U == 0 and not args.block:
            problem = one_sided_problem(args.K, args.D)
        else:
            problem = vector_problem(args.K, args.U, args.D)
    except AntidoteCountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(json.dumps(problem.to_dict()) + "\n", args.output)
    return EXIT_OK


def _delta_for(code: LinearCode, delta: Optional[int]) -> int:
    d = code.K - code.length if delta is None else delta
    if not 0 <= d < code.K:
        raise UsageError(f"delta={d} out of range for K={code.K}")
    return d


def _resolve_UD(delta: int, U: int, D: Optional[int]) -> tuple[int, int]:
    if D is None:
        return U, delta + U
    if abs(D - U) != delta:
        raise UsageError(f"|D-U| = {abs(D - U)} does not match the scalar code's delta = {delta}")
    return U, D


def cmd_extend(args) -> int:
    code = load_code(args.code, args.K)
    if code.t != 1:
        raise UsageError("not scalar: extend needs a scalar code")
    delta = _delta_for(code, args.delta)
    U, D = _resolve_UD(delta, args.U, args.D)
    try:
        vec, sched = extend(code, U, D)
    except (UndecodableError, InterferenceError, AntidoteCountError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(_code_text(vec, args.format), args.output)
    if args.schedule:
        with open(args.schedule, "w") as fh:
            fh.write(json.dumps(sched.to_dict()) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = load_problem(args.problem)
    code = load_code(args.code, problem.K, problem.block)
    if code.K != problem.K:
        raise UsageError(f"{args.code}: code has K={code.K}, problem has K={problem.K}")
    try:
        report = check_optimality(problem, code, problem_id=problem.label or args.problem, code_id=args.code)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = report.to_dict()
    if not args.witnesses:
        for r in payload["receivers"]:
            r.pop("witnesses")
    sys.stdout.write(json.dumps(payload) + "\n")
    return EXIT_OK if report.decodable else EXIT_FAIL


def cmd_decode(args) -> int:
    if args.schedule:
        sched = DecodingSchedule.from_dict(_parse_json(_read(args.schedule), args.schedule))
        vec = load_code(args.code, sched.K, sched.t)
    else:
        scalar = load_code(args.code, args.K)
        delta = _delta_for(scalar, args.delta)
        U, D = _resolve_UD(delta, args.U, args.D)
        try:
            vec, sched = extend(scalar, U, D)
        except (UndecodableError, InterferenceError, AntidoteCountError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
    problem = vector_problem(sched.K, sched.U, sched.D)
    receivers = [args.receiver] if args.receiver else list(range(1, sched.K + 1))
    t = sched.t
    if args.message is not None:
        bits = args.message.strip()
        if len(bits) != vec.symbols.cols or set(bits) - {"0", "1"}:
            raise UsageError(f"--message needs {vec.symbols.cols} bits (columns ordered x_(1,1)..x_(K,t))")
        values = {vec.label(c): int(b) for c, b in enumerate(bits)}
        msg = sum(1 << c for c, b in enumerate(bits) if b == "1")
        word = encode(vec, msg)
        out = {"codeword": "".join(str((word >> r) & 1) for r in range(vec.length)), "receivers": []}
        ok = True
        for k in receivers:
            got = decode_with_schedule(sched, word, receiver_side_info(problem, k, values), k)
            want = tuple(values[(k, i)] for i in range(1, t + 1))
            ok &= got == want
            out["receivers"].append({"receiver": k, "decoded": list(got), "ok": got == want})
        sys.stdout.write(json.dumps(out) + "\n")
        return EXIT_OK if ok else EXIT_FAIL
    ok = roundtrip(vec, sched, args.trials, args.seed)
    sys.stdout.write(json.dumps({"trials": args.trials, "seed": args.seed, "ok": ok}) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    try:
        spec = SweepSpec(
            K_values=args.K,
            delta_values=args.delta,
            U_values=args.U,
            classes=args.classes,
            lam=args.lam,
            all_classes=args.all_classes,
            oracle=args.oracle,
            trials=args.trials,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = run_sweep(spec, jobs=args.jobs)
    sys.stdout.write(format_table(rows, args.format))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def cmd_golden(args) -> int:
    from .golden import load_golden, run_golden

    errata = load_errata(args.errata) if args.errata else None
    diffs = run_golden(load_golden(args.listings) if args.listings else None, errata)
    if args.json:
        sys.stdout.write(json.dumps([d.to_dict() for d in diffs]) + "\n")
    else:
        for d in diffs:
            status = "PASS" if d.ok else "FAIL"
            detail = "exact" if d.exact else f"{len(d.accepted)} erratum row(s) accepted"
            if d.unexplained:
                detail = "; ".join(d.unexplained)
            print(f"{status}  {d.example}  {detail}")
    return EXIT_OK if all(d.ok for d in diffs) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vecindex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit an optimal scalar code for a one-sided problem")
    p.add_argument("--class", dest="cls", type=int, required=True, choices=CONSTRUCTIBLE + (4,))
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--format", choices=("json", "matrix"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("problem", help="emit a symmetric problem as JSON")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--U", type=int, default=0)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--block", action="store_true", help="use blocks of min(U,D)+1 components")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_problem)

    p = sub.add_parser("extend", help="substitute a scalar code into a vector code")
    p.add_argument("code", help="scalar code file ('-' for stdin)")
    p.add_argument("--U", type=int, required=True)
    p.add_argument("--D", type=int, help="down antidotes of the target problem (default delta+U)")
    p.add_argument("--delta", type=int, help="one-sided antidotes the scalar code serves (default K-length)")
    p.add_argument("--K", type=int, help="message count, needed for matrix input")
    p.add_argument("--schedule", help="write the decoding schedule JSON here")
    p.add_argument("--format", choices=("json", "matrix"), default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="check decodability and optimality of a code")
    p.add_argument("problem")
    p.add_argument("code")
    p.add_argument("--witnesses", action="store_true", help="include span witnesses in the report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decode", help="encode messages and run the decoding schedule")
    p.add_argument("code", help="scalar code, or the vector code when --schedule is given")
    p.add_argument("--schedule")
    p.add_argument("--U", type=int, default=0)
    p.add_argument("--D", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--receiver", type=int)
    p.add_argument("--message", help="0/1 string over the vector code columns")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sweep", help="construct, extend and verify over parameter ranges")
    p.add_argument("--K", type=parse_range, required=True)
    p.add_argument("--delta", type=parse_range)
    p.add_argument("--U", type=parse_range, default=(0,))
    p.add_argument("--classes", type=parse_range, default=CONSTRUCTIBLE)
    p.add_argument("--lambda", dest="lam", type=int, help="fixed lambda (default: every valid one)")
    p.add_argument("--all-classes", action="store_true", help="one row per class and lambda, not just the first")
    p.add_argument("--oracle", action="store_true", help="add the exhaustive minrank column (U=0 rows)")
    p.add_argument("--trials", type=int, default=0, help="random encode/decode round trips per instance")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("golden", help="compare generated codes with the transcribed listings")
    p.add_argument("--listings", help="alternative listings JSON")
    p.add_argument("--errata", help="alternative errata JSON")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_golden)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
