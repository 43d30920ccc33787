"""Batch construction, extension and verification over parameter ranges."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .codes import LinearCode
from .constructions import CONSTRUCTIBLE, ConstructionParams, applicable_classes, capacity, construct
from .problem import extended_problem, one_sided_problem, vector_problem
from .vector import (
    DecodingSchedule,
    build_schedule,
    decode_with_schedule,
    encode_sliced,
    receiver_side_info,
    substitute,
)
from .verify import InstanceTooLargeError, check_optimality, minrank_oracle

DEFAULT_SEED = 1234


def roundtrip(vec: LinearCode, schedule: DecodingSchedule, trials: int, seed: int = DEFAULT_SEED) -> bool:
    """Encode ``trials`` random messages and check every receiver decodes its block.

    Trials are bit-sliced: each component value is an int with one random
    bit per trial, so one pass through the schedule covers all of them.
    """
    if trials <= 0:
        return True
    rng = random.Random(seed)
    t, K = vec.t, vec.K
    comps = [rng.getrandbits(trials) for _ in range(K * t)]
    symbols = encode_sliced(vec, comps)
    problem = vector_problem(K, schedule.U, schedule.D)
    values = {(m, i): comps[(m - 1) * t + (i - 1)] for m in range(1, K + 1) for i in range(1, t + 1)}
    for k in range(1, K + 1):
        side = receiver_side_info(problem, k, values)
        got = decode_with_schedule(schedule, symbols, side, k)
        want = tuple(comps[(k - 1) * t + i] for i in range(t))
        if got != want:
            return False
    return True


@dataclass(frozen=True)
class SweepSpec:
    K_values: tuple[int, ...]
    delta_values: Optional[tuple[int, ...]] = None  # None: every 1..K-1
    U_values: tuple[int, ...] = (0,)
    classes: tuple[int, ...] = CONSTRUCTIBLE
    lam: Optional[int] = None  # fixed lambda, or None for all valid
    all_classes: bool = False
    oracle: bool = False
    trials: int = 0
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.K_values or not self.U_values or not self.classes:
            raise ValueError("sweep ranges must be non-empty")
        if self.delta_values is not None and not self.delta_values:
            raise ValueError("sweep ranges must be non-empty")

    def instances(self) -> list[tuple[ConstructionParams, int]]:
        out = []
        for K in sorted(set(self.K_values)):
            deltas = range(1, K) if self.delta_values is None else sorted(set(self.delta_values))
            for d in deltas:
                if not 0 < d < K:
                    continue
                picks = []
                for cls, lams in applicable_classes(K, d):
                    if cls == 4 or cls not in self.classes:
                        continue
                    if not lams:
                        picks.append(ConstructionParams.make(cls, K, d))
                    else:
                        for lam in lams:
                            if self.lam is None or lam == self.lam:
                                picks.append(ConstructionParams.make(cls, K, d, lam))
                if not self.all_classes:
                    picks = picks[:1]
                for p in picks:
                    for U in sorted(set(self.U_values)):
                        if U >= 0 and U + (d + U) < K:
                            out.append((p, U))
        return out


@dataclass
class SweepRow:
    cls: int
    K: int
    delta: int
    lam: Optional[int]
    U: int
    length: int
    rate: Fraction
    capacity: Fraction
    optimal: bool
    verified: bool
    roundtrip: Optional[bool] = None
    minrank: Optional[int] = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.verified and self.optimal and self.roundtrip is not False and not self.error

    @property
    def key(self):
        return (self.K, self.delta, self.cls, self.lam or 0, self.U)


def evaluate(params: ConstructionParams, U: int, oracle: bool = False, trials: int = 0, seed: int = DEFAULT_SEED) -> SweepRow:
    K, d = params.K, params.delta
    cap = capacity(K, U, d + U)
    try:
        scalar = construct(params)
        vec = substitute(scalar, U)
        report = check_optimality(extended_problem(K, U, d), vec)
        rt = None
        if trials:
            sched = build_schedule(scalar, U, one_sided_problem(K, d))
            rt = roundtrip(vec, sched, trials, seed)
        mr = None
        if oracle and U == 0:
            try:
                mr = minrank_oracle(one_sided_problem(K, d), K - d)
            except InstanceTooLargeError:
                mr = None
        return SweepRow(params.cls, K, d, params.lam, U, vec.length, vec.rate, cap,
                        report.optimal, report.decodable, rt, mr)
    except Exception as exc:  # reported per instance, never aborts the sweep
        return SweepRow(params.cls, K, d, params.lam, U, 0, Fraction(0), cap, False, False, error=str(exc))


def _evaluate_job(args):
    return evaluate(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    work = [(p, U, spec.oracle, spec.trials, spec.seed) for p, U in spec.instances()]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_evaluate_job, work, chunksize=8))
    else:
        rows = [_evaluate_job(w) for w in work]
    return sorted(rows, key=lambda r: r.key)


COLUMNS = ("K", "delta", "class", "lambda", "U", "D", "length", "rate", "capacity", "optimal", "verify", "roundtrip", "minrank")


def row_values(r: SweepRow) -> list[str]:
    def frac(x):
        return f"{x.numerator}/{x.denominator}"

    return [
        str(r.K), str(r.delta), str(r.cls), "-" if r.lam is None else str(r.lam), str(r.U), str(r.delta + r.U),
        str(r.length), frac(r.rate) if r.length else "-", frac(r.capacity),
        "yes" if r.optimal else "no",
        "ok" if r.verified else ("error: " + r.error if r.error else "FAIL"),
        "-" if r.roundtrip is None else ("ok" if r.roundtrip else "FAIL"),
        "-" if r.minrank is None else str(r.minrank),
    ]


def format_table(rows: Sequence[SweepRow], fmt: str = "text") -> str:
    body = [row_values(r) for r in rows]
    if fmt == "csv":
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows(body)
        return buf.getvalue()
    widths = [max(len(c), *(len(b[i]) for b in body)) if body else len(c) for i, c in enumerate(COLUMNS)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(COLUMNS, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"
