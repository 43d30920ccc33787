"""Vector codes for two-sided problems from a one-sided scalar code.

Messages are split into ``U+1`` components, packed into composite symbols
``y_k = sum_i x_{k+1-i, i}`` and substituted into the scalar code.  Each
receiver then peels its own components off from the highest index down,
using the decoding sums of its neighbours.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .codes import LinearCode
from .gf2 import BitMatrix, SpanSolver, iter_bits
from .problem import ProblemSpec, one_sided_problem, symmetric_params, vector_problem, wrap

Component = tuple[int, int]


class UndecodableError(ValueError):
    pass


class InterferenceError(ValueError):
    pass


class SubstitutionMap:
    """Which message components make up each composite symbol ``y_k``."""

    def __init__(self, K: int, U: int):
        if U < 0:
            raise ValueError("U must be non-negative")
        self.K = K
        self.U = U

    def components(self, k: int) -> list[Component]:
        return [(wrap(k + 1 - i, self.K), i) for i in range(1, self.U + 2)]

    def column_mask(self, k: int) -> int:
        t = self.U + 1
        mask = 0
        for m, i in self.components(k):
            mask |= 1 << ((m - 1) * t + (i - 1))
        return mask

    def owner(self, component: Component) -> int:
        """Index of the composite symbol that contains ``component``."""
        m, i = component
        return wrap(m + i - 1, self.K)


def substitute(scalar: LinearCode, U: int) -> LinearCode:
    """Replace every ``y_k`` of a scalar code with its ``U+1`` components."""
    if scalar.t != 1:
        raise ValueError("not scalar: substitution needs a code with one component per message")
    smap = SubstitutionMap(scalar.K, U)
    masks = [smap.column_mask(k) for k in range(1, scalar.K + 1)]
    rows = []
    for r in scalar.rows:
        acc = 0
        for c in iter_bits(r):
            acc |= masks[c]
        rows.append(acc)
    name = f"{scalar.name} ^({U + 1})" if scalar.name else ""
    return LinearCode(scalar.K, U + 1, BitMatrix(tuple(rows), scalar.K * (U + 1)), name)


@dataclass(frozen=True)
class SumWitness:
    """Code symbols whose sum is ``y_k + sum_j y_{k+a_j}``."""

    receiver: int
    coeffs: int
    offsets: tuple[int, ...]

    def symbols(self) -> list[int]:
        return list(iter_bits(self.coeffs))


def _seed_window(problem: ProblemSpec) -> int:
    params = symmetric_params(problem)
    if params.U != 0:
        raise ValueError("decoding sums are defined on the one-sided seed problem")
    return params.D


def find_sum(scalar: LinearCode, problem: ProblemSpec, k: int, _D: Optional[int] = None) -> SumWitness:
    """Decoding sum for receiver ``k`` of a one-sided problem.

    Only the receiver's own following window is eliminated, so the
    offsets always land in ``1..D``.
    """
    K = scalar.K
    D = _seed_window(problem) if _D is None else _D
    window = 0
    for j in range(1, D + 1):
        window |= 1 << (wrap(k + j, K) - 1)
    target = 1 << (wrap(k, K) - 1)
    masked = BitMatrix(tuple(r & ~window for r in scalar.rows), K)
    coeffs = SpanSolver(masked).solve(target)
    if coeffs is None:
        raise UndecodableError(f"undecodable receiver {k}")
    total = scalar.symbols.combine(coeffs)
    offsets = sorted((c + 1 - k) % K for c in iter_bits(total) if c + 1 != wrap(k, K))
    if any(not 1 <= a <= D for a in offsets):
        raise AssertionError(f"receiver {k}: offsets {offsets} escape the window 1..{D}")
    return SumWitness(wrap(k, K), coeffs, tuple(offsets))


@dataclass(frozen=True)
class ScheduleStep:
    sum_index: int
    witness: SumWitness
    cancel: tuple[Component, ...]
    side: tuple[Component, ...]
    recovers: Component

    def to_dict(self) -> dict:
        return {
            "sum_index": self.sum_index,
            "coeffs": self.witness.symbols(),
            "offsets": list(self.witness.offsets),
            "cancel": [list(c) for c in self.cancel],
            "side": [list(c) for c in self.side],
            "recovers": list(self.recovers),
        }


@dataclass(frozen=True)
class DecodingSchedule:
    """Per receiver, the ordered steps that recover its block of components.

    ``U`` and ``D`` describe the two-sided problem being decoded; ``t`` is
    the block size, ``min(U, D) + 1``.
    """

    K: int
    U: int
    D: int
    length: int
    steps: tuple[tuple[ScheduleStep, ...], ...]

    @property
    def t(self) -> int:
        return min(self.U, self.D) + 1

    def receiver(self, k: int) -> tuple[ScheduleStep, ...]:
        return self.steps[wrap(k, self.K) - 1]

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "U": self.U,
            "D": self.D,
            "length": self.length,
            "receivers": [
                {"receiver": k, "steps": [s.to_dict() for s in steps]}
                for k, steps in enumerate(self.steps, start=1)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "DecodingSchedule":
        K = int(data["K"])
        receivers = []
        for entry in data["receivers"]:
            k = int(entry["receiver"])
            steps = []
            for s in entry["steps"]:
                coeffs = 0
                for r in s["coeffs"]:
                    coeffs |= 1 << int(r)
                wit = SumWitness(int(s["sum_index"]), coeffs, tuple(s.get("offsets", ())))
                steps.append(
                    ScheduleStep(
                        int(s["sum_index"]),
                        wit,
                        tuple(tuple(c) for c in s["cancel"]),
                        tuple(tuple(c) for c in s["side"]),
                        tuple(s["recovers"]),
                    )
                )
            receivers.append((k, tuple(steps)))
        receivers.sort()
        return cls(K, int(data["U"]), int(data["D"]), int(data["length"]), tuple(s for _, s in receivers))


def _labels(mask: int, t: int) -> list[Component]:
    return [(c // t + 1, c % t + 1) for c in iter_bits(mask)]


def _schedule_one_sided_frame(scalar: LinearCode, U: int, delta: int) -> DecodingSchedule:
    """Schedule with U up and delta+U down antidotes (no mirroring)."""
    K = scalar.K
    t = U + 1
    seed = one_sided_problem(K, delta)
    witnesses = [find_sum(scalar, seed, k, delta) for k in range(1, K + 1)]
    vec = substitute(scalar, U)
    target_problem = vector_problem(K, U, delta + U)
    all_steps = []
    for k in range(1, K + 1):
        own = vec.block_mask(k)
        side_mask = 0
        for a in target_problem.antidotes[k - 1]:
            side_mask |= vec.block_mask(a)
        steps = []
        recovered: set[int] = set()
        for l in range(1, U + 2):
            j = wrap(k + U + 1 - l, K)
            wit = witnesses[j - 1]
            row = vec.symbols.combine(wit.coeffs)
            target_i = U + 2 - l
            cancel = tuple(
                (k, target_i + a) for a in wit.offsets if U >= a and l in range(a + 1, U + 2)
            )
            present_own = {i for _, i in _labels(row & own, t)}
            if target_i not in present_own:
                raise AssertionError(f"receiver {k} step {l}: sum does not contain x_{{{k},{target_i}}}")
            unknown = present_own - recovered - {target_i}
            if unknown:
                raise InterferenceError(
                    f"interference: receiver {k} step {l} sum holds unrecovered own components "
                    f"{sorted(unknown | {target_i})}"
                )
            if present_own - {target_i} != {i for _, i in cancel}:
                raise AssertionError(f"receiver {k} step {l}: indicator terms disagree with the sum")
            outside = row & ~own & ~side_mask
            if outside:
                raise UndecodableError(
                    f"undecodable receiver {k}: step {l} sum holds unknown components {_labels(outside, t)}"
                )
            side = tuple(_labels(row & side_mask, t))
            steps.append(ScheduleStep(j, wit, cancel, side, (k, target_i)))
            recovered.add(target_i)
        all_steps.append(tuple(steps))
    return DecodingSchedule(K, U, delta + U, vec.length, tuple(all_steps))


def mirror_index(k: int, K: int) -> int:
    """Reflection ``k -> -k mod K`` that swaps up and down antidotes."""
    return wrap(-k, K)


def mirror_code(code: LinearCode) -> LinearCode:
    K, t = code.K, code.t
    rows = []
    for r in code.rows:
        acc = 0
        for c in iter_bits(r):
            k, i = c // t + 1, c % t + 1
            acc |= 1 << ((mirror_index(k, K) - 1) * t + (i - 1))
        rows.append(acc)
    return LinearCode(K, t, BitMatrix(tuple(rows), K * t), code.name)


def _mirror_schedule(s: DecodingSchedule) -> DecodingSchedule:
    K = s.K

    def mc(c):
        return (mirror_index(c[0], K), c[1])

    steps = [None] * K
    for k, rsteps in enumerate(s.steps, start=1):
        mk = mirror_index(k, K)
        steps[mk - 1] = tuple(
            ScheduleStep(
                mirror_index(st.sum_index, K),
                SumWitness(mirror_index(st.witness.receiver, K), st.witness.coeffs, st.witness.offsets),
                tuple(mc(c) for c in st.cancel),
                tuple(sorted(mc(c) for c in st.side)),
                mc(st.recovers),
            )
            for st in rsteps
        )
    return DecodingSchedule(K, s.D, s.U, s.length, tuple(steps))


def build_schedule(scalar: LinearCode, U: int, problem: ProblemSpec) -> DecodingSchedule:
    """Decoding schedule of ``substitute(scalar, U)`` on the extended problem.

    ``problem`` is the one-sided seed problem the scalar code solves.
    """
    delta = _seed_window(problem)
    return _schedule_one_sided_frame(scalar, U, delta)


def extend(scalar: LinearCode, U: int, D: int) -> tuple[LinearCode, DecodingSchedule]:
    """Vector code and schedule for the two-sided problem (K, U, D).

    ``scalar`` must solve the one-sided problem with ``|D-U|`` antidotes.
    When ``U > D`` the construction runs on the reflected problem and is
    mapped back.
    """
    K = scalar.K
    lo, delta = min(U, D), abs(D - U)
    vec = substitute(scalar, lo)
    sched = _schedule_one_sided_frame(scalar, lo, delta)
    if U > D:
        return mirror_code(vec), _mirror_schedule(sched)
    return vec, sched


def encode(code: LinearCode, message: int) -> int:
    """Codeword bit-vector (bit r = symbol r) for a message bit-vector over the code columns."""
    return code.symbols.mul_vec(message)


def encode_sliced(code: LinearCode, components: Sequence[int]) -> list[int]:
    """Encode many messages at once.

    ``components[c]`` packs the value of column ``c`` across trials, one
    trial per bit; the result packs each code symbol the same way.
    """
    if len(components) != code.symbols.cols:
        raise ValueError("shape: one packed value per code column expected")
    out = []
    for r in code.rows:
        acc = 0
        for c in iter_bits(r):
            acc ^= components[c]
        out.append(acc)
    return out


def decode_with_schedule(
    schedule: DecodingSchedule,
    codeword: Union[int, Sequence[int]],
    side_info: Mapping[Component, int],
    k: int,
) -> tuple[int, ...]:
    """Recover ``x_{k,1..t}`` from the received symbols and the receiver's side information.

    ``codeword`` is either a bit-vector over the code symbols or a sequence
    of per-symbol values (packed trials work too, since only XOR is used).
    """
    if isinstance(codeword, int):
        symbols = [(codeword >> r) & 1 for r in range(schedule.length)]
    else:
        symbols = list(codeword)
        if len(symbols) != schedule.length:
            raise ValueError("shape: codeword length does not match the schedule")
    k = wrap(k, schedule.K)
    recovered: dict[int, int] = {}
    for step in schedule.receiver(k):
        if step.recovers[0] != k:
            raise ValueError(f"schedule/receiver mismatch: step recovers {step.recovers} for receiver {k}")
        acc = 0
        for r in iter_bits(step.witness.coeffs):
            acc ^= symbols[r]
        for c in step.side:
            acc ^= side_info[c]
        for c in step.cancel:
            acc ^= recovered[c[1]]
        recovered[step.recovers[1]] = acc
    return tuple(recovered[i] for i in range(1, schedule.t + 1))


def receiver_side_info(problem: ProblemSpec, k: int, values: Mapping[Component, int]) -> dict:
    """Slice the side information receiver ``k`` holds out of all component values."""
    return {(a, i): values[(a, i)] for a in problem.antidotes[k - 1] for i in range(1, problem.block + 1)}
