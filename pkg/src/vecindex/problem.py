"""Index coding instances and the cyclic symmetric antidote patterns."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence


class AntidoteCountError(ValueError):
    """The requested antidote pattern does not fit in K messages."""


def wrap(k: int, K: int) -> int:
    """Reduce a message index into the canonical range 1..K."""
    return (k - 1) % K + 1


@dataclass(frozen=True)
class ProblemSpec:
    """A single-demand index coding instance.

    Receiver ``R_k`` (1-based) wants message ``wants[k-1]`` and already holds
    the messages in ``antidotes[k-1]``.  Each message may be a block of
    ``block`` components; side information is always whole blocks.
    """

    K: int
    wants: tuple[int, ...]
    antidotes: tuple[frozenset, ...]
    label: str = ""
    block: int = 1
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "wants", tuple(int(w) for w in self.wants))
        object.__setattr__(self, "antidotes", tuple(frozenset(int(a) for a in s) for s in self.antidotes))
        K = self.K
        if K < 1:
            raise ValueError("K must be positive")
        if len(self.wants) != K or len(self.antidotes) != K:
            raise ValueError("wants and antidotes must have one entry per receiver")
        if self.block < 1:
            raise ValueError("block size must be positive")
        for k, (w, side) in enumerate(zip(self.wants, self.antidotes), start=1):
            if not 1 <= w <= K:
                raise ValueError(f"receiver {k} wants message {w} outside 1..{K}")
            if w in side:
                raise ValueError(f"receiver {k} already has its wanted message {w}")
            bad = [a for a in side if not 1 <= a <= K]
            if bad:
                raise ValueError(f"receiver {k} has antidotes outside 1..{K}: {sorted(bad)}")

    @property
    def is_multiple_unicast(self) -> bool:
        return sorted(self.wants) == list(range(1, self.K + 1))

    def to_dict(self) -> dict:
        out = {
            "K": self.K,
            "wants": list(self.wants),
            "antidotes": [sorted(s) for s in self.antidotes],
            "label": self.label,
        }
        if self.block != 1:
            out["block"] = self.block
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemSpec":
        return cls(
            K=int(data["K"]),
            wants=tuple(data["wants"]),
            antidotes=tuple(data["antidotes"]),
            label=str(data.get("label", "")),
            block=int(data.get("block", 1)),
        )


@dataclass(frozen=True)
class SymmetricParams:
    K: int
    U: int
    D: int

    def __post_init__(self):
        if self.U < 0 or self.D < 0:
            raise AntidoteCountError("antidote count: U and D must be non-negative")
        if self.U + self.D >= self.K:
            raise AntidoteCountError(
                f"antidote count: U+D={self.U + self.D} must be below K={self.K}"
            )

    @property
    def A(self) -> int:
        return self.U + self.D

    @property
    def delta(self) -> int:
        return abs(self.D - self.U)


def _symmetric(K: int, U: int, D: int, label: str, block: int = 1, meta=None) -> ProblemSpec:
    params = SymmetricParams(K, U, D)
    antidotes = []
    for k in range(1, K + 1):
        up = {wrap(k - j, K) for j in range(1, U + 1)}
        down = {wrap(k + j, K) for j in range(1, D + 1)}
        antidotes.append(frozenset(up | down))
    info = {"U": params.U, "D": params.D}
    info.update(meta or {})
    return ProblemSpec(K, tuple(range(1, K + 1)), tuple(antidotes), label, block, info)


def one_sided_problem(K: int, D: int) -> ProblemSpec:
    """Receiver k wants x_k and knows the D messages that follow it cyclically."""
    if D >= K:
        raise AntidoteCountError(f"antidote count: D={D} must be below K={K}")
    return _symmetric(K, 0, D, f"one-sided K={K} D={D}")


def two_sided_problem(K: int, U: int, D: int) -> ProblemSpec:
    """Receiver k knows the U messages before and the D messages after x_k."""
    return _symmetric(K, U, D, f"two-sided K={K} U={U} D={D}")


def vector_problem(K: int, U: int, D: int) -> ProblemSpec:
    """Two-sided problem whose messages are blocks of min(U, D)+1 components."""
    t = min(U, D) + 1
    if t == 1:
        return _symmetric(K, U, D, f"two-sided K={K} U={U} D={D}")
    return _symmetric(K, U, D, f"two-sided K={K} U={U} D={D} (blocks of {t})", block=t)


def extended_problem(K: int, U: int, D: int) -> ProblemSpec:
    """Two-sided problem over blocks of U+1 components reached from a one-sided seed with D antidotes."""
    if U == 0:
        return one_sided_problem(K, D)
    if U + (D + U) >= K:
        raise AntidoteCountError(f"antidote count: U+(D+U)={2 * U + D} must be below K={K}")
    return _symmetric(
        K,
        U,
        D + U,
        f"extended K={K} U={U} D={D + U} (seed D={D}, blocks of {U + 1})",
        block=U + 1,
        meta={"seed_D": D},
    )


def symmetric_params(problem: ProblemSpec) -> SymmetricParams:
    """Recover (U, D) from a problem with a cyclic symmetric antidote pattern."""
    if "U" in problem.meta and "D" in problem.meta:
        return SymmetricParams(problem.K, problem.meta["U"], problem.meta["D"])
    K = problem.K
    if list(problem.wants) != list(range(1, K + 1)):
        raise ValueError("not a symmetric problem: wants is not the identity")
    side = problem.antidotes[0]
    D = 0
    while D < K and wrap(1 + D + 1, K) in side and D + 1 < K:
        D += 1
    U = len(side) - D
    candidate = _symmetric(K, U, D, "")
    if candidate.antidotes != problem.antidotes:
        raise ValueError("not a symmetric problem: antidote sets are not a cyclic window")
    return SymmetricParams(K, U, D)


def problem_from_sets(K: int, antidotes: Sequence[Sequence[int]], label: str = "") -> ProblemSpec:
    return ProblemSpec(K, tuple(range(1, K + 1)), tuple(frozenset(s) for s in antidotes), label)
