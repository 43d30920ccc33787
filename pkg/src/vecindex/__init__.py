"""Optimal linear index codes for symmetric multiple-unicast problems over GF(2)."""

from .codes import LinearCode
from .constructions import ConstructionParams, applicable_classes, build, capacity, construct
from .gf2 import BitMatrix, rank, rref, solve_in_span
from .problem import (
    ProblemSpec,
    SymmetricParams,
    extended_problem,
    one_sided_problem,
    two_sided_problem,
    vector_problem,
)
from .vector import (
    DecodingSchedule,
    SubstitutionMap,
    SumWitness,
    build_schedule,
    decode_with_schedule,
    encode,
    extend,
    find_sum,
    substitute,
)
from .verify import VerificationReport, check_optimality, compare_golden, decodable, minrank_oracle

__all__ = [
    "BitMatrix",
    "ConstructionParams",
    "DecodingSchedule",
    "LinearCode",
    "ProblemSpec",
    "SubstitutionMap",
    "SumWitness",
    "SymmetricParams",
    "VerificationReport",
    "applicable_classes",
    "build",
    "build_schedule",
    "capacity",
    "check_optimality",
    "compare_golden",
    "construct",
    "decodable",
    "decode_with_schedule",
    "encode",
    "extend",
    "extended_problem",
    "find_sum",
    "minrank_oracle",
    "one_sided_problem",
    "rank",
    "rref",
    "solve_in_span",
    "substitute",
    "two_sided_problem",
    "vector_problem",
]
