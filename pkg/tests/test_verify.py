import itertools
import json
from fractions import Fraction

import pytest

from vecindex.codes import LinearCode
from vecindex.constructions import build
from vecindex.golden import load_golden, run_golden
from vecindex.gf2 import BitMatrix
from vecindex.problem import extended_problem, one_sided_problem, two_sided_problem, vector_problem
from vecindex.vector import substitute
from vecindex.verify import (
    Erratum,
    InstanceTooLargeError,
    all_decodable,
    check_optimality,
    compare_golden,
    decodable,
    load_errata,
    minrank_oracle,
    minrank_witness,
)

from conftest import np_decodable


def test_example_code_decodes(example_code):
    res = decodable(one_sided_problem(20, 4), example_code)
    assert len(res) == 20 and all(r.decodable for r in res)
    for r in res:
        (w,) = r.witnesses.values()
        assert w is not None


def test_truncated_code_fails(example_code):
    short = example_code.drop_row(15)
    prob = one_sided_problem(20, 4)
    assert not all_decodable(prob, short)
    assert not all(np_decodable(prob, short))


def test_single_parity():
    assert all_decodable(one_sided_problem(3, 2), LinearCode.scalar(3, [[1, 2, 3]]))


def test_shape_mismatch(example_code):
    with pytest.raises(ValueError, match="shape"):
        decodable(one_sided_problem(21, 4), example_code)
    with pytest.raises(ValueError, match="shape"):
        decodable(vector_problem(20, 1, 5), example_code)


def test_decodable_agrees_with_numpy_oracle():
    for code, prob in [
        (build(2, 20, 15), one_sided_problem(20, 15)),
        (substitute(build(9, 19, 5, 1), 2), extended_problem(19, 2, 5)),
        (LinearCode.scalar(6, [[1, 2], [3, 4]]), one_sided_problem(6, 1)),
    ]:
        assert [r.decodable for r in decodable(prob, code)] == np_decodable(prob, code)


def test_check_optimality_examples(example_code):
    rep = check_optimality((20, 2, 6), substitute(example_code, 2))
    assert rep.optimal and rep.rate == Fraction(3, 16)
    rep = check_optimality(two_sided_problem(20, 1, 16), substitute(build(2, 20, 15), 1))
    assert rep.optimal and rep.rate == Fraction(2, 5)
    padded = example_code.with_rows(example_code.rows + (example_code.rows[0] ^ example_code.rows[1],))
    rep = check_optimality((20, 0, 4), padded)
    assert rep.decodable and not rep.optimal
    assert any("below capacity" in n for n in rep.notes)


def test_report_json(example_code):
    d = json.loads(check_optimality((20, 0, 4), example_code).to_json())
    assert d["rate"] == "1/16" and d["capacity"] == "1/16" and d["optimal"]


def _brute_min_length(problem, max_len):
    """Smallest l with a decodable l-row code, by plain enumeration of row sets."""
    n = problem.K
    vecs = range(1, 1 << n)
    for l in range(1, max_len + 1):
        for rows in itertools.combinations(vecs, l):
            code = LinearCode(n, 1, BitMatrix(rows, n))
            if all(np_decodable(problem, code)):
                return l
    return None


def test_oracle_examples():
    assert minrank_oracle(one_sided_problem(4, 2), 4) == 2
    assert minrank_oracle(one_sided_problem(3, 2), 3) == 1
    assert minrank_oracle(one_sided_problem(6, 3), 6) == 3


def test_oracle_against_brute_force():
    assert _brute_min_length(one_sided_problem(4, 2), 4) == 2
    assert _brute_min_length(one_sided_problem(3, 2), 3) == 1
    # every 2-row code fails on one_sided(6,3), so the minimum is at least 3
    assert _brute_min_length(one_sided_problem(6, 3), 2) is None


def test_oracle_witness_decodes():
    code = minrank_witness(one_sided_problem(5, 2), 3)
    assert code is not None and all(np_decodable(one_sided_problem(5, 2), code))
    assert minrank_witness(one_sided_problem(5, 2), 2) is None


def test_oracle_none_when_budget_too_small():
    assert minrank_oracle(one_sided_problem(6, 1), 4) is None


def test_oracle_budget():
    with pytest.raises(InstanceTooLargeError, match="instance too large"):
        minrank_oracle(one_sided_problem(14, 1), 13)


def test_oracle_workers_match_serial():
    p = one_sided_problem(6, 2)
    assert minrank_oracle(p, 6, workers=2) == minrank_oracle(p, 6) == 4


def test_compare_reflexive(example_code):
    d = compare_golden(example_code, example_code, problem=one_sided_problem(20, 4))
    assert d.exact and d.ok and d.order_matches and not d.unexplained


def test_compare_unlisted_mismatch_rejected(example_code):
    rows = list(example_code.rows)
    rows[0] = LinearCode.scalar(20, [[1, 6]]).rows[0]
    d = compare_golden(example_code, example_code.with_rows(rows), problem=one_sided_problem(20, 4))
    assert not d.ok and d.unexplained


def test_compare_errata_accepted_for_k19_listing():
    errata = load_errata()
    listing = next(g for g in load_golden() if g.K == 19 and g.U == 2)
    d = compare_golden(listing.generate(), listing.code(), errata, listing.id, listing.problem())
    assert not d.exact and d.ok
    assert len(d.accepted) == 1 and (20, 3) in d.accepted[0].printed
    # without the erratum the same diff is unexplained
    d = compare_golden(listing.generate(), listing.code(), [], listing.id, listing.problem())
    assert not d.ok


def test_erratum_requires_decodable_codes(example_code):
    prob = one_sided_problem(20, 4)
    rows = list(example_code.rows)
    rows[15] = LinearCode.scalar(20, [[16, 19]]).rows[0]
    generated = example_code.with_rows(rows)
    assert not all(np_decodable(prob, generated))
    fix = Erratum("x", 15, ((16, 1), (20, 1)), ((16, 1), (19, 1)))
    d = compare_golden(generated, example_code, [fix], "x", prob)
    assert not d.unexplained and d.accepted == [fix]
    assert d.decodable_generated is False and not d.ok


def test_all_goldens_pass():
    diffs = run_golden()
    assert len(diffs) == 22
    assert all(d.ok for d in diffs), [d.example for d in diffs if not d.ok]


def test_golden_row_deletion_breaks_decoding():
    for g in load_golden():
        code, prob = g.generate(), g.problem()
        for r in range(code.length):
            assert not all_decodable(prob, code.drop_row(r)), (g.id, r)
