import json

import pytest
from hypothesis import given, settings, strategies as st

from vecindex.problem import (
    AntidoteCountError,
    ProblemSpec,
    extended_problem,
    one_sided_problem,
    symmetric_params,
    two_sided_problem,
    wrap,
)


def test_wrap():
    assert wrap(21, 20) == 1
    assert wrap(0, 20) == 20
    assert wrap(-1, 20) == 19


def test_one_sided_examples():
    assert one_sided_problem(20, 4).antidotes[16] == {18, 19, 20, 1}
    assert all(not a for a in one_sided_problem(3, 0).antidotes)
    assert one_sided_problem(5, 4).antidotes[0] == {2, 3, 4, 5}


def test_one_sided_rejects_full_window():
    with pytest.raises(AntidoteCountError, match="antidote count"):
        one_sided_problem(4, 4)


def test_two_sided_examples():
    assert two_sided_problem(20, 1, 5).antidotes[0] == {20, 2, 3, 4, 5, 6}
    assert two_sided_problem(4, 0, 2).antidotes == one_sided_problem(4, 2).antidotes
    assert two_sided_problem(19, 2, 7).antidotes[9] == {8, 9} | set(range(11, 18))


def test_two_sided_rejects_too_many():
    with pytest.raises(AntidoteCountError, match="antidote count"):
        two_sided_problem(6, 3, 3)


def test_extended_examples():
    p = extended_problem(20, 1, 4)
    assert p.antidotes == two_sided_problem(20, 1, 5).antidotes and p.block == 2
    p = extended_problem(20, 3, 4)
    assert p.antidotes == two_sided_problem(20, 3, 7).antidotes and p.block == 4
    assert extended_problem(9, 0, 3).antidotes == one_sided_problem(9, 3).antidotes


def test_extended_rejects_overlap():
    with pytest.raises(AntidoteCountError):
        extended_problem(10, 3, 4)


def test_want_in_antidotes_rejected():
    with pytest.raises(ValueError):
        ProblemSpec(2, (1, 2), (frozenset({1}), frozenset()), "bad")


def test_json_roundtrip():
    p = two_sided_problem(7, 1, 2)
    q = ProblemSpec.from_dict(json.loads(p.to_json()))
    assert q.antidotes == p.antidotes and q.wants == p.wants
    assert set(json.loads(p.to_json())) >= {"K", "wants", "antidotes", "label"}


def test_symmetric_params_detected_from_sets():
    p = two_sided_problem(11, 2, 3)
    bare = ProblemSpec(p.K, p.wants, p.antidotes, "")
    s = symmetric_params(bare)
    assert (s.U, s.D) == (2, 3)


@st.composite
def sym(draw):
    K = draw(st.integers(2, 30))
    U = draw(st.integers(0, K - 1))
    D = draw(st.integers(0, K - 1 - U))
    return K, U, D


@settings(max_examples=200, derandomize=True)
@given(sym())
def test_pattern_shift_invariant(p):
    K, U, D = p
    prob = two_sided_problem(K, U, D)
    assert list(prob.wants) == list(range(1, K + 1))
    for k in range(1, K + 1):
        a = prob.antidotes[k - 1]
        assert len(a) == U + D and k not in a
        nxt = prob.antidotes[wrap(k + 1, K) - 1]
        assert nxt == {wrap(x + 1, K) for x in a}


@settings(max_examples=200, derandomize=True)
@given(sym())
def test_extended_equals_two_sided(p):
    K, U, D = p
    if U + (D + U) >= K:
        return
    assert extended_problem(K, U, D).antidotes == two_sided_problem(K, U, D + U).antidotes
