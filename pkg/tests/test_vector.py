import json
from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from vecindex.codes import LinearCode
from vecindex.constructions import build, construct, iter_instances
from vecindex.problem import extended_problem, one_sided_problem, vector_problem
from vecindex.sweep import roundtrip
from vecindex.vector import (
    DecodingSchedule,
    InterferenceError,
    SubstitutionMap,
    UndecodableError,
    build_schedule,
    decode_with_schedule,
    encode,
    extend,
    find_sum,
    receiver_side_info,
    substitute,
)
from vecindex.verify import all_decodable

from conftest import np_decodable


def labels(code, r):
    return sorted(code.row_labels(r))


def test_substitution_map_partitions_components():
    smap = SubstitutionMap(20, 2)
    seen = [c for k in range(1, 21) for c in smap.components(k)]
    assert len(seen) == len(set(seen)) == 60
    assert smap.components(1) == [(1, 1), (20, 2), (19, 3)]


def test_substitute_examples(example_code):
    c2 = substitute(example_code, 1)
    assert labels(c2, 0) == sorted([(1, 1), (20, 2), (5, 1), (4, 2)])
    c3 = substitute(example_code, 2)
    assert labels(c3, 0) == sorted([(1, 1), (20, 2), (19, 3), (5, 1), (4, 2), (3, 3)])
    assert substitute(example_code, 0) == example_code


def test_substitute_rejects_vector_input(example_code):
    with pytest.raises(ValueError, match="not scalar"):
        substitute(substitute(example_code, 1), 1)


def test_find_sum_examples(example_code):
    p = one_sided_problem(20, 4)
    w = find_sum(example_code, p, 1)
    assert w.symbols() == [0] and w.offsets == (4,)
    w = find_sum(example_code, p, 17)
    assert w.symbols() == [0, 4, 8, 12] and w.offsets == (4,)
    parity = LinearCode.scalar(5, [[1, 2, 3, 4, 5]])
    w = find_sum(parity, one_sided_problem(5, 4), 3)
    assert w.coeffs == 1 and w.offsets == (1, 2, 3, 4)


def test_find_sum_undecodable(example_code):
    with pytest.raises(UndecodableError, match="undecodable receiver"):
        find_sum(example_code.drop_row(15), one_sided_problem(20, 4), 16)


def test_schedule_steps_k1(example_code):
    s = build_schedule(example_code, 1, one_sided_problem(20, 4))
    step1, step2 = s.receiver(1)
    assert step1.sum_index == 2 and step1.recovers == (1, 2) and step1.cancel == ()
    assert step2.sum_index == 1 and step2.recovers == (1, 1) and step2.cancel == ()


def test_schedule_u0_is_scalar_decoding(example_code):
    p = one_sided_problem(20, 4)
    s = build_schedule(example_code, 0, p)
    for k in range(1, 21):
        (step,) = s.receiver(k)
        assert step.sum_index == k and step.recovers == (k, 1)
        assert step.witness == find_sum(example_code, p, k)


def test_schedule_json_roundtrip(example_code):
    s = build_schedule(example_code, 2, one_sided_problem(20, 4))
    back = DecodingSchedule.from_dict(json.loads(s.to_json()))
    assert back.to_json() == s.to_json()
    step = json.loads(s.to_json())["receivers"][0]["steps"][0]
    assert {"sum_index", "coeffs", "cancel", "recovers"} <= set(step)


def test_cancellation_appears_when_offsets_small():
    # class 1 with delta=2, U=3: offsets 2 <= U so earlier components must be cancelled
    scalar = build(1, 12, 2)
    s = build_schedule(scalar, 3, one_sided_problem(12, 2))
    assert any(st.cancel for st in s.receiver(1))


def test_encode_examples(example_code):
    c2 = substitute(example_code, 1)
    assert encode(c2, 0) == 0
    e = 1 << c2.column(1, 1)
    word = encode(c2, e)
    expect = sum(1 << r for r in range(c2.length) if (1, 1) in c2.row_labels(r))
    assert word == expect
    a, b = 0b1011 << 7, 0b110011 << 3
    assert encode(c2, a ^ b) == encode(c2, a) ^ encode(c2, b)


def test_decode_receiver7_case1(example_code):
    vec = substitute(example_code, 1)
    sched = build_schedule(example_code, 1, one_sided_problem(20, 4))
    prob = vector_problem(20, 1, 5)
    rng = random.Random(7)
    for _ in range(100):
        msg = rng.getrandbits(40)
        word = encode(vec, msg)
        values = {vec.label(c): msg >> c & 1 for c in range(40)}
        got = decode_with_schedule(sched, word, receiver_side_info(prob, 7, values), 7)
        assert got == (values[(7, 1)], values[(7, 2)])


def test_decode_zero_message(example_code):
    vec, sched = extend(example_code, 2, 6)
    side = receiver_side_info(vector_problem(20, 2, 6), 4, {c: 0 for c in vec.columns()})
    assert decode_with_schedule(sched, 0, side, 4) == (0, 0, 0)


def test_decode_rejects_wrong_length(example_code):
    _, sched = extend(example_code, 1, 5)
    with pytest.raises(ValueError, match="shape"):
        decode_with_schedule(sched, [0] * 3, {}, 1)


def test_interference_detected(monkeypatch):
    # a sum reaching backwards (y_{j-1} + y_j) leaves two own unknowns at step 1
    import vecindex.vector as vmod

    scalar = LinearCode.scalar(7, [[i, i + 1] for i in range(1, 7)])

    def backwards(code, problem, k, _D=None):
        return vmod.SumWitness(k, 1 << ((k - 2) % 6), ())

    monkeypatch.setattr(vmod, "find_sum", backwards)
    with pytest.raises(InterferenceError, match="interference"):
        build_schedule(scalar, 1, one_sided_problem(7, 2))


def test_mirroring_handles_u_above_d(example_code):
    # seed delta=4 reached with D=0, U=4 (U > D)
    vec, sched = extend(example_code, 4, 0)
    assert vec.t == 1 and sched.U == 4 and sched.D == 0
    assert all(np_decodable(vector_problem(20, 4, 0), vec))
    assert roundtrip(vec, sched, 64)
    scalar = build(1, 20, 2)
    vec, sched = extend(scalar, 3, 1)  # U=3 > D=1, t=2
    assert vec.t == 2
    assert all(np_decodable(vector_problem(20, 3, 1), vec))
    assert roundtrip(vec, sched, 64)


def test_oracle_and_schedule_agree(example_code):
    for U in range(4):
        vec, sched = extend(example_code, U, 4 + U)
        prob = extended_problem(20, U, 4)
        assert all(np_decodable(prob, vec))
        assert roundtrip(vec, sched, 100, seed=U)


# -- properties ---------------------------------------------------------------

INSTANCES = [p for p in iter_instances(24)]


@settings(max_examples=120, deadline=None, derandomize=True)
@given(st.sampled_from(INSTANCES), st.integers(0, 3))
def test_schedule_invariants(p, U):
    if U + (p.delta + U) >= p.K:
        return
    scalar = construct(p)
    vec = substitute(scalar, U)
    assert vec.length == scalar.length and all(vec.rows)
    assert len(set(vec.rows)) == len(set(scalar.rows))
    sched = build_schedule(scalar, U, one_sided_problem(p.K, p.delta))
    prob = extended_problem(p.K, U, p.delta)
    for k in range(1, p.K + 1):
        known = set()
        side = {(a, i) for a in prob.antidotes[k - 1] for i in range(1, U + 2)}
        for l, step in enumerate(sched.receiver(k), start=1):
            assert step.recovers == (k, U + 2 - l)
            # topological soundness
            assert all(c[0] == k and c[1] in known for c in step.cancel)
            # one unknown per step: the sum minus side info and known own parts
            row = vec.symbols.combine(step.witness.coeffs)
            left = {vec.label(c) for c in range(vec.symbols.cols) if row >> c & 1}
            left -= side
            left -= {(k, i) for i in known}
            assert left == {step.recovers}
            assert set(step.cancel) == {c for c in vec.columns() if row >> vec.column(*c) & 1 and c[0] == k} - {step.recovers}
            known.add(step.recovers[1])
        assert known == set(range(1, U + 2))


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.sampled_from(INSTANCES), st.integers(0, 3), st.integers(0, 2**31))
def test_roundtrip_property(p, U, seed):
    if U + (p.delta + U) >= p.K:
        return
    scalar = construct(p)
    vec, sched = extend(scalar, U, p.delta + U)
    assert roundtrip(vec, sched, 100, seed)


def test_offsets_within_window_all_small_instances():
    for p in INSTANCES:
        scalar = construct(p)
        prob = one_sided_problem(p.K, p.delta)
        for k in range(1, p.K + 1):
            w = find_sum(scalar, prob, k)
            assert all(1 <= a <= p.delta for a in w.offsets)


def test_rate_matches_capacity_below_boundary():
    from vecindex.constructions import capacity

    for p in INSTANCES:
        for U in range(4):
            if 2 * U + p.delta <= p.K - 2:
                vec = substitute(construct(p), U)
                assert vec.rate == capacity(p.K, U, p.delta + U), (p, U)


def test_boundary_instance_decodes_below_capacity_one():
    # 2U + delta = K - 1: every other message is side information, capacity 1
    from vecindex.constructions import capacity

    scalar = build(1, 10, 5)  # delta=5, U=2 gives U + D = 2 + 7 = K - 1
    vec, sched = extend(scalar, 2, 7)
    assert capacity(10, 2, 7) == 1
    assert vec.rate == Fraction(3, 5)
    assert all(np_decodable(vector_problem(10, 2, 7), vec))
    assert roundtrip(vec, sched, 100)
