"""Shared fixtures and independent oracles.

The oracles here are written against numpy arrays and share no code with
``vecindex.gf2`` so tests do not grade the package with its own answers.
"""

import numpy as np
import pytest

from vecindex.codes import LinearCode


def np_rank(a) -> int:
    """GF(2) rank by plain elimination on a uint8 array."""
    m = np.array(a, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    m = m.copy()
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        m[[r, p]] = m[[p, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        r += 1
        if r == rows:
            break
    return r


def code_array(code: LinearCode):
    return code.symbols.to_array()


def np_decodable(problem, code: LinearCode) -> list[bool]:
    """Per receiver: every wanted component is in span(code rows + antidote unit vectors)."""
    a = np.array(code_array(code), dtype=np.uint8).reshape(code.length, code.K * code.t)
    n = code.K * code.t
    out = []
    for k in range(1, problem.K + 1):
        units = []
        for m in problem.antidotes[k - 1]:
            for i in range(code.t):
                e = np.zeros(n, dtype=np.uint8)
                e[(m - 1) * code.t + i] = 1
                units.append(e)
        base = np.vstack([a] + units) if units else a
        r0 = np_rank(base)
        ok = True
        w = problem.wants[k - 1]
        for i in range(code.t):
            e = np.zeros(n, dtype=np.uint8)
            e[(w - 1) * code.t + i] = 1
            if np_rank(np.vstack([base, e])) != r0:
                ok = False
        out.append(ok)
    return out


@pytest.fixture
def example_code():
    """The 16-symbol class-1 code for K=20, delta=4: y_i + y_{i+4}."""
    return LinearCode.scalar(20, [[i, i + 4] for i in range(1, 17)])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
