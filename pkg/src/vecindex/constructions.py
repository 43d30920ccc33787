"""Symmetric capacity and the explicit optimal scalar codes for one-sided problems.

Every construction takes ``(K, delta, lam)`` where ``delta`` is the number of
cyclically following messages each receiver knows.  The class ids follow the
ten divisibility conditions under which optimal codes are known; class 4 is
recognised but has no explicit formula here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .codes import LinearCode
from .problem import AntidoteCountError

CLASS_IDS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10)
CONSTRUCTIBLE = (1, 2, 3, 5, 6, 7, 8, 9, 10)
LAMBDA_CLASSES = (5, 6, 7, 8, 9, 10)

CONDITIONS = {
    1: "delta divides K",
    2: "K-delta divides K",
    3: "K/2-delta divides delta",
    4: "delta-K/2 divides K/2",
    5: "delta divides K-lambda and lambda divides delta",
    6: "K-delta divides K-lambda and lambda divides K-delta",
    7: "delta+lambda divides K and lambda divides delta",
    8: "K-delta+lambda divides K and lambda divides K-delta",
    9: "delta divides K+lambda and lambda divides delta",
    10: "K-delta divides K+lambda and lambda divides K-delta",
}


class ClassConditionError(ValueError):
    """The (K, delta, lambda) triple does not satisfy the class condition."""


class LambdaRequiredError(ValueError):
    """Several lambda values are valid and the caller did not pick one."""


def capacity(K: int, U: int, D: int) -> Fraction:
    """Symmetric capacity per message with U antidotes above and D below."""
    if U < 0 or D < 0 or U + D >= K:
        raise AntidoteCountError(f"antidote count: need 0 <= U, D and U+D < K (got U={U}, D={D}, K={K})")
    if U + D == K - 1:
        return Fraction(1)
    lo, hi = min(U, D), max(U, D)
    return Fraction(lo + 1, K + lo - hi)


def _divides(a: int, b: int) -> bool:
    return a > 0 and b % a == 0


def _lambda_ok(cls: int, K: int, d: int, lam: int) -> bool:
    if lam < 1:
        return False
    m = K - d
    if cls == 5:
        return _divides(lam, d) and _divides(d, K - lam) and (K - lam) // d > 1
    if cls == 6:
        return _divides(lam, m) and _divides(m, K - lam)
    if cls == 7:
        return _divides(lam, d) and _divides(d + lam, K)
    if cls == 8:
        return _divides(lam, m) and _divides(m + lam, K)
    if cls == 9:
        return _divides(lam, d) and _divides(d, K + lam) and (K + lam) // d > 2
    if cls == 10:
        # s = m/lam must be at least 2 for the three symbol families to be disjoint
        return _divides(lam, m) and _divides(m, K + lam) and lam < m
    raise ValueError(f"class {cls} takes no lambda")


def _plain_ok(cls: int, K: int, d: int) -> bool:
    if cls == 1:
        return _divides(d, K)
    if cls == 2:
        return _divides(K - d, K)
    if cls == 3:
        return K % 2 == 0 and _divides(K // 2 - d, d)
    if cls == 4:
        return K % 2 == 0 and _divides(d - K // 2, K // 2)
    raise ValueError(f"class {cls} needs lambda")


def valid_lambdas(cls: int, K: int, delta: int) -> list[int]:
    """All lambda values for which the class condition holds (empty for lambda-free classes)."""
    if cls not in LAMBDA_CLASSES:
        return []
    bound = delta if cls in (5, 7, 9) else K - delta
    return [lam for lam in range(1, bound + 1) if _lambda_ok(cls, K, delta, lam)]


def condition_holds(cls: int, K: int, delta: int, lam: Optional[int] = None) -> bool:
    if not 0 < delta < K:
        return False
    if cls in LAMBDA_CLASSES:
        if lam is None:
            return bool(valid_lambdas(cls, K, delta))
        return _lambda_ok(cls, K, delta, lam)
    return _plain_ok(cls, K, delta)


def applicable_classes(K: int, delta: int) -> list[tuple[int, list[int]]]:
    """Classes whose condition holds for (K, delta), each with its valid lambdas.

    Class 4 is included when its condition holds even though it has no
    construction; :func:`construct` rejects it.
    """
    out = []
    if not 0 < delta < K:
        return out
    for cls in CLASS_IDS:
        if cls in LAMBDA_CLASSES:
            lams = valid_lambdas(cls, K, delta)
            if lams:
                out.append((cls, lams))
        elif _plain_ok(cls, K, delta):
            out.append((cls, []))
    return out


@dataclass(frozen=True)
class ConstructionParams:
    """A class id with the (K, delta, lambda) it is instantiated at.

    ``derived`` holds the helper quantities (m, n, p, q, s) of the chosen
    formula, for display only.
    """

    cls: int
    K: int
    delta: int
    lam: Optional[int] = None
    derived: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def make(cls, class_id: int, K: int, delta: int, lam: Optional[int] = None) -> "ConstructionParams":
        if class_id not in CLASS_IDS:
            raise ClassConditionError(f"class condition: unknown class {class_id}")
        if not 0 < delta < K:
            raise ClassConditionError(f"class condition: need 0 < delta < K (delta={delta}, K={K})")
        if class_id in LAMBDA_CLASSES:
            lams = valid_lambdas(class_id, K, delta)
            if lam is None:
                if not lams:
                    raise ClassConditionError(
                        f"class condition: no lambda satisfies '{CONDITIONS[class_id]}' for K={K}, delta={delta}"
                    )
                if len(lams) > 1:
                    raise LambdaRequiredError(
                        f"lambda required: class {class_id} at K={K}, delta={delta} admits lambda in {lams}"
                    )
                lam = lams[0]
            elif lam not in lams:
                raise ClassConditionError(
                    f"class condition: '{CONDITIONS[class_id]}' fails for K={K}, delta={delta}, lambda={lam}"
                )
        else:
            if lam is not None:
                raise ClassConditionError(f"class condition: class {class_id} takes no lambda")
            if not _plain_ok(class_id, K, delta):
                raise ClassConditionError(_plain_failure(class_id, K, delta))
        return cls(class_id, K, delta, lam, _derived(class_id, K, delta, lam))


def _plain_failure(cls: int, K: int, d: int) -> str:
    if cls == 1:
        return f"class condition: {d} does not divide {K}"
    if cls == 2:
        return f"class condition: {K - d} does not divide {K}"
    if cls == 3:
        if K % 2:
            return f"class condition: K={K} is odd"
        return f"class condition: {K // 2 - d} does not divide {d}"
    if K % 2:
        return f"class condition: K={K} is odd"
    return f"class condition: {d - K // 2} does not divide {K // 2}"


def _derived(cls: int, K: int, d: int, lam: Optional[int]) -> dict:
    m = K - d
    if cls == 1:
        return {"n": K // d}
    if cls == 2:
        return {"m": m, "n": K // m}
    if cls == 3:
        mm = K // 2 - d
        return {"m": mm, "n": K // mm, "p": d // mm}
    if cls == 4:
        return {}
    if cls == 5:
        return {"n": (K - lam) // d}
    if cls == 6:
        return {"m": m, "q": (K - lam) // m}
    if cls == 7:
        return {"p": d // lam, "n": K // (d + lam)}
    if cls == 8:
        return {"p": K // (m + lam), "m": m // lam}
    if cls == 9:
        return {"n": (K + lam) // d, "p": d - lam}
    return {"m": m, "p": m - lam, "q": (K + lam) // m, "s": m // lam}


# Each builder returns rows as lists of (possibly unreduced) message indices.

def _class1(K, d, lam):
    n = K // d
    return [[i + (j - 1) * d, i + j * d] for j in range(1, n) for i in range(1, d + 1)]


def _class2(K, d, lam):
    m = K - d
    n = K // m
    return [[i + j * m for j in range(n)] for i in range(1, m + 1)]


def _class3(K, d, lam):
    m = K // 2 - d
    p = d // m
    # windows of p+1 terms with stride m, p+2 windows per residue
    return [[i + (j + r) * m for r in range(p + 1)] for j in range(p + 2) for i in range(1, m + 1)]


def _class5(K, d, lam):
    n = (K - lam) // d
    rows = [[i + (j - 1) * d, i + j * d] for j in range(1, n) for i in range(1, d + 1)]
    for r in range(1, lam + 1):
        rows.append([K - lam + r - t * lam for t in range(d // lam + 1)])
    return rows


def _class6(K, d, lam):
    m = K - d
    q = (K - lam) // m
    return [[i + j * m for j in range(q)] + [q * m + 1 + (i - 1) % lam] for i in range(1, m + 1)]


def _class7(K, d, lam):
    p = d // lam
    jmax = (K - d - lam) // lam
    return [[i + (j + r) * lam for r in range(p + 1)] for j in range(jmax + 1) for i in range(1, lam + 1)]


def _class8(K, d, lam):
    m = K - d
    p = K // (m + lam)
    rows = []
    for i in range(1, m + 1):
        row = []
        for j in range(p):
            row += [i + j * lam + j * m, i + (j + 1) * lam + j * m]
        rows.append(row)
    return rows


def _class9(K, d, lam):
    n = (K + lam) // d
    p = d - lam
    rows = [[i + (j - 1) * d, i + j * d] for j in range(1, n - 1) for i in range(1, d + 1)]
    for ip in range(p):
        rows.append([K - 2 * d + 1 + lam + ip, K - d + 1 + ip, K - lam + 1 + ip % lam])
    return rows


def _class10(K, d, lam):
    m = K - d
    p = m - lam
    q = (K + lam) // m
    s = m // lam
    rows = []
    for k in range(1, lam + 1):
        base = k + (q - 1) * m
        rows.append([k + j * m for j in range(q)] + [base + r * lam for r in range(1, s - 1)])
    for k in range(lam + 1, p + 1):
        rows.append([k + j * m for j in range(q - 1)] + [k + (q - 1) * m - lam])
    for k in range(p + 1, m + 1):
        base = k + (q - 2) * m
        rows.append([k + j * m for j in range(q - 1)] + [base + r * lam for r in range(1, s)])
    return rows


_BUILDERS: dict[int, Callable] = {
    1: _class1,
    2: _class2,
    3: _class3,
    5: _class5,
    6: _class6,
    7: _class7,
    8: _class8,
    9: _class9,
    10: _class10,
}


def construct(params: ConstructionParams) -> LinearCode:
    """Build the scalar code of length K - delta for the given class instance."""
    if params.cls == 4:
        raise ClassConditionError("class condition: class 4 has no explicit construction; import the code from a file")
    K, d, lam = params.K, params.delta, params.lam
    rows = _BUILDERS[params.cls](K, d, lam)
    for row in rows:
        if len({(k - 1) % K for k in row}) != len(row):
            raise AssertionError(f"class {params.cls} formula repeats a message in row {row}")
    name = f"class{params.cls} K={K} delta={d}" + (f" lambda={lam}" if lam is not None else "")
    code = LinearCode.scalar(K, rows, name)
    if code.length != K - d:
        raise AssertionError(f"class {params.cls} produced {code.length} symbols, expected {K - d}")
    return code


def build(class_id: int, K: int, delta: int, lam: Optional[int] = None) -> LinearCode:
    """Shorthand for ``construct(ConstructionParams.make(...))``."""
    return construct(ConstructionParams.make(class_id, K, delta, lam))


def iter_instances(K_max: int, K_min: int = 2, classes=CONSTRUCTIBLE):
    """Yield every constructible (class, K, delta, lambda) with K_min <= K <= K_max."""
    for K in range(K_min, K_max + 1):
        for d in range(1, K):
            for cls in classes:
                if cls == 4:
                    continue
                if cls in LAMBDA_CLASSES:
                    for lam in valid_lambdas(cls, K, d):
                        yield ConstructionParams.make(cls, K, d, lam)
                elif _plain_ok(cls, K, d):
                    yield ConstructionParams.make(cls, K, d)
