"""Closed-form predictions for sums of P(t) over fibers and T-sets.

Every function takes the prime and the relevant newform coefficients and
returns exact integers; the observed side comes from
:func:`diophfp.ec_fibers.fiber_table`.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .ec_fibers import FiberClassification, TSets, cusp_counts
from .ff_core import prime_context


def _exact(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{what}: {num}/{den} is not integral")
    return q


def point_sums(p: int, e: int) -> tuple[int, int, int]:
    """Predicted sum of P(t), P(t)^2, P(t)^3 over t != 0, 1."""
    if p % 4 == 1:
        return (p * p - p, p**3 + p * p - p - 1, p**4 + 4 * p**3 - 4 * p - 3 + e)
    return (
        p * p - p - 2,
        p**3 + p * p - 5 * p - 5,
        p**4 + 4 * p**3 - 6 * p * p - 20 * p - 11 + e,
    )


def t2_sums(p: int, b: int, c: int) -> tuple[int, int]:
    """(#T2, sum over T2 of P)."""
    r = p % 8
    count = _exact(p - {1: 9, 3: 3, 5: 5, 7: 7}[r], 8, "#T2")
    lin, const = {1: (-8, 1), 3: (-2, 1), 5: (-4, 1), 7: (-6, -7)}[r]
    return count, _exact(p * p + lin * p + const + 2 * b + c, 8, "sum over T2")


def t3_sums(p: int, b: int, c: int) -> tuple[int, int]:
    """(#T3, sum over T3 of P)."""
    r = p % 8
    count = _exact(3 * p - {1: 11, 3: 9, 5: 7, 7: 13}[r], 8, "#T3")
    lin, const = {1: (-8, 3), 3: (-6, -5), 5: (-4, 3), 7: (-10, -13)}[r]
    return count, _exact(3 * p * p + lin * p + 2 * b - c + const, 8, "sum over T3")


def t1_sums(p: int, d: int) -> tuple[int, int, int]:
    """(#T1, sum over T1 of P, sum over T1 of P^2)."""
    if p % 4 == 1:
        return (p - 3) // 2, (p - 1) ** 2 // 2, _exact(p**3 + 1 - d, 2, "sum P^2 over T1")
    return (p - 3) // 2, (p * p - 2 * p - 3) // 2, _exact(p**3 - 8 * p - 7 - d, 2, "sum P^2 over T1")


def t5_t4_counts(p: int, a: int) -> tuple[int, int]:
    """(#T5, #T4)."""
    r = p % 8
    if r == 1:
        return _exact(p - a - 15, 16, "#T5"), _exact(3 * p + a - 21, 16, "#T4")
    if r == 5:
        return _exact(p - a - 7, 16, "#T5"), _exact(3 * p + a - 13, 16, "#T4")
    if r == 3:
        return (p - 3) // 8, (p - 3) // 4
    return (p - 7) // 8, (p - 7) // 4


def cover_degree_relations(p: int, a: int, ts: TSets) -> dict[str, tuple[int, int]]:
    """Non-cuspidal points of each modular curve against T-set sizes.

    Returns name -> (lhs, rhs); the two sides must agree. The X(4,8) rows use
    #X(4,8)(F_p) = p + 1 - a(p) and apply to p = 1 mod 4 only.
    """
    cc = cusp_counts(p)
    n1, n2, n3, n4, n5 = (len(s) for s in ts.as_tuple()[1:])
    rel = {
        "X(2,4)": (p + 1 - cc.c24, 2 * n1),
        "X(2,8)": (p + 1 - cc.c28, 8 * n2),
        "X1(8)": (p + 1 - cc.c8, 4 * n2 + 2 * (n3 - n2)),
    }
    if p % 4 == 1:
        rel["X(4,8)"] = (p + 1 - a - cc.c48, 16 * n5)
        rel["X(2,8)->X(2)"] = (p + 1 - cc.c28, 8 * n5 + 4 * (n4 - n5))
    else:
        rel["X(2,8)->X(2)"] = (p + 1 - cc.c28, 4 * n4)
    return rel


def aggregate_24w(p: int, table: list[FiberClassification]) -> Fraction:
    """24 * sum_{t != 0,1} W(t) assembled from P(t) sums over T-sets."""
    F = Fraction
    total = F(0)
    for r in table:
        P = r.P
        total += F(P**3, 64) - F(9 * P * P, 16) + F(23 * P, 4) - 15
        if r.in_T1:
            total += F(3 * P * P, 16) - F(15 * P, 4) + 15
        if r.in_T3:
            total += F(9 * P, 4) - 21
        if p % 4 == 1:
            if r.in_T2:
                total -= F(3 * P, 4) - 21
            total -= 12 * (r.in_T4 + r.in_T5)
        else:
            if r.in_T2:
                total -= F(3 * P, 4) + 3
            if r.in_T0:
                total += 3 * P - 24
            total += 12 * (r.in_T5 - r.in_T4)
    return total


# Level-structure covers of the t-line, as maps on F_p. None marks a pole.
def _g2(x: int, p: int) -> int | None:
    return (1 - x * x) % p


def _g3(x: int, p: int) -> int | None:
    return pow(x * x - 1, 2, p)


def _g4(x: int, p: int) -> int | None:
    den = pow(x * x + 1, 4, p)
    if den == 0:
        return None
    return 16 * x * x * (x - 1) ** 2 * (x + 1) ** 2 * pow(den, -1, p) % p


COVERS = {"X(2,4)": _g2, "X1(8)": _g3, "X(2,8)": _g4}

# Frobenius trace summed over the rational cusps of each cover, by p mod 8.
_CUSP_TRACE = {
    "X(2,4)": {1: 4, 3: 0, 5: 4, 7: 0},
    "X1(8)": {1: 6, 3: 2, 5: 4, 7: 0},
    "X(2,8)": {1: 10, 3: 4, 5: 6, 7: 0},
}


def cover_trace(p: int, cover: str, P_of_t: dict[int, int]) -> int:
    """Trace of Frobenius on H^1 of the universal curve over ``cover``,
    assembled from fiber point counts pulled back along the cover map."""
    g = COVERS[cover]
    s = n = 0
    for x in range(p):
        t = g(x, p)
        if t is None or t in (0, 1):
            continue
        s += P_of_t[t]
        n += 1
    return s - (p + 1) * n - _CUSP_TRACE[cover][p % 8]


def cover_trace_prediction(cover: str, b: int, c: int) -> int:
    """Weight-3 cusp-form traces: none on X(2,4), b(p) on X1(8), 2b + c on X(2,8)."""
    return {"X(2,4)": 0, "X1(8)": b, "X(2,8)": 2 * b + c}[cover]


def conductor32_point_count(p: int) -> int:
    """#C(F_p) for C : y^2 = x^3 - x, a model of X(4,8)."""
    ctx = prime_context(p)
    x = np.arange(p, dtype=np.int64)
    return p + 1 + int(ctx.chi[(x * x % p * x - x) % p].sum(dtype=np.int64))
