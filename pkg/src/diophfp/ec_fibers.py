"""The curve family E_t : V^2 = U^3 - 2(t - 2) U^2 + t^2 U over F_p.

Each E_t (t not 0, 1) carries the 4-torsion point R = (t, 2t) with
2R = (0, 0), and its affine points minus {O, R, 2R, 3R} are in bijection
with the affine points of (x^2 - 1)(y^2 - 1) = t. Diophantine quadruples
with product abcd = t correspond to triples of such points, which is how the
per-fiber count W(t) gets a closed form in P(t) = #E_t(F_p) once the fiber's
2-torsion and 2-divisibility of R are known.

Points are ``(u, v)`` tuples; ``None`` is the point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .dioph import build_graph, iter_cliques
from .ff_core import PrimeContext, prime_context

Point = Optional[tuple[int, int]]
INF: Point = None


class DomainError(ValueError):
    """Input point is not on the curve, or is an excluded point."""


class NonIntegralW(ArithmeticError):
    """A W(t) closed form did not divide exactly (misclassified fiber)."""


class UnclassifiedCase(LookupError):
    """Flag pattern outside the enumerated fiber cases."""


@dataclass(frozen=True)
class Fiber:
    ctx: PrimeContext = field(repr=False)
    t: int

    def __post_init__(self):
        if self.t % self.p in (0, 1):
            raise DomainError("t = 0 and t = 1 give singular fibers")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def A(self) -> int:
        return (-2 * (self.t - 2)) % self.p

    @property
    def B(self) -> int:
        return self.t * self.t % self.p

    @property
    def R(self) -> Point:
        return (self.t % self.p, 2 * self.t % self.p)

    def rhs(self, u: int) -> int:
        return (u * (u * u + self.A * u + self.B)) % self.p

    def contains(self, pt: Point) -> bool:
        if pt is None:
            return True
        u, v = pt
        return (v * v - self.rhs(u)) % self.p == 0


def make_fiber(p: int, t: int) -> Fiber:
    return Fiber(prime_context(p), t % p)


# group law -----------------------------------------------------------------

def ec_neg(f: Fiber, P: Point) -> Point:
    if P is None:
        return None
    return (P[0], -P[1] % f.p)


def ec_add(f: Fiber, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    p = f.p
    (u1, v1), (u2, v2) = P, Q
    if u1 == u2:
        if (v1 + v2) % p == 0:
            return None
        lam = (3 * u1 * u1 + 2 * f.A * u1 + f.B) * pow(2 * v1, -1, p) % p
    else:
        lam = (v2 - v1) * pow(u2 - u1, -1, p) % p
    u3 = (lam * lam - f.A - u1 - u2) % p
    return (u3, (lam * (u1 - u3) - v1) % p)


def ec_mul(f: Fiber, k: int, P: Point) -> Point:
    if k < 0:
        return ec_mul(f, -k, ec_neg(f, P))
    acc: Point = None
    while k:
        if k & 1:
            acc = ec_add(f, acc, P)
        P = ec_add(f, P, P)
        k >>= 1
    return acc


def multiples_of_R(f: Fiber) -> list[Point]:
    """[O, R, 2R, 3R]."""
    R = f.R
    R2 = ec_add(f, R, R)
    return [None, R, R2, ec_add(f, R2, R)]


# point counting --------------------------------------------------------------

def _rhs_array(f: Fiber) -> np.ndarray:
    p = f.p
    u = np.arange(p, dtype=np.int64)
    return u * ((u * u % p + f.A * u + f.B) % p) % p


def point_count(f: Fiber) -> int:
    """P(t) = p + 1 + sum_U ((U^3 + A U^2 + B U)/p)."""
    return f.p + 1 + int(f.ctx.chi[_rhs_array(f)].sum(dtype=np.int64))


def group_points(f: Fiber) -> list[Point]:
    """All points: infinity first, then affine points sorted by (u, v)."""
    p = f.p
    rhs = _rhs_array(f)
    roots = f.ctx.root[rhs]
    pts: list[Point] = [None]
    for u in np.nonzero(roots >= 0)[0]:
        r = int(roots[u])
        pts.append((int(u), 0) if r == 0 else (int(u), r))
        if r:
            pts.append((int(u), p - r))
    return pts


def full_two_torsion(f: Fiber) -> bool:
    """All of E_t[2] rational iff 1 - t is a (nonzero) square."""
    return f.ctx.legendre(1 - f.t) == 1


def two_torsion_points(f: Fiber) -> list[Point]:
    """Rational points of order exactly 2."""
    return [(u, 0) for u in range(f.p) if f.rhs(u) == 0]


def halvings_of_R(f: Fiber, points: list[Point] | None = None) -> list[Point]:
    """All rational Q with 2Q = R, by scanning the group."""
    if points is None:
        points = group_points(f)
    R = f.R
    return [Q for Q in points if Q is not None and Q[1] != 0 and ec_add(f, Q, Q) == R]


# fiber classification -------------------------------------------------------

# 64 * 24 W(t) as a polynomial in P = P(t); keys are case labels made of
#   halvable:  "half" (2Q = R has a rational solution) or "nohalf"
#   squares:   for "nohalf" whether x(R) is a square, for "half" whether
#              some halving Q has square x(Q)
#   2-torsion: "cyc" (only 2R) or "full", then p mod 4 where it matters
W_CASES = {
    "nohalf-nonsq-cyc": lambda P: (P - 20) * (P - 12) * (P - 4),
    "nohalf-nonsq-full": lambda P: P * (P - 8) * (P - 16),
    "nohalf-sq-full-p1": lambda P: P * (P - 8) * (P - 16),
    "nohalf-sq-full-p3": lambda P: (P - 8) * (P * P - 16 * P + 192),
    "half-nonsq-cyc": lambda P: (P - 8) * (P * P - 28 * P + 288),
    "half-nonsq-full-p1": lambda P: P * (P * P - 24 * P + 224),
    "half-nonsq-full-p3": lambda P: P**3 - 24 * P * P + 416 * P - 3072,
    "half-sq-cyc": lambda P: (P - 16) * (P * P - 20 * P + 192),
    "half-sq-full-p1": lambda P: (P - 16) * (P * P - 8 * P + 96),
    "half-sq-full-p3": lambda P: P**3 - 24 * P * P + 416 * P - 3072,
}


def case_label(halvable: bool, halving_square: bool, full2: bool, xR_square: bool, p: int) -> str:
    if halvable:
        parts = ["half", "sq" if halving_square else "nonsq"]
    else:
        parts = ["nohalf", "sq" if xR_square else "nonsq"]
    if full2:
        parts += ["full"]
        if parts[:2] != ["nohalf", "nonsq"]:
            parts += ["p1" if p % 4 == 1 else "p3"]
    else:
        parts += ["cyc"]
    label = "-".join(parts)
    if label not in W_CASES:
        raise UnclassifiedCase(label)
    return label


def w_case_formula(label: str, P: int) -> int:
    if P % 4:
        raise ValueError(f"P = {P} is not divisible by 4")
    num = W_CASES[label](P)
    w, r = divmod(num, 64 * 24)
    if r:
        raise NonIntegralW(f"case {label} with P = {P}: {num} / 1536 is not integral")
    return w


@dataclass(frozen=True)
class FiberClassification:
    t: int
    P: int
    full2: bool
    xR_square: bool
    halvable: bool
    halving_square: bool
    case: str  # label from W_CASES, or "unclassified"
    W: int

    @property
    def in_T0(self) -> bool:
        return self.full2 and self.xR_square

    @property
    def in_T1(self) -> bool:
        return self.full2

    @property
    def in_T2(self) -> bool:
        return self.full2 and self.halvable

    @property
    def in_T3(self) -> bool:
        return self.halvable

    @property
    def in_T4(self) -> bool:
        return self.halving_square

    @property
    def in_T5(self) -> bool:
        return self.halving_square and self.full2

    def memberships(self) -> tuple[bool, ...]:
        return (self.in_T0, self.in_T1, self.in_T2, self.in_T3, self.in_T4, self.in_T5)


def classify_fiber(f: Fiber, w_fallback: dict[int, int] | None = None) -> FiberClassification:
    """Compute every flag from the curve itself and W(t) from its case.

    For a flag pattern with no closed form, W falls back to
    ``w_fallback[t]`` (a brute-force bucket table) when supplied and the
    case is reported as "unclassified"; otherwise UnclassifiedCase is raised.
    """
    pts = group_points(f)
    P = len(pts)
    full2 = full_two_torsion(f)
    xR_square = f.ctx.chi_prime(f.t) == 1
    halves = halvings_of_R(f, pts)
    halvable = bool(halves)
    halving_square = any(f.ctx.chi_prime(Q[0]) == 1 for Q in halves)
    try:
        label = case_label(halvable, halving_square, full2, xR_square, f.p)
        W = w_case_formula(label, P)
    except UnclassifiedCase:
        if w_fallback is None:
            raise
        label, W = "unclassified", w_fallback.get(f.t, 0)
    return FiberClassification(f.t, P, full2, xR_square, halvable, halving_square, label, W)


def fiber_table(ctx: PrimeContext, w_fallback: dict[int, int] | None = None) -> list[FiberClassification]:
    """Classification of every nonsingular fiber, ordered by t."""
    return [classify_fiber(Fiber(ctx, t), w_fallback) for t in range(2, ctx.p)]


def w1(p: int) -> int:
    """Number of Diophantine quadruples with abcd = 1."""
    r = p % 8
    if r == 1:
        num = (p - 9) * (p * p - 18 * p + 113)
    elif r == 3:
        num = (p - 3) * (p - 11) * (p - 19)
    elif r == 5:
        num = (p - 5) * (p - 9) * (p - 13)
    else:
        num = (p - 7) * (p - 11) * (p - 15)
    w, rem = divmod(num, 32 * 24)
    if rem:
        raise NonIntegralW(f"W(1) numerator {num} not divisible by 768 at p={p}")
    return w


@dataclass(frozen=True)
class WTable:
    p: int
    w_values: dict[int, int]  # t -> W(t) for t not in {0, 1}; zero buckets omitted
    w1: int

    def total(self) -> int:
        return sum(self.w_values.values()) + self.w1


def w_bruteforce(ctx: PrimeContext) -> WTable:
    """Bucket every Diophantine quadruple by its product."""
    p = ctx.p
    buckets: dict[int, int] = {}
    for a, b, c, d in iter_cliques(build_graph(ctx), 4):
        t = a * b % p * c % p * d % p
        buckets[t] = buckets.get(t, 0) + 1
    one = buckets.pop(1, 0)
    return WTable(p, dict(sorted(buckets.items())), one)


def w1_bruteforce(ctx: PrimeContext) -> int:
    """Quadruples with product 1: the fourth element is forced by the first three."""
    p = ctx.p
    g = build_graph(ctx)
    n = 0
    for a, b, c in iter_cliques(g, 3):
        d = pow(a * b * c, -1, p)
        if d > c and g.rows[a] >> d & g.rows[b] >> d & g.rows[c] >> d & 1:
            n += 1
    return n


def w_table_from_fibers(ctx: PrimeContext, table: list[FiberClassification] | None = None) -> WTable:
    if table is None:
        table = fiber_table(ctx)
    return WTable(ctx.p, {r.t: r.W for r in table if r.W}, w1(ctx.p))


def n4_via_fibers(ctx: PrimeContext, coeffs=None, table: list[FiberClassification] | None = None) -> int:
    """sum_{t != 0,1} W(t) + W(1) from per-fiber closed forms.

    When a CoeffBundle is given, the result is also checked against the
    modular-form count and a mismatch raises ArithmeticError.
    """
    total = w_table_from_fibers(ctx, table).total()
    if coeffs is not None:
        from .dioph import n4_formula

        expected = n4_formula(ctx.p, coeffs.q)
        if expected != total:
            raise ArithmeticError(f"p={ctx.p}: fibers give {total}, modular forms give {expected}")
    return total


# T-sets -----------------------------------------------------------------------

@dataclass(frozen=True)
class TSets:
    T0: frozenset[int]
    T1: frozenset[int]
    T2: frozenset[int]
    T3: frozenset[int]
    T4: frozenset[int]
    T5: frozenset[int]

    def as_tuple(self) -> tuple[frozenset[int], ...]:
        return (self.T0, self.T1, self.T2, self.T3, self.T4, self.T5)


def t_sets(ctx: PrimeContext, table: list[FiberClassification] | None = None) -> TSets:
    if table is None:
        table = fiber_table(ctx)
    sets = [frozenset(r.t for r in table if r.memberships()[i]) for i in range(6)]
    return TSets(*sets)


def t_sets_parametric(ctx: PrimeContext) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """(T1, T2, T3) as images of the level-structure parameter maps:
    u -> 1 - u^2, w -> (w^2 - 1)^2 and s -> 16 s^2 (s-1)^2 (s+1)^2 / (s^2+1)^4.
    """
    p = ctx.p
    T1, T2, T3 = set(), set(), set()
    for x in range(p):
        T1.add((1 - x * x) % p)
        T3.add(pow(x * x - 1, 2, p))
        den = pow(x * x + 1, 4, p)
        if den:
            T2.add(16 * x * x * (x - 1) ** 2 * (x + 1) ** 2 * pow(den, -1, p) % p)
    return tuple(frozenset(s - {0, 1}) for s in (T1, T2, T3))


def involution(t: int, p: int) -> int:
    """t = 1 - u^2  ->  1 - 1/u^2, i.e. t / (t - 1)."""
    return t * pow(t - 1, -1, p) % p


# cusps ------------------------------------------------------------------------

@dataclass(frozen=True)
class CuspCounts:
    c24: int
    c28: int
    c8: int
    c48: int | None  # only for p = 1 mod 4


def cusp_counts(p: int) -> CuspCounts:
    """F_p-rational cusps on X(2,4), X(2,8), X_1(8) and X(4,8)."""
    r = p % 8
    c28 = {1: 10, 3: 4, 5: 6, 7: 8}[r]
    c8 = 6 if r in (1, 7) else 4
    c48 = {1: 16, 5: 8}.get(r)
    return CuspCounts(4, c28, c8, c48)


# correspondence with (x^2 - 1)(y^2 - 1) = t --------------------------------------

def on_dt(p: int, t: int, x: int, y: int) -> bool:
    return ((x * x - 1) * (y * y - 1) - t) % p == 0


def dt_to_et(p: int, t: int, pt: tuple[int, int]) -> Point:
    x, y = pt
    if not on_dt(p, t, x, y):
        raise DomainError(f"({x}, {y}) is not on D_t for t={t}")
    u = (2 * (x * x - 1) * y + 2 * x * x - (2 - t)) % p
    return (u, 2 * u * x % p)


def et_to_dt(f: Fiber, pt: Point) -> tuple[int, int]:
    if not f.contains(pt) or pt in multiples_of_R(f):
        raise DomainError(f"{pt} is not an admissible point of E_t")
    p, t = f.p, f.t
    u, v = pt
    x = v * pow(2 * u, -1, p) % p
    y = (u - 2 * x * x + 2 - t) * pow(2 * (x * x - 1), -1, p) % p
    return (x, y)


def dt_points(p: int, t: int) -> list[tuple[int, int]]:
    """Affine points of (x^2 - 1)(y^2 - 1) = t by a full scan."""
    xs = np.arange(p, dtype=np.int64)
    g = (xs * xs - 1) % p
    prod = (g[:, None] * g[None, :]) % p
    xi, yi = np.nonzero(prod == t % p)
    return [(int(a), int(b)) for a, b in zip(xi, yi)]


def admissible_triple(f: Fiber, Q1: Point, Q2: Point, Q3: Point) -> bool:
    """Whether three points of E_t minus <R> come from a Diophantine quadruple.

    No two points may be related by Qi = +-Qj + kR, and S = Q1 + Q2 + Q3 + R
    must be O, 2R, or have square x-coordinate.
    """
    mult = multiples_of_R(f)
    for Q in (Q1, Q2, Q3):
        if not f.contains(Q) or Q in mult:
            raise DomainError(f"{Q} is excluded or not on E_t")
    for Qi, Qj in combinations((Q1, Q2, Q3), 2):
        for base in (Qj, ec_neg(f, Qj)):
            if any(ec_add(f, base, kR) == Qi for kR in mult):
                return False
    S = ec_add(f, ec_add(f, ec_add(f, Q1, Q2), Q3), f.R)
    if S is None or S == mult[2]:
        return True
    return f.ctx.chi_prime(S[0]) == 1


def quadruple_to_triple(p: int, quad: tuple[int, int, int, int]) -> tuple[Fiber, Point, Point, Point]:
    """Points (t12, t34), (t13, t24), (t14, t23) mapped onto E_t, t = abcd."""
    ctx = prime_context(p)
    a, b, c, d = quad
    r = {}
    for i, j in combinations(range(4), 2):
        s = ctx.root[(quad[i] * quad[j] + 1) % p]
        if s < 0:
            raise DomainError(f"{quad} is not Diophantine mod {p}")
        r[i, j] = int(s)
    t = a * b * c * d % p
    f = Fiber(ctx, t)
    pts = [dt_to_et(p, t, (r[0, 1], r[2, 3])), dt_to_et(p, t, (r[0, 2], r[1, 3])), dt_to_et(p, t, (r[0, 3], r[1, 2]))]
    return f, pts[0], pts[1], pts[2]
