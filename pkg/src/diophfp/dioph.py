"""Diophantine graph on F_p^x, exact m-tuple counts and tuple construction.

Vertices are the residues 1..p-1; {a, b} is an edge when ab + 1 is a square
(zero included). Diophantine m-tuples are exactly the m-cliques. Adjacency
rows are Python ints used as bitsets, bit b standing for residue b, so
clique enumeration reduces to AND plus popcount on machine words.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, isqrt
from typing import Iterator, Sequence

import numpy as np

from .ff_core import PrimeContext, prime_context


class NonIntegralCount(ArithmeticError):
    """A closed-form count did not divide exactly."""


class InvalidTuple(ValueError):
    """The supplied set is not a Diophantine tuple in F_p."""


@dataclass(frozen=True)
class DiophGraph:
    ctx: PrimeContext
    rows: tuple[int, ...] = field(repr=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def vertex_mask(self) -> int:
        """Bits 1..p-1 set."""
        return (1 << self.p) - 2

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2


@dataclass(frozen=True)
class TupleCountRecord:
    p: int
    m: int
    count: int
    method: str  # "brute" or "formula"


def _pack(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def build_graph(ctx: PrimeContext) -> DiophGraph:
    p = ctx.p
    xs = np.arange(p, dtype=np.int64)
    rows = [0]
    for a in range(1, p):
        bits = ctx.is_square[(a * xs + 1) % p].copy()
        bits[0] = False
        bits[a] = False
        rows.append(_pack(bits))
    return DiophGraph(ctx, tuple(rows))


def _count_from(rows: Sequence[int], cand: int, depth: int) -> int:
    # cand only ever holds vertices larger than every vertex already chosen
    if depth == 1:
        return cand.bit_count()
    total = 0
    while cand:
        low = cand & -cand
        cand ^= low
        nxt = cand & rows[low.bit_length() - 1]
        if depth == 2:
            total += nxt.bit_count()
        elif nxt:
            total += _count_from(rows, nxt, depth - 1)
    return total


def _count_chunk(args: tuple[tuple[int, ...], int, list[int], int]) -> int:
    rows, mask, firsts, m = args
    total = 0
    for a in firsts:
        above = mask & ~((1 << (a + 1)) - 1)
        total += _count_from(rows, above & rows[a], m - 1)
    return total


def count_tuples(graph: DiophGraph, m: int, workers: int = 1) -> TupleCountRecord:
    """Number of Diophantine m-tuples (m-cliques), each counted once.

    With ``workers > 1`` the outer loop over the smallest element is split
    across processes; the result does not depend on the split.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    p = graph.p
    if m > p - 1:
        return TupleCountRecord(p, m, 0, "brute")
    firsts = list(range(1, p))
    if workers <= 1:
        n = _count_chunk((graph.rows, graph.vertex_mask, firsts, m))
    else:
        chunks = [firsts[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            n = sum(ex.map(_count_chunk, [(graph.rows, graph.vertex_mask, c, m) for c in chunks]))
    return TupleCountRecord(p, m, n, "brute")


def iter_cliques(graph: DiophGraph, m: int) -> Iterator[tuple[int, ...]]:
    """All m-cliques as ascending tuples, in lexicographic order."""
    rows = graph.rows

    def walk(prefix: tuple[int, ...], cand: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == m:
            yield prefix
            return
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            yield from walk(prefix + (v,), cand & rows[v])

    if m >= 1:
        yield from walk((), graph.vertex_mask)


def enumerate_tuples(graph: DiophGraph, m: int, limit: int) -> list[tuple[int, ...]]:
    if m < 2 or limit < 0:
        raise ValueError("need m >= 2 and limit >= 0")
    out = []
    if limit == 0:
        return out
    for c in iter_cliques(graph, m):
        out.append(c)
        if len(out) >= limit:
            break
    return out


def n2_formula(p: int) -> int:
    if p % 4 == 1:
        return (p - 1) * (p - 2) // 4
    return (p * p - 3 * p + 4) // 4


def n3_formula(p: int) -> int:
    if p % 4 == 1:
        return (p - 1) * (p - 3) * (p - 5) // 48
    return (p - 3) * (p * p - 6 * p + 17) // 48


# p^4 - 24p^3 + c2*p^2 + c1*p + c0, keyed by p mod 8
_N4_POLY = {
    1: (206, -650, 477),
    3: (236, -1098, 1761),
    5: (206, -698, 573),
    7: (236, -1050, 1761),
}


def n4_numerator(p: int, q_value: int) -> int:
    c2, c1, c0 = _N4_POLY[p % 8]
    return p**4 - 24 * p**3 + c2 * p * p + c1 * p + c0 + q_value


def n4_formula(p: int, q_value: int) -> int:
    """Quadruple count from the modular-form correction q(p).

    Raises NonIntegralCount when 24*64 does not divide the numerator, which
    means ``q_value`` is inconsistent with p.
    """
    num = n4_numerator(p, q_value)
    n, r = divmod(num, 24 * 64)
    if r:
        raise NonIntegralCount(f"p={p}: numerator {num} not divisible by 1536")
    return n


def formula_count(p: int, m: int, q_value: int | None = None) -> TupleCountRecord:
    if m == 2:
        n = n2_formula(p)
    elif m == 3:
        n = n3_formula(p)
    elif m == 4:
        if q_value is None:
            from .modforms import q_of_p

            q_value = q_of_p(p)
        n = n4_formula(p, q_value)
    else:
        raise ValueError("closed forms exist for m in {2, 3, 4} only")
    return TupleCountRecord(p, m, n, "formula")


def is_diophantine(elems: Sequence[int], ctx: PrimeContext) -> bool:
    """Distinct, nonzero, and every pairwise product plus one is a square."""
    p = ctx.p
    s = [a % p for a in elems]
    if 0 in s or len(set(s)) != len(s):
        return False
    return all(ctx.is_square[(a * b + 1) % p] for a, b in combinations(s, 2))


def greedy_extend(graph: DiophGraph, tup: Sequence[int]) -> int | None:
    """Smallest x outside ``tup`` that keeps the tuple Diophantine."""
    if not is_diophantine(tup, graph.ctx):
        raise InvalidTuple(f"{sorted(tup)} is not Diophantine mod {graph.p}")
    cand = graph.vertex_mask
    for a in tup:
        cand &= graph.rows[a % graph.p]
    if not cand:
        return None
    return (cand & -cand).bit_length() - 1


def theorem_bound(m: int) -> int:
    """Primes above 2^(2m-2) * m^2 are guaranteed a Diophantine m-tuple."""
    return 4 ** (m - 1) * m * m


def construct_tuple(ctx: PrimeContext, m: int, graph: DiophGraph | None = None) -> tuple[int, ...] | None:
    """Greedy construction from the pair {1, 3}.

    Below the guarantee bound a stalled greedy run falls back to a full
    clique search when m <= 4 and p <= 199.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    p = ctx.p
    if graph is None:
        graph = build_graph(ctx)
    found: list[int] | None = None
    if p >= 5:
        found = [1, 3]
        while len(found) < m:
            x = greedy_extend(graph, found)
            if x is None:
                found = None
                break
            found.append(x)
    if found is None and m <= 4 and p <= 199:
        hits = enumerate_tuples(graph, m, 1)
        found = list(hits[0]) if hits else None
    if found is None and p > theorem_bound(m):
        raise RuntimeError(f"greedy construction stalled above the guarantee bound (p={p}, m={m})")
    return tuple(sorted(found)) if found is not None else None


def _sqrt_upper(p: int, bits: int = 32) -> Fraction:
    n = p << (2 * bits)
    r = isqrt(n)
    if r * r != n:
        r += 1
    return Fraction(r, 1 << bits)


def weil_extension_bound(p: int, m: int) -> Fraction:
    """Lower bound on the number of x with ((a_i x + 1)/p) = 1 for all i,
    valid for any Diophantine m-tuple; sqrt(p) is replaced by a rational
    upper bound so the returned value never overstates the bound.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    coef = Fraction(m - 2, 2) + Fraction(1, 2**m)
    return Fraction(p, 2**m) - coef * _sqrt_upper(p) - Fraction(m, 2)


def extension_count(tup: Sequence[int], ctx: PrimeContext) -> int:
    """#{x in F_p : ((a_i x + 1)/p) = +1 for every a_i} (strict residues)."""
    p = ctx.p
    xs = np.arange(p, dtype=np.int64)
    ok = np.ones(p, dtype=bool)
    for a in tup:
        ok &= ctx.chi[(a % p * xs + 1) % p] == 1
    return int(ok.sum())


def reduce_seed_tuple(seed: Sequence[int | Fraction], ctx: PrimeContext) -> tuple[int, ...] | None:
    """Reduce rational entries mod p; None on a zero denominator, a zero
    entry, or a collision. The Diophantine property is not checked here.
    """
    p = ctx.p
    out = []
    for v in seed:
        v = Fraction(v)
        if v.denominator % p == 0:
            return None
        r = v.numerator * pow(v.denominator, -1, p) % p
        if r == 0:
            return None
        out.append(r)
    if len(set(out)) != len(out):
        return None
    return tuple(sorted(out))


F = Fraction
SEED_TUPLES: dict[int, list[tuple]] = {
    2: [(2, 4)],
    3: [(2, 4, 12)],
    4: [(1, 3, 8, 120), (2, 24, 40, 7812)],
    5: [
        (F(5, 16), F(21, 16), 4, F(285, 16), 420),
        (F(1, 5), F(21, 20), F(69, 20), F(25, 4), F(96, 5)),
    ],
    6: [
        (F(221, 1260), F(175, 324), F(203, 180), F(81, 35), F(265, 28), F(1120, 9)),
        (F(377, 1260), F(119, 180), F(297, 140), F(992, 315), F(175, 9), F(2275, 4)),
        (F(5, 36), F(665, 1521), F(5, 4), F(32, 9), F(3213, 676), F(189, 4)),
    ],
}
del F


def seed_tuple_for(p: int, m: int) -> tuple[int, ...] | None:
    """First listed seed m-tuple that reduces to a Diophantine tuple mod p."""
    ctx = prime_context(p)
    for seed in SEED_TUPLES.get(m, []):
        red = reduce_seed_tuple(seed, ctx)
        if red is not None and is_diophantine(red, ctx):
            return red
    return None


def heuristic_scaled_count(m: int, count: int) -> int:
    """m! * 2^C(m,2) * N; the leading behaviour is p^m."""
    return factorial(m) * 2 ** comb(m, 2) * count


def asymptotic_within(p: int, m: int, count: int, const: int = 40) -> bool:
    """|m! 2^C(m,2) N - p^m| <= const * p^(m - 1/2), decided in integers."""
    dev = heuristic_scaled_count(m, count) - p**m
    return dev * dev <= const * const * p ** (2 * m - 1)
