from fractions import Fraction

import pytest

from diophfp.ec_fibers import fiber_table, t_sets
from diophfp.ff_core import odd_primes, prime_context
from diophfp.fiber_identities import (
    COVERS,
    aggregate_24w,
    conductor32_point_count,
    cover_degree_relations,
    cover_trace,
    cover_trace_prediction,
    point_sums,
    t1_sums,
    t2_sums,
    t3_sums,
    t5_t4_counts,
)
from diophfp.modforms import coeff, coeff_bundle

PRIMES = odd_primes(199)


def observed(p):
    table = fiber_table(prime_context(p))
    return table, {r.t: r.P for r in table}, t_sets(prime_context(p), table)


def test_point_sums_at_5():
    assert point_sums(5, -14) == (20, 144, 1088)
    _, P, _ = observed(5)
    vals = list(P.values())
    assert (sum(vals), sum(v * v for v in vals), sum(v**3 for v in vals)) == (20, 144, 1088)


@pytest.mark.parametrize("p", PRIMES)
def test_identities(p):
    table, P, ts = observed(p)
    b = coeff_bundle(p)
    vals = list(P.values())
    assert point_sums(p, b.e) == (sum(vals), sum(v * v for v in vals), sum(v**3 for v in vals))

    def s(T, k=1):
        return sum(P[t] ** k for t in T)

    assert t1_sums(p, b.d) == (len(ts.T1), s(ts.T1), s(ts.T1, 2))
    assert t2_sums(p, b.b, b.c) == (len(ts.T2), s(ts.T2))
    assert t3_sums(p, b.b, b.c) == (len(ts.T3), s(ts.T3))
    assert t5_t4_counts(p, b.a) == (len(ts.T5), len(ts.T4))
    for name, (lhs, rhs) in cover_degree_relations(p, b.a, ts).items():
        assert lhs == rhs, name
    assert aggregate_24w(p, table) == 24 * sum(r.W for r in table)


def test_t_set_formula_examples():
    assert t2_sums(5, 0, -6)[0] == 0
    assert t3_sums(5, 0, -6)[0] == 1
    assert t1_sums(5, -2)[0] == 1
    assert t5_t4_counts(5, -2) == (0, 0)
    assert t5_t4_counts(13, 6) == (0, 2)
    assert t2_sums(17, coeff("f2", 17), coeff("f3", 17))[0] == 1


def test_nonintegral_prediction_raises():
    with pytest.raises(ArithmeticError):
        t1_sums(5, -1)


def test_aggregate_returns_exact_fraction():
    table, _, _ = observed(13)
    assert isinstance(aggregate_24w(13, table), Fraction)


@pytest.mark.parametrize("p", PRIMES)
def test_cover_traces(p):
    _, P, _ = observed(p)
    b = coeff_bundle(p)
    for cover in COVERS:
        assert cover_trace(p, cover, P) == cover_trace_prediction(cover, b.b, b.c)


def test_conductor32_curve():
    for p in odd_primes(3000):
        assert conductor32_point_count(p) == p + 1 - coeff("f1", p)
