from math import gcd, isqrt

import pytest
from hypothesis import given, strategies as st

from diophfp.ff_core import odd_primes
from diophfp.modforms import (
    ArithmeticOverflow,
    CM_FORMS,
    ETA_SPECS,
    EtaQuotient,
    ExpansionCache,
    OutOfRange,
    WEIGHTS,
    cm_coeff,
    coeff,
    coeff_bundle,
    default_cache,
    eta_quotient_qexp,
    euler_product_series,
    hecke_trace_s3,
    q_of_p,
)

PRIMES = odd_primes(10_000)


def naive_eta_product(spec, n_max):
    # oracle: schoolbook product of every (1 - q^(s n)) factor with Python ints
    series = [1] + [0] * (n_max - 1)
    for scale, exponent in spec.factors:
        for _ in range(exponent):
            for n in range(1, n_max):
                shift = scale * n
                if shift >= n_max:
                    break
                for i in range(n_max - 1, shift - 1, -1):
                    series[i] -= series[i - shift]
    return [0] + series  # index = power of q


@pytest.fixture(scope="module")
def cache():
    return default_cache(10_000)


def test_euler_product_examples():
    assert euler_product_series(5).tolist() == [1, -1, -1, 0, 0, 1]
    assert euler_product_series(1).tolist() == [1, -1]
    s = euler_product_series(12)
    assert s[5] == 1 and s[7] == 1 and s[12] == -1
    assert [n for n in range(13) if s[n]] == [0, 1, 2, 5, 7, 12]


def test_eta_specs_have_weight_24():
    assert all(spec.level_sum == 24 for spec in ETA_SPECS.values())
    with pytest.raises(ValueError):
        eta_quotient_qexp(EtaQuotient(((1, 1),)), 10)


@pytest.mark.parametrize("form", sorted(ETA_SPECS))
def test_expansion_matches_naive_product(form):
    n_max = 300
    got = eta_quotient_qexp(ETA_SPECS[form], n_max).coeffs.tolist()
    assert got == naive_eta_product(ETA_SPECS[form], n_max)


def test_expansion_examples():
    f1 = eta_quotient_qexp(ETA_SPECS["f1"], 9)
    # a(9) = a(3)^2 - 3 = -3 for a weight-2 eigenform with a(3) = 0
    assert (f1[1], f1[5], f1[9]) == (1, -2, -3)
    assert all(f1[p] == 0 for p in (2, 3, 7))
    f4 = eta_quotient_qexp(ETA_SPECS["f4"], 7)
    assert (f4[5], f4[7]) == (-2, 24)
    assert eta_quotient_qexp(ETA_SPECS["f5"], 5)[5] == -14


def test_out_of_range():
    f = eta_quotient_qexp(ETA_SPECS["f1"], 9)
    with pytest.raises(OutOfRange):
        f[10]
    with pytest.raises(OutOfRange):
        f[0]
    with pytest.raises(OutOfRange):
        ExpansionCache(50).coeff("f1", 51)


def test_overflow_is_detected_not_wrapped():
    # the discriminant form eta(t)^24 grows like n^(11/2); int64 cannot hold it
    delta = EtaQuotient(((1, 24),))
    assert eta_quotient_qexp(delta, 4).coeffs.tolist()[1:] == [1, -24, 252, -1472]
    with pytest.raises(ArithmeticOverflow):
        eta_quotient_qexp(delta, 10_000)


def test_coefficient_examples(cache):
    assert coeff("f2", 3) == -2
    assert coeff("f3", 5) == -6
    assert coeff("f1", 7) == 0
    assert [coeff(f, 5) for f in ("f1", "f2", "f3", "f4", "f5")] == [-2, 0, -6, -2, -14]
    assert coeff("f4", 7) == 24


def test_cm_examples():
    assert cm_coeff("f5", 5) == -14
    assert cm_coeff("f2", 11) == 14
    assert cm_coeff("f1", 13) == 6
    with pytest.raises(ValueError):
        cm_coeff("f4", 5)
    with pytest.raises(ValueError):
        cm_coeff("f1", 9)


def test_q_examples():
    assert q_of_p(5) == 142
    assert q_of_p(7) == -144
    assert q_of_p(11) == 600
    assert q_of_p(11, "cm+eta") == 600
    b = coeff_bundle(11)
    assert (b.a, b.b, b.c, b.d, b.e) == (0, 14, 0, -44, 0)


def test_hecke_trace_examples():
    assert hecke_trace_s3(5) == -6
    assert hecke_trace_s3(3) == -4
    assert hecke_trace_s3(7) == 0


def test_leading_coefficient(cache):
    assert all(cache.coeff(f, 1) == 1 for f in ETA_SPECS)


def test_cm_agrees_with_eta_everywhere(cache):
    bad = [(f, p) for p in PRIMES for f in CM_FORMS if cm_coeff(f, p) != cache.coeff(f, p)]
    assert bad == []


def test_vanishing_classes(cache):
    for p in PRIMES:
        if p % 4 == 3:
            assert cache.coeff("f1", p) == cache.coeff("f3", p) == cache.coeff("f5", p) == 0
        if p % 8 in (5, 7):
            assert cache.coeff("f2", p) == 0


def test_deligne_bounds(cache):
    for p in PRIMES:
        b = coeff_bundle(p, cache=cache)
        assert b.a * b.a <= 4 * p
        assert abs(b.b) <= 2 * p and abs(b.c) <= 2 * p
        assert b.d * b.d <= 4 * p**3
        assert abs(b.e) <= 2 * p * p


@pytest.mark.parametrize("form", ["f1", "f4"])
def test_prime_square_recursion(cache, form):
    k = WEIGHTS[form]
    for p in odd_primes(97):
        c = cache.coeff(form, p)
        assert cache.coeff(form, p * p) == c * c - p ** (k - 1)


@given(st.sampled_from(sorted(ETA_SPECS)), st.integers(2, 100), st.integers(2, 100))
def test_multiplicativity(form, m, n):
    c = default_cache(10_000)
    if gcd(m, n) == 1:
        assert c.coeff(form, m * n) == c.coeff(form, m) * c.coeff(form, n)


def test_f1_sign_rule_is_forced():
    # the opposite sign disagrees with the expansion at the very first split prime
    assert -cm_coeff("f1", 5) != coeff("f1", 5)


def test_f3_sign_rule_is_forced():
    assert -cm_coeff("f3", 5) != coeff("f3", 5)
    x, y = 1, 1  # 5 = 1 + 4
    assert cm_coeff("f3", 5) == 2 * (x * x - 4 * y * y)


def test_q_consistency(cache):
    for p in PRIMES[:300]:
        b = coeff_bundle(p, cache=cache)
        assert q_of_p(p, cache=cache) == b.e - 6 * b.d + 24 * b.b - 24 * b.c
        assert coeff_bundle(p, "cm", cache) == b


def test_large_prime_builds_bigger_cache():
    p = 10007
    assert cm_coeff("f1", p) == coeff_bundle(p).a
    assert isqrt(p) ** 2 < p
