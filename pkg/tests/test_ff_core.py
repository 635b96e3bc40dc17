import pytest
from hypothesis import given, strategies as st

from diophfp.ff_core import (
    chi_prime,
    cornacchia,
    is_prime,
    legendre,
    make_context,
    odd_primes,
    prime_context,
    quad_char_sum,
    sqrt_mod,
)

SMALL_PRIMES = odd_primes(199)
primes = st.sampled_from(SMALL_PRIMES)


def test_is_prime_examples():
    assert is_prime(2)
    assert not is_prime(1)
    assert is_prime(7919)
    assert not is_prime(0) and not is_prime(-7)


def test_is_prime_matches_trial_division():
    def trial(n):
        return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))

    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if trial(n)]


def test_is_prime_large_values():
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime((2**31 - 1) * (2**31 + 11))


def test_odd_primes():
    assert odd_primes(20) == [3, 5, 7, 11, 13, 17, 19]
    assert odd_primes(2) == []
    assert odd_primes(30, start=14) == [17, 19, 23, 29]


def test_context_rejects_non_primes():
    for n in (2, 4, 9, 1, 0):
        with pytest.raises(ValueError):
            make_context(n)


def test_legendre_examples():
    ctx = prime_context(7)
    assert legendre(0, ctx) == 0
    assert legendre(2, ctx) == 1
    assert legendre(3, ctx) == -1


def test_chi_prime_examples():
    ctx = prime_context(5)
    assert chi_prime(0, ctx) == 1
    assert chi_prime(4, ctx) == 1
    assert chi_prime(2, ctx) == -1


def test_sqrt_mod_examples():
    ctx = prime_context(13)
    assert sqrt_mod(0, ctx) == 0
    assert sqrt_mod(4, ctx) == 2
    assert sqrt_mod(3, ctx) == 4
    assert sqrt_mod(2, ctx) is None


def test_cornacchia_examples():
    assert cornacchia(5, 4)[:2] == (1, 1)
    assert cornacchia(13, 4)[:2] == (3, 1)
    assert cornacchia(11, 2)[:2] == (3, 1)
    assert cornacchia(7, 4) is None


def test_quad_char_sum_examples():
    assert quad_char_sum(1, 0, 1, prime_context(5)) == -1
    assert quad_char_sum(1, 0, 0, prime_context(7)) == 6
    assert quad_char_sum(2, 1, 3, prime_context(11)) == 1


@given(primes)
def test_square_table_census(p):
    ctx = prime_context(p)
    squares = {x * x % p for x in range(p)}
    assert ctx.is_square.sum() == (p - 1) // 2 + 1
    assert all(bool(ctx.is_square[r]) == (r in squares) for r in range(p))
    assert sum(1 for a in range(1, p) if legendre(a, ctx) == 1) == (p - 1) // 2


@given(primes, st.data())
def test_legendre_multiplicative(p, data):
    ctx = prime_context(p)
    a = data.draw(st.integers(1, p - 1))
    b = data.draw(st.integers(1, p - 1))
    assert legendre(a * b % p, ctx) == legendre(a, ctx) * legendre(b, ctx)


@given(primes, st.data())
def test_sqrt_mod_matches_table(p, data):
    ctx = prime_context(p)
    a = data.draw(st.integers(0, p - 1))
    r = sqrt_mod(a, ctx)
    if ctx.is_square[a]:
        assert r is not None and r * r % p == a and r <= p - r
        assert r == min(x for x in range(p) if x * x % p == a)
    else:
        assert r is None


@given(st.sampled_from(odd_primes(5000)), st.sampled_from([1, 2, 4]))
def test_cornacchia_presence_classes(p, D):
    rep = cornacchia(p, D)
    present = {1: p % 4 == 1, 4: p % 4 == 1, 2: p % 8 in (1, 3)}[D]
    assert (rep is not None) == present
    if rep is not None:
        x, y, d = rep
        assert d == D and x > 0 and y > 0 and x * x + D * y * y == p


@given(primes, st.data())
def test_quad_char_sum_nonzero_discriminant(p, data):
    ctx = prime_context(p)
    alpha = data.draw(st.integers(1, p - 1))
    beta = data.draw(st.integers(0, p - 1))
    gamma = data.draw(st.integers(0, p - 1))
    direct = sum(ctx.legendre((alpha * x * x + beta * x + gamma) % p) for x in range(p))
    assert quad_char_sum(alpha, beta, gamma, ctx) == direct
    if (beta * beta - 4 * alpha * gamma) % p:
        assert direct == -legendre(alpha, ctx)
