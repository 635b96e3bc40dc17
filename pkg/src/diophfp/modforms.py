"""q-expansions of the five eta products behind the quadruple count.

    f1 = eta(4t)^2 eta(8t)^2                          a(n), weight 2, level 32
    f2 = eta(t)^2 eta(2t) eta(4t) eta(8t)^2           b(n), weight 3, level 8
    f3 = eta(4t)^6                                    c(n), weight 3, level 16
    f4 = eta(2t)^4 eta(4t)^4                          d(n), weight 4, level 8
    f5 = eta(t)^4 eta(2t)^2 eta(4t)^4                 e(n), weight 5, level 4

Each product has total sum(scale * exponent) = 24, so the expansion starts
at q^1. Every form except f4 has complex multiplication, and its prime
coefficients have closed forms in terms of p = x^2 + D y^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ff_core import cornacchia, is_prime

DEFAULT_N_MAX = 10_000
_INT64_LIMIT = 2**63 - 1


class ArithmeticOverflow(OverflowError):
    """A series coefficient left the int64 range."""


class OutOfRange(IndexError):
    """Coefficient index beyond the cached expansion order."""


@dataclass(frozen=True)
class EtaQuotient:
    """prod over factors of eta(scale * tau)^exponent."""

    factors: tuple[tuple[int, int], ...]

    @property
    def level_sum(self) -> int:
        return sum(s * e for s, e in self.factors)


ETA_SPECS: dict[str, EtaQuotient] = {
    "f1": EtaQuotient(((4, 2), (8, 2))),
    "f2": EtaQuotient(((1, 2), (2, 1), (4, 1), (8, 2))),
    "f3": EtaQuotient(((4, 6),)),
    "f4": EtaQuotient(((2, 4), (4, 4))),
    "f5": EtaQuotient(((1, 4), (2, 2), (4, 4))),
}
WEIGHTS = {"f1": 2, "f2": 3, "f3": 3, "f4": 4, "f5": 5}
CM_FORMS = ("f1", "f2", "f3", "f5")


@dataclass(frozen=True)
class QExpansion:
    """Coefficients c(1..n_max); ``coeffs[n]`` is c(n) and ``coeffs[0]`` = 0."""

    n_max: int
    coeffs: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise OutOfRange(f"index {n} outside 1..{self.n_max}")
        return int(self.coeffs[n])


def euler_product_series(n_max: int) -> np.ndarray:
    """Coefficients of prod_{n>=1} (1 - q^n) for exponents 0..n_max.

    Pentagonal number theorem: +-1 at k(3k-1)/2, sign (-1)^k.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    out = np.zeros(n_max + 1, dtype=np.int64)
    out[0] = 1
    k = 1
    while k * (3 * k - 1) // 2 <= n_max:
        sign = -1 if k % 2 else 1
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g <= n_max:
                out[g] = sign
        k += 1
    return out


def _times_sparse(series: np.ndarray, terms: list[tuple[int, int]]) -> np.ndarray:
    """series * sum(c * q^shift) truncated, with int64 overflow checks."""
    n = len(series)
    out = np.zeros(n, dtype=np.int64)
    src_max = int(np.abs(series).max())
    bound = 0
    for shift, c in terms:
        if shift >= n:
            continue
        step = src_max * abs(c)
        if bound + step > _INT64_LIMIT:
            bound = int(np.abs(out).max())
            if bound + step > _INT64_LIMIT:
                raise ArithmeticOverflow(f"coefficient bound {bound + step} exceeds int64")
        seg = series[: n - shift]
        if c == 1:
            out[shift:] += seg
        elif c == -1:
            out[shift:] -= seg
        else:
            out[shift:] += c * seg
        bound += step
    return out


def eta_quotient_qexp(spec: EtaQuotient, n_max: int) -> QExpansion:
    """Exact q-expansion of q^(level_sum/24) * prod (1 - q^(s n))^e."""
    if spec.level_sum != 24:
        raise ValueError("expansion implemented for eta quotients with leading term q^1")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    m = n_max - 1  # product needed to q^(n_max - 1)
    series = np.zeros(m + 1, dtype=np.int64)
    series[0] = 1
    for scale, exponent in spec.factors:
        base = euler_product_series(m // scale)
        terms = [(int(i) * scale, int(base[i])) for i in np.nonzero(base)[0]]
        for _ in range(exponent):
            series = _times_sparse(series, terms)
    coeffs = np.zeros(n_max + 1, dtype=np.int64)
    coeffs[1:] = series
    coeffs.setflags(write=False)
    return QExpansion(n_max, coeffs)


class ExpansionCache:
    """Lazily built, then read-only, expansions of f1..f5."""

    def __init__(self, n_max: int = DEFAULT_N_MAX):
        self.n_max = n_max
        self._series: dict[str, QExpansion] = {}

    def get(self, form_id: str) -> QExpansion:
        if form_id not in ETA_SPECS:
            raise KeyError(f"unknown form {form_id!r}")
        if form_id not in self._series:
            self._series[form_id] = eta_quotient_qexp(ETA_SPECS[form_id], self.n_max)
        return self._series[form_id]

    def coeff(self, form_id: str, n: int) -> int:
        if n > self.n_max:
            raise OutOfRange(f"index {n} exceeds cached order {self.n_max}")
        return self.get(form_id)[n]


@lru_cache(maxsize=4)
def default_cache(n_max: int = DEFAULT_N_MAX) -> ExpansionCache:
    return ExpansionCache(n_max)


def _cache_for(p: int, cache: ExpansionCache | None) -> ExpansionCache:
    if cache is not None:
        return cache
    return default_cache(max(DEFAULT_N_MAX, p))


def coeff(form_id: str, p: int, cache: ExpansionCache | None = None) -> int:
    """p-th coefficient of f1..f5 from the eta expansion."""
    if cache is None:
        if p > DEFAULT_N_MAX:
            raise OutOfRange(f"index {p} exceeds cached order {DEFAULT_N_MAX}")
        cache = default_cache()
    return cache.coeff(form_id, p)


def cm_coeff(form_id: str, p: int) -> int:
    """Closed-form prime coefficient of a CM form.

    Sign conventions where the closed forms only fix the value up to sign:
      f1: write p = u^2 + v^2 with v even and u + v = 1 (mod 4); a(p) = 2u.
      f3: c(p) = +2(x^2 - 4y^2) for p = x^2 + 4y^2.
    Both are checked against the eta expansions by the test-suite.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if form_id == "f1":
        if p % 4 == 3:
            return 0
        x, y, _ = cornacchia(p, 1)
        u, v = (y, x) if x % 2 == 0 else (x, y)
        if (u + v) % 4 != 1:
            u = -u
        return 2 * u
    if form_id == "f2":
        if p % 8 in (5, 7):
            return 0
        x, y, _ = cornacchia(p, 2)
        return 2 * (x * x - 2 * y * y)
    if form_id == "f3":
        if p % 4 == 3:
            return 0
        x, y, _ = cornacchia(p, 4)
        return 2 * (x * x - 4 * y * y)
    if form_id == "f5":
        if p % 4 == 3:
            return 0
        x, y, _ = cornacchia(p, 1)
        return 2 * p * p - 16 * x * x * y * y
    raise ValueError(f"{form_id} has no CM closed form")


@dataclass(frozen=True)
class CoeffBundle:
    p: int
    a: int
    b: int
    c: int
    d: int
    e: int

    @property
    def q(self) -> int:
        return self.e - 6 * self.d + 24 * self.b - 24 * self.c


def coeff_bundle(p: int, source: str = "eta", cache: ExpansionCache | None = None) -> CoeffBundle:
    """a..e at p. ``source="cm"`` takes a, b, c, e from the closed forms;
    d always comes from the expansion since f4 has no CM."""
    if source == "eta":
        cache = _cache_for(p, cache)
        a, b, c, e = (cache.coeff(f, p) for f in CM_FORMS)
    elif source == "cm":
        a, b, c, e = (cm_coeff(f, p) for f in CM_FORMS)
    else:
        raise ValueError(f"unknown source {source!r}")
    return CoeffBundle(p, a, b, c, coeff("f4", p, _cache_for(p, cache)), e)


def q_of_p(p: int, source: str = "eta", cache: ExpansionCache | None = None) -> int:
    """q(p) = e - 6d + 24b - 24c.

    ``source="cm+eta"`` computes both routes and raises if they disagree.
    """
    if source == "cm+eta":
        via_eta = coeff_bundle(p, "eta", cache).q
        via_cm = coeff_bundle(p, "cm", cache).q
        if via_eta != via_cm:
            raise ArithmeticError(f"q({p}) disagrees: eta {via_eta}, cm {via_cm}")
        return via_eta
    return coeff_bundle(p, source, cache).q


def hecke_trace_s3(p: int, cache: ExpansionCache | None = None) -> int:
    """Trace of T_p on the 3-dimensional weight-3 space: 2 b(p) + c(p)."""
    cache = _cache_for(p, cache)
    return 2 * cache.coeff("f2", p) + cache.coeff("f3", p)
