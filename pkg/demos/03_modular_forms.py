"""
Eta products and their CM closed forms
======================================

The five forms f1..f5 are eta quotients. Their q-expansions are computed
exactly in int64 (an overflow raises instead of wrapping). Four of them have
complex multiplication, so their prime coefficients are also given by
representations p = x^2 + D y^2.
"""

from diophfp.ff_core import cornacchia, odd_primes
from diophfp.modforms import CM_FORMS, cm_coeff, default_cache, hecke_trace_s3

cache = default_cache(10_000)

# %%
# First coefficients of each expansion.
for f in ("f1", "f2", "f3", "f4", "f5"):
    print(f, [cache.coeff(f, n) for n in range(1, 16)])

# %%
# The closed forms. For p = 13: 13 = 3^2 + 2^2 and 13 = 3^2 + 4 * 1^2.
print(cornacchia(13, 1), cornacchia(13, 4))
print({f: (cm_coeff(f, 13), cache.coeff(f, 13)) for f in CM_FORMS})

# %%
# Agreement over every odd prime up to 10^4.
bad = [(f, p) for p in odd_primes(10_000) for f in CM_FORMS if cm_coeff(f, p) != cache.coeff(f, p)]
print("disagreements:", bad)

# %%
# Weight-3 Hecke trace 2b(p) + c(p).
print([hecke_trace_s3(p) for p in odd_primes(40)])
