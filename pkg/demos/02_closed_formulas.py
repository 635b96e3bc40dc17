"""
Closed formulas for pairs, triples and quadruples
==================================================

Pair and triple counts are quadratic-character sums and have polynomial
closed forms. The quadruple count also needs the prime coefficients of five
modular forms, packed into a single correction q(p).
"""

from diophfp.dioph import build_graph, count_tuples, n2_formula, n3_formula, n4_formula
from diophfp.ff_core import odd_primes, prime_context
from diophfp.modforms import coeff_bundle

# %%
# Formula against brute force for a handful of primes.
print(" p   N2  brute   N3  brute   N4  brute    q(p)")
for p in odd_primes(60, 5):
    g = build_graph(prime_context(p))
    b = coeff_bundle(p)
    row = (n2_formula(p), count_tuples(g, 2).count,
           n3_formula(p), count_tuples(g, 3).count,
           n4_formula(p, b.q), count_tuples(g, 4).count)
    print(f"{p:3d} " + " ".join(f"{v:5d}" for v in row) + f" {b.q:7d}")

# %%
# The quadruple numerator must divide by 1536 exactly; a wrong q(p) is
# caught as a NonIntegralCount rather than silently rounded.
from diophfp.dioph import NonIntegralCount

try:
    n4_formula(11, 601)
except NonIntegralCount as exc:
    print("rejected:", exc)

# %%
# For large p the counts approach p^m / (m! 2^C(m,2)).
from math import comb, factorial

p = 9973
for m, n in ((2, n2_formula(p)), (3, n3_formula(p)), (4, n4_formula(p, coeff_bundle(p).q))):
    print(m, n, round(factorial(m) * 2 ** comb(m, 2) * n / p**m, 5))
