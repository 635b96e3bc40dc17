"""
Quadruples through a family of elliptic curves
==============================================

Grouping quadruples by their product t = abcd puts each group on the curve
E_t : V^2 = U^3 - 2(t-2) U^2 + t^2 U, which carries the point R = (t, 2t) of
order 4. The number of quadruples with product t depends only on #E_t(F_p)
and a few 2-power torsion flags, so the whole count is a sum over fibers.
"""

from diophfp.ec_fibers import (
    classify_fiber,
    make_fiber,
    n4_via_fibers,
    quadruple_to_triple,
    t_sets,
    w1,
    w_bruteforce,
)
from diophfp.ff_core import prime_context

# %%
# The unique quadruple mod 11 has product 9; fiber 9 carries W = 1.
p = 11
for t in range(2, p):
    r = classify_fiber(make_fiber(p, t))
    print(t, r.P, r.case, r.W)
print("brute buckets:", w_bruteforce(prime_context(p)).w_values)

# %%
# The quadruple maps to three points of E_9.
f, Q1, Q2, Q3 = quadruple_to_triple(11, (1, 3, 8, 10))
print(f.t, Q1, Q2, Q3)

# %%
# Quadruples with abcd = 1 sit over the singular fiber and have their own formula.
print("W(1) at 17:", w1(17))

# %%
# Summing the fibers reproduces the quadruple count.
for q in (101, 151, 199):
    print(q, n4_via_fibers(prime_context(q)))

# %%
# Membership sets T0..T5 at p = 13.
print(t_sets(prime_context(13)))
