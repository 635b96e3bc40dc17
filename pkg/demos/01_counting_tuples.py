"""
Counting Diophantine tuples by brute force
==========================================

A set {a_1, ..., a_m} of nonzero residues mod p is Diophantine when every
a_i a_j + 1 is a square (zero counts). Those sets are exactly the m-cliques
of a graph on 1..p-1, so counting them is clique counting.
"""

from diophfp.dioph import build_graph, count_tuples, enumerate_tuples
from diophfp.ff_core import prime_context

# %%
# The graph for p = 11. Each adjacency row is a Python int used as a bitset.
ctx = prime_context(11)
g = build_graph(ctx)
for a in range(1, 11):
    print(a, [b for b in range(1, 11) if g.adjacent(a, b)])

# %%
# Pairs, triples and quadruples. There is exactly one quadruple, the
# classical set {1, 3, 8, 120} reduced mod 11.
for m in (2, 3, 4):
    print(f"m={m}: {count_tuples(g, m).count}")
print(enumerate_tuples(g, 4, limit=5))

# %%
# Ordered descent with AND + popcount makes p = 199 quick, even for m = 4.
g199 = build_graph(prime_context(199))
print("N4(199) =", count_tuples(g199, 4).count)
