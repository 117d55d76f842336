"""
Exact permanents and determinants
=================================

Three permanent engines and two determinant engines on small 0/1 matrices.
All arithmetic is on Python integers, so every number printed is exact.
"""

import random

from sparsekit.atlas import make
from sparsekit.linalg import (BitMatrix, determinant, determinant_cofactor, line_split,
                              parse_text, permanent_expand, permanent_naive, permanent_ryser)

# A matrix can be read from the plain text format: the order, then one row per line.
m = parse_text("3\n110\n011\n101\n")
print("hexagon:", m.to_lists())
print("perm =", permanent_ryser(m), " det =", determinant(m))

# The Fano plane incidence matrix: permanent and determinant are both 24.
fano = make("fano").graph.to_biadjacency()
print("fano perm:", permanent_naive(fano), permanent_ryser(fano), permanent_expand(fano))
print("fano det: ", determinant(fano), determinant_cofactor(fano))

# Splitting one row's support into two parts splits the permanent additively.
b, c = line_split(fano, ("row", 0), keep=[j for j in range(7) if fano[0, j]][:1])
print("split:", permanent_ryser(b), "+", permanent_ryser(c), "=", permanent_ryser(fano))

# The engines agree on random inputs.
rng = random.Random(1)
for _ in range(200):
    n = rng.randint(1, 7)
    r = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
    assert permanent_naive(r) == permanent_ryser(r) == permanent_expand(r)
    assert determinant(r) == determinant_cofactor(r)
print("200 random matrices: all engines agree")

# Ryser past order 16 runs vectorized modulo primes and recombines exactly.
big = make("pg_incidence(3)").graph.to_biadjacency()
print("PG(2,3) incidence, n = 13: perm =", permanent_ryser(big))
