"""
Permanents of the smallest girth-6 regular graphs
=================================================

The incidence graphs of the projective planes PG(2, q) are the smallest
(q+1)-regular bipartite graphs of girth 6.  Their permanents give growth
constants perm^(1/n) to compare with other regular graphs.
"""

from sparsekit.atlas import conjecture_report

for k in (3, 4, 5):
    r = conjecture_report(k)
    print(f"k={k}: n={r['v_k']:2}  perm={r['perm']:>10}  perm^(1/n)={r['constant_4dp']}")
    for row in r["multiples"]:
        print(f"      {row['copies']} copies: n={row['n']} perm={row['perm']}")
