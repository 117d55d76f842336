"""
Auditing the individual steps
=============================

Each reduction step of the argument is checked on its own: expansion
identities, the parity argument for disconnections and the determinant
witnesses.
"""

from sparsekit.atlas import make
from sparsekit.audit import audit_det_witnesses, audit_disconnection, audit_type2
from sparsekit.claims import CLAIMS, run_claim

# Expansion at a Type II vertex of J.
j = make("j").graph
res = audit_type2(j, (1, "a"))
print("J, Type II at a:", res.value, "=", " + ".join(map(str, res.terms)), " identity:", res.holds)

# A degree-4 vertex u and its neighbour v1 whose removal splits the graph.
g = make("maxdeg4_pair_case4_even").graph
r = audit_disconnection(g, [(0, 0), (1, 0)], "g2-disc")
print("g2-disc:", r.case, r.parity, "sizes", r.sizes, "f", r.f.decimal(4),
      "<= claimed", r.claimed.decimal(4), "| parity-derived", r.derived.decimal(4))

for row in audit_det_witnesses():
    print(f"{row['id']:16} |det|={row['det']} k={row['k']} f={row['f']} below c1: {row['below_c1']}")

print()
for cid in CLAIMS:
    rep = run_claim(cid)
    tag = "vacuous" if rep["vacuous"] else f"{rep['instances']} instances"
    print(f"{cid:18} {'pass' if rep['verdict'] else 'FAIL'}  {tag}")
