"""
Normalized matching counts and the constants
============================================

f(G) = perm(G) * 2^(-k/3) with k = e - n, computed in the field Q(2^(1/3))
so that comparisons against 1, c1 and c2 are decided exactly.
"""

from sparsekit.alpha import C1, C2, alpha_compare, alpha_pow
from sparsekit.atlas import make
from sparsekit.bounds import classical_bounds, f_value, verify_theorem
from sparsekit.graph import cycle

for name, g in [("K2", make("k2").graph), ("C6", cycle(6)), ("J", make("j").graph),
                ("C8", cycle(8)), ("Heawood", make("heawood").graph)]:
    f = f_value(g).value()
    print(f"{name:8} perm={f_value(g).perm:3}  k={g.k():2}  f={f.decimal(4)}"
          f"  vs 1: {alpha_compare(f, 1).name}  vs c1: {alpha_compare(f, C1).name}")

print("c1 =", C1.decimal(6), C1.slack_string())
print("c2 =", C2.decimal(6), C2.slack_string())

# The inequalities the constants are chosen to satisfy.
A = alpha_pow
print("a^-3 + a^-5 < c1:", A(-3) + A(-5) < C1)
print("c2 (a^-1 + a^-5) =", (C2 * (A(-1) + A(-5))).decimal(6), "< 1")
print("a^-4 + 2a^-6 =", (A(-4) + 2 * A(-6)).decimal(6), "< 1")

# One theorem check, and how the bound sits among the classical ones.
chk = verify_theorem(make("heawood").graph)
print("Heawood:", chk.as_dict())
for key, val in classical_bounds(7, 14, d=3).items():
    print(f"  {key:18} {val}")
