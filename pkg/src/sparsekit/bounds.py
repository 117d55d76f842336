"""Bound formulas and exact theorem checks for sparse 0/1 matrices.

Pass/fail decisions only ever use integer or :class:`AlphaExpr` comparisons.
Floats appear in reports for display.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

from .alpha import C1, C2, ONE, AlphaExpr, Ordering, alpha_compare, alpha_pow
from .graph import BipartiteGraph
from .linalg import determinant, permanent

__all__ = [
    "FNormal",
    "PreconditionViolated",
    "OutOfDomain",
    "graph_value",
    "f_value",
    "compare_f",
    "classical_bounds",
    "alpha_below_shitov",
    "bregman_beaten",
    "TheoremCheck",
    "verify_theorem",
    "report_json",
]


class PreconditionViolated(ValueError):
    pass


class OutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class FNormal:
    """The normalized count ``perm * alpha**(-k)`` held as the exact pair."""

    perm: int
    k: int

    def __post_init__(self):
        if self.perm < 0:
            raise ValueError("perm must be non-negative")

    def value(self) -> AlphaExpr:
        return self.perm * alpha_pow(-self.k)

    def __mul__(self, other: "FNormal") -> "FNormal":
        return FNormal(self.perm * other.perm, self.k + other.k)

    def __float__(self) -> float:
        return self.perm * 2.0 ** (-self.k / 3)


def graph_value(g: BipartiteGraph, mode: str = "perm") -> int:
    """perm(g), or |det(g)| for mode 'det'; 0 for an unbalanced graph."""
    if not g.balanced:
        return 0
    m = g.to_biadjacency()
    if mode == "perm":
        return permanent(m)
    if mode == "det":
        return abs(determinant(m))
    raise ValueError(f"mode must be 'det' or 'perm', got {mode!r}")


def f_value(g: BipartiteGraph, mode: str = "perm") -> FNormal:
    if not g.balanced:
        raise PreconditionViolated("f is defined for balanced graphs")
    return FNormal(graph_value(g, mode), g.k())


def compare_f(fv: FNormal, bound) -> Ordering:
    return alpha_compare(fv.value(), bound)


# ---------------------------------------------------------------------------
# classical bounds


def classical_bounds(n: int, k: int, d: Optional[int] = None) -> dict:
    """All cited upper bounds for an n x n 0/1 matrix with n + k ones.

    ``k`` is the excess (ones minus n).  The row-regular form of Ryser's
    inequality needs ``ryser_k = (n + k) / n`` ones per row, an integer in
    ``[1, (n+1)/2]``; entries whose formula does not apply are ``None``.
    ``d`` selects the Bregman bound for d-regular matrices.
    """
    if n <= 0:
        raise OutOfDomain("n must be positive")
    ones = n + k
    if ones < 0 or ones > n * n:
        raise OutOfDomain(f"{ones} ones do not fit an {n}x{n} matrix")
    out: dict = {"n": n, "excess_k": k, "ones": ones}
    # Hadamard with AM-GM over the row sums
    out["hadamard"] = (ones / n) ** (n / 2)
    ryser_k = None
    ryser = None
    if ones % n == 0:
        rk = ones // n
        if 1 <= rk <= (n + 1) / 2 and n > 1:
            ryser_k = rk
            ryser = rk * (rk - rk * (rk - 1) / (n - 1)) ** ((n - 1) / 2)
    out["ryser_k"] = ryser_k
    out["ryser"] = ryser
    out["bruhn_rautenbach"] = 6 ** (n / 6) if ones <= 2 * n else None
    out["shitov"] = 3 ** (k / 4) if k >= 0 else None
    abound = alpha_pow(k)
    out["alpha"] = float(abound)
    out["alpha_exact"] = abound.slack_string()
    if d is not None:
        if d < 1:
            raise OutOfDomain("degree must be positive")
        out["bregman"] = math.factorial(d) ** (n / d)
    else:
        out["bregman"] = None
    return out


def alpha_below_shitov(k: int) -> bool:
    """2^(k/3) <= 3^(k/4), cross-powered to 2^(4k) <= 3^(3k)."""
    if k < 0:
        raise OutOfDomain("k must be non-negative")
    return 2 ** (4 * k) <= 3 ** (3 * k)


def bregman_beaten(d: int) -> bool:
    """2^((d-1)/3) < (d!)^(1/d), cross-powered to 2^((d-1)d) < (d!)^3."""
    return 2 ** ((d - 1) * d) < math.factorial(d) ** 3


# ---------------------------------------------------------------------------
# theorem check


@dataclass(frozen=True)
class TheoremCheck:
    holds: bool
    equality: bool
    value: int
    k: int
    mode: str
    slack: AlphaExpr  # alpha^k - value

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "equality": self.equality,
            "value": self.value,
            "k": self.k,
            "mode": self.mode,
            "slack": self.slack.slack_string(),
            "slack_decimal": self.slack.decimal(4),
            "f_decimal": (self.value * alpha_pow(-self.k)).decimal(4),
        }


def verify_theorem(g: BipartiteGraph, mode: str = "perm") -> TheoremCheck:
    """Check value**3 <= 2**k exactly (value = perm, or |det| for 'det')."""
    if mode == "perm" and not g.is_c4_free():
        raise PreconditionViolated("the permanent bound needs a C4-free graph")
    k = g.k()
    value = graph_value(g, mode)
    lhs = value ** 3
    if k >= 0:
        rhs_num, lhs_num = 2 ** k, lhs
    else:
        rhs_num, lhs_num = 1, lhs * 2 ** (-k)
    holds = lhs_num <= rhs_num
    return TheoremCheck(holds, lhs_num == rhs_num, value, k, mode, alpha_pow(k) - value)


def report_json(g: BipartiteGraph, graph_id: str, mode: str = "perm", d: Optional[int] = None) -> str:
    """The JSON theorem report for one graph."""
    n = g.n
    perm = graph_value(g, "perm")
    det = determinant(g.to_biadjacency())
    verdicts = {}
    slack = None
    if g.is_c4_free():
        pc = verify_theorem(g, "perm")
        verdicts["perm"] = pc.holds
        if mode == "perm":
            slack = pc.slack
    else:
        verdicts["perm"] = None
    dc = verify_theorem(g, "det")
    verdicts["det"] = dc.holds
    if slack is None:
        slack = dc.slack
    bounds = classical_bounds(n, g.k(), d) if n else {}
    doc = {
        "graph_id": graph_id,
        "n": n,
        "k": g.k(),
        "perm": perm,
        "det": det,
        "bounds": bounds,
        "verdicts": verdicts,
        "slack": slack.slack_string(),
    }
    return json.dumps(doc, sort_keys=True)


# constants used by several callers
CONSTANTS = {"c1": C1, "c2": C2, "one": ONE}
