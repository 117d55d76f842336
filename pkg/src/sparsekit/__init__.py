"""Exact permanent and determinant tools for sparse 0/1 matrices and their
bipartite graphs, with certificate auditing and small-case enumeration."""

from .alpha import ALPHA, C1, C2, AlphaExpr, alpha_pow
from .atlas import list_ids, make
from .audit import Certificate, certify, recheck
from .bounds import f_value, verify_theorem
from .enumerate import EnumFilter, enumerate_graphs, exhaustive_verify, extremal_search
from .graph import BipartiteGraph, canonical_form, read_graph
from .linalg import BitMatrix, determinant, permanent

__version__ = "0.1.0"
