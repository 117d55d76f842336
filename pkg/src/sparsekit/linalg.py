"""Exact determinant and permanent kernels for square 0/1 matrices.

Rows are stored as Python ints used as bit-vectors: bit ``j`` of ``rows[i]``
is the entry in row ``i``, column ``j``.  Everything here is exact integer
arithmetic.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitMatrix",
    "OrderTooLarge",
    "InvalidSplit",
    "MalformedInput",
    "determinant",
    "determinant_cofactor",
    "permanent",
    "permanent_naive",
    "permanent_ryser",
    "permanent_expand",
    "clear_memo",
    "line_split",
    "parse_text",
    "format_text",
]

NAIVE_MAX_ORDER = 10


class OrderTooLarge(ValueError):
    pass


class InvalidSplit(ValueError):
    pass


class MalformedInput(ValueError):
    """Bad bi-adjacency text; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _popcount(x: int) -> int:
    return x.bit_count()


@dataclass(frozen=True)
class BitMatrix:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("order must be non-negative")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for r in self.rows:
            if r < 0 or r & ~full:
                raise ValueError("row has bits outside the matrix")

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]]) -> "BitMatrix":
        n = len(data)
        rows = []
        for row in data:
            if len(row) != n:
                raise ValueError("matrix is not square")
            bits = 0
            for j, a in enumerate(row):
                if a not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                if a:
                    bits |= 1 << j
            rows.append(bits)
        return cls(n, tuple(rows))

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "BitMatrix":
        return cls.from_lists([[int(c) for c in s] for s in lines])

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def ones(cls, n: int) -> "BitMatrix":
        return cls(n, tuple((1 << n) - 1 for _ in range(n)))

    @classmethod
    def block_diagonal(cls, *blocks: "BitMatrix") -> "BitMatrix":
        rows = []
        offset = 0
        for b in blocks:
            rows.extend(r << offset for r in b.rows)
            offset += b.n
        return cls(offset, tuple(rows))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.int64).reshape(self.n, self.n)

    def ones_count(self) -> int:
        return sum(_popcount(r) for r in self.rows)

    def excess(self) -> int:
        """Nonzero count minus order (the ``k`` of the sparse bounds)."""
        return self.ones_count() - self.n

    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            j = r
            while j:
                low = j & -j
                cols[low.bit_length() - 1] |= 1 << i
                j ^= low
        return tuple(cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.n, self.columns())

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "BitMatrix":
        """Row ``i`` of the result is row ``row_perm[i]``; same for columns."""
        out = []
        for i in range(self.n):
            r = self.rows[row_perm[i]]
            bits = 0
            for j in range(self.n):
                if (r >> col_perm[j]) & 1:
                    bits |= 1 << j
            out.append(bits)
        return BitMatrix(self.n, tuple(out))

    def minor(self, row: int, col: int) -> "BitMatrix":
        return self.delete(rows=(row,), cols=(col,))

    def delete(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> "BitMatrix":
        rows = set(rows)
        cols = set(cols)
        if len(rows) != len(cols):
            raise ValueError("must delete as many rows as columns")
        keep_cols = [j for j in range(self.n) if j not in cols]
        out = []
        for i, r in enumerate(self.rows):
            if i in rows:
                continue
            out.append(_compress(r, keep_cols))
        return BitMatrix(len(keep_cols), tuple(out))

    def with_entry(self, i: int, j: int, value: int) -> "BitMatrix":
        rows = list(self.rows)
        if value:
            rows[i] |= 1 << j
        else:
            rows[i] &= ~(1 << j)
        return BitMatrix(self.n, tuple(rows))

    def __str__(self) -> str:
        return format_text(self).rstrip("\n")


def _compress(r: int, keep: Sequence[int]) -> int:
    bits = 0
    for new, old in enumerate(keep):
        if (r >> old) & 1:
            bits |= 1 << new
    return bits


# ---------------------------------------------------------------------------
# text format


def format_text(m: BitMatrix) -> str:
    lines = [str(m.n)]
    for r in m.rows:
        lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(m.n)))
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> BitMatrix:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MalformedInput("empty input", 1, 1)
    head = lines[0].strip()
    if not head.isdigit():
        raise MalformedInput(f"expected order, got {head!r}", 1, 1)
    n = int(head)
    body = lines[1:]
    if len(body) != n:
        raise MalformedInput(f"expected {n} rows, found {len(body)}", len(lines) + 1 if len(body) < n else n + 2, 1)
    rows = []
    for i, line in enumerate(body):
        s = line.rstrip("\r")
        if len(s) != n:
            raise MalformedInput(f"row has {len(s)} characters, expected {n}", i + 2, min(len(s), n) + 1)
        bits = 0
        for j, c in enumerate(s):
            if c == "1":
                bits |= 1 << j
            elif c != "0":
                raise MalformedInput(f"unexpected character {c!r}", i + 2, j + 1)
        rows.append(bits)
    return BitMatrix(n, tuple(rows))


# ---------------------------------------------------------------------------
# determinants


def determinant(m: BitMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination.

    Full pivoting: the pivot is a nonzero entry of smallest absolute value in
    the remaining block, which keeps intermediate integers small.
    """
    n = m.n
    if n == 0:
        return 1
    a = m.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            row = a[i]
            for j in range(k, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            return 0
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                # exact division is the Bareiss invariant
                ri[j] = (piv * ri[j] - aik * rk[j]) // prev
            ri[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def determinant_cofactor(m: BitMatrix) -> int:
    """Laplace expansion along the first row, memoized on column subsets.

    Independent oracle for :func:`determinant`; exponential in ``n``.
    """
    n = m.n
    rows = m.rows
    memo: dict[int, int] = {}

    def rec(i: int, cols: int) -> int:
        if i == n:
            return 1
        if cols in memo:
            return memo[cols]
        total = 0
        sign = 1
        for j in range(n):
            if not (cols >> j) & 1:
                continue
            if (rows[i] >> j) & 1:
                total += sign * rec(i + 1, cols & ~(1 << j))
            sign = -sign
        memo[cols] = total
        return total

    return rec(0, (1 << n) - 1)


# ---------------------------------------------------------------------------
# permanents


def permanent_naive(m: BitMatrix) -> int:
    """Sum over all permutations.  Reference oracle, ``n <= 10`` only."""
    n = m.n
    if n > NAIVE_MAX_ORDER:
        raise OrderTooLarge(f"permanent_naive supports n <= {NAIVE_MAX_ORDER}, got {n}")
    rows = m.rows
    total = 0
    for p in itertools.permutations(range(n)):
        if all((rows[i] >> p[i]) & 1 for i in range(n)):
            total += 1
    return total


def _ryser_gray(rows: Sequence[int], n: int) -> int:
    # Nijenhuis-Wilf form scaled by 2 so that every quantity is an integer:
    # perm = (-1)^(n-1) * 2 * sum_S (-1)^|S| prod_i (x_i + sum_{j in S} a_ij)
    # with x_i = a_i,n-1 - rowsum_i / 2.  The last column is never toggled.
    cols = [[(rows[i] >> j) & 1 for i in range(n)] for j in range(n)]
    acc = [2 * cols[n - 1][i] - rows[i].bit_count() for i in range(n)]
    total = math.prod(acc)
    sign = 1
    gray = 0
    for g in range(1, 1 << (n - 1)):
        j = (g & -g).bit_length() - 1
        gray ^= 1 << j
        colj = cols[j]
        if (gray >> j) & 1:
            for i in range(n):
                if colj[i]:
                    acc[i] += 2
        else:
            for i in range(n):
                if colj[i]:
                    acc[i] -= 2
        sign = -sign
        p = 1
        for v in acc:
            if not v:
                p = 0
                break
            p *= v
        if p:
            total += sign * p
    # total carries a factor 2^n from the doubled row terms
    result = (-1) ** (n - 1) * 2 * total
    assert result % (1 << n) == 0
    return result >> n


# primes below 2^31 so that products of two residues fit in int64
_CRT_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549)
_NUMPY_MIN_ORDER = 17
_CHUNK_BITS = 13


def _ryser_numpy_mod(a: np.ndarray, p: int) -> int:
    n = a.shape[0]
    m = n - 1
    x = (2 * a[:, n - 1] - a.sum(axis=1)) % p
    total = 0
    low_bits = min(_CHUNK_BITS, m)
    low = np.arange(1 << low_bits, dtype=np.int64)
    low_mask = ((low[:, None] >> np.arange(low_bits)) & 1).astype(np.int64)
    low_sums = (2 * (low_mask @ a[:, :low_bits].T)) % p
    low_sign = np.where(low_mask.sum(axis=1) % 2 == 0, 1, p - 1).astype(np.int64)
    for high in range(1 << (m - low_bits)):
        hi_bits = np.array([(high >> t) & 1 for t in range(m - low_bits)], dtype=np.int64)
        hi_sum = 2 * (a[:, low_bits:m] @ hi_bits) if m > low_bits else 0
        base = (x + hi_sum) % p
        vals = (low_sums + base[None, :]) % p
        prod = vals[:, 0].copy()
        for i in range(1, n):
            prod = (prod * vals[:, i]) % p
        hs = -1 if bin(high).count("1") % 2 else 1
        s = int((prod * low_sign % p).sum() % p)
        total = (total + hs * s) % p
    inv = pow(1 << n, -1, p)
    sgn = 1 if (n - 1) % 2 == 0 else -1
    return (sgn * 2 * total * inv) % p


def _ryser_crt(m: BitMatrix) -> int:
    bound = math.prod(r.bit_count() for r in m.rows)
    if bound == 0:
        return 0
    a = m.to_numpy()
    residues = []
    modulus = 1
    primes = []
    for p in _CRT_PRIMES:
        residues.append(_ryser_numpy_mod(a, p))
        primes.append(p)
        modulus *= p
        if modulus > 2 * bound:
            break
    else:
        return _ryser_gray(m.rows, m.n)
    value = 0
    for r, p in zip(residues, primes):
        q = modulus // p
        value += r * q * pow(q, -1, p)
    return value % modulus


def permanent_ryser(m: BitMatrix) -> int:
    """Ryser inclusion-exclusion with Gray-code ordered column subsets.

    Orders below 17 run the pure integer Gray-code loop.  Larger orders use a
    vectorized evaluation modulo word-sized primes, recombined by CRT with
    enough primes that the modulus exceeds twice the product of row sums (an
    upper bound on the permanent), so the result is still exact.
    """
    n = m.n
    if n == 0:
        return 1
    if any(r == 0 for r in m.rows):
        return 0
    if n >= _NUMPY_MIN_ORDER:
        return _ryser_crt(m)
    return _ryser_gray(m.rows, n)


_memo_local = threading.local()


def _memo() -> dict:
    table = getattr(_memo_local, "table", None)
    if table is None:
        table = _memo_local.table = {}
    return table


def _expand(rows: tuple[int, ...], memo: dict) -> int:
    # rows: remaining rows as bit patterns over the remaining columns (bits of
    # deleted columns are already cleared); the key is the sorted pattern tuple.
    if not rows:
        return 1
    key = tuple(sorted(rows))
    hit = memo.get(key)
    if hit is not None:
        return hit
    if key[0] == 0:
        memo[key] = 0
        return 0
    union = 0
    for r in rows:
        union |= r
    if union.bit_count() < len(rows):
        memo[key] = 0
        return 0
    # split into connected blocks; permanent is multiplicative over them
    blocks = _blocks(key)
    if len(blocks) > 1:
        result = 1
        for b in blocks:
            result *= _expand(b, memo)
            if not result:
                break
    else:
        result = _expand_rows(key)
    memo[key] = result
    return result


def _row_order(rows: tuple[int, ...]) -> list[int]:
    # greedy: next row opens the fewest new columns
    remaining = list(range(len(rows)))
    seen = 0
    order = []
    while remaining:
        best = min(remaining, key=lambda i: ((rows[i] & ~seen).bit_count(), i))
        order.append(best)
        remaining.remove(best)
        seen |= rows[best]
    return order


def _expand_rows(rows: tuple[int, ...]) -> int:
    """Laplace expansion along rows in a fixed order, memoized on the set of
    used columns that later rows can still reach.

    A column whose rows have all been expanded must already be used; it is
    checked and then dropped from the state, which keeps the table small for
    sparse matrices.
    """
    order = _row_order(rows)
    last = {}
    for step, i in enumerate(order):
        r = rows[i]
        while r:
            low = r & -r
            last[low] = step
            r ^= low
    closing = [0] * len(rows)
    for low, step in last.items():
        closing[step] |= low
    states = {0: 1}
    for step, i in enumerate(order):
        bits = []
        r = rows[i]
        while r:
            low = r & -r
            bits.append(low)
            r ^= low
        close = closing[step]
        nxt: dict[int, int] = {}
        for used, cnt in states.items():
            for b in bits:
                if used & b:
                    continue
                u = used | b
                if u & close != close:
                    continue
                u &= ~close
                nxt[u] = nxt.get(u, 0) + cnt
        states = nxt
        if not states:
            return 0
    return states.get(0, 0)


def _blocks(rows: tuple[int, ...]) -> list[tuple[int, ...]]:
    remaining = list(rows)
    out = []
    while remaining:
        group = [remaining.pop()]
        cols = group[0]
        changed = True
        while changed:
            changed = False
            keep = []
            for r in remaining:
                if r & cols:
                    group.append(r)
                    cols |= r
                    changed = True
                else:
                    keep.append(r)
            remaining = keep
        out.append(tuple(group))
    return out


def permanent_expand(m: BitMatrix) -> int:
    """Laplace expansion along rows, memoized on the reachable used columns.

    Connected blocks are evaluated separately and multiplied, each memoized on
    its sorted tuple of row patterns.  The memo table is thread-local.
    """
    return _expand(tuple(m.rows), _memo())


def clear_memo() -> None:
    _memo().clear()


def permanent(m: BitMatrix) -> int:
    """Default permanent: expansion unless more than a third of the entries
    are ones, where Ryser's 2^n sweep is cheaper."""
    if m.n <= 8 or 3 * m.ones_count() <= max(9 * m.n, m.n * m.n):
        return permanent_expand(m)
    return permanent_ryser(m)


# ---------------------------------------------------------------------------
# line splitting


def line_split(m: BitMatrix, line: tuple[str, int], keep: Iterable[int]) -> tuple[BitMatrix, BitMatrix]:
    """Split one line's support: ``perm(m) == perm(b) + perm(c)``.

    ``line`` is ``("row", i)`` or ``("col", j)``.  ``keep`` are positions on
    that line.  ``b`` keeps those positions and leaves the other lines of the
    matrix intact (the complement on the line is zeroed).  ``c`` holds only the
    complementary positions on the line.  Both parts equal ``m`` off the line,
    so linearity in that line gives the identity for the determinant too.
    """
    kind, idx = line
    if kind not in ("row", "col"):
        raise ValueError("line must be ('row', i) or ('col', j)")
    work = m if kind == "row" else m.transpose()
    support = work.rows[idx]
    keep_bits = 0
    for j in keep:
        keep_bits |= 1 << j
    if keep_bits & ~support:
        raise InvalidSplit("chosen positions must lie in the line's support")
    if keep_bits == 0 or keep_bits == support:
        raise InvalidSplit("chosen positions must be a nonempty proper subset of the support")
    rows_b = list(work.rows)
    rows_c = list(work.rows)
    rows_b[idx] = keep_bits
    rows_c[idx] = support & ~keep_bits
    b = BitMatrix(m.n, tuple(rows_b))
    c = BitMatrix(m.n, tuple(rows_c))
    if kind == "col":
        b, c = b.transpose(), c.transpose()
    return b, c
