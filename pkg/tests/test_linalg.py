import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsekit.linalg import (BitMatrix, InvalidSplit, MalformedInput, OrderTooLarge,
                              determinant, determinant_cofactor, format_text, line_split,
                              parse_text, permanent, permanent_expand, permanent_naive,
                              permanent_ryser)

from conftest import random_matrix


@st.composite
def matrices(draw, max_n=7):
    n = draw(st.integers(0, max_n))
    rows = tuple(draw(st.integers(0, (1 << n) - 1)) for _ in range(n))
    return BitMatrix(n, rows)


def test_small_known_values():
    assert permanent(BitMatrix.identity(5)) == 1
    assert determinant(BitMatrix.identity(5)) == 1
    # perm(J_n) = n!
    for n in range(1, 8):
        assert permanent_ryser(BitMatrix.ones(n)) == [1, 2, 6, 24, 120, 720, 5040][n - 1]
    assert determinant(BitMatrix.ones(3)) == 0
    assert permanent(BitMatrix(0, ())) == 1
    assert determinant(BitMatrix(0, ())) == 1


def test_engines_agree_random(rng):
    for _ in range(1200):
        m = random_matrix(rng, rng.randint(1, 8))
        p = permanent_naive(m)
        assert permanent_ryser(m) == p
        assert permanent_expand(m) == p
        assert permanent(m) == p


def test_bareiss_matches_cofactor(rng):
    for _ in range(400):
        m = random_matrix(rng, rng.randint(1, 7))
        assert determinant(m) == determinant_cofactor(m)


def test_bareiss_matches_numpy_on_larger(rng):
    for _ in range(30):
        m = random_matrix(rng, 12)
        assert determinant(m) == round(np.linalg.det(m.to_numpy()))


def test_ryser_large_order_uses_exact_recombination():
    # disjoint union: the permanent is the product of the block permanents
    blocks = [BitMatrix.ones(3)] * 6
    m = BitMatrix.block_diagonal(*blocks)
    assert m.n == 18
    assert permanent_ryser(m) == 6 ** 6
    assert permanent_expand(m) == 6 ** 6


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_transpose_and_permutation_invariance(m):
    p = permanent(m)
    assert permanent(m.transpose()) == p
    assert determinant(m.transpose()) == determinant(m)
    perm = list(reversed(range(m.n)))
    assert permanent(m.permute(perm, list(range(m.n)))) == p
    assert abs(determinant(m.permute(perm, list(range(m.n))))) == abs(determinant(m))


@settings(max_examples=200, deadline=None)
@given(matrices(max_n=6), st.data())
def test_row_expansion(m, data):
    if m.n == 0:
        return
    i = data.draw(st.integers(0, m.n - 1))
    total = sum(permanent(m.minor(i, j)) for j in range(m.n) if m[i, j])
    assert total == permanent(m)


@settings(max_examples=200, deadline=None)
@given(matrices(max_n=6), st.data())
def test_line_split_is_additive(m, data):
    kind = data.draw(st.sampled_from(["row", "col"]))
    if m.n == 0:
        return
    idx = data.draw(st.integers(0, m.n - 1))
    work = m if kind == "row" else m.transpose()
    support = [j for j in range(m.n) if (work.rows[idx] >> j) & 1]
    if len(support) < 2:
        with pytest.raises(InvalidSplit):
            line_split(m, (kind, idx), support[:1])
        return
    keep = data.draw(st.lists(st.sampled_from(support), min_size=1, max_size=len(support) - 1, unique=True))
    b, c = line_split(m, (kind, idx), keep)
    assert permanent(b) + permanent(c) == permanent(m)
    assert determinant(b) + determinant(c) == determinant(m)


def test_line_split_rejects_bad_choices():
    m = BitMatrix.from_strings(["110", "011", "101"])
    with pytest.raises(InvalidSplit):
        line_split(m, ("row", 0), [2])
    with pytest.raises(InvalidSplit):
        line_split(m, ("row", 0), [0, 1])
    with pytest.raises(ValueError):
        line_split(m, ("diag", 0), [0])


def test_naive_refuses_large_orders():
    with pytest.raises(OrderTooLarge):
        permanent_naive(BitMatrix.identity(11))


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_text_round_trip(m):
    assert parse_text(format_text(m)) == m


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("x\n", 1, 1),
    ("2\n10\n", 3, 1),
    ("2\n10\n0a\n", 3, 2),
    ("2\n10\n011\n", 3, 3),
])
def test_malformed_input_positions(text, line, col):
    with pytest.raises(MalformedInput) as exc:
        parse_text(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_bitmatrix_validation():
    with pytest.raises(ValueError):
        BitMatrix(2, (1,))
    with pytest.raises(ValueError):
        BitMatrix(2, (4, 1))
    with pytest.raises(ValueError):
        BitMatrix.from_lists([[1, 2], [0, 1]])
    m = BitMatrix.from_lists([[1, 1], [0, 1]])
    assert m.excess() == 1
    assert m.to_lists() == [[1, 1], [0, 1]]
