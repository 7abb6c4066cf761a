import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icetors import linalg as la
from icetors.errors import ContractError


def matrices(max_rows=4, max_cols=4, p=2):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(r, c))))


def brute_rank(m, p):
    # size of the column space by enumerating all combinations
    rows, cols = m.shape
    image = {tuple(np.mod(m @ np.array(v), p)) for v in itertools.product(range(p), repeat=cols)}
    return round(np.log(len(image)) / np.log(p))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_image_count(m):
    assert la.rank(m, 2) == brute_rank(m, 2)


@settings(max_examples=80, deadline=None)
@given(matrices(3, 3, p=3))
def test_rank_matches_image_count_mod3(m):
    assert la.rank(m, 3) == brute_rank(m, 3)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_kernel(m):
    k = la.kernel_basis(m, 2)
    assert k.shape[0] == m.shape[1] - la.rank(m, 2)
    assert not np.mod(m @ k.T, 2).any()
    assert la.rank(k, 2) == k.shape[0]


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_roundtrip(m, data):
    x = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = np.mod(m @ x, 2)
    y = la.solve(m, b, 2)
    assert y is not None
    assert np.array_equal(np.mod(m @ y, 2), b)


def test_solve_inconsistent():
    m = la.fmat([[1, 0], [1, 0]], 2)
    assert la.solve(m, [1, 0], 2) is None


def test_solve_shape_error():
    with pytest.raises(ContractError):
        la.solve(la.identity(2), [1, 0, 1], 2)


@settings(max_examples=100, deadline=None)
@given(matrices(4, 4))
def test_inverse_when_square_full_rank(m):
    if m.shape[0] != m.shape[1] or la.rank(m, 2) < m.shape[0]:
        assert not (m.shape[0] == m.shape[1] and la.is_invertible(m, 2))
        return
    inv = la.inverse(m, 2)
    assert np.array_equal(np.mod(m @ inv, 2), np.eye(m.shape[0], dtype=np.int64))


@settings(max_examples=100, deadline=None)
@given(matrices(4, 3))
def test_complement_completes_basis(m):
    basis = la.colspace(m, 2)
    comp = la.complement_columns(basis, m.shape[0], 2)
    full = np.concatenate([basis, comp], axis=1)
    assert full.shape[1] == m.shape[0]
    assert la.rank(full, 2) == m.shape[0]


def test_canonical_rowspace_ignores_basis_choice():
    a = la.fmat([[1, 1, 0], [0, 1, 1]], 2)
    b = la.fmat([[1, 0, 1], [0, 1, 1]], 2)
    assert la.canonical_rowspace(a, 2) == la.canonical_rowspace(b, 2)


def test_empty_shapes():
    assert la.rank(la.zeros(0, 3), 2) == 0
    assert la.kernel_basis(la.zeros(0, 2), 2).shape == (2, 2)
    assert la.colspace(la.zeros(3, 0), 2).shape == (3, 0)
