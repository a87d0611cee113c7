from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from sl3decomp.exact import (
    NoSolution, QArray, RatMatrix, bareiss_rank, certified_nullspace, certified_rref, einsum,
    kernel_basis, rank, rank_mod_p, rat, rat_str, rref, single, solve,
)

small = st.integers(-5, 5)


def int_matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


@st.composite
def deficient(draw):
    """Product of two thin integer matrices, so rank deficiency is common."""
    r, c, k = draw(st.integers(1, 7)), draw(st.integers(1, 7)), draw(st.integers(0, 3))
    A = np.array(draw(st.lists(st.lists(small, min_size=k, max_size=k), min_size=r, max_size=r)),
                 dtype=np.int64).reshape(r, k)
    B = np.array(draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=k, max_size=k)),
                 dtype=np.int64).reshape(k, c)
    return A @ B


def test_rat_parsing():
    assert rat("3/4") == Fraction(3, 4)
    assert rat(" -6/4 ") == Fraction(-3, 2)
    assert rat(2) == 2
    assert rat_str(Fraction(-3, 2)) == "-3/2"
    assert rat_str(Fraction(5)) == "5"
    with pytest.raises((ValueError, TypeError)):
        rat("x")


@given(st.fractions(max_denominator=50))
def test_rat_str_roundtrip(q):
    assert rat(rat_str(q)) == q


@given(int_matrices())
def test_rank_matches_sympy(rows):
    want = sympy.Matrix(rows).rank()
    assert rank(RatMatrix.from_rows(rows)) == want
    assert bareiss_rank([list(r) for r in rows], len(rows[0])) == want


@given(deficient())
def test_certified_rref_matches_exact(M):
    r, c = M.shape
    R, piv = rref(M.tolist(), c)
    E, piv2 = certified_rref(single(M), c)
    assert list(piv) == list(piv2)
    assert E.to_fractions().tolist() == [list(row) for row in R]
    ref, ref_piv = sympy.Matrix(M.tolist()).rref()
    assert list(ref_piv) == list(piv)


@given(deficient())
def test_certified_nullspace(M):
    r, c = M.shape
    N = certified_nullspace(single(M), c)
    assert N.shape[0] == c - sympy.Matrix(M.tolist()).rank()
    if N.shape[0]:
        assert (QArray(M) @ N.T).is_zero()


def test_rank_mod_p_is_lower_bound():
    M = np.array([[1, 2], [3, 6]], dtype=np.int64)
    assert rank_mod_p(M) == 1
    assert rank_mod_p(np.eye(4, dtype=np.int64) * 7) == 4


@given(int_matrices(4, 4))
def test_kernel_basis_annihilates(rows):
    m = RatMatrix.from_rows(rows)
    for v in kernel_basis(m):
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in rows)


def test_solve_and_inconsistent():
    assert solve(RatMatrix.from_rows([[1, 1], [1, -1]]), [3, 1]) == (2, 1)
    with pytest.raises(NoSolution):
        solve(RatMatrix.from_rows([[1, 0], [1, 0]]), [1, 2])


def test_ratmatrix_algebra():
    a = RatMatrix.from_rows([[1, 2], [3, 4]])
    assert (a @ RatMatrix.identity(2)) == a
    assert a.transpose().transpose() == a
    assert a.trace() == 5
    assert a.scale(Fraction(1, 2))[1, 1] == 2


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@settings(max_examples=50)
@given(st.lists(fracs, min_size=6, max_size=6), st.lists(fracs, min_size=6, max_size=6))
def test_qarray_arithmetic_matches_fractions(xs, ys):
    x = QArray.from_fractions(np.array(xs, dtype=object).reshape(2, 3))
    y = QArray.from_fractions(np.array(ys, dtype=object).reshape(3, 2))
    got = (x @ y).to_fractions()
    for i in range(2):
        for j in range(2):
            assert got[i, j] == sum(xs[3 * i + k] * ys[2 * k + j] for k in range(3))
    s = (x + x * 2 - x).to_fractions()
    assert s.tolist() == (x * 2).to_fractions().tolist()


@settings(max_examples=50)
@given(st.lists(fracs, min_size=8, max_size=8), st.lists(fracs, min_size=2, max_size=2))
def test_einsum_contraction(ts, vs):
    T = QArray.from_fractions(np.array(ts, dtype=object).reshape(2, 2, 2))
    v = QArray.from_fractions(vs)
    got = einsum("ijk,i->jk", T, v).to_fractions()
    arr = np.array(ts, dtype=object).reshape(2, 2, 2)
    for j in range(2):
        for k in range(2):
            assert got[j, k] == vs[0] * arr[0, j, k] + vs[1] * arr[1, j, k]


def test_large_values_fall_back_to_exact_objects():
    q = QArray.from_fractions([2 ** 70, Fraction(1, 3)])
    assert (q * 3).to_fractions().tolist() == [3 * 2 ** 70, 1]
    assert ((q * q) - q * q).is_zero()
