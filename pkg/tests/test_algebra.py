from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sl3decomp.algebra import (
    AlgebraError, StructureAlgebra, Subspace, alternative_witness, associator, associator_ideal, center,
    derivations, direct_sum, is_alternative, is_associative, is_commutative, is_ideal, matrix_algebra,
    nucleus,
)
from sl3decomp.comp import composition, sedenions
from sl3decomp.exact import QArray

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=3)


def vectors(n):
    return st.lists(fracs, min_size=n, max_size=n).map(QArray.from_fractions)


def test_matrix_algebra_invariants():
    M = matrix_algebra(2)
    assert M.dim == 4
    assert is_associative(M) and not is_commutative(M)
    assert nucleus(M).dim == 4
    assert center(M).dim == 1
    # every derivation of M_n is inner: dim = n^2 - 1
    assert derivations(M).dim == 3


def test_octonion_invariants():
    O = composition("O").alg
    assert is_alternative(O)
    assert not is_associative(O)
    assert derivations(O).dim == 14          # G2
    assert nucleus(O).dim == 1 and center(O).dim == 1
    assert associator_ideal(O).dim == 8      # simple, not associative


def test_quaternion_derivations_are_inner():
    assert derivations(composition("Q").alg).dim == 3


def test_sedenions_not_alternative():
    w = alternative_witness(sedenions().alg)
    assert w is not None
    kind, idx = w
    assert kind in ("left", "right", "left-linearized", "right-linearized")
    S = sedenions().alg
    n = S.dim
    e = lambda i: QArray(np.eye(n, dtype=np.int64)[i])
    if kind == "left-linearized":
        i, j, k = idx
        res = associator(S, e(i), e(j), e(k)) + associator(S, e(j), e(i), e(k))
        assert not res.is_zero()


def test_direct_sum_and_ideals():
    M = matrix_algebra(2)
    D = direct_sum(M, M)
    assert D.dim == 8
    first = Subspace.span(QArray(np.eye(8, dtype=np.int64)[:4]), 8)
    assert is_ideal(D, first)
    assert center(D).dim == 2


def test_json_roundtrip():
    O = composition("O").alg
    back = StructureAlgebra.from_json(O.to_json())
    assert back.table == O.table
    assert back.involution == O.involution


def test_bad_table_rejected():
    with pytest.raises(AlgebraError):
        StructureAlgebra.from_json({"dim": 2, "table": "nonsense"})


@settings(max_examples=40)
@given(st.lists(st.lists(fracs, min_size=5, max_size=5), min_size=1, max_size=4))
def test_subspace_span_contains_coordinates(rows):
    V = QArray.from_fractions(np.array(rows, dtype=object))
    S = Subspace.span(V, 5)
    assert S.dim <= len(rows)
    for r in range(V.shape[0]):
        assert S.contains(V[r])
    # coordinates reproduce the vectors from the echelon basis
    c = S.coordinates(V)
    assert (c @ S.echelon) == V
    assert S <= Subspace.full(5)
    assert (S + S) == S


# -- octonion identities on random elements ---------------------------------------
O8 = composition("O")


@settings(max_examples=30, deadline=None)
@given(vectors(8), vectors(8), vectors(8))
def test_octonion_moufang_and_alternative(x, y, z):
    A = O8.alg
    p = A.product
    assert associator(A, x, x, y).is_zero()
    assert associator(A, y, x, x).is_zero()
    # Moufang: (x y x) z = x (y (x z))
    assert p(p(p(x, y), x), z) == p(x, p(y, p(x, z)))


@settings(max_examples=30, deadline=None)
@given(vectors(8), vectors(8))
def test_octonion_norm_multiplicative(x, y):
    A = O8.alg
    assert O8.norm(A.product(x, y)) == O8.norm(x) * O8.norm(y)
    one = QArray.from_fractions([1] + [0] * 7)
    assert A.product(x, A.conj(x)) == one * O8.norm(x)
    assert O8.trace(x) == 2 * x.to_fractions()[0]
