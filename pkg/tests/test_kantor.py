import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import datum, structurable, table
from sl3decomp.algebra import StructureAlgebra, derivations
from sl3decomp.exact import QArray
from sl3decomp.kantor import identify_sl3, kantor_build, tri_inner
from sl3decomp.liealg import is_antisymmetric, jacobi_check, killing_rank
from sl3decomp.structurable import StructurableAlgebra, check_structurable_axiom


def _algebra(table, involution, name):
    alg = StructureAlgebra(QArray(np.array(table, dtype=np.int64)), unit_index=0,
                           involution=QArray(np.array(involution, dtype=np.int64)))
    unit = [1] + [0] * (alg.dim - 1)
    return StructurableAlgebra(alg, unit, name=name)


def ground():
    return _algebra([[[1]]], [[1]], "F")


def dual_numbers():
    # basis 1, e with e^2 = 0, trivial involution
    t = np.zeros((2, 2, 2), dtype=np.int64)
    t[0, 0, 0] = t[0, 1, 1] = t[1, 0, 1] = 1
    return _algebra(t, np.eye(2, dtype=np.int64), "F[e]")


@pytest.mark.parametrize("name, t, der, skew", [
    ("G2", 2, 0, 2), ("SL4", 3, 1, 2), ("SL5", 6, 4, 2), ("F4", 10, 8, 2), ("E6", 18, 16, 2)])
def test_tri_inner_split(name, t, der, skew):
    T = tri_inner(structurable(name))
    assert (T.dim, T.derivation_dim, T.skew_dim) == (t, der, skew)
    assert T.decomposes and T.inner_derivation_dim == der
    assert T.dim == table(name).n - 3 * structurable(name).dim


def test_tri_inner_bracket_antisymmetric():
    T = tri_inner(structurable("F4"))
    assert T.bracket == -T.bracket.transpose(1, 0, 2)


def test_ground_field_smoke():
    """A = F: T_I = 0 and the three copies close into a 3-dim algebra.

    The brackets are [e0, e1] = -e2 and cyclic, so this is so(3): Killing
    rank 3, simple.
    """
    S = ground()
    T = tri_inner(S)
    assert T.dim == 0
    K = kantor_build(S, T)
    assert K.dim == 3
    assert jacobi_check(K.table).passed
    assert K.table.entries() == [(0, 1, 2, -1), (0, 2, 1, 1), (1, 0, 2, 1),
                                 (1, 2, 0, -1), (2, 0, 1, -1), (2, 1, 0, 1)]
    assert killing_rank(K.table) == 3


def test_commutative_associative_trivial_involution():
    S = dual_numbers()
    assert check_structurable_axiom(S).passed
    T = tri_inner(S)
    # every triple vanishes; the derivation e -> e is outer and not in T_I
    assert T.dim == 0
    assert T.derivation_dim == derivations(S.alg).dim == 1
    assert T.inner_derivation_dim == 0 and not T.decomposes
    K = kantor_build(S, T)
    assert K.dim == 6
    assert jacobi_check(K.table).passed


@pytest.mark.parametrize("name", ("G2", "SL4", "SL5", "F4", "E6"))
def test_kantor_identifies_with_direct_build(name):
    S = structurable(name)
    K = kantor_build(S, tri_inner(S))
    assert K.dim == table(name).n
    assert is_antisymmetric(K.table)
    assert jacobi_check(K.table).passed
    I = identify_sl3(K, datum(name), table(name))
    assert I.rank == K.dim
    assert I.witness is None
    assert I.checks and all(I.checks.values())
    assert I.passed


def test_identification_detects_wrong_datum():
    S = structurable("SL4")
    K = kantor_build(S)
    wrong = table("SL4").perturbed(0, 1, 1, 1)
    I = identify_sl3(K, datum("SL4"), wrong)
    assert I.witness is not None and not I.passed


# -- x[ij] = -xbar[ji] against the stored copies -------------------------------------
S_F4 = structurable("F4")
K_F4 = kantor_build(S_F4)
m = S_F4.dim
vec = st.lists(st.integers(-2, 2), min_size=m, max_size=m).map(lambda v: np.array(v, dtype=np.int64))


def _in_copy(p, x):
    v = np.zeros(K_F4.dim, dtype=np.int64)
    o = K_F4.copy_index(p, 0)
    v[o:o + m] = x
    return QArray(v)


@settings(max_examples=30, deadline=None)
@given(vec, vec)
def test_copy_products(x, y):
    A = S_F4.alg
    b = K_F4.table.bracket
    X, Y = QArray(x), QArray(y)
    xy_bar = A.conj(A.product(X, Y))
    for p in range(3):
        q, r = (p + 1) % 3, (p + 2) % 3
        # [x[ij], y[jk]] = (xy)[ik] = -conj(xy)[ki]
        got = b(_in_copy(p, x), _in_copy(q, y))
        o = K_F4.copy_index(r, 0)
        lhs = got.to_fractions()
        assert all(v == 0 for i, v in enumerate(lhs) if not o <= i < o + m)
        assert list(lhs[o:o + m]) == list((-xy_bar).to_fractions())
        # the reversed pair: [y[jk], x[ij]] = -(xy)[ik]
        assert b(_in_copy(q, y), _in_copy(p, x)) == -got
