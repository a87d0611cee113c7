from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sl3decomp import sl3rep
from sl3decomp.exact import QArray, RatMatrix, einsum

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
sl3_elems = st.lists(fracs, min_size=8, max_size=8).map(sl3rep.from_coords)
vecs = st.lists(fracs, min_size=3, max_size=3)


@given(st.lists(fracs, min_size=8, max_size=8))
def test_coords_roundtrip(c):
    assert sl3rep.coords(sl3rep.from_coords(c)) == tuple(c)


def test_sl3_element_rejects_trace():
    with pytest.raises(ValueError):
        sl3rep.sl3_element([[1, 0, 0], [0, 0, 0], [0, 0, 0]])


@settings(max_examples=40)
@given(sl3_elems, sl3_elems, sl3_elems)
def test_bracket_identities(x, y, z):
    c = sl3rep.commutator
    assert c(x, y) == c(y, x).scale(-1)
    assert c(c(x, y), z) + c(c(y, z), x) + c(c(z, x), y) == RatMatrix.zeros(3, 3)
    assert sl3rep.circ(x, y) == sl3rep.circ(y, x)
    assert sl3rep.is_sl3(sl3rep.circ(x, y))
    # invariance of the trace form
    assert sl3rep.pair(c(x, y), z) == sl3rep.pair(x, c(y, z))


def test_pair_normalization():
    H1 = sl3rep.BASIS[6]
    assert sl3rep.pair(H1, H1) == Fraction(2, 3)
    E12, E21 = sl3rep.BASIS[0], sl3rep.BASIS[2]
    assert sl3rep.pair(E12, E21) == Fraction(1, 3)


@given(vecs, vecs, vecs)
def test_wedge_is_determinant(u1, u2, u):
    V = sl3rep.ThreeSpace()
    assert V.pairing(sl3rep.wedge_to_dual(u1, u2), u) == V.det(u1, u2, u)


@given(vecs, vecs, vecs, vecs, vecs, vecs)
def test_determinant_compatibility(f1, f2, f3, v1, v2, v3):
    assert sl3rep.ThreeSpace().compatible([f1, f2, f3], [v1, v2, v3])


@given(vecs, vecs)
def test_rank_one_projection_trace_zero(u, f):
    P = sl3rep.rank_one_projection(u, f)
    assert P.trace() == 0


def test_tensors_shapes_and_symmetries():
    t = sl3rep.tensors()
    assert t["comm"] == -t["comm"].transpose(1, 0, 2)
    assert t["circ"] == t["circ"].transpose(1, 0, 2)
    assert t["pair"] == t["pair"].T
    assert t["eps"] == -t["eps"].transpose(1, 0, 2)
    # act_v is a representation: [x, y] acts as x y - y x
    A = t["act_v"]                              # (x, u, w): (x e_u)_w
    M = A.transpose(0, 2, 1)                    # operator M[x][w, u]
    lhs = einsum("xyz,zwu->xywu", t["comm"], M)
    rhs = einsum("xwv,yvu->xywu", M, M) - einsum("ywv,xvu->xywu", M, M)
    assert lhs == rhs
    D = t["act_dual"].transpose(0, 2, 1)
    lhs = einsum("xyz,zwu->xywu", t["comm"], D)
    rhs = einsum("xwv,yvu->xywu", D, D) - einsum("ywv,xvu->xywu", D, D)
    assert lhs == rhs


def _key(m):
    return tuple(tuple(r) for r in m.to_rows())


def test_s4_generators():
    g = sl3rep.S4_GENERATORS
    I = sl3rep.IDENTITY
    assert g["phi"] @ g["phi"] @ g["phi"] == I
    assert g["tau"] @ g["tau"] == I
    assert g["tau1"] @ g["tau1"] == I and g["tau2"] @ g["tau2"] == I
    assert g["tau1"] @ g["tau2"] == g["tau2"] @ g["tau1"]
    # the generated group has order 24
    seen = {_key(I)}
    frontier = [I]
    while frontier:
        nxt = []
        for a in frontier:
            for b in g.values():
                c = a @ b
                if _key(c) not in seen:
                    seen.add(_key(c))
                    nxt.append(c)
        frontier = nxt
    assert len(seen) == 24


@pytest.mark.parametrize("name", ["tau1", "tau2", "phi", "tau"])
def test_conjugation_preserves_bracket(name):
    C = sl3rep.conjugation_matrix(sl3rep.S4_GENERATORS[name])    # columns are images
    comm = sl3rep.tensors()["comm"]
    lhs = einsum("xyz,kz->xyk", comm, C)
    rhs = einsum("ax,by,abk->xyk", C, C, comm)
    assert lhs == rhs


def test_conjugation_requires_orthogonal():
    with pytest.raises(ValueError):
        sl3rep.conjugation_matrix(RatMatrix.from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
