from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sl3decomp.algebra import AlgebraError, is_alternative, is_associative, is_commutative
from sl3decomp.comp import (
    cayley_dickson, composition, freudenthal_cross, hermitian_jordan, jordan_identity_holds,
    norm_multiplicative_witness, sedenions, trace_form, trace_form_associative,
)
from sl3decomp.exact import QArray

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@pytest.mark.parametrize("name, dim, split, assoc, comm", [
    ("F", 1, False, True, True),
    ("K", 2, True, True, True),
    ("Q", 4, False, True, False),
    ("O", 8, False, False, False),
])
def test_composition_ladder(name, dim, split, assoc, comm):
    C = composition(name)
    assert C.dim == dim and C.split == split and C.name == name
    assert is_associative(C.alg) == assoc
    assert is_commutative(C.alg) == comm
    assert is_alternative(C.alg)
    assert norm_multiplicative_witness(C) is None


def test_doubling_past_octonions_refused():
    with pytest.raises(AlgebraError):
        cayley_dickson(composition("O"))


def test_sedenion_norm_fails():
    S = sedenions()
    assert S.dim == 16
    w = norm_multiplicative_witness(S)
    assert w is not None
    (px, py) = w
    n = S.dim
    vec = lambda ix: QArray.from_fractions([1 if i in ix else 0 for i in range(n)])
    x, y = vec(px), vec(py)
    assert S.norm(S.alg.product(x, y)) != S.norm(x) * S.norm(y)


@pytest.mark.parametrize("name, dim", [("F", 6), ("K", 9), ("Q", 15), ("O", 27)])
def test_jordan_dims_and_identities(name, dim):
    J = hermitian_jordan(composition(name))
    assert J.dim == dim
    assert jordan_identity_holds(J)
    assert trace_form_associative(J)
    assert J.trace(J.unit) == 3


def _jordan(name):
    return _JORDAN.setdefault(name, hermitian_jordan(composition(name)))


_JORDAN = {}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from("FKQO"), st.data())
def test_adjoint_identity(name, data):
    """(x#)# = N(x) x with x# = x x x and N(x) = T(x#, x)/3."""
    J = _jordan(name)
    x = QArray.from_fractions(data.draw(st.lists(fracs, min_size=J.dim, max_size=J.dim)))
    xs = freudenthal_cross(J, x, x)
    N = trace_form(J, xs, x) / 3
    assert freudenthal_cross(J, xs, xs) == x * N


@settings(max_examples=25, deadline=None)
@given(st.sampled_from("KQO"), st.data())
def test_trace_of_cross_is_symmetric(name, data):
    J = _jordan(name)
    draw = lambda: QArray.from_fractions(data.draw(st.lists(fracs, min_size=J.dim, max_size=J.dim)))
    x, y, z = draw(), draw(), draw()
    t = lambda a, b, c: trace_form(J, freudenthal_cross(J, a, b), c)
    assert t(x, y, z) == t(y, z, x) == t(z, x, y) == t(y, x, z)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from("QO"), st.data())
def test_jordan_identity_on_elements(name, data):
    J = _jordan(name)
    draw = lambda: QArray.from_fractions(data.draw(st.lists(fracs, min_size=J.dim, max_size=J.dim)))
    x, y = draw(), draw()
    c = J.circ
    x2 = c(x, x)
    assert c(c(x2, y), x) == c(x2, c(y, x))


def test_diagonal_norm_is_determinant():
    J = _jordan("O")
    x = QArray.from_fractions([2, 3, Fraction(1, 2)] + [0] * 24)
    xs = freudenthal_cross(J, x, x)
    assert trace_form(J, xs, x) / 3 == 3
