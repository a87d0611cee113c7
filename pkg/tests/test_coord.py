import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import datum, mutant
from sl3decomp.coord import (
    MAP_SLOTS, CoordinateDatum, DatumError, check_conditions, check_corollary, check_degree4,
    corollary_D_residual_B, corollary_D_residual_C,
)
from sl3decomp.exact import QArray
from sl3decomp.liealg import assemble, jacobi_check

PASSING = ("G2", "F4", "E6", "SL4", "SL5", "OCT")


@pytest.mark.parametrize("name", PASSING)
def test_conditions_pass(name):
    r = check_conditions(datum(name))
    assert r.passed, r.first_failure()
    assert set(r.verdicts) == {f"({i})" for i in range(7)}


@pytest.mark.parametrize("name, section, identity", [
    ("SL4-cross", "(0)", "s-invariance of cross_B"),
    ("F4-2T", "(6)", "(b1 x b2) x c"),
    ("G2-nu", "(6)", "(b1 x b2) x c"),
    ("OCT-no-s", "(1)", "D_{a1,a2}a3"),
])
def test_mutants_fail_with_named_condition(name, section, identity):
    r = check_conditions(mutant(name))
    sec, f = r.first_failure()
    assert (sec, f.identity) == (section, identity)
    assert len(f.witness) > 0


def test_witness_labels_frozen():
    sec, f = check_conditions(mutant("G2-nu")).first_failure()
    assert f.witness == ("b:1", "b:1", "c:1", "b:1")


@pytest.mark.parametrize("name", PASSING)
def test_corollary_D_identities_on_basis(name):
    d = datum(name)
    assert corollary_D_residual_B(d).is_zero()
    assert corollary_D_residual_C(d).is_zero()


@pytest.mark.parametrize("name", ("G2", "F4", "E6", "OCT"))
def test_corollary_passes(name):
    r = check_corollary(datum(name))
    assert r.passed, r.first_failure()


@pytest.mark.parametrize("name", ("SL4", "SL5"))
def test_corollary_last_clause_on_sl_family(name):
    """sl4 and sl5 are simple, B = C = F^k and B x B = 0: the clauses
    C = B x B and A = T(B, B x B) do not hold there, the others do."""
    r = check_corollary(datum(name))
    failed = sorted(k for k, v in r.verdicts.items() if not v)
    assert failed == ["simple, B != 0: A = T(B, B x B)", "simple, B != 0: C = B x B"]


def test_corollary_detects_2T():
    r = check_corollary(mutant("F4-2T"))
    assert not r.verdicts["D identities"]


@pytest.mark.parametrize("name", PASSING)
def test_degree4_passes(name):
    r = check_degree4(datum(name), samples=20, seed=1)
    assert r.passed, r.first_failure()


@pytest.mark.parametrize("name", ("SL4-cross", "F4-2T", "G2-nu"))
def test_degree4_fails_on_mutants(name):
    assert not check_degree4(mutant(name), samples=5).passed


@pytest.mark.parametrize("name", ("G2", "F4", "OCT"))
def test_json_roundtrip(name):
    d = datum(name)
    back = CoordinateDatum.from_json(json.loads(json.dumps(d.to_json())))
    assert back.dims == d.dims
    for k in MAP_SLOTS:
        assert back.maps[k] == d.maps[k], k


def test_validate_rejects_asymmetric_cross():
    d = datum("G2")
    with pytest.raises(DatumError):
        d.replace("bad", circ_A=QArray.from_fractions([[[3]]])).validate()
    d2 = datum("F4")
    x = d2.maps["cross_B"].to_fractions()
    x[0, 1, 0] += 1
    with pytest.raises(DatumError, match="cross_B"):
        d2.replace("bad", cross_B=QArray.from_fractions(x)).validate()


def test_from_json_reports_field():
    with pytest.raises(DatumError, match=r"maps\.T\[0\]"):
        CoordinateDatum.from_json({"labels": {"A": ["1"], "B": ["b"], "C": ["c"]},
                                   "maps": {"T": [[0, 0, 0, "nope"]]}})


# -- conditions <=> Jacobi as a property ----------------------------------------------
FREE = ("T", "act_AB", "act_CA", "D_BC", "s_on_B", "s_on_C", "D_AA")
SYMMETRIC = ("cross_B", "cross_C")


def _perturb(d, name, ix, delta):
    arr = d.maps[name].to_fractions()
    arr[ix] += delta
    if name in SYMMETRIC:
        i, j, k = ix
        if i != j:
            arr[j, i, k] += delta
    if name == "D_AA":
        i, j, k = ix
        arr[j, i, k] -= delta
    return d.replace(d.name + "*", **{name: QArray.from_fractions(arr)})


@st.composite
def perturbations(draw):
    base = draw(st.sampled_from(("G2", "SL4", "SL5")))
    d = datum(base)
    names = [n for n in FREE + SYMMETRIC if d.maps[n].size]
    name = draw(st.sampled_from(names))
    shape = d.maps[name].shape
    ix = tuple(draw(st.integers(0, s - 1)) for s in shape)
    delta = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(2)]))
    return d, name, ix, delta


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(perturbations())
def test_conditions_iff_jacobi_under_perturbation(case):
    d, name, ix, delta = case
    p = _perturb(d, name, ix, delta)
    try:
        p.validate()
    except DatumError:
        return          # moved the distinguished element; not a datum any more
    assert check_conditions(p).passed == jacobi_check(assemble(p)).passed
