import json
from fractions import Fraction

import pytest

from conftest import datum
from sl3decomp import exceptional
from sl3decomp.coord import DatumError, check_conditions
from sl3decomp.exceptional import (
    EXPECTED, ExceptionalSpec, build_datum, calibrate, corpus, golden_spec, grid, load_calibration,
    mutants, octonion_datum, series_report,
)


@pytest.mark.parametrize("name, dims", [
    ("G2", (1, 1, 1, 0)), ("F4", (1, 6, 6, 8)), ("E6", (1, 9, 9, 16)),
    ("SL4", (1, 1, 1, 1)), ("SL5", (1, 2, 2, 4)),
])
def test_datum_dims(name, dims):
    d = datum(name)
    assert tuple(d.dims[k] for k in "ABCs") == dims
    n = 8 * dims[0] + 3 * dims[1] + 3 * dims[2] + dims[3]
    assert n == EXPECTED[name]["dim_L"]


def test_big_series_dims():
    for name, dims in (("E7", (1, 15, 15, 35)), ("E8", (1, 27, 27, 78))):
        d = build_datum(name)
        assert tuple(d.dims[k] for k in "ABCs") == dims


def test_grid_order():
    g = grid()
    assert g[:4] == [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)]
    assert len(g) == len(set(g)) == 22
    assert Fraction(-4, 3) in g and Fraction(-4) in g


@pytest.mark.parametrize("name, nu", [("G2", Fraction(-4, 3)), ("F4", Fraction(-4)), ("E6", Fraction(-4)),
                                      ("SL4", Fraction(1)), ("SL5", Fraction(1))])
def test_calibration_reproducible(name, nu):
    spec = calibrate(name)
    assert spec == golden_spec(name) == calibrate(name)
    assert (spec.lam, spec.mu, spec.nu) == (1, 1, nu)


def test_golden_file_covers_all_series():
    cal = load_calibration()
    assert set(cal) == set(EXPECTED)


def test_wrong_scalar_rejected():
    # with s = 0 there is nowhere for D_BC to live, so the build itself refuses
    with pytest.raises(DatumError):
        build_datum(ExceptionalSpec("G2", nu=Fraction(1)))
    try:
        bad = build_datum(ExceptionalSpec("F4", nu=Fraction(1)))
    except DatumError:
        return
    assert not check_conditions(bad).passed


def test_octonion_datum():
    d = octonion_datum()
    assert tuple(d.dims[k] for k in "ABCs") == (8, 0, 0, 14)
    assert 8 * 8 + 14 == 78
    assert octonion_datum(with_derivations=False).dims["s"] == 0


def test_corpus_and_mutants():
    names = [d.name for d in corpus(include_big=False)]
    assert len(names) >= 10
    assert [m.name for m in mutants()] == ["SL4-cross", "F4-2T", "G2-nu", "OCT-no-s"]


@pytest.mark.parametrize("name", ["G2", "F4", "SL4"])
def test_series_report(name):
    r = series_report(name, jacobi=True)
    assert r["passed"], r
    assert r["values"] == r["expected"]
    json.dumps(r)
