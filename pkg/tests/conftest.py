from functools import lru_cache

import pytest

from sl3decomp import exceptional
from sl3decomp.liealg import assemble
from sl3decomp.structurable import extract_L0

SMALL = ("G2", "F4", "E6", "SL4", "SL5")


@lru_cache(maxsize=None)
def datum(name):
    if name == "OCT":
        return exceptional.octonion_datum()
    return exceptional.build_datum(name)


@lru_cache(maxsize=None)
def table(name):
    return assemble(datum(name))


@lru_cache(maxsize=None)
def structurable(name):
    return extract_L0(table(name))


@lru_cache(maxsize=None)
def mutant(name):
    return {m.name: m for m in exceptional.mutants()}[name]


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "acceptance" in item.nodeid:
            item.add_marker(pytest.mark.slow)


# criterion number -> (title, passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
