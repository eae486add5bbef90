from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import settings

from chern.filtration import Filtration
from chern.groebner import Ideal
from chern.local import make_ring
from chern.parser import parse_polynomial
from chern.poly import PolyRing

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

CORPUS = Path(__file__).resolve().parents[1] / "src" / "chern" / "corpus"

# the four small rings used throughout, plus regular rings
RINGS = {
    "R1": (("x", "y"), ["x^2", "x*y"]),
    "R2": (("x", "y"), ["x^2"]),
    "R3": (("x", "y"), ["x^3"]),
    "R4": (("x", "y", "z"), ["x^2", "x*y"]),
    "k[x]": (("x",), []),
    "k[x,y]": (("x", "y"), []),
    "k[x,y,z]": (("x", "y", "z"), []),
}


def P(text: str, ring: PolyRing):
    return parse_polynomial(text, ring)


def ideal(ring: PolyRing, *texts: str) -> Ideal:
    return Ideal(ring, [P(t, ring) for t in texts])


def ring_named(name: str):
    variables, rels = RINGS[name]
    return make_ring(variables, rels)


def adic(name: str) -> Filtration:
    A = ring_named(name)
    return Filtration(A.as_module(), A.maximal_ideal)


def as_dicts(I: Ideal):
    return [g.as_dict() for g in I.gens]


# -- acceptance summary: one PASS/FAIL line per criterion ------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number, title = marker.args
    details = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    _CRITERIA[number] = (title, rep.passed, details)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, details = _CRITERIA[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
