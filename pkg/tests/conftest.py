import random

import pytest

from toric_ej.cox import build_context, parse_cox
from toric_ej.laurent import LaurentSystem, parse
from toric_ej.polytope import convex_hull

PRISM_VARS = ("t1", "t2", "t3")
PRISM_SRC = ("1 + t1 + t2", "2 - t1 + t1^2 + t2 + 2 t1 t2 + t2^2", "2 - 3 t3 + t3^2")

# lines reported by the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def prism_system() -> LaurentSystem:
    return LaurentSystem(tuple(parse(s, PRISM_VARS) for s in PRISM_SRC), variables=PRISM_VARS)


def segment(a: int, b: int):
    return convex_hull([(a,), (b,)])


def line_system(src: str, d: int) -> LaurentSystem:
    return LaurentSystem((parse(src, ["x"]),), (segment(0, d),), ("x",))


def p1_fixture(f0: str = "x1 - 3 x2"):
    ctx = build_context(segment(0, 1))
    return ctx, [parse_cox(f0, ctx), parse_cox("x1^2 - 3 x1 x2 + 2 x2^2", ctx)]


@pytest.fixture
def prism_sys():
    return prism_system()


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def p1():
    return p1_fixture()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
