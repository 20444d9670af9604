import random
from fractions import Fraction

import pytest

from toric_ej.exact import mat_mul
from toric_ej.laurent import LaurentPolynomial, LaurentSystem, parse, random_system
from toric_ej.polytope import convex_hull, mixed_volume, simplex
from toric_ej.quotient import (
    InfiniteVarietyError,
    build_quotient,
    multiplication_matrix,
    normal_form,
    numeric_roots,
    saturate_to_torus,
)

from conftest import prism_system, line_system

SUPPORT_FIXTURES = {
    "conics": [simplex(2, 2), simplex(2, 2)],
    "line_conic": [simplex(2), simplex(2, 2)],
    "squares": [convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])] * 2,
    "prism_system": list(prism_system().supports()),
}


def test_saturation_examples():
    assert saturate_to_torus(line_system("x^2 - 3x + 2", 2)).generators == [{(2,): 1, (1,): -3, (0,): 2}]
    assert saturate_to_torus(line_system("x^2 - x", 2)).generators == [{(1,): 1, (0,): -1}]


def test_quotient_structures():
    q = build_quotient(line_system("x^2 - 3x + 2", 2))
    assert q.basis == [(0,), (1,)] and q.degree == 2
    assert q.mult_matrices[0] == [[0, -2], [1, 3]]
    q = build_quotient(LaurentSystem((parse("x - 5", ["x"]),)))
    assert q.basis == [(0,)] and q.mult_matrices == [[[5]]]
    assert build_quotient(prism_system()).degree == 2


def test_positive_dimensional_fault():
    s = LaurentSystem((parse("t1 - t2", ["t1", "t2"]), parse("2 t1 - 2 t2", ["t1", "t2"])))
    with pytest.raises(InfiniteVarietyError, match="not finite"):
        build_quotient(s)


def test_normal_forms():
    ex = prism_system()
    q = build_quotient(ex)
    assert not any(normal_form(ex.polys[0], q))
    q1 = build_quotient(LaurentSystem((parse("t1 - 2", ["t1"]),)))
    assert normal_form(parse("t1^-1", ["t1"]), q1) == [Fraction(1, 2)]
    qd = build_quotient(line_system("x^2 - x", 2))
    assert normal_form(parse("2 x^2 - x", ["x"]), qd) == [1]


def test_multiplication_matrices():
    q = build_quotient(line_system("x^2 - 3x + 2", 2))
    assert multiplication_matrix(parse("x", ["x"]), q) == q.mult_matrices[0]
    assert multiplication_matrix(parse("7", ["x"]), q) == [[7, 0], [0, 7]]


@pytest.mark.parametrize("name", sorted(SUPPORT_FIXTURES))
def test_commuting_and_ideal_annihilation(name):
    rng = random.Random(name)
    system = random_system(SUPPORT_FIXTURES[name], rng)
    q = build_quotient(system)
    Ms = q.mult_matrices
    for A in Ms:
        for B in Ms:
            assert mat_mul(A, B) == mat_mul(B, A)
    n = system.n_vars
    for _ in range(3):
        h = LaurentPolynomial(n, {tuple(rng.randint(-1, 2) for _ in range(n)): rng.randint(-3, 3) for _ in range(3)})
        for f in system.polys:
            assert not any(normal_form(h * f, q))


@pytest.mark.parametrize("name", sorted(SUPPORT_FIXTURES))
def test_bernstein_generic_degree(name):
    rng = random.Random(100 + len(name))
    mv = mixed_volume(SUPPORT_FIXTURES[name])
    for _ in range(5):
        q = build_quotient(random_system(SUPPORT_FIXTURES[name], rng))
        assert q.degree == mv


def test_roots_prism_system():
    roots = numeric_roots(build_quotient(prism_system()))
    pts = [(p.coords, p.multiplicity, p.exact) for p in roots.points]
    assert pts == [((1, -2, 1), 1, True), ((1, -2, 2), 1, True)]


def test_roots_simple_and_double():
    r = numeric_roots(build_quotient(line_system("x^2 - 3x + 2", 2)))
    assert [p.coords for p in r.points] == [(1,), (2,)]
    r = numeric_roots(build_quotient(line_system("x^2 - 2x + 1", 2)))
    assert [(p.coords, p.multiplicity) for p in r.points] == [((1,), 2)]


@pytest.mark.parametrize("name", ["conics", "line_conic", "squares"])
def test_numeric_roots_satisfy_system(name):
    rng = random.Random(7)
    system = random_system(SUPPORT_FIXTURES[name], rng)
    q = build_quotient(system)
    roots = numeric_roots(q, tol=1e-9, seed=3)
    assert roots.total_multiplicity == q.degree
    for p in roots.points:
        z = p.as_complex()
        assert all(abs(x) > 0 for x in z)
        for f in system.polys:
            norm = sum(abs(c) for c in f.terms.values())
            assert abs(complex(f.evaluate(z))) <= 1e-9 * float(norm)


def test_roots_deterministic_for_seed():
    q = build_quotient(random_system(SUPPORT_FIXTURES["conics"], random.Random(5)))
    assert numeric_roots(q, seed=11) == numeric_roots(q, seed=11)
