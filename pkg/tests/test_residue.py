import random
from fractions import Fraction

import pytest

from toric_ej.laurent import LaurentPolynomial, LaurentSystem, parse, random_system
from toric_ej.polytope import simplex
from toric_ej.residue import (
    EmptyVarietyError,
    ResidueContext,
    audit_infinity,
    converse_certificate,
    euler_jacobi_check,
    global_residue,
    equivalence_harness,
)

from conftest import PRISM_VARS, prism_system, line_system


def test_prism_system_residues(prism_sys):
    ctx = ResidueContext(prism_sys)
    r = ctx.residue(parse("t1 t2 t3", PRISM_VARS))
    assert (r.value, r.exact, r.method) == (0, True, "trace-inverse")
    assert ctx.residue(ctx.jacobian).value == 2


def test_euler_one_variable():
    r = global_residue(line_system("x^2 - 3x + 2", 2), parse("x", ["x"]))
    assert r.value == 0 and r.exact


def test_trace_formula_matches_exact_roots(prism_sys):
    ctx = ResidueContext(prism_sys)
    rng = random.Random(0)
    for _ in range(5):
        h = LaurentPolynomial(3, {tuple(rng.randint(-1, 2) for _ in range(3)): rng.randint(-5, 5) for _ in range(4)})
        by_roots = sum(h.evaluate(p.coords) / ctx.jacobian.evaluate(p.coords) for p in ctx.roots().points)
        assert ctx.residue(h).value == by_roots


def test_trace_formula_matches_numeric_roots():
    system = random_system([simplex(2, 2), simplex(2, 2)], random.Random(4))
    ctx = ResidueContext(system)
    for m in [(0, 0), (1, 1), (2, 1), (-1, 3)]:
        h = LaurentPolynomial.monomial(m)
        exact = ctx.residue(h).value
        approx = ctx.residue_numeric(h).value
        assert abs(complex(exact) - approx) <= 1e-9 * max(1.0, abs(float(exact)))


def test_empty_torus_variety_warns():
    s = LaurentSystem((parse("x^2", ["x"]),))
    with pytest.warns(UserWarning):
        r = global_residue(s, parse("x", ["x"]))
    assert r.value == 0 and r.exact
    with pytest.raises(EmptyVarietyError):
        converse_certificate(s)


def test_multiple_root_deformation():
    ctx = ResidueContext(line_system("x^2 - 2x + 1", 2))
    assert not ctx.simple
    r1, r2 = ctx.residue(parse("x", ["x"])), ctx.residue(parse("x^2", ["x"]))
    assert r1.method == "deformation" and not r1.exact
    assert abs(r1.value) < 1e-9
    assert abs(r2.value - 1) < 1e-9


def test_euler_jacobi_certificates(prism_sys):
    c = euler_jacobi_check(prism_sys)
    assert c.interior_points == ((1, 1, 1),) and c.all_vanish
    d = euler_jacobi_check(line_system("x^2 - x", 2))
    assert d.interior_points == ((1,),) and d.residues[0].value == 1 and not d.all_vanish


def test_converse_certificates(prism_sys):
    c = converse_certificate(line_system("x^2 - x", 2))
    assert c.outcome == "found_pJ" and c.p_J == parse("x", ["x"])
    # interior classes NF(t1 t2 t3) and NF(J) are not proportional in the 2-dim quotient
    c = converse_certificate(prism_sys)
    assert c.outcome == "no_pJ"
    ctx = ResidueContext(prism_sys)
    from toric_ej.quotient import normal_form

    y = c.dual_witness
    assert sum(a * b for a, b in zip(y, normal_form(parse("t1 t2 t3", PRISM_VARS), ctx.q))) == 0
    assert sum(a * b for a, b in zip(y, normal_form(ctx.jacobian, ctx.q))) != 0


def test_infinity_audits(prism_sys):
    a = audit_infinity(prism_sys)
    assert [c.rays for c in a.deficient_cones] == [((-1, -1, 0),)]
    assert a.deficit == 2 and a.dimension_zero_at_infinity
    b = audit_infinity(line_system("x^2 - x", 2))
    assert [c.rays for c in b.deficient_cones] == [((1,),)] and b.deficit == 1
    g = audit_infinity(random_system([simplex(2, 2), simplex(2, 2)], random.Random(2)))
    assert g.deficient_cones == () and g.deficit == 0


def test_harness_reports():
    r = equivalence_harness(prism_system())
    assert not r.applicable and r.reasons == ["supports not indecomposable"]
    assert r.predicates["ii"] is True and r.predicates["i"] is False
    r = equivalence_harness(line_system("x^2 - x", 2))
    assert r.applicable and r.agree and r.predicates == {"i": False, "ii": False, "iii": False}


def test_residue_linearity_and_annihilation():
    rng = random.Random(9)
    system = random_system([simplex(2), simplex(2, 2)], rng)
    ctx = ResidueContext(system)

    def rand_h():
        return LaurentPolynomial(2, {(rng.randint(-2, 3), rng.randint(-2, 3)): rng.randint(-9, 9) for _ in range(3)})

    for _ in range(10):
        h1, h2 = rand_h(), rand_h()
        a, b = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-5, 5)
        assert ctx.residue(h1 * a + h2 * b).value == a * ctx.residue(h1).value + b * ctx.residue(h2).value
        i = rng.randrange(2)
        assert ctx.residue(h1 * system.polys[i]).value == 0


def test_report_json_shapes(prism_sys):
    c = euler_jacobi_check(prism_sys).to_json()
    assert c["residues"] == ["0"] and c["all_vanish"] is True
    a = audit_infinity(prism_sys).to_json()
    assert a["deficit"] == "2" and a["exact"] is True
