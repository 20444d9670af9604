import random
from fractions import Fraction

import pytest
import sympy

from toric_ej.groebner import GroebnerStepLimit, groebner_basis, saturate

X = sympy.symbols("x y z")


def to_dict(expr, gens):
    return {m: Fraction(int(c.p), int(c.q)) for m, c in sympy.Poly(expr, *gens).terms()}


def random_ideal(rng, nvars, count, max_deg=2):
    gens = X[:nvars]
    polys = []
    for _ in range(count):
        e = 0
        for _ in range(rng.randint(2, 4)):
            mono = 1
            for g in gens:
                mono *= g ** rng.randint(0, max_deg)
            e += rng.randint(-4, 4) * mono
        e = sympy.expand(e)
        if e != 0:
            polys.append(e)
    return polys


def monic_reference(G, gb):
    out = []
    for g in G:
        d = to_dict(g, X[: gb.nvars])
        lead = max(d, key=gb.order.key)
        out.append(sorted((e, v / d[lead]) for e, v in d.items()))
    return sorted(out)


@pytest.mark.parametrize("seed", range(25))
def test_matches_sympy_grevlex(seed):
    rng = random.Random(seed)
    nvars = 2 + seed % 2
    polys = random_ideal(rng, nvars, 3)
    if not polys:
        return
    gb = groebner_basis([to_dict(p, X[:nvars]) for p in polys], nvars)
    ref = sympy.groebner(polys, *X[:nvars], order="grevlex")
    mine = sorted(sorted(g.items()) for g in gb.generators)
    assert mine == monic_reference(ref.exprs, gb)


def test_reduction_and_membership():
    x, y = X[:2]
    gb = groebner_basis([to_dict(x**2 - y, (x, y)), to_dict(x * y - 1, (x, y))], 2)
    member = to_dict(sympy.expand((x**2 - y) * (x + 3) + (x * y - 1) * y**2), (x, y))
    assert gb.contains(member)
    assert not gb.contains(to_dict(x + 1, (x, y)))


def test_saturation_removes_zero_root():
    gb = saturate([{(2,): Fraction(1), (1,): Fraction(-1)}], 1, (1,))
    assert gb.generators == [{(1,): 1, (0,): -1}]
    # x (x - 1) with a zero at the origin only: saturation gives the unit ideal
    gb = saturate([{(1, 0): Fraction(1)}, {(0, 1): Fraction(1)}], 2, (1, 1))
    assert gb.is_unit()


def test_standard_monomials_count():
    x, y = X[:2]
    gb = groebner_basis([to_dict(x**2 - 1, (x, y)), to_dict(y**3 - 2, (x, y))], 2)
    assert gb.is_zero_dimensional()
    assert len(gb.standard_monomials()) == 6


def test_step_cap_fault():
    rng = random.Random(1)
    polys = random_ideal(rng, 3, 3, max_deg=3)
    with pytest.raises(GroebnerStepLimit) as exc:
        groebner_basis([to_dict(p, X) for p in polys], 3, step_cap=3)
    assert exc.value.stats["steps"] > 3
