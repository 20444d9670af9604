"""Torus quotient rings: saturation, standard-monomial bases, multiplication matrices, roots."""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    EigenConvergenceError,
    charpoly,
    companion,
    eigen_numeric,
    identity,
    inverse,
    mat_add,
    mat_mul,
    mat_scale,
    mat_vec,
    solve_linear,
    squarefree_decomposition,
    trace,
    upoly_eval,
    zeros,
)
from .groebner import GroebnerBasis, saturate
from .laurent import LaurentPolynomial, LaurentSystem


class InfiniteVarietyError(ValueError):
    """The torus zero set is not finite."""


class RootSeparationError(RuntimeError):
    """Roots could not be separated numerically at the requested tolerance."""


@dataclass
class SaturatedIdeal:
    """``<t^-s_i f_i> : (t_1...t_n)^inf`` as a grevlex Groebner basis in the shifted ring."""

    n_vars: int
    gb: GroebnerBasis
    shifts: list[tuple[int, ...]]

    @property
    def generators(self):
        return self.gb.generators

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def has_torus_zero(self) -> bool:
        return not self.gb.is_unit()

    def is_zero_dimensional(self) -> bool:
        return self.gb.is_zero_dimensional()

    def generators_as_laurent(self) -> list[LaurentPolynomial]:
        return [LaurentPolynomial(self.n_vars, g) for g in self.gb.generators]


def saturate_to_torus(system: LaurentSystem, step_cap: int = 100_000) -> SaturatedIdeal:
    """Saturate the shifted system by the product of all variables."""
    n = system.n_vars
    polys = []
    shifts = []
    for f in system.polys:
        if f.is_zero():
            shifts.append((0,) * n)
            continue
        s = tuple(-x for x in f.min_exponents())
        shifts.append(s)
        polys.append(f.shift(s).terms)
    gb = saturate(polys, n, (1,) * n, step_cap=step_cap)
    return SaturatedIdeal(n, gb, shifts)


@dataclass
class QuotientStructure:
    """Finite-dimensional quotient ``Q[t^+-1] / I`` with basis ``basis`` of standard monomials."""

    ideal: SaturatedIdeal
    basis: list[tuple[int, ...]]
    mult_matrices: list[list[list[Fraction]]]
    _inverses: dict = field(default_factory=dict, repr=False)
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {b: k for k, b in enumerate(self.basis)}

    @property
    def n_vars(self) -> int:
        return self.ideal.n_vars

    @property
    def degree(self) -> int:
        return len(self.basis)

    def coords(self, poly: dict) -> list[Fraction]:
        """Coordinates of the normal form of a polynomial (nonnegative exponents)."""
        r = self.ideal.gb.reduce(poly)
        v = [Fraction(0)] * self.degree
        for e, c in r.items():
            v[self._index[e]] = c
        return v

    def inverse_matrix(self, i: int):
        if i not in self._inverses:
            inv = inverse(self.mult_matrices[i])
            if inv is None:
                raise ArithmeticError(f"multiplication by variable {i + 1} is not invertible")
            self._inverses[i] = inv
        return self._inverses[i]

    def to_json(self) -> dict:
        from .exact import rat_to_json

        return {
            "degree": self.degree,
            "basis": [list(b) for b in self.basis],
            "groebner_basis": [
                {"terms": [[list(e), rat_to_json(c)] for e, c in sorted(g.items())]} for g in self.ideal.generators
            ],
            "mult_matrices": [[[rat_to_json(x) for x in row] for row in M] for M in self.mult_matrices],
            "exact": True,
        }


def quotient_structure(ideal: SaturatedIdeal) -> QuotientStructure:
    if ideal.is_unit():
        return QuotientStructure(ideal, [], [[] for _ in range(ideal.n_vars)])
    if not ideal.is_zero_dimensional():
        raise InfiniteVarietyError("V_T(f) is not finite: the saturated ideal is positive-dimensional")
    basis = ideal.gb.standard_monomials()
    q = QuotientStructure(ideal, basis, [])
    mats = []
    for i in range(ideal.n_vars):
        cols = []
        for b in basis:
            e = list(b)
            e[i] += 1
            cols.append(q.coords({tuple(e): Fraction(1)}))
        mats.append([[cols[j][k] for j in range(len(basis))] for k in range(len(basis))])
    q.mult_matrices = mats
    return q


def build_quotient(system: LaurentSystem, step_cap: int = 100_000) -> QuotientStructure:
    return quotient_structure(saturate_to_torus(system, step_cap))


def normal_form(h: LaurentPolynomial, q: QuotientStructure) -> list[Fraction]:
    """Coordinates over ``q.basis`` of the class of the Laurent polynomial ``h``."""
    if q.degree == 0:
        return []
    lo = h.min_exponents()
    s = tuple(max(0, -x) for x in lo)
    v = q.coords(h.shift(s).terms) if h.terms else [Fraction(0)] * q.degree
    for i, k in enumerate(s):
        for _ in range(k):
            v = mat_vec(q.inverse_matrix(i), v)
    return v


def multiplication_matrix(h: LaurentPolynomial, q: QuotientStructure):
    cols = [normal_form(h.shift(b), q) for b in q.basis]
    d = q.degree
    return [[cols[j][k] for j in range(d)] for k in range(d)]


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class RootPoint:
    coords: tuple
    multiplicity: int
    exact: bool

    def to_json(self) -> dict:
        from .exact import complex_to_json, rat_to_json

        if self.exact:
            c = [rat_to_json(x) for x in self.coords]
        else:
            c = [complex_to_json(x) for x in self.coords]
        return {"point": c, "multiplicity": self.multiplicity, "exact": self.exact}

    def as_complex(self) -> tuple[complex, ...]:
        return tuple(complex(x) for x in self.coords)


@dataclass(frozen=True)
class TorusRoots:
    points: tuple[RootPoint, ...]
    combination: tuple[int, ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(p.multiplicity for p in self.points)

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points], "total_multiplicity": self.total_multiplicity}


def _upoly_of_matrix(p: Sequence[Fraction], C):
    d = len(C)
    out = zeros(d, d)
    for c in reversed(p):
        out = mat_add(mat_mul(out, C), mat_scale(c, identity(d)))
    return out


def _is_nilpotent_power(N, k: int) -> bool:
    P = N
    for _ in range(k - 1):
        P = mat_mul(P, N)
    return all(x == 0 for row in P for x in row)


def _newton(g: Sequence[Fraction], z: complex, steps: int = 3) -> complex:
    cf = [complex(c) for c in g]
    dcf = [i * cf[i] for i in range(1, len(cf))]
    for _ in range(steps):
        fz = sum(c * z**i for i, c in enumerate(cf))
        dz = sum(c * z**i for i, c in enumerate(dcf))
        if dz == 0:
            break
        step = fz / dz
        if not cmath.isfinite(step):
            break
        z -= step
    return z


def _horner(p: Sequence[Fraction], z):
    acc = 0 * z
    for c in reversed(p):
        acc = acc * z + c
    return acc


def numeric_roots(
    q: QuotientStructure,
    tol: float = 1e-9,
    seed: int = 0,
    dim_cap: int = 200,
    attempts: int = 12,
) -> TorusRoots:
    """Torus roots with multiplicities from a random combination ``C = sum c_i M_{t_i}``.

    Coordinates are interpolated as polynomials in ``C`` through a trace
    (Hankel) system; the interpolation is certified exactly by checking that
    ``M_{t_i} - p_i(C)`` is nilpotent, which fails iff ``C`` merges two roots.
    """
    n = q.n_vars
    d = q.degree
    if d == 0:
        return TorusRoots((), ())
    if d > dim_cap:
        raise ValueError(f"quotient dimension {d} exceeds the eigenvalue dimension cap {dim_cap}")
    rng = random.Random(seed)
    for attempt in range(attempts):
        span = 3 + 4 * attempt
        c = tuple(rng.randint(1, span) for _ in range(n))
        C = zeros(d, d)
        for ci, M in zip(c, q.mult_matrices):
            C = mat_add(C, mat_scale(ci, M))
        chi = charpoly(C)
        factors = squarefree_decomposition(chi)
        g = [Fraction(1)]
        for fac, _ in factors:
            g = _mul_upoly(g, fac)
        D = len(g) - 1
        powers = [identity(d)]
        for _ in range(2 * D):
            powers.append(mat_mul(powers[-1], C))
        H = [[trace(powers[a + b]) for b in range(D)] for a in range(D)]
        interps = []
        ok = True
        mu_max = max(k for _, k in factors)
        for i in range(n):
            rhs = [trace(mat_mul(powers[a], q.mult_matrices[i])) for a in range(D)]
            sol = solve_linear(H, rhs)
            if sol is None:
                ok = False
                break
            p = sol[0]
            N = mat_add(q.mult_matrices[i], mat_scale(-1, _upoly_of_matrix(p, C)))
            if not _is_nilpotent_power(N, mu_max):
                ok = False
                break
            interps.append(p)
        if not ok:
            continue
        points = []
        for fac, mult in factors:
            if len(fac) <= 1:
                continue
            pts = _roots_of_factor(fac, tol, dim_cap)
            for lam in pts:
                if isinstance(lam, Fraction):
                    coords = tuple(upoly_eval(p, lam) for p in interps)
                    points.append(RootPoint(coords, mult, True))
                else:
                    coords = tuple(complex(_horner([complex(x) for x in p], lam)) for p in interps)
                    points.append(RootPoint(coords, mult, False))
        if sum(p.multiplicity for p in points) != d:
            raise RootSeparationError("multiplicities do not add up to the quotient dimension")
        points.sort(key=_point_key)
        return TorusRoots(tuple(points), c)
    raise RootSeparationError(f"no separating linear combination found in {attempts} attempts")


def _point_key(p: RootPoint):
    return tuple((round(z.real, 9), round(z.imag, 9)) for z in p.as_complex())


def _mul_upoly(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _roots_of_factor(fac: Sequence[Fraction], tol: float, dim_cap: int) -> list:
    """Roots of a squarefree factor; rational roots are returned as exact Fractions."""
    deg = len(fac) - 1
    if deg == 1:
        return [-fac[0] / fac[1]]
    try:
        clusters = eigen_numeric(companion(fac), tol=tol, dim_cap=dim_cap)
    except EigenConvergenceError:
        raise
    if len(clusters) != deg or any(m != 1 for _, m in clusters):
        raise RootSeparationError(
            f"eigenvalues of a squarefree factor of degree {deg} cluster at tolerance {tol}; "
            "use a smaller tolerance or the exact path"
        )
    out = []
    for z, _ in clusters:
        z = _newton(fac, z)
        if abs(z.imag) <= tol * max(1.0, abs(z)):
            r = Fraction(z.real).limit_denominator(10**6)
            if upoly_eval(fac, r) == 0:
                out.append(r)
                continue
        out.append(z)
    return out
