"""Cox homogeneous coordinate ring of the toric variety of a lattice polytope.

Variables ``x_1..x_N`` correspond to the rays ``eta_j`` of the normal fan (in
fan order).  The class group is ``Z^N / R Z^n`` with ``R`` the matrix whose
rows are the rays; a degree is a coset of that image lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import ceil, floor, gcd
from typing import Sequence

from .exact import (
    det,
    hnf_basis,
    inverse,
    left_kernel,
    rank,
    rat_to_json,
    reduce_mod_lattice,
    solve_linear,
    transpose,
)
from .groebner import groebner_basis, saturate
from .laurent import LaurentPolynomial, LaurentSystem, polynomial_det
from .polytope import Cone, LatticePolytope, NormalFan, convex_hull, normal_fan


class DegreeHypothesisError(ValueError):
    """A degree assumption (proportional or ample degrees) does not hold."""


@dataclass(frozen=True)
class CoxContext:
    polytope: LatticePolytope
    fan: NormalFan
    degree_map: tuple[tuple[int, ...], ...]  # N x n, rows are the rays
    image_basis: tuple[tuple[int, ...], ...]  # HNF basis of R Z^n inside Z^N

    @property
    def n(self) -> int:
        return self.polytope.ambient_dim

    @property
    def nvars(self) -> int:
        return len(self.fan.rays)

    @property
    def rays(self):
        return self.fan.rays

    @property
    def class_group_rank(self) -> int:
        return self.nvars - rank(self.degree_map)

    @property
    def rho0(self) -> DegreeClass:
        return self.degree((1,) * self.nvars)

    def degree(self, rep: Sequence[int]) -> DegreeClass:
        rep = tuple(int(x) for x in rep)
        if len(rep) != self.nvars:
            raise ValueError(f"degree representative needs {self.nvars} entries")
        return DegreeClass(rep, tuple(reduce_mod_lattice(rep, self.image_basis)), self)

    def polytope_degree(self, P: LatticePolytope) -> DegreeClass:
        """Class ``(a_j)`` with ``a_j = -min_{m in P} <m, eta_j>``."""
        return self.degree(tuple(-P.min_pairing(r) for r in self.rays))

    def pairing(self, m: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(m, r)) for r in self.rays)

    def rational_class(self, rep: Sequence[int]) -> tuple[Fraction, ...]:
        """Image in the class group tensored with Q (torsion killed)."""
        L = self._cokernel_functionals()
        return tuple(sum(Fraction(a) * b for a, b in zip(row, rep)) for row in L)

    def _cokernel_functionals(self):
        cached = getattr(self, "_coker", None)
        if cached is None:
            cached = left_kernel(self.degree_map, self.nvars)
            object.__setattr__(self, "_coker", cached)
        return cached

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "offsets": list(self.fan.offsets),
            "degree_map": [list(r) for r in self.degree_map],
            "image_lattice_basis": [list(r) for r in self.image_basis],
            "class_group_rank": self.class_group_rank,
            "rho0": self.rho0.to_json(),
        }


@dataclass(frozen=True)
class DegreeClass:
    """Coset ``representative + R Z^n``; equality uses the HNF-reduced ``canonical``."""

    representative: tuple[int, ...]
    canonical: tuple[int, ...]
    ctx: CoxContext

    def __eq__(self, other) -> bool:
        return isinstance(other, DegreeClass) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __add__(self, other: DegreeClass) -> DegreeClass:
        return self.ctx.degree(tuple(a + b for a, b in zip(self.representative, other.representative)))

    def __sub__(self, other: DegreeClass) -> DegreeClass:
        return self.ctx.degree(tuple(a - b for a, b in zip(self.representative, other.representative)))

    def __rmul__(self, k: int) -> DegreeClass:
        return self.ctx.degree(tuple(k * a for a in self.representative))

    def __repr__(self) -> str:
        return f"DegreeClass({list(self.representative)} ~ {list(self.canonical)})"

    def to_json(self) -> dict:
        return {"representative": list(self.representative), "canonical": list(self.canonical)}


@dataclass(frozen=True)
class CoxPolynomial:
    terms: dict
    degree: DegreeClass

    def __post_init__(self):
        ctx = self.degree.ctx
        for e in self.terms:
            if len(e) != ctx.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad Cox exponent {e}")
            if ctx.degree(e) != self.degree:
                raise DegreeHypothesisError(f"monomial {e} is not of degree {self.degree.canonical}")

    @classmethod
    def from_laurent(cls, p: LaurentPolynomial, degree: DegreeClass) -> CoxPolynomial:
        return cls(dict(p.terms), degree)

    def as_laurent(self) -> LaurentPolynomial:
        return LaurentPolynomial(self.degree.ctx.nvars, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoxPolynomial):
            return NotImplemented
        return self.terms == other.terms and (not self.terms or self.degree == other.degree)

    def to_string(self) -> str:
        return self.as_laurent().to_string([f"x{j + 1}" for j in range(self.degree.ctx.nvars)])

    def to_json(self) -> dict:
        return {
            "polynomial": self.to_string(),
            "terms": [[list(e), rat_to_json(c)] for e, c in sorted(self.terms.items())],
            "degree": self.degree.to_json(),
            "exact": True,
        }


def cox_names(ctx: CoxContext) -> list[str]:
    return [f"x{j + 1}" for j in range(ctx.nvars)]


def parse_cox(src: str, ctx: CoxContext, degree: DegreeClass | None = None) -> CoxPolynomial:
    """Parse a homogeneous polynomial in ``x1..xN``; the degree defaults to that of any term."""
    from .laurent import parse

    p = parse(src, cox_names(ctx))
    if degree is None:
        if p.is_zero():
            raise ValueError("cannot infer the degree of the zero polynomial")
        degree = ctx.degree(min(p.terms))
    return CoxPolynomial(dict(p.terms), degree)


# ---------------------------------------------------------------------------


def build_context(P: LatticePolytope) -> CoxContext:
    if not P.is_full_dimensional:
        raise ValueError("the Cox ring needs a full-dimensional polytope")
    fan = normal_fan(P)
    R = tuple(tuple(r) for r in fan.rays)
    image = hnf_basis(transpose(R))
    return CoxContext(P, fan, R, tuple(tuple(int(x) for x in row) for row in image))


def homogenize(f: LaurentPolynomial, support: LatticePolytope, ctx: CoxContext) -> CoxPolynomial:
    deg = ctx.polytope_degree(support)
    a = deg.representative
    terms = {}
    for m, c in f.terms.items():
        e = tuple(p + q for p, q in zip(ctx.pairing(m), a))
        if any(x < 0 for x in e):
            raise ValueError(f"monomial {m} violates the support inequalities")
        terms[e] = c
    return CoxPolynomial(terms, deg)


def dehomogenize(F: CoxPolynomial, ctx: CoxContext, representative: Sequence[int] | None = None) -> LaurentPolynomial:
    """``F / x^a`` written in torus coordinates, ``a`` the degree representative."""
    a = tuple(representative) if representative is not None else F.degree.representative
    terms = {}
    for e, c in F.terms.items():
        sol = solve_linear(ctx.degree_map, [x - y for x, y in zip(e, a)])
        if sol is None or sol[1] or any(v.denominator != 1 for v in sol[0]):
            raise DegreeHypothesisError(f"monomial {e} is not in the class of {list(a)}")
        terms[tuple(int(v) for v in sol[0])] = c
    return LaurentPolynomial(ctx.n, terms)


def degree_polytope_points(alpha: DegreeClass) -> list[tuple[int, ...]]:
    """Lattice points of ``P_alpha = {m : <m, eta_j> >= -a_j}``."""
    ctx = alpha.ctx
    a = alpha.representative
    n = ctx.n
    R = ctx.degree_map
    verts = []
    for idx in itertools.combinations(range(ctx.nvars), n):
        A = [list(R[j]) for j in idx]
        inv = inverse(A)
        if inv is None:
            continue
        m = [sum(inv[i][k] * (-a[idx[k]]) for k in range(n)) for i in range(n)]
        if all(sum(x * y for x, y in zip(m, R[j])) >= -a[j] for j in range(ctx.nvars)):
            verts.append(m)
    if not verts:
        return []
    box = [range(ceil(min(v[i] for v in verts)), floor(max(v[i] for v in verts)) + 1) for i in range(n)]
    return [
        p
        for p in itertools.product(*box)
        if all(sum(x * y for x, y in zip(p, R[j])) >= -a[j] for j in range(ctx.nvars))
    ]


def graded_piece(alpha: DegreeClass) -> list[tuple[int, ...]]:
    """Monomial basis of ``S_alpha`` (exponent vectors), sorted."""
    a = alpha.representative
    ctx = alpha.ctx
    return sorted(tuple(p + q for p, q in zip(ctx.pairing(m), a)) for m in degree_polytope_points(alpha))


def _product_columns(generators: Sequence[CoxPolynomial], alpha: DegreeClass):
    """Columns ``x^b F_i`` spanning the degree-``alpha`` part of the ideal."""
    cols = []
    labels = []
    for i, F in enumerate(generators):
        if F.is_zero():
            continue
        for b in graded_piece(alpha - F.degree):
            cols.append({tuple(x + y for x, y in zip(b, e)): c for e, c in F.terms.items()})
            labels.append((i, b))
    return cols, labels


def graded_quotient_dim(generators: Sequence[CoxPolynomial], alpha: DegreeClass) -> int:
    """``dim S_alpha - dim (F_0, ..., F_k)_alpha``."""
    mons = graded_piece(alpha)
    index = {m: k for k, m in enumerate(mons)}
    cols, _ = _product_columns(generators, alpha)
    if not cols:
        return len(mons)
    M = [[Fraction(0)] * len(cols) for _ in mons]
    for j, col in enumerate(cols):
        for e, c in col.items():
            M[index[e]][j] = c
    return len(mons) - rank(M)


@dataclass(frozen=True)
class CriticalData:
    degrees: tuple[DegreeClass, ...]
    rho_F: DegreeClass

    def to_json(self) -> dict:
        return {"degrees": [d.to_json() for d in self.degrees], "rho_F": self.rho_F.to_json()}


def critical_degree(degrees: Sequence[DegreeClass], ctx: CoxContext) -> CriticalData:
    if len(degrees) != ctx.n + 1:
        raise ValueError(f"critical degree needs {ctx.n + 1} degrees")
    total = reduce(lambda x, y: x + y, degrees)
    return CriticalData(tuple(degrees), total - ctx.rho0)


def infer_multiples(degrees: Sequence[DegreeClass]) -> list[int]:
    """Smallest positive integers ``k_i`` with ``alpha_i`` proportional to ``k_i`` over Q."""
    vecs = [d.ctx.rational_class(d.representative) for d in degrees]
    piv = next((j for j, x in enumerate(vecs[0]) if x), None)
    if piv is None:
        raise DegreeHypothesisError("degree is torsion; multiples cannot be inferred")
    ratios = []
    for v in vecs:
        c = v[piv] / vecs[0][piv]
        if c <= 0 or any(x != c * y for x, y in zip(v, vecs[0])):
            raise DegreeHypothesisError("degrees are not positive multiples of a common class")
        ratios.append(c)
    den = reduce(lambda x, y: x * y // gcd(x, y), (r.denominator for r in ratios), 1)
    ints = [int(r * den) for r in ratios]
    g = reduce(gcd, ints)
    return [k // g for k in ints]


def _divide_monomial(p: LaurentPolynomial, e: Sequence[int], c: Fraction) -> dict:
    out = {}
    for m, v in p.terms.items():
        q = tuple(a - b for a, b in zip(m, e))
        if any(x < 0 for x in q):
            raise DegreeHypothesisError("jacobian determinant is not divisible as required")
        out[q] = v / c
    return out


def toric_jacobian_cox(
    F: Sequence[CoxPolynomial],
    ctx: CoxContext,
    I: Sequence[int] | None = None,
    k: Sequence[int] | None = None,
) -> CoxPolynomial:
    """Toric jacobian from the bordered determinant.

    Columns are the polynomials; the first row holds ``k_j F_j`` and row ``s``
    holds ``dF_j/dx_{i_s}`` for ``I = {i_1 < ... < i_n}`` (0-based ray indices).
    The determinant is divided by ``d_I * prod_{j not in I} x_j`` where ``d_I``
    is the determinant of the rays in ``I``.
    """
    n = ctx.n
    if len(F) != n + 1:
        raise ValueError(f"toric jacobian needs {n + 1} polynomials")
    k = list(k) if k is not None else infer_multiples([f.degree for f in F])
    if I is None:
        I = next(c for c in itertools.combinations(range(ctx.nvars), n) if det([ctx.rays[j] for j in c]) != 0)
    I = sorted(I)
    dI = det([ctx.rays[j] for j in I])
    if dI == 0:
        raise ValueError("rays indexed by I are linearly dependent")
    polys = [f.as_laurent() for f in F]
    M = [[p * kj for p, kj in zip(polys, k)]] + [[p.derivative(i) for p in polys] for i in I]
    D = polynomial_det(M)
    if not isinstance(D, LaurentPolynomial):
        D = LaurentPolynomial.constant(ctx.nvars, D)
    mono = tuple(0 if j in I else 1 for j in range(ctx.nvars))
    crit = critical_degree([f.degree for f in F], ctx).rho_F
    return CoxPolynomial(_divide_monomial(D, mono, Fraction(dI)), crit)


def _cone_rays(cone, ctx: CoxContext) -> list[int]:
    if isinstance(cone, Cone):
        return sorted(cone.rays)
    return sorted(int(j) for j in cone)


def delta_element(F: Sequence[CoxPolynomial], cone, ctx: CoxContext) -> CoxPolynomial:
    """Determinant of the monomial-wise decomposition ``F_j = x^sigma_hat F_0j + sum_i x_i F_ij``.

    A monomial goes to the smallest-index ray of ``sigma`` whose variable divides
    it; the leftover (vertex) monomial must be divisible by ``x^sigma_hat``.
    ``cone`` is a ``Cone`` or an iterable of 0-based ray indices.
    """
    n = ctx.n
    sig = _cone_rays(cone, ctx)
    if len(sig) != n or rank([ctx.rays[j] for j in sig]) != n:
        raise ValueError("delta element needs a maximal simplicial cone")
    if len(F) != n + 1:
        raise ValueError(f"delta element needs {n + 1} polynomials")
    hat = tuple(0 if j in sig else 1 for j in range(ctx.nvars))
    N = ctx.nvars
    rows = [[LaurentPolynomial(N) for _ in F] for _ in range(n + 1)]
    for col, f in enumerate(F):
        for e, c in f.terms.items():
            hit = next((s for s, j in enumerate(sig) if e[j] > 0), None)
            if hit is None:
                q = tuple(a - b for a, b in zip(e, hat))
                if any(x < 0 for x in q):
                    raise DegreeHypothesisError("degree not ample for sigma: vertex term misses x^sigma_hat")
                rows[0][col] = rows[0][col] + LaurentPolynomial.monomial(q, c)
            else:
                j = sig[hit]
                q = tuple(x - (1 if t == j else 0) for t, x in enumerate(e))
                rows[hit + 1][col] = rows[hit + 1][col] + LaurentPolynomial.monomial(q, c)
    D = polynomial_det(rows)
    if not isinstance(D, LaurentPolynomial):
        D = LaurentPolynomial.constant(N, D)
    crit = critical_degree([f.degree for f in F], ctx).rho_F
    return CoxPolynomial(dict(D.terms), crit)


@dataclass(frozen=True)
class EmptinessCertificate:
    empty: bool
    cones: tuple[tuple[tuple[int, ...], bool], ...]  # (ray indices, saturation is the unit ideal)

    def to_json(self) -> dict:
        return {
            "verdict": "empty" if self.empty else "nonempty",
            "empty": self.empty,
            "cones": [{"rays": [j + 1 for j in c], "unit_ideal": u} for c, u in self.cones],
        }


def irrelevant_saturation(F: Sequence[CoxPolynomial], ctx: CoxContext, step_cap: int = 100_000) -> EmptinessCertificate:
    """``V_X(F)`` is empty iff every saturation ``<F> : (x^sigma_hat)^inf`` is the unit ideal."""
    polys = [dict(f.terms) for f in F if not f.is_zero()]
    out = []
    for cone in ctx.fan.maximal_cones:
        hat = tuple(0 if j in cone.rays else 1 for j in range(ctx.nvars))
        gb = saturate(polys, ctx.nvars, hat, step_cap=step_cap)
        out.append((tuple(sorted(cone.rays)), gb.is_unit()))
    return EmptinessCertificate(all(u for _, u in out), tuple(out))


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    cofactors: tuple[CoxPolynomial | LaurentPolynomial, ...] | None

    def to_json(self) -> dict:
        return {
            "verdict": "member" if self.member else "non-member",
            "member": self.member,
            "cofactors": [c.to_string() for c in self.cofactors] if self.cofactors else None,
            "exact": True,
        }


def membership(H: CoxPolynomial, F: Sequence[CoxPolynomial], step_cap: int = 100_000) -> MembershipResult:
    """Ideal membership by Groebner normal form; cofactors from the graded linear system."""
    ctx = H.degree.ctx
    polys = [dict(f.terms) for f in F if not f.is_zero()]
    if not polys:
        return MembershipResult(H.is_zero(), tuple(CoxPolynomial({}, f.degree) for f in F) if H.is_zero() else None)
    gb = groebner_basis(polys, ctx.nvars, step_cap=step_cap)
    if gb.reduce(dict(H.terms)):
        return MembershipResult(False, None)
    cols, labels = _product_columns(F, H.degree)
    mons = sorted({e for col in cols for e in col} | set(H.terms))
    index = {m: r for r, m in enumerate(mons)}
    M = [[Fraction(0)] * len(cols) for _ in mons]
    for j, col in enumerate(cols):
        for e, c in col.items():
            M[index[e]][j] = c
    rhs = [H.terms.get(m, Fraction(0)) for m in mons]
    sol = solve_linear(M, rhs) if cols else None
    if sol is None:
        raise ArithmeticError("normal form says member but the graded system has no solution")
    cof: list[dict] = [{} for _ in F]
    for (i, b), c in zip(labels, sol[0]):
        if c:
            cof[i][b] = c
    cofactors = tuple(CoxPolynomial(cof[i], H.degree - F[i].degree) for i in range(len(F)))
    total = LaurentPolynomial(ctx.nvars)
    for G, f in zip(cofactors, F):
        total = total + G.as_laurent() * f.as_laurent()
    if total != H.as_laurent():
        raise ArithmeticError("cofactors failed exact verification")
    return MembershipResult(True, cofactors)


# ---------------------------------------------------------------------------
# toric residues evaluated in the torus


def degree_support(alpha: DegreeClass) -> LatticePolytope:
    """Convex hull of the lattice points of ``P_alpha``."""
    pts = degree_polytope_points(alpha)
    if not pts:
        raise ValueError("degree polytope has no lattice points")
    return convex_hull(pts)


def toric_residue(
    H: CoxPolynomial,
    F: Sequence[CoxPolynomial],
    ctx: CoxContext,
    drop: int = 0,
    step_cap: int = 100_000,
    check_infinity: bool = True,
) -> Fraction:
    """Toric residue ``Res_F(H)`` of a critical-degree ``H``, summed over torus points.

    With ``f_j`` the dehomogenized ``F_j`` and ``h`` the dehomogenization of
    ``H`` against ``sum_j a_j - (1,...,1)``, the value is
    ``(-1)^drop * Res^T_{f_j, j != drop}(h / f_drop)``.  This is valid when the
    subsystem has no zeros at infinity and ``f_drop`` vanishes at none of its
    torus zeros; both are checked exactly.
    """
    from .polytope import PolytopeSequence, mixed_volume
    from .quotient import build_quotient, multiplication_matrix, normal_form
    from .residue import ResidueContext

    n = ctx.n
    if len(F) != n + 1:
        raise ValueError(f"toric residue needs {n + 1} polynomials")
    crit = critical_degree([f.degree for f in F], ctx).rho_F
    if H.degree != crit and not H.is_zero():
        raise DegreeHypothesisError("H is not of critical degree")
    rep = tuple(sum(f.degree.representative[j] for f in F) - 1 for j in range(ctx.nvars))
    h = dehomogenize(CoxPolynomial(H.terms, ctx.degree(rep)), ctx)
    fs = [dehomogenize(f, ctx) for f in F]
    sub = [fs[j] for j in range(n + 1) if j != drop]
    supports = tuple(degree_support(F[j].degree) for j in range(n + 1) if j != drop)
    system = LaurentSystem(tuple(sub), supports)
    q = build_quotient(system, step_cap)
    if check_infinity:
        mv = mixed_volume(PolytopeSequence(supports))
        if mv != q.degree:
            raise DegreeHypothesisError(
                f"subsystem without F_{drop} has zeros at infinity (mixed volume {mv}, torus degree {q.degree})"
            )
    ctx_res = ResidueContext(system, q, step_cap=step_cap)
    if not ctx_res.simple:
        raise ArithmeticError("torus-side evaluation needs simple zeros of the subsystem")
    if q.degree == 0:
        return Fraction(0)
    Mf = multiplication_matrix(fs[drop], q)
    inv = inverse(Mf)
    if inv is None:
        raise DegreeHypothesisError(f"F_{drop} vanishes at a torus zero of the other polynomials")
    v = normal_form(h, q)
    w = [sum(inv[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
    val = sum(a * b for a, b in zip(w, ctx_res.functional))
    return val if drop % 2 == 0 else -val
