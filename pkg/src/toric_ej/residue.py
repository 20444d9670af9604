"""Global residues in the torus, vanishing checks, converse certificates, infinity audits."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    complex_to_json,
    integer_kernel,
    inverse,
    left_kernel,
    mat_mul,
    rat_to_json,
    solve_linear,
    trace,
)
from .laurent import (
    LaurentPolynomial,
    LaurentSystem,
    facial_system,
    random_polynomial,
    torus_jacobian,
)
from .polytope import (
    PolytopeSequence,
    interior_lattice_points,
    is_indecomposable,
    mixed_volume,
    normal_fan,
)
from .quotient import (
    InfiniteVarietyError,
    QuotientStructure,
    build_quotient,
    multiplication_matrix,
    normal_form,
    numeric_roots,
    saturate_to_torus,
)

DEFORMATION_STEPS = (Fraction(1, 10**4), Fraction(1, 10**5), Fraction(1, 10**6))


class EmptyVarietyError(ValueError):
    """The torus zero set is empty where a nonempty one is required."""


def _num_json(v) -> object:
    return rat_to_json(v) if isinstance(v, (int, Fraction)) else complex_to_json(complex(v))


@dataclass(frozen=True)
class ResidueReport:
    value: Fraction | complex
    exact: bool
    method: str  # "trace-inverse", "numeric-roots" or "deformation"
    warning: str | None = None

    def is_zero(self, tol: float = 1e-9) -> bool:
        if self.exact:
            return self.value == 0
        return abs(complex(self.value)) <= tol

    def to_json(self) -> dict:
        out = {"value": _num_json(self.value), "exact": self.exact, "method": self.method}
        if self.warning:
            out["warning"] = self.warning
        return out


class ResidueContext:
    """Shared data for many residues of one system: quotient, jacobian, trace functional.

    On the exact path ``Res(h) = tr(M_h M_J^-1) = sum_k NF(h)_k r_k`` with
    ``r_k = tr(M_{b_k} M_J^-1)``, so each residue costs one normal form.
    """

    def __init__(
        self,
        system: LaurentSystem,
        quotient: QuotientStructure | None = None,
        tol: float = 1e-9,
        seed: int = 0,
        step_cap: int = 100_000,
        dim_cap: int = 200,
    ):
        if not system.is_square:
            raise ValueError("residues need a square system")
        self.system = system
        self.tol = tol
        self.seed = seed
        self.step_cap = step_cap
        self.dim_cap = dim_cap
        self.q = quotient if quotient is not None else build_quotient(system, step_cap)
        self.jacobian = torus_jacobian(system)
        self._functional: list[Fraction] | None = None
        self.simple = True
        if self.q.degree:
            MJ = multiplication_matrix(self.jacobian, self.q)
            inv = inverse(MJ)
            if inv is None:
                self.simple = False
            else:
                self._functional = [
                    trace(mat_mul(multiplication_matrix(LaurentPolynomial.monomial(b), self.q), inv))
                    for b in self.q.basis
                ]
        self._roots = None
        self._deformed = None

    @property
    def functional(self) -> list[Fraction] | None:
        """Residue functional on the quotient basis (exact path only)."""
        return self._functional

    def residue(self, h: LaurentPolynomial) -> ResidueReport:
        if self.q.degree == 0:
            return ResidueReport(Fraction(0), True, "trace-inverse", "V_T(f) is empty; the residue is an empty sum")
        if self.simple:
            v = normal_form(h, self.q)
            return ResidueReport(sum(a * b for a, b in zip(v, self._functional)), True, "trace-inverse")
        return self._deformation_residue(h)

    def residue_numeric(self, h: LaurentPolynomial) -> ResidueReport:
        """Sum of ``h/J`` over numerically computed simple roots."""
        roots = self.roots()
        if any(p.multiplicity != 1 for p in roots.points):
            raise ValueError("numeric-roots residue needs simple roots")
        total = 0j
        for p in roots.points:
            z = p.as_complex()
            total += complex(h.evaluate(z)) / complex(self.jacobian.evaluate(z))
        return ResidueReport(total, False, "numeric-roots")

    def roots(self):
        if self._roots is None:
            self._roots = numeric_roots(self.q, self.tol, self.seed, self.dim_cap)
        return self._roots

    # -- multiple roots ------------------------------------------------------

    def _deformations(self):
        """Per step: (epsilon, roots near the original ones, deformed jacobian)."""
        if self._deformed is not None:
            return self._deformed
        base = [p.as_complex() for p in self.roots().points]
        mults = [p.multiplicity for p in self.roots().points]
        if len(base) > 1:
            sep = min(
                max(abs(a - b) for a, b in zip(x, y)) for i, x in enumerate(base) for y in base[i + 1 :]
            )
            radius = min(0.25 * sep, 0.1)
        else:
            radius = 0.1
        rng = random.Random(self.seed + 7919)
        g = [random_polynomial(P, rng) for P in self.system.supports()]
        out = []
        for eps in DEFORMATION_STEPS:
            polys = [f + eps * gi for f, gi in zip(self.system.polys, g)]
            sysd = self.system.with_polys(polys)
            qd = build_quotient(sysd, self.step_cap)
            rd = numeric_roots(qd, self.tol, self.seed, self.dim_cap)
            Jd = torus_jacobian(sysd)
            kept = []
            counts = [0] * len(base)
            for p in rd.points:
                z = p.as_complex()
                dist = [max(abs(a - b) for a, b in zip(z, x)) for x in base]
                k = min(range(len(base)), key=dist.__getitem__)
                if dist[k] <= radius:
                    if p.multiplicity != 1:
                        raise ArithmeticError("deformation did not split a multiple root")
                    kept.append(z)
                    counts[k] += 1
            if counts != mults:
                raise ArithmeticError(
                    f"deformed roots near the original zeros ({counts}) do not match multiplicities ({mults})"
                )
            out.append((eps, kept, Jd))
        self._deformed = out
        return out

    def _deformation_residue(self, h: LaurentPolynomial) -> ResidueReport:
        samples = []
        for eps, kept, Jd in self._deformations():
            val = sum(complex(h.evaluate(z)) / complex(Jd.evaluate(z)) for z in kept)
            samples.append((float(eps), val))
        # quadratic Richardson extrapolation to epsilon = 0 (Lagrange at 0)
        value = 0j
        for i, (xi, yi) in enumerate(samples):
            w = 1.0
            for j, (xj, _) in enumerate(samples):
                if j != i:
                    w *= (0 - xj) / (xi - xj)
            value += w * yi
        return ResidueReport(value, False, "deformation", "multiple roots: residue estimated by deformation")


def global_residue(system: LaurentSystem, h: LaurentPolynomial, **kw) -> ResidueReport:
    ctx = ResidueContext(system, **kw)
    if ctx.q.degree == 0:
        warnings.warn("V_T(f) is empty; the residue is an empty sum", stacklevel=2)
    return ctx.residue(h)


def total_polytope(system: LaurentSystem):
    return PolytopeSequence(system.supports()).total()


# ---------------------------------------------------------------------------
# vanishing test


@dataclass(frozen=True)
class EulerJacobiCertificate:
    interior_points: tuple[tuple[int, ...], ...]
    residues: tuple[ResidueReport, ...]
    all_vanish: bool

    def to_json(self) -> dict:
        return {
            "interior": [list(m) for m in self.interior_points],
            "residues": [_num_json(r.value) for r in self.residues],
            "residue_reports": [r.to_json() for r in self.residues],
            "all_vanish": self.all_vanish,
            "exact": all(r.exact for r in self.residues),
        }


def euler_jacobi_check(system: LaurentSystem, ctx: ResidueContext | None = None, **kw) -> EulerJacobiCertificate:
    """Residues of every monomial with exponent in the interior of ``P_1 + ... + P_n``."""
    ctx = ctx or ResidueContext(system, **kw)
    P = total_polytope(system)
    pts = tuple(interior_lattice_points(P)) if P.is_full_dimensional else ()
    res = tuple(ctx.residue(LaurentPolynomial.monomial(m)) for m in pts)
    return EulerJacobiCertificate(pts, res, all(r.is_zero(ctx.tol) for r in res))


# ---------------------------------------------------------------------------
# converse certificate


@dataclass(frozen=True)
class ConverseCertificate:
    outcome: str  # "found_pJ" or "no_pJ"
    interior_points: tuple[tuple[int, ...], ...]
    basis: tuple[tuple[int, ...], ...]
    jacobian_nf: tuple[Fraction, ...]
    p_J: LaurentPolynomial | None = None
    dual_witness: tuple[Fraction, ...] | None = None

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "outcome": self.outcome,
            "interior": [list(m) for m in self.interior_points],
            "basis": [list(b) for b in self.basis],
            "jacobian_normal_form": [rat_to_json(x) for x in self.jacobian_nf],
            "p_J": self.p_J.to_string(names) if self.p_J is not None else None,
            "dual_witness": [rat_to_json(x) for x in self.dual_witness] if self.dual_witness else None,
            "exact": True,
        }


def converse_certificate(system: LaurentSystem, ctx: ResidueContext | None = None, **kw) -> ConverseCertificate:
    """Decide whether ``J^T`` is congruent to a combination of interior monomials."""
    ctx = ctx or ResidueContext(system, **kw)
    q = ctx.q
    if q.degree == 0:
        raise EmptyVarietyError("V_T(f) is empty; the converse certificate needs torus zeros")
    P = total_polytope(system)
    pts = tuple(interior_lattice_points(P)) if P.is_full_dimensional else ()
    cols = [normal_form(LaurentPolynomial.monomial(m), q) for m in pts]
    target = normal_form(ctx.jacobian, q)
    d = q.degree
    N = [[cols[j][k] for j in range(len(pts))] for k in range(d)]
    sol = solve_linear(N, target) if pts else (None if any(target) else ([], []))
    basis = tuple(q.basis)
    if sol is not None:
        coeffs = sol[0]
        n = system.n_vars
        pJ = LaurentPolynomial(n, {m: c for m, c in zip(pts, coeffs)})
        if any(normal_form(ctx.jacobian - pJ, q)):
            raise ArithmeticError("representative failed exact verification")
        return ConverseCertificate("found_pJ", pts, basis, tuple(target), p_J=pJ)
    # a functional killing every interior class but not the jacobian
    ker = left_kernel(N, d) if pts else [[Fraction(int(i == k)) for i in range(d)] for k in range(d)]
    for y in ker:
        if sum(a * b for a, b in zip(y, target)):
            if any(sum(a * b for a, b in zip(y, c)) for c in cols):
                continue
            return ConverseCertificate("no_pJ", pts, basis, tuple(target), dual_witness=tuple(y))
    raise ArithmeticError("no dual witness found for an unsolvable system")


# ---------------------------------------------------------------------------
# zeros at infinity


@dataclass(frozen=True)
class ConeCheck:
    rays: tuple[tuple[int, ...], ...]
    w: tuple[int, ...]
    facial: LaurentSystem
    solvable: bool
    finite: bool | None  # finiteness of the facial zero set modulo the cone's subtorus

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "w": list(self.w),
            "facial_system": [f.to_string(self.facial.variables) for f in self.facial.polys],
            "solvable": self.solvable,
            "finite": self.finite,
        }


@dataclass(frozen=True)
class InfinityAudit:
    cones_checked: int
    deficient_cones: tuple[ConeCheck, ...]
    mixed_volume: Fraction
    degree: int

    @property
    def deficit(self) -> Fraction:
        return self.mixed_volume - self.degree

    @property
    def dimension_zero_at_infinity(self) -> bool:
        return all(c.finite for c in self.deficient_cones)

    def to_json(self) -> dict:
        return {
            "mixed_volume": rat_to_json(self.mixed_volume),
            "degree": self.degree,
            "deficit": rat_to_json(self.deficit),
            "cones_checked": self.cones_checked,
            "deficient_cones": [c.to_json() for c in self.deficient_cones],
            "dimension_zero_at_infinity": self.dimension_zero_at_infinity,
            "exact": True,
        }


def _orbit_system(facial: LaurentSystem, rays: Sequence[Sequence[int]]) -> LaurentSystem | None:
    """Rewrite a facial system in characters of the quotient torus ``T / T_tau``.

    Each facial polynomial is divided by one of its monomials; the remaining
    exponents lie in ``tau-perp`` and are expressed in a lattice basis of it.
    Returns None when ``tau`` is full-dimensional (no quotient variables left).
    """
    n = facial.n_vars
    B = integer_kernel([list(r) for r in rays], n)
    k = len(B)
    if k == 0:
        return None
    BT = [[B[j][i] for j in range(k)] for i in range(n)]
    polys = []
    for f in facial.polys:
        if f.is_zero():
            polys.append(LaurentPolynomial(k))
            continue
        m0 = min(f.terms)
        terms = {}
        for e, c in f.terms.items():
            diff = [a - b for a, b in zip(e, m0)]
            sol = solve_linear(BT, diff)
            if sol is None:
                raise ArithmeticError("facial support is not contained in the orthogonal lattice")
            coords = tuple(int(x) for x in sol[0])
            terms[coords] = c
        polys.append(LaurentPolynomial(k, terms))
    return LaurentSystem(tuple(polys))


def audit_infinity(
    system: LaurentSystem, quotient: QuotientStructure | None = None, step_cap: int = 100_000
) -> InfinityAudit:
    """Check every nonzero cone of the normal fan of ``P = sum P_i`` for facial torus zeros."""
    supports = system.supports()
    seq = PolytopeSequence(supports)
    P = seq.total()
    if not P.is_full_dimensional:
        raise ValueError("the infinity audit needs a full-dimensional sum of supports")
    fan = normal_fan(P)
    q = quotient if quotient is not None else build_quotient(system, step_cap)
    MV = mixed_volume(seq)
    deficient = []
    for cone in fan.cones:
        rays = tuple(fan.rays[j] for j in sorted(cone.rays))
        w = cone.generator_sum(fan.rays)
        facial = facial_system(system, w)
        reduced = _orbit_system(facial, rays)
        if reduced is None:
            solvable = all(f.is_zero() for f in facial.polys)
            finite = True if solvable else None
        else:
            sat = saturate_to_torus(reduced, step_cap)
            solvable = sat.has_torus_zero()
            finite = sat.is_zero_dimensional() if solvable else None
        if solvable:
            deficient.append(ConeCheck(rays, w, facial, True, finite))
    return InfinityAudit(len(fan.cones), tuple(deficient), MV, q.degree)


# ---------------------------------------------------------------------------
# equivalence harness


@dataclass
class EquivalenceReport:
    applicable: bool
    reasons: list[str]
    predicates: dict[str, bool | None]
    agree: bool | None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "status": "applicable" if self.applicable else "not applicable: " + "; ".join(self.reasons),
            "reasons": self.reasons,
            "predicates": self.predicates,
            "agree": self.agree,
            **self.details,
            # (i) and (iii) are exact; (ii) inherits the residue reports' flag
            "exact": self.details.get("euler_jacobi", {}).get("exact", True),
        }


def equivalence_harness(system: LaurentSystem, **kw) -> EquivalenceReport:
    """Evaluate (i) no deficit, (ii) interior residues vanish, (iii) no interior representative of ``J^T``.

    Hypothesis failures make the report "not applicable"; predicates are still
    shown whenever they can be computed.
    """
    reasons = []
    supports = system.supports()
    ind = is_indecomposable(supports)
    if not ind:
        reasons.append("supports not indecomposable")
    details: dict = {"indecomposable": ind.to_json()}
    preds: dict[str, bool | None] = {"i": None, "ii": None, "iii": None}
    try:
        ctx = ResidueContext(system, **kw)
    except InfiniteVarietyError:
        reasons.append("V_T(f) is not finite")
        return EquivalenceReport(False, reasons, preds, None, details)
    if ctx.q.degree == 0:
        reasons.append("V_T(f) is empty")
    audit = audit_infinity(system, ctx.q, ctx.step_cap)
    details["infinity"] = audit.to_json()
    if not audit.dimension_zero_at_infinity:
        reasons.append("dimension zero at infinity not verified")
    preds["i"] = audit.deficit == 0
    ej = euler_jacobi_check(system, ctx)
    details["euler_jacobi"] = ej.to_json()
    preds["ii"] = ej.all_vanish
    if ctx.q.degree:
        cc = converse_certificate(system, ctx)
        details["converse"] = cc.to_json(system.variables)
        preds["iii"] = cc.outcome == "no_pJ"
    applicable = not reasons
    agree = (preds["i"] == preds["ii"] == preds["iii"]) if applicable else None
    if applicable and not agree:
        details["counterexample"] = system.to_json()
    return EquivalenceReport(applicable, reasons, preds, agree, details)
