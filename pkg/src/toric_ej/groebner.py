"""Buchberger's algorithm over Q for sparse polynomials with nonnegative exponents.

A polynomial is a dict ``{exponent tuple: Fraction}`` without zero entries.
Orders: graded reverse lexicographic, or a block order that eliminates the
first ``k`` variables (each block compared by grevlex).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Exp = tuple[int, ...]
Poly = dict


class GroebnerStepLimit(RuntimeError):
    """Raised when the reduction-step cap is exceeded."""

    def __init__(self, cap: int, stats: dict):
        self.cap = cap
        self.stats = stats
        super().__init__(
            f"Groebner computation exceeded {cap} reduction steps "
            f"(basis size {stats.get('basis_size')}, pending pairs {stats.get('pending_pairs')})"
        )


def _grevlex(e: Sequence[int]) -> tuple:
    return (sum(e),) + tuple(-x for x in reversed(e))


class MonomialOrder:
    """``key(e)`` is larger for larger monomials."""

    def __init__(self, nvars: int, eliminate: int = 0):
        self.nvars = nvars
        self.eliminate = eliminate
        self._cache: dict[Exp, tuple] = {}

    def key(self, e: Exp) -> tuple:
        k = self._cache.get(e)
        if k is None:
            if self.eliminate:
                k = (_grevlex(e[: self.eliminate]), _grevlex(e[self.eliminate :]))
            else:
                k = _grevlex(e)
            self._cache[e] = k
        return k

    def name(self) -> str:
        return f"block(grevlex[{self.eliminate}], grevlex)" if self.eliminate else "grevlex"


# ---------------------------------------------------------------------------
# polynomial helpers


def padd(f: Poly, g: Poly, c=1) -> Poly:
    """``f + c*g``."""
    out = dict(f)
    for e, v in g.items():
        s = out.get(e, 0) + c * v
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def pmul(f: Poly, g: Poly) -> Poly:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def pmul_term(f: Poly, e: Exp, c) -> Poly:
    return {tuple(a + b for a, b in zip(m, e)): v * c for m, v in f.items()}


def pscale(f: Poly, c) -> Poly:
    return {e: v * c for e, v in f.items()} if c else {}


def divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def leading(f: Poly, order: MonomialOrder) -> Exp:
    return max(f, key=order.key)


# ---------------------------------------------------------------------------


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis; ``generators`` are monic and sorted by leading monomial."""

    nvars: int
    order: MonomialOrder
    generators: list[Poly]
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self.leads = [leading(g, self.order) for g in self.generators]

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and set(self.generators[0]) == {(0,) * self.nvars}

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self.generators, self.leads, self.order)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f)

    def is_zero_dimensional(self) -> bool:
        pure = set()
        for m in self.leads:
            nz = [i for i, x in enumerate(m) if x]
            if len(nz) == 1:
                pure.add(nz[0])
        return self.is_unit() or len(pure) == self.nvars

    def standard_monomials(self) -> list[Exp]:
        """Monomials outside the leading ideal, sorted increasingly in the order."""
        if self.is_unit():
            return []
        if not self.is_zero_dimensional():
            raise ValueError("ideal is not zero-dimensional")
        out = []
        start = (0,) * self.nvars
        seen = {start}
        stack = [start]
        while stack:
            m = stack.pop()
            if any(divides(l, m) for l in self.leads):
                continue
            out.append(m)
            for i in range(self.nvars):
                nm = m[:i] + (m[i] + 1,) + m[i + 1 :]
                if nm not in seen:
                    seen.add(nm)
                    stack.append(nm)
        out.sort(key=self.order.key)
        return out


def normal_form(f: Poly, G: Sequence[Poly], leads: Sequence[Exp], order: MonomialOrder, counter: list | None = None) -> Poly:
    """Full reduction of ``f`` modulo ``G`` (``G`` monic with leading monomials ``leads``)."""
    p = dict(f)
    rem: dict = {}
    while p:
        m = max(p, key=order.key)
        c = p[m]
        for g, l in zip(G, leads):
            if divides(l, m):
                q = tuple(a - b for a, b in zip(m, l))
                for e, v in g.items():
                    e2 = tuple(a + b for a, b in zip(e, q))
                    s = p.get(e2, 0) - c * v
                    if s:
                        p[e2] = s
                    else:
                        p.pop(e2, None)
                if counter is not None:
                    counter[0] += 1
                    if counter[0] > counter[1]:
                        raise _StepOverflow()
                break
        else:
            rem[m] = c
            del p[m]
    return rem


class _StepOverflow(Exception):
    pass


def _monic(f: Poly, order: MonomialOrder) -> Poly:
    c = f[leading(f, order)]
    return f if c == 1 else {e: v / c for e, v in f.items()}


def groebner_basis(
    polys: Iterable[Poly], nvars: int, eliminate: int = 0, step_cap: int = 100_000
) -> GroebnerBasis:
    """Reduced Groebner basis with sugar pair selection and both Buchberger criteria."""
    order = MonomialOrder(nvars, eliminate)
    G: list[Poly] = []
    leads: list[Exp] = []
    sugar: list[int] = []
    pairs: list = []
    pending: set[tuple[int, int]] = set()
    counter = [0, step_cap]
    stats = {"pairs_reduced": 0, "pairs_skipped": 0, "zero_reductions": 0}

    def add(h: Poly, s: int) -> None:
        h = _monic(h, order)
        lh = leading(h, order)
        k = len(G)
        G.append(h)
        leads.append(lh)
        sugar.append(s)
        for i in range(k):
            L = lcm(leads[i], lh)
            sg = max(sugar[i] + sum(L) - sum(leads[i]), s + sum(L) - sum(lh))
            heapq.heappush(pairs, (sg, order.key(L), i, k))
            pending.add((i, k))

    inputs = [dict((tuple(e), Fraction(c)) for e, c in f.items() if c) for f in polys]
    inputs = [f for f in inputs if f]
    inputs.sort(key=lambda f: order.key(leading(f, order)))
    try:
        for f in inputs:
            r = normal_form(f, G, leads, order, counter)
            if r:
                add(r, max(sum(e) for e in f))
        while pairs:
            sg, _, i, j = heapq.heappop(pairs)
            pending.discard((i, j))
            li, lj = leads[i], leads[j]
            L = lcm(li, lj)
            if all(a == 0 or b == 0 for a, b in zip(li, lj)):
                stats["pairs_skipped"] += 1
                continue
            chain = False
            for k in range(len(G)):
                if k in (i, j) or not divides(leads[k], L):
                    continue
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    chain = True
                    break
            if chain:
                stats["pairs_skipped"] += 1
                continue
            si = pmul_term(G[i], tuple(a - b for a, b in zip(L, li)), 1)
            sj = pmul_term(G[j], tuple(a - b for a, b in zip(L, lj)), 1)
            s = padd(si, sj, -1)
            stats["pairs_reduced"] += 1
            r = normal_form(s, G, leads, order, counter)
            if r:
                add(r, sg)
            else:
                stats["zero_reductions"] += 1
    except _StepOverflow:
        stats.update(basis_size=len(G), pending_pairs=len(pairs), steps=counter[0])
        raise GroebnerStepLimit(step_cap, stats) from None

    # minimal basis, then interreduce
    keep = []
    for i, l in enumerate(leads):
        if any(divides(leads[j], l) and (leads[j] != l or j < i) for j in range(len(G)) if j != i):
            continue
        keep.append(i)
    basis = [G[i] for i in keep]
    bleads = [leads[i] for i in keep]
    reduced = []
    for idx, g in enumerate(basis):
        others = [b for k, b in enumerate(basis) if k != idx]
        oleads = [l for k, l in enumerate(bleads) if k != idx]
        tail = {e: c for e, c in g.items() if e != bleads[idx]}
        reduced.append(padd({bleads[idx]: Fraction(1)}, normal_form(tail, others, oleads, order)))
    reduced.sort(key=lambda g: order.key(leading(g, order)))
    stats.update(basis_size=len(reduced), steps=counter[0])
    return GroebnerBasis(nvars, order, reduced, stats)


def saturate(polys: Iterable[Poly], nvars: int, exponent: Sequence[int], step_cap: int = 100_000) -> GroebnerBasis:
    """Groebner basis of ``(I : (x^exponent)^inf)`` in grevlex.

    Adjoins ``u`` as the first variable with ``u * x^exponent - 1`` and keeps the
    ``u``-free part of a block-order basis.
    """
    lifted = [{(0,) + tuple(e): c for e, c in f.items()} for f in polys]
    lifted.append({(1,) + tuple(exponent): Fraction(1), (0,) * (nvars + 1): Fraction(-1)})
    gb = groebner_basis(lifted, nvars + 1, eliminate=1, step_cap=step_cap)
    kept = [{e[1:]: c for e, c in g.items()} for g in gb.generators if all(e[0] == 0 for e in g)]
    order = MonomialOrder(nvars)
    kept.sort(key=lambda g: order.key(leading(g, order)))
    return GroebnerBasis(nvars, order, kept, dict(gb.stats))
