"""Exact lattice-polytope geometry in small dimension (n <= 6).

Polytopes keep both a vertex and a facet description.  The facet inequalities
read ``<m, normal> >= -offset`` with primitive inner normals, which is the
convention used for fans and for homogenization in the Cox ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .exact import det, primitive, rank, rank_and_kernel

MAX_DIM = 6

Point = tuple[int, ...]


@dataclass(frozen=True)
class Facet:
    normal: Point
    offset: int

    def value(self, m: Sequence[int]) -> int:
        """Slack ``<m, normal> + offset``; zero on the facet, positive inside."""
        return sum(a * b for a, b in zip(m, self.normal)) + self.offset


def _ray_key(v: Sequence[int]):
    last = max(i for i, x in enumerate(v) if x)
    return (last, 0 if v[last] > 0 else 1, tuple(-x for x in v))


@dataclass(frozen=True)
class LatticePolytope:
    """Lattice polytope with vertex and facet representations.

    For a lower-dimensional polytope ``equations`` lists primitive ``(c, k)``
    with ``<m, c> = k`` on the affine hull, and ``facets`` are inequalities in
    the ambient lattice that cut out the polytope inside that hull.
    """

    ambient_dim: int
    vertices: tuple[Point, ...]
    dim: int
    facets: tuple[Facet, ...]
    equations: tuple[tuple[Point, int], ...] = ()
    incidence: tuple[frozenset[int], ...] = field(default=(), repr=False)

    # -- basic queries -------------------------------------------------------

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def in_affine_hull(self, m: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(m, c)) == k for c, k in self.equations)

    def contains(self, m: Sequence[int]) -> bool:
        return self.in_affine_hull(m) and all(f.value(m) >= 0 for f in self.facets)

    def in_relative_interior(self, m: Sequence[int]) -> bool:
        if self.dim == 0:
            return tuple(m) == self.vertices[0]
        return self.in_affine_hull(m) and all(f.value(m) > 0 for f in self.facets)

    def min_pairing(self, w: Sequence[int]) -> int:
        return min(sum(a * b for a, b in zip(v, w)) for v in self.vertices)

    def face(self, w: Sequence[int]) -> LatticePolytope:
        """The face on which ``<., w>`` is minimal."""
        lo = self.min_pairing(w)
        return convex_hull(v for v in self.vertices if sum(a * b for a, b in zip(v, w)) == lo)

    def bounding_box(self) -> list[tuple[int, int]]:
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices)) for i in range(self.ambient_dim)]

    def lattice_points(self) -> list[Point]:
        box = self.bounding_box()
        return [p for p in itertools.product(*(range(lo, hi + 1) for lo, hi in box)) if self.contains(p)]

    def translate(self, t: Sequence[int]) -> LatticePolytope:
        return convex_hull(tuple(a + b for a, b in zip(v, t)) for v in self.vertices)

    def dilate(self, k: int) -> LatticePolytope:
        if k < 0:
            raise ValueError("dilation factor must be nonnegative")
        return convex_hull(tuple(k * a for a in v) for v in self.vertices)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset} for f in self.facets],
            "dim": self.dim,
        }

    # -- face lattice --------------------------------------------------------

    def faces(self) -> list[tuple[frozenset[int], int]]:
        """All nonempty faces as ``(vertex index set, dimension)``, P itself included."""
        return _face_lattice(self)

    def face_dim(self, vertex_ids: Iterable[int]) -> int:
        pts = [self.vertices[i] for i in vertex_ids]
        return _affine_dim(pts)


def _affine_dim(points: Sequence[Sequence[int]]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


# ---------------------------------------------------------------------------
# convex hull by double description


def _full_dim_hull(points: list[Point], d: int) -> list[tuple[Point, int]]:
    """Facets ``(normal, offset)`` of a full-dimensional point set in ``Z^d``.

    Extreme rays of the cone ``{(a, b) : <p, a> + b >= 0}`` are computed with
    the double-description method and the combinatorial adjacency test.
    """
    rows = [tuple(p) + (1,) for p in points]
    D = d + 1
    init: list[int] = []
    for i, r in enumerate(rows):
        if rank([rows[j] for j in init] + [r]) == len(init) + 1:
            init.append(i)
            if len(init) == D:
                break
    A0 = [[Fraction(x) for x in rows[i]] for i in init]
    # columns of A0^{-1} are the initial rays
    from .exact import inverse

    inv = inverse(A0)
    rays: list[tuple[int, ...]] = []
    zsets: list[frozenset[int]] = []
    for k in range(D):
        col = primitive([inv[i][k] for i in range(D)])
        rays.append(tuple(col))
        zsets.append(frozenset(init[j] for j in range(D) if j != k))
    for idx in range(len(rows)):
        if idx in init:
            continue
        a = rows[idx]
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [i for i, s in enumerate(vals) if s > 0]
        neg = [i for i, s in enumerate(vals) if s < 0]
        zero = [i for i, s in enumerate(vals) if s == 0]
        new_rays = [rays[i] for i in pos + zero]
        new_z = [zsets[i] for i in pos] + [zsets[i] | {idx} for i in zero]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if len(common) < D - 2:
                    continue
                if any(k != p and k != q and common <= zsets[k] for k in range(len(rays))):
                    continue
                sp, sq = vals[p], vals[q]
                r = primitive([sp * x - sq * y for x, y in zip(rays[q], rays[p])])
                new_rays.append(tuple(r))
                new_z.append(common | {idx})
        rays, zsets = new_rays, new_z
    facets = {(tuple(r[:d]), r[d]) for r in rays}
    return sorted(facets)


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    """Lattice polytope spanned by a nonempty finite set of integer points."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    n = len(pts[0])
    if n > MAX_DIM:
        raise ValueError(f"ambient dimension {n} exceeds the supported maximum {MAX_DIM}")
    if any(len(p) != n for p in pts):
        raise ValueError("points have inconsistent dimensions")
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    d = rank(diffs) if diffs else 0
    if d == 0:
        eqs = tuple((tuple(int(i == j) for j in range(n)), base[i]) for i in range(n))
        return LatticePolytope(n, (base,), 0, (), eqs, ())
    equations: list[tuple[Point, int]] = []
    if d < n:
        _, ker = rank_and_kernel(diffs, n)
        for c in ker:
            ci = tuple(int(x) for x in c)
            equations.append((ci, sum(a * b for a, b in zip(ci, base))))
    # coordinates on which the projection is injective on the affine hull
    coords: list[int] = []
    for i in range(n):
        trial = coords + [i]
        if rank([[row[j] for j in trial] for row in diffs]) == len(trial):
            coords = trial
            if len(coords) == d:
                break
    proj = [tuple(p[i] for i in coords) for p in pts]
    raw = _full_dim_hull(sorted(set(proj)), d)
    facets = []
    for a, b in raw:
        normal = [0] * n
        for j, i in enumerate(coords):
            normal[i] = a[j]
        facets.append(Facet(tuple(normal), b))
    facets.sort(key=lambda f: _ray_key(f.normal))
    verts = []
    for p in pts:
        tight = [f.normal for f in facets if f.value(p) == 0]
        if len(tight) >= d and rank([[t[i] for i in coords] for t in tight]) == d:
            verts.append(p)
    vset = tuple(verts)
    incidence = tuple(frozenset(i for i, v in enumerate(vset) if f.value(v) == 0) for f in facets)
    return LatticePolytope(n, vset, d, tuple(facets), tuple(equations), incidence)


def simplex(n: int, k: int = 1) -> LatticePolytope:
    """The dilated standard simplex ``k * Delta_n``."""
    pts = [tuple(0 for _ in range(n))] + [tuple(k if j == i else 0 for j in range(n)) for i in range(n)]
    return convex_hull(pts)


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise ValueError("Minkowski sum of polytopes in different ambient dimensions")
    return convex_hull(tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices)


def minkowski_sum_all(polys: Sequence[LatticePolytope]) -> LatticePolytope:
    out = polys[0]
    for P in polys[1:]:
        out = minkowski_sum(out, P)
    return out


# ---------------------------------------------------------------------------
# faces, triangulation, volume


def _face_lattice(P: LatticePolytope) -> list[tuple[frozenset[int], int]]:
    allv = frozenset(range(len(P.vertices)))
    seen = {allv}
    frontier = [s for s in P.incidence if s]
    seen.update(frontier)
    while frontier:
        nxt = []
        for F in frontier:
            for G in P.incidence:
                H = F & G
                if H and H not in seen:
                    seen.add(H)
                    nxt.append(H)
        frontier = nxt
    return sorted(((F, P.face_dim(F)) for F in seen), key=lambda t: (t[1], sorted(t[0])))


def _pulling_triangulation(P: LatticePolytope) -> list[tuple[int, ...]]:
    faces = P.faces()
    by_dim: dict[int, list[frozenset[int]]] = {}
    for F, dd in faces:
        by_dim.setdefault(dd, []).append(F)
    memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def tri(F: frozenset[int], dd: int) -> list[tuple[int, ...]]:
        if F in memo:
            return memo[F]
        if dd == 0:
            out = [(next(iter(F)),)]
        else:
            apex = min(F, key=lambda i: P.vertices[i])
            out = []
            for G in by_dim.get(dd - 1, []):
                if G < F and apex not in G:
                    out.extend((apex,) + s for s in tri(G, dd - 1))
        memo[F] = out
        return out

    return tri(frozenset(range(len(P.vertices))), P.dim)


def triangulation(P: LatticePolytope) -> list[tuple[Point, ...]]:
    """Pulling triangulation from the lexicographically smallest vertex of each face."""
    return [tuple(P.vertices[i] for i in s) for s in _pulling_triangulation(P)]


def normalized_volume(P: LatticePolytope) -> Fraction:
    """``n!`` times the Euclidean volume; zero unless ``P`` is full-dimensional."""
    if not P.is_full_dimensional:
        return Fraction(0)
    total = 0
    for s in triangulation(P):
        v0 = s[0]
        total += abs(det([[a - b for a, b in zip(v, v0)] for v in s[1:]]))
    return Fraction(total)


# ---------------------------------------------------------------------------
# sequences


class PolytopeSequence:
    """A sequence ``P_1, ..., P_k`` with cached subset Minkowski sums."""

    def __init__(self, polytopes: Sequence[LatticePolytope]):
        if not polytopes:
            raise ValueError("empty polytope sequence")
        n = polytopes[0].ambient_dim
        if any(P.ambient_dim != n for P in polytopes):
            raise ValueError("polytopes in a sequence must share the ambient dimension")
        self.polytopes = tuple(polytopes)
        self.ambient_dim = n
        self._sums: dict[tuple[int, ...], LatticePolytope] = {}

    def __len__(self) -> int:
        return len(self.polytopes)

    def __iter__(self):
        return iter(self.polytopes)

    def __getitem__(self, i):
        return self.polytopes[i]

    def subset_sum(self, subset: Sequence[int]) -> LatticePolytope:
        """Minkowski sum over 0-based indices."""
        key = tuple(sorted(subset))
        if key not in self._sums:
            if len(key) == 1:
                self._sums[key] = self.polytopes[key[0]]
            else:
                self._sums[key] = minkowski_sum(self.subset_sum(key[:-1]), self.polytopes[key[-1]])
        return self._sums[key]

    def total(self) -> LatticePolytope:
        return self.subset_sum(range(len(self)))


def _as_sequence(seq) -> PolytopeSequence:
    return seq if isinstance(seq, PolytopeSequence) else PolytopeSequence(seq)


def mixed_volume(seq) -> Fraction:
    """Mixed volume with ``MV(P, ..., P) = normalized_volume(P)``.

    Inclusion-exclusion over subset Minkowski sums:
    ``MV = sum_S (-1)^(n-|S|) vol_n(sum_S P_i) / n!`` with normalized volumes.
    """
    seq = _as_sequence(seq)
    n = seq.ambient_dim
    if len(seq) != n:
        raise ValueError(f"mixed volume needs {n} polytopes, got {len(seq)}")
    total = Fraction(0)
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            total += (-1) ** (n - k) * normalized_volume(seq.subset_sum(S))
    return total / factorial(n)


@dataclass(frozen=True)
class SequenceCheck:
    """Verdict of a sequence test with an optional witness.

    ``subset`` holds 1-based polytope labels; ``point`` is a lattice point in
    the relative interior of the offending sum (indecomposability only).
    """

    ok: bool
    subset: tuple[int, ...] | None = None
    point: Point | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "subset": list(self.subset) if self.subset else None,
            "point": list(self.point) if self.point else None,
        }


def is_essential(seq) -> SequenceCheck:
    """Every subset ``J`` of size ``k <= n`` must have ``dim(sum_J P_j) >= k``."""
    seq = _as_sequence(seq)
    top = min(len(seq), seq.ambient_dim)
    for k in range(1, top + 1):
        for J in itertools.combinations(range(len(seq)), k):
            if seq.subset_sum(J).dim < k:
                return SequenceCheck(False, tuple(j + 1 for j in J))
    return SequenceCheck(True)


def is_indecomposable(seq) -> SequenceCheck:
    """Essential, and no critical-dimension proper subset sum has a relative-interior lattice point.

    Subsets are scanned from size ``n - 1`` down to 1, lexicographically within
    a size; the first offender is the witness.
    """
    seq = _as_sequence(seq)
    ess = is_essential(seq)
    if not ess:
        return ess
    for k in range(seq.ambient_dim - 1, 0, -1):
        for J in itertools.combinations(range(len(seq)), k):
            Q = seq.subset_sum(J)
            if Q.dim != k:
                continue
            inner = interior_lattice_points(Q)
            if inner:
                return SequenceCheck(False, tuple(j + 1 for j in J), inner[0])
    return SequenceCheck(True)


def interior_lattice_points(P: LatticePolytope) -> list[Point]:
    """Lattice points in the (relative) interior, sorted lexicographically."""
    if P.dim == 0:
        return [P.vertices[0]]
    return [p for p in P.lattice_points() if P.in_relative_interior(p)]


# ---------------------------------------------------------------------------
# normal fans


@dataclass(frozen=True)
class Cone:
    rays: frozenset[int]  # 0-based ray indices
    dim: int
    face: frozenset[int]  # vertex indices of the dual face
    vertex: Point | None = None  # m_sigma for maximal cones

    def generator_sum(self, rays: Sequence[Point]) -> Point:
        return tuple(sum(rays[j][i] for j in self.rays) for i in range(len(rays[0])))


@dataclass(frozen=True)
class NormalFan:
    rays: tuple[Point, ...]
    offsets: tuple[int, ...]
    cones: tuple[Cone, ...]  # positive-dimensional cones, by dimension

    @property
    def maximal_cones(self) -> list[Cone]:
        n = len(self.rays[0])
        return [c for c in self.cones if c.dim == n]

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    def is_simplicial(self, cone: Cone) -> bool:
        return len(cone.rays) == cone.dim

    def to_json(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "offsets": list(self.offsets),
            "cones": [
                {"rays": sorted(c.rays), "dim": c.dim, **({"vertex": list(c.vertex)} if c.vertex else {})}
                for c in self.cones
            ],
        }


def normal_fan(P: LatticePolytope) -> NormalFan:
    """Inner normal fan: rays are facet normals, cones correspond to faces."""
    if not P.is_full_dimensional:
        raise ValueError("normal fan requires a full-dimensional polytope")
    n = P.ambient_dim
    rays = tuple(f.normal for f in P.facets)
    cones = []
    for F, dd in P.faces():
        if dd == n:
            continue
        rs = frozenset(j for j, inc in enumerate(P.incidence) if F <= inc)
        vertex = P.vertices[next(iter(F))] if dd == 0 else None
        cones.append(Cone(rs, n - dd, F, vertex))
    cones.sort(key=lambda c: (c.dim, sorted(c.rays)))
    return NormalFan(rays, tuple(f.offset for f in P.facets), tuple(cones))
