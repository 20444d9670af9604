"""Laurent polynomials over Q, their parser, Newton polytopes and facial systems."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .polytope import LatticePolytope, convex_hull

Exp = tuple[int, ...]


class LaurentPolynomial:
    """Sparse Laurent polynomial: exponent tuple -> nonzero Fraction."""

    __slots__ = ("n_vars", "terms", "_hash")

    def __init__(self, n_vars: int, terms: Mapping[Sequence[int], object] | None = None):
        self.n_vars = n_vars
        clean: dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n_vars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {n_vars}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, n: int, c=1) -> LaurentPolynomial:
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> LaurentPolynomial:
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def variable(cls, n: int, i: int) -> LaurentPolynomial:
        return cls.monomial(tuple(int(j == i) for j in range(n)))

    @classmethod
    def _raw(cls, n: int, terms: dict[Exp, Fraction]) -> LaurentPolynomial:
        p = cls.__new__(cls)
        p.n_vars = n
        p.terms = terms
        p._hash = None
        return p

    # -- basic protocol -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.n_vars, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n_vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.n_vars}, {self.to_string()!r})"

    def support(self) -> list[Exp]:
        return sorted(self.terms)

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> LaurentPolynomial:
        if isinstance(other, LaurentPolynomial):
            if other.n_vars != self.n_vars:
                raise ValueError("polynomials live in rings with different numbers of variables")
            return other
        return LaurentPolynomial.constant(self.n_vars, other)

    def __add__(self, other) -> LaurentPolynomial:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(self.n_vars, out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPolynomial:
        return LaurentPolynomial._raw(self.n_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> LaurentPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPolynomial:
        if not isinstance(other, LaurentPolynomial):
            c = Fraction(other)
            if not c:
                return LaurentPolynomial(self.n_vars)
            return LaurentPolynomial._raw(self.n_vars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPolynomial._raw(self.n_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPolynomial:
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = self.terms.items()
            return LaurentPolynomial.monomial(tuple(k * x for x in e), Fraction(c) ** k)
        out = LaurentPolynomial.constant(self.n_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, exp: Sequence[int]) -> LaurentPolynomial:
        """Multiply by the monomial ``t^exp``."""
        return LaurentPolynomial._raw(
            self.n_vars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}
        )

    def min_exponents(self) -> Exp:
        return tuple(min(e[i] for e in self.terms) for i in range(self.n_vars)) if self.terms else (0,) * self.n_vars

    def derivative(self, i: int) -> LaurentPolynomial:
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return LaurentPolynomial._raw(self.n_vars, out)

    def log_derivative(self, i: int) -> LaurentPolynomial:
        """``t_i * d/dt_i``, which keeps the support inside the Newton polytope."""
        return LaurentPolynomial._raw(self.n_vars, {e: c * e[i] for e, c in self.terms.items() if e[i]})

    # -- evaluation and printing ---------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction | complex:
        return evaluate(self, point)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        return to_string(self, names)


def _default_names(n: int) -> list[str]:
    return ["x"] if n == 1 else [f"t{i + 1}" for i in range(n)]


def to_string(f: LaurentPolynomial, names: Sequence[str] | None = None) -> str:
    """Pretty-print in the input grammar (so the output parses back to ``f``)."""
    names = list(names) if names is not None else _default_names(f.n_vars)
    if not f.terms:
        return "0"
    parts = []
    # descending total degree then reverse-lex reads naturally
    for e in sorted(f.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = f.terms[e]
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mag = abs(c)
        cstr = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if factors:
            body = " ".join(factors) if mag == 1 else cstr + " " + " ".join(factors)
        else:
            body = cstr
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def evaluate(f: LaurentPolynomial, point: Sequence) -> Fraction | complex:
    if len(point) != f.n_vars:
        raise ValueError(f"point has {len(point)} coordinates, expected {f.n_vars}")
    exact = all(isinstance(x, (int, Fraction)) for x in point)
    vals = [Fraction(x) for x in point] if exact else [complex(x) for x in point]
    total = Fraction(0) if exact else 0j
    for e, c in f.terms.items():
        term = c if exact else complex(c)
        for x, k in zip(vals, e):
            if k < 0 and x == 0:
                raise ZeroDivisionError("negative exponent at a zero coordinate")
            if k:
                term = term * x**k
        total += term
    return total


# ---------------------------------------------------------------------------
# parser


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {column}{exp}")


class UnknownVariable(ParseError):
    def __init__(self, name: str, line: int, column: int):
        self.name = name
        super().__init__(f"unknown variable {name!r}", line, column)


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.src = src
        self.pos = 0
        self.vars = sorted(variables, key=len, reverse=True)
        self.index = {v: i for i, v in enumerate(variables)}
        self.n = len(variables)

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.src.count("\n", 0, pos) + 1
        col = pos - (self.src.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg: str, expected: Iterable[str]) -> ParseError:
        return ParseError(msg, *self.where(), expected)

    def skip_ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def integer(self) -> int | None:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            return None
        return int(self.src[start : self.pos])

    def variable(self) -> int | None:
        self.skip_ws()
        for v in self.vars:
            if self.src.startswith(v, self.pos):
                self.pos += len(v)
                return self.index[v]
        if self.pos < len(self.src) and (self.src[self.pos].isalpha() or self.src[self.pos] == "_"):
            start = self.pos
            end = start
            while end < len(self.src) and (self.src[end].isalnum() or self.src[end] == "_"):
                end += 1
            raise UnknownVariable(self.src[start:end], *self.where(start))
        return None

    def parse(self) -> LaurentPolynomial:
        total: dict[Exp, Fraction] = {}
        sign = 1
        c = self.peek()
        if c in "+-" and c:
            sign = -1 if c == "-" else 1
            self.pos += 1
        while True:
            e, coef = self.term()
            v = total.get(e, 0) + sign * coef
            if v:
                total[e] = v
            else:
                total.pop(e, None)
            c = self.peek()
            if not c:
                break
            if c not in "+-":
                raise self.error(f"unexpected {c!r}", ["+", "-", "*", "^", "variable", "end of input"])
            sign = -1 if c == "-" else 1
            self.pos += 1
        return LaurentPolynomial._raw(self.n, total)

    def term(self) -> tuple[Exp, Fraction]:
        coef = Fraction(1)
        num = self.integer()
        have_coef = num is not None
        if have_coef:
            coef = Fraction(num)
            if self.peek() == "/":
                self.pos += 1
                self.skip_ws()
                start = self.pos
                den = self.integer()
                if den is None:
                    raise self.error("missing denominator", ["integer"])
                if den == 0:
                    raise ParseError("zero denominator", *self.where(start), ["positive integer"])
                coef = Fraction(num, den)
        exp = [0] * self.n
        nfactors = 0
        while True:
            save = self.pos
            if nfactors or have_coef:
                if self.peek() == "*":
                    self.pos += 1
                    star = True
                else:
                    star = False
            else:
                star = False
            idx = self.variable()
            if idx is None:
                if star:
                    raise self.error("expected a variable after '*'", ["variable"])
                self.pos = save
                break
            k = 1
            if self.peek() == "^":
                self.pos += 1
                neg = False
                if self.peek() == "-":
                    self.pos += 1
                    neg = True
                val = self.integer()
                if val is None:
                    raise self.error("missing exponent", ["integer", "-"])
                k = -val if neg else val
            exp[idx] += k
            nfactors += 1
        if not have_coef and not nfactors:
            raise self.error("expected a term", ["integer", "variable"])
        return tuple(exp), coef


def parse(src: str, variables: Sequence[str]) -> LaurentPolynomial:
    """Parse a Laurent polynomial over the given variable names."""
    if not isinstance(src, str):
        raise TypeError("polynomial source must be a string")
    return _Parser(src, variables).parse()


# ---------------------------------------------------------------------------
# systems


def newton_polytope(f: LaurentPolynomial) -> LatticePolytope:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polytope")
    return convex_hull(f.terms)


@dataclass(frozen=True)
class LaurentSystem:
    polys: tuple[LaurentPolynomial, ...]
    declared_supports: tuple[LatticePolytope, ...] | None = None
    variables: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise ValueError("empty system")
        n = self.polys[0].n_vars
        if any(f.n_vars != n for f in self.polys):
            raise ValueError("polynomials use different numbers of variables")
        if self.variables is None:
            object.__setattr__(self, "variables", tuple(_default_names(n)))
        elif len(self.variables) != n:
            raise ValueError("variable names do not match the number of variables")
        else:
            object.__setattr__(self, "variables", tuple(self.variables))
        if self.declared_supports is not None:
            sup = tuple(self.declared_supports)
            object.__setattr__(self, "declared_supports", sup)
            if len(sup) != len(self.polys):
                raise ValueError("one declared support per polynomial is required")
            for i, (f, P) in enumerate(zip(self.polys, sup)):
                if P.ambient_dim != n:
                    raise ValueError(f"support {i + 1} has the wrong dimension")
                bad = [e for e in f.terms if not P.contains(e)]
                if bad:
                    raise ValueError(f"polynomial {i + 1} has monomial {bad[0]} outside its declared support")

    @property
    def n_vars(self) -> int:
        return self.polys[0].n_vars

    @property
    def is_square(self) -> bool:
        return len(self.polys) == self.n_vars

    def __len__(self) -> int:
        return len(self.polys)

    def supports(self) -> tuple[LatticePolytope, ...]:
        if self.declared_supports is not None:
            return self.declared_supports
        return tuple(newton_polytope(f) for f in self.polys)

    def with_polys(self, polys: Sequence[LaurentPolynomial]) -> LaurentSystem:
        return LaurentSystem(tuple(polys), self.declared_supports, self.variables)

    def to_json(self) -> dict:
        out = {
            "variables": list(self.variables),
            "polynomials": [f.to_string(self.variables) for f in self.polys],
        }
        if self.declared_supports is not None:
            out["supports"] = [[list(v) for v in P.vertices] for P in self.declared_supports]
        return out


def system_from_json(data: dict) -> LaurentSystem:
    if not isinstance(data, dict):
        raise ValueError("system file must hold a JSON object")
    try:
        names = data["variables"]
        srcs = data["polynomials"]
    except KeyError as exc:
        raise ValueError(f"system file lacks the {exc.args[0]!r} field") from None
    if not isinstance(names, list) or not all(isinstance(v, str) and v for v in names):
        raise ValueError("'variables' must be a list of names")
    if len(set(names)) != len(names):
        raise ValueError("duplicate variable names")
    if not isinstance(srcs, list) or not srcs:
        raise ValueError("'polynomials' must be a nonempty list of strings")
    polys = tuple(parse(s, names) for s in srcs)
    sup = None
    if data.get("supports") is not None:
        raw = data["supports"]
        if not isinstance(raw, list) or len(raw) != len(polys):
            raise ValueError("'supports' must list one point set per polynomial")
        sup = tuple(convex_hull(tuple(int(x) for x in p) for p in pts) for pts in raw)
    return LaurentSystem(polys, sup, tuple(names))


def load_system(path: str | Path) -> LaurentSystem:
    with open(path, encoding="utf-8") as fh:
        return system_from_json(json.load(fh))


def torus_jacobian(system: LaurentSystem) -> LaurentPolynomial:
    """``det(t_i df_j/dt_i)`` with rows indexed by variables and columns by polynomials."""
    if not system.is_square:
        raise ValueError("torus jacobian needs a square system")
    n = system.n_vars
    M = [[system.polys[j].log_derivative(i) for j in range(n)] for i in range(n)]
    J = polynomial_det(M)
    return J if isinstance(J, LaurentPolynomial) else LaurentPolynomial.constant(n, J)


def polynomial_det(M: Sequence[Sequence]):
    """Determinant over a commutative ring by memoized Laplace expansion along rows.

    Entries only need ``+``, ``*`` and ``bool``; the result may be the int 0.
    """
    n = len(M)
    memo: dict[int, object] = {}

    def minor(row: int, used: int):
        if row == n:
            return 1
        if used in memo:
            return memo[used]
        total = 0
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = M[row][col]
            if entry:
                sub = minor(row + 1, used | 1 << col)
                if sub:
                    total = total + sign * (entry * sub)
            sign = -sign
        memo[used] = total
        return total

    return minor(0, 0)


def facial_system(system: LaurentSystem, w: Sequence[int]) -> LaurentSystem:
    """Initial forms in direction ``w`` measured against the declared supports."""
    w = tuple(int(x) for x in w)
    if not any(w):
        raise ValueError("facial direction must be nonzero")
    polys = []
    faces = []
    for f, P in zip(system.polys, system.supports()):
        lo = P.min_pairing(w)
        polys.append(
            LaurentPolynomial._raw(
                f.n_vars, {e: c for e, c in f.terms.items() if sum(a * b for a, b in zip(e, w)) == lo}
            )
        )
        faces.append(P.face(w))
    return LaurentSystem(tuple(polys), tuple(faces), system.variables)


def random_polynomial(support: LatticePolytope, rng: random.Random, lo: int = -9, hi: int = 9) -> LaurentPolynomial:
    """Random integer coefficients on every lattice point of ``support``; vertex terms are nonzero."""
    verts = set(support.vertices)
    terms = {}
    for p in support.lattice_points():
        c = rng.randint(lo, hi)
        while p in verts and c == 0:
            c = rng.randint(lo, hi)
        if c:
            terms[p] = c
    return LaurentPolynomial(support.ambient_dim, terms)


def random_system(supports: Sequence[LatticePolytope], rng: random.Random, lo: int = -9, hi: int = 9) -> LaurentSystem:
    polys = tuple(random_polynomial(P, rng, lo, hi) for P in supports)
    return LaurentSystem(polys, tuple(supports))
