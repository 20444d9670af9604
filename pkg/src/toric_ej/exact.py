"""Exact rational/integer linear algebra plus a small numeric eigensolver.

Matrices are plain nested lists (row-major).  Integer matrices hold ``int``
entries, rational ones hold :class:`fractions.Fraction`.  Nothing here keeps
state; every function returns fresh lists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

Matrix = list[list]
Vector = list


class EigenConvergenceError(RuntimeError):
    """Raised when the numeric eigensolver fails to converge."""


# ---------------------------------------------------------------------------
# small helpers


def identity(n: int, one=1) -> Matrix:
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int, zero=0) -> Matrix:
    return [[zero] * cols for _ in range(rows)]


def transpose(A: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    return [list(col) for col in zip(*A)]


def to_fraction_matrix(A: Iterable[Iterable]) -> Matrix:
    return [[Fraction(x) for x in row] for row in A]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col) if a and b) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence], v: Sequence) -> Vector:
    return [sum(a * x for a, x in zip(row, v) if a and x) for row in A]


def vec_mat(v: Sequence, A: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    cols = len(A[0]) if A else 0
    out = [0] * cols
    for x, row in zip(v, A):
        if x:
            for j, a in enumerate(row):
                if a:
                    out[j] += x * a
    return out


def mat_add(A, B) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A) -> Matrix:
    return [[c * a for a in row] for row in A]


def trace(A) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def is_zero_matrix(A) -> bool:
    return all(x == 0 for row in A for x in row)


# ---------------------------------------------------------------------------
# integer normal forms


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form ``H = U @ A`` with ``U`` unimodular.

    Column by column, a Euclidean pass over the not-yet-pivoted rows brings the
    entry of smallest absolute value up (ties broken by lowest row index), the
    pivot is made positive and the entries above it are reduced into
    ``[0, pivot)``.  Zero rows end up at the bottom.  The procedure is fully
    deterministic.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(H[i][c]), i))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the HNF: a canonical basis of the lattice spanned by ``rows``."""
    if not rows:
        return []
    H, _ = hermite_normal_form(rows)
    return [row for row in H if any(row)]


def reduce_mod_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int]:
    """Canonical coset representative of ``v`` modulo the lattice with HNF ``basis``."""
    out = [int(x) for x in v]
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        q = out[c] // row[c]
        if q:
            out = [a - q * b for a, b in zip(out, row)]
    return out


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of the saturated lattice ``{x in Z^n : A x = 0}``."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return identity(n)
    H, U = hermite_normal_form(transpose(A))
    return [U[i] for i in range(n) if not any(H[i])]


def det(A: Sequence[Sequence]) -> Fraction | int:
    """Determinant by Gaussian elimination (Bareiss for integer input)."""
    n = len(A)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in A for x in row):
        M = [list(row) for row in A]
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                sw = next((i for i in range(k + 1, n) if M[i][k]), None)
                if sw is None:
                    return 0
                M[k], M[sw] = M[sw], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]
    M = to_fraction_matrix(A)
    result = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k]), None)
        if p is None:
            return Fraction(0)
        if p != k:
            M[k], M[p] = M[p], M[k]
            result = -result
        result *= M[k][k]
        for i in range(k + 1, n):
            if M[i][k]:
                f = M[i][k] / M[k][k]
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return result


# ---------------------------------------------------------------------------
# rational linear algebra


def rref(A: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    M = to_fraction_matrix(A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        if piv != 1:
            M[r] = [x / piv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def _normalize_kernel_vector(v: list[Fraction]) -> list[Fraction]:
    ints = primitive(v)
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def rank_and_kernel(A: Sequence[Sequence], ncols: int | None = None) -> tuple[int, list[list[Fraction]]]:
    """Rank of ``A`` and a basis of its right kernel.

    Kernel vectors are scaled to primitive integer vectors whose first nonzero
    entry is positive, so ``[[1, 1], [2, 2]]`` gives ``(1, -1)``.
    """
    cols = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return 0, [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -R[row][fc]
        basis.append(_normalize_kernel_vector(v))
    return len(pivots), basis


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def solve_linear(A: Sequence[Sequence], b: Sequence) -> tuple[list[Fraction], list[list[Fraction]]] | None:
    """Solve ``A x = b`` exactly.

    Returns ``(particular, kernel_basis)`` where the particular solution sets
    every free variable to zero, or ``None`` when the system is inconsistent.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if len(b) != rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {rows}")
    if rows == 0:
        return [Fraction(0)] * cols, rank_and_kernel([], cols)[1]
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, pc in enumerate(pivots):
        x[pc] = R[row][cols]
    _, kernel = rank_and_kernel(A)
    return x, kernel


def inverse(A: Sequence[Sequence]) -> Matrix | None:
    """Exact inverse over Q, or ``None`` if ``A`` is singular."""
    n = len(A)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in R]


def left_kernel(A: Sequence[Sequence], nrows: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{y : y A = 0}``."""
    m = nrows if nrows is not None else len(A)
    if not A or not A[0]:
        return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    return rank_and_kernel(transpose(A), m)[1]


# ---------------------------------------------------------------------------
# univariate polynomials over Q, coefficient lists low -> high


def upoly_trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_eval(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def upoly_derivative(p: Sequence) -> list:
    return upoly_trim([i * c for i, c in enumerate(p)][1:])


def upoly_monic(p: Sequence) -> list[Fraction]:
    p = upoly_trim([Fraction(c) for c in p])
    if not p:
        return p
    lc = p[-1]
    return [c / lc for c in p]


def upoly_divmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = upoly_trim([Fraction(c) for c in a])
    b = upoly_trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = upoly_trim(a)
    return upoly_trim(q), a


def upoly_gcd(a: Sequence, b: Sequence) -> list[Fraction]:
    a = upoly_trim([Fraction(c) for c in a])
    b = upoly_trim([Fraction(c) for c in b])
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    return upoly_monic(a)


def squarefree_decomposition(p: Sequence) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: monic squarefree ``g_k`` with ``p = lc * prod g_k^k``."""
    p = upoly_monic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = upoly_derivative(p)
    a = upoly_gcd(p, dp)
    b = upoly_divmod(p, a)[0]
    c = upoly_divmod(dp, a)[0]
    d = [x - y for x, y in _zip_pad(c, upoly_derivative(b))]
    k = 1
    while len(upoly_trim(b)) > 1:
        g = upoly_gcd(b, d)
        b = upoly_divmod(b, g)[0]
        if len(g) > 1:
            out.append((g, k))
        c = upoly_divmod(d, g)[0]
        d = [x - y for x, y in _zip_pad(c, upoly_derivative(b))]
        k += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return zip(a, b)


def charpoly(A: Sequence[Sequence]) -> list[Fraction]:
    """Characteristic polynomial ``det(x I - A)`` (low -> high) over Q.

    Reduces to upper Hessenberg form by exact similarity transforms, then runs
    the usual three-term recurrence on the leading principal minors.
    """
    n = len(A)
    H = to_fraction_matrix(A)
    for k in range(1, n - 1):
        p = next((i for i in range(k, n) if H[i][k - 1] != 0), None)
        if p is None:
            continue
        if p != k:
            H[k], H[p] = H[p], H[k]
            for row in H:
                row[k], row[p] = row[p], row[k]
        piv = H[k][k - 1]
        for i in range(k + 1, n):
            if H[i][k - 1] != 0:
                f = H[i][k - 1] / piv
                H[i] = [a - f * b for a, b in zip(H[i], H[k])]
                for row in H:
                    row[k] += f * row[i]
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for m in range(1, n + 1):
        # p_m = (x - h_mm) p_{m-1} - sum_i h_{i,m} prod_{j=i+1}^{m} h_{j,j-1} p_{i-1}
        prev = polys[m - 1]
        cur = [Fraction(0)] + list(prev)
        for i, c in enumerate(prev):
            cur[i] -= H[m - 1][m - 1] * c
        prod = Fraction(1)
        for i in range(m - 1, 0, -1):
            prod *= H[i][i - 1]
            if prod == 0:
                break
            coef = H[i - 1][m - 1] * prod
            if coef:
                for j, c in enumerate(polys[i - 1]):
                    cur[j] -= coef * c
        polys.append(cur)
    return polys[n]


def companion(p: Sequence) -> Matrix:
    """Companion matrix of a polynomial (low -> high); eigenvalues are its roots."""
    p = upoly_monic(p)
    d = len(p) - 1
    C = zeros(d, d, Fraction(0))
    for i in range(1, d):
        C[i][i - 1] = Fraction(1)
    for i in range(d):
        C[i][d - 1] = -p[i]
    return C


def mat_pow(A, k: int):
    n = len(A)
    result = identity(n, Fraction(1))
    base = A
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# numeric eigenvalues


def eigen_numeric(A: Sequence[Sequence], tol: float = 1e-9, dim_cap: int = 200) -> list[tuple[complex, int]]:
    """Eigenvalues of a rational matrix with algebraic multiplicities.

    LAPACK ``geev`` (balancing, Hessenberg reduction, shifted QR) does the
    numerics.  Eigenvalues closer than ``10 * tol`` (relative to
    ``max(1, |lambda|)``) are merged into one cluster whose size is the
    reported multiplicity.
    """
    n = len(A)
    if n == 0:
        return []
    if any(len(row) != n for row in A):
        raise ValueError("eigen_numeric needs a square matrix")
    if n > dim_cap:
        raise ValueError(f"matrix dimension {n} exceeds eigen_dim_cap={dim_cap}")
    M = np.array([[float(x) for x in row] for row in A], dtype=float)
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigenvalue iteration failed for {n}x{n} matrix: {exc}") from exc
    vals = sorted((complex(v) for v in vals), key=lambda z: (z.real, z.imag))
    radius = 10 * tol
    clusters: list[list[complex]] = []
    for v in vals:
        for cl in clusters:
            c = sum(cl) / len(cl)
            if abs(v - c) <= radius * max(1.0, abs(c)):
                cl.append(v)
                break
        else:
            clusters.append([v])
    out = [(sum(cl) / len(cl), len(cl)) for cl in clusters]
    return sorted(out, key=lambda t: (round(t[0].real, 12), round(t[0].imag, 12)))


# ---------------------------------------------------------------------------
# JSON helpers


def rat_to_json(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rat_from_json(s: str | int) -> Fraction:
    return Fraction(s)


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}
