"""
Exact integer-lattice arithmetic.

Vectors of ``N`` and ``M`` are plain tuples of Python integers; matrices are
lists of row lists.  Nothing in this module touches floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DegenerateInputError, DimensionError

Vector = tuple[int, ...]
Matrix = list[list[int]]

# Both lattices use the same representation; the aliases only document intent.
LatticeVector = Vector
DualVector = Vector


def vector(coords) -> Vector:
    return tuple(int(c) for c in coords)


def pairing(u: Sequence[int], v: Sequence[int]) -> int:
    """Return the dual pairing ``<u, v> = sum_j u_j v_j``."""
    if len(u) != len(v):
        raise DimensionError(f"cannot pair vectors of lengths {len(u)} and {len(v)}")
    return sum(a * b for a, b in zip(u, v))


def gcd_of(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return gcd_of(v) == 1


def primitive(v: Sequence) -> Vector:
    """Return the first lattice point on the ray through ``v``.

    Rational input is accepted and cleared of denominators first, so
    ``primitive((Fraction(1, 2), 1))`` is ``(1, 2)``.
    """
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = gcd_of(ints)
    if g == 0:
        raise DegenerateInputError("the zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Matrix, ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence[int]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def det(A: Matrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(map(int, row)) for row in A]
    if any(len(row) != n for row in M):
        raise DimensionError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals of a list of (integer or rational) vectors."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return 0
    r = 0
    ncols = len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, len(M)):
            if M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    return r


def solve_rational(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution of ``A x = b`` or ``None`` when inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        M[r] = [x / p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = M[i][n]
    return tuple(x)


# -- Smith and Hermite normal forms -------------------------------------------


def _snf(A: Matrix):
    """Smith normal form with both transforms and their inverses.

    Returns ``(U, D, V, Vinv)`` with ``U A V = D``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)
    Vinv = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        # col_dst += q * col_src; inverse gets row_src -= q * row_dst
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    t = 0
    while t < min(m, n):
        entries = [
            (abs(D[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if D[i][j] != 0
        ]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        clean = False
            if not clean:
                cands = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cands)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if D[i][j] % D[t][t]
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V, Vinv


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U A V = D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    forming a divisibility chain ``d_1 | d_2 | ...`` followed by zeros.
    """
    U, D, V, _ = _snf(A)
    return U, D, V


def invariant_factors(A: Matrix) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of ``A``."""
    _, D, _, _ = _snf(A)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(D[i][i])
    return out


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return []
    n = len(M[0])
    out: Matrix = []
    col = 0
    while M and col < n:
        nz = [r for r in M if r[col] != 0]
        rest = [r for r in M if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                if r[col] != 0:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        M = rest
        col += 1
    # reduce above pivots
    for i in range(len(out)):
        c = next(k for k, x in enumerate(out[i]) if x)
        for j in range(i):
            q = out[j][c] // out[i][c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return out


def integer_kernel(A: Matrix, ncols: int | None = None) -> list[Vector]:
    """A basis of the integer solutions of ``A x = 0`` (a saturated lattice)."""
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    _, D, V, _ = _snf(A)
    r = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


def saturation(gens: Sequence[Sequence[int]], ambient_rank: int) -> list[Vector]:
    """Basis of ``span(gens) ∩ Z^n`` in Hermite normal form."""
    gens = [g for g in gens if any(g)]
    if not gens:
        return []
    _, D, _, Vinv = _snf([list(g) for g in gens])
    r = sum(1 for i in range(min(len(D), ambient_rank)) if D[i][i])
    return [tuple(row) for row in hermite_normal_form(Vinv[:r])]


def solve_integer(A: Matrix, b: Sequence[int]):
    """Solve ``A x = b`` over the integers.

    Returns ``(status, x)`` where ``status`` is ``"integral"``, ``"rational"``
    (solvable over Q only, ``x`` is then ``None``) or ``"inconsistent"``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return "integral", (0,) * n
    U, D, V, _ = _snf(A)
    c = matvec(U, b)
    r = sum(1 for i in range(min(m, n)) if D[i][i])
    if any(c[i] for i in range(r, m)):
        return "inconsistent", None
    if any(c[i] % D[i][i] for i in range(r)):
        return "rational", None
    y = [c[i] // D[i][i] for i in range(r)] + [0] * (n - r)
    return "integral", matvec(V, y)


def unimodular_inverse(U: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(U)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    inv = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


# -- groups and quotients -----------------------------------------------------


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group ``Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"torsion coefficients must be >= 2, got {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def group_from_invariants(free_rank: int, factors) -> AbelianGroup:
    return AbelianGroup(free_rank, tuple(d for d in factors if d > 1))


def quotient_group(ambient_rank: int, generators: Sequence[Sequence[int]]) -> AbelianGroup:
    """The group ``Z^rank / <generators>`` read off the Smith normal form."""
    gens = [list(map(int, g)) for g in generators]
    for g in gens:
        if len(g) != ambient_rank:
            raise DimensionError(f"generator {g} does not live in Z^{ambient_rank}")
    if not gens:
        return AbelianGroup(ambient_rank)
    factors = invariant_factors(gens)
    return group_from_invariants(ambient_rank - len(factors), factors)


@dataclass(frozen=True)
class QuotientLattice:
    """The lattice ``Z^n / L`` for a saturated sublattice ``L``.

    ``projection`` is a ``(n - rank L) x n`` integer matrix whose kernel is
    exactly ``L`` and which maps ``Z^n`` onto ``Z^(n - rank L)``.
    """

    ambient_rank: int
    sublattice_basis: tuple[Vector, ...]
    projection: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return self.ambient_rank - len(self.sublattice_basis)

    def project(self, v: Sequence) -> tuple:
        return tuple(sum(a * x for a, x in zip(row, v)) for row in self.projection)


def quotient_lattice(ambient_rank: int, generators: Sequence[Sequence[int]]) -> QuotientLattice:
    """Quotient of ``Z^n`` by the saturation of the span of ``generators``."""
    gens = [list(map(int, g)) for g in generators if any(g)]
    if not gens:
        return QuotientLattice(
            ambient_rank, (), tuple(tuple(r) for r in identity(ambient_rank))
        )
    _, D, V, Vinv = _snf(gens)
    r = sum(1 for i in range(min(len(D), ambient_rank)) if D[i][i])
    basis = tuple(tuple(row) for row in hermite_normal_form(Vinv[:r]))
    proj = [[V[i][j] for i in range(ambient_rank)] for j in range(r, ambient_rank)]
    proj = hermite_normal_form(proj) if proj else []
    # HNF keeps the row lattice; it is still a basis of the same dual lattice.
    return QuotientLattice(ambient_rank, basis, tuple(tuple(row) for row in proj))
