"""
Torus-invariant divisors on toric varieties.

Sign convention (Fulton's): for ``D = sum a_i D_i``

* the support function satisfies ``Psi_D(v_i) = -a_i``,
* local Cartier data ``u(sigma)`` solve ``<u(sigma), v_i> = -a_i`` on ``sigma``,
* the polytope is ``P_D = {u : <u, v_i> >= -a_i for all i}``.

With this convention ``D_3`` on ``P^2`` has ``P_D`` the unit simplex.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import lattice
from ._polyhedra import cone_from_inequalities
from .cone import hilbert_basis
from .errors import (
    DimensionError,
    NotCartierError,
    OutOfSupportError,
    ToricError,
    UnsupportedInputError,
)
from .fan import Fan, LatticePolytope, is_complete
from .lattice import AbelianGroup, Vector, pairing

MAX_BOX_POINTS = 10**7


@dataclass(frozen=True)
class TWeilDivisor:
    """``sum a_i D_i`` with one coefficient per ray of ``fan``."""

    fan: Fan
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(a) for a in self.coeffs)
        if len(coeffs) != len(self.fan.rays):
            raise DimensionError(f"{len(coeffs)} coefficients for {len(self.fan.rays)} rays")
        object.__setattr__(self, "coeffs", coeffs)

    def __add__(self, other: "TWeilDivisor") -> "TWeilDivisor":
        if other.fan is not self.fan and other.fan != self.fan:
            raise ToricError("divisors live on different fans")
        return TWeilDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, m: int) -> "TWeilDivisor":
        return TWeilDivisor(self.fan, tuple(m * a for a in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    @classmethod
    def prime(cls, fan: Fan, i: int) -> "TWeilDivisor":
        return cls(fan, tuple(int(j == i) for j in range(len(fan.rays))))

    @classmethod
    def zero(cls, fan: Fan) -> "TWeilDivisor":
        return cls(fan, (0,) * len(fan.rays))


def div_of_character(f: Fan, u: Sequence[int]) -> TWeilDivisor:
    """Principal divisor ``div(chi^u) = sum <u, v_i> D_i``."""
    return TWeilDivisor(f, tuple(pairing(u, v) for v in f.rays))


def _require_spanning(f: Fan, what: str):
    if not f.rays or lattice.rank(f.rays) < f.lattice_rank:
        raise UnsupportedInputError(f"{what} needs rays spanning N_R")


# -- class group -------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassGroup:
    """``A_{n-1}(X) = Z^d / M`` with a coordinate map for classes.

    A class is written as its free coordinates followed by its torsion
    coordinates (reduced modulo ``group.torsion``).
    """

    group: AbelianGroup
    free_rows: tuple[tuple[int, ...], ...]
    torsion_rows: tuple[tuple[int, ...], ...]

    def class_of(self, d: "TWeilDivisor | Sequence[int]") -> tuple[int, ...]:
        coeffs = d.coeffs if isinstance(d, TWeilDivisor) else tuple(d)
        free = tuple(pairing(row, coeffs) for row in self.free_rows)
        tors = tuple(pairing(row, coeffs) % m for row, m in zip(self.torsion_rows, self.group.torsion))
        return free + tors

    def is_zero(self, cls: Sequence[int]) -> bool:
        return not any(cls)

    def is_divisible(self, cls: Sequence[int], k: int) -> bool:
        """Whether ``cls = k * y`` for some class ``y``."""
        from math import gcd

        r = self.group.free_rank
        if any(x % k for x in cls[:r]):
            return False
        return all(t % gcd(k, m) == 0 for t, m in zip(cls[r:], self.group.torsion))


def class_group(f: Fan) -> ClassGroup:
    """Cokernel of ``M -> Z^d``, ``u -> (<u, v_i>)_i``."""
    _require_spanning(f, "class_group")
    R = [list(v) for v in f.rays]
    U, D, _ = lattice.smith_normal_form(R)
    n = f.lattice_rank
    diag = [D[i][i] for i in range(n)]
    torsion_rows = tuple(tuple(U[i]) for i in range(n) if diag[i] > 1)
    torsion = tuple(d for d in diag if d > 1)
    free = lattice.hermite_normal_form(U[n:]) if len(U) > n else []
    return ClassGroup(AbelianGroup(len(f.rays) - n, torsion), tuple(tuple(r) for r in free), torsion_rows)


# -- Cartier data and support functions ------------------------------------------------------


@dataclass(frozen=True)
class TCartierData:
    """Local characters ``u(sigma)`` for every maximal cone."""

    divisor: TWeilDivisor
    local_data: dict = field(hash=False)

    @property
    def fan(self) -> Fan:
        return self.divisor.fan

    def u(self, sigma_index: tuple[int, ...]) -> Vector:
        return self.local_data[tuple(sigma_index)]

    def items(self):
        return [(c, self.local_data[c]) for c in self.fan.max_cones]


def cartier_from_weil(d: TWeilDivisor) -> TCartierData:
    """Solve ``<u(sigma), v_i> = -a_i`` over the integers cone by cone.

    Raises :class:`NotCartierError` naming the first cone without an
    integral solution.
    """
    f = d.fan
    data = {}
    for idx, sigma in zip(f.max_cones, f.maximal_cones):
        A = [list(f.rays[i]) for i in idx]
        b = [-d.coeffs[i] for i in idx]
        if not A:
            data[idx] = (0,) * f.lattice_rank
            continue
        status, u = lattice.solve_integer(A, b)
        if status != "integral":
            kind = "only rational" if status == "rational" else "no"
            raise NotCartierError(f"divisor has {kind} local solution on {sigma}", cone=sigma)
        data[idx] = tuple(u)
    keys = list(data)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            diff = [x - y for x, y in zip(data[a], data[b])]
            for k in set(a) & set(b):
                if pairing(diff, f.rays[k]) != 0:  # pragma: no cover - valid fans never get here
                    raise ToricError(f"local data on {a} and {b} disagree on ray {k}")
    return TCartierData(d, data)


def is_cartier(d: TWeilDivisor) -> bool:
    try:
        cartier_from_weil(d)
    except NotCartierError:
        return False
    return True


@dataclass(frozen=True)
class SupportFunction:
    """``Psi_D``: linear on each maximal cone, ``Psi_D(v) = <u(sigma), v>``."""

    cartier: TCartierData

    def __call__(self, v: Sequence) -> Fraction:
        f = self.cartier.fan
        if len(v) != f.lattice_rank:
            raise DimensionError(f"point of length {len(v)} in a rank-{f.lattice_rank} fan")
        v = tuple(Fraction(x) for x in v)
        for idx, sigma in zip(f.max_cones, f.maximal_cones):
            if sigma.contains(v):
                u = self.cartier.local_data[idx]
                return sum((a * x for a, x in zip(u, v)), Fraction(0))
        raise OutOfSupportError(f"{v} is not in the support of the fan")


def support_function(c: TCartierData) -> SupportFunction:
    return SupportFunction(c)


def _require_full_dim_cones(f: Fan, what: str):
    if any(not sigma.is_full_dimensional for sigma in f.maximal_cones):
        raise UnsupportedInputError(f"{what} needs every maximal cone full-dimensional")


def is_basepoint_free(c: TCartierData) -> bool:
    """``Psi_D`` convex: ``<u(sigma), v_i> >= -a_i`` for every cone and ray."""
    f = c.fan
    _require_full_dim_cones(f, "is_basepoint_free")
    a = c.divisor.coeffs
    return all(
        pairing(u, v) >= -a[i] for _, u in c.items() for i, v in enumerate(f.rays)
    )


def is_ample(c: TCartierData) -> bool:
    """``Psi_D`` strictly convex: strict inequality on every ray outside ``sigma``."""
    f = c.fan
    if not is_complete(f):
        raise UnsupportedInputError("ampleness test needs a complete fan")
    a = c.divisor.coeffs
    for idx, u in c.items():
        for i, v in enumerate(f.rays):
            val = pairing(u, v)
            if i in idx:
                if val != -a[i]:  # pragma: no cover
                    raise ToricError("corrupt Cartier data")
            elif val <= -a[i]:
                return False
    return True


def is_very_ample(c: TCartierData) -> bool:
    """Ample and ``{u - u(sigma) : u in P_D ∩ M}`` generates every ``S_sigma``."""
    if not is_ample(c):
        return False
    points = set(divisor_polytope(c).lattice_points)
    f = c.fan
    for idx, sigma in zip(f.max_cones, f.maximal_cones):
        us = c.local_data[idx]
        shifted = {tuple(x - y for x, y in zip(p, us)) for p in points}
        if not set(hilbert_basis(sigma.dual()).elements) <= shifted:
            return False
    return True


# -- polytopes ------------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorPolytope:
    """``P_D = {u : <u, v_i> >= -a_i}`` with its exact vertices.

    ``lattice_points`` is ``None`` when the polyhedron is unbounded.
    """

    inequalities: tuple[tuple[Vector, int], ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    recession_rays: tuple[Vector, ...]
    lattice_points: tuple[Vector, ...] | None

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.recession_rays

    @property
    def dimension(self) -> int:
        if not self.vertices:
            return -1
        base = self.vertices[0]
        diffs = [tuple(a - b for a, b in zip(v, base)) for v in self.vertices[1:]]
        return lattice.rank(diffs + [tuple(Fraction(x) for x in r) for r in self.recession_rays]) if (diffs or self.recession_rays) else 0

    def contains(self, u: Sequence) -> bool:
        return all(sum(Fraction(a) * b for a, b in zip(u, v)) >= bound for v, bound in self.inequalities)

    def as_lattice_polytope(self) -> LatticePolytope:
        if not self.is_bounded or self.is_empty:
            raise UnsupportedInputError("polytope is unbounded or empty")
        if any(x.denominator != 1 for v in self.vertices for x in v):
            raise UnsupportedInputError("polytope has non-lattice vertices")
        return LatticePolytope.from_points([tuple(int(x) for x in v) for v in self.vertices])


def _lattice_points(vertices, inequalities, n) -> tuple[Vector, ...]:
    lo = [min(v[j] for v in vertices) for j in range(n)]
    hi = [max(v[j] for v in vertices) for j in range(n)]
    lo = [math.ceil(x) for x in lo]
    hi = [math.floor(x) for x in hi]
    sizes = [max(b - a + 1, 0) for a, b in zip(lo, hi)]
    total = int(np.prod(sizes)) if sizes else 1
    if total > MAX_BOX_POINTS:
        raise UnsupportedInputError(f"lattice point box has {total} candidates (limit {MAX_BOX_POINTS})")
    if total == 0:
        return ()
    if n == 0:
        return ((),)
    grids = np.meshgrid(*[np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    A = np.array([v for v, _ in inequalities], dtype=np.int64).reshape(-1, n)
    bnd = np.array([b for _, b in inequalities], dtype=np.int64)
    ok = np.all(pts @ A.T >= bnd, axis=1)
    return tuple(sorted(tuple(int(x) for x in p) for p in pts[ok]))


def divisor_polytope(d: "TWeilDivisor | TCartierData") -> DivisorPolytope:
    """Vertices, recession rays and (when bounded) lattice points of ``P_D``."""
    weil = d.divisor if isinstance(d, TCartierData) else d
    f = weil.fan
    _require_spanning(f, "divisor_polytope")
    n = f.lattice_rank
    ineqs = tuple((v, -a) for v, a in zip(f.rays, weil.coeffs))
    # homogenise: <u, v_i> + a_i t >= 0, t >= 0
    rows = [tuple(v) + (a,) for v, a in zip(f.rays, weil.coeffs)] + [(0,) * n + (1,)]
    lin, rays = cone_from_inequalities(rows, n + 1)
    if lin:  # pragma: no cover - excluded by the spanning check
        raise ToricError("inequality system has a lineality space")
    vertices = sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in rays if r[-1] > 0)
    recession = sorted(r[:-1] for r in rays if r[-1] == 0)
    points = None
    if not recession:
        points = _lattice_points(vertices, ineqs, n) if vertices else ()
    return DivisorPolytope(ineqs, tuple(vertices), tuple(recession), points)


def psi_from_polytope(P: LatticePolytope, f: Fan) -> SupportFunction:
    """``Psi_P(v) = min_{u in P} <u, v>`` packaged as Cartier data on ``f``.

    Raises :class:`ToricError` naming a cone on which ``Psi_P`` is not linear.
    """
    if P.ambient_rank != f.lattice_rank:
        raise DimensionError("polytope and fan live in lattices of different rank")
    data = {}
    for idx, sigma in zip(f.max_cones, f.maximal_cones):
        best = None
        for u in P.vertices:
            if all(pairing(w, r) >= pairing(u, r) for w in P.vertices for r in sigma.rays):
                best = u
                break
        if best is None:
            raise ToricError(f"Psi_P is not linear on {sigma}; fan is not compatible with P")
        data[idx] = tuple(best)
    coeffs = []
    for i, v in enumerate(f.rays):
        coeffs.append(-min(pairing(u, v) for u in P.vertices))
    return SupportFunction(TCartierData(TWeilDivisor(f, tuple(coeffs)), data))


@dataclass(frozen=True)
class SectionsReport:
    h0: int
    euler_characteristic: int


def euler_sections_identity(c: TCartierData) -> SectionsReport:
    """``Card(P_D ∩ M) = h^0(O(D)) = chi(O(D))`` for basepoint-free ``D``.

    Higher cohomology is not computed, so other divisors are refused.
    """
    if not is_complete(c.fan):
        raise UnsupportedInputError("the sections identity needs a complete fan")
    if not is_basepoint_free(c):
        raise UnsupportedInputError("higher cohomology may not vanish; divisor is not basepoint free")
    count = len(divisor_polytope(c).lattice_points)
    return SectionsReport(count, count)


def positivity_report(d: TWeilDivisor) -> dict:
    """Cartier status, positivity verdicts and ``P_D`` data for ``d``."""
    report: dict = {}
    try:
        c = cartier_from_weil(d)
    except NotCartierError as exc:
        report["cartier"] = False
        report["offending_cone"] = str(exc.cone)
        c = None
    else:
        report["cartier"] = True
    complete = is_complete(d.fan)
    full = all(s.is_full_dimensional for s in d.fan.maximal_cones)
    report["basepoint_free"] = is_basepoint_free(c) if (c and full) else None
    report["ample"] = is_ample(c) if (c and complete) else None
    report["very_ample"] = is_very_ample(c) if (c and complete) else None
    P = divisor_polytope(d)
    report["bounded"] = P.is_bounded
    report["vertices"] = [list(v) for v in P.vertices]
    report["lattice_point_count"] = len(P.lattice_points) if P.lattice_points is not None else None
    return report
