"""
Rational polyhedral cones in ``N_R`` or ``M_R``.

A :class:`Cone` is stored by its canonical minimal generating set, so equal
cones compare and hash equal.  Duals and faces come from exact double
description; Hilbert bases from triangulation plus fundamental
parallelepiped enumeration.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import lattice
from ._polyhedra import canonical_generators, cone_from_inequalities
from .errors import DimensionError, UnsupportedInputError
from .lattice import Vector, pairing, primitive

_OTHER_SIDE = {"N": "M", "M": "N"}


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by canonical generators.

    Use :meth:`Cone.generated_by` to build one from arbitrary generators; the
    plain constructor trusts that ``rays`` is already canonical.
    """

    lattice_rank: int
    rays: tuple[Vector, ...] = ()
    side: str = "N"

    @classmethod
    def generated_by(cls, generators: Iterable[Sequence], lattice_rank: int | None = None, side: str = "N") -> "Cone":
        gens = [tuple(g) for g in generators]
        if lattice_rank is None:
            if not gens:
                raise DimensionError("lattice rank required for the zero cone")
            lattice_rank = len(gens[0])
        for g in gens:
            if len(g) != lattice_rank:
                raise DimensionError(f"generator {g} has length {len(g)}, expected {lattice_rank}")
        prim = sorted({primitive(g) for g in gens if any(g)})
        if not prim:
            return cls(lattice_rank, (), side)
        if lattice.rank(prim) == len(prim):
            return cls(lattice_rank, tuple(prim), side)
        dual_lin, dual_rays = cone_from_inequalities(prim, lattice_rank)
        ineqs = list(dual_rays) + list(dual_lin) + [tuple(-x for x in l) for l in dual_lin]
        lin, rays = cone_from_inequalities(ineqs, lattice_rank)
        return cls(lattice_rank, canonical_generators(lin, rays, lattice_rank), side)

    @classmethod
    def zero(cls, lattice_rank: int, side: str = "N") -> "Cone":
        return cls(lattice_rank, (), side)

    def __str__(self):
        body = ",".join("(" + ",".join(map(str, r)) + ")" for r in self.rays)
        return f"cone{{{body}}}"

    # -- H-representation ----------------------------------------------------

    @cached_property
    def _hrep(self) -> tuple[list[Vector], list[Vector]]:
        # (basis of the orthogonal complement, facet normals)
        return cone_from_inequalities(self.rays, self.lattice_rank)

    @property
    def equations(self) -> list[Vector]:
        return self._hrep[0]

    @property
    def inequalities(self) -> list[Vector]:
        return self._hrep[1]

    @cached_property
    def dim(self) -> int:
        return lattice.rank(self.rays) if self.rays else 0

    @cached_property
    def lineality_dim(self) -> int:
        eqs, ineqs = self._hrep
        dual_dim = lattice.rank(list(eqs) + list(ineqs)) if (eqs or ineqs) else 0
        return self.lattice_rank - dual_dim

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.lattice_rank

    def is_strongly_convex(self) -> bool:
        return self.lineality_dim == 0

    def dual(self) -> "Cone":
        eqs, ineqs = self._hrep
        gens = canonical_generators(eqs, ineqs, self.lattice_rank)
        return Cone(self.lattice_rank, gens, _OTHER_SIDE[self.side])

    def contains(self, v: Sequence, relative_interior: bool = False) -> bool:
        """Exact membership of the rational vector ``v``.

        Boundary points count as contained but not as relative-interior points.
        """
        if len(v) != self.lattice_rank:
            raise DimensionError(f"vector of length {len(v)} tested against rank {self.lattice_rank}")
        v = [Fraction(x) for x in v]
        eqs, ineqs = self._hrep
        if any(sum(a * x for a, x in zip(e, v)) != 0 for e in eqs):
            return False
        vals = [sum(a * x for a, x in zip(f, v)) for f in ineqs]
        if relative_interior:
            return all(val > 0 for val in vals)
        return all(val >= 0 for val in vals)

    def intersection(self, other: "Cone") -> "Cone":
        if other.lattice_rank != self.lattice_rank:
            raise DimensionError("cones live in lattices of different rank")
        ineqs = []
        for c in (self, other):
            eqs, fs = c._hrep
            ineqs += list(fs) + list(eqs) + [tuple(-x for x in e) for e in eqs]
        lin, rays = cone_from_inequalities(ineqs, self.lattice_rank)
        return Cone(self.lattice_rank, canonical_generators(lin, rays, self.lattice_rank), self.side)

    # -- faces ----------------------------------------------------------------

    def _require_strongly_convex(self, what):
        if not self.is_strongly_convex():
            raise UnsupportedInputError(f"{what} requires a strongly convex cone, got {self}")

    def facets(self) -> list["Cone"]:
        self._require_strongly_convex("facets")
        out = set()
        for f in self.inequalities:
            sub = tuple(r for r in self.rays if pairing(f, r) == 0)
            out.add(Cone(self.lattice_rank, sub, self.side))
        return sorted(out, key=_cone_key)

    def faces(self) -> list["Cone"]:
        """All faces, from the origin up to the cone itself."""
        self._require_strongly_convex("faces")
        ineqs = self.inequalities
        top = frozenset(range(len(self.rays)))
        found = {top}
        stack = [top]
        while stack:
            face = stack.pop()
            for f in ineqs:
                sub = frozenset(i for i in face if pairing(f, self.rays[i]) == 0)
                if sub not in found:
                    found.add(sub)
                    stack.append(sub)
        cones = [Cone(self.lattice_rank, tuple(self.rays[i] for i in sorted(s)), self.side) for s in found]
        return sorted(cones, key=_cone_key)

    def is_face_of(self, other: "Cone") -> bool:
        if not set(self.rays) <= set(other.rays):
            return False
        return self in other.faces()

    def is_simplicial(self) -> bool:
        self._require_strongly_convex("is_simplicial")
        return self.dim == len(self.rays)

    def is_smooth(self) -> bool:
        """True when the rays extend to a basis of the lattice."""
        if not self.is_simplicial():
            return False
        if not self.rays:
            return True
        return all(d == 1 for d in lattice.invariant_factors([list(r) for r in self.rays]))

    # -- lattice points -----------------------------------------------------

    def hilbert_basis(self) -> "HilbertBasis":
        return hilbert_basis(self)


def _cone_key(c: Cone):
    return (len(c.rays), c.rays)


def cone_key(c: Cone):
    """Canonical sort key: by number of rays, then lexicographically."""
    return _cone_key(c)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def is_strongly_convex(c: Cone) -> bool:
    return c.is_strongly_convex()


def faces(c: Cone) -> list[Cone]:
    return c.faces()


def is_smooth(c: Cone) -> bool:
    return c.is_smooth()


def is_simplicial(c: Cone) -> bool:
    return c.is_simplicial()


def contains(c: Cone, v: Sequence, relative_interior: bool = False) -> bool:
    return c.contains(v, relative_interior=relative_interior)


# -- Hilbert bases ----------------------------------------------------------------


@dataclass(frozen=True)
class HilbertBasis:
    """Minimal generating set of the semigroup ``cone ∩ lattice``."""

    cone: Cone
    elements: tuple[Vector, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _triangulate(rays: list[Vector], n: int) -> list[tuple[Vector, ...]]:
    # Pulling triangulation: cone over the facets that miss the smallest ray.
    d = lattice.rank(rays)
    if len(rays) == d:
        return [tuple(rays)]
    c = Cone(n, tuple(sorted(rays)))
    apex = c.rays[0]
    out = []
    for facet in c.facets():
        if apex in facet.rays:
            continue
        for simplex in _triangulate(list(facet.rays), n):
            out.append(simplex + (apex,))
    return out


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def parallelepiped_points(generators: Sequence[Vector], n: int) -> list[Vector]:
    """Lattice points of ``{sum l_i g_i : 0 <= l_i < 1}`` for independent ``g_i``.

    The points form a group isomorphic to ``Λ / <g>`` with ``Λ`` the saturated
    lattice in the span; it is enumerated by closing the images of a basis of
    ``Λ`` under addition modulo 1.
    """
    gens = [tuple(g) for g in generators]
    basis = lattice.saturation(gens, n)
    gt = lattice.transpose([list(g) for g in gens])
    steps = []
    for b in basis:
        lam = lattice.solve_rational(gt, b)
        steps.append(tuple(_frac(x) for x in lam))
    zero = tuple(Fraction(0) for _ in gens)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for e in frontier:
            for s in steps:
                f = tuple(_frac(a + b) for a, b in zip(e, s))
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    points = []
    for lam in seen:
        p = [sum(l * g[j] for l, g in zip(lam, gens)) for j in range(n)]
        points.append(tuple(int(x) for x in p))
    return points


def hilbert_basis(c: Cone) -> HilbertBasis:
    """Hilbert basis of the semigroup ``c ∩ lattice``.

    Raises :class:`UnsupportedInputError` for cones containing a line.
    """
    if not c.is_strongly_convex():
        raise UnsupportedInputError(f"Hilbert basis needs a strongly convex cone, got {c}")
    if not c.rays:
        return HilbertBasis(c, ())
    n = c.lattice_rank
    candidates = set(c.rays)
    for simplex in _triangulate(list(c.rays), n):
        for p in parallelepiped_points(simplex, n):
            if any(p):
                candidates.add(p)
    weight = [sum(col) for col in zip(*c.inequalities)] if c.inequalities else [0] * n
    if not any(weight):
        # a full linear subspace cannot occur here; the cone is a ray or line-free
        weight = list(c.rays[0])
    order = sorted(candidates, key=lambda p: (pairing(weight, p), p))
    basis = []
    for x in order:
        reducible = False
        for y in order:
            if pairing(weight, y) >= pairing(weight, x):
                break
            if c.contains(tuple(a - b for a, b in zip(x, y))):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return HilbertBasis(c, tuple(sorted(basis)))


# -- binomial relations ---------------------------------------------------------------


@dataclass(frozen=True)
class BinomialRelation:
    """The binomial ``Y^a - Y^b`` encoding ``sum a_i u_i = sum b_i u_i``."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __str__(self):
        def mono(exp):
            terms = []
            for i, e in enumerate(exp):
                if e == 1:
                    terms.append(f"Y{i + 1}")
                elif e:
                    terms.append(f"Y{i + 1}^{e}")
            return "*".join(terms) or "1"

        return f"{mono(self.a)} - {mono(self.b)}"


@dataclass(frozen=True)
class BinomialRelations:
    """Binomials generating the toric ideal up to saturation.

    The exponent differences form a lattice basis of all relations among the
    generators; this is not a Markov basis, so the ideal they generate may
    differ from the toric ideal by saturation.
    """

    relations: tuple[BinomialRelation, ...]
    up_to_saturation: bool = True

    def __iter__(self):
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    def __getitem__(self, i):
        return self.relations[i]


def relations_among(generators: Sequence[Vector]) -> BinomialRelations:
    gens = list(generators)
    if not gens:
        return BinomialRelations(())
    n = len(gens[0])
    A = [[g[j] for g in gens] for j in range(n)]
    kernel = lattice.integer_kernel(A, ncols=len(gens))
    rels = []
    for c in lattice.hermite_normal_form(kernel):
        a = tuple(max(x, 0) for x in c)
        b = tuple(max(-x, 0) for x in c)
        rels.append(BinomialRelation(a, b))
    return BinomialRelations(tuple(rels))


def binomial_relations(h: HilbertBasis) -> BinomialRelations:
    """Support-disjoint binomials ``Y^a - Y^b`` among the Hilbert basis."""
    return relations_among(h.elements)


# -- semigroups of affine charts ----------------------------------------------------


@dataclass(frozen=True)
class ChartSemigroup:
    """Generators of ``S_sigma = dual(sigma) ∩ M`` for a cone ``sigma`` in ``N``.

    When ``sigma`` is not full-dimensional the semigroup contains the group
    ``sigma^perp ∩ M``; generators are then lifts of the Hilbert basis of the
    pointed quotient followed by ``+b`` and ``-b`` for a basis ``b`` of the
    units.
    """

    cone: Cone
    generators: tuple[Vector, ...]
    units: tuple[Vector, ...]
    quotient: lattice.QuotientLattice
    pointed: HilbertBasis
    lifts: tuple[Vector, ...]
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def n_pointed(self) -> int:
        return len(self.lifts)

    def unit_mask(self) -> tuple[bool, ...]:
        return (False,) * len(self.lifts) + (True,) * (2 * len(self.units))

    def decompose(self, w: Sequence[int]) -> tuple[int, ...] | None:
        """Nonnegative exponents ``e`` with ``sum e_i g_i = w``, or ``None``."""
        w = tuple(int(x) for x in w)
        dual = self._dual
        if not dual.contains(w):
            return None
        q = self.quotient.project(w)
        coeffs = _decompose_pointed(q, self.pointed, self._memo)
        if coeffs is None:  # pragma: no cover - Hilbert basis generates
            raise AssertionError(f"{w} not generated by the Hilbert basis")
        rest = list(w)
        for c, lift in zip(coeffs, self.lifts):
            rest = [a - c * b for a, b in zip(rest, lift)]
        unit_exps = []
        if self.units:
            status, t = lattice.solve_integer(lattice.transpose([list(u) for u in self.units]), rest)
            if status != "integral":  # pragma: no cover
                raise AssertionError("residual is not in the unit lattice")
            for x in t:
                unit_exps.append((max(x, 0), max(-x, 0)))
        elif any(rest):  # pragma: no cover
            raise AssertionError("nonzero residual with no units")
        plus = tuple(e[0] for e in unit_exps)
        minus = tuple(e[1] for e in unit_exps)
        return tuple(coeffs) + plus + minus

    @cached_property
    def _dual(self) -> Cone:
        return self.cone.dual()


def _decompose_pointed(q, hb: HilbertBasis, memo):
    c = hb.cone
    elems = hb.elements
    if not elems:
        return () if not any(q) else None
    weight = [sum(col) for col in zip(*c.inequalities)] if c.inequalities else list(elems[0])
    order = sorted(range(len(elems)), key=lambda i: -pairing(weight, elems[i]))

    def rec(v):
        if not any(v):
            return (0,) * len(elems)
        if v in memo:
            return memo[v]
        memo[v] = None
        for i in order:
            r = tuple(a - b for a, b in zip(v, elems[i]))
            if c.contains(r):
                sub = rec(r)
                if sub is not None:
                    res = tuple(x + (j == i) for j, x in enumerate(sub))
                    memo[v] = res
                    return res
        return None

    return rec(tuple(q))


def chart_semigroup(sigma: Cone) -> ChartSemigroup:
    """Generators of the semigroup ``S_sigma`` of the affine chart ``U_sigma``."""
    n = sigma.lattice_rank
    dual = sigma.dual()
    units = lattice.saturation(sigma.equations, n) if sigma.equations else []
    q = lattice.quotient_lattice(n, units)
    proj_rays = [q.project(r) for r in dual.rays]
    pointed_cone = Cone.generated_by([r for r in proj_rays if any(r)], lattice_rank=q.rank, side="M")
    hb = hilbert_basis(pointed_cone)
    # section of the projection: s_j with P s_j = e_j
    sections = []
    for j in range(q.rank):
        e = [int(i == j) for i in range(q.rank)]
        status, s = lattice.solve_integer([list(r) for r in q.projection], e)
        sections.append(s)
    lifts = []
    for h in hb.elements:
        lift = [sum(h[j] * sections[j][i] for j in range(q.rank)) for i in range(n)]
        lifts.append(tuple(lift))
    units = [tuple(u) for u in units]
    gens = tuple(lifts) + tuple(units) + tuple(tuple(-x for x in u) for u in units)
    return ChartSemigroup(sigma, gens, tuple(units), q, hb, tuple(lifts))
