"""
Fans and the combinatorics of the toric varieties they define.

A :class:`Fan` keeps its rays in the order they were given (divisor
coefficients are indexed by that order) and stores only maximal cones, as
sorted tuples of ray indices.  Faces are computed on demand.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

from . import lattice
from .cone import Cone, cone_key, hilbert_basis
from .errors import DimensionError, ToricError, UnknownConeError, UnsupportedInputError
from .lattice import AbelianGroup, QuotientLattice, Vector, primitive


class Fan:
    """A fan in ``N_R = R^rank``.

    Parameters
    ----------
    lattice_rank : int
    rays : sequence of integer vectors
        Ray generators; made primitive, order preserved.
    cones : sequence of sequences of ray indices
        Cones of the fan.  Non-maximal entries are dropped.
    """

    def __init__(self, lattice_rank: int, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]]):
        self.lattice_rank = int(lattice_rank)
        self.rays: tuple[Vector, ...] = tuple(primitive(r) for r in rays)
        for r in self.rays:
            if len(r) != self.lattice_rank:
                raise DimensionError(f"ray {r} does not live in Z^{self.lattice_rank}")
        idx = {tuple(sorted(set(int(i) for i in c))) for c in cones}
        for c in idx:
            for i in c:
                if not 0 <= i < len(self.rays):
                    raise DimensionError(f"cone {c} refers to ray index {i} out of range")
        maximal = [c for c in idx if not any(set(c) < set(d) for d in idx)]
        self.max_cones: tuple[tuple[int, ...], ...] = tuple(sorted(maximal, key=lambda c: (len(c), c)))

    @classmethod
    def from_cones(cls, cones: Iterable[Cone], lattice_rank: int | None = None) -> "Fan":
        """Build a fan from :class:`Cone` objects; rays are sorted lexicographically."""
        cones = list(cones)
        if lattice_rank is None:
            lattice_rank = cones[0].lattice_rank
        rays = sorted({r for c in cones for r in c.rays})
        index = {r: i for i, r in enumerate(rays)}
        return cls(lattice_rank, rays, [[index[r] for r in c.rays] for c in cones])

    # -- identity ---------------------------------------------------------------

    def canonical_key(self):
        mc = frozenset(frozenset(self.rays[i] for i in c) for c in self.max_cones)
        return (self.lattice_rank, frozenset(self.rays), mc)

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        return f"Fan(rank={self.lattice_rank}, rays={list(self.rays)}, max_cones={list(self.max_cones)})"

    # -- cones ------------------------------------------------------------------

    @cached_property
    def ray_index(self) -> dict[Vector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def cone(self, indices: Iterable[int]) -> Cone:
        return Cone.generated_by([self.rays[i] for i in indices], lattice_rank=self.lattice_rank)

    @cached_property
    def maximal_cones(self) -> list[Cone]:
        return [self.cone(c) for c in self.max_cones]

    @cached_property
    def cones(self) -> list[Cone]:
        """All cones of the fan (faces included), canonically ordered."""
        found = set()
        for sigma in self.maximal_cones:
            if sigma.is_strongly_convex():
                found.update(sigma.faces())
            else:
                found.add(sigma)
        if not found:
            found.add(Cone.zero(self.lattice_rank))
        return sorted(found, key=cone_key)

    def indices_of(self, c: Cone) -> tuple[int, ...]:
        return tuple(sorted(self.ray_index[r] for r in c.rays))

    def cones_of_dim(self, d: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == d]

    def __contains__(self, c: Cone) -> bool:
        return c in set(self.cones)

    def maximal_cones_containing(self, tau: Cone) -> list[int]:
        s = set(tau.rays)
        return [k for k, sigma in enumerate(self.maximal_cones) if s <= set(sigma.rays) and tau in sigma.faces()]

    def support_contains(self, v: Sequence) -> bool:
        return any(sigma.contains(v) for sigma in self.maximal_cones)

    def is_smooth(self) -> bool:
        return all(c.is_strongly_convex() and c.is_smooth() for c in self.maximal_cones)

    def is_simplicial(self) -> bool:
        return all(c.is_strongly_convex() and c.is_simplicial() for c in self.maximal_cones)

    def is_complete(self) -> bool:
        return is_complete(self)

    @property
    def dim_counts(self) -> list[int]:
        counts = [0] * (self.lattice_rank + 1)
        for c in self.cones:
            counts[c.dim] += 1
        return counts


# -- validation -------------------------------------------------------------------------


@dataclass
class ValidationReport:
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "valid" if self.ok else "\n".join(self.problems)


def validate(f: Fan) -> ValidationReport:
    """Check the fan axioms; an empty problem list means the fan is valid."""
    problems = []
    used = set()
    for c in f.max_cones:
        used.update(c)
    for i, r in enumerate(f.rays):
        if i not in used:
            problems.append(f"ray {i} {r} belongs to no cone")
    if len(set(f.rays)) != len(f.rays):
        problems.append("duplicate rays")
    cones = f.maximal_cones
    for idx, sigma in zip(f.max_cones, cones):
        if not sigma.is_strongly_convex():
            problems.append(f"cone {list(idx)} is not strongly convex")
            continue
        listed = {f.rays[i] for i in idx}
        if listed != set(sigma.rays):
            extra = sorted(listed - set(sigma.rays))
            problems.append(f"cone {list(idx)} has non-extreme generators {extra}")
    if problems:
        return ValidationReport(problems)
    for (i, a), (j, b) in combinations(list(enumerate(f.max_cones)), 2):
        sa, sb = cones[i], cones[j]
        meet = sa.intersection(sb)
        common = Cone.generated_by([f.rays[k] for k in set(a) & set(b)], lattice_rank=f.lattice_rank)
        if meet != common or common not in sa.faces() or common not in sb.faces():
            problems.append(
                f"intersection of cones {list(a)} and {list(b)} is {meet}, not a common face"
            )
    return ValidationReport(problems)


def is_complete(f: Fan) -> bool:
    """Whether the support of ``f`` is all of ``N_R``.

    Tested combinatorially: pure of full dimension, every codimension-one
    cone in exactly two maximal cones, and connected through those walls.
    """
    n = f.lattice_rank
    cones = f.maximal_cones
    if n == 0:
        return True
    if not cones or any(c.dim != n for c in cones):
        return False
    walls: dict[Cone, list[int]] = {}
    for k, sigma in enumerate(cones):
        for facet in sigma.facets():
            walls.setdefault(facet, []).append(k)
    if any(len(v) != 2 for v in walls.values()):
        return False
    seen = {0}
    stack = [0]
    adj: dict[int, set] = {k: set() for k in range(len(cones))}
    for a, b in walls.values():
        adj[a].add(b)
        adj[b].add(a)
    while stack:
        k = stack.pop()
        for m in adj[k] - seen:
            seen.add(m)
            stack.append(m)
    return len(seen) == len(cones)


# -- orbits and stars -------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRecord:
    """The torus orbit ``O_tau`` and its closure ``V(tau) = X(Star(tau))``."""

    cone: Cone
    orbit_dim: int
    quotient: QuotientLattice
    closure_fan: Fan


def star(f: Fan, tau: Cone) -> OrbitRecord:
    """The star of ``tau``: cones containing it, projected to ``N / N_tau``."""
    if tau not in f:
        raise UnknownConeError(f"{tau} is not a cone of the fan")
    n = f.lattice_rank
    q = lattice.quotient_lattice(n, tau.rays)
    tau_rays = set(tau.rays)
    rays: list[Vector] = []
    index = {}
    cones = []
    for k in f.maximal_cones_containing(tau):
        sigma = f.maximal_cones[k]
        idx = []
        for r in sigma.rays:
            if r in tau_rays:
                continue
            p = primitive(q.project(r))
            if p not in index:
                index[p] = None
            idx.append(p)
        cones.append(idx)
    rays = sorted(index)
    pos = {r: i for i, r in enumerate(rays)}
    closure = Fan(q.rank, rays, [[pos[r] for r in c] for c in cones])
    return OrbitRecord(tau, n - tau.dim, q, closure)


def orbit_table(f: Fan) -> list[OrbitRecord]:
    """One :class:`OrbitRecord` per cone, with the orbit relations re-checked."""
    records = [star(f, tau) for tau in f.cones]
    all_cones = set(f.cones)
    for rec in records:
        tau = rec.cone
        # U_sigma is the union of O_tau over faces tau of sigma
        if not set(tau.faces()) <= all_cones:
            raise ToricError(f"faces of {tau} missing from the fan")
        # V(tau) is the union of O_gamma over cones gamma containing tau
        above = [g for g in f.cones if set(tau.rays) <= set(g.rays) and tau in g.faces()]
        if len(above) != len(rec.closure_fan.cones):
            raise ToricError(f"orbit closure of {tau} has the wrong number of orbits")
        if rec.orbit_dim != f.lattice_rank - tau.dim:
            raise ToricError("orbit dimension mismatch")
    return records


# -- polytopes ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePolytope:
    """A polytope in ``M_R`` with lattice-point vertices."""

    vertices: tuple[Vector, ...]
    dimension: int

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise UnsupportedInputError("a polytope needs at least one point")
        n = len(pts[0])
        homog = Cone.generated_by([p + (1,) for p in pts], lattice_rank=n + 1, side="M")
        verts = sorted(r[:-1] for r in homog.rays if r[-1] == 1)
        base = pts[0]
        dim = lattice.rank([tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]) if len(pts) > 1 else 0
        return cls(tuple(verts), dim)

    @property
    def ambient_rank(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def _homogenised(self) -> Cone:
        return Cone.generated_by([v + (1,) for v in self.vertices], lattice_rank=self.ambient_rank + 1, side="M")

    def contains(self, u: Sequence) -> bool:
        return self._homogenised.contains(tuple(Fraction(x) for x in u) + (1,))

    def lattice_points(self) -> list[Vector]:
        lo = [min(v[j] for v in self.vertices) for j in range(self.ambient_rank)]
        hi = [max(v[j] for v in self.vertices) for j in range(self.ambient_rank)]
        return [p for p in product(*[range(a, b + 1) for a, b in zip(lo, hi)]) if self.contains(p)]


def normal_fan(P: LatticePolytope) -> Fan:
    """Inner normal fan: one maximal cone ``{v : <u'-u, v> >= 0}`` per vertex ``u``."""
    n = P.ambient_rank
    if P.dimension != n:
        raise UnsupportedInputError(f"normal fan needs a full-dimensional polytope, got dimension {P.dimension}")
    cones = []
    for u in P.vertices:
        diffs = [tuple(a - b for a, b in zip(w, u)) for w in P.vertices if w != u]
        tangent = Cone.generated_by(diffs, lattice_rank=n, side="M")
        cones.append(tangent.dual())
    return Fan.from_cones(cones, lattice_rank=n)


# -- subdivision and resolution -----------------------------------------------------------


def subdivide_at(f: Fan, v: Sequence[int]) -> Fan:
    """Star subdivision of ``f`` at the ray through ``v``."""
    if not any(v):
        raise UnsupportedInputError("cannot subdivide at the zero vector")
    v = primitive(v)
    if not f.support_contains(v):
        raise UnsupportedInputError(f"{v} is not in the support of the fan")
    if v in f.ray_index:
        return f
    rays = list(f.rays) + [v]
    vi = len(rays) - 1
    cones = []
    for idx, sigma in zip(f.max_cones, f.maximal_cones):
        if not sigma.contains(v):
            cones.append(list(idx))
            continue
        for facet in sigma.facets():
            if facet.contains(v):
                continue
            cones.append([f.ray_index[r] for r in facet.rays] + [vi])
    return Fan(f.lattice_rank, rays, cones)


def _ext_gcd(a, b):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def hirzebruch_jung(m: int, k: int) -> list[int]:
    """Continued fraction ``m/k = b_1 - 1/(b_2 - 1/(...))`` with every ``b_i >= 2``."""
    if not 0 < k < m:
        raise UnsupportedInputError(f"need 0 < k < m, got m={m}, k={k}")
    out = []
    x, y = m, k
    while y:
        b = -(-x // y)
        out.append(b)
        x, y = y, b * y - x
    return out


def normalize_2d(c: Cone) -> tuple[int, int, list[list[int]]]:
    """Unimodular ``A`` with ``A c = cone(e_2, m e_1 - k e_2)``, ``0 <= k < m``.

    Returns ``(m, k, A)``.
    """
    if c.lattice_rank != 2 or len(c.rays) != 2 or not c.is_full_dimensional or not c.is_strongly_convex():
        raise UnsupportedInputError(f"expected a full-dimensional strongly convex 2D cone, got {c}")
    a, b = c.rays
    g, s, t = _ext_gcd(a[1], -a[0])  # s*a2 - t*a1 = 1
    B = [[s, a[0]], [t, a[1]]]
    A = lattice.unimodular_inverse(B)
    p, q = lattice.matvec(A, b)
    if p < 0:
        A = lattice.matmul([[-1, 0], [0, 1]], A)
        p = -p
    m = p
    k = (-q) % m
    shift = (-k - q) // m
    A = lattice.matmul([[1, 0], [shift, 1]], A)
    return m, k, A


def resolve_2d(c: Cone) -> Fan:
    """Minimal smooth refinement of a 2D cone (Hirzebruch-Jung)."""
    if c.lattice_rank != 2:
        raise UnsupportedInputError(f"resolve_2d needs a rank-2 cone, got rank {c.lattice_rank}")
    m, k, A = normalize_2d(c)
    Ainv = lattice.unimodular_inverse(A)
    if m == 1:
        chain = [(0, 1), (1, 0)]
    else:
        chain = [(0, 1), (1, 0)]
        for b in hirzebruch_jung(m, k):
            u, w = chain[-1], chain[-2]
            chain.append((b * u[0] - w[0], b * u[1] - w[1]))
        assert chain[-1] == (m, -k)
    rays = [lattice.matvec(Ainv, r) for r in chain]
    if m == 1:
        rays = list(c.rays)
    return Fan(2, rays, [[i, i + 1] for i in range(len(rays) - 1)])


# -- limits, topology --------------------------------------------------------------------


def one_param_limit(f: Fan, v: Sequence[int]) -> Cone | None:
    """The cone whose distinguished point is ``lim_{z->0} lambda_v(z)``, or ``None``."""
    if not any(v):
        return Cone.zero(f.lattice_rank)
    for c in f.cones:
        if c.contains(v, relative_interior=True):
            return c
    return None


def fundamental_group(f: Fan) -> AbelianGroup:
    """``N / N'`` where ``N'`` is generated by the lattice points of all cones."""
    gens = []
    for sigma in f.maximal_cones:
        gens.extend(hilbert_basis(sigma).elements)
    return lattice.quotient_group(f.lattice_rank, gens)


def euler_characteristic(f: Fan) -> int:
    """Topological Euler characteristic of a complete toric variety."""
    if not is_complete(f):
        raise UnsupportedInputError("Euler characteristic formula needs a complete fan")
    return sum(1 for c in f.maximal_cones if c.dim == f.lattice_rank)


# -- smooth complete surfaces ---------------------------------------------------------------


def _angle_cmp(a, b):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    ha, hb = half(a), half(b)
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def cyclic_rays(f: Fan) -> list[Vector]:
    return sorted(f.rays, key=cmp_to_key(_angle_cmp))


def fan_from_cycle(rays: Sequence[Vector]) -> Fan:
    d = len(rays)
    return Fan(2, rays, [[i, (i + 1) % d] for i in range(d)])


def self_intersection_numbers(rays: Sequence[Vector]) -> list[int]:
    """``a_i`` with ``v_{i-1} + v_{i+1} = a_i v_i`` around a cyclic smooth fan."""
    d = len(rays)
    out = []
    for i in range(d):
        s = tuple(x + y for x, y in zip(rays[i - 1], rays[(i + 1) % d]))
        v = rays[i]
        a = Fraction(s[0] * v[0] + s[1] * v[1], v[0] ** 2 + v[1] ** 2)
        if a.denominator != 1 or tuple(a * x for x in v) != s:
            raise ToricError(f"neighbours of {v} do not sum to a multiple of it")
        out.append(int(a))
    return out


@dataclass(frozen=True)
class SurfaceReduction:
    """Blow-down sequence of a smooth complete toric surface."""

    removed: tuple[Vector, ...]
    model: str  # "P2" or "F"
    a: int | None
    fans: tuple[Fan, ...]

    @property
    def label(self) -> str:
        return "P2" if self.model == "P2" else f"F{self.a}"


def _reduce(rays: list[Vector], dead: set) -> list[Vector] | None:
    """Removal order reaching three rays, trying candidates in lexicographic order."""
    if len(rays) == 3:
        return []
    key = frozenset(rays)
    if key in dead:
        return None
    a = self_intersection_numbers(rays)
    for v in sorted(rays[i] for i in range(len(rays)) if a[i] == 1):
        rest = _reduce([r for r in rays if r != v], dead)
        if rest is not None:
            return [v] + rest
    dead.add(key)
    return None


def classify_smooth_surface(f: Fan) -> SurfaceReduction:
    """Blow down ``f`` to ``P^2`` or a Hirzebruch surface ``F_a``.

    Each step removes a ray ``v_j = v_{j-1} + v_{j+1}``.  Candidates are tried
    lexicographically, backtracking when a branch cannot reach ``P^2``; if no
    order reaches ``P^2`` the greedy lexicographic order is followed down to
    some ``F_a``.
    """
    if f.lattice_rank != 2 or not is_complete(f) or not f.is_smooth():
        raise UnsupportedInputError("classify_smooth_surface needs a smooth complete rank-2 fan")
    rays = cyclic_rays(f)
    order = _reduce(rays, set())
    removed = []
    fans = [fan_from_cycle(rays)]
    if order is not None:
        for v in order:
            rays = [r for r in rays if r != v]
            removed.append(v)
            fans.append(fan_from_cycle(rays))
        return SurfaceReduction(tuple(removed), "P2", None, tuple(fans))
    while True:
        a = self_intersection_numbers(rays)
        candidates = [rays[i] for i in range(len(rays)) if a[i] == 1]
        if not candidates:
            if len(rays) == 4:
                return SurfaceReduction(tuple(removed), "F", max(abs(x) for x in a), tuple(fans))
            raise ToricError(f"no removable ray among {len(rays)} rays")
        v = min(candidates)
        rays = [r for r in rays if r != v]
        removed.append(v)
        fans.append(fan_from_cycle(rays))


# -- reference fans ----------------------------------------------------------------------------


def trivial_fan(rank: int) -> Fan:
    """The fan consisting of the origin only (the torus)."""
    return Fan(rank, [], [[]])


def affine_space_fan(rank: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    return Fan(rank, rays, [list(range(rank))])


def projective_space_fan(n: int) -> Fan:
    """``P^n``: rays ``e_1, ..., e_n, -(e_1 + ... + e_n)``."""
    if n < 1:
        raise UnsupportedInputError("projective space needs n >= 1")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    return Fan(n, rays, [list(c) for c in combinations(range(n + 1), n)])


def hirzebruch_fan(a: int) -> Fan:
    """``F_a``: rays ``(1,0), (0,1), (-1,a), (0,-1)``."""
    return fan_from_cycle([(1, 0), (0, 1), (-1, a), (0, -1)])


def product_fan(f: Fan, g: Fan) -> Fan:
    """The fan of ``X(f) x X(g)`` in ``N_1 ⊕ N_2``."""
    n1, n2 = f.lattice_rank, g.lattice_rank
    rays = [r + (0,) * n2 for r in f.rays] + [(0,) * n1 + s for s in g.rays]
    off = len(f.rays)
    cones = [list(a) + [off + j for j in b] for a in f.max_cones for b in g.max_cones]
    return Fan(n1 + n2, rays, cones)


def weighted_projective_fan(*weights: int) -> Fan:
    """Fan of ``P(d_0, ..., d_n)`` in ``Z^{n+1} / Z (d_0, ..., d_n)``.

    The quotient is re-embedded in ``Z^n``; when some ``n`` of the images form
    a basis (always the case if a weight equals 1) that basis becomes the
    standard one.
    """
    if len(weights) == 1 and not isinstance(weights[0], int):
        weights = tuple(weights[0])
    d = [int(x) for x in weights]
    if len(d) < 2 or any(x <= 0 for x in d):
        raise UnsupportedInputError("weights must be at least two positive integers")
    g = 0
    for x in d:
        g = gcd(g, x)
    if g != 1:
        raise UnsupportedInputError(f"weights {d} have gcd {g} != 1")
    n = len(d) - 1
    q = lattice.quotient_lattice(n + 1, [d])
    images = [q.project(tuple(int(i == j) for j in range(n + 1))) for i in range(n + 1)]
    for subset in combinations(range(n + 1), n):
        B = [list(images[i]) for i in subset]
        if abs(lattice.det(B)) == 1:
            change = lattice.unimodular_inverse(lattice.transpose(B))
            images = [lattice.matvec(change, v) for v in images]
            break
    rays = [primitive(v) for v in images]
    return Fan(n, rays, [list(c) for c in combinations(range(n + 1), n)])
