"""
Points of toric varieties, the momentum map and the contact classification.

Combinatorics stays exact; character values are complex binary64.  A point
of ``U_sigma`` is a semigroup homomorphism ``S_sigma -> C`` stored by its
values on the generators of :func:`torickit.cone.chart_semigroup`.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from . import lattice
from .cone import ChartSemigroup, Cone, chart_semigroup, relations_among
from .divisor import (
    DivisorPolytope,
    TCartierData,
    TWeilDivisor,
    class_group,
    divisor_polytope,
    is_ample,
)
from .errors import DegenerateInputError, DimensionError, ToricError, UnsupportedInputError
from .fan import (
    Fan,
    LatticePolytope,
    is_complete,
    projective_space_fan,
)
from .lattice import Vector, pairing

CONSISTENCY_RTOL = 1e-9
PARTITION_TOL = 1e-12
INSIDE_TOL = 1e-9
LOG_RADIUS_BOUND = 10.0


@lru_cache(maxsize=None)
def _chart(sigma: Cone) -> ChartSemigroup:
    return chart_semigroup(sigma)


@lru_cache(maxsize=None)
def _exponents(sigma: Cone, w: tuple) -> tuple[int, ...] | None:
    return _chart(sigma).decompose(w)


# -- points -------------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusPoint:
    """``t = exp(log_radius + i angle)`` coordinatewise, a point of ``T_N``."""

    log_radius: tuple[float, ...]
    angle: tuple[float, ...]

    def __post_init__(self):
        lr = tuple(float(x) for x in self.log_radius)
        an = tuple(float(x) % (2 * math.pi) for x in self.angle)
        if len(lr) != len(an):
            raise DimensionError("log_radius and angle differ in length")
        if not all(math.isfinite(x) for x in lr + an):
            raise ValueError("torus point coordinates must be finite")
        object.__setattr__(self, "log_radius", lr)
        object.__setattr__(self, "angle", an)

    @classmethod
    def identity(cls, n: int) -> "TorusPoint":
        return cls((0.0,) * n, (0.0,) * n)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, bound: float = LOG_RADIUS_BOUND, compact: bool = False) -> "TorusPoint":
        """Uniform log-radii in ``[-bound, bound]`` (zero if ``compact``) and angles."""
        lr = np.zeros(n) if compact else rng.uniform(-bound, bound, n)
        return cls(tuple(lr), tuple(rng.uniform(0, 2 * math.pi, n)))

    @property
    def rank(self) -> int:
        return len(self.log_radius)

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(
            tuple(a + b for a, b in zip(self.log_radius, other.log_radius)),
            tuple(a + b for a, b in zip(self.angle, other.angle)),
        )

    def character(self, u: Sequence[int]) -> complex:
        z = sum(a * complex(r, t) for a, r, t in zip(u, self.log_radius, self.angle))
        return complex(np.exp(z))


@dataclass(frozen=True)
class AlgebraicPoint:
    """A semigroup homomorphism ``S_sigma -> C`` given on the chart generators."""

    semigroup: ChartSemigroup
    values: tuple[complex, ...]

    @property
    def chart(self) -> Cone:
        return self.semigroup.cone

    @property
    def generators(self) -> tuple[Vector, ...]:
        return self.semigroup.generators

    def character(self, w: Sequence[int]) -> complex:
        """``chi^w(x)`` for ``w`` in ``S_sigma``."""
        e = _exponents(self.chart, tuple(int(x) for x in w))
        if e is None:
            raise UnsupportedInputError(f"{tuple(w)} is not in the semigroup of {self.chart}")
        out = complex(1.0)
        for k, v in zip(e, self.values):
            if k:
                out *= v**k
        return out

    def log_abs_character(self, w: Sequence[int]) -> float:
        e = _exponents(self.chart, tuple(int(x) for x in w))
        if e is None:
            raise UnsupportedInputError(f"{tuple(w)} is not in the semigroup of {self.chart}")
        total = 0.0
        for k, v in zip(e, self.values):
            if k:
                a = abs(v)
                if a == 0.0:
                    return -math.inf
                total += k * math.log(a)
        return total

    def is_consistent(self, rtol: float = CONSISTENCY_RTOL) -> bool:
        """Every binomial relation among the generators holds numerically."""
        for rel in relations_among(self.generators):
            lhs = np.prod([v**k for v, k in zip(self.values, rel.a)])
            rhs = np.prod([v**k for v, k in zip(self.values, rel.b)])
            if abs(lhs - rhs) > rtol * max(1.0, abs(lhs), abs(rhs)):
                return False
        return True


def distinguished_point(sigma: Cone) -> AlgebraicPoint:
    """``x_sigma``: 1 on characters in ``sigma^perp``, 0 on the rest."""
    sg = _chart(sigma)
    vals = tuple(
        complex(1.0) if all(pairing(g, v) == 0 for v in sigma.rays) else complex(0.0)
        for g in sg.generators
    )
    return AlgebraicPoint(sg, vals)


def torus_embed(t: TorusPoint, sigma: Cone) -> AlgebraicPoint:
    """The torus point ``t`` seen in the chart ``U_sigma``."""
    if t.rank != sigma.lattice_rank:
        raise DimensionError("torus point and cone have different rank")
    sg = _chart(sigma)
    return AlgebraicPoint(sg, tuple(t.character(g) for g in sg.generators))


def torus_act(t: TorusPoint, x: AlgebraicPoint) -> AlgebraicPoint:
    """``(t.x)(u) = t(u) x(u)``."""
    if t.rank != x.chart.lattice_rank:
        raise DimensionError("torus point and chart have different rank")
    return AlgebraicPoint(x.semigroup, tuple(t.character(g) * v for g, v in zip(x.generators, x.values)))


def retract(x: AlgebraicPoint) -> AlgebraicPoint:
    """Replace every value by its modulus (the quotient by the compact torus)."""
    return AlgebraicPoint(x.semigroup, tuple(complex(abs(v)) for v in x.values))


def projective_retraction(coords: Sequence[complex]) -> np.ndarray:
    """``(x_0 : ... : x_n) -> (|x_0|, ..., |x_n|) / sum |x_i|``."""
    a = np.abs(np.asarray(coords, dtype=complex))
    s = a.sum()
    if s == 0:
        raise DegenerateInputError("all homogeneous coordinates are zero")
    return a / s


def fulton_moment(coords: Sequence[complex]) -> np.ndarray:
    """Moment map of ``(S^1)^r`` on ``P^{r-1}``: ``|x_i|^2 / sum |x_j|^2``."""
    a = np.abs(np.asarray(coords, dtype=complex)) ** 2
    s = a.sum()
    if s == 0:
        raise DegenerateInputError("all homogeneous coordinates are zero")
    return a / s


def legendre_map(u_list: Sequence[Sequence[int]], x: Sequence[float], eps: Sequence[float] | None = None) -> np.ndarray:
    """Gradient of ``log sum_i eps_i exp(<u_i, x>)``.

    The convex hull of ``u_list`` must be full-dimensional; the image is
    then its interior.
    """
    U = np.asarray(u_list, dtype=float)
    if U.ndim != 2 or len(U) == 0:
        raise UnsupportedInputError("need a nonempty list of vectors")
    n = U.shape[1]
    if len(U) < n + 1 or np.linalg.matrix_rank(U[1:] - U[0]) < n:
        raise UnsupportedInputError("convex hull of the vectors lies in a hyperplane")
    eps = np.ones(len(U)) if eps is None else np.asarray(eps, dtype=float)
    if np.any(eps <= 0):
        raise UnsupportedInputError("weights must be positive")
    z = U @ np.asarray(x, dtype=float) + np.log(eps)
    z -= z.max()
    w = np.exp(z)
    w /= w.sum()
    return w @ U


# -- momentum map -----------------------------------------------------------------------


@dataclass(frozen=True)
class MomentSample:
    point_id: int
    mu: tuple[float, ...]
    inside: bool
    barycentric_weights: tuple[float, ...]
    kind: str = "point"
    chart: Cone | None = None


def _host_cone(f: Fan, sigma: Cone) -> tuple[int, ...]:
    for idx, tau in zip(f.max_cones, f.maximal_cones):
        if set(sigma.rays) <= set(tau.rays) and sigma in tau.faces():
            return idx
    raise UnsupportedInputError(f"{sigma} is not a cone of the fan")


def _inside(mu, inequalities, tol=INSIDE_TOL) -> bool:
    return all(float(np.dot(v, mu)) >= b - tol for v, b in inequalities)


def _polytope_points(P) -> tuple[Vector, ...]:
    if isinstance(P, DivisorPolytope):
        if P.lattice_points is None:
            raise UnsupportedInputError("polytope is unbounded")
        return P.lattice_points
    if isinstance(P, LatticePolytope):
        return tuple(P.lattice_points())
    return tuple(tuple(int(x) for x in u) for u in P)


def _weights_from_logs(logs: np.ndarray) -> np.ndarray:
    top = logs.max()
    if not np.isfinite(top):
        raise DegenerateInputError("every section vanishes at this point")
    w = np.exp(logs - top)
    return w / w.sum()


def moment_map(
    x: AlgebraicPoint, P, cartier: TCartierData, point_id: int = 0, kind: str = "point", tol: float = INSIDE_TOL
) -> MomentSample:
    """``mu(x) = sum_u rho_u(x) u`` with ``rho_u = |h_u| / sum |h_u'|``.

    ``h_u = chi^{u - u(sigma)}(x)`` uses the local trivialisation on a maximal
    cone containing the chart of ``x``.
    """
    f = cartier.fan
    host = _host_cone(f, x.chart)
    us = cartier.local_data[host]
    points = _polytope_points(P)
    logs = np.empty(len(points))
    for k, u in enumerate(points):
        w = tuple(a - b for a, b in zip(u, us))
        logs[k] = x.log_abs_character(w)
    rho = _weights_from_logs(logs)
    U = np.asarray(points, dtype=float).reshape(len(points), f.lattice_rank)
    mu = rho @ U
    ineqs = [(v, -a) for v, a in zip(f.rays, cartier.divisor.coeffs)]
    return MomentSample(point_id, tuple(mu.tolist()), _inside(mu, ineqs, tol), tuple(rho.tolist()), kind, x.chart)


class _TorusSampler:
    """Vectorised ``mu`` for torus points: ``log|h_u| = <u, log_radius>`` up to a constant."""

    def __init__(self, points):
        self.U = np.asarray(points, dtype=float)

    def __call__(self, t: TorusPoint):
        logs = self.U @ np.asarray(t.log_radius)
        rho = _weights_from_logs(logs)
        return rho, rho @ self.U


def sample_moment_image(
    f: Fan, cartier: TCartierData, count: int, seed: int = 0, bound: float = LOG_RADIUS_BOUND, tol: float = INSIDE_TOL
) -> list[MomentSample]:
    """Distinguished points of every cone followed by ``count`` seeded torus points.

    Torus sample ``i`` draws from ``numpy.random.default_rng([seed, i])`` so the
    output does not depend on evaluation order.
    """
    if count < 0 or seed < 0:
        raise UnsupportedInputError("count and seed must be nonnegative")
    if not is_complete(f):
        raise UnsupportedInputError("sampling needs a complete fan")
    if not is_ample(cartier):
        raise UnsupportedInputError("divisor is not ample; the image need not be P_D")
    P = divisor_polytope(cartier)
    points = P.lattice_points
    ineqs = [(v, -a) for v, a in zip(f.rays, cartier.divisor.coeffs)]
    out = []
    for sigma in f.cones:
        out.append(moment_map(distinguished_point(sigma), P, cartier, len(out), "distinguished", tol))
    sampler = _TorusSampler(points)
    zero = Cone.zero(f.lattice_rank)
    start = len(out)
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        t = TorusPoint.random(rng, f.lattice_rank, bound)
        rho, mu = sampler(t)
        out.append(MomentSample(start + i, tuple(mu.tolist()), _inside(mu, ineqs, tol), tuple(rho.tolist()), "torus", zero))
    return out


@dataclass(frozen=True)
class ConvexityReport:
    n_samples: int
    inside_fraction: float
    vertices: tuple[tuple[Fraction, ...], ...]
    attained: tuple[bool, ...]
    hull_gap: float

    @property
    def vertices_attained(self) -> bool:
        return all(self.attained)


def _distance_to_hull(p: np.ndarray, pts: np.ndarray) -> float:
    if len(pts) == 1:
        return float(np.linalg.norm(pts[0] - p))
    k = len(pts)

    def obj(lam):
        d = lam @ pts - p
        return float(d @ d)

    def grad(lam):
        return 2 * pts @ (lam @ pts - p)

    res = minimize(
        obj,
        np.full(k, 1.0 / k),
        jac=grad,
        bounds=[(0, 1)] * k,
        constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1, "jac": lambda lam: np.ones(k)}],
        method="SLSQP",
        options={"ftol": 1e-16, "maxiter": 500},
    )
    return math.sqrt(max(res.fun, 0.0))


def convexity_report(samples: Sequence[MomentSample], P: DivisorPolytope, tol: float = INSIDE_TOL) -> ConvexityReport:
    """Containment, vertex attainment and hull coverage of sampled ``mu`` values."""
    mus = np.asarray([s.mu for s in samples], dtype=float)
    inside = sum(1 for s in samples if s.inside) / len(samples) if samples else 0.0
    dist = [s for s in samples if s.kind == "distinguished"]
    dmus = np.asarray([s.mu for s in dist], dtype=float)
    attained = []
    gaps = []
    hull_pts = mus
    if len(mus) > mus.shape[1] + 1 and mus.shape[1] >= 2:
        try:
            hull_pts = mus[ConvexHull(mus).vertices]
        except QhullError:
            hull_pts = mus
    elif mus.shape[1] == 1 and len(mus):
        hull_pts = np.array([[mus.min()], [mus.max()]])
    for v in P.vertices:
        vf = np.array([float(x) for x in v])
        hit = bool(len(dmus)) and bool(np.any(np.max(np.abs(dmus - vf), axis=1) <= tol))
        attained.append(hit)
        if len(mus) and np.any(np.max(np.abs(mus - vf), axis=1) <= tol):
            gaps.append(0.0)
        elif len(mus):
            gaps.append(_distance_to_hull(vf, hull_pts))
    return ConvexityReport(len(samples), inside, P.vertices, tuple(attained), max(gaps) if gaps else math.inf)


# -- contact classification ----------------------------------------------------------------


def canonical_divisor(f: Fan) -> TWeilDivisor:
    """``K_X = -sum D_i``."""
    return TWeilDivisor(f, (-1,) * len(f.rays))


def _check_contact_input(f: Fan):
    n = f.lattice_rank
    if n % 2 == 0:
        raise UnsupportedInputError(f"contact structures need odd dimension, got {n}")
    if not f.is_smooth() or not is_complete(f):
        raise UnsupportedInputError("contact classification needs a smooth complete fan")


def contact_index_check(f: Fan) -> int | None:
    """``n + 1`` if ``[-K_X]`` is divisible by ``n + 1`` (rank ``2n + 1``), else ``None``."""
    _check_contact_input(f)
    k = (f.lattice_rank - 1) // 2 + 1
    cg = class_group(f)
    anti = cg.class_of(-canonical_divisor(f))
    return k if cg.is_divisible(anti, k) else None


def contact_line_bundle(f: Fan) -> TWeilDivisor:
    """A divisor ``L`` with ``(n + 1) L ~ -K_X``; needs the index check to pass."""
    k = contact_index_check(f)
    if k is None:
        raise UnsupportedInputError("-K_X is not divisible by n + 1")
    cg = class_group(f)
    if cg.group.torsion:
        raise UnsupportedInputError("class group has torsion")
    target = [x // k for x in cg.class_of(-canonical_divisor(f))]
    status, coeffs = lattice.solve_integer([list(r) for r in cg.free_rows], target)
    if status != "integral":  # pragma: no cover - the free map is onto
        raise ToricError("could not lift the class of L")
    return TWeilDivisor(f, coeffs)


def projectivized_tangent_fan(m: int) -> Fan:
    """Fan of ``P(T)`` over ``(P^1)^m``, of rank ``2m - 1``.

    Coordinates ``Z^m ⊕ Z^{m-1}``: fibre rays ``f_1, ..., f_{m-1}`` and
    ``f_m = -sum f_j``; base ray ``+e_i`` lifts to ``(e_i, 2 f_i)`` and ``-e_i``
    to ``(-e_i, 0)``.  Maximal cones pick one lift per factor and all fibre
    rays but one.
    """
    if m < 1:
        raise UnsupportedInputError("need at least one P^1 factor")
    if m == 1:
        return projective_space_fan(1)
    r = m - 1
    fib = [tuple(int(i == j) for j in range(r)) for i in range(r)] + [tuple(-1 for _ in range(r))]
    rays = []
    for i in range(m):
        e = tuple(int(i == j) for j in range(m))
        rays.append(e + tuple(2 * x for x in fib[i]))
        rays.append(tuple(-x for x in e) + (0,) * r)
    fiber_start = len(rays)
    rays += [(0,) * m + f for f in fib]
    cones = []
    for choice in range(2**m):
        base = [2 * i + ((choice >> i) & 1) for i in range(m)]
        for skip in range(m):
            cones.append(base + [fiber_start + j for j in range(m) if j != skip])
    return Fan(2 * m - 1, rays, cones)


def _ray_degrees(f: Fan) -> list[int]:
    deg = [0] * len(f.rays)
    for c in f.max_cones:
        for i in c:
            deg[i] += 1
    return deg


MAX_ISO_RANK = 6
MAX_ISO_RAYS = 16


def fan_isomorphic(f: Fan, g: Fan) -> list[list[int]] | None:
    """A unimodular ``A`` with ``A f = g`` (rays to rays, cones to cones), or ``None``."""
    for h in (f, g):
        if h.lattice_rank > MAX_ISO_RANK or len(h.rays) > MAX_ISO_RAYS:
            raise UnsupportedInputError("fan too large for the isomorphism search")
    n = f.lattice_rank
    if n != g.lattice_rank or len(f.rays) != len(g.rays) or len(f.max_cones) != len(g.max_cones):
        return None
    if sorted(len(c) for c in f.max_cones) != sorted(len(c) for c in g.max_cones):
        return None
    if sorted(_ray_degrees(f)) != sorted(_ray_degrees(g)):
        return None
    if n == 0:
        return []
    if lattice.rank(f.rays) < n:
        if lattice.rank(g.rays) == lattice.rank(f.rays) == 0:
            return lattice.identity(n)
        raise UnsupportedInputError("isomorphism search needs rays spanning N_R")
    # a basis of N_R among the rays of a maximal cone of f, completed by other rays if needed
    anchor = max(f.max_cones, key=lambda c: (lattice.rank([f.rays[i] for i in c]), [-i for i in c]))
    basis: list[int] = []
    for i in list(anchor) + [i for i in range(len(f.rays)) if i not in anchor]:
        if lattice.rank([f.rays[j] for j in basis + [i]]) == len(basis) + 1:
            basis.append(i)
        if len(basis) == n:
            break
    in_anchor = [i for i in basis if i in anchor]
    outside = [i for i in basis if i not in anchor]
    Bt = [list(f.rays[i]) for i in basis]  # rows = basis rays
    Binv = _rational_inverse(lattice.transpose(Bt))
    f_rays = set(f.rays)
    g_rays = set(g.rays)
    g_cones = {frozenset(g.rays[i] for i in c) for c in g.max_cones}
    f_deg = _ray_degrees(f)
    g_deg = _ray_degrees(g)
    for gc in g.max_cones:
        if len(gc) != len(anchor):
            continue
        for img in permutations(gc, len(in_anchor)):
            if any(f_deg[a] != g_deg[b] for a, b in zip(in_anchor, img)):
                continue
            rest = [j for j in range(len(g.rays)) if j not in img]
            for img2 in permutations(rest, len(outside)):
                images = dict(zip(in_anchor, img)) | dict(zip(outside, img2))
                C = lattice.transpose([list(g.rays[images[i]]) for i in basis])
                A = _matmul_frac(C, Binv)
                if any(x.denominator != 1 for row in A for x in row):
                    continue
                A = [[int(x) for x in row] for row in A]
                if abs(lattice.det(A)) != 1:
                    continue
                mapped = {lattice.matvec(A, r) for r in f_rays}
                if mapped != g_rays:
                    continue
                cones = {frozenset(lattice.matvec(A, f.rays[i]) for i in c) for c in f.max_cones}
                if cones == g_cones:
                    return A
    return None


def _rational_inverse(M):
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                fct = aug[i][c]
                aug[i] = [a - fct * b for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _matmul_frac(A, B):
    return [[sum(Fraction(a) * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@dataclass(frozen=True)
class ContactClassification:
    verdict: str
    index: int | None
    isomorphic_to: str | None = None
    witness_matrix: list | None = None


PROJECTIVE_SPACE = "projective space"
TANGENT_BUNDLE = "projectivized tangent bundle"
NO_CONTACT = "no contact structure"
UNCLASSIFIED = "index passes, classification fails"


def classify_contact(f: Fan) -> ContactClassification:
    """Decide which contact model (if any) ``X(f)`` can be.

    The index check is necessary only; both reference fans are then tested
    for isomorphism independently, and a passing index with no match is
    reported rather than hidden.
    """
    index = contact_index_check(f)
    if index is None:
        return ContactClassification(NO_CONTACT, None)
    n = (f.lattice_rank - 1) // 2
    A = fan_isomorphic(f, projective_space_fan(2 * n + 1))
    if A is not None:
        return ContactClassification(PROJECTIVE_SPACE, index, f"P^{2 * n + 1}", A)
    A = fan_isomorphic(f, projectivized_tangent_fan(n + 1))
    if A is not None:
        return ContactClassification(TANGENT_BUNDLE, index, f"P(T_(P^1)^{n + 1})", A)
    return ContactClassification(UNCLASSIFIED, index)
