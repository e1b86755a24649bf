import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torickit import (
    Cone,
    Fan,
    LatticePolytope,
    affine_space_fan,
    classify_smooth_surface,
    euler_characteristic,
    fundamental_group,
    hirzebruch_fan,
    hirzebruch_jung,
    hilbert_basis,
    is_complete,
    normal_fan,
    one_param_limit,
    orbit_table,
    product_fan,
    projective_space_fan,
    resolve_2d,
    star,
    subdivide_at,
    trivial_fan,
    validate,
    weighted_projective_fan,
)
from torickit.errors import UnknownConeError, UnsupportedInputError

P1 = projective_space_fan(1)
P2 = projective_space_fan(2)
P1xP1 = product_fan(P1, P1)
F1 = Fan(2, [(1, 0), (0, 1), (-1, -1), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])


def rays_set(f):
    return set(f.rays)


class TestValidate:
    def test_examples(self):
        assert validate(P2).ok
        bad = Fan(2, [(1, 0), (0, 1), (1, 1), (1, -1)], [[0, 1], [2, 3]])
        rep = validate(bad)
        assert not rep.ok and "not a common face" in rep.problems[0]
        assert validate(Fan(2, [(1, 0), (1, 2)], [[0, 1]])).ok

    def test_non_strongly_convex(self):
        rep = validate(Fan(2, [(1, 0), (-1, 0)], [[0, 1]]))
        assert not rep.ok

    def test_non_extreme_generator(self):
        rep = validate(Fan(2, [(1, 0), (1, 1), (0, 1)], [[0, 1, 2]]))
        assert any("non-extreme" in p for p in rep.problems)


class TestCompleteness:
    def test_examples(self):
        assert is_complete(P2)
        assert not is_complete(affine_space_fan(2))
        assert is_complete(P1xP1)

    def test_half_plane_not_complete(self):
        f = Fan(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1], [1, 2]])
        assert validate(f).ok and not is_complete(f)


class TestStarAndOrbits:
    def test_star_of_ray(self):
        rec = star(P2, Cone.generated_by([(1, 0)]))
        assert rec.orbit_dim == 1
        assert rec.closure_fan.lattice_rank == 1
        assert is_complete(rec.closure_fan) and len(rec.closure_fan.rays) == 2

    def test_star_of_origin_is_fan(self):
        rec = star(P2, Cone.zero(2))
        assert rec.closure_fan == P2

    def test_star_of_maximal_cone(self):
        rec = star(P2, P2.maximal_cones[0])
        assert rec.orbit_dim == 0 and rec.closure_fan.lattice_rank == 0

    def test_unknown_cone(self):
        with pytest.raises(UnknownConeError):
            star(P2, Cone.generated_by([(1, 1)]))

    def test_orbit_tables(self):
        dims = sorted(r.orbit_dim for r in orbit_table(P2))
        assert dims == [0, 0, 0, 1, 1, 1, 2]
        ray_fan = Fan(2, [(1, 0)], [[0]])
        assert sorted(r.orbit_dim for r in orbit_table(ray_fan)) == [1, 2]
        assert [r.orbit_dim for r in orbit_table(trivial_fan(2))] == [2]

    def test_star_dimensions(self):
        f = projective_space_fan(3)
        for tau in f.cones:
            rec = star(f, tau)
            for sigma_bar in rec.closure_fan.maximal_cones:
                assert sigma_bar.dim == 3 - tau.dim


class TestNormalFan:
    def test_simplex(self):
        f = normal_fan(LatticePolytope.from_points([(0, 0), (1, 0), (0, 1)]))
        assert f == P2 and rays_set(f) == {(1, 0), (0, 1), (-1, -1)}

    def test_square(self):
        assert normal_fan(LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])) == P1xP1

    def test_segment(self):
        assert normal_fan(LatticePolytope.from_points([(0,), (1,)])) == P1

    def test_lower_dimensional(self):
        with pytest.raises(UnsupportedInputError):
            normal_fan(LatticePolytope.from_points([(0, 0), (1, 1)]))

    def test_redundant_points_dropped(self):
        P = LatticePolytope.from_points([(0, 0), (2, 0), (0, 2), (1, 0), (1, 1)])
        assert P.vertices == ((0, 0), (0, 2), (2, 0)) and P.dimension == 2
        assert len(P.lattice_points()) == 6

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7))
    def test_complete_and_one_cone_per_vertex(self, pts):
        P = LatticePolytope.from_points(pts)
        if P.dimension < 2:
            return
        f = normal_fan(P)
        assert validate(f).ok and is_complete(f)
        assert len(f.max_cones) == len(P.vertices)


class TestSubdivision:
    def test_blow_up_plane(self):
        f = subdivide_at(affine_space_fan(2), (1, 1))
        assert {c.rays for c in f.maximal_cones} == {((1, 0), (1, 1)), ((0, 1), (1, 1))}
        assert f.is_smooth()

    def test_p2_to_f1(self):
        f = subdivide_at(P2, (1, 1))
        assert len(f.rays) == 4 and classify_smooth_surface(f).label == "P2"

    def test_existing_ray(self):
        assert subdivide_at(P2, (2, 0)) == P2

    def test_outside_support(self):
        with pytest.raises(UnsupportedInputError):
            subdivide_at(affine_space_fan(2), (-1, 0))

    @settings(max_examples=40, deadline=None)
    @given(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)).filter(any))
    def test_preserves_support(self, v):
        f = projective_space_fan(3)
        g = subdivide_at(f, v)
        assert validate(g).ok and is_complete(g)
        tau = one_param_limit(f, v)
        containing = [c for c in f.maximal_cones if c.contains(v)]
        # simplicial fan: every maximal cone containing tau splits into dim(tau) pieces
        expected = len(f.max_cones) - len(containing) + len(containing) * tau.dim
        assert euler_characteristic(g) == len(g.max_cones) == expected
        untouched = [c for c in f.maximal_cones if not c.contains(v)]
        assert all(c in g.maximal_cones for c in untouched)


def _hj(m, k):
    out, x = [], Fraction(m, k)
    while True:
        b = -((-x.numerator) // x.denominator)
        out.append(b)
        if b == x:
            return out
        x = 1 / (b - x)


class TestResolve2d:
    def test_a1(self):
        res = resolve_2d(Cone.generated_by([(0, 1), (2, -1)]))
        assert rays_set(res) == {(0, 1), (1, 0), (2, -1)}
        assert res.is_smooth()

    def test_smooth_unchanged(self):
        c = Cone.generated_by([(1, 0), (0, 1)])
        assert resolve_2d(c).maximal_cones == [c]

    def test_three_one(self):
        res = resolve_2d(Cone.generated_by([(0, 1), (3, -1)]))
        assert len(res.rays) - 2 == len(hirzebruch_jung(3, 1)) == 1

    def test_rank_check(self):
        with pytest.raises(UnsupportedInputError):
            resolve_2d(Cone.generated_by([(1, 0, 0)]))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.integers(-7, 7), st.integers(-7, 7)).filter(any), min_size=2, max_size=2))
    def test_arbitrary_cones(self, rays):
        c = Cone.generated_by(rays)
        if c.dim != 2 or not c.is_strongly_convex():
            return
        res = resolve_2d(c)
        assert res.is_smooth() and validate(res).ok
        assert set(c.rays) <= set(res.rays)
        assert all(c.contains(r) for r in res.rays)
        # minimal: no interior ray has self-intersection -1
        for r in res.rays:
            if r in c.rays:
                continue
            nbrs = [s for cone in res.maximal_cones if r in cone.rays for s in cone.rays if s != r]
            s = tuple(a + b for a, b in zip(*nbrs))
            assert s != r

    def test_continued_fraction(self):
        for m in range(2, 12):
            for k in range(1, m):
                if math.gcd(m, k) == 1:
                    assert hirzebruch_jung(m, k) == _hj(m, k)


class TestLimits:
    def test_examples(self):
        assert one_param_limit(P1, (1,)) == Cone.generated_by([(1,)])
        assert one_param_limit(Fan(1, [(1,)], [[0]]), (-1,)) is None
        assert one_param_limit(P2, (2, 1)) == Cone.generated_by([(1, 0), (0, 1)])
        assert one_param_limit(P2, (0, 0)) == Cone.zero(2)


class TestTopology:
    def test_pi1(self):
        for f in (P1, P2, P1xP1, F1):
            assert fundamental_group(f).is_trivial
        g = fundamental_group(trivial_fan(2))
        assert g.free_rank == 2 and not g.torsion
        g = fundamental_group(Fan(2, [(0, 1), (2, 1)], [[0], [1]]))
        assert g.torsion == (2,)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)).filter(any), min_size=1, max_size=3))
    def test_pi1_of_rays_matches_sympy(self, rays):
        f = Fan(2, rays, [[i] for i in range(len(rays))])
        if len(set(f.rays)) != len(f.rays):
            return
        g = fundamental_group(f)
        D = sympy_snf(sympy.Matrix([list(r) for r in f.rays]), domain=sympy.ZZ)
        diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
        assert g.free_rank == 2 - sum(1 for d in diag if d)
        assert list(g.torsion) == sorted(d for d in diag if d > 1)

    def test_full_dimensional_cone_gives_trivial_pi1(self):
        f = Fan(2, [(1, 0), (1, 5)], [[0, 1]])
        assert fundamental_group(f).is_trivial

    def test_euler(self):
        assert [euler_characteristic(f) for f in (P2, P1xP1, P1)] == [3, 4, 2]
        with pytest.raises(UnsupportedInputError):
            euler_characteristic(affine_space_fan(2))

    @pytest.mark.parametrize("f", [P2, F1, projective_space_fan(3)], ids=["P2", "F1", "P3"])
    def test_semigroup_sums(self, f):
        from torickit.cone import chart_semigroup

        for sigma, tau in itertools.combinations(f.maximal_cones, 2):
            meet = sigma.intersection(tau)
            hs = hilbert_basis(sigma.dual()).elements
            ht = hilbert_basis(tau.dual()).elements
            # S_sigma + S_tau is inside S_meet
            assert all(meet.dual().contains(u) for u in hs + ht)
            # every generator of S_meet splits as s + t with small s in S_sigma
            for g in chart_semigroup(meet).generators:
                found = False
                for coeffs in itertools.product(range(3), repeat=len(hs)):
                    s = tuple(sum(c * u[i] for c, u in zip(coeffs, hs)) for i in range(f.lattice_rank))
                    if tau.dual().contains(tuple(x - y for x, y in zip(g, s))):
                        found = True
                        break
                assert found, (sigma, tau, g)


class TestSurfaces:
    def test_examples(self):
        red = classify_smooth_surface(P2)
        assert red.label == "P2" and red.removed == ()
        red = classify_smooth_surface(F1)
        assert red.removed == ((0, -1),) and red.label == "P2"
        red = classify_smooth_surface(P1xP1)
        assert red.label == "F0" and red.removed == ()

    @pytest.mark.parametrize("a", [0, 2, 3, 5])
    def test_hirzebruch(self, a):
        assert classify_smooth_surface(hirzebruch_fan(a)).label == f"F{a}"

    def test_rejects_singular(self):
        with pytest.raises(UnsupportedInputError):
            classify_smooth_surface(weighted_projective_fan(1, 1, 2))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 5))
    def test_removable_ray_exists(self, seed, k):
        rng = random.Random(seed)
        f = hirzebruch_fan(rng.randint(0, 3))
        for _ in range(k):
            a, b = rng.choice(f.maximal_cones).rays
            f = subdivide_at(f, tuple(x + y for x, y in zip(a, b)))
        red = classify_smooth_surface(f)
        for g in red.fans:
            assert g.is_smooth() and is_complete(g)
        assert len(red.fans[-1].rays) in (3, 4)


class TestReferenceFans:
    def test_weighted(self):
        assert weighted_projective_fan(1, 1, 1) == P2
        assert rays_set(weighted_projective_fan(1, 1, 2)) == {(1, 0), (0, 1), (-1, -2)}
        assert weighted_projective_fan(1, 2) == P1
        with pytest.raises(UnsupportedInputError):
            weighted_projective_fan(2, 4)

    def test_products(self):
        assert product_fan(P1, P1) == P1xP1
        f = product_fan(P1, P2)
        assert f.lattice_rank == 3 and len(f.max_cones) == 6 and f.is_smooth() and is_complete(f)
        g = product_fan(P1, trivial_fan(1))
        assert g.lattice_rank == 2 and len(g.max_cones) == 2

    def test_equality_ignores_ray_order(self):
        g = Fan(2, [(-1, -1), (1, 0), (0, 1)], [[0, 1], [1, 2], [0, 2]])
        assert g == P2 and hash(g) == hash(P2)
