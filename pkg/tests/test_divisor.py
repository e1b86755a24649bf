import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torickit import (
    Fan,
    LatticePolytope,
    TWeilDivisor,
    affine_space_fan,
    cartier_from_weil,
    class_group,
    div_of_character,
    divisor_polytope,
    euler_sections_identity,
    hirzebruch_fan,
    is_ample,
    is_basepoint_free,
    is_cartier,
    is_very_ample,
    normal_fan,
    positivity_report,
    product_fan,
    projective_space_fan,
    psi_from_polytope,
    subdivide_at,
    support_function,
    weighted_projective_fan,
)
from torickit.errors import NotCartierError, OutOfSupportError, ToricError, UnsupportedInputError

P1 = projective_space_fan(1)
P2 = projective_space_fan(2)
P1xP1 = product_fan(P1, P1)
P112 = weighted_projective_fan(1, 1, 2)
D3 = TWeilDivisor.prime(P2, 2)

SMOOTH_COMPLETE = [P1, P2, P1xP1, hirzebruch_fan(1), hirzebruch_fan(3), projective_space_fan(3), subdivide_at(P2, (1, 1))]


def rational_points(rng, n, count):
    return [tuple(Fraction(rng.randint(-15, 15), rng.randint(1, 7)) for _ in range(n)) for _ in range(count)]


class TestCharacters:
    def test_examples(self):
        assert div_of_character(P2, (1, 0)).coeffs == (1, 0, -1)
        assert div_of_character(P2, (0, 0)) == TWeilDivisor.zero(P2)
        assert div_of_character(P1, (1,)).coeffs == (1, -1)

    def test_arithmetic(self):
        d = TWeilDivisor(P2, [1, 2, 3])
        assert (d + d).coeffs == (d * 2).coeffs == (2, 4, 6)
        assert (-d).coeffs == (-1, -2, -3)
        assert (d - d) == TWeilDivisor.zero(P2)
        with pytest.raises(ValueError):
            TWeilDivisor(P2, [1, 2])


class TestClassGroup:
    @pytest.mark.parametrize("f, expected", [(P2, "Z"), (P1xP1, "Z^2"), (P112, "Z")])
    def test_examples(self, f, expected):
        cg = class_group(f)
        assert str(cg.group) == expected
        # oracle: cokernel of the pairing matrix via sympy
        D = sympy_snf(sympy.Matrix([list(r) for r in f.rays]).T, domain=sympy.ZZ)
        diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
        assert cg.group.free_rank == len(f.rays) - sum(1 for d in diag if d)
        assert list(cg.group.torsion) == sorted(d for d in diag if d > 1)

    def test_weights_of_p112(self):
        cg = class_group(P112)
        classes = [cg.class_of(TWeilDivisor.prime(P112, i)) for i in range(3)]
        # rays follow the weight order: sum d_i v_i = 0 with d = (1, 1, 2),
        # and D_i has class d_i times a generator
        w = (1, 1, 2)
        assert all(sum(d * r[j] for d, r in zip(w, P112.rays)) == 0 for j in range(2))
        g = [c[0] for c in classes]
        assert abs(g[0]) == 1
        assert all(x * w[0] == g[0] * y for x, y in zip(g, w))

    def test_rays_must_span(self):
        with pytest.raises(UnsupportedInputError):
            class_group(Fan(2, [(1, 0)], [[0]]))

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(range(len(SMOOTH_COMPLETE))), st.lists(st.integers(-9, 9), min_size=3, max_size=3))
    def test_principal_classes_vanish(self, k, u):
        f = SMOOTH_COMPLETE[k]
        u = tuple(u[: f.lattice_rank])
        cg = class_group(f)
        assert cg.is_zero(cg.class_of(div_of_character(f, u)))

    @pytest.mark.parametrize("k", range(len(SMOOTH_COMPLETE)))
    def test_rank_on_smooth_complete(self, k):
        f = SMOOTH_COMPLETE[k]
        g = class_group(f).group
        assert g.free_rank == len(f.rays) - f.lattice_rank and not g.torsion


class TestCartier:
    def test_p2_d3(self):
        c = cartier_from_weil(D3)
        assert c.local_data == {(0, 1): (0, 0), (0, 2): (0, 1), (1, 2): (1, 0)}

    def test_p112(self):
        D1 = TWeilDivisor.prime(P112, 0)
        with pytest.raises(NotCartierError) as exc:
            cartier_from_weil(D1)
        assert exc.value.cone is not None
        assert set(exc.value.cone.rays) == {(1, 0), (-1, -2)}
        assert is_cartier(D1 * 2)

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from(range(len(SMOOTH_COMPLETE))), st.lists(st.integers(-5, 5), min_size=8, max_size=8))
    def test_local_data_recovers_coefficients(self, k, coeffs):
        f = SMOOTH_COMPLETE[k]
        d = TWeilDivisor(f, coeffs[: len(f.rays)])
        c = cartier_from_weil(d)
        psi = support_function(c)
        assert [psi(v) for v in f.rays] == [-a for a in d.coeffs]
        for idx, u in c.items():
            for i in idx:
                assert sum(x * y for x, y in zip(u, f.rays[i])) == -d.coeffs[i]


class TestSupportFunction:
    def test_examples(self):
        psi = support_function(cartier_from_weil(D3))
        assert psi((1, 1)) == 0
        assert [psi(v) for v in P2.rays] == [0, 0, -1]
        assert psi((0, 0)) == 0

    def test_out_of_support(self):
        f = affine_space_fan(2)
        psi = support_function(cartier_from_weil(TWeilDivisor.zero(f)))
        with pytest.raises(OutOfSupportError):
            psi((-1, 0))

    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([0, 1, 2]), st.integers(0, 10_000))
    def test_linear_laws(self, k, seed):
        f = [P2, P1xP1, hirzebruch_fan(2)][k]
        rng = random.Random(seed)
        D = TWeilDivisor(f, [rng.randint(-4, 4) for _ in f.rays])
        E = TWeilDivisor(f, [rng.randint(-4, 4) for _ in f.rays])
        m = rng.randint(-4, 4)
        pD, pE = support_function(cartier_from_weil(D)), support_function(cartier_from_weil(E))
        pDE, pmD = support_function(cartier_from_weil(D + E)), support_function(cartier_from_weil(D * m))
        for v in rational_points(rng, f.lattice_rank, 5):
            assert pDE(v) == pD(v) + pE(v)
            assert pmD(v) == m * pD(v)


class TestPositivity:
    def test_p2(self):
        c = cartier_from_weil(D3)
        assert is_basepoint_free(c) and is_ample(c) and is_very_ample(c)
        neg = cartier_from_weil(-D3)
        assert not is_basepoint_free(neg) and not is_ample(neg)
        zero = cartier_from_weil(TWeilDivisor.zero(P2))
        assert is_basepoint_free(zero) and not is_ample(zero)

    def test_p1xp1_fibre_not_ample(self):
        d = TWeilDivisor(P1xP1, [1, 0, 0, 0])
        c = cartier_from_weil(d)
        assert is_basepoint_free(c) and not is_ample(c)
        assert is_ample(cartier_from_weil(TWeilDivisor(P1xP1, [1, 0, 1, 0])))

    def test_requires_complete(self):
        c = cartier_from_weil(TWeilDivisor.zero(affine_space_fan(2)))
        with pytest.raises(UnsupportedInputError):
            is_ample(c)

    def test_requires_full_dimensional_cones(self):
        f = Fan(2, [(1, 0), (0, 1)], [[0], [1]])
        with pytest.raises(UnsupportedInputError):
            is_basepoint_free(cartier_from_weil(TWeilDivisor.zero(f)))

    def test_report(self):
        rep = positivity_report(TWeilDivisor.prime(P112, 0))
        assert rep["cartier"] is False and rep["ample"] is None
        rep = positivity_report(D3)
        assert rep["cartier"] and rep["very_ample"] and rep["lattice_point_count"] == 3


class TestPolytope:
    def test_simplex(self):
        P = divisor_polytope(D3)
        assert sorted(P.vertices) == [(0, 0), (0, 1), (1, 0)]
        assert sorted(P.lattice_points) == [(0, 0), (0, 1), (1, 0)]
        assert P.is_bounded and P.dimension == 2
        assert len(divisor_polytope(D3 * 2).lattice_points) == 6

    def test_empty(self):
        P = divisor_polytope(-D3)
        assert P.is_empty and len(P.lattice_points) == 0

    def test_unbounded(self):
        P = divisor_polytope(TWeilDivisor.zero(affine_space_fan(2)))
        assert not P.is_bounded and P.lattice_points is None
        assert P.contains((5, 7)) and not P.contains((-1, 0))

    def test_rational_vertices(self):
        P = divisor_polytope(TWeilDivisor.prime(P112, 1))
        assert any(any(Fraction(x).denominator > 1 for x in v) for v in P.vertices)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(range(len(SMOOTH_COMPLETE))), st.lists(st.integers(-2, 3), min_size=8, max_size=8))
    def test_ample_polytope_normal_fan(self, k, coeffs):
        f = SMOOTH_COMPLETE[k]
        d = TWeilDivisor(f, coeffs[: len(f.rays)])
        c = cartier_from_weil(d)
        if not is_ample(c):
            return
        P = divisor_polytope(c)
        assert P.is_bounded and P.dimension == f.lattice_rank
        assert normal_fan(P.as_lattice_polytope()) == f
        for u in P.lattice_points:
            assert all(sum(x * y for x, y in zip(u, v)) >= -a for v, a in zip(f.rays, d.coeffs))


class TestPsiFromPolytope:
    def test_examples(self):
        psi = psi_from_polytope(LatticePolytope.from_points([(0, 0), (1, 0), (0, 1)]), P2)
        assert psi((1, 0)) == 0 and psi((-1, -1)) == -1
        psi = psi_from_polytope(LatticePolytope.from_points([(2, 3)]), P2)
        for v in [(1, 0), (0, 1), (-1, -1), (3, -2)]:
            assert psi(v) == 2 * v[0] + 3 * v[1]
        square = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
        psi = psi_from_polytope(square, P1xP1)
        assert [psi(v) for v in [(1, 0), (-1, 0), (0, 1), (0, -1)]] == [0, -1, 0, -1]

    def test_incompatible(self):
        square = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
        with pytest.raises(ToricError):
            psi_from_polytope(square, P2)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(range(len(SMOOTH_COMPLETE))), st.lists(st.integers(-2, 3), min_size=8, max_size=8), st.integers(0, 1000))
    def test_round_trip(self, k, coeffs, seed):
        f = SMOOTH_COMPLETE[k]
        d = TWeilDivisor(f, coeffs[: len(f.rays)])
        c = cartier_from_weil(d)
        if not is_basepoint_free(c):
            return
        psi = support_function(c)
        back = psi_from_polytope(divisor_polytope(c).as_lattice_polytope(), f)
        for v in list(f.rays) + rational_points(random.Random(seed), f.lattice_rank, 5):
            assert back(v) == psi(v)


class TestSections:
    def test_examples(self):
        assert euler_sections_identity(cartier_from_weil(D3)).h0 == 3
        assert euler_sections_identity(cartier_from_weil(D3 * 2)).h0 == 6
        rep = euler_sections_identity(cartier_from_weil(TWeilDivisor.zero(P2)))
        assert rep.h0 == rep.euler_characteristic == 1

    def test_refuses_non_basepoint_free(self):
        with pytest.raises(UnsupportedInputError):
            euler_sections_identity(cartier_from_weil(-D3))

    @pytest.mark.parametrize("a, b", [(0, 0), (1, 0), (1, 1), (2, 3)])
    def test_p1xp1_counts(self, a, b):
        c = cartier_from_weil(TWeilDivisor(P1xP1, [a, 0, b, 0]))
        assert euler_sections_identity(c).h0 == (a + 1) * (b + 1)
