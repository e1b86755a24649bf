"""
Double description (Motzkin) for polyhedral cones over the integers.

Everything is kept as primitive integer vectors; combinations of two rays
``(a.p) n - (a.n) p`` stay integral, so no rational arithmetic is needed.
"""

from fractions import Fraction
from typing import Sequence

from .lattice import gcd_of, hermite_normal_form, primitive, saturation

Vector = tuple[int, ...]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _prim(v):
    g = gcd_of(v)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def cone_from_inequalities(
    inequalities: Sequence[Sequence[int]], n: int
) -> tuple[list[Vector], list[Vector]]:
    """Generators of ``{x in R^n : a.x >= 0 for every row a}``.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays of the cone modulo it.
    """
    lineality: list[Vector] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[Vector] = []
    zeros: list[frozenset] = []

    for k, a in enumerate(inequalities):
        a = tuple(int(x) for x in a)
        if not any(a):
            continue
        lvals = [_dot(a, l) for l in lineality]
        hit = next((i for i, val in enumerate(lvals) if val != 0), None)
        if hit is not None:
            l = lineality[hit]
            al = lvals[hit]
            if al < 0:
                l = tuple(-x for x in l)
                al = -al
            new_lin = []
            for i, m in enumerate(lineality):
                if i == hit:
                    continue
                am = _dot(a, m)
                v = tuple(al * x - am * y for x, y in zip(m, l)) if am else m
                new_lin.append(_prim(v))
            new_rays = []
            for r in rays:
                ar = _dot(a, r)
                new_rays.append(_prim(tuple(al * x - ar * y for x, y in zip(r, l))) if ar else r)
            lineality = new_lin
            rays = new_rays + [_prim(l)]
            zeros = [z | {k} for z in zeros] + [frozenset(range(k))]
            continue

        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            zeros = [z | {k} if vals[i] == 0 else z for i, z in enumerate(zeros)]
            continue
        new_rays = [rays[i] for i in pos + zer]
        new_zeros = [zeros[i] for i in pos] + [zeros[i] | {k} for i in zer]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                adjacent = True
                for r in range(len(rays)):
                    if r != p and r != q and common <= zeros[r]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                v = tuple(vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p]))
                new_rays.append(_prim(v))
                new_zeros.append(common | {k})
        rays, zeros = new_rays, new_zeros

    seen = {}
    for r in rays:
        seen.setdefault(r, None)
    return lineality, list(seen)


def project_off(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple[Fraction, ...]:
    """Euclidean projection of ``v`` onto the orthogonal complement of ``basis``."""
    if not basis:
        return tuple(Fraction(x) for x in v)
    # Gram-Schmidt over the rationals.
    ortho: list[list[Fraction]] = []
    for b in basis:
        w = [Fraction(x) for x in b]
        for o in ortho:
            c = sum(x * y for x, y in zip(w, o)) / sum(y * y for y in o)
            w = [x - c * y for x, y in zip(w, o)]
        if any(w):
            ortho.append(w)
    w = [Fraction(x) for x in v]
    for o in ortho:
        c = sum(x * y for x, y in zip(w, o)) / sum(y * y for y in o)
        w = [x - c * y for x, y in zip(w, o)]
    return tuple(w)


def canonical_generators(
    lineality: Sequence[Sequence[int]], rays: Sequence[Sequence[int]], n: int
) -> tuple[Vector, ...]:
    """Canonical minimal generating set for the cone ``lin + cone(rays)``.

    The lineality lattice contributes ``±h`` for its Hermite basis ``h``; the
    pointed part contributes primitive rays orthogonal to the lineality space.
    Output is sorted lexicographically.
    """
    if not lineality:
        return tuple(sorted({_prim(tuple(r)) for r in rays}))
    lin = hermite_normal_form(saturation(lineality, n))
    out = set()
    for h in lin:
        out.add(tuple(h))
        out.add(tuple(-x for x in h))
    for r in rays:
        p = project_off(r, lin)
        if any(p):
            out.add(primitive(p))
    return tuple(sorted(out))
