"""
Command-line interface: ``torickit <command> [options]``.

Reports and fan documents are JSON with a stable key order; sample output
is CSV.  Exit status is 0 on success, 2 on unparsable input, 3 when a fan
fails validation and 4 when the library rejects the input.
"""

import argparse
import csv
import io
import sys
from typing import Sequence

from . import formats
from .cone import binomial_relations, hilbert_basis
from .divisor import cartier_from_weil, class_group, divisor_polytope, positivity_report
from .errors import ParseError, ToricError, UnsupportedInputError
from .fan import (
    Fan,
    euler_characteristic,
    fundamental_group,
    is_complete,
    normal_fan,
    product_fan,
    resolve_2d,
    validate,
    weighted_projective_fan,
)
from .moment import (
    INSIDE_TOL,
    classify_contact,
    contact_line_bundle,
    convexity_report,
    projectivized_tangent_fan,
    sample_moment_image,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_UNSUPPORTED = 4

TOL_MIN, TOL_MAX = 1e-15, 1e-3


class ValidationFailure(Exception):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


def _valid_fan(path) -> Fan:
    f = formats.read_fan(path)
    report = validate(f)
    if not report.ok:
        raise ValidationFailure(report)
    return f


def _vec(v) -> list[str]:
    return [formats.rational(x) for x in v]


def _emit(text: str, out: str | None) -> None:
    if out:
        formats.write_atomic(out, text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------------


def cmd_check(args) -> int:
    f = formats.read_fan(args.fan)
    report = validate(f)
    doc = {"valid": report.ok, "problems": report.problems}
    if report.ok:
        complete = is_complete(f)
        doc.update(
            {
                "rank": f.lattice_rank,
                "rays": len(f.rays),
                "max_cones": len(f.max_cones),
                "smooth": f.is_smooth(),
                "simplicial": f.is_simplicial(),
                "complete": complete,
                "euler_characteristic": euler_characteristic(f) if complete else None,
                "fundamental_group": str(fundamental_group(f)),
                "class_group": str(class_group(f).group),
                "cones_by_dim": f.dim_counts,
            }
        )
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_dual(args) -> int:
    f = _valid_fan(args.fan)
    doc = {
        "cones": [
            {"cone": list(idx), "rays": [list(r) for r in sigma.rays], "dual": [list(u) for u in sigma.dual().rays]}
            for idx, sigma in zip(f.max_cones, f.maximal_cones)
        ]
    }
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def cmd_hilbert(args) -> int:
    f = _valid_fan(args.fan)
    cones = []
    for idx, sigma in zip(f.max_cones, f.maximal_cones):
        if not sigma.is_full_dimensional:
            raise UnsupportedInputError(f"cone {list(idx)} is not full-dimensional; its dual has units")
        h = hilbert_basis(sigma.dual())
        cones.append(
            {
                "cone": list(idx),
                "dual": [list(u) for u in h.cone.rays],
                "hilbert_basis": [list(u) for u in h.elements],
                "relations": [str(r) for r in binomial_relations(h)],
            }
        )
    _emit(formats.dumps({"cones": cones}), args.out)
    return EXIT_OK


def cmd_polytope_fan(args) -> int:
    P = formats.read_polytope(args.polytope)
    _emit(formats.dumps(formats.fan_to_doc(normal_fan(P))), args.out)
    return EXIT_OK


def cmd_divisor(args) -> int:
    d = formats.read_divisor(args.divisor)
    report = validate(d.fan)
    if not report.ok:
        raise ValidationFailure(report)
    rep = positivity_report(d)
    doc = {
        "coeffs": list(d.coeffs),
        "cartier": rep["cartier"] if rep["cartier"] else rep["offending_cone"],
        "basepoint_free": rep["basepoint_free"],
        "ample": rep["ample"],
        "very_ample": rep["very_ample"],
        "bounded": rep["bounded"],
        "vertices": [_vec(v) for v in rep["vertices"]],
        "lattice_point_count": rep["lattice_point_count"],
    }
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def moment_csv(samples, rank: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point_id", "type"] + [f"mu_{i + 1}" for i in range(rank)] + ["inside", "chart_cone"])
    for s in samples:
        w.writerow([s.point_id, s.kind] + [repr(float(x)) for x in s.mu] + [str(s.inside).lower(), str(s.chart)])
    return buf.getvalue()


def cmd_moment(args) -> int:
    if args.divisor:
        d = formats.read_divisor(args.divisor)
        f = d.fan
    elif args.fan:
        f = formats.read_fan(args.fan)
        d = None
    else:
        raise ParseError("moment needs --divisor or --fan")
    report = validate(f)
    if not report.ok:
        raise ValidationFailure(report)
    if d is None:
        d = contact_line_bundle(f)
    c = cartier_from_weil(d)
    tol = args.tolerance if args.tolerance is not None else INSIDE_TOL
    samples = sample_moment_image(f, c, args.samples, args.seed, tol=tol)
    conv = convexity_report(samples, divisor_polytope(c), tol)
    rep = {
        "coeffs": list(d.coeffs),
        "points": conv.n_samples,
        "seed": args.seed,
        "inside_fraction": conv.inside_fraction,
        "vertices": [_vec(v) for v in conv.vertices],
        "attained": list(conv.attained),
        "vertices_attained": conv.vertices_attained,
        "hull_gap": conv.hull_gap,
    }
    text = moment_csv(samples, f.lattice_rank)
    if args.out:
        formats.write_atomic(args.out, text)
        sys.stdout.write(formats.dumps(rep))
    else:
        sys.stdout.write(text)
        sys.stderr.write(formats.dumps(rep))
    return EXIT_OK


def cmd_classify_contact(args) -> int:
    f = _valid_fan(args.fan)
    res = classify_contact(f)
    doc = {
        "verdict": res.verdict,
        "index": res.index,
        "isomorphic_to": res.isomorphic_to,
        "witness_matrix": res.witness_matrix,
    }
    _emit(formats.dumps(doc), args.out)
    return EXIT_OK


def cmd_resolve2d(args) -> int:
    f = _valid_fan(args.fan)
    if f.lattice_rank != 2 or len(f.max_cones) != 1:
        raise UnsupportedInputError("resolve2d takes a fan with a single cone in rank 2")
    _emit(formats.dumps(formats.fan_to_doc(resolve_2d(f.maximal_cones[0]))), args.out)
    return EXIT_OK


def cmd_wps(args) -> int:
    _emit(formats.dumps(formats.fan_to_doc(weighted_projective_fan(*args.weights))), args.out)
    return EXIT_OK


def cmd_ptbundle(args) -> int:
    _emit(formats.dumps(formats.fan_to_doc(projectivized_tangent_fan(args.m))), args.out)
    return EXIT_OK


def cmd_product(args) -> int:
    if len(args.fan) != 2:
        raise ParseError("product needs --fan twice")
    f, g = (_valid_fan(p) for p in args.fan)
    _emit(formats.dumps(formats.fan_to_doc(product_fan(f, g))), args.out)
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------------------


def _nonneg(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _tolerance(s: str) -> float:
    v = float(s)
    if not TOL_MIN <= v <= TOL_MAX:
        raise argparse.ArgumentTypeError(f"must lie in [{TOL_MIN:g}, {TOL_MAX:g}]")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torickit", description="Toric variety computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help, fan=False, **flags):
        s = sub.add_parser(name, help=help)
        if fan:
            s.add_argument("--fan", required=True, help="fan document")
        s.add_argument("--out", help="output path (default: stdout)")
        s.set_defaults(func=func)
        return s

    add("check", cmd_check, "validate a fan and report its invariants", fan=True)
    add("dual", cmd_dual, "dual of every maximal cone", fan=True)
    add("hilbert", cmd_hilbert, "Hilbert basis and relations of each chart semigroup", fan=True)
    s = add("polytope-fan", cmd_polytope_fan, "normal fan of a lattice polytope")
    s.add_argument("--polytope", required=True)
    s = add("divisor", cmd_divisor, "positivity report and polytope of a divisor")
    s.add_argument("--divisor", required=True)
    s = add("moment", cmd_moment, "sample the moment map and check convexity")
    s.add_argument("--divisor", help="divisor document")
    s.add_argument("--fan", help="contact fan; the divisor defaults to -K/(n+1)")
    s.add_argument("--samples", type=_nonneg, default=1000)
    s.add_argument("--seed", type=_nonneg, default=0)
    s.add_argument("--tolerance", type=_tolerance, default=None)
    add("classify-contact", cmd_classify_contact, "contact classification of a smooth complete fan", fan=True)
    add("resolve2d", cmd_resolve2d, "Hirzebruch-Jung resolution of a 2D cone", fan=True)
    s = add("wps", cmd_wps, "fan of a weighted projective space")
    s.add_argument("weights", type=int, nargs="+")
    s = add("ptbundle", cmd_ptbundle, "fan of P(T) over a product of projective lines")
    s.add_argument("m", type=int)
    s = add("product", cmd_product, "product of two fans")
    s.add_argument("--fan", action="append", required=True, help="fan document (give twice)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except ValidationFailure as exc:
        sys.stderr.write(f"invalid fan:\n{exc.report}\n")
        return EXIT_INVALID
    except ToricError as exc:
        sys.stderr.write(f"unsupported input: {exc}\n")
        return EXIT_UNSUPPORTED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
