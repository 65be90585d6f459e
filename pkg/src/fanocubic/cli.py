"""Command-line interface: JSON reports over exact computations.

Exit codes: 0 success, 1 mathematical precondition failure (reported as
machine-readable JSON), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .adjoint import adjoint_class, d_r_lines, evaluate_on_line, schubert_form
from .census import (CensusConfig, census_run, dphi_rank, eckardt_census,
                     normalize_double_line, reconstruct)
from .fields import parse_field_spec
from .forms import HomForm
from .jacobian import build_context, make_xi, xi_of_line, xi_quadric_rank
from .linegeom import classify_line, eckardt_test, hessian_on_line, plane_section
from .lines import ProjLine, ProjPlane
from .parser import ParseError, form_to_text, load_cubic, parse_form


class PreconditionError(Exception):
    pass


def _field(args):
    return parse_field_spec(args.field,
                            getattr(args, "allow_char", False)).build()


def _scalars(F, text):
    return [F.parse_scalar(t) for t in text.split(",")]


def _parse_line(F, text):
    parts = text.split(";")
    if len(parts) == 2:
        return ProjLine.from_points(F, _scalars(F, parts[0]),
                                    _scalars(F, parts[1]))
    if len(parts) == 1:
        ten = _scalars(F, parts[0])
        if len(ten) != 10:
            raise ParseError("a line is two points 'p;q' or ten Pluecker "
                             "coordinates")
        return ProjLine.from_pluecker(F, ten)
    raise ParseError("a line is two points 'p;q' or ten Pluecker coordinates")


def _parse_plane(F, args):
    if args.plane:
        parts = args.plane.split(";")
        if len(parts) != 3:
            raise ParseError("a plane is three points 'p;q;r'")
        return ProjPlane.from_points(F, *[_scalars(F, t) for t in parts])
    if args.plane_dual:
        parts = args.plane_dual.split(";")
        if len(parts) != 2:
            raise ParseError("dual plane input is two forms 'h1;h2'")
        return ProjPlane.from_dual_forms(F, _scalars(F, parts[0]),
                                         _scalars(F, parts[1]))
    raise ParseError("need --plane or --plane-dual")


def _fmt_vec(F, vec):
    return [F.format_scalar(F.coerce(x)) for x in vec]


def _fmt_line(line):
    return {"span": [_fmt_vec(line.field, r) for r in line.span],
            "pluecker": _fmt_vec(line.field, line.pluecker)}


def _fmt_plane(plane):
    return {"span": [_fmt_vec(plane.field, r) for r in plane.span],
            "dual": [_fmt_vec(plane.field, r) for r in plane.dual]}


def _fmt_form(form):
    return form_to_text(form)


def _fmt_roots(roots):
    out = {"records": [], "unresolved_degree": roots.unresolved.degree}
    for r in roots.records:
        out["records"].append({
            "level": r.level,
            "point": _fmt_vec(r.field, r.point),
            "multiplicity": r.multiplicity,
        })
    return out


def _emit(args, payload, code=0):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def _load_ctx(args):
    F = _field(args)
    E = load_cubic(args.cubic, F)
    return build_context(E, getattr(args, "allow_char", False))


# ---------------------------------------------------------------------------
# subcommands

def cmd_ring(args):
    ctx = _load_ctx(args)
    payload = {
        "dims": list(ctx.dims[:6]),
        "dim_degree6": ctx.dims[6],
        "smooth": ctx.smooth,
        "socle_monomial": None,
        "cubic": _fmt_form(ctx.E),
    }
    if ctx.smooth:
        payload["socle_monomial"] = _fmt_form(ctx.socle_form())
    return _emit(args, payload)


def cmd_classify(args):
    ctx = _load_ctx(args)
    line = _parse_line(ctx.field, args.line)
    rep = classify_line(ctx, line, args.tower)
    payload = {
        "line": _fmt_line(line),
        "in_V": rep.in_V,
        "type": rep.line_type,
        "J2_restricted_dim": rep.J2_restricted_dim,
        "double": rep.double,
        "triple": rep.triple,
        "intersection": _fmt_roots(rep.intersection)
        if rep.intersection else None,
        "witness_plane": _fmt_plane(rep.witness_plane)
        if rep.witness_plane else None,
        "residual": _fmt_line(rep.residual) if rep.residual else None,
        "dual_image_is_line": rep.dual_image.is_line,
        "dual_map_degree": rep.dual_image.degree,
        "base_plane": _fmt_plane(rep.dual_image.base_plane)
        if rep.dual_image.base_plane else None,
        "eckardt_hits": [{"level": lv, "point": _fmt_vec(fld, pt)}
                         for (lv, fld, pt) in rep.eckardt_hits],
    }
    return _emit(args, payload)


def cmd_xi(args):
    ctx = _load_ctx(args)
    if args.line:
        xi = xi_of_line(ctx, _parse_line(ctx.field, args.line))
    elif args.xi:
        f = load_cubic(args.xi, ctx.field)
        xi = make_xi(ctx, f)
    else:
        raise ParseError("need --xi or --line")
    rho_rank, in_xi2 = xi_quadric_rank(ctx, xi)
    payload = {
        "representative": _fmt_form(xi.rep),
        "rank": xi.rank,
        "quadric_rank": rho_rank,
        "in_rank2_stratum": in_xi2,
        "K1_dim": xi.K1.dim,
        "K2_dim": xi.K2.dim,
        "K1": [_fmt_vec(ctx.field, r) for r in xi.K1.rows],
    }
    return _emit(args, payload)


def cmd_adjoint(args):
    ctx = _load_ctx(args)
    if args.line:
        target = _parse_line(ctx.field, args.line)
    elif args.xi:
        target = make_xi(ctx, load_cubic(args.xi, ctx.field))
    else:
        raise ParseError("need --xi or --line")
    rep = adjoint_class(ctx, target, args.tower)
    payload = {
        "line": _fmt_line(rep.line),
        "vanishes": rep.vanishes,
        "degeneracy": rep.degeneracy,
        "representative": _fmt_vec(ctx.field, rep.representative.coeffs),
        "base_plane": _fmt_plane(rep.base_plane) if rep.base_plane else None,
        "tangent_hyperplanes": [
            {"level": lv, "form": _fmt_vec(fld, h)}
            for (lv, fld, h) in rep.tangent_hyperplanes],
        "W": [_fmt_vec(ctx.field, r) for r in rep.W.rows],
        "W2": [_fmt_vec(ctx.field, r) for r in rep.W2.rows],
    }
    if args.incidence:
        dr = d_r_lines(ctx, rep.line, args.tower)
        payload["incidence"] = {
            "flag": dr.flag,
            "reason": dr.reason,
            "count": len(dr.lines),
            "pluecker_span_dim": dr.pluecker_span_dim,
        }
    return _emit(args, payload)


def cmd_census(args):
    ctx = _load_ctx(args)
    config = CensusConfig(
        tasks=tuple(args.tasks.split(",")),
        workers=args.workers,
        chunk_size=args.chunk,
        seed=args.seed,
        tower_bound=args.tower,
        include_lists=not args.no_lists,
        sigma_triple_check=args.triple_check,
        include_timing=args.timing,
    )
    report = census_run(ctx, config)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_reconstruct(args):
    ctx = _load_ctx(args)
    F = ctx.field
    if args.lines:
        with open(args.lines) as fh:
            specs = [ln.strip() for ln in fh if ln.strip()]
        lines = [_parse_line(F, s) for s in specs]
    else:
        config = CensusConfig(tasks=("double",), workers=args.workers)
        report = census_run(ctx, config)
        lines = [ProjLine.from_points(F, [F.parse_scalar(x) for x in row[0]],
                                      [F.parse_scalar(x) for x in row[1]])
                 for row in report.lists["double_lines"]]
    if not lines:
        return _emit(args, {"status": "insufficient", "double_lines": 0}, 1)
    result = reconstruct(lines, F)
    proportional = (result.kernel_dim == 1
                    and result.contains(ctx.E))
    payload = {
        "status": "ok",
        "input_lines": len(lines),
        "sample_points": result.sample_points,
        "kernel_dim": result.kernel_dim,
        "contains_source": result.contains(ctx.E),
        "unique_and_proportional": proportional,
        "kernel": [_fmt_form(b) for b in result.basis],
    }
    return _emit(args, payload)


def cmd_dphi(args):
    ctx = _load_ctx(args)
    rep = dphi_rank(ctx)
    payload = {
        "rank": rep.rank,
        "surjective": rep.rank == 35,
        "claim_no_common_zero": rep.claim_no_common_zero,
        "claim_independent_conic": rep.claim_independent_conic,
        "smooth": rep.smooth,
    }
    return _emit(args, payload)


def cmd_eckardt(args):
    ctx = _load_ctx(args)
    F = ctx.field
    if args.point:
        pt = _scalars(F, args.point)
        flag, M, En, cone = eckardt_test(ctx, pt)
        payload = {
            "point": _fmt_vec(F, pt),
            "eckardt": flag,
            "cone_base": _fmt_form(cone) if cone is not None else None,
        }
        return _emit(args, payload)
    pts = eckardt_census(ctx)
    payload = {"count": len(pts),
               "points": [_fmt_vec(F, p) for p in pts]}
    return _emit(args, payload)


def cmd_hessian(args):
    ctx = _load_ctx(args)
    line = _parse_line(ctx.field, args.line)
    quintic, degenerate = hessian_on_line(ctx, line)
    payload = {
        "line": _fmt_line(line),
        "degenerate": degenerate,
        "coefficients": _fmt_vec(ctx.field, quintic.coeffs),
    }
    if not degenerate and ctx.field.is_finite:
        from .binary import binary_roots
        payload["roots"] = _fmt_roots(binary_roots(quintic, args.tower))
    return _emit(args, payload)


def cmd_section(args):
    ctx = _load_ctx(args)
    plane = _parse_plane(ctx.field, args)
    sec = plane_section(ctx, plane, args.tower)
    payload = {
        "plane": _fmt_plane(plane),
        "section": _fmt_form(sec.section) if ctx.field.degree == 1 else None,
        "factors": [
            {"level": f.level,
             "dual_coords": _fmt_vec(f.field, f.dual_coords),
             "multiplicity": f.multiplicity,
             "line": _fmt_line(f.line) if f.line else None}
            for f in sec.factors],
        "residual_degree": sec.residual.degree,
        "fully_split": sec.fully_split,
        "rare": sec.rare,
    }
    return _emit(args, payload)


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="fanocubic",
        description="Exact computations on cubic threefolds: graded ring "
                    "data, line classification, adjoint classes, censuses, "
                    "reconstruction.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_cubic=True):
        if needs_cubic:
            sp.add_argument("--cubic", required=True,
                            help="file (expression or coefficient lines) or "
                                 "literal expression")
        sp.add_argument("--field", default="0",
                        help="0 for the rationals, p or p^k for finite")
        sp.add_argument("--allow-char", dest="allow_char",
                        action="store_true",
                        help="permit characteristics 2 and 3")
        sp.add_argument("--out", default=None, help="write JSON here")
        sp.add_argument("--quiet", action="store_true")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("ring", help="graded dimensions and smoothness")
    common(sp)
    sp.set_defaults(fn=cmd_ring)

    sp = sub.add_parser("classify", help="classify a line against the cubic")
    common(sp)
    sp.add_argument("--line", required=True)
    sp.add_argument("--tower", type=int, default=3)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("xi", help="multiplication operator of a class")
    common(sp)
    sp.add_argument("--xi", default=None)
    sp.add_argument("--line", default=None)
    sp.set_defaults(fn=cmd_xi)

    sp = sub.add_parser("adjoint", help="adjoint class of a rank-2 class")
    common(sp)
    sp.add_argument("--xi", default=None)
    sp.add_argument("--line", default=None)
    sp.add_argument("--tower", type=int, default=4)
    sp.add_argument("--incidence", action="store_true",
                    help="also enumerate incident lines on the cubic")
    sp.set_defaults(fn=cmd_adjoint)

    sp = sub.add_parser("census", help="full line census over F_q")
    common(sp)
    sp.add_argument("--tasks", default="lines,sigma,double")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--chunk", type=int, default=1 << 16)
    sp.add_argument("--tower", type=int, default=3)
    sp.add_argument("--no-lists", action="store_true")
    sp.add_argument("--triple-check", action="store_true")
    sp.add_argument("--timing", action="store_true")
    sp.set_defaults(fn=cmd_census)

    sp = sub.add_parser("reconstruct",
                        help="recover the cubic from double lines")
    common(sp)
    sp.add_argument("--lines", default=None,
                    help="file with one line spec per row (default: harvest "
                         "double lines by census)")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(fn=cmd_reconstruct)

    sp = sub.add_parser("dphi", help="rank of the normal-form differential")
    common(sp)
    sp.set_defaults(fn=cmd_dphi)

    sp = sub.add_parser("eckardt", help="Eckardt point test or census")
    common(sp)
    sp.add_argument("--point", default=None)
    sp.set_defaults(fn=cmd_eckardt)

    sp = sub.add_parser("hessian", help="Hessian quintic on a line of V")
    common(sp)
    sp.add_argument("--line", required=True)
    sp.add_argument("--tower", type=int, default=5)
    sp.set_defaults(fn=cmd_hessian)

    sp = sub.add_parser("section", help="factor a plane section")
    common(sp)
    sp.add_argument("--plane", default=None, help="three points 'p;q;r'")
    sp.add_argument("--plane-dual", dest="plane_dual", default=None,
                    help="two forms 'h1;h2'")
    sp.add_argument("--tower", type=int, default=1)
    sp.set_defaults(fn=cmd_section)

    return p


def run_command(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, FileNotFoundError) as exc:
        print(json.dumps({"error": str(exc), "kind": "usage"}), file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(json.dumps({"error": str(exc), "kind": "precondition"}))
        return 1


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
