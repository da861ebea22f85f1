"""``qgeom`` command line.

Exit status 0 on success, 1 when the input is rejected, 2 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bases, curve, duality, io, numrange
from .errors import ConvergenceError, QGeomError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise QGeomError(f"{self.prog}: {message}")


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _grid(args) -> int:
    if args.K < 16:
        raise QGeomError("--K must be at least 16")
    return args.K


def _subspace(args) -> duality.Subspace2D:
    if args.named:
        return duality.named_plane(args.named)
    if not (args.u and args.v):
        raise QGeomError("give --named PLANE or both --u and --v matrix files")
    u, v = io.load_matrix(args.u), io.load_matrix(args.v)
    return duality.Subspace2D.from_pair(u, v) if args.orthonormalize else duality.Subspace2D(u, v)


def _boundary_out(args, b, layers=None) -> None:
    if args.format == "svg":
        _emit(args, io.svg_polylines(layers or [(b.points, "#9ecae1", "#08519c")]))
    elif args.format == "json":
        _emit(args, io.dumps({
            "kind": b.kind,
            "theta": [float(x) for x in b.theta],
            "h": [float(x) for x in b.h],
            "points": [[float(x), float(y)] for x, y in b.points],
        }))
    else:
        _emit(args, io.boundary_csv(b))


# -- commands -----------------------------------------------------------------


def cmd_numrange(args):
    _boundary_out(args, numrange.numerical_range(io.load_matrix(args.matrix), _grid(args)))


def cmd_classify(args):
    res = numrange.classify_shape_n3(io.load_matrix(args.matrix), _grid(args))
    out = {
        "class": res.kind.name,
        "normal": res.normal,
        "flats": [{"theta": f.theta, "endpoints": [list(map(float, e)) for e in f.endpoints]} for f in res.flats],
    }
    _emit(args, io.dumps(out))


def cmd_section(args):
    _boundary_out(args, duality.cross_section(_subspace(args), _grid(args)))


def cmd_project(args):
    _boundary_out(args, duality.projection(_subspace(args), _grid(args)))


def cmd_dual(args):
    us = _subspace(args)
    src = duality.cross_section(us, _grid(args)) if args.of == "section" else duality.projection(us, _grid(args))
    c = args.c if args.c is not None else 1.0 / us.n
    _boundary_out(args, duality.polar_dual(src, c))


def cmd_dual_pair(args):
    us = _subspace(args)
    K = _grid(args)
    sec = duality.cross_section(us, K)
    proj = duality.projection(us, K)
    rep = duality.verify_duality(us, K)
    if args.svg:
        io.write_atomic(args.svg, io.svg_polylines([(proj.points, "#fdd49e", "#d94801"),
                                                    (sec.points, "#08306b", "#08306b")]))
    sys.stdout.write(io.dumps({
        "K": K,
        "section_projection_hausdorff": duality.hausdorff(sec, proj),
        "hausdorff_cross": rep.hausdorff_cross,
        "hausdorff_proj": rep.hausdorff_proj,
    }))


def cmd_named(args):
    name = duality.Named3D.ELLIPTOPE if args.elliptope else duality.Named3D.CONE
    if args.member is not None:
        p = args.member
        _emit(args, io.dumps({"member": duality.named_member(name, p), "rank": duality.named_rank(name, p)}))
        return
    mesh = duality.named_mesh(name, args.polar, args.azimuth)
    rows = []
    for i in range(mesh.shape[0]):
        for j in range(mesh.shape[1]):
            rows.append((i, j, *mesh[i, j]))
    _emit(args, io.csv_text(["i", "j", "x", "y", "z"], rows))


def _certificate(v) -> str:
    return io.dumps(curve.membership_C(np.asarray(v, dtype=float)).as_dict())


def cmd_curve(args):
    if args.point is not None:
        _emit(args, ",".join(io.fmt(x) for x in curve.curve_point(args.point)) + "\n")
    elif args.member is not None:
        _emit(args, _certificate(args.member))
    else:
        ts = 2 * np.pi * np.arange(args.mesh) / args.mesh
        pts = curve.curve_points(ts)
        _emit(args, io.csv_text(["t", "x", "y", "z"], ((t, *p) for t, p in zip(ts, pts))))


def cmd_curve_member(args):
    _emit(args, _certificate(args.v))


def cmd_fourier(args):
    _emit(args, io.dumps(io.matrix_to_json(bases.fourier_matrix(args.n).entries)))


def cmd_defect(args):
    _emit(args, f"{bases.fourier_defect_bound(args.n)}\n")


def cmd_mub_check(args):
    e = bases.UnitaryBasis(io.load_matrix(args.e))
    f = bases.UnitaryBasis(io.load_matrix(args.f))
    dev = bases.complementary_check(e, f)
    _emit(args, io.dumps({"deviation": dev, "complementary": dev <= args.tol}))


def cmd_sic_check(args):
    if args.file:
        n, vecs = io.load_vectors(args.file)
        cand = bases.SicCandidate(n, vecs)
    else:
        cand = bases.wh_orbit(bases.fiducial(args.n))
    rep = bases.verify_sic(cand, args.tol)
    _emit(args, io.dumps({
        "n": rep.n,
        "passed": rep.ok,
        "failed": rep.failed,
        "centering": rep.centering,
        "distance_spread": rep.distance_spread,
        "overlap": rep.overlap,
    }))


def cmd_verify(args):
    from .verify import run_all

    checks = run_all(args.seed)
    width = max(len(c.label) for c in checks)
    for c in checks:
        sys.stdout.write(f"({c.key}) {c.label:<{width}}  {'PASS' if c.ok else 'FAIL'}  {c.detail}\n")
    return 0 if all(c.ok for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgeom", description="Hilbert-Schmidt geometry of quantum states")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def add(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.set_defaults(func=fn)
        s.add_argument("--out", help="output file (default: stdout)")
        s.add_argument("--seed", type=int, default=0)
        return s

    def grid(s, formats=True):
        s.add_argument("--K", type=int, default=512, help="grid size (>= 16)")
        if formats:
            s.add_argument("--format", choices=("csv", "json", "svg"), default="csv")

    def plane(s):
        s.add_argument("--named", choices=duality.NAMED_PLANES)
        s.add_argument("--u", help="matrix JSON file")
        s.add_argument("--v", help="matrix JSON file")
        s.add_argument("--orthonormalize", action="store_true",
                       help="accept any pair of Hermitian matrices and orthonormalize it")

    s = add("numrange", cmd_numrange, "boundary of the numerical range of a matrix")
    s.add_argument("--matrix", required=True)
    grid(s)
    s = add("classify", cmd_classify, "flat-count class of a 3x3 numerical range")
    s.add_argument("--matrix", required=True)
    grid(s, formats=False)
    for name, fn, h in (("section", cmd_section, "plane cross-section through I/n"),
                        ("project", cmd_project, "projection onto a plane")):
        s = add(name, fn, h)
        plane(s)
        grid(s)
    s = add("dual", cmd_dual, "polar dual of a section or projection")
    plane(s)
    grid(s)
    s.add_argument("--of", choices=("section", "projection"), default="section")
    s.add_argument("--c", type=float, help="offset (default 1/n)")
    s = add("dual-pair", cmd_dual_pair, "section and projection with duality distances")
    plane(s)
    grid(s, formats=False)
    s.add_argument("--svg", help="write the overlay picture here")
    s = add("named", cmd_named, "three-dimensional named sections")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--elliptope", action="store_true")
    g.add_argument("--cone", action="store_true")
    s.add_argument("--member", type=float, nargs=3, metavar=("X", "Y", "Z"))
    s.add_argument("--polar", type=int, default=48)
    s.add_argument("--azimuth", type=int, default=96)
    s = add("curve", cmd_curve, "points, membership and polyline of the curve")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", type=float, metavar="T")
    g.add_argument("--member", type=float, nargs=3, metavar=("VX", "VY", "VZ"))
    g.add_argument("--mesh", type=int, metavar="K")
    s = add("curve-member", cmd_curve_member, "membership certificate for the hull of the curve")
    s.add_argument("v", type=float, nargs=3)
    s = add("fourier", cmd_fourier, "Fourier matrix as JSON")
    s.add_argument("--n", type=int, required=True)
    s = add("defect", cmd_defect, "defect bound of the Fourier matrix")
    s.add_argument("--n", type=int, required=True)
    s = add("mub-check", cmd_mub_check, "complementarity of two bases (matrix JSON, basis in columns)")
    s.add_argument("--e", required=True)
    s.add_argument("--f", required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s = add("sic-check", cmd_sic_check, "verify a SIC candidate")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--file")
    g.add_argument("--n", type=int, help="use the shipped fiducial of this order")
    s.add_argument("--tol", type=float, default=1e-10)
    add("verify", cmd_verify, "run the invariant suite")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "mesh", None) is not None and args.mesh < 2:
            raise QGeomError("--mesh needs at least 2 points")
        status = args.func(args)
        return 0 if status is None else status
    except QGeomError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except (AssertionError, ConvergenceError) as e:
        sys.stderr.write(f"internal error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
