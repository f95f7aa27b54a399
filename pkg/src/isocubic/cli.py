"""Command-line entry point: JSON scene in, JSON report out."""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import cubic as cb
from .constructions import (
    CurveContext,
    circle_fourth_point,
    conjugate_on_curve,
    cubic_add,
    generating_quadrilateral,
    parallel_bisector_partner,
    tangent_by_reflection,
    tangent_points_from,
    third_point_by_reflection,
)
from .cubic import ClassificationReport, CubicCurve, IsoCubicProfile
from .degenerate import LineAndCircle, degenerate_locus
from .errors import (
    CoincidenceError,
    ConjugateAtInfinity,
    DegeneracyError,
    GeometryError,
    NotIsogonalFormError,
    NotOnCurveError,
    SingularPointError,
)
from .geom import DEFAULT_TOL, Circle, Direction, InfinitePoint, Line, PlanePoint, Tolerance
from .quad import DegeneracyClass, Quadrilateral, classify, cubic_from_quadrilateral
from .render import polylines_csv, render_svg, trace_curve
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_DEGENERATE = 2
EXIT_NOT_ISOGONAL = 3
EXIT_NOT_ON_CURVE = 4
EXIT_SINGULAR = 5
EXIT_USAGE = 64
EXIT_IO = 73

VERBS = {
    "conjugate": 1, "tangent": 1, "third": 2, "circle4": 3,
    "add": 2, "tangents-from": 1, "partner": 1, "requad": 2,
}


class UsageError(Exception):
    pass


class CliExit(Exception):
    def __init__(self, code: int, payload: Optional[dict] = None, message: Optional[str] = None):
        super().__init__(message or "")
        self.code, self.payload, self.message = code, payload, message


# --- scene -------------------------------------------------------------


@dataclass
class Scene:
    quad: Optional[Quadrilateral] = None
    cubic: Optional[CubicCurve] = None
    points: Dict[str, PlanePoint] = field(default_factory=dict)
    lines: Dict[str, Line] = field(default_factory=dict)
    circles: Dict[str, Circle] = field(default_factory=dict)
    tol: Tolerance = DEFAULT_TOL


def _num(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise UsageError(f"{what}: expected a number, got {x!r}")
    v = float(x)
    if not math.isfinite(v):
        raise UsageError(f"{what}: numbers must be finite")
    return v


def _pair(x, what: str) -> PlanePoint:
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise UsageError(f"{what}: expected [x, y]")
    return PlanePoint(_num(x[0], what), _num(x[1], what))


def parse_scene(data) -> Scene:
    if not isinstance(data, dict):
        raise UsageError("scene must be a JSON object")
    has_q, has_c = "quad" in data, "cubic" in data
    if has_q == has_c:
        raise UsageError("scene needs exactly one of 'quad' or 'cubic'")
    unknown = set(data) - {"quad", "cubic", "points", "lines", "circles", "tol"}
    if unknown:
        raise UsageError(f"unknown scene keys: {sorted(unknown)}")
    sc = Scene()
    tol = data.get("tol")
    if tol is not None:
        if isinstance(tol, dict):
            sc.tol = Tolerance(_num(tol.get("rel_eps", DEFAULT_TOL.rel_eps), "tol.rel_eps"),
                               _num(tol.get("abs_floor", DEFAULT_TOL.abs_floor), "tol.abs_floor"))
        else:
            sc.tol = Tolerance(_num(tol, "tol"), DEFAULT_TOL.abs_floor)
    try:
        if has_q:
            q = data["quad"]
            if not isinstance(q, list) or len(q) != 4:
                raise UsageError("quad: expected four [x, y] pairs")
            sc.quad = Quadrilateral(*(_pair(p, "quad") for p in q))
        else:
            c = data["cubic"]
            if not isinstance(c, list) or len(c) != 10:
                raise UsageError("cubic: expected ten coefficients")
            sc.cubic = CubicCurve(*(_num(v, "cubic") for v in c))
    except CoincidenceError as exc:
        raise UsageError(f"quad: {exc}") from exc
    except GeometryError as exc:
        raise UsageError(f"cubic: {exc}") from exc
    for name, p in (data.get("points") or {}).items():
        sc.points[name] = _pair(p, f"points.{name}")
    for name, ln in (data.get("lines") or {}).items():
        if not isinstance(ln, list) or len(ln) != 3:
            raise UsageError(f"lines.{name}: expected [l1, l2, l0]")
        l1, l2, l0 = (_num(v, f"lines.{name}") for v in ln)
        try:
            sc.lines[name] = Line(l0, l1, l2)
        except GeometryError as exc:
            raise UsageError(f"lines.{name}: {exc}") from exc
    for name, c in (data.get("circles") or {}).items():
        if not isinstance(c, dict) or "center" not in c or "radius_sq" not in c:
            raise UsageError(f"circles.{name}: expected {{center, radius_sq}}")
        sc.circles[name] = Circle(_pair(c["center"], f"circles.{name}"), _num(c["radius_sq"], f"circles.{name}"))
    return sc


# --- serialization -------------------------------------------------------


def _f(x: float) -> Optional[float]:
    x = float(x)
    return x + 0.0 if math.isfinite(x) else None


def ser_point(p) -> object:
    if isinstance(p, InfinitePoint):
        return {"infinity": {"direction": ser_direction(p.direction)}}
    return [_f(p.x), _f(p.y)]


def ser_direction(d: Direction) -> List[float]:
    z = d.rep
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        z = -z
    return [_f(z.real), _f(z.imag)]


def ser_line(line: Line) -> List[float]:
    """(l1, l2, l0), scaled so the first nonzero of l1, l2 is 1."""
    l1, l2, l0 = line.coefficients()
    s = l1 if l1 != 0 else l2
    return [_f(l1 / s), _f(l2 / s), _f(l0 / s)]


def ser_coefficients(curve: CubicCurve) -> List[float]:
    c = curve.as_array()
    big = c[abs(c).argmax()]
    return [_f(v) for v in c / big]


def ser_profile(profile: IsoCubicProfile) -> dict:
    return {
        "P": ser_point(profile.spiral_center),
        "u": _f(profile.u),
        "v": _f(profile.v),
        "asymptote": ser_line(profile.asymptote),
        "k": [_f(profile.involution_k.real), _f(profile.involution_k.imag)],
        "newton_line": ser_line(profile.newton_line),
        "infinity_direction": ser_direction(profile.infinity_direction),
    }


def ser_report(rep: ClassificationReport) -> dict:
    return {
        "is_isogonal": rep.is_isogonal,
        "reason": rep.reason.value,
        "profile": ser_profile(rep.profile) if rep.profile is not None else None,
        "spiral_center_residual": _f(rep.spiral_center_residual) if rep.spiral_center_residual is not None else None,
    }


def ser_locus(locus) -> dict:
    if isinstance(locus, LineAndCircle):
        circle = None
        if locus.circle is not None:
            circle = {"center": ser_point(locus.circle.center), "radius_sq": _f(locus.circle.radius_sq)}
        return {"variant": locus.variant, "line": ser_line(locus.line), "circle": circle}
    return {
        "variant": locus.variant,
        "conic": [_f(v) for v in locus.conic],
        "center": ser_point(locus.center),
        "asymptote_directions": [ser_direction(d) for d in locus.asymptote_directions],
    }


def _sanitize(x):
    if isinstance(x, float):
        return _f(x)
    if isinstance(x, dict):
        return {k: _sanitize(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_sanitize(v) for v in x]
    return x


def dumps(payload) -> str:
    # repr of a float is its shortest round-tripping form (at most 17 digits)
    return json.dumps(_sanitize(payload), indent=2, allow_nan=False)


def _with_residual(curve: CubicCurve, p) -> dict:
    out = {"point": ser_point(p)}
    out["residual"] = 0.0 if isinstance(p, InfinitePoint) else _f(cb.curve_residual(curve, p))
    return out


# --- commands --------------------------------------------------------------


def _require_quad(sc: Scene) -> Quadrilateral:
    if sc.quad is None:
        raise UsageError("this command needs a scene with 'quad'")
    return sc.quad


def _degenerate_payload(q: Quadrilateral, cls: DegeneracyClass, tol: Tolerance) -> dict:
    out = {"class": cls.value}
    if cls in (DegeneracyClass.Collinear, DegeneracyClass.Parallelogram):
        out["locus"] = ser_locus(degenerate_locus(q, tol))
    else:
        curve = cubic_from_quadrilateral(q, tol)
        line, conic = cb.reducibility(curve, tol)
        out["coefficients"] = ser_coefficients(curve)
        out["locus"] = {"variant": "LineAndConic", "line": ser_line(line), "conic": [_f(v) for v in conic]}
    return out


def cmd_synthesize(sc: Scene, args) -> tuple:
    q = _require_quad(sc)
    cls = classify(q, sc.tol)
    if cls is not DegeneracyClass.Generic:
        return EXIT_DEGENERATE, _degenerate_payload(q, cls, sc.tol)
    curve = cubic_from_quadrilateral(q, sc.tol).normalized()
    rep = cb.classify_cubic(curve, sc.tol)
    ctx = CurveContext.from_quadrilateral(q, sc.tol)
    prof = ser_profile(ctx.profile)
    prof["u"], prof["v"] = _f(curve.c30), _f(curve.c21)
    return EXIT_OK, {
        "class": cls.value,
        "coefficients": ser_coefficients(curve),
        "profile": prof,
        "residuals": {
            "vertices": [_f(cb.curve_residual(curve, v)) for v in q.vertices],
            "spiral_center": _f(rep.spiral_center_residual) if rep.spiral_center_residual is not None else None,
        },
    }


def _scene_curve(sc: Scene) -> CubicCurve:
    if sc.cubic is not None:
        return sc.cubic
    cls = classify(sc.quad, sc.tol)
    if cls is not DegeneracyClass.Generic:
        raise CliExit(EXIT_DEGENERATE, _degenerate_payload(sc.quad, cls, sc.tol))
    return cubic_from_quadrilateral(sc.quad, sc.tol)


def cmd_classify(sc: Scene, args) -> tuple:
    rep = cb.classify_cubic(_scene_curve(sc), sc.tol)
    return (EXIT_OK if rep.is_isogonal else EXIT_NOT_ISOGONAL), ser_report(rep)


def _context(sc: Scene) -> CurveContext:
    curve = _scene_curve(sc)
    if sc.quad is not None:
        return CurveContext.from_quadrilateral(sc.quad, sc.tol)
    try:
        return CurveContext.from_curve(curve, sc.tol)
    except NotIsogonalFormError:
        raise CliExit(EXIT_NOT_ISOGONAL, ser_report(cb.classify_cubic(curve, sc.tol)))


def _resolve(sc: Scene, token: str) -> PlanePoint:
    if token in sc.points:
        return sc.points[token]
    parts = token.split(",")
    try:
        if len(parts) == 2:
            return PlanePoint(*(_num(float(v), token) for v in parts))
    except ValueError:
        pass
    raise UsageError(f"cannot resolve point {token!r}: give x,y or a named scene point")


def cmd_construct(sc: Scene, args) -> tuple:
    verb = args.verb
    if verb not in VERBS:
        raise UsageError(f"unknown verb {verb!r}; choose from {sorted(VERBS)}")
    if len(args.args) != VERBS[verb]:
        raise UsageError(f"{verb} takes {VERBS[verb]} point(s)")
    pts = [_resolve(sc, t) for t in args.args]
    ctx = _context(sc)
    curve = ctx.curve
    out: dict = {"verb": verb, "args": [ser_point(p) for p in pts]}
    if verb == "conjugate":
        pair = conjugate_on_curve(ctx, pts[0])
        closed = ctx.conj(pts[0])
        out["conjugate"] = _with_residual(curve, pair.x_conj)
        out["closed_form"] = ser_point(closed)
    elif verb == "tangent":
        line = tangent_by_reflection(ctx, pts[0])
        grad = cb.tangent_line_at(curve, pts[0], ctx.tol)
        out["line"] = ser_line(line)
        out["angle_to_gradient_tangent"] = _f(line.direction.angle_to(grad.direction))
        out["residual"] = _f(cb.curve_residual(curve, pts[0]))
    elif verb == "third":
        w, z = third_point_by_reflection(ctx, *pts)
        out["third"] = _with_residual(curve, w)
        out["conjugate_of_third"] = _with_residual(curve, z)
    elif verb == "circle4":
        out["fourth"] = _with_residual(curve, circle_fourth_point(ctx, *pts))
    elif verb == "add":
        out["sum"] = _with_residual(curve, cubic_add(ctx, *pts))
    elif verb == "tangents-from":
        out["points"] = [_with_residual(curve, p) for p in tangent_points_from(ctx, pts[0])]
    elif verb == "partner":
        out["partner"] = _with_residual(curve, parallel_bisector_partner(ctx, pts[0]))
    elif verb == "requad":
        q = generating_quadrilateral(ctx, *pts)
        new = cubic_from_quadrilateral(q, ctx.tol)
        out["quad"] = [ser_point(v) for v in q.vertices]
        out["coefficients"] = ser_coefficients(new)
        a, b = new.as_array(), curve.as_array()
        out["cosine_similarity"] = _f(abs(a @ b) / (float((a @ a) * (b @ b)) ** 0.5))
    return EXIT_OK, out


def _window(args) -> tuple:
    x0, x1, y0, y1 = args.window
    if not (x0 < x1 and y0 < y1):
        raise UsageError("window must satisfy x0 < x1 and y0 < y1")
    if not 16 <= args.resolution <= 8192:
        raise UsageError("resolution must lie in [16, 8192]")
    return (x0, x1, y0, y1)


def _write(path: str, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliExit(EXIT_IO, message=f"cannot write {path}: {exc}")


def cmd_render(sc: Scene, args) -> tuple:
    window = _window(args)
    if not args.out:
        raise UsageError("render needs --out")
    curve = _scene_curve(sc)
    rep = cb.classify_cubic(curve, sc.tol)
    asym = rep.profile.asymptote if rep.profile is not None else None
    points = dict(sc.points)
    if sc.quad is not None:
        points = {**dict(zip("ABCD", sc.quad.vertices)), **points}
    polylines = trace_curve(curve, window, args.resolution)
    svg = render_svg(curve, window, args.resolution, asymptote=asym, points=points,
                     lines=sc.lines, circles=sc.circles, polylines=polylines)
    _write(args.out, svg)
    out = {"out": args.out, "components": len(polylines),
           "vertices": [len(p) for p in polylines], "asymptote": ser_line(asym) if asym else None}
    if args.csv:
        _write(args.csv, polylines_csv(polylines))
        out["csv"] = args.csv
    return EXIT_OK, out


def cmd_verify(sc: Scene, args) -> tuple:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    curve = _scene_curve(sc)
    rep = run_suite(curve, sc.quad, args.trials, args.seed, sc.tol)
    return (EXIT_OK if rep.all_pass else EXIT_VERIFY_FAIL), rep.as_dict()


COMMANDS = {
    "synthesize": cmd_synthesize,
    "classify": cmd_classify,
    "construct": cmd_construct,
    "render": cmd_render,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="infile", help="scene JSON file (default: stdin)")
    common.add_argument("--tol", type=float, help="relative tolerance override")
    p = _Parser(prog="isocubic", description="Isogonal cubics of quadrilaterals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("synthesize", parents=[common], help="cubic and profile of a quadrilateral")
    sub.add_parser("classify", parents=[common], help="decide whether a cubic is isogonal")
    c = sub.add_parser("construct", parents=[common], help="run one construction")
    c.add_argument("verb", help=", ".join(VERBS))
    c.add_argument("args", nargs="*", help="points as x,y or scene point names")
    r = sub.add_parser("render", parents=[common], help="SVG (and optional CSV) of the curve")
    r.add_argument("--window", nargs=4, type=float, default=[-10.0, 10.0, -10.0, 10.0],
                   metavar=("X0", "X1", "Y0", "Y1"))
    r.add_argument("--resolution", type=int, default=512)
    r.add_argument("--out", help="SVG output path")
    r.add_argument("--csv", help="CSV output path for traced vertices")
    v = sub.add_parser("verify", parents=[common], help="run the property suite")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    return p


def _load(args) -> Scene:
    try:
        text = Path(args.infile).read_text() if args.infile else sys.stdin.read()
    except OSError as exc:
        raise CliExit(EXIT_IO, message=f"cannot read scene: {exc}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"scene is not valid JSON: {exc}") from exc
    sc = parse_scene(data)
    if args.tol is not None:
        if not (math.isfinite(args.tol) and args.tol > 0):
            raise UsageError("--tol must be a positive finite number")
        sc.tol = Tolerance(args.tol, sc.tol.abs_floor)
    return sc


_NEG_PAIR = re.compile(r"^-[\d.][^,]*,\S+$")


def _protect_negative_pairs(argv: Sequence[str]) -> List[str]:
    # argparse would read "-2,3" as an option; a leading space keeps it positional
    return [" " + a if _NEG_PAIR.match(a) else a for a in argv]


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _protect_negative_pairs(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        sc = _load(args)
        code, payload = COMMANDS[args.command](sc, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except CliExit as exc:
        if exc.message:
            print(exc.message, file=stderr)
        if exc.payload is not None:
            print(dumps(exc.payload), file=stdout)
        return exc.code
    except NotOnCurveError as exc:
        print(dumps({"error": "NotOnCurve", "message": str(exc), "residual": exc.residual}), file=stdout)
        return EXIT_NOT_ON_CURVE
    except SingularPointError as exc:
        print(dumps({"error": "SingularPoint", "message": str(exc)}), file=stdout)
        return EXIT_SINGULAR
    except DegeneracyError as exc:
        print(dumps({"error": "Degenerate", "message": str(exc)}), file=stdout)
        return EXIT_DEGENERATE
    except ConjugateAtInfinity as exc:
        print(dumps({"error": "ConjugateAtInfinity", "message": str(exc),
                     "direction": ser_direction(exc.direction)}), file=stdout)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"usage error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_USAGE
    print(dumps(payload), file=stdout)
    return code


def main() -> None:
    sys.exit(run())
