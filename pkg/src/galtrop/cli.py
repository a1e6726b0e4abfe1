"""galtrop command line: scene in, JSON report (and SVG) out.

Exit codes: 0 success, 1 a check failed, 2 the input could not be parsed,
3 a mathematical precondition does not hold.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .exactnum import INF
from .extended import TropPoint, UnsupportedPoint
from .galois import InvalidTwist, is_invariant_hypersurface
from .homology import NonCompactComplex, NotEquivariant, fixed_dimension, homology_report, multiplicative_order
from .scene import SceneError, Scene, TwistSpec, dumps, load_scene, rational_str, scene_json
from .svg import render_svg
from .toric import FanError
from .trop import (
    OrbitError,
    TropicalComplex,
    UndefinedPoint,
    close_in_toric_surface,
    equivariance_witness,
    equivariantize_embedding,
    groebner_cell,
    orbit_image,
    trop_curve_2d,
    trop_point,
)

PRECONDITION_ERRORS = (
    FanError, InvalidTwist, UnsupportedPoint, UndefinedPoint, OrbitError, NonCompactComplex, NotEquivariant,
)


class CheckFailed(Exception):
    def __init__(self, report: dict):
        self.report = report


# -- JSON helpers ---------------------------------------------------------------

def ext_str(x) -> str:
    return "inf" if x == INF else rational_str(x)


def point_json(p: TropPoint) -> dict:
    return {"sedentarity": list(p.sedentarity), "coords": [rational_str(c) for c in p.coords]}


def complex_json(cx: TropicalComplex) -> dict:
    return {
        "vertices": [point_json(p) for p in cx.vertices],
        "edges": [{"ends": list(e.ends), "direction": list(e.direction), "weight": e.weight} for e in cx.edges],
        "rays": [{"vertex": r.vertex, "direction": list(r.direction), "weight": r.weight} for r in cx.rays],
    }


def matrix_json(m) -> list:
    return [[rational_str(x) for x in row] for row in m]


def _need(scene: Scene, attr: str):
    if getattr(scene, attr) is None:
        raise SceneError(attr, "this command needs the scene to provide it")
    return getattr(scene, attr)


def _closable(scene: Scene) -> bool:
    try:
        return scene.fan.rank == 2 and scene.fan.covers_sample(4)
    except FanError:
        return False


def _curve(scene: Scene) -> tuple[TropicalComplex, TropicalComplex | None]:
    f = _need(scene, "polynomial")
    if f.rank != 2:
        raise SceneError("polynomial", "plane curves need rank 2")
    open_cx = trop_curve_2d(f)
    return open_cx, close_in_toric_surface(open_cx, scene.fan) if _closable(scene) else None


def _clip(args) -> Fraction:
    raw, name = (os.environ["GALTROP_CLIP"], "GALTROP_CLIP") if "GALTROP_CLIP" in os.environ else (args.clip, "--clip")
    try:
        value = Fraction(str(raw).strip())
    except (ValueError, ZeroDivisionError):
        raise SceneError(name, f"{raw!r} is not a rational") from None
    if value <= 0:
        raise SceneError(name, "the clip radius must be positive")
    return value


def _parse_at(text: str, rank: int) -> list[Fraction]:
    try:
        v = [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise SceneError("--at", f"{text!r} is not a comma-separated rational vector") from None
    if len(v) != rank:
        raise SceneError("--at", f"expected {rank} coordinates")
    return v


# -- commands -------------------------------------------------------------------

def cmd_tropicalize(scene: Scene, args) -> dict:
    out: dict = {}
    if scene.polynomial is not None:
        open_cx, closed = _curve(scene)
        if args.svg:
            svg = render_svg(open_cx, scene.twist, _clip(args))
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
        out["curve"] = {
            "open": complex_json(open_cx),
            "closed": complex_json(closed) if closed is not None else None,
            "balanced": open_cx.is_balanced(),
            "betti_1": (closed or open_cx).betti_1(),
        }
    elif args.svg:
        raise SceneError("polynomial", "an SVG needs a curve")
    if scene.points is not None:
        emb = scene.embedding
        if emb is None:
            out["points"] = [point_json(trop_point(x, scene.fan)) for x in scene.points]
        else:
            out["points"] = [point_json(emb.image(x)) for x in scene.points]
    if not out:
        raise SceneError("polynomial", "nothing to tropicalize")
    return out


def cmd_check_equivariance(scene: Scene, args) -> dict:
    open_cx, closed = _curve(scene)
    witness = equivariance_witness(closed or open_cx, scene.twist)
    out = {
        "equivariant": witness is None,
        "witness": witness,
        "hypersurface_invariant": is_invariant_hypersurface(scene.twist, scene.polynomial),
    }
    if witness is not None:
        raise CheckFailed(out)
    return out


def cmd_homology(scene: Scene, args) -> dict:
    _, closed = _curve(scene)
    if closed is None:
        raise NonCompactComplex("homology needs a complete fan of rank 2 to close the curve in")
    twist = scene.twist if len(scene.twist.group) > 1 else None
    rep = homology_report(closed, twist)
    out: dict = {"dims": rep.dims, "betti_1": closed.betti_1()}
    if twist is not None:
        elems = twist.group.elements
        out["elements"] = [list(e) for e in elems]
        out["characters"] = {k: [rational_str(x) for x in v] for k, v in rep.characters.items()}
        out["action"] = {}
        out["invariants"] = {}
        for n, g in enumerate(twist.generators()):
            label = f"g{n}"
            mats = rep.action[g]
            out["action"][label] = {k: matrix_json(m) for k, m in mats.items()}
            out["invariants"][label] = {
                k: {
                    "order": multiplicative_order(m),
                    "trace": rational_str(sum((m[i][i] for i in range(len(m))), Fraction(0))),
                    "fixed_dimension": fixed_dimension(m),
                }
                for k, m in mats.items()
            }
    return out


def cmd_orbit(scene: Scene, args) -> dict:
    emb = _need(scene, "embedding")
    pts = _need(scene, "points")
    res = orbit_image(pts, emb)
    return {
        "images": [[ext_str(c.val()) for c in emb.evaluate(x)] for x in pts],
        "points": [point_json(p) for p in res.images],
        "injective": res.injective,
        "action_compatible": res.action_compatible,
    }


def cmd_groebner_cell(scene: Scene, args) -> dict:
    f = _need(scene, "polynomial")
    if args.at is None:
        raise SceneError("--at", "missing")
    v = _parse_at(args.at, f.rank)
    cell = groebner_cell(f, v)
    vals = f.valuations()
    best = min(vals[u] + sum(a * b for a, b in zip(u, v)) for u in cell) if cell else None
    return {
        "at": [rational_str(x) for x in v],
        "cell": [list(u) for u in cell],
        "minimum": None if best is None else rational_str(best),
    }


def cmd_equivariantize(scene: Scene, args) -> dict:
    emb = _need(scene, "embedding")
    if args.order is None or args.order < 1:
        raise SceneError("--order", "a positive group order is required")
    new = equivariantize_embedding(emb, args.order, args.level)
    tw = new.target
    return scene_json(Scene(
        f"{scene.name}_equivariant" if scene.name else "equivariant",
        tw.fan, TwistSpec.of(tw), tw,
        points=scene.points, source_rank=scene.source_rank, coordinates=list(new.coordinates),
    ))


COMMANDS = {
    "tropicalize": cmd_tropicalize,
    "check-equivariance": cmd_check_equivariance,
    "homology": cmd_homology,
    "orbit": cmd_orbit,
    "groebner-cell": cmd_groebner_cell,
    "equivariantize": cmd_equivariantize,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galtrop", description="Galois-equivariant tropical geometry on JSON scenes.")
    p.add_argument("--version", action="version", version=f"galtrop {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("scene")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        if name == "tropicalize":
            sp.add_argument("--svg", help="also draw the curve to this SVG file")
            sp.add_argument("--clip", default="6", help="ray clipping radius (GALTROP_CLIP overrides)")
        if name == "groebner-cell":
            sp.add_argument("--at", help='weight vector, e.g. "1/2,-3"')
        if name == "equivariantize":
            sp.add_argument("--order", type=int, help="order m of the cyclic group")
            sp.add_argument("--level", type=int, help="Puiseux level N (default lcm of m and the input levels)")
    return p


def _emit(obj, path: str | None):
    text = dumps(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diagnose(kind: str, **fields) -> None:
    sys.stderr.write(json.dumps({"error": kind, **fields}, sort_keys=True) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scene, raw = load_scene(args.scene)
    except OSError as exc:
        _diagnose("parse", field="scene", message=str(exc))
        return 2
    except SceneError as exc:
        _diagnose("parse", field=exc.field, message=exc.message)
        return 2

    def report(outputs) -> dict:
        return {
            "schema_version": 1,
            "command": args.command,
            "scene": scene.name,
            "outputs": outputs,
            "provenance": {"tool_version": __version__, "input_sha256": hashlib.sha256(raw).hexdigest()},
        }

    try:
        outputs = COMMANDS[args.command](scene, args)
    except SceneError as exc:
        _diagnose("parse", field=exc.field, message=exc.message)
        return 2
    except CheckFailed as exc:
        _emit(report(exc.report), args.output)
        return 1
    except PRECONDITION_ERRORS as exc:
        _diagnose("precondition", type=type(exc).__name__, message=str(exc))
        return 3
    _emit(outputs if args.command == "equivariantize" else report(outputs), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
