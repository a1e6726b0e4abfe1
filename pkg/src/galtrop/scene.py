"""Scene files: JSON description of a fan, a twist, a curve, points and an embedding.

Layout (``schema_version`` 1)::

    {
      "schema_version": 1,
      "name": "...",
      "fan": {"rank": 2, "rays": [[1, 0], ...], "cones": [[0, 1], ...]},
      "twist": {"orders": [3], "generators": [[[0, -1], [1, -1]]],
                "residues": [1], "level": 3},
      "polynomial": {"terms": [{"exponent": [1, 0], "coefficient": SERIES}, ...]},
      "points": [[SERIES, SERIES], ...],
      "embedding": {"source_rank": 1, "coordinates": [POLY, ...]}
    }

SERIES is a list of ``{"t_exp": "a/b", "cyc_coeffs": ["c0", "c1", ...]}``
meaning sum c_i zeta_N^i t^(a/b), with N the twist level.  Every rational
is a string.  ``twist``, ``polynomial``, ``points`` and ``embedding`` are
optional; without a twist the group is trivial and N = 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exactnum import Cyclotomic, PuiseuxSeries
from .galois import InvalidTwist, TwistedLaurentPolynomial, TwistedToricVariety, make_twist
from .toric import Fan, FanError, LatticeMap
from .trop import EmbeddingData

SCHEMA_VERSION = 1


class SceneError(ValueError):
    """Malformed scene; ``field`` is the JSON path of the offending value."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


@dataclass
class TwistSpec:
    orders: list[int]
    generators: list[list[list[int]]]
    residues: list[int]
    level: int

    @classmethod
    def trivial(cls, level: int = 1) -> "TwistSpec":
        return cls([], [], [], level)

    @classmethod
    def of(cls, twist: TwistedToricVariety) -> "TwistSpec":
        elems = twist.group.elements
        orders = [max(e[i] for e in elems) + 1 for i in range(len(twist.generators()))]
        gens = [[list(row) for row in twist.matrix(g).matrix] for g in twist.generators()]
        return cls(orders, gens, [twist.residue(g) for g in twist.generators()], twist.puiseux_level)


@dataclass
class Scene:
    name: str
    fan: Fan
    twist_spec: TwistSpec
    twist: TwistedToricVariety
    polynomial: TwistedLaurentPolynomial | None = None
    points: list[tuple[PuiseuxSeries, ...]] | None = None
    source_rank: int | None = None
    coordinates: list[TwistedLaurentPolynomial] = field(default_factory=list)

    @property
    def level(self) -> int:
        return self.twist_spec.level

    @property
    def embedding(self) -> EmbeddingData | None:
        if self.source_rank is None:
            return None
        return EmbeddingData(tuple(self.coordinates), self.twist)


# -- primitive readers ----------------------------------------------------------

def _get(obj: dict, key: str, path: str, kind=None, required: bool = True):
    if not isinstance(obj, dict):
        raise SceneError(path, "expected an object")
    if key not in obj:
        if required:
            raise SceneError(f"{path}.{key}" if path else key, "missing")
        return None
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SceneError(f"{path}.{key}" if path else key, f"expected {getattr(kind, '__name__', kind)}")
    return val


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SceneError(path, "expected an integer")
    return x


def _int_list(xs, path: str) -> list[int]:
    if not isinstance(xs, list):
        raise SceneError(path, "expected a list of integers")
    return [_int(x, f"{path}[{i}]") for i, x in enumerate(xs)]


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SceneError(path, "rationals must be strings 'a/b' or integers")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise SceneError(path, "expected a rational string")
    try:
        return Fraction(x.strip())
    except (ValueError, ZeroDivisionError):
        raise SceneError(path, f"{x!r} is not a rational") from None


def _series(obj, level: int, path: str) -> PuiseuxSeries:
    if not isinstance(obj, list):
        raise SceneError(path, "expected a list of {t_exp, cyc_coeffs} terms")
    terms = []
    for i, term in enumerate(obj):
        p = f"{path}[{i}]"
        q = _rational(_get(term, "t_exp", p), f"{p}.t_exp")
        if (q * level).denominator != 1:
            raise SceneError(f"{p}.t_exp", f"exponent {q} is not in (1/{level})Z")
        raw = _get(term, "cyc_coeffs", p, list)
        coeffs = [_rational(c, f"{p}.cyc_coeffs[{j}]") for j, c in enumerate(raw)]
        terms.append((q, Cyclotomic(level, coeffs)))
    return PuiseuxSeries(terms, level)


def _poly(obj, rank: int, level: int, path: str) -> TwistedLaurentPolynomial:
    raw = _get(obj, "terms", path, list)
    terms = []
    for i, term in enumerate(raw):
        p = f"{path}.terms[{i}]"
        u = _int_list(_get(term, "exponent", p), f"{p}.exponent")
        if len(u) != rank:
            raise SceneError(f"{p}.exponent", f"expected {rank} entries")
        terms.append((tuple(u), _series(_get(term, "coefficient", p), level, f"{p}.coefficient")))
    return TwistedLaurentPolynomial(rank, terms).rescale(level) if terms else TwistedLaurentPolynomial(rank)


# -- parsing --------------------------------------------------------------------

def parse_scene(data: Any) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("$", "a scene is a JSON object")
    version = _get(data, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise SceneError("schema_version", f"unsupported version {version!r}")
    name = _get(data, "name", "", str, required=False) or ""

    fobj = _get(data, "fan", "", dict)
    rank = _int(_get(fobj, "rank", "fan"), "fan.rank")
    rays = [_int_list(r, f"fan.rays[{i}]") for i, r in enumerate(_get(fobj, "rays", "fan", list))]
    for i, r in enumerate(rays):
        if len(r) != rank:
            raise SceneError(f"fan.rays[{i}]", f"expected {rank} entries")
    cones = [_int_list(c, f"fan.cones[{i}]") for i, c in enumerate(_get(fobj, "cones", "fan", list))]
    for i, c in enumerate(cones):
        if any(not 0 <= j < len(rays) for j in c):
            raise SceneError(f"fan.cones[{i}]", "ray index out of range")
    try:
        fan = Fan(rank, rays, cones)
    except FanError as exc:
        raise SceneError("fan", str(exc)) from None

    tobj = _get(data, "twist", "", dict, required=False)
    if tobj is None:
        spec = TwistSpec.trivial()
    else:
        orders = _int_list(_get(tobj, "orders", "twist"), "twist.orders")
        gens = []
        for i, m in enumerate(_get(tobj, "generators", "twist", list)):
            if not isinstance(m, list) or len(m) != rank:
                raise SceneError(f"twist.generators[{i}]", f"expected a {rank}x{rank} matrix")
            rows = [_int_list(r, f"twist.generators[{i}][{j}]") for j, r in enumerate(m)]
            if any(len(r) != rank for r in rows):
                raise SceneError(f"twist.generators[{i}]", f"expected a {rank}x{rank} matrix")
            gens.append(rows)
        residues = _int_list(_get(tobj, "residues", "twist"), "twist.residues")
        level = _int(_get(tobj, "level", "twist"), "twist.level")
        if level < 1:
            raise SceneError("twist.level", "level must be positive")
        if not len(orders) == len(gens) == len(residues):
            raise SceneError("twist", "orders, generators and residues must have equal length")
        spec = TwistSpec(orders, gens, [r % level for r in residues], level)
    try:
        twist = make_twist(fan, [LatticeMap(tuple(map(tuple, g))) for g in spec.generators],
                           spec.orders, spec.residues, spec.level)
    except (InvalidTwist, ValueError) as exc:
        raise SceneError("twist", str(exc)) from None
    scene = Scene(name, fan, spec, twist)

    pobj = _get(data, "polynomial", "", dict, required=False)
    if pobj is not None:
        scene.polynomial = _poly(pobj, rank, spec.level, "polynomial")

    eobj = _get(data, "embedding", "", dict, required=False)
    point_rank = rank
    if eobj is not None:
        src = _int(_get(eobj, "source_rank", "embedding"), "embedding.source_rank")
        coords = _get(eobj, "coordinates", "embedding", list)
        if len(coords) != rank:
            raise SceneError("embedding.coordinates", f"expected {rank} coordinates for the fan")
        scene.source_rank = src
        scene.coordinates = [
            _poly(c, src, spec.level, f"embedding.coordinates[{i}]") for i, c in enumerate(coords)
        ]
        point_rank = src

    pts = _get(data, "points", "", list, required=False)
    if pts is not None:
        scene.points = []
        for i, x in enumerate(pts):
            if not isinstance(x, list) or len(x) != point_rank:
                raise SceneError(f"points[{i}]", f"expected {point_rank} coordinates")
            scene.points.append(tuple(_series(c, spec.level, f"points[{i}][{j}]") for j, c in enumerate(x)))
    return scene


def load_scene(path) -> tuple[Scene, bytes]:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SceneError("$", f"invalid JSON: {exc}") from None
    return parse_scene(data), raw


# -- serialization --------------------------------------------------------------

def rational_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _trim(xs: list) -> list:
    while xs and xs[-1] in ("0", 0):
        xs = xs[:-1]
    return xs


def series_json(f: PuiseuxSeries, level: int) -> list:
    f = f.rescale(level)
    return [{"t_exp": rational_str(q), "cyc_coeffs": _trim([rational_str(c) for c in coeff.coeffs])}
            for q, coeff in f.terms]


def poly_json(f: TwistedLaurentPolynomial, level: int) -> dict:
    return {"terms": [{"exponent": list(u), "coefficient": series_json(a, level)}
                      for u, a in f.terms.items()]}


def _maximal(cones) -> list[list[int]]:
    sets = [frozenset(c) for c in cones]
    keep = {tuple(sorted(c)) for c in sets if not any(c < d for d in sets)}
    return [list(c) for c in sorted(keep)]


def scene_json(scene: Scene) -> dict:
    n = scene.level
    out: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "name": scene.name,
        "fan": {
            "rank": scene.fan.rank,
            "rays": [list(r) for r in scene.fan.rays],
            "cones": _maximal(scene.fan.cones),
        },
    }
    spec = scene.twist_spec
    if spec.orders or spec.level != 1:
        out["twist"] = {"orders": list(spec.orders), "generators": spec.generators,
                        "residues": list(spec.residues), "level": spec.level}
    if scene.polynomial is not None:
        out["polynomial"] = poly_json(scene.polynomial, n)
    if scene.source_rank is not None:
        out["embedding"] = {"source_rank": scene.source_rank,
                            "coordinates": [poly_json(c, n) for c in scene.coordinates]}
    if scene.points is not None:
        out["points"] = [[series_json(c, n) for c in x] for x in scene.points]
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- canonical form without parsing ---------------------------------------------

def _canon_rational(x) -> str:
    return rational_str(Fraction(x) if isinstance(x, int) else Fraction(x.strip()))


def _canon_series(s: list) -> list:
    merged: dict[Fraction, list[Fraction]] = {}
    for term in s:
        q = Fraction(_canon_rational(term["t_exp"]))
        cs = [Fraction(_canon_rational(c)) for c in term["cyc_coeffs"]]
        acc = merged.setdefault(q, [])
        acc.extend([Fraction(0)] * (len(cs) - len(acc)))
        for i, c in enumerate(cs):
            acc[i] += c
    out = []
    for q in sorted(merged):
        cs = _trim([rational_str(c) for c in merged[q]])
        if cs:
            out.append({"t_exp": rational_str(q), "cyc_coeffs": cs})
    return out


def _canon_poly(p: dict) -> dict:
    terms: dict[tuple, list] = {}
    for term in p["terms"]:
        terms.setdefault(tuple(term["exponent"]), []).extend(term["coefficient"])
    out = []
    for u in sorted(terms):
        c = _canon_series(terms[u])
        if c:
            out.append({"exponent": list(u), "coefficient": c})
    return {"terms": out}


def canonicalize(data: dict) -> dict:
    """Normal form of a scene's JSON by direct rewriting.

    Sorts terms and cones, merges repeated exponents, writes rationals as
    reduced strings, drops zero terms, trims trailing zero cyclotomic
    coefficients and keeps only maximal cones.  It does not reduce
    cyclotomic coefficient vectors modulo the cyclotomic polynomial.
    """
    out: dict[str, Any] = {
        "schema_version": data["schema_version"],
        "name": data.get("name", ""),
        "fan": {
            "rank": data["fan"]["rank"],
            "rays": [list(r) for r in data["fan"]["rays"]],
            "cones": _maximal(data["fan"]["cones"]),
        },
    }
    tw = data.get("twist")
    if tw is not None and (tw["orders"] or tw["level"] != 1):
        out["twist"] = {"orders": list(tw["orders"]), "generators": tw["generators"],
                        "residues": [r % tw["level"] for r in tw["residues"]], "level": tw["level"]}
    if "polynomial" in data:
        out["polynomial"] = _canon_poly(data["polynomial"])
    if "embedding" in data:
        e = data["embedding"]
        out["embedding"] = {"source_rank": e["source_rank"],
                            "coordinates": [_canon_poly(c) for c in e["coordinates"]]}
    if "points" in data:
        out["points"] = [[_canon_series(c) for c in x] for x in data["points"]]
    return out
