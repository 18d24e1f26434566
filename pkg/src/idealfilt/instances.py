"""Instance files: the JSON description of one computation setup.

An instance pins the coefficient field, variable names, generator list with
levels, truncation window, and the optional sampling data (points,
neighborhood groups, center samples, seed).  Example:

    {
      "char": 2,
      "ext_degree": 1,
      "vars": ["x", "y"],
      "generators": [{"poly": "x^2+y^3", "level": "2"}],
      "truncation": 12,
      "points": [["0", "0"], ["0", "1"]],
      "neighborhoods": [{"limit": 0, "members": [1]}]
    }

Levels are exact rationals ("3/2", "2", or a JSON integer); points list one
scalar per variable in the field's text form.  Parse problems raise
ParseError naming the offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .fields import Field, make_field
from .filtration import Filtration, d_saturate, generate
from .jetring import JetRing, scalar_from_instance


def parse_level(value, where: str = "level") -> Fraction:
    try:
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError("non-integral float")
            value = int(value)
        level = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as err:
        raise ParseError(f"{where}: not an exact rational: {value!r}") from err
    if level <= 0:
        raise ParseError(f"{where}: level must be positive, got {level}")
    return level


def parse_point(field: Field, values, nvars: int, where: str = "point") -> list:
    if len(values) != nvars:
        raise ParseError(f"{where}: expected {nvars} coordinates, got {len(values)}")
    out = []
    for k, v in enumerate(values):
        try:
            out.append(scalar_from_instance(field, v))
        except Exception as err:
            raise ParseError(f"{where}[{k}]: bad scalar {v!r}") from err
    return out


@dataclass
class Instance:
    """A parsed instance file plus the derived ring objects."""

    field: Field
    ring: JetRing
    generators: list            # [(poly dict, Fraction level)] as given
    truncation: int
    horizon: int | None = None
    points: list = dataclass_field(default_factory=list)
    neighborhoods: list = dataclass_field(default_factory=list)
    center_samples: list = dataclass_field(default_factory=list)
    seed: int | None = None
    _saturated: Filtration | None = None

    def filtration(self) -> Filtration:
        return generate(self.ring, self.generators)

    def saturated(self) -> Filtration:
        if self._saturated is None:
            self._saturated = d_saturate(self.filtration())
        return self._saturated


def load_instance(source) -> Instance:
    """Accepts a path, JSON text, or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(f"invalid instance JSON: {err}") from err
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")

    char = data.get("char")
    if not isinstance(char, int) or char < 0:
        raise ParseError("char: expected a nonnegative integer")
    ext_degree = data.get("ext_degree", 1)
    try:
        field = make_field(char, ext_degree, data.get("modulus"))
    except Exception as err:
        raise ParseError(f"field setup failed: {err}") from err

    names = data.get("vars")
    if (not isinstance(names, list) or not names
            or not all(isinstance(n, str) for n in names)):
        raise ParseError("vars: expected a nonempty list of names")
    trunc = data.get("truncation")
    if not isinstance(trunc, int) or trunc < 1:
        raise ParseError("truncation: expected a positive integer")
    ring = JetRing(field, names, trunc)

    gens_data = data.get("generators")
    if not isinstance(gens_data, list):
        raise ParseError("generators: expected a list")
    generators = []
    for k, item in enumerate(gens_data):
        where = f"generators[{k}]"
        if not isinstance(item, dict) or "poly" not in item or "level" not in item:
            raise ParseError(f"{where}: expected {{'poly': ..., 'level': ...}}")
        try:
            poly = ring.from_text(item["poly"])
        except ParseError as err:
            raise ParseError(f"{where}.poly: {err}") from err
        generators.append((poly, parse_level(item["level"], f"{where}.level")))

    horizon = data.get("horizon")
    if horizon is not None and (not isinstance(horizon, int) or horizon < 0):
        raise ParseError("horizon: expected a nonnegative integer")
    seed = data.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ParseError("seed: expected an integer")

    points = [parse_point(field, row, ring.nvars, f"points[{k}]")
              for k, row in enumerate(data.get("points", []))]
    center_samples = [parse_point(field, row, ring.nvars, f"center_samples[{k}]")
                      for k, row in enumerate(data.get("center_samples", []))]

    neighborhoods = []
    for k, item in enumerate(data.get("neighborhoods", [])):
        where = f"neighborhoods[{k}]"
        if (not isinstance(item, dict) or "limit" not in item
                or "members" not in item):
            raise ParseError(f"{where}: expected {{'limit': i, 'members': [...]}}")
        limit = item["limit"]
        members = item["members"]
        if not isinstance(limit, int) or not 0 <= limit < len(points):
            raise ParseError(f"{where}.limit: no such point index {limit!r}")
        if (not isinstance(members, list)
                or not all(isinstance(m, int) and 0 <= m < len(points)
                           for m in members)):
            raise ParseError(f"{where}.members: expected point indices")
        neighborhoods.append({"limit": limit, "members": list(members)})

    return Instance(field=field, ring=ring, generators=generators,
                    truncation=trunc, horizon=horizon, points=points,
                    neighborhoods=neighborhoods, center_samples=center_samples,
                    seed=seed)


# ---------------------------------------------------------------------------
# emission

def instance_to_data(field: Field, ring: JetRing, pairs, seed=None,
                     points=None, neighborhoods=None, center_samples=None,
                     horizon=None) -> dict:
    """The JSON-ready form of an instance, inverse to load_instance."""
    data = {
        "char": field.char,
        "ext_degree": getattr(field, "m", 1) if field.char else 1,
        "vars": list(ring.names),
        "truncation": ring.trunc,
        "generators": [{"poly": ring.to_text(f), "level": str(a)}
                       for f, a in pairs],
    }
    if seed is not None:
        data["seed"] = seed
    if horizon is not None:
        data["horizon"] = horizon
    if points:
        data["points"] = [point_to_data(field, Q) for Q in points]
    if neighborhoods:
        data["neighborhoods"] = neighborhoods
    if center_samples:
        data["center_samples"] = [point_to_data(field, Q)
                                  for Q in center_samples]
    return data


def point_to_data(field: Field, point) -> list[str]:
    return [field.to_text(c) for c in point]


def dump_instance(data: dict) -> str:
    """Canonical text form; identical inputs give identical bytes."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
