"""JSON forms of the exact objects, and reading germs from JSON sources.

Rationals travel as ``"p/q"`` strings, infinity as ``"inf"``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .cyclo import CycloNumber, as_rational, embed, format_rational
from .errors import SchemaError
from .germ import GermPresentation
from .invariants import CharData
from .series import Arc, BranchGerm, PuiseuxSeries


def value_to_json(v) -> str | None:
    if v is None:
        return None
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        raise TypeError(f"floating value {v} has no exact form")
    return format_rational(as_rational(v))


def value_from_json(v):
    if v is None:
        return None
    if v == "inf":
        return math.inf
    return as_rational(v)


def cyclo_to_json(c: CycloNumber) -> dict:
    return {"conductor": c.conductor, "coeffs": [format_rational(q) for q in c.coeffs]}


def cyclo_from_json(obj) -> CycloNumber:
    if isinstance(obj, dict):
        return CycloNumber(int(obj["conductor"]), [as_rational(q) for q in obj["coeffs"]])
    if isinstance(obj, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(obj, (int, str)):
        return embed(as_rational(obj))
    raise TypeError(f"cannot read a coefficient from {obj!r}")


def series_to_json(s: PuiseuxSeries) -> dict:
    return {
        "exact": s.exact,
        "trunc": None if s.exact else format_rational(s.trunc),
        "terms": [{"exp": format_rational(q), "coeff": cyclo_to_json(c)} for q, c in s.terms],
    }


def series_from_json(obj) -> PuiseuxSeries:
    if isinstance(obj, str):
        from .parser import parse_series

        return parse_series(obj)
    terms = [(as_rational(t["exp"]), cyclo_from_json(t["coeff"])) for t in obj["terms"]]
    exact = obj.get("exact", True)
    return PuiseuxSeries(terms, exact, None if exact else as_rational(obj["trunc"]))


def chardata_to_json(cd: CharData) -> dict:
    return cd.to_json()


def branch_to_json(b: BranchGerm, mult: int, certified=None) -> dict:
    out = {
        "m": b.m,
        "psi": [{"exp": int(q), "coeff": cyclo_to_json(c)} for q, c in b.psi.terms],
        "mult": mult,
    }
    if not b.psi.exact:
        out["trunc"] = int(b.psi.trunc)
    if certified is not None:
        out["certified_trunc"] = value_to_json(certified)
    return out


def germ_to_json(g: GermPresentation) -> dict:
    out: dict = {"branches": [branch_to_json(b, k) for b, k in g.factors]}
    if g.shear is not None:
        out["shear"] = format_rational(g.shear)
    return out


def arc_to_json(a: Arc) -> dict:
    if a.kind == "x":
        return {"kind": "x", "p": a.p, "y": series_to_json(a.y)}
    return {"kind": "y-axis", "e_prime": a.e_prime, "v": series_to_json(a.v)}


def arc_from_json(obj) -> Arc:
    validate(obj, "arc")
    kind = obj.get("kind", "x")
    if kind == "x":
        return Arc.x_normalized(int(obj.get("p", 1)), series_from_json(obj.get("y", "0")))
    v = obj.get("v")
    return Arc.y_axis(int(obj.get("e_prime", 1)), series_from_json(v) if v is not None else None)


# --------------------------------------------------------------------------
# schemas


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("planegerms").joinpath("schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate(obj, name: str) -> None:
    """Raise SchemaError (with a JSON pointer) when ``obj`` violates schema ``name``."""
    validator = jsonschema.Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))


# --------------------------------------------------------------------------
# germ sources


def load_source(source) -> dict:
    """A germ source: a dict, inline JSON text, a path to a JSON file, or a bare polynomial."""
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        path = Path(source)
        if path.suffix == ".json" or path.is_file():
            try:
                text = path.read_text()
            except OSError as exc:
                raise SchemaError(f"cannot read {source}: {exc.strerror}") from None
            return _loads(text, str(path))
        return {"polynomial": str(source)}
    return _loads(source, "inline JSON")


def _loads(text: str, where: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{where} is not valid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def read_germ(source, trunc: int = 6, cap: int | None = None) -> GermPresentation:
    """Build a germ from ``{"polynomial": ...}`` or ``{"branches": [...]}``.

    Polynomial germs keep the polynomial as ``source_poly`` and the expansion
    report as ``report``; branch data has neither.
    """
    from .newton import default_cap, expand
    from .parser import parse_polynomial

    obj = load_source(source)
    validate(obj, "germ")
    cap = default_cap() if cap is None else cap
    if "polynomial" in obj:
        f = parse_polynomial(obj["polynomial"])
        shear = obj.get("shear", "auto")
        report = expand(f, trunc, cap, shear if shear == "auto" else as_rational(shear))
        g = report.germ()
        g.source_poly = f
        g.report = report
        return g
    factors = []
    for spec in obj["branches"]:
        psi = spec["psi"]
        if isinstance(psi, str):
            s = series_from_json(psi)
        else:
            s = PuiseuxSeries([(t["exp"], cyclo_from_json(t["coeff"])) for t in psi])
        if "trunc" in spec:
            s = s.truncate(as_rational(spec["trunc"]))
        factors.append((BranchGerm(int(spec["m"]), s), int(spec.get("mult", 1))))
    shear = obj.get("shear")
    g = GermPresentation(factors, None if shear is None else Fraction(as_rational(shear)), cap)
    g.source_poly = None
    g.report = None
    return g


def read_arc(source) -> Arc:
    """An arc from JSON (inline or a file), or a bare series ``y(t)`` meaning ``t -> (t, y(t))``."""
    if isinstance(source, Arc):
        return source
    if isinstance(source, dict):
        return arc_from_json(source)
    text = str(source)
    if text.lstrip().startswith("{") or Path(text).suffix == ".json" or Path(text).is_file():
        return arc_from_json(load_source(text))
    return Arc.x_normalized(1, series_from_json(text))
