"""Plot types, their option registry, and spec validation.

One registry drives everything: capabilities() renders it for clients,
validate() enforces it, so the two can never drift apart. Adding a plot
type means adding a registry entry, nothing else.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import EvalTypeError, ParseError, UnknownNameError, ValidationError
from .expreval import infer_type
from .exprs import Expr, parse
from .table import ColumnTable


@dataclass(frozen=True)
class OptionDef:
    name: str
    kind: str  # "expr" | "filter" | "int" | "float" | "bool" | "enum"
    doc: str
    required: bool = False
    default: str | None = None  # textual, as a client would send it
    choices: tuple[str, ...] = ()
    min: float | None = None
    max: float | None = None


def _coord(name: str, doc: str) -> OptionDef:
    return OptionDef(name, "expr", doc, required=True)


_FILTER = OptionDef("filter", "filter", "row selection expression; omitted means all rows")
_PAD = OptionDef("pad", "float", "auto-range padding fraction per side",
                 default="0.02", min=0.0, max=0.45)
_SIZE = OptionDef("size", "int", "marker size in pixels (square)",
                  default="1", min=1, max=5)
_XLOG = OptionDef("xlog", "bool", "logarithmic x axis", default="false")
_YLOG = OptionDef("ylog", "bool", "logarithmic y axis", default="false")

PLOT_TYPES: dict[str, tuple[OptionDef, ...]] = {
    "plane.scatter": (
        _coord("x", "x coordinate expression"),
        _coord("y", "y coordinate expression"),
        _FILTER, _SIZE, _XLOG, _YLOG, _PAD,
    ),
    "plane.density": (
        _coord("x", "x coordinate expression"),
        _coord("y", "y coordinate expression"),
        _FILTER,
        OptionDef("binpx", "int", "bin size in pixels", default="1", min=1, max=64),
        OptionDef("colormap", "enum", "density colormap",
                  default="viridis", choices=("greys", "viridis")),
        OptionDef("logcount", "bool", "map log10(1+count) instead of count",
                  default="false"),
        _XLOG, _YLOG, _PAD,
    ),
    "plane.histogram": (
        _coord("x", "binned value expression"),
        _FILTER,
        OptionDef("nbins", "int", "number of equal-width bins",
                  default="50", min=1, max=10000),
        _XLOG, _PAD,
    ),
    "cube.scatter": (
        _coord("x", "x coordinate expression"),
        _coord("y", "y coordinate expression"),
        _coord("z", "z coordinate expression"),
        _FILTER, _SIZE, _PAD,
    ),
}


def capabilities() -> dict:
    """Stable-ordered report of every plot type and option validate() accepts."""
    types = []
    for plot_type, defs in PLOT_TYPES.items():
        options = []
        for d in defs:
            entry: dict = {
                "name": d.name,
                "kind": d.kind,
                "required": d.required,
                "default": d.default,
                "doc": d.doc,
            }
            if d.choices:
                entry["choices"] = list(d.choices)
            if d.min is not None:
                entry["min"] = d.min
            if d.max is not None:
                entry["max"] = d.max
            options.append(entry)
        types.append({"type": plot_type, "options": options})
    return {"plotTypes": types}


def registry_hash() -> str:
    """Strong validator for the capabilities payload."""
    blob = json.dumps(capabilities(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:32]


@dataclass(frozen=True)
class ValidatedPlot:
    """Executable plan: parsed expressions plus normalized style values."""

    plot_type: str
    options: dict[str, str]  # effective textual options, defaults filled in
    coords: tuple[Expr, ...]  # x[, y[, z]]
    coord_sources: tuple[str, ...]
    filter: Expr | None
    filter_source: str | None
    xscale: str
    yscale: str
    size: int = 1
    binpx: int = 1
    colormap: str = "viridis"
    logcount: bool = False
    nbins: int = 50
    pad: float = 0.02

    @property
    def is_cube(self) -> bool:
        return self.plot_type == "cube.scatter"

    @property
    def axis_names(self) -> tuple[str, ...]:
        if self.plot_type == "plane.histogram":
            return ("x",)
        if self.is_cube:
            return ("x", "y", "z")
        return ("x", "y")


def _parse_scalar(d: OptionDef, raw: str):
    if d.kind == "bool":
        if raw not in ("true", "false"):
            raise ValueError(f"expected true or false, got {raw!r}")
        return raw == "true"
    if d.kind == "enum":
        if raw not in d.choices:
            raise ValueError(f"expected one of {', '.join(d.choices)}, got {raw!r}")
        return raw
    value = int(raw) if d.kind == "int" else float(raw)
    if d.min is not None and value < d.min:
        raise ValueError(f"{value} below minimum {d.min}")
    if d.max is not None and value > d.max:
        raise ValueError(f"{value} above maximum {d.max}")
    return value


def validate(plot_type: str, options: dict[str, str], table: ColumnTable) -> ValidatedPlot:
    """Check a spec against the registry and table; raises ValidationError
    listing every bad option, not just the first."""
    if plot_type not in PLOT_TYPES:
        known = ", ".join(PLOT_TYPES)
        raise ValidationError([("type", f"unknown plot type {plot_type!r}; expected one of {known}")])

    defs = {d.name: d for d in PLOT_TYPES[plot_type]}
    issues: list[tuple[str, str]] = []
    for name in options:
        if name not in defs:
            issues.append((name, "unknown option for this plot type"))

    effective: dict[str, str] = {}
    for d in PLOT_TYPES[plot_type]:
        if d.name in options:
            effective[d.name] = options[d.name]
        elif d.required:
            issues.append((d.name, "required option missing"))
        elif d.default is not None:
            effective[d.name] = d.default

    exprs: dict[str, Expr] = {}
    scalars: dict = {}
    for name, raw in effective.items():
        d = defs[name]
        try:
            if d.kind in ("expr", "filter"):
                tree = parse(raw)
                got = infer_type(tree, table)
                want = "bool" if d.kind == "filter" else "numeric"
                if got != want:
                    raise EvalTypeError(f"expected a {want} expression, got {got}")
                exprs[name] = tree
            else:
                scalars[name] = _parse_scalar(d, raw)
        except (ParseError, UnknownNameError, EvalTypeError, ValueError) as e:
            issues.append((name, str(e)))

    if issues:
        raise ValidationError(issues)

    axis_names = (
        ("x",) if plot_type == "plane.histogram"
        else ("x", "y", "z") if plot_type == "cube.scatter"
        else ("x", "y")
    )
    return ValidatedPlot(
        plot_type=plot_type,
        options=effective,
        coords=tuple(exprs[a] for a in axis_names),
        coord_sources=tuple(effective[a] for a in axis_names),
        filter=exprs.get("filter"),
        filter_source=effective.get("filter"),
        xscale="log" if scalars.get("xlog") else "linear",
        yscale="log" if scalars.get("ylog") else "linear",
        size=scalars.get("size", 1),
        binpx=scalars.get("binpx", 1),
        colormap=scalars.get("colormap", "viridis"),
        logcount=scalars.get("logcount", False),
        nbins=scalars.get("nbins", 50),
        pad=scalars.get("pad", 0.02),
    )
