"""The seventeen wallpaper groups and their hereditary curves.

Rows 1-13 have genus-zero quotient curves and come with squid data; rows
14-17 are genus-one real curves without tilting objects and carry their
equations as metadata only.  Group names are the primary keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .curve_actions import orbifold_euler
from .errors import UnknownGroup
from .exact_linear import as_fraction
from .findim_algebra import AlgebraPresentation
from .squid_builder import SquidSpec, TypeReport, build_squid, classify_type, expected_squid_dim

DEFAULT_LAMBDA = 2


@dataclass(frozen=True)
class WallpaperRecord:
    index: int
    name: str
    paper_name: str
    surface: str
    cone_orders: tuple
    corner_orders: tuple
    orbifold_text: str
    curve_text: str
    base_kind: str | None
    tilting: bool
    points: tuple  # raw point JSON for the squid builder
    curve_meta: dict

    @property
    def euler_characteristic(self) -> Fraction:
        return orbifold_euler(self.surface, self.cone_orders, self.corner_orders)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "name": self.name,
            "paper_name": self.paper_name,
            "orbifold": {
                "surface": self.surface,
                "cone_orders": list(self.cone_orders),
                "corner_orders": list(self.corner_orders),
                "text": self.orbifold_text,
                "euler_characteristic": str(self.euler_characteristic),
            },
            "curve_type": self.curve_text,
            "base_kind": self.base_kind,
            "tilting": self.tilting,
        }


@dataclass(frozen=True)
class NonTilting:
    """Marker for rows whose derived category has no tilting object."""

    record: WallpaperRecord

    def to_json(self) -> dict:
        return {"index": self.record.index, "name": self.record.name, "tilting": False,
                "curve": self.record.curve_text}


@lru_cache(maxsize=1)
def load_table() -> tuple:
    text = resources.files("hecurve").joinpath("data/wallpaper.json").read_text(encoding="utf-8")
    data = json.loads(text)
    rows = []
    for r in data["rows"]:
        orb, curve = r["orbifold"], r["curve_type"]
        rows.append(WallpaperRecord(
            index=int(r["index"]),
            name=r["name"],
            paper_name=r["paper_name"],
            surface=orb["surface"],
            cone_orders=tuple(orb["cone_orders"]),
            corner_orders=tuple(orb["corner_orders"]),
            orbifold_text=orb["text"],
            curve_text=curve["text"],
            base_kind=curve.get("base_kind"),
            tilting=bool(r["tilting"]),
            points=tuple(json.dumps(p, sort_keys=True) for p in r["points"]),
            curve_meta=curve,
        ))
    return tuple(rows)


def all_records() -> list[WallpaperRecord]:
    return list(load_table())


def lookup(key) -> WallpaperRecord:
    """By index 1-17 or by name, with or without the trailing word 'group'."""
    table = load_table()
    if isinstance(key, int) or (isinstance(key, str) and key.strip().isdigit()):
        idx = int(key)
        for rec in table:
            if rec.index == idx:
                return rec
        raise UnknownGroup(f"no wallpaper row {idx}")
    text = str(key).strip().lower()
    if text.endswith(" group"):
        text = text[: -len(" group")]
    for rec in table:
        if rec.name == text:
            return rec
    raise UnknownGroup(f"unknown wallpaper group {key!r}")


def squid_spec(record: WallpaperRecord, lam=DEFAULT_LAMBDA) -> SquidSpec:
    lam = as_fraction(lam)
    points = []
    for raw in record.points:
        p = json.loads(raw)
        if "coords" in p:
            p["coords"] = [lam if x == "lambda" else x for x in p["coords"]]
        points.append(p)
    return SquidSpec.from_json({"base": {"kind": record.base_kind}, "points": points, "name": f"Pi_{record.name}"})


def build_tilting_algebra(record: WallpaperRecord, lam=DEFAULT_LAMBDA) -> AlgebraPresentation | NonTilting:
    if not record.tilting:
        return NonTilting(record)
    return build_squid(squid_spec(record, lam))


@dataclass
class WallpaperReport:
    record: WallpaperRecord
    dim: int
    expected_dim: int
    type_report: TypeReport

    @property
    def tubular(self) -> bool:
        inv = self.type_report.invariants
        return inv.symmetrized_corank == 2 and inv.coxeter_order is not None

    def to_json(self) -> dict:
        return {
            **self.record.to_json(),
            "dim": self.dim,
            "expected_dim": self.expected_dim,
            "invariants": self.type_report.invariants.to_json(),
            "type": self.type_report.kind,
            "tubular": self.tubular,
        }


def invariant_report(record: WallpaperRecord, lam=DEFAULT_LAMBDA, bound: int = 120) -> WallpaperReport | NonTilting:
    if not record.tilting:
        return NonTilting(record)
    spec = squid_spec(record, lam)
    A = build_squid(spec)
    return WallpaperReport(record, A.dim, expected_squid_dim(spec), classify_type(A, bound))


# ---------------------------------------------------------------------------
# rendering the table columns from the structured fields

_SURFACE_SYMBOL = {"sphere": "\U0001d516", "disk": "\U0001d507", "projective_plane": "\U0001d513"}
_SURFACE_NAME = {"torus": "torus", "klein_bottle": "Klein bottle", "mobius": "Möbius band", "annulus": "annulus"}
BAR = "̄"


def orbifold_text(surface: str, cone_orders, corner_orders) -> str:
    if surface in _SURFACE_NAME:
        return _SURFACE_NAME[surface]
    parts = [str(n) for n in cone_orders] + [f"{m}{BAR}" for m in corner_orders]
    return f"{_SURFACE_SYMBOL[surface]}(" + ", ".join(parts) + ")"


def curve_type_text(base_kind: str, weights) -> str:
    """weights: iterable of (weight, bar); unbarred entries first, each group ascending."""
    ordered = sorted(weights, key=lambda item: (item[1], item[0]))
    return f"X_{base_kind}(" + ", ".join(f"{w}{BAR if bar else ''}" for w, bar in ordered) + ")"


def record_weights(record: WallpaperRecord) -> list:
    return [(int(p["weight"]), bool(p["bar"])) for p in map(json.loads, record.points)]


def consistency_report(record: WallpaperRecord) -> dict:
    """Cross-check the stored texts against the structured columns and the squid points."""
    out = {
        "index": record.index,
        "orbifold_text_ok": orbifold_text(record.surface, record.cone_orders, record.corner_orders)
        == record.orbifold_text,
        "euler_zero": record.euler_characteristic == 0,
    }
    if record.tilting:
        ws = record_weights(record)
        out["curve_text_ok"] = curve_type_text(record.base_kind, ws) == record.curve_text
        # cone points of the orbifold become unbarred weights, corners barred ones
        out["weights_match_orbifold"] = sorted(ws) == sorted(
            [(n, False) for n in record.cone_orders] + [(m, True) for m in record.corner_orders])
    else:
        meta = record.curve_meta
        out["curve_text_ok"] = record.curve_text == f"Proj({meta['field']}[x,y,z]/({meta['equation']}))"
        out["weights_match_orbifold"] = not record.cone_orders and not record.corner_orders
    out["ok"] = all(v for k, v in out.items() if k != "index")
    return out
