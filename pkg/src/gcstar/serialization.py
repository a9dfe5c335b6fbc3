"""JSON file formats for groupoids, arrow functions, band operators, families.

All formats are plain JSON.  Units are strings in files; arrow ids are
integers.  Complex numbers are encoded as [real, imag] pairs (bare reals are
accepted when loading).
"""

from __future__ import annotations

import json
import os

from .bandops import BandOperator, Diagonal
from .convolution import ArrowFunction
from .errors import InputError
from .gluing import GluingFamily
from .groupoid import FiniteGroupoid, GroupoidMorphism, reduction
from .models import ModelOperatorSpec


def _complex_out(z):
    z = complex(z)
    return [z.real, z.imag]


def _complex_in(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"cannot read {v!r} as a complex number")


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def dump_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


# -- groupoids ----------------------------------------------------------------


def groupoid_to_dict(G):
    return {
        "units": [str(x) for x in G.units],
        "arrows": [{"id": g, "dom": str(G.dom[g]), "ran": str(G.ran[g])}
                   for g in G.arrows],
        "inverse": [[g, G.inverse[g]] for g in G.arrows],
        "compose": [[g, h, k] for (g, h), k in sorted(G.compose_table.items())],
        "unit_arrows": {str(x): a for x, a in sorted(G.unit_arrow.items(),
                                                     key=lambda t: str(t[0]))},
    }


def groupoid_from_dict(data):
    try:
        units = [str(x) for x in data["units"]]
        dom = {int(rec["id"]): str(rec["dom"]) for rec in data["arrows"]}
        ran = {int(rec["id"]): str(rec["ran"]) for rec in data["arrows"]}
        inverse = {int(g): int(gi) for g, gi in data["inverse"]}
        compose = {(int(g), int(h)): int(k) for g, h, k in data["compose"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed groupoid document: {exc}") from None
    if "unit_arrows" in data:
        unit_arrow = {str(x): int(a) for x, a in data["unit_arrows"].items()}
    else:
        # infer: the unit at x is the unique idempotent loop at x
        unit_arrow = {}
        for g in dom:
            if dom[g] == ran[g] and compose.get((g, g)) == g:
                if dom[g] in unit_arrow:
                    raise InputError(f"several idempotent loops at {dom[g]!r}; "
                                     f"list unit_arrows explicitly")
                unit_arrow[dom[g]] = g
        missing = set(units) - set(unit_arrow)
        if missing:
            raise InputError(f"cannot infer unit arrows for {sorted(missing)}")
    return FiniteGroupoid(units, dom, ran, inverse, unit_arrow, compose)


def save_groupoid(path, G):
    dump_json(path, groupoid_to_dict(G))


def load_groupoid(path):
    return groupoid_from_dict(load_json(path))


# -- unit subsets / covers ------------------------------------------------------


def load_cover(path):
    data = load_json(path)
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise InputError("a cover document is a list of unit lists")
    return [frozenset(str(x) for x in c) for c in data]


# -- arrow functions -------------------------------------------------------------


def save_arrow_function(path, f):
    dump_json(path, [[g, v.real, v.imag] for g, v in sorted(f.values.items())])


def load_arrow_function(path, G):
    data = load_json(path)
    try:
        values = {int(g): complex(float(re), float(im)) for g, re, im in data}
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed arrow function document: {exc}") from None
    return ArrowFunction(G, values)


# -- band operators ---------------------------------------------------------------


def band_operator_to_dict(A):
    return {
        "bandwidth": A.bandwidth,
        "diagonals": {
            str(k): {
                "limit_minus": _complex_out(d.limit_minus),
                "limit_plus": _complex_out(d.limit_plus),
                "core": [[i, v.real, v.imag] for i, v in d.core],
            }
            for k, d in sorted(A.diagonals.items())
        },
    }


def band_operator_from_dict(data):
    try:
        diags = {}
        for k, rec in data["diagonals"].items():
            core = tuple((int(i), complex(float(re), float(im)))
                         for i, re, im in rec.get("core", []))
            diags[int(k)] = Diagonal(_complex_in(rec["limit_minus"]),
                                     _complex_in(rec["limit_plus"]), core)
        A = BandOperator(diags)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed band operator document: {exc}") from None
    if "bandwidth" in data and int(data["bandwidth"]) != A.bandwidth:
        raise InputError("stated bandwidth disagrees with the diagonals")
    return A


def save_band_operator(path, A):
    dump_json(path, band_operator_to_dict(A))


def load_band_operator(path):
    return band_operator_from_dict(load_json(path))


# -- model specs --------------------------------------------------------------------


def model_spec_from_dict(data):
    try:
        return ModelOperatorSpec(
            geometry=str(data["geometry"]),
            coefficients=tuple(_complex_in(c) for c in data["coefficients"]),
            r=float(data.get("r", 2.0)),
            n=int(data.get("n", 64)),
            h=float(data.get("h", 0.1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed model document: {exc}") from None


def load_model_spec(path):
    return model_spec_from_dict(load_json(path))


# -- gluing families ------------------------------------------------------------------


def gluing_family_to_dict(family):
    return {
        "cover": [sorted(str(x) for x in U) for U in family.cover],
        "pieces": [groupoid_to_dict(piece) for piece in family.pieces],
        "isos": [{"src": i, "dst": j,
                  "map": sorted([g, img] for g, img in phi.arrow_map.items())}
                 for (i, j), phi in sorted(family.isos.items())],
    }


def gluing_family_from_dict(data, base_dir="."):
    try:
        cover = [frozenset(str(x) for x in U) for U in data["cover"]]
        pieces = []
        for rec in data["pieces"]:
            if isinstance(rec, str):
                pieces.append(load_groupoid(os.path.join(base_dir, rec)))
            else:
                pieces.append(groupoid_from_dict(rec))
        isos = {}
        for rec in data["isos"]:
            i, j = int(rec["src"]), int(rec["dst"])
            arrow_map = {int(g): int(img) for g, img in rec["map"]}
            overlap = cover[i] & cover[j]
            src = reduction(pieces[i], overlap)
            dst = reduction(pieces[j], overlap)
            unit_map = {}
            for g, img in arrow_map.items():
                if src.is_unit_arrow(g):
                    if img not in dst.dom or not dst.is_unit_arrow(img):
                        raise InputError(
                            f"overlap map ({i},{j}) sends the unit arrow {g} "
                            f"to a non-unit arrow")
                    unit_map[src.dom[g]] = dst.dom[img]
            if set(unit_map) != set(src.units):
                raise InputError(
                    f"overlap map ({i},{j}) does not cover the overlap units")
            isos[(i, j)] = GroupoidMorphism(src, dst, unit_map, arrow_map)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed gluing document: {exc}") from None
    return GluingFamily(cover, pieces, isos)


def save_gluing_family(path, family):
    dump_json(path, gluing_family_to_dict(family))


def load_gluing_family(path):
    return gluing_family_from_dict(load_json(path), base_dir=os.path.dirname(path) or ".")
