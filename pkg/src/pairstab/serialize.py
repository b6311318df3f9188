"""JSON encoding for the public data types.

Rationals are strings ``"p/q"`` (or ``"p"``), Gaussian coefficients are
``{"re": ..., "im": ...}`` and matrix entries are Gaussian strings such as
``"1/2"`` or ``"1-3i"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from ._exact import Gaussian, as_fraction
from .forms import SparseForm, Variance
from .geometry import LatticePolytope
from .pairs import Certificate, PairVerdict, Status
from .torus import OnePSG, TorusFrame, as_matrix


class SchemaError(ValueError):
    """Input JSON does not match the documented schema."""


def q(x) -> str:
    return str(as_fraction(x))


def vector_to_json(v) -> list[str]:
    return [q(c) for c in v]


def vector_from_json(data) -> tuple[Fraction, ...]:
    try:
        return tuple(as_fraction(c) for c in data)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational vector {data!r}: {exc}") from None


def gaussian_to_json(c: Gaussian) -> dict:
    return {"re": q(c.re), "im": q(c.im)}


def form_to_json(f: SparseForm) -> dict:
    return {
        "vars": f.num_vars,
        "variance": f.variance.value,
        "blocks": list(f.blocks),
        "terms": [{"exps": list(e), **gaussian_to_json(c)} for e, c in f.items()],
    }


def form_from_json(data: Any) -> SparseForm:
    try:
        n = int(data["vars"])
        variance = Variance(data.get("variance", "co"))
        blocks = data.get("blocks")
        terms = []
        for t in data["terms"]:
            re_ = as_fraction(str(t.get("re", "0")))
            im_ = as_fraction(str(t.get("im", "0")))
            terms.append((tuple(int(a) for a in t["exps"]), Gaussian(re_, im_)))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad form JSON: {exc!r}") from None
    return SparseForm(n, terms, variance, blocks)


def matrix_to_json(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def matrix_from_json(data) -> tuple:
    try:
        rows = [[Gaussian.parse(str(x)) for x in row] for row in data]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad matrix JSON: {exc!r}") from None
    return as_matrix(rows)


def frame_to_json(fr: TorusFrame) -> dict:
    return {"conjugator": matrix_to_json(fr.conjugator), "description": fr.description}


def frame_from_json(data) -> TorusFrame:
    if isinstance(data, list):
        return TorusFrame(matrix_from_json(data))
    try:
        return TorusFrame(matrix_from_json(data["conjugator"]), data.get("description", ""))
    except KeyError as exc:
        raise SchemaError(f"bad frame JSON: missing {exc}") from None


def polytope_to_json(P: LatticePolytope) -> dict:
    return {
        "vertices": [vector_to_json(v) for v in P.vertices],
        "halfspaces": [{"normal": list(n), "offset": q(b)} for n, b in P.halfspaces],
        "equalities": [{"normal": list(n), "offset": q(b)} for n, b in P.equalities],
    }


def polytope_from_json(data) -> LatticePolytope:
    try:
        return LatticePolytope(
            vertices=tuple(vector_from_json(v) for v in data["vertices"]),
            halfspaces=tuple((tuple(int(c) for c in h["normal"]), as_fraction(h["offset"])) for h in data["halfspaces"]),
            equalities=tuple((tuple(int(c) for c in h["normal"]), as_fraction(h["offset"])) for h in data["equalities"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad polytope JSON: {exc!r}") from None


def verdict_to_json(v: PairVerdict) -> dict:
    cert = None
    if v.certificate is not None:
        c = v.certificate
        cert = {"frame": frame_to_json(c.frame), "u": list(c.u.u), "margin": q(c.margin)}
    return {"status": v.status.value, "tested_frames": v.tested_frames, "certificate": cert}


def verdict_from_json(data) -> PairVerdict:
    try:
        cert = None
        if data.get("certificate"):
            c = data["certificate"]
            cert = Certificate(frame_from_json(c["frame"]), OnePSG(tuple(int(x) for x in c["u"])), as_fraction(c["margin"]))
        return PairVerdict(Status(data["status"]), cert, int(data["tested_frames"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad verdict JSON: {exc!r}") from None
