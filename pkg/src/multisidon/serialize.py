"""JSON forms of fields, subspaces, families and codes.

A subspace is ``{"field": "gf(p^m; c0,...,1)", "q": q, "basis": [x, ...]}``
with each basis vector a field element in its integer encoding. Readers also
accept basis rows given as lists of F_q-coordinates.
"""

from __future__ import annotations

import json

from .construct import MonomialParams, RothCodeParams
from .errors import ParameterError
from .field import Extension, parse_field_spec
from .sidon import SubspaceFamily
from .subspace import Subspace, span_canonical


def extension_from_json(d: dict, table_cap: int | None = None) -> Extension:
    try:
        spec = d["field"]
    except KeyError:
        raise ParameterError("missing 'field'") from None
    F = parse_field_spec(spec) if table_cap is None else parse_field_spec(spec, table_cap)
    return Extension(F, d.get("q"))


def subspace_to_json(U: Subspace) -> dict:
    return {"field": U.ext.field.spec, "q": U.ext.q, "basis": list(U.rows)}


def _basis_vector(ext: Extension, row) -> int:
    if isinstance(row, int):
        return row
    if isinstance(row, list) and len(row) == ext.n and all(isinstance(c, int) and 0 <= c < ext.q for c in row):
        return ext.from_coords(row)
    raise ParameterError(f"malformed basis row {row!r}")


def subspace_from_json(d: dict, ext: Extension | None = None, strict: bool = False) -> Subspace:
    """Parse a subspace; ``strict`` rejects bases that are not already canonical."""
    if ext is None:
        ext = extension_from_json(d)
    if "basis" not in d:
        raise ParameterError("missing 'basis'")
    vecs = [_basis_vector(ext, row) for row in d["basis"]]
    U = span_canonical(ext, vecs)
    if strict and list(U.rows) != vecs:
        raise ParameterError("basis is not in canonical form")
    return U


def family_to_json(fam: SubspaceFamily) -> dict:
    return {"field": fam.ext.field.spec, "q": fam.ext.q,
            "subspaces": [subspace_to_json(U)["basis"] for U in fam]}


def family_from_json(d: dict) -> SubspaceFamily:
    ext = extension_from_json(d)
    subs = d.get("subspaces")
    if not isinstance(subs, list) or not subs:
        raise ParameterError("'subspaces' must be a nonempty list")
    out = []
    for s in subs:
        basis = s["basis"] if isinstance(s, dict) else s
        out.append(subspace_from_json({"basis": basis}, ext))
    return SubspaceFamily.of(out)


def code_from_json(d: dict) -> SubspaceFamily:
    """Generator family of a code manifest (the code itself is rebuilt)."""
    if "generators" not in d:
        raise ParameterError("missing 'generators'")
    return family_from_json({"field": d["field"], "q": d.get("q"), "subspaces": d["generators"]})


def monomial_params_from_json(d: dict) -> MonomialParams:
    ext = extension_from_json(d)
    return MonomialParams(ext, int(d["t"]), int(d["s"]), int(d["xi"]), tuple(int(m) for m in d["mus"]),
                          bool(d.get("append_subfield", False)))


def roth_params_from_json(d: dict) -> RothCodeParams:
    ext = extension_from_json(d)
    return RothCodeParams(ext, int(d["t"]), int(d["s"]), int(d["w"]), int(d["b"]),
                          int(d["gamma0"]), int(d["orbit_count"]))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}: malformed JSON ({exc})") from None
