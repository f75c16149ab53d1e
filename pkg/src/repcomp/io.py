"""JSON file formats for algebras, representations, pairs, derivations and jet models.

Scalars are decimal strings ("3", "-1/2"); plain JSON integers are accepted on input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import (AlgebraPresentation, NCPoly, PairModule, Representation, compile_quiver,
                      standard_idempotents)
from .errors import RepcompError
from .exactla import Matrix
from .field import FieldSpec
from .jets import JetModel, Poly, model_from_equations


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RepcompError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _scalar(field: FieldSpec, x) -> object:
    if isinstance(x, bool):
        raise RepcompError(f"bad scalar {x!r}")
    if isinstance(x, (int, str)):
        try:
            return field(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise RepcompError(str(exc)) from None
    raise RepcompError(f"bad scalar {x!r}: use a decimal string")


def scalar_str(x) -> str:
    return str(x)


def matrix_to_json(m: Matrix) -> list:
    return [[scalar_str(x) for x in r] for r in m.rows]


def matrix_from_json(field: FieldSpec, obj, nrows: int | None = None, ncols: int | None = None) -> Matrix:
    if not isinstance(obj, list):
        raise RepcompError("matrix must be a list of rows")
    rows = [[_scalar(field, x) for x in r] for r in obj]
    if nrows is not None and len(rows) != nrows:
        raise RepcompError(f"matrix has {len(rows)} rows, expected {nrows}")
    if not rows:
        return Matrix.zeros(field, 0, ncols or 0)
    try:
        m = Matrix(field, rows)
    except ValueError as exc:
        raise RepcompError(str(exc)) from None
    if ncols is not None and m.ncols != ncols:
        raise RepcompError(f"matrix has {m.ncols} columns, expected {ncols}")
    return m


def field_from_json(obj, override: FieldSpec | None = None) -> FieldSpec:
    if override is not None:
        return override
    try:
        return FieldSpec.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise RepcompError(f"bad field description: {exc}") from None


# ---------------------------------------------------------------- algebras

def algebra_from_json(obj: dict, field: FieldSpec | None = None) -> AlgebraPresentation:
    if not isinstance(obj, dict):
        raise RepcompError("algebra file must hold a JSON object")
    f = field_from_json(obj.get("field", {"type": "rational"}), field)
    if "quiver" in obj:
        qv = obj["quiver"]
        arrows = [(a["name"], a["src"], a["tgt"]) for a in qv.get("arrows", [])]
        rels = []
        for rel in qv.get("relations", []):
            rels.append([(_scalar(f, t.get("c", "1")), t["path"]) for t in rel])
        return compile_quiver(f, qv["vertices"], arrows, rels)
    names = obj.get("generators")
    if not isinstance(names, list) or not names:
        raise RepcompError("algebra needs a nonempty 'generators' list or a 'quiver'")
    names = [str(n) for n in names]
    rels = []
    for rel in obj.get("relations", []):
        terms = []
        for t in rel:
            w = [names.index(x) if isinstance(x, str) else int(x) for x in t["w"]]
            terms.append((_scalar(f, t.get("c", "1")), w))
        rels.append(NCPoly.from_terms(f, terms))
    idem = None
    if obj.get("idempotents"):
        gens = obj["idempotents"]["gens"]
        idem = tuple(names.index(g) if isinstance(g, str) else int(g) for g in gens)
        if len(idem) != obj["idempotents"].get("count", len(idem)):
            raise RepcompError("idempotent count does not match the listed generators")
    return AlgebraPresentation(f, tuple(names), tuple(rels), idem)


def algebra_to_json(alg: AlgebraPresentation) -> dict:
    out: dict = {"field": alg.field.to_json()}
    if alg.quiver is not None:
        q = alg.quiver
        nv = len(q.vertices)
        # user relations follow the idempotent and arrow-support ones
        auto = nv * nv + 1 + 2 * len(q.arrows)
        names = alg.generator_names
        rels = []
        for rel in alg.relations[auto:]:
            rels.append([{"c": scalar_str(c), "path": [names[i] for i in reversed(w)]} for c, w in rel.terms])
        out["quiver"] = {"vertices": list(q.vertices),
                         "arrows": [{"name": a, "src": s, "tgt": t} for a, s, t in q.arrows],
                         "relations": rels}
        return out
    out["generators"] = list(alg.generator_names)
    out["relations"] = [[{"c": scalar_str(c), "w": list(w)} for c, w in rel.terms] for rel in alg.relations]
    if alg.idempotents:
        out["idempotents"] = {"count": len(alg.idempotents), "gens": list(alg.idempotents)}
    return out


# ---------------------------------------------------------------- representations

def rep_from_json(alg: AlgebraPresentation, obj: dict) -> Representation:
    if not isinstance(obj, dict):
        raise RepcompError("representation must be a JSON object")
    f = alg.field
    dimvec = obj.get("dimvec")
    if "arrows" in obj:
        if dimvec is None:
            raise RepcompError("per-arrow representation needs 'dimvec'")
        q = alg.quiver
        if q is None:
            raise RepcompError("per-arrow representation needs a quiver algebra")
        pos = {v: k for k, v in enumerate(q.vertices)}
        blocks = {}
        for a, s, t in q.arrows:
            if a in obj["arrows"]:
                blocks[a] = matrix_from_json(f, obj["arrows"][a], dimvec[pos[t]], dimvec[pos[s]])
        unknown = set(obj["arrows"]) - {a for a, _, _ in q.arrows}
        if unknown:
            raise RepcompError(f"unknown arrows {sorted(unknown)}")
        return Representation.from_vertex_blocks(alg, dimvec, blocks)
    d = obj.get("dim", sum(dimvec) if dimvec else None)
    if d is None:
        raise RepcompError("representation needs 'dim'")
    mats_obj = obj.get("mats", {})
    std = standard_idempotents(f, dimvec) if dimvec is not None and alg.idempotents else None
    if dimvec is not None and sum(dimvec) != d:
        raise RepcompError(f"dimension vector {dimvec} does not sum to {d}")
    mats = []
    for i, name in enumerate(alg.generator_names):
        key = name if name in mats_obj else (str(i) if str(i) in mats_obj else None)
        if key is not None:
            mats.append(matrix_from_json(f, mats_obj[key], d, d))
        elif std is not None and i in alg.idempotents:
            mats.append(std[alg.idempotents.index(i)])
        else:
            raise RepcompError(f"no matrix for generator {name!r}")
    unknown = set(mats_obj) - set(alg.generator_names) - {str(i) for i in range(alg.num_generators)}
    if unknown:
        raise RepcompError(f"matrices for unknown generators {sorted(unknown)}")
    return Representation(alg, mats, d)


def rep_to_json(rho: Representation) -> dict:
    out = {"dim": rho.dim, "mats": {n: matrix_to_json(m) for n, m in zip(rho.algebra.generator_names, rho.mats)}}
    if rho.dim_vector is not None:
        out["dimvec"] = list(rho.dim_vector)
    return out


def pair_from_json(alg: AlgebraPresentation, obj: dict) -> PairModule:
    sub = rep_from_json(alg, obj["sub"])
    amb = rep_from_json(alg, obj["amb"])
    f = matrix_from_json(alg.field, obj.get("map", []), amb.dim, sub.dim) if sub.dim else Matrix.zeros(alg.field, amb.dim, 0)
    return PairModule(sub, amb, f)


def pair_to_json(pm: PairModule) -> dict:
    return {"sub": rep_to_json(pm.sub), "amb": rep_to_json(pm.amb), "map": matrix_to_json(pm.map)}


def derivation_from_json(alg: AlgebraPresentation, obj: dict, e: int, d: int) -> tuple:
    mats = obj.get("mats", obj)
    out = []
    for name in alg.generator_names:
        if name not in mats:
            raise RepcompError(f"derivation has no value on generator {name!r}")
        out.append(matrix_from_json(alg.field, mats[name], e, d) if e else Matrix.zeros(alg.field, 0, d))
    return tuple(out)


def derivation_to_json(alg: AlgebraPresentation, xi) -> dict:
    return {n: matrix_to_json(m) for n, m in zip(alg.generator_names, xi)}


# ---------------------------------------------------------------- jet models

def model_from_json(obj: dict, field: FieldSpec | None = None) -> JetModel:
    f = field_from_json(obj.get("field", {"type": "rational"}), field)
    names = obj.get("vars")
    if not isinstance(names, list):
        raise RepcompError("model needs a 'vars' list")
    n = len(names)
    eqs = []
    for k, eq in enumerate(obj.get("equations", [])):
        terms = {}
        for t in eq:
            e = tuple(int(x) for x in t["e"])
            if len(e) != n:
                raise RepcompError(f"equation {k} has an exponent vector of length {len(e)}, expected {n}")
            terms[e] = f(terms.get(e, 0) + _scalar(f, t.get("c", "1")))
        eqs.append(Poly(f, n, terms))
    base = [_scalar(f, x) for x in obj.get("base_point", ["0"] * n)]
    if len(base) != n:
        raise RepcompError("base point length differs from the variable count")
    if obj.get("centered"):
        return JetModel(f, n, eqs, tuple(base), [str(x) for x in names])
    return model_from_equations(f, eqs, base, [str(x) for x in names])


def model_to_json(model: JetModel) -> dict:
    return model.to_json()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)
