"""JSON document formats and the module-expression mini-language.

Algebra documents are strict JSON with format_version "1": unknown keys
are rejected, coefficients are written as exact strings ("1", "-1",
"2/3"), and paths are arrow-id sequences composed left to right.
Serialization is canonical, so parse followed by serialize is the
identity on serialized documents.

Module expressions name modules over a fixed algebra:

    A             the right regular module
    P1, S2        indecomposable projective / simple at a vertex
    X + Y         direct sum
    X^3           repeated direct sum
    X/tr(Y)       quotient of X by the trace of Y in X

Explicit modules are JSON objects with a dimension vector and one matrix
per arrow.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .linalg import field_from_tag
from .modules import Representation, direct_sum, projective_module, quotient_module, regular_module, simple_module, trace_submodule
from .quiver import FDAlgebra, MalformedRelation, Presentation, Quiver, build_algebra

FORMAT_VERSION = "1"


class DocumentError(ValueError):
    """Malformed document: carries a human-readable location."""


# ---------------------------------------------------------------------------
# algebra documents


@dataclass
class AlgebraDocument:
    field_tag: str
    vertices: list
    arrows: list          # [{"id", "source", "target"}]
    relations: list       # [[{"coeff", "path"}]]
    name: str | None = None

    def to_dict(self) -> dict:
        doc = {"format_version": FORMAT_VERSION}
        if self.name is not None:
            doc["name"] = self.name
        doc["field"] = self.field_tag
        doc["quiver"] = {
            "vertices": list(self.vertices),
            "arrows": [
                {"id": a["id"], "source": a["source"], "target": a["target"]} for a in self.arrows
            ],
        }
        doc["relations"] = [
            [{"coeff": t["coeff"], "path": list(t["path"])} for t in rel] for rel in self.relations
        ]
        return doc


def _require_keys(obj: dict, required, optional=(), where="document"):
    keys = set(obj)
    missing = set(required) - keys
    if missing:
        raise DocumentError(f"{where}: missing keys {sorted(missing)}")
    unknown = keys - set(required) - set(optional)
    if unknown:
        raise DocumentError(f"{where}: unknown keys {sorted(unknown)}")


def algebra_document_from_dict(doc: dict) -> AlgebraDocument:
    _require_keys(doc, ["format_version", "field", "quiver", "relations"], ["name"])
    if doc["format_version"] != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {doc['format_version']!r}")
    field_tag = doc["field"]
    field_from_tag(field_tag)  # validates
    quiver = doc["quiver"]
    _require_keys(quiver, ["vertices", "arrows"], where="quiver")
    arrows = []
    for i, a in enumerate(quiver["arrows"]):
        _require_keys(a, ["id", "source", "target"], where=f"arrow #{i}")
        if a["source"] not in quiver["vertices"] or a["target"] not in quiver["vertices"]:
            raise DocumentError(f"arrow {a['id']!r} uses an undeclared vertex")
        arrows.append(dict(a))
    relations = []
    ids = {a["id"] for a in arrows}
    for i, rel in enumerate(doc["relations"]):
        terms = []
        for j, term in enumerate(rel):
            _require_keys(term, ["coeff", "path"], where=f"relation #{i} term #{j}")
            if not isinstance(term["coeff"], str):
                raise DocumentError(f"relation #{i} term #{j}: coefficient must be an exact string")
            for aid in term["path"]:
                if aid not in ids:
                    raise DocumentError(f"relation #{i} term #{j}: unknown arrow {aid!r}")
            terms.append({"coeff": term["coeff"], "path": list(term["path"])})
        relations.append(terms)
    return AlgebraDocument(
        field_tag=field_tag,
        vertices=list(quiver["vertices"]),
        arrows=arrows,
        relations=relations,
        name=doc.get("name"),
    )


def parse_algebra(text: str) -> AlgebraDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    return algebra_document_from_dict(doc)


def serialize_algebra(doc: AlgebraDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2) + "\n"


def document_to_presentation(doc: AlgebraDocument, field=None) -> Presentation:
    field = field if field is not None else field_from_tag(doc.field_tag)
    quiver = Quiver(doc.vertices, [(a["id"], a["source"], a["target"]) for a in doc.arrows])
    relations = []
    for rel in doc.relations:
        relations.append([(field.parse(t["coeff"]), tuple(t["path"])) for t in rel])
    return Presentation(quiver, relations, field)


def document_to_algebra(doc: AlgebraDocument, path_length_cap=30, field=None) -> FDAlgebra:
    return build_algebra(document_to_presentation(doc, field), path_length_cap)


# ---------------------------------------------------------------------------
# module expressions


_TOKEN = re.compile(r"\s*(?:(?P<plus>\+)|(?P<power>\^)|(?P<int>\d+)|(?P<tr>/tr\()|(?P<close>\))|(?P<atom>[APS][\w-]*|A))")


class _ExprParser:
    def __init__(self, text: str, alg: FDAlgebra):
        self.text = text
        self.alg = alg
        self.pos = 0

    def error(self, msg):
        raise DocumentError(f"module expression {self.text!r} at position {self.pos}: {msg}")

    def peek(self):
        if self.pos >= len(self.text):
            return None, None
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            self.error("unrecognized token")
        kind = m.lastgroup
        return kind, m

    def take(self):
        kind, m = self.peek()
        if m is not None:
            self.pos = m.end()
        return kind, m

    def parse(self) -> Representation:
        rep = self.parse_sum()
        if self.pos < len(self.text) and self.text[self.pos :].strip():
            self.error("trailing input")
        return rep

    def parse_sum(self) -> Representation:
        terms = [self.parse_term()]
        while True:
            kind, m = self.peek()
            if kind == "plus":
                self.take()
                terms.append(self.parse_term())
            else:
                break
        if len(terms) == 1:
            return terms[0]
        total, _, _ = direct_sum(terms)
        return total

    def parse_term(self) -> Representation:
        rep = self.parse_atom()
        while True:
            kind, m = self.peek()
            if kind == "power":
                self.take()
                kind2, m2 = self.take()
                if kind2 != "int":
                    self.error("exponent must be an integer")
                k = int(m2.group("int"))
                if k < 1:
                    self.error("exponent must be positive")
                if k > 1:
                    rep, _, _ = direct_sum([rep] * k)
            elif kind == "tr":
                self.take()
                inner = self.parse_sum()
                kind2, _ = self.take()
                if kind2 != "close":
                    self.error("expected ')'")
                tau = trace_submodule(inner, rep)
                rep, _ = quotient_module(rep, tau)
            else:
                return rep

    def parse_atom(self) -> Representation:
        kind, m = self.take()
        if kind != "atom":
            self.error("expected a module name (A, P<vertex> or S<vertex>)")
        name = m.group("atom")
        if name == "A":
            reg, _, _ = regular_module(self.alg)
            return reg
        prefix, label = name[0], name[1:]
        vertex = self._vertex(label)
        if prefix == "P":
            return projective_module(self.alg, vertex)
        if prefix == "S":
            return simple_module(self.alg, vertex)
        self.error(f"unknown builder {name!r}")

    def _vertex(self, label: str):
        for v in self.alg.vertex_labels:
            if str(v) == label:
                return v
        self.error(f"unknown vertex {label!r}")


def parse_module_expr(text: str, alg: FDAlgebra) -> Representation:
    return _ExprParser(text, alg).parse()


def module_from_dict(doc: dict, alg: FDAlgebra) -> Representation:
    """Explicit module: {"dim_vector": {...}, "maps": {arrow_id: [[...]]}}."""
    _require_keys(doc, ["dim_vector", "maps"], where="module")
    dims = []
    for v in alg.vertex_labels:
        key = str(v)
        if key not in {str(k): k for k in doc["dim_vector"]}:
            raise DocumentError(f"dim_vector missing vertex {v!r}")
        value = None
        for k, d in doc["dim_vector"].items():
            if str(k) == key:
                value = d
        dims.append(int(value))
    from .linalg import Matrix

    gen_maps = {}
    for g in alg.generators:
        aid = alg.basis_labels[g]
        s, t = alg.src[g], alg.tgt[g]
        raw = doc["maps"].get(aid)
        if raw is None:
            continue
        rows = [[alg.field.parse(x) if isinstance(x, str) else alg.field.normalize(x) for x in row] for row in raw]
        gen_maps[g] = Matrix(alg.field, rows, dims[t])
    rep = Representation(alg, dims, gen_maps)
    if not rep.satisfies_relations():
        raise DocumentError("matrices do not satisfy the algebra's relations")
    return rep


# ---------------------------------------------------------------------------
# complex documents


def complex_from_dict(doc: dict, alg: FDAlgebra):
    """{"terms": {"-1": ["2"], "0": ["1"]},
        "differentials": {"-1": [[ [ {"coeff": "1", "path": ["beta"]} ] ]]}}

    differentials[d] is a source-slots x target-slots matrix; each entry a
    term list (empty path names a vertex idempotent via ["e", label])."""
    from .complexes import ProjComplex

    _require_keys(doc, ["terms"], ["differentials"], where="complex")
    terms = {}
    for deg, names in doc["terms"].items():
        verts = []
        for name in names:
            matched = None
            for i, v in enumerate(alg.vertex_labels):
                if str(v) == str(name).removeprefix("P"):
                    matched = i
            if matched is None:
                raise DocumentError(f"unknown projective {name!r} in complex terms")
            verts.append(matched)
        terms[int(deg)] = verts
    diffs = {}
    for deg, matrix in (doc.get("differentials") or {}).items():
        entries = {}
        for s, row in enumerate(matrix):
            for t, cell in enumerate(row):
                if not cell:
                    continue
                elem_terms = []
                for term in cell:
                    _require_keys(term, ["coeff", "path"], where=f"complex diff {deg} ({s},{t})")
                    path = term["path"]
                    if isinstance(path, list) and len(path) == 2 and path[0] == "e":
                        elem_terms.append((alg.field.parse(term["coeff"]), ("e", path[1])))
                    else:
                        elem_terms.append((alg.field.parse(term["coeff"]), list(path)))
                elem = alg.element_from_paths(
                    [(c, p if isinstance(p, tuple) else p) for c, p in elem_terms]
                )
                if elem:
                    entries[(s, t)] = elem
        if entries:
            diffs[int(deg)] = entries
    out = ProjComplex(alg, terms, diffs)
    out.validate()
    return out


def complex_to_dict(complex_) -> dict:
    alg = complex_.algebra
    terms = {str(d): [f"P{alg.vertex_labels[v]}" for v in verts] for d, verts in sorted(complex_.terms.items())}
    diffs = {}
    for d in sorted(complex_.diffs):
        n_src = len(complex_.terms[d])
        n_tgt = len(complex_.terms.get(d + 1, []))
        matrix = [[[] for _ in range(n_tgt)] for _ in range(n_src)]
        for (s, t), elem in sorted(complex_.diffs[d].items()):
            cell = []
            for b, c in sorted(elem.items()):
                word = alg.gen_words[b]
                if word:
                    path = [alg.basis_labels[g] for g in word]
                else:
                    path = ["e", alg.vertex_labels[alg.src[b]]]
                cell.append({"coeff": alg.field.format(c), "path": path})
            matrix[s][t] = cell
        diffs[str(d)] = matrix
    return {"terms": terms, "differentials": diffs}


# ---------------------------------------------------------------------------
# canonical report serialization


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"
