"""Bundled example algebras with their standard tilting data.

Each fixture ships as a strict algebra document plus, where meaningful,
the standard tilting module with an explicit coresolution, a list of
indecomposable modules, staircase complexes, and headline expected
values re-checked by `strathom fixtures --verify`.

Conventions: right modules, paths composed left to right, and arrow
directions chosen so that the classical displayed projectives come out
verbatim (the two-vertex fixtures have alpha: 2->1 and beta: 1->2, the
chain FX-A3 has vertex 1 as its sink).
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import ProjComplex
from .formats import AlgebraDocument, algebra_document_from_dict, document_to_algebra
from .linalg import QQ, Matrix, field_from_tag
from .modules import (
    ModuleMorphism,
    Representation,
    direct_sum,
    left_multiplication_morphism,
    morphism_parts,
    projective_module,
    regular_module,
    simple_module,
    zero_module,
)
from .quiver import FDAlgebra, Presentation, Quiver, build_algebra
from .tilting import SES


FIXTURE_NAMES = ("FX-A2", "FX-A3", "FX-KRON", "FX-41", "FX-42", "FX-43", "FX-CAN222")


def _doc(name, vertices, arrows, relations):
    return {
        "format_version": "1",
        "name": name,
        "field": "Q",
        "quiver": {
            "vertices": vertices,
            "arrows": [{"id": a, "source": s, "target": t} for a, s, t in arrows],
        },
        "relations": relations,
    }


_DOCS = {
    "FX-A2": _doc("FX-A2", [1, 2], [("a", 1, 2)], []),
    "FX-A3": _doc("FX-A3", [1, 2, 3], [("alpha", 2, 1), ("beta", 3, 2)], []),
    "FX-KRON": _doc("FX-KRON", [1, 2], [("a", 1, 2), ("b", 1, 2)], []),
    "FX-41": _doc(
        "FX-41",
        [1, 2, 3],
        [("alpha", 1, 2), ("beta", 2, 1), ("gamma", 2, 3), ("delta", 3, 2)],
        [
            [{"coeff": "1", "path": ["alpha", "gamma"]}],
            [{"coeff": "1", "path": ["delta", "beta"]}],
            [
                {"coeff": "1", "path": ["beta", "alpha"]},
                {"coeff": "-1", "path": ["gamma", "delta"]},
            ],
            [{"coeff": "1", "path": ["delta", "gamma"]}],
        ],
    ),
    "FX-42": _doc(
        "FX-42",
        [1, 2],
        [("alpha", 2, 1), ("beta", 1, 2)],
        [[{"coeff": "1", "path": ["alpha", "beta", "alpha"]}]],
    ),
    "FX-43": _doc(
        "FX-43",
        [1, 2],
        [("alpha", 2, 1), ("beta", 1, 2)],
        [[{"coeff": "1", "path": ["beta", "alpha"]}]],
    ),
    "FX-CAN222": _doc(
        "FX-CAN222",
        [1, 2, 3, 4, 5],
        [("x1", 1, 2), ("x2", 1, 3), ("x3", 1, 4), ("y1", 2, 5), ("y2", 3, 5), ("y3", 4, 5)],
        [
            [
                {"coeff": "1", "path": ["x3", "y3"]},
                {"coeff": "-1", "path": ["x1", "y1"]},
                {"coeff": "1", "path": ["x2", "y2"]},
            ]
        ],
    ),
}


def fixture_document(name: str) -> AlgebraDocument:
    if name not in _DOCS:
        raise KeyError(f"unknown fixture {name!r} (have {', '.join(FIXTURE_NAMES)})")
    return algebra_document_from_dict(_DOCS[name])


_build_cache: dict = {}


def build_fixture(name: str, field=None, path_length_cap: int = 30) -> FDAlgebra:
    field = field if field is not None else QQ
    key = (name, field.tag(), path_length_cap)
    if key not in _build_cache:
        _build_cache[key] = document_to_algebra(fixture_document(name), path_length_cap, field)
    return _build_cache[key]


def dual_numbers(field=None) -> FDAlgebra:
    """One loop with a square-zero relation: k[x]/(x^2)."""
    field = field if field is not None else QQ
    quiver = Quiver([1], [("x", 1, 1)])
    pres = Presentation(quiver, [[(field.one, ("x", "x"))]], field)
    return build_algebra(pres)


# ---------------------------------------------------------------------------
# standard tilting data


@dataclass
class TiltingData:
    label: str
    module: Representation
    ses: SES


def default_tilting(name: str, alg: FDAlgebra) -> TiltingData | None:
    """The fixture's standard tilting module and coresolution."""
    if name == "FX-42":
        P1 = projective_module(alg, 1)
        P2 = projective_module(alg, 2)
        reg, injs, projs = regular_module(alg)
        t0, t0_injs, _ = direct_sum([P1, P2, P2])
        f = projs[0].then(t0_injs[0]) + projs[1].then(t0_injs[1])
        parts = morphism_parts(f)
        ses = SES(f, parts.cokernel_projection)
        ses.validate()
        return TiltingData("A", reg, ses)
    if name == "FX-43":
        P1 = projective_module(alg, 1)
        P2 = projective_module(alg, 2)
        S2 = simple_module(alg, 2)
        reg, injs, projs = regular_module(alg)
        t0, t0_injs, _ = direct_sum([P2, P2])
        alpha = alg.element_from_paths([(1, ["alpha"])])
        iota = left_multiplication_morphism(alg, alpha, 0, 1, proj_src=P1, proj_tgt=P2)
        f = projs[0].then(iota).then(t0_injs[0]) + projs[1].then(t0_injs[1])
        parts = morphism_parts(f)
        ses = SES(f, parts.cokernel_projection)
        ses.validate()
        t, _, _ = direct_sum([P2, S2])
        return TiltingData("P2+S2", t, ses)
    if name == "FX-41":
        P1 = projective_module(alg, 1)
        P2 = projective_module(alg, 2)
        P3 = projective_module(alg, 3)
        reg, injs, projs = regular_module(alg)
        t0, t0_injs, _ = direct_sum([P1, P2, P2])
        gamma = alg.element_from_paths([(1, ["gamma"])])
        iota = left_multiplication_morphism(alg, gamma, 2, 1, proj_src=P3, proj_tgt=P2)
        f = projs[0].then(t0_injs[0]) + projs[1].then(t0_injs[1]) + projs[2].then(iota).then(t0_injs[2])
        parts = morphism_parts(f)
        t1 = parts.cokernel
        ses = SES(f, parts.cokernel_projection)
        ses.validate()
        t, _, _ = direct_sum([P1, P2, t1])
        return TiltingData("P1+P2+P2/tr(P3)", t, ses)
    if name == "FX-A3":
        P1 = projective_module(alg, 1)
        P2 = projective_module(alg, 2)
        P3 = projective_module(alg, 3)
        S3 = simple_module(alg, 3)
        reg, injs, projs = regular_module(alg)
        t0, t0_injs, _ = direct_sum([P1, P3, P3])
        beta = alg.element_from_paths([(1, ["beta"])])
        iota = left_multiplication_morphism(alg, beta, 1, 2, proj_src=P2, proj_tgt=P3)
        f = projs[0].then(t0_injs[0]) + projs[1].then(iota).then(t0_injs[1]) + projs[2].then(t0_injs[2])
        parts = morphism_parts(f)
        ses = SES(f, parts.cokernel_projection)
        ses.validate()
        t, _, _ = direct_sum([P1, P3, S3])
        return TiltingData("P1+P3+S3", t, ses)
    # regular module with the identity coresolution
    reg, _, _ = regular_module(alg)
    zero = zero_module(alg)
    ses = SES(ModuleMorphism.identity(reg), ModuleMorphism.zero(reg, zero))
    ses.validate()
    return TiltingData("A", reg, ses)


# ---------------------------------------------------------------------------
# staircase complexes (FX-43)


def staircase_complex(alg: FDAlgebra, m: int) -> ProjComplex:
    """P(2) -> P(2) -> ... -> P(2) -> P(1) with m radical differentials,
    supported in degrees -m..0; already homotopy-minimal."""
    if m < 1:
        raise ValueError("length must be >= 1")
    ab = alg.element_from_paths([(1, ["alpha", "beta"])])
    beta = alg.element_from_paths([(1, ["beta"])])
    v1 = alg.vertex_position(1)
    v2 = alg.vertex_position(2)
    terms = {}
    diffs = {}
    for i in range(m):
        terms[-m + i] = [v2]
    terms[0] = [v1]
    for i in range(m - 1):
        diffs[-m + i] = {(0, 0): ab}
    diffs[-1] = {(0, 0): beta}
    out = ProjComplex(alg, terms, diffs)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# indecomposable module lists


def indecomposable_modules(name: str, alg: FDAlgebra):
    """(label, module) pairs: complete for the finite-type fixtures, a
    cross-section of the three components for the Kronecker quiver."""
    field = alg.field

    def kron(d1, d2, a_rows, b_rows):
        gens = {}
        gen_a = [g for g in alg.generators if alg.basis_labels[g] == "a"][0]
        gen_b = [g for g in alg.generators if alg.basis_labels[g] == "b"][0]
        gens[gen_a] = Matrix(field, a_rows, d2)
        gens[gen_b] = Matrix(field, b_rows, d2)
        return Representation(alg, (d1, d2), gens)

    if name == "FX-A2":
        return [
            ("P1", projective_module(alg, 1)),
            ("S1", simple_module(alg, 1)),
            ("S2", simple_module(alg, 2)),
        ]
    if name == "FX-A3":
        from .modules import quotient_module, trace_submodule

        P3 = projective_module(alg, 3)
        socle = trace_submodule(simple_module(alg, 1), P3)
        N32, _ = quotient_module(P3, socle)
        return [
            ("S1", simple_module(alg, 1)),
            ("S2", simple_module(alg, 2)),
            ("S3", simple_module(alg, 3)),
            ("P2", projective_module(alg, 2)),
            ("P3", projective_module(alg, 3)),
            ("P3/tr(S1)", N32),
        ]
    if name == "FX-KRON":
        return [
            ("S2", simple_module(alg, 2)),
            ("P1", projective_module(alg, 1)),
            ("R(2,3)", kron(2, 3, [[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]])),
            ("S1", kron(1, 0, [[]], [[]])),
            ("I(2,1)", kron(2, 1, [[1], [0]], [[0], [1]])),
            ("T(1,1;0)", kron(1, 1, [[1]], [[0]])),
            ("T(1,1;1)", kron(1, 1, [[1]], [[1]])),
            ("T(1,1;inf)", kron(1, 1, [[0]], [[1]])),
        ]
    raise KeyError(f"no bundled indecomposable list for {name}")


# ---------------------------------------------------------------------------
# headline expectations for `fixtures --verify`


EXPECTED = {
    "FX-A2": {"dimension": 3, "gldim": ("finite", 1), "stratification_leaves": 2},
    "FX-A3": {"dimension": 6, "gldim": ("finite", 1), "stratification_leaves": 3,
              "headline": {"ell_dim": 7, "ranks": (3, 2, 1)}},
    "FX-KRON": {"dimension": 4, "gldim": ("finite", 1), "stratification_leaves": 2},
    "FX-41": {"dimension": 9, "gldim": ("finite", 4),
              "headline": {"homological_epi": False, "ell_dim": 7}},
    "FX-42": {"dimension": 7, "gldim": ("infinite", None),
              "headline": {"homological_epi": True, "ell_dim": 1, "inner_pd_infinite": True}},
    "FX-43": {"dimension": 5, "gldim": ("finite", 2),
              "headline": {"ranks": (2, 1, 1), "outer_dim": 4}},
    "FX-CAN222": {"dimension": 13, "gldim": ("finite", 2), "stratification_leaves": 5},
}


def verify_fixture(name: str, cap: int = 20):
    """Recompute the headline values; returns a list of (check, ok)."""
    from .homology import global_dim, proj_dim
    from .tilting import (
        FailureReport,
        RecollementDatum,
        ell,
        induced_epi,
        is_homological_epi,
        recollement_from_tilting,
        stratify,
    )

    alg = build_fixture(name)
    expected = EXPECTED[name]
    checks = []
    checks.append(("dimension", alg.dim == expected["dimension"]))
    gd = global_dim(alg, cap)
    kind, value = expected["gldim"]
    checks.append(("gldim", gd.kind == kind and (value is None or gd.value == value)))
    if "stratification_leaves" in expected:
        tree = stratify(alg)
        leaves = tree.leaves()
        ok = len(leaves) == expected["stratification_leaves"] and all(sig[0] == 1 for sig in leaves)
        checks.append(("stratification", ok))
    headline = expected.get("headline")
    if headline:
        data = default_tilting(name, alg)
        t0, t1 = data.ses.middle, data.ses.right
        ellA, unit = ell(alg, t0, t1, data.ses, cap)
        if "ell_dim" in headline:
            checks.append(("ell-dimension", ellA.total_dim == headline["ell_dim"]))
        result = recollement_from_tilting(alg, data.module, data.ses, cap)
        if "ranks" in headline:
            checks.append(
                ("recollement-ranks", isinstance(result, RecollementDatum) and result.ranks == headline["ranks"])
            )
        if "outer_dim" in headline:
            checks.append(
                ("outer-dimension", isinstance(result, RecollementDatum) and result.outer.dim == headline["outer_dim"])
            )
        if headline.get("homological_epi") is False:
            ok = isinstance(result, FailureReport) and result.stage == "homological-epimorphism"
            checks.append(("homological-epi-fails", ok))
        if headline.get("homological_epi") is True and "inner_pd_infinite" in headline:
            ok = isinstance(result, FailureReport) and result.stage == "pd-over-inner"
            checks.append(("pd-over-inner-fails", ok))
    return checks
