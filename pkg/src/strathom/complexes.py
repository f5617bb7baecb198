"""Bounded complexes of projectives: minimization, length, Hom data.

A ProjComplex stores, per cohomological degree, a list of summand
vertices (each summand an indecomposable projective) and differentials
whose (s, t) entries are algebra elements of e_{v_t} A e_{v_s}, acting by
left multiplication P_{v_s} -> P_{v_t}.  Differentials raise degree.

Minimization cancels invertible entries between summands by Gaussian
elimination on the complex; the result has no isomorphism components and
is the unique minimal representative up to isomorphism.
"""

from __future__ import annotations

from .linalg import Matrix
from .modules import ModuleMorphism, Representation, direct_sum, projective_module, zero_module
from .quiver import FDAlgebra


class ProjComplex:
    def __init__(self, algebra: FDAlgebra, terms: dict[int, list], diffs: dict[int, dict], minimal=False):
        """terms: degree -> list of vertex positions;
        diffs: degree -> {(s_index, t_index): element dict} mapping the
        degree-d term to the degree-(d+1) term."""
        self.algebra = algebra
        self.terms = {d: list(v) for d, v in terms.items() if v}
        self.diffs = {}
        for d, entries in diffs.items():
            kept = {k: dict(e) for k, e in entries.items() if e}
            if kept:
                self.diffs[d] = kept
        self.minimal = minimal

    def degrees(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def length(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        return degs[-1] - degs[0]

    def copy(self):
        return ProjComplex(self.algebra, self.terms, self.diffs, self.minimal)

    def validate(self):
        """Entry endpoints and d∘d = 0, checked exactly."""
        alg = self.algebra
        for d, entries in self.diffs.items():
            src_term = self.terms.get(d, [])
            tgt_term = self.terms.get(d + 1, [])
            for (s, t), elem in entries.items():
                if s >= len(src_term) or t >= len(tgt_term):
                    raise ValueError(f"differential entry out of range at degree {d}")
                v_s, v_t = src_term[s], tgt_term[t]
                for b in elem:
                    if alg.src[b] != v_t or alg.tgt[b] != v_s:
                        raise ValueError(
                            f"entry at degree {d} ({s}->{t}) is not in e_t A e_s"
                        )
        for d in list(self.diffs):
            if d + 1 not in self.diffs:
                continue
            first = self.diffs[d]
            second = self.diffs[d + 1]
            n_mid = len(self.terms.get(d + 1, []))
            n_out = len(self.terms.get(d + 2, []))
            for s in range(len(self.terms.get(d, []))):
                for u in range(n_out):
                    acc: dict = {}
                    for t in range(n_mid):
                        e1 = first.get((s, t))
                        e2 = second.get((t, u))
                        if e1 and e2:
                            acc = self.algebra.elem_add(acc, self.algebra.elem_mul(e2, e1))
                    if acc:
                        raise ValueError(f"d∘d != 0 at degree {d} ({s}->{u})")
        return True

    # -- realization as representations

    def realize(self):
        """(terms as representations, differentials as morphisms)."""
        alg = self.algebra
        reps = {}
        slot_reps = {}
        for d, verts in self.terms.items():
            projs = [projective_module(alg, alg.vertex_labels[v]) for v in verts]
            total, injections, projections = direct_sum(projs)
            reps[d] = total
            slot_reps[d] = (projs, injections, projections)
        morphs = {}
        from .modules import left_multiplication_morphism

        for d, entries in self.diffs.items():
            src_total = reps[d]
            tgt_total = reps.get(d + 1)
            if tgt_total is None:
                continue
            projs_s, inj_s, proj_s = slot_reps[d]
            projs_t, inj_t, proj_t = slot_reps[d + 1]
            total_morph = ModuleMorphism.zero(src_total, tgt_total)
            for (s, t), elem in entries.items():
                v_s = self.terms[d][s]
                v_t = self.terms[d + 1][t]
                piece = left_multiplication_morphism(
                    alg, elem, v_s, v_t, proj_src=projs_s[s], proj_tgt=projs_t[t]
                )
                total_morph = total_morph + proj_s[s].then(piece).then(inj_t[t])
            morphs[d] = total_morph
        return reps, morphs

    def homology_dims(self) -> dict[int, int]:
        """dim H^n for every degree in the support window."""
        reps, morphs = self.realize()
        out = {}
        degs = self.degrees()
        if not degs:
            return out
        for d in range(degs[0], degs[-1] + 1):
            rep = reps.get(d)
            if rep is None:
                continue
            total = rep.total_dim
            incoming = morphs.get(d - 1)
            outgoing = morphs.get(d)
            rank_in = sum(b.rank for b in incoming.blocks) if incoming is not None else 0
            rank_out = sum(b.rank for b in outgoing.blocks) if outgoing is not None else 0
            out[d] = total - rank_in - rank_out
        return out

    def hom_to_regular_dims(self) -> dict[int, int]:
        """dim Hom(X, A[n]) for all n: cohomology of the dual complex
        Hom(X^{-m}, A) with entries acting by right multiplication."""
        alg = self.algebra
        field = alg.field
        # coordinate space at degree m: sum over slots s of X^{-m} of A e_{v_s}
        def comp_basis(deg):
            verts = self.terms.get(deg, [])
            slots = []
            for s, v in enumerate(verts):
                members = [b for b in range(alg.dim) if alg.tgt[b] == v]
                slots.append(members)
            return slots

        out = {}
        degs = self.degrees()
        if not degs:
            return out
        mats = {}
        # delta^m: C^m -> C^{m+1} with C^m built on X^{-m}: (delta f)_r = sum_s f_s * d_{r,s}
        for m in range(-degs[-1], -degs[0] + 1):
            src_deg = -m          # slots of X^{-m}
            tgt_deg = -m - 1      # slots of X^{-m-1}
            entries = self.diffs.get(tgt_deg, {})
            src_slots = comp_basis(src_deg)
            tgt_slots = comp_basis(tgt_deg)
            if not src_slots or not tgt_slots:
                continue
            src_off = []
            run = 0
            for members in src_slots:
                src_off.append(run)
                run += len(members)
            src_dim = run
            tgt_off = []
            run = 0
            for members in tgt_slots:
                tgt_off.append(run)
                run += len(members)
            tgt_dim = run
            rows = []
            for s, members in enumerate(src_slots):
                for b in members:
                    row = [field.zero] * tgt_dim
                    for r in range(len(tgt_slots)):
                        elem = entries.get((r, s))
                        if not elem:
                            continue
                        prod = alg.elem_mul({b: field.one}, elem)
                        for k, c in prod.items():
                            pos = tgt_slots[r].index(k)
                            idx = tgt_off[r] + pos
                            row[idx] = field.add(row[idx], c)
                    rows.append(row)
            mats[m] = Matrix(field, rows, tgt_dim, _normalized=True)
        for m in range(-degs[-1], -degs[0] + 1):
            verts = self.terms.get(-m, [])
            dim_m = sum(len(members) for members in comp_basis(-m))
            if not verts:
                continue
            rank_out = mats[m].rank if m in mats else 0
            rank_in = mats[m - 1].rank if (m - 1) in mats else 0
            out[m] = dim_m - rank_out - rank_in
        return out


def _entry_invertible(alg: FDAlgebra, elem: dict, vertex: int) -> dict | None:
    """If the left-multiplication P_v -> P_v by elem is invertible,
    return the inverse element; else None."""
    members = [b for b in range(alg.dim) if alg.src[b] == vertex]
    pos = {b: i for i, b in enumerate(members)}
    field = alg.field
    rows = []
    for b in members:
        prod = alg.elem_mul(elem, {b: field.one})
        row = [field.zero] * len(members)
        for k, c in prod.items():
            row[pos[k]] = c
        rows.append(row)
    mat = Matrix(field, rows, len(members), _normalized=True)
    if mat.rank != len(members):
        return None
    # inverse element y with y * elem = e_v: solve on the idempotent's row
    e_v = alg.idempotent_index[vertex]
    target = [field.one if b == e_v else field.zero for b in members]
    sol = mat.transpose().solve_right(Matrix(field, [[x] for x in target], 1, _normalized=True))
    if sol is None:
        return None
    inv_elem = {}
    for i, b in enumerate(members):
        c = sol.entry(i, 0)
        if c != field.zero:
            inv_elem[b] = c
    return inv_elem


def minimize_complex(complex_: ProjComplex) -> tuple[ProjComplex, int]:
    """Homotopy-minimal representative and its length.

    Scans degrees ascending, then source and target summand indices, and
    cancels each invertible entry by Gaussian elimination on the complex;
    repeats until no entry is an isomorphism between summands.
    """
    alg = complex_.algebra
    terms = {d: list(v) for d, v in complex_.terms.items()}
    diffs = {d: {k: dict(e) for k, e in ent.items()} for d, ent in complex_.diffs.items()}

    def find_unit():
        for d in sorted(diffs):
            src_term = terms.get(d, [])
            tgt_term = terms.get(d + 1, [])
            for s in range(len(src_term)):
                for t in range(len(tgt_term)):
                    elem = diffs[d].get((s, t))
                    if not elem:
                        continue
                    if src_term[s] != tgt_term[t]:
                        continue
                    inv = _entry_invertible(alg, elem, src_term[s])
                    if inv is not None:
                        return d, s, t, inv
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        d, s0, t0, inv = hit
        src_term = terms[d]
        tgt_term = terms[d + 1]
        entries = diffs.get(d, {})
        # Gaussian update on remaining entries of this differential:
        # new_{s,t} = old_{s,t} - old_{s0,t} * inv * old_{s,t0}
        new_entries = {}
        for s in range(len(src_term)):
            if s == s0:
                continue
            for t in range(len(tgt_term)):
                if t == t0:
                    continue
                base = entries.get((s, t), {})
                a = entries.get((s, t0))
                b = entries.get((s0, t))
                if a and b:
                    corr = alg.elem_mul(b, alg.elem_mul(inv, a))
                    base = alg.elem_add(base, {k: alg.field.neg(c) for k, c in corr.items()})
                if base:
                    new_entries[(s, t)] = base
        # drop summand s0 in degree d and t0 in degree d+1; reindex
        smap = {}
        new_src = []
        for s in range(len(src_term)):
            if s == s0:
                continue
            smap[s] = len(new_src)
            new_src.append(src_term[s])
        tmap = {}
        new_tgt = []
        for t in range(len(tgt_term)):
            if t == t0:
                continue
            tmap[t] = len(new_tgt)
            new_tgt.append(tgt_term[t])
        diffs[d] = {(smap[s], tmap[t]): e for (s, t), e in new_entries.items()}
        if not diffs[d]:
            del diffs[d]
        # incoming differential: drop column s0
        if d - 1 in diffs:
            diffs[d - 1] = {
                (s, smap[t]): e for (s, t), e in diffs[d - 1].items() if t != s0
            }
            if not diffs[d - 1]:
                del diffs[d - 1]
        # outgoing differential: drop row t0
        if d + 1 in diffs:
            diffs[d + 1] = {
                (tmap[s], t): e for (s, t), e in diffs[d + 1].items() if s != t0
            }
            if not diffs[d + 1]:
                del diffs[d + 1]
        if new_src:
            terms[d] = new_src
        else:
            del terms[d]
        if new_tgt:
            terms[d + 1] = new_tgt
        else:
            del terms[d + 1]

    out = ProjComplex(alg, terms, diffs, minimal=True)
    return out, out.length()


def stalk_complex(alg: FDAlgebra, vertex_label, degree=0) -> ProjComplex:
    v = alg.vertex_position(vertex_label)
    return ProjComplex(alg, {degree: [v]}, {})
