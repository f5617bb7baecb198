"""Minimal projective resolutions, Ext, Tor and dimension verdicts.

Resolutions are built from minimal covers, so every differential lands in
the radical and Ext against a simple reads multiplicities directly.
Infinite projective dimension is certified only by syzygy periodicity
(a syzygy isomorphic to an earlier one); anything else at the cap stays
Unknown.  Ext and Tor against a resolution use the identity
Hom(e_v A, N) = N_v, so no linear systems are solved for them.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .linalg import Matrix
from .modules import (
    ModuleMorphism,
    ProjectiveCover,
    Representation,
    is_isomorphic,
    projective_cover,
    morphism_parts,
    radical_submodule,
    simple_module,
    zero_module,
)
from .quiver import FDAlgebra


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Verdict:
    """Certified(true/false) or Unknown, with an optional witness note."""

    certified: bool
    value: bool | None
    witness: str = ""

    @classmethod
    def certified_true(cls, witness=""):
        return cls(True, True, witness)

    @classmethod
    def certified_false(cls, witness=""):
        return cls(True, False, witness)

    @classmethod
    def unknown(cls, witness=""):
        return cls(False, None, witness)

    def to_json(self):
        return {
            "certified": self.certified,
            "value": self.value,
            "witness": self.witness,
        }

    def __str__(self):
        if self.certified:
            return f"Certified({self.value})"
        return "Unknown"


@dataclass(frozen=True)
class DimVerdict:
    """Finite(d) | Infinite | Unknown for homological dimensions."""

    kind: str  # "finite" | "infinite" | "unknown"
    value: int | None = None
    witness: str = ""

    @classmethod
    def finite(cls, d, witness=""):
        return cls("finite", d, witness)

    @classmethod
    def infinite(cls, witness=""):
        return cls("infinite", None, witness)

    @classmethod
    def unknown(cls, witness=""):
        return cls("unknown", None, witness)

    @property
    def is_finite(self):
        return self.kind == "finite"

    def to_json(self):
        return {"kind": self.kind, "value": self.value, "witness": self.witness}

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.value})"
        return self.kind.capitalize()


# ---------------------------------------------------------------------------
# resolutions


class Resolution:
    """Minimal projective resolution data, extended on demand.

    covers[k] is the minimal cover of the k-th syzygy; differentials[0]
    is the augmentation P^0 -> M and differentials[k] maps P^k -> P^{k-1}
    for k >= 1.  Termination (a vanishing syzygy) stops extension for
    good; periodicity (a syzygy isomorphic to an earlier one) is recorded
    as an infinite-dimension certificate but extension can continue.
    """

    def __init__(self, module: Representation):
        self.module = module
        self.covers: list[ProjectiveCover] = []
        self.differentials: list[ModuleMorphism] = []
        self.syzygies: list[Representation] = []
        self.terminated_at: int | None = None
        self.periodicity: tuple[int, int] | None = None
        self._last_kernel_incl: ModuleMorphism | None = None
        self._lock = threading.Lock()

    @property
    def depth(self):
        return len(self.covers) - 1

    @property
    def status(self):
        if self.terminated_at is not None:
            return ("terminated", self.terminated_at)
        if self.periodicity is not None:
            return ("periodic",) + self.periodicity
        return ("truncated", self.depth)

    def term(self, k: int) -> ProjectiveCover | None:
        if 0 <= k < len(self.covers):
            return self.covers[k]
        return None

    def ensure(self, upto: int):
        """Extend the resolution to degree `upto` (or to termination)."""
        with self._lock:
            while self.terminated_at is None and self.depth < upto:
                current = self.module if not self.syzygies else self.syzygies[-1]
                cover = projective_cover(current)
                if not self.covers:
                    diff = cover.morphism
                else:
                    diff = cover.morphism.then(self._last_kernel_incl)
                self.covers.append(cover)
                self.differentials.append(diff)
                parts = morphism_parts(cover.morphism)
                syz = parts.kernel
                self._last_kernel_incl = parts.kernel_inclusion
                self.syzygies.append(syz)
                if syz.total_dim == 0:
                    self.terminated_at = self.depth
                    return self
                if self.periodicity is None:
                    for j, earlier in enumerate(self.syzygies[:-1]):
                        if earlier.dims == syz.dims and is_isomorphic(earlier, syz):
                            self.periodicity = (j, len(self.syzygies) - 1)
                            break
        return self


_resolution_cache: dict = {}
_cache_lock = threading.Lock()


def minimal_projective_resolution(m: Representation, cap: int) -> Resolution:
    key = m.cache_key()
    with _cache_lock:
        res = _resolution_cache.get(key)
        if res is None:
            res = Resolution(m)
            _resolution_cache[key] = res
    res.ensure(cap)
    return res


def clear_resolution_cache():
    with _cache_lock:
        _resolution_cache.clear()


def proj_dim(m: Representation, cap: int) -> DimVerdict:
    if m.total_dim == 0:
        return DimVerdict.finite(0, "zero module")
    res = minimal_projective_resolution(m, cap)
    if res.terminated_at is not None:
        return DimVerdict.finite(res.terminated_at, "resolution terminated")
    if res.periodicity is not None:
        j, k = res.periodicity
        return DimVerdict.infinite(f"syzygy {k} isomorphic to syzygy {j}")
    return DimVerdict.unknown(f"resolution truncated at degree {res.depth}")


def global_dim(alg: FDAlgebra, cap: int) -> DimVerdict:
    """Max projective dimension over the simple modules."""
    if alg.dim == 0:
        return DimVerdict.finite(0, "zero algebra")
    best = 0
    unknown = None
    for v in alg.vertex_labels:
        verdict = proj_dim(simple_module(alg, v), cap)
        if verdict.kind == "infinite":
            return DimVerdict.infinite(f"simple at vertex {v}: {verdict.witness}")
        if verdict.kind == "unknown":
            unknown = DimVerdict.unknown(f"simple at vertex {v} truncated at cap {cap}")
        else:
            best = max(best, verdict.value)
    return unknown if unknown is not None else DimVerdict.finite(best)


# ---------------------------------------------------------------------------
# Ext via the cover structure
#
# Hom(P, N) for P = ⊕_t P_{v_t} is ⊕_t N_{v_t}; precomposition with a
# differential d: P' -> P acts through the action matrices of the basis
# elements appearing in the generator images.


def _hom_from_cover_dim(cover: ProjectiveCover, n: Representation) -> int:
    return sum(n.dims[v] for v in cover.summand_vertices)


def _hom_transfer_matrix(dsrc: ProjectiveCover, dtgt: ProjectiveCover, diff: ModuleMorphism,
                         n: Representation) -> Matrix:
    """Matrix of Hom(dtgt-term, N) -> Hom(dsrc-term, N), f |-> d then f.

    dsrc is the term of higher homological degree (the domain of d)."""
    alg = n.algebra
    field = n.field
    rows_dim = sum(n.dims[v] for v in dtgt.summand_vertices)
    cols_dim = sum(n.dims[v] for v in dsrc.summand_vertices)
    out_rows = []
    # coordinates of f: per target summand t, a vector in N_{v_t};
    # output coordinates: per source summand s, a vector in N_{w_s}.
    tgt_offsets = []
    run = 0
    for v in dtgt.summand_vertices:
        tgt_offsets.append(run)
        run += n.dims[v]
    src_offsets = []
    run = 0
    for v in dsrc.summand_vertices:
        src_offsets.append(run)
        run += n.dims[v]

    # basis of the input coordinate space: (t, alpha)
    for t_idx, v_t in enumerate(dtgt.summand_vertices):
        P_t = dtgt.projectives[t_idx]
        for alpha in range(n.dims[v_t]):
            out = [field.zero] * cols_dim
            for s_idx, w_s in enumerate(dsrc.summand_vertices):
                P_s = dsrc.projectives[s_idx]
                gen_vertex, gen_off = P_s.generator_pos
                # image of the generator of summand s inside the total of dtgt
                inj = dsrc.injections[s_idx]
                gen_row = [field.zero] * dsrc.total.dims[gen_vertex]
                base = inj.blocks[gen_vertex]
                gen_row = list(base.rows[gen_off])
                img = Matrix(field, [gen_row], dsrc.total.dims[gen_vertex], _normalized=True) * diff.blocks[gen_vertex]
                # img lives in the dtgt total at vertex w_s; restrict to summand t
                proj_block = None
                # coordinates of summand t inside dtgt total at vertex w_s
                # dtgt slots: position offsets per summand
                offset = 0
                coeff_rows = None
                for u_idx, v_u in enumerate(dtgt.summand_vertices):
                    P_u = dtgt.projectives[u_idx]
                    width = P_u.dims[w_s]
                    if u_idx == t_idx:
                        coeff_rows = img.rows[0][offset : offset + width]
                    offset += width
                if coeff_rows is None:
                    continue
                # coeff_rows are coordinates over P_t's slot basis at vertex w_s:
                # slot b corresponds to basis element b of the algebra
                acc = [field.zero] * n.dims[w_s]
                for pos, b in enumerate(P_t.slots[w_s]):
                    c = coeff_rows[pos]
                    if c == field.zero:
                        continue
                    act = n.act(b)
                    evec = [field.zero] * n.dims[v_t]
                    if alpha < len(evec):
                        evec[alpha] = field.one
                    contrib = Matrix(field, [evec], n.dims[v_t], _normalized=True) * act
                    for j in range(n.dims[w_s]):
                        acc[j] = field.add(acc[j], field.mul(c, contrib.rows[0][j]))
                for j in range(n.dims[w_s]):
                    out[src_offsets[s_idx] + j] = field.add(out[src_offsets[s_idx] + j], acc[j])
            out_rows.append(out)
    return Matrix(field, out_rows, cols_dim, _normalized=True)


def ext_dim(m: Representation, n: Representation, k: int, cap: int | None = None) -> int:
    """dim Ext^k(m, n), computed from the minimal resolution of m."""
    if k < 0:
        raise ValueError("negative degree")
    if m.total_dim == 0 or n.total_dim == 0:
        return 0
    depth = max(k + 1, 1) if cap is None else max(cap, k + 1)
    res = minimal_projective_resolution(m, depth)

    def cover_at(i):
        return res.term(i)

    c_k = cover_at(k)
    if c_k is None or not c_k.summand_vertices:
        return 0
    dim_k = _hom_from_cover_dim(c_k, n)
    # outgoing map Hom(P^k, N) -> Hom(P^{k+1}, N)
    c_next = cover_at(k + 1)
    if c_next is None or not c_next.summand_vertices:
        rank_out = 0
        ker = dim_k
    else:
        mat_out = _hom_transfer_matrix(c_next, c_k, res.differentials[k + 1], n)
        rank_out = mat_out.rank
        ker = dim_k - rank_out
    if k == 0:
        return ker
    c_prev = cover_at(k - 1)
    mat_in = _hom_transfer_matrix(c_k, c_prev, res.differentials[k], n)
    return ker - mat_in.rank


# ---------------------------------------------------------------------------
# tensor products and Tor


@dataclass
class TensorResult:
    dim: int
    component_dims: tuple


def _check_left_module(m: Representation, n_op: Representation):
    alg = m.algebra
    op = n_op.algebra
    if op.opposite_of is not alg and alg.opposite_of is not op:
        raise ValueError("second factor must be a module over the opposite algebra")


def tensor_over(m: Representation, n_op: Representation) -> TensorResult:
    """m ⊗_A n for a right module m and a left module n (presented as a
    right module over the opposite algebra)."""
    _check_left_module(m, n_op)
    alg = m.algebra
    field = alg.field
    nv = alg.num_vertices
    sizes = [m.dims[v] * n_op.dims[v] for v in range(nv)]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]
    if total == 0:
        return TensorResult(0, tuple(sizes))
    from .linalg import RowSpace

    rel = RowSpace(field, total)
    for g in alg.generators:
        s, t = alg.src[g], alg.tgt[g]
        A = m.gen_maps[g]        # M_s -> M_t
        B = n_op.gen_maps[g]     # N_t -> N_s (opposite orientation)
        for i in range(m.dims[s]):
            for kk in range(n_op.dims[t]):
                row = [field.zero] * total
                # (m_i . g) ⊗ n_k  in block t
                for j in range(m.dims[t]):
                    c = A.entry(i, j)
                    if c != field.zero:
                        row[offsets[t] + j * n_op.dims[t] + kk] = c
                # - m_i ⊗ (g . n_k) in block s
                for j in range(n_op.dims[s]):
                    c = B.entry(kk, j)
                    if c != field.zero:
                        idx = offsets[s] + i * n_op.dims[s] + j
                        row[idx] = field.sub(row[idx], c)
                rel.add(row)
    return TensorResult(total - rel.dim, tuple(sizes))


def _tor_transfer_matrix(csrc: ProjectiveCover, ctgt: ProjectiveCover, diff: ModuleMorphism,
                         n_op: Representation) -> Matrix:
    """Matrix of P^k ⊗ N -> P^{k-1} ⊗ N induced by the differential.

    Components: P^k ⊗ N = ⊕_s N_{w_s}; the generator image of summand s,
    with coordinates c at slot (t, b), contributes c * (left action of b)."""
    field = n_op.field
    rows_dim = sum(n_op.dims[v] for v in csrc.summand_vertices)
    cols_dim = sum(n_op.dims[v] for v in ctgt.summand_vertices)
    src_offsets = []
    run = 0
    for v in csrc.summand_vertices:
        src_offsets.append(run)
        run += n_op.dims[v]
    tgt_offsets = []
    run = 0
    for v in ctgt.summand_vertices:
        tgt_offsets.append(run)
        run += n_op.dims[v]
    out_rows = []
    for s_idx, w_s in enumerate(csrc.summand_vertices):
        P_s = csrc.projectives[s_idx]
        inj = csrc.injections[s_idx]
        gen_vertex, gen_off = P_s.generator_pos
        gen_row = list(inj.blocks[gen_vertex].rows[gen_off])
        img = Matrix(field, [gen_row], csrc.total.dims[gen_vertex], _normalized=True) * diff.blocks[gen_vertex]
        # decompose image over target summands/slots at vertex w_s
        pieces = []
        offset = 0
        for u_idx, v_u in enumerate(ctgt.summand_vertices):
            P_u = ctgt.projectives[u_idx]
            width = P_u.dims[w_s]
            pieces.append((u_idx, P_u, img.rows[0][offset : offset + width]))
            offset += width
        for beta in range(n_op.dims[w_s]):
            out = [field.zero] * cols_dim
            evec = [field.zero] * n_op.dims[w_s]
            evec[beta] = field.one
            for u_idx, P_u, coeffs in pieces:
                v_u = ctgt.summand_vertices[u_idx]
                for pos, b in enumerate(P_u.slots[w_s]):
                    c = coeffs[pos]
                    if c == field.zero:
                        continue
                    # left action of b: N_{tgt(b)} -> N_{src(b)} is the
                    # opposite-module action matrix of b
                    act = n_op.act(b)  # N_{w_s} -> N_{v_u} in opposite orientation
                    contrib = Matrix(field, [evec], n_op.dims[w_s], _normalized=True) * act
                    for j in range(n_op.dims[v_u]):
                        out[tgt_offsets[u_idx] + j] = field.add(
                            out[tgt_offsets[u_idx] + j], field.mul(c, contrib.rows[0][j])
                        )
            out_rows.append(out)
    return Matrix(field, out_rows, cols_dim, _normalized=True)


def tor_dim(m: Representation, n_op: Representation, k: int, cap: int | None = None) -> int:
    """dim Tor_k(m, n) via the minimal resolution of m."""
    _check_left_module(m, n_op)
    if k < 0:
        raise ValueError("negative degree")
    if m.total_dim == 0 or n_op.total_dim == 0:
        return 0
    depth = max(k + 1, 1) if cap is None else max(cap, k + 1)
    res = minimal_projective_resolution(m, depth)
    c_k = res.term(k)
    if c_k is None or not c_k.summand_vertices:
        return 0
    dim_k = sum(n_op.dims[v] for v in c_k.summand_vertices)
    # incoming boundary from degree k+1, outgoing to degree k-1
    c_next = res.term(k + 1)
    rank_in = 0
    if c_next is not None and c_next.summand_vertices:
        rank_in = _tor_transfer_matrix(c_next, c_k, res.differentials[k + 1], n_op).rank
    if k == 0:
        return dim_k - rank_in
    c_prev = res.term(k - 1)
    mat_out = _tor_transfer_matrix(c_k, c_prev, res.differentials[k], n_op)
    return dim_k - mat_out.rank - rank_in


# ---------------------------------------------------------------------------
# exceptionality


def is_exceptional(m: Representation, cap: int) -> Verdict:
    """No self-extensions in any positive degree, certified when the
    projective dimension is finite (nothing to check beyond it)."""
    if m.total_dim == 0:
        return Verdict.certified_true("zero module")
    pd = proj_dim(m, cap)
    bound = pd.value if pd.is_finite else cap
    for k in range(1, bound + 1):
        d = ext_dim(m, m, k)
        if d:
            return Verdict.certified_false(f"Ext^{k}(M,M) has dimension {d}")
    if pd.is_finite:
        return Verdict.certified_true(f"pd = {pd.value}, all positive Ext vanish")
    return Verdict.unknown(f"no self-extension up to degree {cap}, pd not certified finite")
