"""Quivers, presentations and basic finite-dimensional algebras.

An algebra is built from a quiver presentation by completing the relation
set to a confluent rewriting system under the length-lexicographic path
order (ties broken by arrow id), then enumerating the irreducible paths.
The result is stored as a multiplication table over a homogeneous basis:
every basis element b satisfies b = e_src(b) * b * e_tgt(b).

Algebras without a presentation (endomorphism algebras, corners) use the
same table format; "vertices" are then any complete family of orthogonal
primitive idempotents.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .linalg import Matrix, RowSpace


class MalformedRelation(ValueError):
    """A relation mixes non-parallel or non-composable paths."""


class NotFiniteDimensional(ValueError):
    """Path enumeration hit the length cap without a nilpotence certificate."""


class RadicalUnavailable(RuntimeError):
    """Trace-form radical invalid over this field and no fallback applies."""


# ---------------------------------------------------------------------------
# quivers and presentations


@dataclass(frozen=True)
class Arrow:
    id: str
    source: object
    target: object


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.arrows = tuple(Arrow(*a) if not isinstance(a, Arrow) else a for a in arrows)
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        for a in self.arrows:
            if a.source not in self._vindex or a.target not in self._vindex:
                raise ValueError(f"arrow {a.id} uses undeclared vertex")

    def vertex_index(self, label) -> int:
        return self._vindex[label]

    def arrow_by_id(self, arrow_id) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise KeyError(arrow_id)

    def is_acyclic(self) -> bool:
        n = len(self.vertices)
        adj = [[] for _ in range(n)]
        for a in self.arrows:
            adj[self._vindex[a.source]].append(self._vindex[a.target])
        state = [0] * n  # 0 unseen, 1 active, 2 done

        def visit(u):
            state[u] = 1
            for w in adj[u]:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not visit(w):
                    return False
            state[u] = 2
            return True

        return all(state[u] == 2 or visit(u) for u in range(n))

    def reversed(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.id, a.target, a.source) for a in self.arrows])


class Presentation:
    """A quiver plus relations: scalar combinations of parallel paths.

    Each relation is a list of (coeff, path) terms where a path is a
    sequence of arrow ids composed left to right ("alpha then beta").
    All paths in one relation must share source and target and have
    length at least two.
    """

    def __init__(self, quiver: Quiver, relations, field):
        self.quiver = quiver
        self.field = field
        normalized = []
        for rel in relations:
            terms = []
            endpoints = None
            for coeff, path in rel:
                coeff = field.normalize(coeff)
                if coeff == field.zero:
                    continue
                arrows = [quiver.arrow_by_id(aid) for aid in path]
                if len(arrows) < 2:
                    raise MalformedRelation(f"relation path {list(path)} has length < 2")
                for a, b in zip(arrows, arrows[1:]):
                    if a.target != b.source:
                        raise MalformedRelation(f"path {list(path)} is not composable at {a.id}->{b.id}")
                ep = (arrows[0].source, arrows[-1].target)
                if endpoints is None:
                    endpoints = ep
                elif endpoints != ep:
                    raise MalformedRelation(f"relation mixes non-parallel paths {endpoints} vs {ep}")
                terms.append((coeff, tuple(path)))
            if terms:
                normalized.append(tuple(terms))
        self.relations = tuple(normalized)


# ---------------------------------------------------------------------------
# rewriting on path words
#
# Words are tuples of arrow ranks, where rank is the position of the arrow
# in the id-sorted arrow list; the term order is (length, word) which is
# multiplication-compatible, so reduction terminates.


class _Rewriter:
    def __init__(self, quiver: Quiver, field):
        self.field = field
        order = sorted(range(len(quiver.arrows)), key=lambda i: quiver.arrows[i].id)
        self.arrow_of_rank = [quiver.arrows[i] for i in order]
        self.rank_of_id = {a.id: r for r, a in enumerate(self.arrow_of_rank)}
        vindex = quiver.vertex_index
        self.src = [vindex(a.source) for a in self.arrow_of_rank]
        self.tgt = [vindex(a.target) for a in self.arrow_of_rank]
        self.rules: dict[tuple, dict] = {}
        self.max_lhs = 0

    def word_of_path(self, path):
        return tuple(self.rank_of_id[aid] for aid in path)

    def reduce(self, elem: dict) -> dict:
        field = self.field
        zero = field.zero
        out: dict[tuple, object] = {}
        work = list(elem.items())
        while work:
            w, c = work.pop()
            if c == zero:
                continue
            hit = None
            lw = len(w)
            for i in range(lw):
                limit = min(self.max_lhs, lw - i)
                for L in range(limit, 0, -1):
                    if w[i : i + L] in self.rules:
                        hit = (i, L)
                        break
                if hit:
                    break
            if hit is None:
                acc = field.add(out.get(w, zero), c)
                if acc == zero:
                    out.pop(w, None)
                else:
                    out[w] = acc
                continue
            i, L = hit
            for w2, c2 in self.rules[w[i : i + L]].items():
                work.append((w[:i] + w2 + w[i + L :], field.mul(c, c2)))
        return out

    @staticmethod
    def _key(word):
        return (len(word), word)

    def _make_rule(self, elem: dict):
        """Split a reduced nonzero element into (lhs, rhs)."""
        lead = max(elem, key=self._key)
        inv = self.field.inv(elem[lead])
        rhs = {w: self.field.neg(self.field.mul(inv, c)) for w, c in elem.items() if w != lead}
        return lead, rhs

    def _elem_sub(self, a, b):
        field = self.field
        out = dict(a)
        for w, c in b.items():
            acc = field.sub(out.get(w, field.zero), c)
            if acc == field.zero:
                out.pop(w, None)
            else:
                out[w] = acc
        return out

    def add_element(self, elem: dict, pair_queue=None) -> bool:
        """Insert an ideal element as a rewrite rule; rules made reducible
        by the insertion are retired and re-inserted."""
        added = False
        pending = [elem]
        while pending:
            e = self.reduce(pending.pop())
            if not e:
                continue
            lhs, rhs = self._make_rule(e)
            self.rules[lhs] = rhs
            self.max_lhs = max(self.max_lhs, len(lhs))
            added = True
            # retire rules whose lhs now contains the new lhs
            for u in list(self.rules):
                if u == lhs or len(u) < len(lhs):
                    continue
                if any(u[i : i + len(lhs)] == lhs for i in range(len(u) - len(lhs) + 1)):
                    old_rhs = self.rules.pop(u)
                    pending.append(self._elem_sub({u: self.field.one}, old_rhs))
            self.max_lhs = max((len(w) for w in self.rules), default=0)
            if pair_queue is not None:
                for v in list(self.rules):
                    pair_queue.append((lhs, v))
                    pair_queue.append((v, lhs))
        return added

    def complete(self):
        """Knuth-Bendix completion of the rule set.  Terminates at desk
        scale: the order is a multiplication-compatible well-order and the
        admissibility cap bounds everything downstream anyway."""
        queue = deque()
        for u in list(self.rules):
            for v in list(self.rules):
                queue.append((u, v))
        while queue:
            u, v = queue.popleft()
            if u not in self.rules or v not in self.rules:
                continue
            f, g = self.rules[u], self.rules[v]

            def attach(elem, prefix, suffix):
                return {prefix + w + suffix: c for w, c in elem.items()}

            critical = []
            # overlap: proper suffix of u equals proper prefix of v
            for k in range(1, min(len(u), len(v))):
                if u[len(u) - k :] == v[:k]:
                    left = attach(f, (), v[k:])
                    right = attach(g, u[: len(u) - k], ())
                    critical.append(self._elem_sub(left, right))
            # containment: v strictly inside u
            if len(v) < len(u):
                for i in range(len(u) - len(v) + 1):
                    if u[i : i + len(v)] == v:
                        right = attach(g, u[:i], u[i + len(v) :])
                        critical.append(self._elem_sub(f, right))
            for elem in critical:
                self.add_element(elem, queue)
        # normalize right-hand sides so reduction yields canonical forms
        for lhs in list(self.rules):
            rhs = self.rules.pop(lhs)
            reduced = self.reduce(rhs)
            self.rules[lhs] = reduced

    def irreducible_words(self, nv, cap):
        """BFS enumeration of irreducible words per source vertex."""
        out = [((), v) for v in range(nv)]
        frontier = [((), v, v) for v in range(nv)]  # (word, src, current tgt)
        length = 0
        while frontier:
            length += 1
            nxt = []
            for word, s, t in frontier:
                for rank in range(len(self.arrow_of_rank)):
                    if self.src[rank] != t:
                        continue
                    w2 = word + (rank,)
                    reducible = False
                    for L in range(1, min(self.max_lhs, len(w2)) + 1):
                        if w2[len(w2) - L :] in self.rules:
                            reducible = True
                            break
                    if not reducible:
                        if length >= cap:
                            raise NotFiniteDimensional(
                                f"irreducible path of length {cap} found; "
                                f"no nilpotence certificate at this cap"
                            )
                        out.append((w2, s))
                        nxt.append((w2, s, self.tgt[rank]))
            frontier = nxt
        return out


# ---------------------------------------------------------------------------
# the algebra object


class FDAlgebra:
    """Basic data: a homogeneous basis, a sparse multiplication table,
    a complete orthogonal family of primitive idempotents ("vertices"),
    and a basis of the radical.

    For presented algebras the basis is the set of irreducible paths and
    the generators are the arrows; for abstract algebras every non-vertex
    basis element is its own generator.
    """

    def __init__(
        self,
        field,
        vertex_labels,
        basis_labels,
        src,
        tgt,
        idempotent_index,
        radical,
        generators,
        gen_words,
        mult,
        origin,
        quiver=None,
        basic=True,
        words=None,
    ):
        self.field = field
        self.vertex_labels = tuple(vertex_labels)
        self.basis_labels = tuple(basis_labels)
        self.dim = len(self.basis_labels)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.idempotent_index = tuple(idempotent_index)
        self.radical = tuple(radical)
        self.generators = tuple(generators)
        self.gen_words = tuple(tuple(w) for w in gen_words)
        self.mult = mult
        self.origin = origin
        self.quiver = quiver
        self.basic = basic
        self.words = words
        self.opposite_of = None
        self._act_cache = {}

    # -- basics
    @property
    def num_vertices(self):
        return len(self.vertex_labels)

    def vertex_position(self, label) -> int:
        return self.vertex_labels.index(label)

    def product(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def unit(self) -> dict:
        return {e: self.field.one for e in self.idempotent_index}

    def is_semisimple(self) -> bool:
        return not self.radical

    def __repr__(self):
        return f"FDAlgebra(dim={self.dim}, vertices={len(self.vertex_labels)}, origin={self.origin!r})"

    # -- element helpers (elements are sparse dicts basis index -> scalar)
    def elem_mul(self, x: dict, y: dict) -> dict:
        field = self.field
        zero = field.zero
        out: dict[int, object] = {}
        for i, a in x.items():
            if a == zero:
                continue
            for j, b in y.items():
                if b == zero:
                    continue
                prod = self.mult.get((i, j))
                if not prod:
                    continue
                ab = field.mul(a, b)
                for k, c in prod.items():
                    acc = field.add(out.get(k, zero), field.mul(ab, c))
                    if acc == zero:
                        out.pop(k, None)
                    else:
                        out[k] = acc
        return out

    def elem_add(self, x: dict, y: dict) -> dict:
        field = self.field
        zero = field.zero
        out = dict(x)
        for k, c in y.items():
            acc = field.add(out.get(k, zero), c)
            if acc == zero:
                out.pop(k, None)
            else:
                out[k] = acc
        return out

    def elem_scale(self, c, x: dict) -> dict:
        field = self.field
        c = field.normalize(c)
        if c == field.zero:
            return {}
        return {k: field.mul(c, v) for k, v in x.items()}

    def elem_vector(self, x: dict) -> list:
        zero = self.field.zero
        v = [zero] * self.dim
        for k, c in x.items():
            v[k] = c
        return v

    def vector_elem(self, v) -> dict:
        zero = self.field.zero
        return {k: c for k, c in enumerate(v) if c != zero}

    def left_mult_matrix(self, x: dict) -> Matrix:
        """Matrix of b |-> x*b on algebra coordinates (rows: input basis)."""
        rows = []
        for j in range(self.dim):
            prod = self.elem_mul(x, {j: self.field.one})
            rows.append(self.elem_vector(prod))
        return Matrix(self.field, rows, self.dim, _normalized=True)

    def right_mult_matrix(self, x: dict) -> Matrix:
        rows = []
        for j in range(self.dim):
            prod = self.elem_mul({j: self.field.one}, x)
            rows.append(self.elem_vector(prod))
        return Matrix(self.field, rows, self.dim, _normalized=True)

    def element_from_paths(self, terms) -> dict:
        """Element from [(coeff, [arrow ids...])] path terms;
        an empty path with an explicit vertex is written ("e", label)."""
        if self.words is None:
            raise ValueError("algebra has no path presentation")
        out: dict[int, object] = {}
        field = self.field
        for coeff, path in terms:
            coeff = field.normalize(coeff)
            if isinstance(path, tuple) and len(path) == 2 and path[0] == "e":
                idx = self.idempotent_index[self.vertex_position(path[1])]
            else:
                word = tuple(self._arrow_rank[aid] for aid in path)
                if word not in self._word_index:
                    raise ValueError(f"path {list(path)} is not a basis word (reducible or unknown)")
                idx = self._word_index[word]
            acc = field.add(out.get(idx, field.zero), coeff)
            if acc == field.zero:
                out.pop(idx, None)
            else:
                out[idx] = acc
        return out

    # -- structural checks (used by the test suite)
    def check_associative(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.product(i, j)
                for k in range(self.dim):
                    left = self.elem_mul(ij, {k: self.field.one})
                    right = self.elem_mul({i: self.field.one}, self.product(j, k))
                    if left != right:
                        return False
        return True

    def check_unit(self) -> bool:
        one = self.unit()
        for i in range(self.dim):
            x = {i: self.field.one}
            if self.elem_mul(one, x) != x or self.elem_mul(x, one) != x:
                return False
        return True

    def signature(self) -> dict:
        """Structural invariants: dimension, radical, center, commutativity."""
        zero = self.field.zero
        commutative = all(
            self.product(i, j) == self.product(j, i) for i in range(self.dim) for j in range(self.dim)
        )
        # center: solve x*b_k = b_k*x for all k
        rows = []
        for k in range(self.dim):
            lk = self.left_mult_matrix({k: self.field.one})
            rk = self.right_mult_matrix({k: self.field.one})
            diff = lk - rk
            # x as row vector: x * (L_k - R_k)?  Both act on coordinates of x:
            # coordinate form: (x*b_k - b_k*x) = x . (R_{b_k} - L_{b_k}) rows
            rows.append(rk - lk)
        if self.dim:
            big = rows[0]
            for m in rows[1:]:
                big = big.hstack(m)
            center_dim = big.nrows - big.rank
        else:
            center_dim = 0
        return {
            "dimension": self.dim,
            "radical_dimension": len(self.radical),
            "semisimple": not self.radical,
            "center_dimension": center_dim,
            "commutative": commutative,
            "field": self.field.tag(),
        }


def leaf_signature(end_algebra: FDAlgebra) -> tuple:
    """Comparable signature of a division-algebra factor."""
    sig = end_algebra.signature()
    return (sig["dimension"], sig["center_dimension"], sig["commutative"])


# ---------------------------------------------------------------------------
# building from a presentation


def build_algebra(presentation: Presentation, path_length_cap: int = 30) -> FDAlgebra:
    if path_length_cap < 1:
        raise ValueError("path_length_cap must be >= 1")
    quiver = presentation.quiver
    field = presentation.field
    rw = _Rewriter(quiver, field)
    for rel in presentation.relations:
        elem = {}
        for coeff, path in rel:
            w = rw.word_of_path(path)
            elem[w] = field.add(elem.get(w, field.zero), coeff)
        rw.add_element(elem)
    rw.complete()

    nv = len(quiver.vertices)
    words = rw.irreducible_words(nv, path_length_cap)
    # sort length-lex for reproducibility
    words.sort(key=lambda ws: (len(ws[0]), ws[0], ws[1]))

    basis_words = []
    src = []
    tgt = []
    labels = []
    trivial_index = {}
    word_index = {}
    for i, (word, s) in enumerate(words):
        basis_words.append(word)
        src.append(s)
        tgt.append(rw.tgt[word[-1]] if word else s)
        if word:
            labels.append("*".join(rw.arrow_of_rank[r].id for r in word))
            word_index[word] = i
        else:
            labels.append(f"e_{quiver.vertices[s]}")
            trivial_index[s] = i

    idempotent_index = [trivial_index[v] for v in range(nv)]

    radical = [i for i, w in enumerate(basis_words) if w]

    # generators: the arrows
    arrow_basis = {}
    for rank in range(len(rw.arrow_of_rank)):
        arrow_basis[rank] = word_index[(rank,)]
    generators = [arrow_basis[r] for r in range(len(rw.arrow_of_rank))]
    gen_words = []
    for i, w in enumerate(basis_words):
        gen_words.append(tuple(arrow_basis[r] for r in w))

    # multiplication table
    mult: dict[tuple[int, int], dict] = {}
    for i, wi in enumerate(basis_words):
        for j, wj in enumerate(basis_words):
            if tgt[i] != src[j]:
                continue
            combined = rw.reduce({wi + wj: field.one})
            prod = {}
            for w, c in combined.items():
                if w:
                    prod[word_index[w]] = c
                else:
                    # only e_v * e_v concatenates to the empty word
                    prod[trivial_index[src[i]]] = c
            if prod:
                mult[(i, j)] = prod

    alg = FDAlgebra(
        field=field,
        vertex_labels=quiver.vertices,
        basis_labels=labels,
        src=src,
        tgt=tgt,
        idempotent_index=idempotent_index,
        radical=radical,
        generators=generators,
        gen_words=gen_words,
        mult=mult,
        origin=presentation,
        quiver=quiver,
        basic=True,
        words=tuple(basis_words),
    )
    alg._arrow_rank = rw.rank_of_id
    alg._word_index = word_index
    return alg


# ---------------------------------------------------------------------------
# derived algebras


def opposite_algebra(alg: FDAlgebra) -> FDAlgebra:
    """Reverse multiplication; path words read backwards."""
    mult = {}
    for (i, j), prod in alg.mult.items():
        mult[(j, i)] = dict(prod)
    labels = []
    for i, lab in enumerate(alg.basis_labels):
        if i in alg.idempotent_index:
            labels.append(lab)
        else:
            labels.append("*".join(reversed(lab.split("*"))))
    out = FDAlgebra(
        field=alg.field,
        vertex_labels=alg.vertex_labels,
        basis_labels=labels,
        src=alg.tgt,
        tgt=alg.src,
        idempotent_index=alg.idempotent_index,
        radical=alg.radical,
        generators=alg.generators,
        gen_words=[tuple(reversed(w)) for w in alg.gen_words],
        mult=mult,
        origin="opposite",
        quiver=alg.quiver.reversed() if alg.quiver is not None else None,
        basic=alg.basic,
        words=None,
    )
    out.opposite_of = alg
    return out


def structurally_equal(a: FDAlgebra, b: FDAlgebra) -> bool:
    return (
        a.field == b.field
        and a.vertex_labels == b.vertex_labels
        and a.src == b.src
        and a.tgt == b.tgt
        and a.mult == b.mult
    )


def _ideal_closure(alg: FDAlgebra, seed_vectors) -> RowSpace:
    """Two-sided ideal generated by the seed vectors, as a row space."""
    space = RowSpace(alg.field, alg.dim)
    queue = []
    for v in seed_vectors:
        if space.add(v):
            queue.append(space.rows[-1][:])
    # multipliers: idempotents are redundant; arrows/generators suffice,
    # but products by all basis elements are cheap and unconditionally safe
    multipliers = [{g: alg.field.one} for g in alg.generators]
    while queue:
        vec = queue.pop()
        x = alg.vector_elem(vec)
        for m in multipliers:
            for prod in (alg.elem_mul(x, m), alg.elem_mul(m, x)):
                if prod:
                    w = alg.elem_vector(prod)
                    if space.add(w):
                        queue.append(w)
    return space


class _OrderedReducer:
    """Echelon reduction against a fixed pivot order (not leftmost-first);
    residues vanish exactly on the pivot coordinates."""

    def __init__(self, field, rows, pivots):
        self.field = field
        self.rows = rows      # leading coefficient 1 at the pivot position
        self.pivots = pivots
        self.ncols = len(rows[0]) if rows else 0

    def residue(self, vec):
        field = self.field
        zero = field.zero
        v = [field.normalize(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != zero:
                for j in range(len(v)):
                    v[j] = field.sub(v[j], field.mul(c, row[j]))
        return v


def _rref_columns_longest_first(alg: FDAlgebra, space: RowSpace):
    """Pivot positions of the ideal against reversed basis order, so that
    short paths (idempotents, arrows) are kept as quotient representatives."""
    n = alg.dim
    field = alg.field
    rows = [[row[n - 1 - j] for j in range(n)] for row in space.rows]
    mat = Matrix(field, rows, n, _normalized=True)
    res = mat.rref(with_transform=False)
    pivots_rev = res.pivot_columns
    eliminated = sorted(n - 1 - c for c in pivots_rev)
    red_rows = []
    red_pivots = []
    for i, c in enumerate(pivots_rev):
        row = res.reduced.rows[i]
        red_rows.append([row[n - 1 - j] for j in range(n)])
        red_pivots.append(n - 1 - c)
    reducer = _OrderedReducer(field, red_rows, red_pivots)
    return eliminated, reducer


def quotient_by_idempotent_ideal(alg: FDAlgebra, vertex_labels) -> FDAlgebra:
    """A / AeA for e the sum of the chosen vertex idempotents."""
    chosen = [alg.vertex_position(v) for v in vertex_labels]
    seeds = []
    one = alg.field.one
    for v in chosen:
        seeds.append(alg.elem_vector({alg.idempotent_index[v]: one}))
    space = _ideal_closure(alg, seeds)
    eliminated, reducer = _rref_columns_longest_first(alg, space)
    dead = set(eliminated)

    keep = [i for i in range(alg.dim) if i not in dead]
    local = {b: i for i, b in enumerate(keep)}

    surviving_vertices = []
    idempotent_index = []
    for v in range(alg.num_vertices):
        e = alg.idempotent_index[v]
        if v in chosen:
            if e not in dead:
                raise RuntimeError("chosen vertex idempotent not absorbed by its ideal")
            continue
        if e in dead:
            raise RuntimeError("surviving vertex idempotent collapsed in the quotient")
        surviving_vertices.append(alg.vertex_labels[v])
        idempotent_index.append(local[e])

    def project(elem: dict):
        vec = reducer.residue(alg.elem_vector(elem))
        out = {}
        for b in keep:
            if vec[b] != alg.field.zero:
                out[local[b]] = vec[b]
        return out

    mult = {}
    for i, bi in enumerate(keep):
        for j, bj in enumerate(keep):
            prod = alg.product(bi, bj)
            if not prod:
                continue
            proj = project(prod)
            if proj:
                mult[(i, j)] = proj

    vertex_local = {v: i for i, v in enumerate(surviving_vertices)}
    src = [vertex_local[alg.vertex_labels[alg.src[b]]] for b in keep]
    tgt = [vertex_local[alg.vertex_labels[alg.tgt[b]]] for b in keep]
    radical = [i for i, b in enumerate(keep) if b not in alg.idempotent_index]

    # surviving arrows give the quotient's quiver and generators
    generators = []
    arrow_local = {}
    quiver = None
    if alg.quiver is not None:
        arrows = []
        for g in alg.generators:
            if g in dead:
                continue
            arrows.append(
                Arrow(
                    alg.basis_labels[g],
                    alg.vertex_labels[alg.src[g]],
                    alg.vertex_labels[alg.tgt[g]],
                )
            )
            arrow_local[g] = local[g]
            generators.append(local[g])
        arrows = [a for a in arrows if a.source in surviving_vertices and a.target in surviving_vertices]
        quiver = Quiver(surviving_vertices, arrows)
    else:
        generators = [local[b] for b in keep if b not in alg.idempotent_index]
        arrow_local = {b: local[b] for b in keep}

    gen_words = []
    for i, b in enumerate(keep):
        word = alg.gen_words[b]
        if b in alg.idempotent_index:
            gen_words.append(())
        elif all(g in arrow_local for g in word):
            gen_words.append(tuple(arrow_local[g] for g in word))
        else:
            raise RuntimeError("quotient basis path uses an arrow absorbed by the ideal")

    return FDAlgebra(
        field=alg.field,
        vertex_labels=surviving_vertices,
        basis_labels=[alg.basis_labels[b] for b in keep],
        src=src,
        tgt=tgt,
        idempotent_index=idempotent_index,
        radical=radical,
        generators=generators,
        gen_words=gen_words,
        mult=mult,
        origin="quotient",
        quiver=quiver,
        basic=alg.basic,
        words=None,
    )


def corner_algebra(alg: FDAlgebra, vertex_labels) -> FDAlgebra:
    """eAe for e the sum of the chosen vertex idempotents."""
    chosen = sorted(alg.vertex_position(v) for v in vertex_labels)
    chosen_set = set(chosen)
    keep = [b for b in range(alg.dim) if alg.src[b] in chosen_set and alg.tgt[b] in chosen_set]
    local = {b: i for i, b in enumerate(keep)}
    mult = {}
    for bi in keep:
        for bj in keep:
            prod = alg.product(bi, bj)
            if not prod:
                continue
            out = {}
            for k, c in prod.items():
                if k not in local:
                    raise RuntimeError("corner multiplication left the corner span")
                out[local[k]] = c
            mult[(local[bi], local[bj])] = out
    vpos = {v: i for i, v in enumerate(chosen)}
    return FDAlgebra(
        field=alg.field,
        vertex_labels=[alg.vertex_labels[v] for v in chosen],
        basis_labels=[alg.basis_labels[b] for b in keep],
        src=[vpos[alg.src[b]] for b in keep],
        tgt=[vpos[alg.tgt[b]] for b in keep],
        idempotent_index=[local[alg.idempotent_index[v]] for v in chosen],
        radical=[local[b] for b in keep if b not in alg.idempotent_index],
        generators=[local[b] for b in keep if b not in alg.idempotent_index],
        gen_words=[(local[b],) if b not in alg.idempotent_index else () for b in keep],
        mult=mult,
        origin="corner",
        quiver=None,
        basic=alg.basic,
        words=None,
    )


def is_directed(alg: FDAlgebra) -> bool:
    """True iff the quiver of the presentation is acyclic."""
    if alg.quiver is None:
        raise ValueError("algebra has no quiver presentation")
    return alg.quiver.is_acyclic()


# ---------------------------------------------------------------------------
# radical of an abstract multiplication table


def table_radical_rowspace(alg: FDAlgebra) -> RowSpace:
    """Radical via the trace form of the regular representation.

    The kernel of (x, y) |-> trace(left-mult by x*y) always contains the
    radical; when the kernel is nilpotent it equals the radical.  Over QQ
    this always holds; over a prime field a non-nilpotent kernel raises
    RadicalUnavailable.
    """
    field = alg.field
    n = alg.dim
    trace_vec = []
    for k in range(n):
        t = field.zero
        for j in range(n):
            prod = alg.product(k, j)
            if j in prod:
                t = field.add(t, prod[j])
        trace_vec.append(t)
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = alg.product(i, j)
            t = field.zero
            for k, c in prod.items():
                t = field.add(t, field.mul(c, trace_vec[k]))
            row.append(t)
        gram.append(row)
    kernel = Matrix(field, gram, n, _normalized=True).right_kernel().transpose()
    space = RowSpace(field, n)
    space.add_matrix(kernel)
    # verify nilpotence of the kernel ideal
    power = space
    for _ in range(n + 1):
        if power.dim == 0:
            return space
        nxt = RowSpace(field, n)
        for u in power.rows:
            xu = alg.vector_elem(u)
            for v in space.rows:
                prod = alg.elem_mul(xu, alg.vector_elem(v))
                if prod:
                    nxt.add(alg.elem_vector(prod))
        if nxt.dim >= power.dim and nxt.dim > 0 and nxt.rows == power.rows:
            break
        power = nxt
    if power.dim == 0:
        return space
    if field.char == 0:
        raise RuntimeError("trace-form kernel not nilpotent over QQ; table is inconsistent")
    raise RadicalUnavailable(
        f"trace-form radical invalid over {field!r} (characteristic divides a block dimension)"
    )


def quotient_table_by_rowspace(alg: FDAlgebra, space: RowSpace):
    """Quotient of the table by a two-sided ideal given as a row space.

    Returns (mult, keep, local, project) where keep lists representative
    basis indices of the parent.
    """
    eliminated, reducer = _rref_columns_longest_first(alg, space)
    dead = set(eliminated)
    keep = [i for i in range(alg.dim) if i not in dead]
    local = {b: i for i, b in enumerate(keep)}

    def project(elem: dict):
        vec = reducer.residue(alg.elem_vector(elem))
        return {local[b]: vec[b] for b in keep if vec[b] != alg.field.zero}

    mult = {}
    for bi in keep:
        for bj in keep:
            prod = alg.product(bi, bj)
            proj = project(prod) if prod else {}
            if proj:
                mult[(local[bi], local[bj])] = proj
    return mult, keep, local, project


# ---------------------------------------------------------------------------
# algebra homomorphisms


class AlgebraHom:
    """A homomorphism given by its images on the source basis."""

    def __init__(self, source: FDAlgebra, target: FDAlgebra, images, from_perpendicular=False):
        self.source = source
        self.target = target
        self.images = tuple(dict(img) for img in images)
        self.from_perpendicular = from_perpendicular

    def image_elem(self, elem: dict) -> dict:
        out = {}
        for i, c in elem.items():
            out = self.target.elem_add(out, self.target.elem_scale(c, self.images[i]))
        return out

    def is_unital(self) -> bool:
        return self.image_elem(self.source.unit()) == self.target.unit()

    def is_multiplicative(self) -> bool:
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                lhs = self.image_elem(self.source.product(i, j))
                rhs = self.target.elem_mul(self.images[i], self.images[j])
                if lhs != rhs:
                    return False
        return True

    def kernel_dim(self) -> int:
        rows = [self.target.elem_vector(img) for img in self.images]
        if not rows:
            return 0
        mat = Matrix(self.target.field, rows, self.target.dim, _normalized=True)
        return self.source.dim - mat.rank

    def is_injective(self) -> bool:
        return self.kernel_dim() == 0
