"""Exact dense linear algebra over the rationals and prime fields.

Everything downstream (hom spaces, resolutions, traces) reduces to row
reduction of dense matrices over an exact field; floating point never
appears.  Matrices are desk-scale (dimensions in the low hundreds), stored
row-major as lists of scalars.  Scalars are `fractions.Fraction` over QQ
and plain ints in ``[0, p)`` over GF(p).

A compiled kernel (``strathom._kernel``, built from Cython) accelerates
row reduction when importable; the pure-Python path has identical
semantics and is selected automatically otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from strathom import _kernel as _fast
except Exception:  # pragma: no cover - environment without the extension
    _fast = None


def backend_name() -> str:
    """Name of the active row-reduction backend."""
    return "compiled" if _fast is not None else "python"


# ---------------------------------------------------------------------------
# fields


class RationalField:
    """The field of rational numbers; scalars are Fraction instances."""

    char = 0

    def __repr__(self):
        return "QQ"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def normalize(self, x):
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def parse(self, text: str):
        return Fraction(text)

    def format(self, x) -> str:
        return str(x)

    def tag(self) -> str:
        return "Q"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """GF(p) for a prime p; scalars are ints reduced mod p."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.char = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def normalize(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return self.parse(x)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def parse(self, text: str):
        if "/" in text:
            num, den = text.split("/", 1)
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(text) % self.p

    def format(self, x) -> str:
        return str(x)

    def tag(self) -> str:
        return f"Fp:{self.p}"


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_tag(tag: str):
    """Parse a field tag: "Q" or "Fp:<p>"."""
    if tag == "Q":
        return QQ
    if tag.startswith("Fp:"):
        return GF(int(tag[3:]))
    raise ValueError(f"unknown field tag {tag!r}")


# ---------------------------------------------------------------------------
# row reduction cores


def _rref_python(field, rows, ncols, transform):
    """In-place reduced row echelon form; returns (pivots, transform rows).

    `transform` is either None or an identity-seeded list of rows that
    receives the same row operations, so transform * input == reduced.
    """
    n = len(rows)
    zero = field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, n):
            if rows[i][c] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
            if transform is not None:
                transform[r], transform[pivot_row] = transform[pivot_row], transform[r]
        inv = field.inv(rows[r][c])
        if inv != field.one:
            row = rows[r]
            for j in range(c, ncols):
                row[j] = field.mul(row[j], inv)
            if transform is not None:
                trow = transform[r]
                for j in range(n):
                    trow[j] = field.mul(trow[j], inv)
        prow = rows[r]
        for i in range(n):
            if i == r:
                continue
            factor = rows[i][c]
            if factor == zero:
                continue
            row = rows[i]
            for j in range(c, ncols):
                row[j] = field.sub(row[j], field.mul(factor, prow[j]))
            if transform is not None:
                trow = transform[i]
                psrc = transform[r]
                for j in range(n):
                    trow[j] = field.sub(trow[j], field.mul(factor, psrc[j]))
        pivots.append(c)
        r += 1
        if r == n:
            break
    return pivots


def _rref_core(field, rows, ncols, want_transform):
    """Dispatch to the compiled kernel when available."""
    n = len(rows)
    transform = None
    if want_transform:
        transform = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    if _fast is not None and n and ncols:
        if isinstance(field, PrimeField) and field.p < (1 << 30):
            pivots = _fast.rref_fp(rows, ncols, field.p, transform)
            return rows, pivots, transform
        if field is QQ:
            pivots = _fast.rref_frac(rows, ncols, transform)
            return rows, pivots, transform
    pivots = _rref_python(field, rows, ncols, transform)
    return rows, pivots, transform


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RrefResult:
    reduced: "Matrix"
    pivot_columns: tuple[int, ...]
    transform: "Matrix | None"


class Matrix:
    """Immutable dense matrix over an exact field.

    Rows are lists of normalized scalars.  Zero-row and zero-column shapes
    are legal everywhere; they show up constantly as components of modules.
    """

    __slots__ = ("field", "nrows", "ncols", "rows", "_rref", "_rref_t")

    def __init__(self, field, rows, ncols=None, _normalized=False):
        self.field = field
        rows = list(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        if _normalized:
            self.rows = rows
        else:
            norm = field.normalize
            self.rows = [[norm(x) for x in row] for row in rows]
        for row in self.rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        self.nrows = len(self.rows)
        self.ncols = ncols
        self._rref = None
        self._rref_t = None

    # -- constructors
    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols, _normalized=True)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, _normalized=True)

    @classmethod
    def from_rows(cls, field, rows, ncols):
        return cls(field, rows, ncols)

    @classmethod
    def row_vector(cls, field, entries):
        return cls(field, [list(entries)], len(entries))

    # -- basics
    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    __hash__ = None

    def entry(self, i, j):
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [row[j] for row in self.rows]

    def copy_rows(self):
        return [list(row) for row in self.rows]

    def is_zero(self):
        z = self.field.zero
        return all(x == z for row in self.rows for x in row)

    # -- arithmetic
    def __add__(self, other):
        self._check_shape(other)
        add = self.field.add
        return Matrix(
            self.field,
            [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols,
            _normalized=True,
        )

    def __sub__(self, other):
        self._check_shape(other)
        sub = self.field.sub
        return Matrix(
            self.field,
            [[sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
            self.ncols,
            _normalized=True,
        )

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in row] for row in self.rows], self.ncols, _normalized=True)

    def scale(self, c):
        c = self.field.normalize(c)
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in row] for row in self.rows], self.ncols, _normalized=True)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} * {other.nrows}x{other.ncols}")
        field = self.field
        zero = field.zero
        add, mul = field.add, field.mul
        out = []
        orows = other.rows
        for row in self.rows:
            acc = [zero] * other.ncols
            for k, a in enumerate(row):
                if a == zero:
                    continue
                orow = orows[k]
                for j in range(other.ncols):
                    b = orow[j]
                    if b != zero:
                        acc[j] = add(acc[j], mul(a, b))
            out.append(acc)
        return Matrix(field, out, other.ncols, _normalized=True)

    def transpose(self):
        return Matrix(
            self.field,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
            _normalized=True,
        )

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Matrix(
            self.field,
            [r1 + r2 for r1, r2 in zip(self.rows, other.rows)],
            self.ncols + other.ncols,
            _normalized=True,
        )

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return Matrix(self.field, self.copy_rows() + other.copy_rows(), self.ncols, _normalized=True)

    def submatrix(self, row_indices, col_indices):
        return Matrix(
            self.field,
            [[self.rows[i][j] for j in col_indices] for i in row_indices],
            len(col_indices),
            _normalized=True,
        )

    def _check_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape mismatch")

    # -- reduction
    def rref(self, with_transform=True) -> RrefResult:
        cached = self._rref_t if with_transform else self._rref
        if cached is not None:
            return cached
        rows = self.copy_rows()
        rows, pivots, transform = _rref_core(self.field, rows, self.ncols, with_transform)
        result = RrefResult(
            Matrix(self.field, rows, self.ncols, _normalized=True),
            tuple(pivots),
            Matrix(self.field, transform, self.nrows, _normalized=True) if transform is not None else None,
        )
        if with_transform:
            self._rref_t = result
            self._rref = RrefResult(result.reduced, result.pivot_columns, None)
        else:
            self._rref = result
        return result

    @property
    def rank(self) -> int:
        return len(self.rref(with_transform=False).pivot_columns)

    def right_kernel(self) -> "Matrix":
        """Matrix whose columns span {x : self * x = 0}."""
        res = self.rref(with_transform=False)
        pivots = res.pivot_columns
        red = res.reduced
        free = [c for c in range(self.ncols) if c not in pivots]
        field = self.field
        zero, one = field.zero, field.one
        cols = []
        for f in free:
            vec = [zero] * self.ncols
            vec[f] = one
            for i, p in enumerate(pivots):
                vec[p] = field.neg(red.rows[i][f])
            cols.append(vec)
        rows = [[cols[k][i] for k in range(len(cols))] for i in range(self.ncols)]
        return Matrix(field, rows, len(cols), _normalized=True)

    def left_kernel(self) -> "Matrix":
        """Matrix whose rows span {x : x * self = 0}."""
        return self.transpose().right_kernel().transpose()

    def solve_right(self, b: "Matrix") -> "Matrix | None":
        """A particular solution x of self * x = b, or None.

        Works on the augmented matrix, so no square transform is formed."""
        if b.nrows != self.nrows:
            raise ValueError("shape mismatch in solve")
        aug = self.hstack(b)
        res = aug.rref(with_transform=False)
        zero = self.field.zero
        pivots = [p for p in res.pivot_columns if p < self.ncols]
        if len(pivots) != len(res.pivot_columns):
            return None  # a pivot landed in the right-hand block
        out = [[zero] * b.ncols for _ in range(self.ncols)]
        for i, p in enumerate(pivots):
            out[p] = res.reduced.rows[i][self.ncols :]
        return Matrix(self.field, out, b.ncols, _normalized=True)


# ---------------------------------------------------------------------------
# spec-level operations


def rref(m: Matrix):
    """Reduced row echelon form: (reduced, pivot_columns, transform)."""
    res = m.rref(with_transform=True)
    return res.reduced, list(res.pivot_columns), res.transform


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the right kernel of m."""
    return m.right_kernel()


def solve_linear(m: Matrix, b: Matrix) -> Matrix | None:
    """Any particular solution of m * x = b, or None if inconsistent."""
    return m.solve_right(b)


# ---------------------------------------------------------------------------
# incremental row spaces


class RowSpace:
    """A subspace of k^n spanned by rows, kept in reduced echelon form.

    Supports incremental insertion, membership, canonical residues and
    coordinates; this is the workhorse behind traces, radicals, ideal
    closures and quotient constructions.
    """

    def __init__(self, field, ncols):
        self.field = field
        self.ncols = ncols
        self.rows: list[list] = []
        self.pivots: list[int] = []

    @property
    def dim(self):
        return len(self.rows)

    def residue(self, vec):
        """vec reduced against the stored echelon rows (a copy)."""
        field = self.field
        zero = field.zero
        v = [field.normalize(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != zero:
                for j in range(p, self.ncols):
                    v[j] = field.sub(v[j], field.mul(c, row[j]))
        return v

    def contains(self, vec) -> bool:
        zero = self.field.zero
        return all(x == zero for x in self.residue(vec))

    def coords(self, vec):
        """Coefficients of vec over the stored basis rows, or None."""
        field = self.field
        zero = field.zero
        v = [field.normalize(x) for x in vec]
        out = [zero] * len(self.rows)
        for i, (row, p) in enumerate(zip(self.rows, self.pivots)):
            c = v[p]
            if c != zero:
                out[i] = c
                for j in range(p, self.ncols):
                    v[j] = field.sub(v[j], field.mul(c, row[j]))
        if any(x != zero for x in v):
            return None
        return out

    def add(self, vec) -> bool:
        """Insert vec; True if the dimension grew."""
        field = self.field
        zero = field.zero
        v = self.residue(vec)
        pivot = None
        for j, x in enumerate(v):
            if x != zero:
                pivot = j
                break
        if pivot is None:
            return False
        inv = field.inv(v[pivot])
        if inv != field.one:
            v = [field.mul(inv, x) for x in v]
        # eliminate the new pivot from existing rows to stay fully reduced
        for row in self.rows:
            c = row[pivot]
            if c != zero:
                for j in range(self.ncols):
                    row[j] = field.sub(row[j], field.mul(c, v[j]))
        at = 0
        while at < len(self.pivots) and self.pivots[at] < pivot:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, pivot)
        return True

    def add_rows(self, rows) -> bool:
        grew = False
        for row in rows:
            grew = self.add(row) or grew
        return grew

    def add_matrix(self, mat: Matrix) -> bool:
        return self.add_rows(mat.rows)

    def basis_matrix(self) -> Matrix:
        return Matrix(self.field, [list(r) for r in self.rows], self.ncols, _normalized=True)

    def copy(self) -> "RowSpace":
        out = RowSpace(self.field, self.ncols)
        out.rows = [list(r) for r in self.rows]
        out.pivots = list(self.pivots)
        return out
