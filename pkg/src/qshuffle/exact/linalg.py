"""Exact sparse matrices and elimination over a scalar field from ``field.py``.

``rank_kernel_image`` is the production routine: fraction-free (Bareiss) elimination.  In
the generic regime rows are first scaled into Q[q] so the elimination runs on polynomials
and the exact divisions of the Bareiss recurrence keep degrees under control.  In the
cyclotomic regime the same recurrence runs directly on field elements.

``naive_rank`` / ``naive_kernel`` are a deliberately simple dense Gauss-Jordan over field
elements, kept as an independent oracle for tests.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from flint import fmpq_poly

from .field import Field, FieldElem, GenericField, RationalFunction, _make_laurent


class SparseMatrix:
    """Row-major sparse matrix; ``rows[i]`` maps column index -> nonzero FieldElem."""

    __slots__ = ("nrows", "ncols", "field", "rows")

    def __init__(self, nrows: int, ncols: int, field: Field, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        self.rows: dict[int, dict[int, FieldElem]] = {}
        if rows:
            for i, row in rows.items():
                clean = {j: v for j, v in row.items() if not v.is_zero()}
                if clean:
                    self.rows[i] = clean

    @classmethod
    def from_dense(cls, field: Field, data) -> "SparseMatrix":
        data = [[field(x) for x in row] for row in data]
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, field, {i: dict(enumerate(r)) for i, r in enumerate(data)})

    def add_entry(self, i: int, j: int, value: FieldElem):
        """Accumulate ``value`` into entry (i, j), dropping it if it cancels."""
        row = self.rows.setdefault(i, {})
        old = row.get(j)
        new = value if old is None else old + value
        if new.is_zero():
            row.pop(j, None)
            if not row:
                del self.rows[i]
        else:
            row[j] = new

    def get(self, i: int, j: int) -> FieldElem:
        return self.rows.get(i, {}).get(j, self.field.zero)

    def entries(self):
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def to_dense(self) -> list[list[FieldElem]]:
        out = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        t = SparseMatrix(self.ncols, self.nrows, self.field)
        for i, j, v in self.entries():
            t.rows.setdefault(j, {})[i] = v
        return t

    def matvec(self, v: dict[int, FieldElem]) -> dict[int, FieldElem]:
        """Product with a sparse column vector (dict index -> value)."""
        out = {}
        for i, row in self.rows.items():
            acc = None
            for j, a in row.items():
                x = v.get(j)
                if x is not None:
                    t = a * x
                    acc = t if acc is None else acc + t
            if acc is not None and not acc.is_zero():
                out[i] = acc
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field is not other.field:
            raise TypeError("matrices over different fields")
        out = SparseMatrix(self.nrows, other.ncols, self.field)
        for i, row in self.rows.items():
            acc: dict[int, FieldElem] = {}
            for k, a in row.items():
                orow = other.rows.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    t = a * b
                    old = acc.get(j)
                    acc[j] = t if old is None else old + t
            clean = {j: v for j, v in acc.items() if not v.is_zero()}
            if clean:
                out.rows[i] = clean
        return out

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.field!r})"


@dataclass
class RankResult:
    rank: int
    kernel: list = dc_field(default_factory=list)  # sparse column vectors, dict col -> FieldElem
    pivots: list = dc_field(default_factory=list)  # pivot (= image basis) column indices
    pivot_rows: list = dc_field(default_factory=list)  # rows whose restriction has full rank


# -- fraction-free elimination -----------------------------------------------------------


class _PolyRing:
    """Q[q] via flint polynomials."""

    one = fmpq_poly([1])

    @staticmethod
    def exquo(a, b):
        return a // b

    @staticmethod
    def to_field(field, a):
        return _make_laurent(field, 0, a)


class _FieldRing:
    def __init__(self, field):
        self.one = field.one

    @staticmethod
    def exquo(a, b):
        return a * b.inv()

    @staticmethod
    def to_field(field, a):
        return a


def _poly_rows(M: SparseMatrix):
    """Scale every row of a generic-regime matrix into Q[q] (row scaling keeps kernel and pivots)."""
    out = {}
    for i, row in M.rows.items():
        emin = min(v.e for v in row.values())
        lcm = fmpq_poly([1])
        for v in row.values():
            if not v._poly:
                g = lcm.gcd(v.den)
                lcm = lcm * (v.den // g)
        new = {}
        for j, v in row.items():
            p = v.num if v._poly else v.num * (lcm // v.den)
            if v._poly and not lcm.is_one():
                p = p * lcm
            shift = v.e - emin
            new[j] = p.left_shift(shift) if shift else p
        out[i] = new
    return out


def _bareiss(rows: dict, ncols: int, ring):
    """In-place fraction-free row echelon form.

    Returns the list of (row, col) pivots in elimination order; pivot rows are left holding
    their echelon rows.  Pivoting: leftmost column first, then the smallest row index.
    """
    active = sorted(rows)
    prev = ring.one
    prev_is_one = True
    pivots = []
    for col in range(ncols):
        if not active:
            break
        sel = None
        for idx, r in enumerate(active):
            if col in rows[r]:
                sel = idx
                break
        if sel is None:
            continue
        pr = active.pop(sel)
        prow = rows[pr]
        a = prow[col]
        tail = [(j, v) for j, v in prow.items() if j != col]
        for r in active:
            row = rows[r]
            b = row.pop(col, None)
            if b is None:
                if prev_is_one:
                    for j in row:
                        row[j] = a * row[j]
                else:
                    for j in row:
                        row[j] = ring.exquo(a * row[j], prev)
                continue
            new = {j: a * v for j, v in row.items()}
            for j, v in tail:
                t = b * v
                old = new.get(j)
                new[j] = -t if old is None else old - t
            if prev_is_one:
                rows[r] = {j: v for j, v in new.items() if not v.is_zero()}
            else:
                rows[r] = {j: ring.exquo(v, prev) for j, v in new.items() if not v.is_zero()}
        prev = a
        prev_is_one = False
        pivots.append((pr, col))
    return pivots


def _prepare(M: SparseMatrix):
    if isinstance(M.field, GenericField):
        return _poly_rows(M), _PolyRing
    return {i: dict(r) for i, r in M.rows.items()}, _FieldRing(M.field)


def rank(M: SparseMatrix) -> int:
    rows, ring = _prepare(M)
    return len(_bareiss(rows, M.ncols, ring))


def rank_kernel_image(M: SparseMatrix, want_kernel: bool = True) -> RankResult:
    """Exact rank, a kernel basis (one vector per free column) and the pivot columns."""
    rows, ring = _prepare(M)
    pivots = _bareiss(rows, M.ncols, ring)
    res = RankResult(
        rank=len(pivots),
        pivots=[c for _, c in pivots],
        pivot_rows=sorted(r for r, _ in pivots),
    )
    if want_kernel:
        res.kernel = _back_substitute(M.field, ring, [(c, rows[r]) for r, c in pivots], M.ncols)
    return res


def _back_substitute(field, ring, echelon, ncols):
    """Kernel basis from echelon rows [(pivot_col, row)]; x_free = 1 for each free column."""
    conv = [
        (c, {j: ring.to_field(field, v) for j, v in row.items()}) for c, row in echelon
    ]
    pivot_cols = {c for c, _ in conv}
    inv_piv = [row[c].inv() for c, row in conv]
    kernel = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        x = {f: field.one}
        for (c, row), ip in zip(reversed(conv), reversed(inv_piv)):
            acc = None
            for j, v in row.items():
                if j != c and j in x:
                    t = v * x[j]
                    acc = t if acc is None else acc + t
            if acc is not None and not acc.is_zero():
                x[c] = -(acc * ip)
        kernel.append(x)
    return kernel


def kernel_basis(M: SparseMatrix) -> list[dict[int, FieldElem]]:
    return rank_kernel_image(M).kernel


# -- dense oracle --------------------------------------------------------------------------


def naive_rref(field: Field, dense):
    """Plain Gauss-Jordan elimination with division; returns (rref rows, pivot columns)."""
    a = [[field(x) for x in row] for row in dense]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    pivots = []
    for c in range(n):
        p = next((i for i in range(r, m) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inv()
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def naive_rank(field: Field, dense) -> int:
    return len(naive_rref(field, dense)[1])


def naive_kernel(field: Field, dense) -> list[list[FieldElem]]:
    rref, pivots = naive_rref(field, dense)
    n = len(dense[0]) if dense else 0
    out = []
    for f in range(n):
        if f in pivots:
            continue
        x = [field.zero] * n
        x[f] = field.one
        for row, c in zip(rref, pivots):
            x[c] = -row[f]
        out.append(x)
    return out


def solve_left_inverse(field: Field, B: list[list[FieldElem]]) -> list[list[FieldElem]]:
    """Inverse of a square matrix (dense lists); raises if singular."""
    n = len(B)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(B)]
    rref, pivots = naive_rref(field, aug)
    if pivots[:n] != list(range(n)) or len(rref) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rref]
