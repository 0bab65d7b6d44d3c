"""Exact sparse linear algebra over Q and F_p.

Matrices are coordinate dictionaries normalized on construction (zeros
dropped, indices checked); all eliminations pick the lexicographically
smallest pivot (smallest column, then smallest row), so kernels, ranks and
cohomology representatives are reproducible byte-for-byte.
"""

from __future__ import annotations

from .errors import SchemaError
from .fields import PrimeField, QQ

__all__ = [
    "SparseMatrix",
    "rref",
    "kernel_basis",
    "solve",
    "ColumnEliminator",
    "column_prefix_ranks",
    "image_prefix_dims",
]

# primes for the modular full-rank certificate over Q
_FAST_PRIMES = (2147483647, 998244353)


class SparseMatrix:
    """rows x cols matrix with entries in a field, stored as {(i, j): value}."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise SchemaError("negative matrix shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        clean = {}
        for (i, j), v in sorted((entries or {}).items()):
            if not (0 <= i < rows and 0 <= j < cols):
                raise SchemaError(f"entry {(i, j)} outside {rows}x{cols}")
            if not field.is_zero(v):
                clean[(i, j)] = v
        self.entries = clean

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, rows, cols, {})

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, {(i, i): field.one for i in range(n)})

    @classmethod
    def from_dense(cls, field, dense):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {
            (i, j): field.of(v) if isinstance(v, int) else v
            for i, row in enumerate(dense)
            for j, v in enumerate(row)
        }
        return cls(field, rows, cols, entries)

    def triplets(self):
        return [(i, j, v) for (i, j), v in sorted(self.entries.items())]

    def to_dense(self):
        out = [[self.field.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def is_zero(self):
        return not self.entries

    def transpose(self):
        return SparseMatrix(
            self.field,
            self.cols,
            self.rows,
            {(j, i): v for (i, j), v in self.entries.items()},
        )

    def scale(self, c):
        f = self.field
        return SparseMatrix(
            f, self.rows, self.cols,
            {k: f.mul(c, v) for k, v in self.entries.items()},
        )

    def add(self, other):
        self._check_shape(other, same=True)
        f = self.field
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = f.add(out.get(k, f.zero), v)
        return SparseMatrix(f, self.rows, self.cols, out)

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one)))

    def mul(self, other):
        """Matrix product self @ other."""
        if self.field != other.field:
            raise SchemaError("field mismatch in matrix product")
        if self.cols != other.rows:
            raise SchemaError(
                f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        f = self.field
        by_row = {}
        for (j, l), b in other.entries.items():
            by_row.setdefault(j, []).append((l, b))
        out = {}
        for (i, j), a in self.entries.items():
            for l, b in by_row.get(j, ()):
                k = (i, l)
                out[k] = f.add(out.get(k, f.zero), f.mul(a, b))
        return SparseMatrix(f, self.rows, other.cols, out)

    def apply(self, vec):
        """Apply to a sparse column vector {index: value}."""
        f = self.field
        out = {}
        for (i, j), a in self.entries.items():
            v = vec.get(j)
            if v is not None:
                out[i] = f.add(out.get(i, f.zero), f.mul(a, v))
        return {i: v for i, v in out.items() if not f.is_zero(v)}

    def hstack(self, other):
        self._check_shape(other)
        out = dict(self.entries)
        for (i, j), v in other.entries.items():
            out[(i, j + self.cols)] = v
        return SparseMatrix(self.field, self.rows, self.cols + other.cols, out)

    def _check_shape(self, other, same=False):
        if self.field != other.field:
            raise SchemaError("field mismatch")
        if other.rows != self.rows or (same and other.cols != self.cols):
            raise SchemaError("shape mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def __repr__(self):
        return f"SparseMatrix({self.field}, {self.rows}x{self.cols}, nnz={len(self.entries)})"

    # rank ------------------------------------------------------------

    def rank(self):
        if not self.entries:
            return 0
        if self.field == QQ:
            fast = self._modular_full_rank()
            if fast is not None:
                return fast
        return rref(self)[0]

    def _modular_full_rank(self):
        """Certified fast path: full rank of a modular image certifies full
        rank over Q (rank can only drop under reduction).  Returns None when
        the certificate does not apply."""
        best = min(self.rows, self.cols)
        for p in _FAST_PRIMES:
            img = {}
            ok = True
            for (i, j), v in self.entries.items():
                if v.denominator % p == 0:
                    ok = False
                    break
                img[(i, j)] = v.numerator * pow(v.denominator, p - 2, p) % p
            if not ok:
                continue
            if _mod_rank(img, self.rows, self.cols, p) == best:
                return best
        return None


def _mod_rank(entries, rows, cols, p):
    rowdata = {}
    for (i, j), v in entries.items():
        if v % p:
            rowdata.setdefault(i, {})[j] = v % p
    rows_left = sorted(rowdata)
    rank = 0
    for c in range(cols):
        pivot = None
        for i in rows_left:
            if rowdata[i].get(c):
                pivot = i
                break
        if pivot is None:
            continue
        rank += 1
        rows_left.remove(pivot)
        prow = rowdata[pivot]
        pinv = pow(prow[c], p - 2, p)
        for i in rows_left:
            coef = rowdata[i].get(c)
            if coef:
                factor = coef * pinv % p
                target = rowdata[i]
                for j, v in prow.items():
                    target[j] = (target.get(j, 0) - factor * v) % p
                    if not target[j]:
                        del target[j]
        if rank == min(rows, cols):
            break
    return rank


def rref(matrix):
    """Reduced row echelon form with deterministic pivoting.

    Returns (rank, pivots, rowdicts) where pivots is a list of (row, col)
    in elimination order and rowdicts the fully reduced rows keyed by the
    original row index of the pivot.
    """
    f = matrix.field
    rowdata = {}
    for (i, j), v in matrix.entries.items():
        rowdata.setdefault(i, {})[j] = v
    order = sorted(rowdata)
    pivots = []
    done = []
    for c in range(matrix.cols):
        pivot = None
        for i in order:
            if c in rowdata[i]:
                pivot = i
                break
        if pivot is None:
            continue
        order.remove(pivot)
        prow = rowdata.pop(pivot)
        inv = f.inv(prow[c])
        prow = {j: f.mul(inv, v) for j, v in prow.items()}
        for i in order:
            coef = rowdata[i].get(c)
            if coef is not None:
                target = rowdata[i]
                for j, v in prow.items():
                    nv = f.sub(target.get(j, f.zero), f.mul(coef, v))
                    if f.is_zero(nv):
                        target.pop(j, None)
                    else:
                        target[j] = nv
        for _, row in done:
            coef = row.get(c)
            if coef is not None:
                for j, v in prow.items():
                    nv = f.sub(row.get(j, f.zero), f.mul(coef, v))
                    if f.is_zero(nv):
                        row.pop(j, None)
                    else:
                        row[j] = nv
        pivots.append((pivot, c))
        done.append((pivot, prow))
    return len(pivots), pivots, dict(done)


def kernel_basis(matrix):
    """Deterministic sparse basis of ker(matrix), one vector per free column."""
    f = matrix.field
    rank, pivots, rows = rref(matrix)
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for c in range(matrix.cols):
        if c in pivot_cols:
            continue
        vec = {c: f.one}
        for r, pc in pivots:
            coef = rows[r].get(c)
            if coef is not None:
                vec[pc] = f.neg(coef)
        basis.append({j: v for j, v in sorted(vec.items())})
    return basis


def solve(matrix, rhs):
    """One solution of matrix @ x = rhs (sparse dicts), or None."""
    f = matrix.field
    aug = dict(matrix.entries)
    for i, v in rhs.items():
        if not f.is_zero(v):
            aug[(i, matrix.cols)] = v
    augmented = SparseMatrix(f, matrix.rows, matrix.cols + 1, aug)
    rank, pivots, rows = rref(augmented)
    x = {}
    for r, c in pivots:
        if c == matrix.cols:
            return None
        val = rows[r].get(matrix.cols)
        if val is not None:
            x[c] = val
    return x


class ColumnEliminator:
    """Incremental column-space elimination with smallest-row pivots."""

    def __init__(self, field):
        self.field = field
        self.pivots = {}  # leading row index -> normalized column dict
        self.rank = 0

    def reduce(self, vec):
        f = self.field
        vec = {i: v for i, v in vec.items() if not f.is_zero(v)}
        while vec:
            lead = min(vec)
            piv = self.pivots.get(lead)
            if piv is None:
                return vec, lead
            coef = vec[lead]
            for i, v in piv.items():
                nv = f.sub(vec.get(i, f.zero), f.mul(coef, v))
                if f.is_zero(nv):
                    vec.pop(i, None)
                else:
                    vec[i] = nv
        return vec, None

    def add(self, vec):
        """Insert a column; returns True when it enlarged the span."""
        f = self.field
        red, lead = self.reduce(vec)
        if lead is None:
            return False
        inv = f.inv(red[lead])
        self.pivots[lead] = {i: f.mul(inv, v) for i, v in red.items()}
        self.rank += 1
        return True

    def contains(self, vec):
        _, lead = self.reduce(vec)
        return lead is None


def _columns(matrix):
    cols = {}
    for (i, j), v in matrix.entries.items():
        cols.setdefault(j, {})[i] = v
    return cols


def column_prefix_ranks(matrix, boundaries):
    """rank(matrix[:, :k]) for each k in boundaries (ascending)."""
    cols = _columns(matrix)
    elim = ColumnEliminator(matrix.field)
    out = []
    bs = sorted(boundaries)
    next_b = 0
    for k in range(matrix.cols + 1):
        while next_b < len(bs) and bs[next_b] == k:
            out.append(elim.rank)
            next_b += 1
        if k < matrix.cols and k in cols:
            elim.add(cols[k])
    while next_b < len(bs):
        out.append(elim.rank)
        next_b += 1
    return out


def image_prefix_dims(matrix, boundaries):
    """dim(im(matrix) ∩ span(e_0..e_{k-1})) for each k in boundaries.

    Uses dim(U ∩ P_k) = dim U + k - dim(U + P_k), built incrementally by
    feeding identity columns into an eliminator seeded with im(matrix).
    """
    f = matrix.field
    elim = ColumnEliminator(f)
    for j, col in sorted(_columns(matrix).items()):
        elim.add(col)
    r = elim.rank
    out = []
    bs = sorted(boundaries)
    next_b = 0
    for k in range(matrix.rows + 1):
        while next_b < len(bs) and bs[next_b] == k:
            out.append(r + k - elim.rank)
            next_b += 1
        if k < matrix.rows:
            elim.add({k: f.one})
    while next_b < len(bs):
        out.append(r + matrix.rows - elim.rank)
        next_b += 1
    return out
