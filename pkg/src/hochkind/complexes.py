"""Finite cochain complexes of based vector spaces and their cohomology.

A complex stores one sparse matrix per degree, shaped (dim C^{d+1}, dim C^d);
matrices act on column vectors.  Z-graded complexes live on a contiguous
degree range; cyclic=True gives the 2-periodic Z/2 case where d wraps from
degree 1 back to degree 0.
"""

from __future__ import annotations

from .errors import NotAComplex, SchemaError
from .sparse import ColumnEliminator, SparseMatrix, kernel_basis

__all__ = ["FiniteComplex"]


class FiniteComplex:
    def __init__(self, field, dims, diffs, basis=None, cyclic=False):
        """dims: {degree: dimension}; diffs: {degree: SparseMatrix out of it};
        basis: optional {degree: [labels]} for reporting."""
        self.field = field
        self.cyclic = bool(cyclic)
        self.dims = dict(dims)
        if cyclic and sorted(self.dims) != [0, 1]:
            raise SchemaError("cyclic complex must have degrees {0, 1}")
        self.basis = basis or {}
        self.diffs = {}
        for d, n in sorted(self.dims.items()):
            nxt = self._next(d)
            target = self.dims.get(nxt, 0) if nxt is not None else 0
            mat = diffs.get(d)
            if mat is None:
                mat = SparseMatrix.zero(field, target, n)
            if mat.rows != target or mat.cols != n:
                raise SchemaError(
                    f"differential out of degree {d} has shape "
                    f"{mat.rows}x{mat.cols}, expected {target}x{n}"
                )
            self.diffs[d] = mat

    def _next(self, d):
        if self.cyclic:
            return (d + 1) % 2
        return d + 1 if (d + 1) in self.dims else None

    def degrees(self):
        return sorted(self.dims)

    def differential(self, d):
        mat = self.diffs.get(d)
        if mat is None:
            mat = SparseMatrix.zero(self.field, 0, self.dims.get(d, 0))
        return mat

    def check(self):
        """Raise NotAComplex at the first nonzero entry of d∘d."""
        for d in self.degrees():
            nxt = self._next(d)
            if nxt is None:
                continue
            second = self.diffs.get(nxt)
            if second is None:
                continue
            comp = second.mul(self.diffs[d])
            if not comp.is_zero():
                (i, j), v = sorted(comp.entries.items())[0]
                raise NotAComplex(d, (i, j), self.field.format(v))

    def cohomology(self, with_representatives=False):
        """dim H^d per degree; optionally deterministic cocycle representatives
        (kernel vectors reduced against the image, smallest pivots first)."""
        dims_h = {}
        reps = {}
        for d in self.degrees():
            out = self.differential(d)
            kernel = kernel_basis(out)
            prev = self._prev(d)
            elim = ColumnEliminator(self.field)
            if prev is not None:
                img = {}
                for (i, j), v in self.diffs[prev].entries.items():
                    img.setdefault(j, {})[i] = v
                for j in sorted(img):
                    elim.add(img[j])
            chosen = []
            for vec in kernel:
                if elim.add(vec):
                    chosen.append(vec)
            dims_h[d] = len(chosen)
            reps[d] = chosen
        if with_representatives:
            return dims_h, reps
        return dims_h

    def _prev(self, d):
        if self.cyclic:
            return (d - 1) % 2
        return d - 1 if (d - 1) in self.dims else None

    def euler_characteristic(self):
        if self.cyclic:
            return self.dims.get(0, 0) - self.dims.get(1, 0)
        return sum((-1) ** d * n for d, n in self.dims.items())

    def total_dim(self):
        return sum(self.dims.values())
