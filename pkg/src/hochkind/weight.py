"""Weight-resolved cochain complexes over a finite weight window.

A WeightComplex holds named basis elements filed into slots keyed by
(degree, weight, auxWeight) with weight in [0, window], and a differential
split into three components shifting weight by -1, 0, +1 (each raising
degree by 1).  Entries that would leave the window are dropped by the
builders, so d∘d on a window can only fail on slots within weight distance
1 of the upper edge; those slots carry no verdict and are marked BOUNDARY
in every report.  All orderings are deterministic, making exported
artifacts byte-stable across runs.
"""

from __future__ import annotations

import json

from .errors import NotAComplex, SchemaError, WindowOverflow
from .sparse import SparseMatrix, column_prefix_ranks, image_prefix_dims

__all__ = ["SUM", "PRODUCT", "WeightComplex", "BettiRow"]

SUM = "SUM"
PRODUCT = "PRODUCT"


class BettiRow:
    """One line of a weight-resolved cohomology table."""

    __slots__ = ("degree", "weight", "aux", "dim_slot", "dim_h")

    def __init__(self, degree, weight, aux, dim_slot, dim_h):
        self.degree = degree
        self.weight = weight
        self.aux = aux
        self.dim_slot = dim_slot
        self.dim_h = dim_h

    def key(self):
        return (self.degree, self.weight, _aux_sort(self.aux))

    def __repr__(self):
        return (
            f"BettiRow(degree={self.degree}, weight={self.weight}, "
            f"aux={self.aux}, dim_slot={self.dim_slot}, dim_h={self.dim_h})"
        )


def _aux_sort(aux):
    # None sorts before any integer and never mixes with ints in one complex
    return (0, 0) if aux is None else (1, aux)


class WeightComplex:
    """basis: iterable of (name, degree, weight, aux) with unique string
    names; images: {name: {name: coeff}} giving the full differential on the
    window.  Degrees are normalized through the grading mode; each image
    entry must raise degree by 1 and shift weight by -1, 0 or +1."""

    def __init__(self, field, mode, basis, images, totalization, window,
                 label=None):
        if totalization not in (SUM, PRODUCT):
            raise SchemaError(f"unknown totalization {totalization!r}")
        if window < 0:
            raise SchemaError("window must be nonnegative")
        self.field = field
        self.mode = mode
        self.totalization = totalization
        self.window = int(window)
        self.label = label
        self.keys = []
        self.degree = {}
        self.weight = {}
        self.aux = {}
        for name, deg, wt, aux in basis:
            if not isinstance(name, str):
                raise SchemaError(f"basis name {name!r} is not a string")
            if name in self.degree:
                raise SchemaError(f"duplicate basis name {name!r}")
            wt = int(wt)
            if wt < 0:
                raise SchemaError(f"negative weight on {name!r}")
            if wt > self.window:
                raise WindowOverflow(
                    f"{name!r} has weight {wt} > window {self.window}")
            self.keys.append(name)
            self.degree[name] = mode.norm(deg)
            self.weight[name] = wt
            self.aux[name] = aux if aux is None else int(aux)
        self.delta = {-1: {}, 0: {}, 1: {}}
        for src, img in images.items():
            if src not in self.degree:
                raise SchemaError(f"image from unknown basis name {src!r}")
            for dst, c in img.items():
                if dst not in self.degree:
                    raise SchemaError(f"image hits unknown name {dst!r}")
                if field.is_zero(c):
                    continue
                shift = self.weight[dst] - self.weight[src]
                if shift not in (-1, 0, 1):
                    raise SchemaError(
                        f"differential {src!r} -> {dst!r} shifts weight "
                        f"by {shift}")
                if self.degree[dst] != mode.norm(self.degree[src] + 1):
                    raise SchemaError(
                        f"differential {src!r} -> {dst!r} does not raise "
                        f"degree by 1")
                self.delta[shift].setdefault(src, {})[dst] = c
        self._slots = {}
        for name in self.keys:
            slot = (self.degree[name], self.weight[name], self.aux[name])
            self._slots.setdefault(slot, []).append(name)
        self._order_cache = {}

    # differential ------------------------------------------------------

    def d(self, name):
        """Full differential of one basis element, as {name: coeff}."""
        f = self.field
        out = {}
        for shift in (-1, 0, 1):
            for dst, c in self.delta[shift].get(name, {}).items():
                v = f.add(out.get(dst, f.zero), c)
                if f.is_zero(v):
                    out.pop(dst, None)
                else:
                    out[dst] = v
        return out

    def d_el(self, vec):
        """Differential of a sparse vector {name: coeff}."""
        f = self.field
        out = {}
        for name, c in vec.items():
            for dst, v in self.d(name).items():
                nv = f.add(out.get(dst, f.zero), f.mul(c, v))
                if f.is_zero(nv):
                    out.pop(dst, None)
                else:
                    out[dst] = nv
        return out

    def is_boundary_weight(self, weight):
        return weight >= self.window - 1

    def check_interior(self):
        """Assert d∘d = 0 off the window edge.

        Raises NotAComplex when d²(x) != 0 for a source of weight at most
        window-2; returns the sorted list of boundary source names whose d²
        is nonzero (expected whenever truncation drops differential terms).
        """
        defects = []
        for name in self.keys:
            sq = self.d_el(self.d(name))
            if not sq:
                continue
            if self.is_boundary_weight(self.weight[name]):
                defects.append(name)
                continue
            dst = min(sq)
            raise NotAComplex(self.degree[name], (name, dst), sq[dst])
        return sorted(defects)

    # slots and ordering --------------------------------------------------

    def slots(self):
        """Sorted list of (degree, weight, aux) slots present in the window."""
        return sorted(self._slots, key=lambda s: (s[0], s[1], _aux_sort(s[2])))

    def slot_basis(self, slot):
        return list(self._slots.get(slot, ()))

    def dims(self):
        return {slot: len(names) for slot, names in self._slots.items()}

    def total_dim(self):
        return len(self.keys)

    def degrees(self):
        return sorted({self.degree[k] for k in self.keys})

    def ordered_basis(self, degree):
        """Basis names of one degree, ascending (weight, aux, insertion)."""
        cached = self._order_cache.get(degree)
        if cached is None:
            seq = {name: i for i, name in enumerate(self.keys)}
            cached = sorted(
                (k for k in self.keys if self.degree[k] == degree),
                key=lambda k: (self.weight[k], _aux_sort(self.aux[k]), seq[k]),
            )
            self._order_cache[degree] = cached
        return cached

    def matrix_out(self, degree):
        """Sparse matrix of d out of one degree, columns and rows in
        ordered_basis order."""
        cols = self.ordered_basis(degree)
        rows = self.ordered_basis(self.mode.norm(degree + 1))
        rindex = {name: i for i, name in enumerate(rows)}
        entries = {}
        for j, src in enumerate(cols):
            for dst, c in self.d(src).items():
                i = rindex.get(dst)
                if i is None:
                    raise SchemaError(
                        f"differential image {src!r} -> {dst!r} leaves its "
                        f"degree block")
                entries[(i, j)] = c
        return SparseMatrix(self.field, len(rows), len(cols), entries)

    def matrix_in(self, degree):
        """Sparse matrix of d into one degree (zero when no source block)."""
        if self.mode.kind == "Z2":
            prev = (degree + 1) % 2
        else:
            prev = degree - 1
        if prev not in set(self.degrees()):
            return SparseMatrix.zero(
                self.field, len(self.ordered_basis(degree)), 0)
        return self.matrix_out(prev)

    # cohomology ----------------------------------------------------------

    def betti_rows(self):
        """Weight-resolved cohomology attribution, one BettiRow per slot.

        Within each degree the basis is ordered by ascending (weight, aux);
        the cohomology of the windowed complex is attributed to the slots by
        nested column prefixes: a slot receives the growth of
        dim(ker d ∩ prefix) - dim(im d ∩ prefix) across its columns.  Row
        dims therefore always sum to the cohomology of the window
        truncation in each degree.
        """
        rows = []
        for degree in self.degrees():
            cols = self.ordered_basis(degree)
            groups = []
            for k in cols:
                slot = (self.weight[k], self.aux[k])
                if groups and groups[-1][0] == slot:
                    groups[-1][1] += 1
                else:
                    groups.append([slot, 1])
            boundaries = []
            total = 0
            for _, count in groups:
                total += count
                boundaries.append(total)
            m_out = self.matrix_out(degree)
            m_in = self.matrix_in(degree)
            ranks = column_prefix_ranks(m_out, boundaries)
            images = image_prefix_dims(m_in, boundaries)
            prev_ker = 0
            prev_im = 0
            for ((weight, aux), count), bound, rank, imdim in zip(
                    groups, boundaries, ranks, images):
                ker = bound - rank
                rows.append(BettiRow(
                    degree, weight, aux, count,
                    (ker - prev_ker) - (imdim - prev_im)))
                prev_ker = ker
                prev_im = imdim
        rows.sort(key=BettiRow.key)
        return rows

    def cohomology_by_degree(self):
        """{degree: dim H} of the windowed totalization."""
        out = {}
        for degree in self.degrees():
            n = len(self.ordered_basis(degree))
            rank_out = self.matrix_out(degree).rank()
            rank_in = self.matrix_in(degree).rank()
            out[degree] = n - rank_out - rank_in
        return out

    # export --------------------------------------------------------------

    def boundary_mask(self):
        """Sorted slots excluded from verdicts (weight within 1 of the edge)."""
        return [s for s in self.slots() if self.is_boundary_weight(s[1])]

    def to_json_doc(self):
        slots = [
            {
                "degree": deg,
                "weight": wt,
                "auxWeight": aux,
                "dim": len(self._slots[(deg, wt, aux)]),
            }
            for deg, wt, aux in self.slots()
        ]
        diffs = {}
        for shift in (-1, 0, 1):
            trips = []
            for src in self.keys:
                for dst, c in sorted(self.delta[shift].get(src, {}).items()):
                    trips.append([src, dst, self.field.format(c)])
            diffs[str(shift)] = trips
        return {
            "label": self.label,
            "field": self.field.name,
            "mode": self.mode.kind,
            "totalization": self.totalization,
            "window": self.window,
            "slots": slots,
            "differentials": diffs,
            "boundaryMask": [
                {"degree": d, "weight": w, "auxWeight": a}
                for d, w, a in self.boundary_mask()
            ],
        }

    def to_json(self):
        return json.dumps(self.to_json_doc(), indent=2, sort_keys=True) + "\n"

    def to_tsv(self):
        """Betti table, one row per slot: degree, weight, auxWeight,
        slot dimension, attributed cohomology dimension."""
        lines = ["degree\tweight\tauxWeight\tdim\tbetti"]
        for row in self.betti_rows():
            aux = "-" if row.aux is None else str(row.aux)
            lines.append(
                f"{row.degree}\t{row.weight}\t{aux}\t{row.dim_slot}"
                f"\t{row.dim_h}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return (
            f"WeightComplex({self.label or '?'}, {self.totalization}, "
            f"window={self.window}, dim={len(self.keys)})"
        )
