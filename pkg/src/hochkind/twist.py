"""Maurer-Cartan elements and defects, twisted algebras and modules,
finitely generated twisted modules with their hom complexes, and the
uncurving construction.

A finitely generated twisted module is a pair (V, q): the connection q
lives in the curved algebra End(V)⊗A and the twisted-module equation
dq + q² = 1⊗h says exactly that q has Maurer-Cartan defect zero there.
All hom-complex differentials are assembled on explicit bases and their
squares are checked entry-exactly; with this ⊗-sign convention the check
succeeds precisely when the curvature is central.
"""

from __future__ import annotations

from itertools import product

from .complexes import FiniteComplex
from .errors import (
    AlgebraMismatch,
    FieldNotFinite,
    HochkindError,
    NonCentralCurvature,
    NotAComplex,
    SchemaError,
    SearchSpaceTooLarge,
    WrongDegree,
)
from .graded import (
    CurvedAlgebra,
    CurvedModule,
    GradedSpace,
    el_add,
    el_neg,
    el_scale,
    el_sub,
    element_degree,
    end_of_graded_space,
    format_element,
    pair_name,
    tensor,
)

__all__ = [
    "DEFAULT_MC_BOUND",
    "MCElement",
    "mc_defect",
    "mc_element",
    "mc_enumerate",
    "strip_aux",
    "twist_algebra",
    "twist_module",
    "TwistedModule",
    "HomComplex",
    "end_complex",
    "end_algebra",
    "uncurve",
    "free_curved_module",
    "complex_of_algebra",
    "complex_of_module",
    "same_algebra",
]

DEFAULT_MC_BOUND = 10 ** 6


def strip_aux(a):
    """The same curved algebra with auxWeights forgotten."""
    if a.space.aux is None:
        return a
    space = GradedSpace(a.space.basis,
                        {b: a.space.deg(b) for b in a.space.basis})
    return CurvedAlgebra(
        a.field, a.mode, space, a.unit,
        {k: dict(v) for k, v in a.mul_table.items()},
        {k: dict(v) for k, v in a.diff_table.items()},
        dict(a.curvature), augmented=a.augmented, label=a.label,
    )


def _aux_survives(a, x, curv):
    """auxWeights stay a valid grading after twisting by x iff x sits in
    weight 0 and the new curvature is weight-homogeneous."""
    if a.space.aux is None:
        return False
    if any(a.space.aux_of(n) != 0 for n in x):
        return False
    return len({a.space.aux_of(n) for n in curv}) <= 1


def same_algebra(a, b):
    """Structural equality of presentations, not isomorphism."""
    return (
        a.field == b.field
        and a.mode == b.mode
        and a.space == b.space
        and a.unit == b.unit
        and a.mul_table == b.mul_table
        and a.diff_table == b.diff_table
        and a.curvature == b.curvature
    )


def _check_degree_one(a, x):
    try:
        deg = element_degree(a.mode, a.space, x)
    except SchemaError:
        raise WrongDegree(
            f"expected a homogeneous degree-1 element, got a mixed one: "
            f"{format_element(a.field, x)}"
        )
    if deg is not None and deg != a.mode.norm(1):
        raise WrongDegree(
            f"expected a degree-1 element, got degree {deg}: "
            f"{format_element(a.field, x)}"
        )


def mc_defect(a, x):
    """d(x) + x² - h; zero exactly for Maurer-Cartan elements."""
    _check_degree_one(a, x)
    field = a.field
    out = el_add(field, a.diff(x), a.mul(x, x))
    return el_sub(field, out, a.curvature)


class MCElement:
    """A degree-1 element stored together with its defect."""

    def __init__(self, algebra, value):
        self.algebra = algebra
        self.value = dict(value)
        self.defect = mc_defect(algebra, value)

    @property
    def is_mc(self):
        return not self.defect

    def __repr__(self):
        status = "MC" if self.is_mc else "defective"
        return f"MCElement({format_element(self.algebra.field, self.value)}, {status})"


def mc_element(a, x):
    return MCElement(a, x)


def mc_enumerate(a, max_points=DEFAULT_MC_BOUND):
    """All Maurer-Cartan elements, by brute force over the coordinates of
    the degree-1 part; finite fields only."""
    field = a.field
    if not field.finite:
        raise FieldNotFinite("mc_enumerate needs a finite ground field")
    odd_names = [b for b in a.basis() if a.deg(b) == a.mode.norm(1)]
    total = field.char ** len(odd_names)
    if total > max_points:
        raise SearchSpaceTooLarge(
            f"{field.char}^{len(odd_names)} = {total} points exceeds the "
            f"bound {max_points}"
        )
    found = []
    for coords in product(field.elements(), repeat=len(odd_names)):
        x = {n: c for n, c in zip(odd_names, coords) if not field.is_zero(c)}
        el = MCElement(a, x)
        if el.is_mc:
            found.append(el)
    return found


def twist_algebra(a, x, label=None):
    """Same multiplication, d^x = d + [x,-], curvature h + dx + x²."""
    _check_degree_one(a, x)
    field = a.field
    diff = {}
    for b in a.basis():
        img = el_add(field, a.diff_basis(b), a.bracket(x, {b: field.one}))
        if img:
            diff[b] = img
    curv = el_add(field, a.curvature,
                  el_add(field, a.diff(x), a.mul(x, x)))
    space = a.space
    if space.aux is not None and not _aux_survives(a, x, curv):
        space = GradedSpace(space.basis, {b: space.deg(b) for b in space.basis})
    # the canonical augmentation survives twisting: x is reduced (degree 1),
    # so ε kills [x,-]-images and the new curvature terms dx + x²
    out = CurvedAlgebra(
        field, a.mode, space, a.unit,
        {k: dict(v) for k, v in a.mul_table.items()},
        diff, curv, augmented=a.augmented,
        label=label or (f"{a.label}^x" if a.label else None),
    )
    rep = out.validate()
    if not rep.ok:
        raise HochkindError(f"twisted algebra failed validation: {rep.message()}")
    return out


def twist_module(m, x, label=None):
    """d^[x] = d + x·(-) on a left module (or the left half of a bimodule);
    the result is a module over twist_algebra(A, x), right action untouched."""
    if m.left_algebra is None:
        raise SchemaError("twist_module needs a left action")
    a = m.left_algebra
    _check_degree_one(a, x)
    field = m.field
    twisted = twist_algebra(a, x)
    diff = {}
    for mm in m.space.basis:
        img = el_add(field, m.diff({mm: field.one}),
                     m.act_left(x, {mm: field.one}))
        if img:
            diff[mm] = img
    space = m.space
    if space.aux is not None and any(a.space.aux_of(n) != 0 for n in x):
        space = GradedSpace(space.basis, {b: space.deg(b) for b in space.basis})
    out = CurvedModule(
        twisted, space, m.side, diff,
        left_action={k: dict(v) for k, v in m.left_table.items()},
        right_action={k: dict(v) for k, v in m.right_table.items()},
        right_algebra=m.right_algebra if m.side == CurvedModule.BIMODULE else None,
        label=label or (f"{m.label}^[x]" if m.label else None),
    )
    rep = out.validate()
    if not rep.ok:
        raise HochkindError(f"twisted module failed validation: {rep.message()}")
    return out


class TwistedModule:
    """Finitely generated twisted module (V, q) over a curved algebra.

    q is stored as an element of the curved algebra End(V)⊗A built from the
    adapted End basis; the defect dq + q² - 1⊗h is computed there and kept.
    """

    def __init__(self, algebra, vspace, qmat, label=None):
        self.algebra = algebra
        self.vspace = vspace
        field = algebra.field
        self.end = end_of_graded_space(field, algebra.mode, vspace)
        # q mixes auxWeights freely, so the ambient algebra forgets them
        self.ambient = tensor(self.end, strip_aux(algebra))
        q = {}
        self.qmat = {}
        for (r, c), el in qmat.items():
            if r not in vspace or c not in vspace:
                raise SchemaError(f"q entry ({r}, {c}) names unknown generators")
            clean = {n: v for n, v in el.items() if not field.is_zero(v)}
            if not clean:
                continue
            self.qmat[(r, c)] = clean
            unit_part = self.end.matrix_unit(r, c)
            for ename, ec in unit_part.items():
                for aname, ac in clean.items():
                    q = el_add(field, q,
                               {pair_name(ename, aname): field.mul(ec, ac)})
        _check_degree_one(self.ambient, q)
        self.q = q
        self.defect = mc_defect(self.ambient, q)
        self.label = label

    @property
    def rank(self):
        return self.vspace.dim

    def __repr__(self):
        tag = self.label or f"rank {self.rank}"
        flat = "flat" if not self.defect else "defective"
        return f"TwistedModule({tag}, {flat})"


class HomComplex:
    """Hom(V_t, V_s)⊗A with the two-sided twisted differential
    D(f) = d₀f + q_s·f - (-1)^{|f|} f·q_t.

    Basis keys are (row generator of s, column generator of t, algebra
    basis name); d₀(e⊗a) = (-1)^{|e|} e⊗da.
    """

    def __init__(self, t, s):
        if not same_algebra(t.algebra, s.algebra):
            raise AlgebraMismatch("hom complex needs one base algebra")
        # defects live in End(V)⊗A for different V; they can only cancel
        # between the two sides when both are scalar, 1⊗z with the same z
        dt = _scalar_defect(t)
        ds = _scalar_defect(s)
        if dt is None or ds is None or dt != ds:
            raise HochkindError(
                "hom complex needs connections with equal scalar defects"
            )
        self.source = t
        self.target = s
        self.algebra = t.algebra
        a = self.algebra
        field = a.field
        mode = a.mode

        keys = []
        degree = {}
        for r in s.vspace.basis:
            for c in t.vspace.basis:
                dphi = s.vspace.deg(r) - t.vspace.deg(c)
                for aname in a.basis():
                    key = (r, c, aname)
                    keys.append(key)
                    degree[key] = mode.norm(dphi + a.space.deg(aname))
        self.keys = keys
        self.degree = degree

        def par(d):
            return mode.parity(d)

        qs = s.qmat
        qt = t.qmat
        images = {}
        for (r, c, aname) in keys:
            pphi = par(s.vspace.deg(r) - t.vspace.deg(c))
            pf = par(degree[(r, c, aname)])
            img = {}
            for n, cv in a.diff_basis(aname).items():
                img = el_add_keyed(field, img, (r, c, n),
                                   field.neg(cv) if pphi else cv)
            for (r2, c2), el in qs.items():
                if c2 != r:
                    continue
                for b, bc in el.items():
                    sign = -1 if (par(a.space.deg(b)) and pphi) else 1
                    for n, cv in a.mul_basis(b, aname).items():
                        coeff = field.mul(bc, cv)
                        if sign < 0:
                            coeff = field.neg(coeff)
                        img = el_add_keyed(field, img, (r2, c, n), coeff)
            pa = par(a.space.deg(aname))
            for (r2, c2), el in qt.items():
                if r2 != c:
                    continue
                pe = par(t.vspace.deg(r2) - t.vspace.deg(c2))
                for b, bc in el.items():
                    sign = 1 if pf else -1
                    if pe and pa:
                        sign = -sign
                    for n, cv in a.mul_basis(aname, b).items():
                        coeff = field.mul(bc, cv)
                        if sign < 0:
                            coeff = field.neg(coeff)
                        img = el_add_keyed(field, img, (r, c2, n), coeff)
            if img:
                images[(r, c, aname)] = img
        self.images = images

        if mode.kind == "Z2":
            degs = [0, 1]
            cyclic = True
        else:
            if keys:
                lo = min(degree.values())
                hi = max(degree.values())
            else:
                lo, hi = 0, 0
            degs = list(range(lo, hi + 1))
            cyclic = False
        by_degree = {d: [] for d in degs}
        for key in keys:
            by_degree[degree[key]].append(key)
        self.by_degree = by_degree
        self.position = {}
        for d, ks in by_degree.items():
            for i, key in enumerate(ks):
                self.position[key] = (d, i)

        from .sparse import SparseMatrix

        dims = {d: len(ks) for d, ks in by_degree.items()}
        diffs = {}
        for d in degs:
            nxt = (d + 1) % 2 if cyclic else d + 1
            if not cyclic and nxt not in dims:
                continue
            entries = {}
            for j, key in enumerate(by_degree[d]):
                for outkey, cv in images.get(key, {}).items():
                    dd, i = self.position[outkey]
                    if dd != nxt:
                        raise HochkindError("differential is not degree +1")
                    entries[(i, j)] = cv
            diffs[d] = SparseMatrix(field, dims.get(nxt, 0), dims[d], entries)
        self.complex = FiniteComplex(
            field, dims, diffs,
            basis={d: ["|".join(k) for k in ks] for d, ks in by_degree.items()},
            cyclic=cyclic,
        )
        try:
            self.complex.check()
        except NotAComplex as e:
            raise NonCentralCurvature(
                f"hom-complex differential does not square to zero "
                f"(curvature not central): {e}"
            )

    def apply_d(self, f):
        field = self.algebra.field
        out = {}
        for key, cv in f.items():
            for outkey, c2 in self.images.get(key, {}).items():
                out = el_add_keyed(field, out, outkey, field.mul(cv, c2))
        return out

    def identity(self):
        if self.source is not self.target and (
                self.source.vspace != self.target.vspace
                or self.source.qmat != self.target.qmat):
            raise AlgebraMismatch("identity needs source = target")
        unit = self.algebra.unit
        return {(g, g, unit): self.algebra.field.one
                for g in self.source.vspace.basis}

    def compose(self, f, other, g):
        """self = Hom(t,s), other = Hom(u,t): f∘g ∈ Hom(u,s) as a dict.
        (e⊗a)∘(e'⊗b) = (-1)^{|e'||a|} (ee')⊗ab on matrix-unit terms."""
        if other.target is not self.source and \
                other.target.vspace != self.source.vspace:
            raise AlgebraMismatch("composition needs matching middle module")
        a = self.algebra
        field = a.field
        par = a.mode.parity
        out = {}
        for (r, c, aname), cf in f.items():
            pa = par(a.space.deg(aname))
            for (r2, c2, bname), cg in g.items():
                if r2 != c:
                    continue
                pe = par(other.target.vspace.deg(r2) -
                         other.source.vspace.deg(c2))
                sign = -1 if (pe and pa) else 1
                for n, cv in a.mul_basis(aname, bname).items():
                    coeff = field.mul(field.mul(cf, cg), cv)
                    if sign < 0:
                        coeff = field.neg(coeff)
                    out = el_add_keyed(field, out, (r, c2, n), coeff)
        return out

    def element_degree(self, f):
        deg = None
        for key in f:
            d = self.degree[key]
            if deg is None:
                deg = d
            elif deg != d:
                raise SchemaError("hom element mixes degrees")
        return deg


def el_add_keyed(field, out, key, coeff):
    acc = field.add(out.get(key, field.zero), coeff)
    if field.is_zero(acc):
        out.pop(key, None)
    else:
        out[key] = acc
    return out


def _scalar_defect(t):
    """The defect as an element of A when it is of the form I⊗z, else None."""
    prefix = pair_name("I", "")
    out = {}
    for name, c in t.defect.items():
        if not name.startswith(prefix):
            return None
        out[name[len(prefix):]] = c
    return out


def end_complex(t, s=None):
    return HomComplex(t, s if s is not None else t)


def end_algebra(t, label=None):
    """End(V)⊗A with differential d₀ + [q,-] and zero curvature: an honest
    dg algebra whenever the base curvature is central."""
    T = t.ambient
    field = T.field
    diff = {}
    for b in T.basis():
        img = el_add(field, T.diff_basis(b), T.bracket(t.q, {b: field.one}))
        if img:
            diff[b] = img
    out = CurvedAlgebra(
        field, T.mode, T.space, T.unit,
        {k: dict(v) for k, v in T.mul_table.items()},
        diff, {}, augmented=False,
        label=label or (f"End({t.label})" if t.label else None),
    )
    rep = out.validate()
    if not rep.ok:
        raise NonCentralCurvature(
            f"twisted endomorphisms form no dg algebra: {rep.message()}"
        )
    return out


def _complex_from_table(field, mode, space, diff_table):
    from .sparse import SparseMatrix

    if mode.kind == "Z2":
        degs = [0, 1]
        cyclic = True
    else:
        values = [mode.norm(space.deg(b)) for b in space.basis] or [0]
        degs = list(range(min(values), max(values) + 1))
        cyclic = False
    by_degree = {d: [] for d in degs}
    for b in space.basis:
        by_degree[mode.norm(space.deg(b))].append(b)
    position = {}
    for d, ks in by_degree.items():
        for i, b in enumerate(ks):
            position[b] = (d, i)
    dims = {d: len(ks) for d, ks in by_degree.items()}
    diffs = {}
    for d in degs:
        nxt = (d + 1) % 2 if cyclic else d + 1
        if not cyclic and nxt not in dims:
            continue
        entries = {}
        for j, b in enumerate(by_degree[d]):
            for n, cv in diff_table.get(b, {}).items():
                dd, i = position[n]
                if dd != nxt:
                    raise HochkindError("differential is not degree +1")
                entries[(i, j)] = cv
        diffs[d] = SparseMatrix(field, dims.get(nxt, 0), dims[d], entries)
    return FiniteComplex(field, dims, diffs,
                         basis=dict(by_degree), cyclic=cyclic)


def complex_of_algebra(a):
    """The underlying cochain complex of (A, d), one slot per degree."""
    return _complex_from_table(a.field, a.mode, a.space, a.diff_table)


def complex_of_module(m):
    """The underlying cochain complex of a module; only meaningful when its
    differential actually squares to zero, which check() will confirm."""
    return _complex_from_table(m.field, m.mode, m.space, m.diff_table)


def uncurve(a):
    """A' = End(A ⊕ A[1])^{x_w}: a validated dg algebra, together with the
    degree -1 element c with d(c) = 1 witnessing that A' is acyclic."""
    field = a.field
    g0, g1 = "g0", "g1"
    vspace = GradedSpace([g0, g1], {g0: 0, g1: a.mode.norm(-1)})
    qmat = {
        (g0, g1): {a.unit: field.neg(field.one)},
        (g1, g0): el_neg(field, a.curvature),
    }
    t = TwistedModule(a, vspace, qmat,
                      label=f"{a.label}⊕{a.label}[1]" if a.label else None)
    if t.defect:
        raise HochkindError(
            f"uncurving connection has nonzero defect: "
            f"{format_element(field, t.defect)}"
        )
    prime = end_algebra(t, label=f"uncurve({a.label})" if a.label else "A'")
    witness = {pair_name(f"E[{g1},{g0}]", a.unit): field.neg(field.one)}
    return prime, witness


def free_curved_module(a, L, label=None):
    """Free curved module on a graded space L: underlying (L ⊕ L[-1])⊗A,
    connection q = Σ_ℓ (e_{dℓ,ℓ}⊗1 + e_{ℓ,dℓ}⊗h), so d² = h·(-).

    Returned as a right module when h = 0 and as a left module over a
    graded-commutative base otherwise (the only way a one-sided module law
    can absorb the curvature); anything else has no curved-module shape.
    """
    field = a.field
    mode = a.mode
    gens = list(L.basis)
    names = list(gens) + [f"d_{g}" for g in gens]
    if len(set(names)) != len(names):
        raise SchemaError("generator names collide with their d_-shifts")
    degree = {g: L.deg(g) for g in gens}
    for g in gens:
        degree[f"d_{g}"] = mode.norm(L.deg(g) + 1)
    vspace = GradedSpace(names, degree)

    qmat = {}
    for g in gens:
        qmat[(f"d_{g}", g)] = {a.unit: field.one}
        if a.curvature:
            qmat[(g, f"d_{g}")] = dict(a.curvature)
    t = TwistedModule(a, vspace, qmat, label=label)
    if t.defect:
        raise HochkindError(
            f"free-module connection has nonzero defect: "
            f"{format_element(field, t.defect)}"
        )

    curved = bool(a.curvature)
    if curved and not a.is_graded_commutative():
        raise NonCentralCurvature(
            "free curved modules over a noncommutative curved base satisfy "
            "no one-sided curvature law"
        )

    basis = [pair_name(v, x) for v in names for x in a.basis()]
    mdeg = {pair_name(v, x): mode.norm(vspace.deg(v) + a.space.deg(x))
            for v in names for x in a.basis()}
    space = GradedSpace(basis, mdeg)

    diff = {}
    for v in names:
        pv = mode.parity(vspace.deg(v))
        for x in a.basis():
            img = {}
            for n, cv in a.diff_basis(x).items():
                img = el_add(field, img,
                             {pair_name(v, n): field.neg(cv) if pv else cv})
            for (r, c), el in qmat.items():
                if c != v:
                    continue
                for b, bc in el.items():
                    sign = mode.parity(a.space.deg(b)) and pv
                    for n, cv in a.mul_basis(b, x).items():
                        coeff = field.mul(bc, cv)
                        if sign:
                            coeff = field.neg(coeff)
                        img = el_add(field, img, {pair_name(r, n): coeff})
            if img:
                diff[pair_name(v, x)] = img

    if not curved:
        racts = {}
        for v in names:
            for x in a.basis():
                for y in a.basis():
                    prod = a.mul_basis(x, y)
                    if prod:
                        racts[(pair_name(v, x), y)] = {
                            pair_name(v, n): cv for n, cv in prod.items()
                        }
        mod = CurvedModule(a, space, CurvedModule.RIGHT, diff,
                           right_action=racts, label=label)
    else:
        left = {}
        for y in a.basis():
            py = mode.parity(a.space.deg(y))
            for v in names:
                pv = mode.parity(vspace.deg(v))
                for x in a.basis():
                    px = mode.parity(a.space.deg(x))
                    prod = a.mul_basis(x, y)
                    if not prod:
                        continue
                    sign = py and ((pv + px) % 2)
                    out = {}
                    for n, cv in prod.items():
                        out[pair_name(v, n)] = field.neg(cv) if sign else cv
                    left[(y, pair_name(v, x))] = out
        mod = CurvedModule(a, space, CurvedModule.LEFT, diff,
                           left_action=left, label=label)
    rep = mod.validate()
    if not rep.ok:
        raise HochkindError(f"free curved module failed validation: {rep.message()}")
    mod.twisted = t
    return mod
