"""Graded vector spaces with Koszul-sign calculus, and finite-dimensional
curved or dg algebras and modules presented by structure constants.

Elements are sparse dicts {basis name: nonzero scalar}; {} is zero.
Degree arithmetic goes through a GradingMode so the integer-graded and
2-periodic cases share one code path.  Sign conventions are fixed here
once (Koszul swap rule, right-module curvature law d²(m) = -m·h, opposite
curvature -h); the normative statement is not the convention table but the
validators: every d∘d identity is checked exactly, on every construction.
"""

from __future__ import annotations

from .errors import ModeMismatch, SchemaError
from .sparse import SparseMatrix, solve

__all__ = [
    "GradingMode",
    "Z_MODE",
    "Z2_MODE",
    "mode_from_string",
    "GradedSpace",
    "el_add",
    "el_sub",
    "el_scale",
    "el_neg",
    "format_element",
    "element_degree",
    "ValidationReport",
    "CurvedAlgebra",
    "CurvedModule",
    "complete_unit_rows",
    "tensor",
    "pair_name",
    "EndAlgebra",
    "end_of_graded_space",
    "matrix_algebra",
    "free_bimodule",
]


class GradingMode:
    """Degree bookkeeping for Z-graded or 2-periodic algebras."""

    def __init__(self, kind):
        if kind not in ("Z", "Z2"):
            raise SchemaError(f"unknown grading mode {kind!r}")
        self.kind = kind

    def norm(self, d):
        return d % 2 if self.kind == "Z2" else int(d)

    def parity(self, d):
        return d % 2

    def __eq__(self, other):
        return isinstance(other, GradingMode) and self.kind == other.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"GradingMode({self.kind!r})"


Z_MODE = GradingMode("Z")
Z2_MODE = GradingMode("Z2")


def mode_from_string(s):
    if s == "Z":
        return Z_MODE
    if s in ("Z2", "Z/2"):
        return Z2_MODE
    raise SchemaError(f"unknown grading {s!r}")


class GradedSpace:
    """Finite based graded space: ordered basis names, a degree per name,
    and an optional nonnegative auxiliary weight per name."""

    def __init__(self, basis, degree, aux=None):
        self.basis = tuple(basis)
        if len(set(self.basis)) != len(self.basis):
            raise SchemaError("duplicate basis names")
        self.degree = dict(degree)
        for name in self.basis:
            if name not in self.degree:
                raise SchemaError(f"no degree for basis element {name!r}")
        self.aux = dict(aux) if aux is not None else None
        if self.aux is not None:
            for name in self.basis:
                if name not in self.aux:
                    raise SchemaError(f"no auxWeight for basis element {name!r}")
        self._index = {name: i for i, name in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def deg(self, name):
        return self.degree[name]

    def aux_of(self, name):
        return self.aux[name] if self.aux is not None else None

    def index(self, name):
        return self._index[name]

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return (
            isinstance(other, GradedSpace)
            and self.basis == other.basis
            and all(self.degree[n] == other.degree[n] for n in self.basis)
            and self.aux == other.aux
        )

    def __repr__(self):
        return f"GradedSpace({len(self.basis)} basis elements)"


def el_add(field, x, y):
    out = dict(x)
    for name, c in y.items():
        s = field.add(out.get(name, field.zero), c)
        if field.is_zero(s):
            out.pop(name, None)
        else:
            out[name] = s
    return out


def el_scale(field, c, x):
    if field.is_zero(c):
        return {}
    return {name: field.mul(c, v) for name, v in x.items()}


def el_neg(field, x):
    return {name: field.neg(v) for name, v in x.items()}


def el_sub(field, x, y):
    return el_add(field, x, el_neg(field, y))


def format_element(field, el):
    if not el:
        return "0"
    parts = []
    for name in sorted(el):
        c = field.format(el[name])
        parts.append(name if c == "1" else f"{c}*{name}")
    return " + ".join(parts)


def element_degree(mode, space, el):
    """Normalized degree of a homogeneous element; None for zero; raises
    SchemaError on a mixed-degree element."""
    deg = None
    for name in el:
        d = mode.norm(space.deg(name))
        if deg is None:
            deg = d
        elif deg != d:
            raise SchemaError(
                f"element mixes degrees {deg} and {d} (at {name!r})"
            )
    return deg


class ValidationReport:
    """PASS, or the first violated axiom with a witness tuple of basis names."""

    def __init__(self, ok, axiom=None, witness=(), detail=""):
        self.ok = bool(ok)
        self.axiom = axiom
        self.witness = tuple(witness)
        self.detail = detail

    def __bool__(self):
        return self.ok

    def message(self):
        if self.ok:
            return "PASS"
        at = ", ".join(self.witness)
        return f"FAIL [{self.axiom}] at ({at}): {self.detail}"

    def __repr__(self):
        return f"ValidationReport({self.message()})"


def _normalize_table(field, space, table, key_arity):
    out = {}
    for key, el in table.items():
        names = key if key_arity == 2 else (key,)
        for name in names:
            if name not in space:
                raise SchemaError(f"unknown basis name {name!r} in table key")
        clean = {}
        for name, c in el.items():
            if name not in space:
                raise SchemaError(f"unknown basis name {name!r} in table value")
            if not field.is_zero(c):
                clean[name] = c
        if clean:
            out[key] = clean
    return out


def complete_unit_rows(field, basis, unit, mul):
    """Copy a product table and fill in the two-sided unit rows; callers
    list only products of non-unit elements."""
    out = {k: dict(v) for k, v in mul.items()}
    for b in basis:
        out.setdefault((unit, b), {b: field.one})
        out.setdefault((b, unit), {b: field.one})
    return out


class CurvedAlgebra:
    """Finite-dimensional curved algebra (A, d, h) by structure constants.

    mul/diff tables are sparse: a missing product or differential is zero,
    so the unit's rows must be present explicitly.  `augmented` declares
    the canonical augmentation (unit coefficient functional) to be an
    algebra map killing d-images and the curvature; validate() checks it.
    """

    def __init__(self, field, mode, space, unit, mul, diff, curvature,
                 augmented=False, label=None):
        self.field = field
        self.mode = mode
        self.space = space
        if unit not in space:
            raise SchemaError(f"unit {unit!r} is not a basis element")
        self.unit = unit
        self.mul_table = _normalize_table(field, space, mul, 2)
        self.diff_table = _normalize_table(field, space, diff, 1)
        self.curvature = dict(
            _normalize_table(field, space, {unit: curvature}, 1).get(unit, {})
        )
        self.augmented = bool(augmented)
        self.label = label

    # -- degree helpers ----------------------------------------------------

    def deg(self, name):
        return self.mode.norm(self.space.deg(name))

    def parity(self, name):
        return self.mode.parity(self.space.deg(name))

    def element_degree(self, el):
        return element_degree(self.mode, self.space, el)

    def parity_components(self, el):
        even, odd = {}, {}
        for name, c in el.items():
            (odd if self.parity(name) else even)[name] = c
        return even, odd

    # -- arithmetic ---------------------------------------------------------

    def basis(self):
        return self.space.basis

    def reduced_basis(self):
        return tuple(b for b in self.space.basis if b != self.unit)

    def unit_element(self):
        return {self.unit: self.field.one}

    def mul_basis(self, a, b):
        return dict(self.mul_table.get((a, b), {}))

    def diff_basis(self, a):
        return dict(self.diff_table.get(a, {}))

    def mul(self, x, y):
        field = self.field
        out = {}
        for na, ca in x.items():
            for nb, cb in y.items():
                prod = self.mul_table.get((na, nb))
                if prod:
                    out = el_add(field, out, el_scale(field, field.mul(ca, cb), prod))
        return out

    def diff(self, x):
        field = self.field
        out = {}
        for name, c in x.items():
            d = self.diff_table.get(name)
            if d:
                out = el_add(field, out, el_scale(field, c, d))
        return out

    def bracket(self, x, y):
        """Graded commutator, summed over parity components."""
        field = self.field
        out = {}
        for px, xc in enumerate(self.parity_components(x)):
            for py, yc in enumerate(self.parity_components(y)):
                if not xc or not yc:
                    continue
                term = self.mul(xc, yc)
                back = self.mul(yc, xc)
                if px and py:
                    term = el_add(field, term, back)
                else:
                    term = el_sub(field, term, back)
                out = el_add(field, out, term)
        return out

    def eps(self, el):
        """Canonical augmentation value: the unit coefficient."""
        return el.get(self.unit, self.field.zero)

    def split_unit(self, el):
        """(unit coefficient, remainder supported on non-unit basis)."""
        red = {n: c for n, c in el.items() if n != self.unit}
        return el.get(self.unit, self.field.zero), red

    def is_dg(self):
        return not self.curvature

    def is_central(self, el):
        for b in self.basis():
            if self.bracket(el, {b: self.field.one}):
                return False
        return True

    def is_graded_commutative(self):
        one = self.field.one
        for a in self.basis():
            for b in self.basis():
                ab = self.mul_basis(a, b)
                ba = self.mul_basis(b, a)
                if self.parity(a) and self.parity(b):
                    ba = el_neg(self.field, ba)
                if ab != ba:
                    return False
        return True

    # -- validation ----------------------------------------------------------

    def validate(self):
        field = self.field
        fail = ValidationReport

        if self.deg(self.unit) != 0:
            return fail(False, "unit degree", (self.unit,),
                        f"unit has degree {self.deg(self.unit)}, expected 0")
        if self.space.aux is not None and self.space.aux_of(self.unit) != 0:
            return fail(False, "unit auxWeight", (self.unit,),
                        "unit must have auxWeight 0")

        for (a, b), out in sorted(self.mul_table.items()):
            want = self.mode.norm(self.space.deg(a) + self.space.deg(b))
            for name in sorted(out):
                if self.deg(name) != want:
                    return fail(False, "degree mismatch in mul", (a, b, name),
                                f"deg({a}·{b}) should be {want}, "
                                f"got component in degree {self.deg(name)}")
            if self.space.aux is not None:
                want_aux = self.space.aux_of(a) + self.space.aux_of(b)
                for name in sorted(out):
                    if self.space.aux_of(name) != want_aux:
                        return fail(False, "auxWeight mismatch in mul",
                                    (a, b, name),
                                    f"aux({a}·{b}) should be {want_aux}, "
                                    f"got {self.space.aux_of(name)}")

        for a, out in sorted(self.diff_table.items()):
            want = self.mode.norm(self.space.deg(a) + 1)
            for name in sorted(out):
                if self.deg(name) != want:
                    return fail(False, "degree mismatch in diff", (a, name),
                                f"deg(d{a}) should be {want}, got "
                                f"{self.deg(name)}")
            if self.space.aux is not None:
                for name in sorted(out):
                    if self.space.aux_of(name) != self.space.aux_of(a):
                        return fail(False, "auxWeight mismatch in diff",
                                    (a, name), "diff must preserve auxWeight")

        for name in sorted(self.curvature):
            if self.deg(name) != self.mode.norm(2):
                return fail(False, "curvature degree", (name,),
                            f"curvature component in degree {self.deg(name)}, "
                            f"expected {self.mode.norm(2)}")
        if self.space.aux is not None and self.curvature:
            weights = {self.space.aux_of(n) for n in self.curvature}
            if len(weights) > 1:
                return fail(False, "curvature auxWeight", tuple(sorted(self.curvature)),
                            "curvature must be auxWeight-homogeneous")

        one = field.one
        for b in self.basis():
            if self.mul_basis(self.unit, b) != {b: one}:
                return fail(False, "left unit law", (self.unit, b),
                            f"1·{b} = "
                            f"{format_element(field, self.mul_basis(self.unit, b))}")
            if self.mul_basis(b, self.unit) != {b: one}:
                return fail(False, "right unit law", (b, self.unit),
                            f"{b}·1 = "
                            f"{format_element(field, self.mul_basis(b, self.unit))}")

        names = self.basis()
        for a in names:
            for b in names:
                ab = self.mul_table.get((a, b), {})
                for c in names:
                    bc = self.mul_table.get((b, c), {})
                    if not ab and not bc:
                        continue
                    lhs = self.mul(ab, {c: one})
                    rhs = self.mul({a: one}, bc)
                    if lhs != rhs:
                        return fail(False, "associativity", (a, b, c),
                                    f"({a}·{b})·{c} = {format_element(field, lhs)}, "
                                    f"{a}·({b}·{c}) = {format_element(field, rhs)}")

        for a in names:
            pa = self.parity(a)
            for b in names:
                lhs = self.diff(self.mul_basis(a, b))
                rhs = el_add(
                    field,
                    self.mul(self.diff_basis(a), {b: one}),
                    el_scale(field, field.of(-1) if pa else one,
                             self.mul({a: one}, self.diff_basis(b))),
                )
                if lhs != rhs:
                    return fail(False, "Leibniz", (a, b),
                                f"d({a}·{b}) = {format_element(field, lhs)}, "
                                f"expected {format_element(field, rhs)}")

        for a in names:
            lhs = self.diff(self.diff_basis(a))
            rhs = self.bracket(self.curvature, {a: one})
            if lhs != rhs:
                return fail(False, "curvature law", (a,),
                            f"d²({a}) = {format_element(field, lhs)}, "
                            f"[h,{a}] = {format_element(field, rhs)}")

        dh = self.diff(self.curvature)
        if dh:
            return fail(False, "curvature closed", tuple(sorted(self.curvature)),
                        f"d(h) = {format_element(field, dh)}")

        if self.augmented:
            red = self.reduced_basis()
            for a in red:
                for b in red:
                    u = self.eps(self.mul_basis(a, b))
                    if not field.is_zero(u):
                        return fail(False, "augmentation multiplicative", (a, b),
                                    f"ε({a}·{b}) = {field.format(u)}, expected 0")
            for a in names:
                v = self.eps(self.diff_basis(a))
                if not field.is_zero(v):
                    return fail(False, "augmentation kills d-images", (a,),
                                f"ε(d{a}) = {field.format(v)}")
            w0 = self.eps(self.curvature)
            if not field.is_zero(w0):
                return fail(False, "augmentation kills curvature",
                            tuple(sorted(self.curvature)),
                            f"ε(h) = {field.format(w0)}")

        return ValidationReport(True)

    # -- constructions --------------------------------------------------------

    def opposite(self):
        """Same space, product a·ᵒᵖb = (-1)^{|a||b|} b·a, curvature -h."""
        field = self.field
        mul = {}
        for a in self.basis():
            pa = self.parity(a)
            for b in self.basis():
                prod = self.mul_basis(b, a)
                if not prod:
                    continue
                if pa and self.parity(b):
                    prod = el_neg(field, prod)
                mul[(a, b)] = prod
        return CurvedAlgebra(
            field, self.mode, self.space, self.unit, mul,
            {a: dict(v) for a, v in self.diff_table.items()},
            el_neg(field, self.curvature),
            augmented=self.augmented,
            label=f"op({self.label})" if self.label else None,
        )

    def __repr__(self):
        tag = self.label or f"{self.space.dim}-dim"
        return f"CurvedAlgebra({tag})"


def pair_name(x, y):
    return f"{x}⊗{y}"


def tensor(a, b, label=None):
    """Tensor product algebra: (x⊗y)(x'⊗y') = (-1)^{|y||x'|} xx'⊗yy',
    d = d⊗1 + 1⊗d with the Koszul sign, curvature h_A⊗1 + 1⊗h_B."""
    if a.mode != b.mode:
        raise ModeMismatch(f"cannot tensor {a.mode.kind} with {b.mode.kind}")
    if a.field != b.field:
        raise SchemaError("tensor factors must share the ground field")
    field = a.field
    mode = a.mode

    basis = []
    degree = {}
    aux = {} if (a.space.aux is not None or b.space.aux is not None) else None
    for x in a.basis():
        for y in b.basis():
            nm = pair_name(x, y)
            basis.append(nm)
            degree[nm] = mode.norm(a.space.deg(x) + b.space.deg(y))
            if aux is not None:
                aux[nm] = (a.space.aux_of(x) or 0) + (b.space.aux_of(y) or 0)
    space = GradedSpace(basis, degree, aux)

    mul = {}
    for x1 in a.basis():
        for y1 in b.basis():
            py1 = b.parity(y1)
            left = pair_name(x1, y1)
            for x2 in a.basis():
                sign_flip = py1 and a.parity(x2)
                px = a.mul_basis(x1, x2)
                if not px:
                    continue
                for y2 in b.basis():
                    py = b.mul_basis(y1, y2)
                    if not py:
                        continue
                    out = {}
                    for nx, cx in px.items():
                        for ny, cy in py.items():
                            c = field.mul(cx, cy)
                            if sign_flip:
                                c = field.neg(c)
                            out = el_add(field, out, {pair_name(nx, ny): c})
                    if out:
                        mul[(left, pair_name(x2, y2))] = out

    diff = {}
    for x in a.basis():
        px = a.parity(x)
        dx = a.diff_basis(x)
        for y in b.basis():
            out = {}
            for nx, cx in dx.items():
                out = el_add(field, out, {pair_name(nx, y): cx})
            dy = b.diff_basis(y)
            for ny, cy in dy.items():
                out = el_add(field, out,
                             {pair_name(x, ny): field.neg(cy) if px else cy})
            if out:
                diff[pair_name(x, y)] = out

    curv = {}
    for nx, cx in a.curvature.items():
        curv[pair_name(nx, b.unit)] = cx
    for ny, cy in b.curvature.items():
        nm = pair_name(a.unit, ny)
        cur = curv.get(nm, field.zero)
        s = field.add(cur, cy)
        if field.is_zero(s):
            curv.pop(nm, None)
        else:
            curv[nm] = s

    return CurvedAlgebra(
        field, mode, space, pair_name(a.unit, b.unit), mul, diff, curv,
        augmented=a.augmented and b.augmented,
        label=label or (f"{a.label}⊗{b.label}" if a.label and b.label else None),
    )


class EndAlgebra(CurvedAlgebra):
    """Endomorphism algebra of a graded space on the adapted basis
    {I, off-diagonal matrix units, successive diagonal differences}.

    The unit must be a basis element, which rules out the plain matrix-unit
    basis; the adapted one spans the diagonal iff char(k) ∤ dim V.
    """

    def __init__(self, field, mode, vspace, *, label=None):
        names = vspace.basis
        n = len(names)
        if n == 0:
            raise SchemaError("endomorphisms of the zero space have no unit")
        if field.char and n % field.char == 0:
            raise SchemaError(
                f"adapted basis for End needs char {field.char} ∤ dim {n}"
            )

        bnames = ["I"]
        degree = {"I": 0}
        tomat = {"I": {(s, s): field.one for s in names}}
        for s in names:
            for t in names:
                if s == t:
                    continue
                nm = f"E[{s},{t}]"
                bnames.append(nm)
                degree[nm] = mode.norm(vspace.deg(s) - vspace.deg(t))
                tomat[nm] = {(s, t): field.one}
        for i in range(n - 1):
            nm = f"D[{i}]"
            bnames.append(nm)
            degree[nm] = 0
            tomat[nm] = {
                (names[i], names[i]): field.one,
                (names[i + 1], names[i + 1]): field.neg(field.one),
            }

        # diagonal slot s -> adapted coordinates of the matrix unit e_{s,s}:
        # solve against the (I, D[0], ..., D[n-2]) column matrix once
        entries = {}
        for r in range(n):
            entries[(r, 0)] = field.one
        for i in range(n - 1):
            entries[(i, i + 1)] = field.one
            entries[(i + 1, i + 1)] = field.neg(field.one)
        diag_matrix = SparseMatrix(field, n, n, entries)
        diag_coords = {}
        for r, s in enumerate(names):
            sol = solve(diag_matrix, {r: field.one})
            coords = {}
            for j, c in sol.items():
                coords["I" if j == 0 else f"D[{j - 1}]"] = c
            diag_coords[s] = coords

        def from_matrix(mat):
            el = {}
            for (s, t), c in mat.items():
                if field.is_zero(c):
                    continue
                if s == t:
                    el = el_add(field, el, el_scale(field, c, diag_coords[s]))
                else:
                    el = el_add(field, el, {f"E[{s},{t}]": c})
            return el

        def matmul(x, y):
            out = {}
            for (s, t), c in x.items():
                for (u, v), c2 in y.items():
                    if t != u:
                        continue
                    key = (s, v)
                    acc = field.add(out.get(key, field.zero), field.mul(c, c2))
                    if field.is_zero(acc):
                        out.pop(key, None)
                    else:
                        out[key] = acc
            return out

        mul = {}
        for x in bnames:
            for y in bnames:
                el = from_matrix(matmul(tomat[x], tomat[y]))
                if el:
                    mul[(x, y)] = el

        space = GradedSpace(bnames, degree)
        super().__init__(field, mode, space, "I", mul, {}, {}, label=label)
        self.vspace = vspace
        self._tomat = tomat
        self._from_matrix = from_matrix

    def matrix_unit(self, s, t):
        """e_{s,t}: the map sending basis vector t to s, in adapted coordinates."""
        return self._from_matrix({(s, t): self.field.one})

    def to_matrix(self, el):
        field = self.field
        out = {}
        for name, c in el.items():
            for key, v in self._tomat[name].items():
                acc = field.add(out.get(key, field.zero), field.mul(c, v))
                if field.is_zero(acc):
                    out.pop(key, None)
                else:
                    out[key] = acc
        return out


def end_of_graded_space(field, mode, vspace, label=None):
    return EndAlgebra(field, mode, vspace, label=label)


def matrix_algebra(field, n, label=None):
    space = GradedSpace([f"v{i}" for i in range(n)],
                        {f"v{i}": 0 for i in range(n)})
    return EndAlgebra(field, Z_MODE, space, label=label or f"Mat{n}")


class CurvedModule:
    """Module over a curved algebra by structure constants.

    side LEFT: d²(m) = h·m;  side RIGHT: d²(m) = -m·h;
    side BIMODULE: d²(m) = h_A·m - m·h_B over (algebra, right_algebra).
    """

    LEFT = "left"
    RIGHT = "right"
    BIMODULE = "bimodule"

    def __init__(self, algebra, space, side, diff, left_action=None,
                 right_action=None, right_algebra=None, label=None):
        if side not in (self.LEFT, self.RIGHT, self.BIMODULE):
            raise SchemaError(f"unknown module side {side!r}")
        self.algebra = algebra
        self.space = space
        self.side = side
        self.field = algebra.field
        self.mode = algebra.mode
        if side == self.BIMODULE:
            self.right_algebra = right_algebra if right_algebra is not None else algebra
        else:
            self.right_algebra = algebra if side == self.RIGHT else None
        self.left_algebra = algebra if side in (self.LEFT, self.BIMODULE) else None

        field = self.field
        self.diff_table = _normalize_table(field, space, diff, 1)
        self.left_table = {}
        if left_action:
            for (a, m), el in left_action.items():
                if self.left_algebra is None:
                    raise SchemaError("left action supplied for a right module")
                if a not in self.left_algebra.space or m not in space:
                    raise SchemaError(f"unknown name in left action key ({a}, {m})")
                clean = {n: c for n, c in el.items() if not field.is_zero(c)}
                for n in clean:
                    if n not in space:
                        raise SchemaError(f"unknown module name {n!r}")
                if clean:
                    self.left_table[(a, m)] = clean
        self.right_table = {}
        if right_action:
            for (m, b), el in right_action.items():
                if self.right_algebra is None:
                    raise SchemaError("right action supplied for a left module")
                if m not in space or b not in self.right_algebra.space:
                    raise SchemaError(f"unknown name in right action key ({m}, {b})")
                clean = {n: c for n, c in el.items() if not field.is_zero(c)}
                for n in clean:
                    if n not in space:
                        raise SchemaError(f"unknown module name {n!r}")
                if clean:
                    self.right_table[(m, b)] = clean
        self.label = label

    def deg(self, name):
        return self.mode.norm(self.space.deg(name))

    def parity(self, name):
        return self.mode.parity(self.space.deg(name))

    def diff(self, x):
        field = self.field
        out = {}
        for name, c in x.items():
            d = self.diff_table.get(name)
            if d:
                out = el_add(field, out, el_scale(field, c, d))
        return out

    def act_left_basis(self, a, m):
        return dict(self.left_table.get((a, m), {}))

    def act_right_basis(self, m, b):
        return dict(self.right_table.get((m, b), {}))

    def act_left(self, a_el, m_el):
        field = self.field
        out = {}
        for a, ca in a_el.items():
            for m, cm in m_el.items():
                t = self.left_table.get((a, m))
                if t:
                    out = el_add(field, out, el_scale(field, field.mul(ca, cm), t))
        return out

    def act_right(self, m_el, b_el):
        field = self.field
        out = {}
        for m, cm in m_el.items():
            for b, cb in b_el.items():
                t = self.right_table.get((m, b))
                if t:
                    out = el_add(field, out, el_scale(field, field.mul(cm, cb), t))
        return out

    def validate(self):
        field = self.field
        one = field.one
        fail = ValidationReport
        mnames = self.space.basis

        def check_action(alg, table, is_left):
            tag = "left" if is_left else "right"
            for key, out in sorted(table.items()):
                a, m = key if is_left else (key[1], key[0])
                want = self.mode.norm(alg.space.deg(a) + self.space.deg(m))
                for n in sorted(out):
                    if self.deg(n) != want:
                        return fail(False, f"degree mismatch in {tag} action",
                                    (a, m, n),
                                    f"expected degree {want}, got {self.deg(n)}")
                if self.space.aux is not None and alg.space.aux is not None:
                    want_aux = alg.space.aux_of(a) + self.space.aux_of(m)
                    for n in sorted(out):
                        if self.space.aux_of(n) != want_aux:
                            return fail(False, f"auxWeight mismatch in {tag} action",
                                        (a, m, n), "action must add auxWeights")
            unit = alg.unit
            for m in mnames:
                got = (self.act_left_basis(unit, m) if is_left
                       else self.act_right_basis(m, unit))
                if got != {m: one}:
                    return fail(False, f"{tag} unit action", (unit, m),
                                f"1·{m} = {format_element(field, got)}"
                                if is_left else
                                f"{m}·1 = {format_element(field, got)}")
            for a in alg.basis():
                for b in alg.basis():
                    ab = alg.mul_basis(a, b)
                    for m in mnames:
                        if is_left:
                            lhs = self.act_left({a: one}, self.act_left_basis(b, m))
                            rhs = self.act_left(ab, {m: one})
                        else:
                            lhs = self.act_right(self.act_right_basis(m, a), {b: one})
                            rhs = self.act_right({m: one}, ab)
                        if lhs != rhs:
                            return fail(False, f"{tag} action associativity",
                                        (a, b, m), "action disagrees with mul")
            return None

        if self.left_algebra is not None:
            bad = check_action(self.left_algebra, self.left_table, True)
            if bad is not None:
                return bad
        if self.right_algebra is not None:
            bad = check_action(self.right_algebra, self.right_table, False)
            if bad is not None:
                return bad

        if self.side == self.BIMODULE:
            A, B = self.left_algebra, self.right_algebra
            for a in A.basis():
                for m in mnames:
                    am = self.act_left_basis(a, m)
                    for b in B.basis():
                        lhs = self.act_right(am, {b: one})
                        rhs = self.act_left({a: one}, self.act_right_basis(m, b))
                        if lhs != rhs:
                            return fail(False, "bimodule actions commute",
                                        (a, m, b), "(a·m)·b != a·(m·b)")

        for d, out in sorted(self.diff_table.items()):
            want = self.mode.norm(self.space.deg(d) + 1)
            for n in sorted(out):
                if self.deg(n) != want:
                    return fail(False, "degree mismatch in module diff", (d, n),
                                f"expected degree {want}, got {self.deg(n)}")
            if self.space.aux is not None:
                for n in sorted(out):
                    if self.space.aux_of(n) != self.space.aux_of(d):
                        return fail(False, "auxWeight mismatch in module diff",
                                    (d, n), "diff must preserve auxWeight")

        if self.left_algebra is not None:
            A = self.left_algebra
            for a in A.basis():
                pa = A.parity(a)
                da = A.diff_basis(a)
                for m in mnames:
                    lhs = self.diff(self.act_left_basis(a, m))
                    rhs = el_add(
                        field,
                        self.act_left(da, {m: one}),
                        el_scale(field, field.of(-1) if pa else one,
                                 self.act_left({a: one}, self.diff_table.get(m, {}))),
                    )
                    if lhs != rhs:
                        return fail(False, "left Leibniz", (a, m),
                                    "d(a·m) != d(a)·m + (-1)^|a| a·d(m)")
        if self.right_algebra is not None:
            B = self.right_algebra
            for m in mnames:
                pm = self.parity(m)
                dm = self.diff_table.get(m, {})
                for b in B.basis():
                    lhs = self.diff(self.act_right_basis(m, b))
                    rhs = el_add(
                        field,
                        self.act_right(dm, {b: one}),
                        el_scale(field, field.of(-1) if pm else one,
                                 self.act_right({m: one}, B.diff_basis(b))),
                    )
                    if lhs != rhs:
                        return fail(False, "right Leibniz", (m, b),
                                    "d(m·b) != d(m)·b + (-1)^|m| m·d(b)")

        for m in mnames:
            dd = self.diff(self.diff_table.get(m, {}))
            want = {}
            if self.left_algebra is not None:
                want = el_add(field, want,
                              self.act_left(self.left_algebra.curvature, {m: one}))
            if self.right_algebra is not None:
                want = el_sub(field, want,
                              self.act_right({m: one}, self.right_algebra.curvature))
            if dd != want:
                return fail(False, "module curvature law", (m,),
                            f"d²({m}) = {format_element(field, dd)}, "
                            f"expected {format_element(field, want)}")

        return ValidationReport(True)

    def __repr__(self):
        tag = self.label or f"{self.space.dim}-dim {self.side}"
        return f"CurvedModule({tag})"


def free_bimodule(a, label=None):
    """The algebra as a bimodule over itself; d² = h·m - m·h is exactly the
    algebra's own curvature axiom."""
    left = {}
    right = {}
    for x in a.basis():
        for m in a.basis():
            prod = a.mul_basis(x, m)
            if prod:
                left[(x, m)] = prod
            prod = a.mul_basis(m, x)
            if prod:
                right[(m, x)] = prod
    return CurvedModule(
        a, a.space, CurvedModule.BIMODULE,
        {k: dict(v) for k, v in a.diff_table.items()},
        left_action=left, right_action=right, right_algebra=a,
        label=label or (f"{a.label} as bimodule" if a.label else None),
    )
