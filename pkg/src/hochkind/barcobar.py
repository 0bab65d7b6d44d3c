"""Windowed bar/cobar constructions and the Koszul-duality functors.

The dual of a finite-dimensional curved algebra is materialized on weight
windows: letters are the reduced basis elements placed in degree 1 - |a|,
words are tuples of letters, and the differential is the transpose of
(multiplication, differential, curvature) extended as a derivation.  The
same constructor serves bar (input an augmented algebra) and cobar (input
any unit-split finite algebra, e.g. a windowed bar truncation).

Conventions used throughout, fixed once:
  - d(letter_c) = -h_c·[] - Σ_a (-1)^{1-|a|} s^c_a [a]
                  - Σ_{a,b} (-1)^{|a|(1-|b|)} r^c_{ab} [a|b]
    where s^c_a, r^c_{ab}, h_c are the c-coefficients of d(a), a·b and h;
    unit coefficients of d, mul and h feed the dual curvature instead.
  - twisted word-module complexes (F, G, two-sided G) share one shape:
    words w tensor a dualized module, with
      D(w⊗μ̂) = δ(w)⊗μ̂ + (-1)^{|w|} w⊗d*μ̂
                - (-1)^{|w|+|μ̂|} Σ_a (-1)^{|μ̂|(1-|a|)} (w·ℓ_a)⊗(μ̂◁a)
    where (d*μ̂)(x) = -(-1)^{|μ̂|} μ̂(dx) and μ̂◁a is the plain transpose
    of the left action.  The two-sided version is the double complex whose
    row at k right letters is this shape applied to n⊗(reduced letters)^k
    and whose column maps are the transposed simplicial faces (right
    action, then adjacent merges with (-1)^i) scaled by (-1)^{total degree}.
  - resolution rows use plain simplicial signs (-1)^i on merges/action;
    exactness is basis-independent so no Koszul bookkeeping is needed.
"""

from __future__ import annotations

import itertools

from .errors import (
    HochkindError,
    NotAugmented,
    SchemaError,
    WindowTooSmall,
)
from .graded import CurvedAlgebra, CurvedModule, GradedSpace
from .twist import mc_element, same_algebra, twist_algebra
from .weight import PRODUCT, SUM, WeightComplex

__all__ = [
    "KoszulDual",
    "KoszulPackage",
    "bar",
    "cobar",
    "package_of",
    "G_module",
    "F_module",
    "adjunction_check",
    "AdjunctionReport",
    "resolution_check",
    "ResolutionReport",
    "bimodule_G",
    "planar_word_dims",
]

HAT = "HAT"
CHECK_LOCAL = "CHECK_LOCAL"


def word_name(word):
    return "[" + "|".join(word) + "]"


class KoszulDual:
    """Weight-window truncation of the Koszul dual of a curved algebra.

    The input only needs the CurvedAlgebra shape (tables and a unit split);
    callers decide whether it was validated.  Words of weight > window are
    dropped from differentials and products.
    """

    def __init__(self, algebra, window, label=None):
        if window < 1:
            raise WindowTooSmall("dual construction needs window >= 1")
        self.source = algebra
        self.field = algebra.field
        self.mode = algebra.mode
        self.window = int(window)
        self.label = label or (
            f"dual({algebra.label})" if algebra.label else "dual")
        self.letters = [b for b in algebra.space.basis if b != algebra.unit]
        self.ldeg = {
            a: self.mode.norm(1 - algebra.space.deg(a)) for a in self.letters
        }
        self.laux = None
        if algebra.space.aux is not None:
            self.laux = {a: algebra.space.aux_of(a) for a in self.letters}
        self._build_letter_data()

    def _build_letter_data(self):
        f = self.field
        a_ = self.source
        unit = a_.unit
        par = a_.parity
        delta = {c: {} for c in self.letters}
        curv = {}

        def put(table, key, coeff):
            v = f.add(table.get(key, f.zero), coeff)
            if f.is_zero(v):
                table.pop(key, None)
            else:
                table[key] = v

        # transpose of the internal differential; unit parts feed curvature
        for a in self.letters:
            sign = f.of(-1) if (1 - par(a)) % 2 == 0 else f.one
            for tgt, c in a_.diff_table.get(a, {}).items():
                if tgt == unit:
                    put(curv, (a,), f.mul(sign, c))
                else:
                    put(delta[tgt], (a,), f.mul(sign, c))
        # transpose of multiplication on the reduced part
        for a in self.letters:
            for b in self.letters:
                prod = a_.mul_table.get((a, b))
                if not prod:
                    continue
                exp = par(a) * ((1 - par(b)) % 2)
                sign = f.of(-1) if exp % 2 == 0 else f.one
                for tgt, c in prod.items():
                    if tgt == unit:
                        put(curv, (a, b), f.mul(sign, c))
                    else:
                        put(delta[tgt], (a, b), f.mul(sign, c))
        # curvature coefficients kill single letters
        for tgt, c in a_.curvature.items():
            if tgt == unit:
                put(curv, (), f.neg(c))
            else:
                put(delta[tgt], (), f.neg(c))
        self.letter_delta = delta
        self.curvature_words = {
            w: c for w, c in curv.items() if len(w) <= self.window
        }

    # words -------------------------------------------------------------

    def words(self, weight=None):
        """Deterministic word enumeration, ascending weight then source
        basis order."""
        weights = [weight] if weight is not None else range(self.window + 1)
        for k in weights:
            for w in itertools.product(self.letters, repeat=k):
                yield w

    def word_degree(self, word):
        return self.mode.norm(sum(self.ldeg[a] for a in word))

    def word_aux(self, word):
        if self.laux is None:
            return None
        return sum(self.laux[a] for a in word)

    def delta_word(self, word):
        """Differential of one word, as {word: coeff}, window-truncated."""
        f = self.field
        out = {}
        prefix = 0
        for i, c in enumerate(word):
            sign = f.of(-1) if prefix % 2 else f.one
            for repl, coeff in self.letter_delta[c].items():
                new = word[:i] + repl + word[i + 1:]
                if len(new) > self.window:
                    continue
                v = f.add(out.get(new, f.zero), f.mul(sign, coeff))
                if f.is_zero(v):
                    out.pop(new, None)
                else:
                    out[new] = v
            prefix += self.mode.parity(self.ldeg[c])
        return out

    def dims(self):
        out = {}
        for w in self.words():
            key = (self.word_degree(w), len(w))
            out[key] = out.get(key, 0) + 1
        return out

    # materializations ---------------------------------------------------

    def algebra_view(self, label=None):
        """The truncation as a CurvedAlgebra object (concatenation product,
        word differential, dual curvature).  Valid as an algebra whenever the
        source is dg; curved sources leave d² defects at the weight boundary,
        so the view is deliberately not validated here."""
        names = [word_name(w) for w in self.words()]
        degs = {word_name(w): self.word_degree(w) for w in self.words()}
        aux = None
        clean_diff = not self.source.curvature and all(
            self.source.unit not in img
            for img in self.source.diff_table.values()
        )
        if self.laux is not None and clean_diff:
            aux = {word_name(w): self.word_aux(w) for w in self.words()}
        space = GradedSpace(names, degs, aux)
        mul = {}
        by_weight = {}
        for w in self.words():
            by_weight.setdefault(len(w), []).append(w)
        for ka in range(self.window + 1):
            for kb in range(self.window + 1 - ka):
                for wa in by_weight.get(ka, ()):
                    for wb in by_weight.get(kb, ()):
                        mul[(word_name(wa), word_name(wb))] = {
                            word_name(wa + wb): self.field.one
                        }
        diff = {}
        for w in self.words():
            img = self.delta_word(w)
            if img:
                diff[word_name(w)] = {
                    word_name(t): c for t, c in img.items()
                }
        curv = {word_name(w): c for w, c in self.curvature_words.items()}
        unit_hit = any(
            word_name(()) in img for img in diff.values()
        ) or word_name(()) in curv
        return CurvedAlgebra(
            self.field, self.mode, space, word_name(()), mul, diff, curv,
            augmented=not unit_hit,
            label=label or self.label,
        )

    def weight_complex(self, totalization=SUM, label=None):
        basis = []
        images = {}
        for w in self.words():
            name = word_name(w)
            basis.append((name, self.word_degree(w), len(w),
                          self.word_aux(w)))
            img = self.delta_word(w)
            if img:
                images[name] = {word_name(t): c for t, c in img.items()}
        return WeightComplex(
            self.field, self.mode, basis, images, totalization, self.window,
            label=label or self.label)


class KoszulPackage:
    """A weight-windowed bar side paired with its source algebra.

    Built either from bar(a, N) (bar side = dual of a, weights = word
    length) or package_of(c, N) (an explicit augmented algebra playing the
    bar side, every reduced element of weight 1, no algebra side).
    """

    def __init__(self, source, dual, window, kind, view=None, weights=None,
                 label=None):
        self.source = source
        self.dual = dual
        self.window = int(window)
        self.kind = kind
        self.label = label
        self._view = view
        self._weights = weights
        self._omega = None

    def bar_algebra(self):
        if self._view is None:
            self._view = self.dual.algebra_view(label=self.label)
        return self._view

    def reduced(self):
        view = self.bar_algebra()
        return [b for b in view.space.basis if b != view.unit]

    def weight_of(self, name):
        if self._weights is None:
            self._weights = {}
            view = self.bar_algebra()
            for w in self.dual.words():
                self._weights[word_name(w)] = len(w)
            assert set(self._weights) == set(view.space.basis)
        return self._weights[name]

    def bar_complex(self, totalization=PRODUCT):
        if self.dual is None:
            raise HochkindError("explicit package has no letter data")
        return self.dual.weight_complex(totalization, label=self.label)

    def omega(self):
        """Cobar truncation of the bar side."""
        if self._omega is None:
            self._omega = KoszulDual(
                self.bar_algebra(), self.window,
                label=f"omega({self.label})" if self.label else None)
        return self._omega

    def rho(self, name):
        """Canonical map from bar-side generators to the source algebra:
        single-letter words map to their letter, everything else to zero."""
        if self.source is None:
            return {}
        if self.dual is not None:
            for a in self.dual.letters:
                if name == word_name((a,)):
                    return {a: self.field.one}
            return {}
        return {}

    def xi_pairs(self):
        """Sparse data of the canonical twisting element."""
        if self.dual is None:
            raise HochkindError("explicit package has no canonical twist")
        return {
            (word_name((a,)), a): self.field.one for a in self.dual.letters
        }

    def aux_bound_applies(self):
        """True when every reduced source element has auxWeight >= 1, which
        pins each (degree, auxWeight) slice independently of the window."""
        if self.dual is None or self.dual.laux is None:
            return False
        return all(v >= 1 for v in self.dual.laux.values())

    @property
    def field(self):
        return self.bar_algebra().field

    @property
    def mode(self):
        return self.bar_algebra().mode

    def is_dg_bar_side(self):
        view = self.bar_algebra()
        unit = view.unit
        if view.curvature:
            return False
        return all(unit not in img for img in view.diff_table.values())

    def __repr__(self):
        return (
            f"KoszulPackage({self.label or '?'}, kind={self.kind}, "
            f"window={self.window})"
        )


def bar(a, window, kind=HAT, at=None):
    """Conilpotent bar package of an augmented curved algebra.

    kind CHECK_LOCAL realizes one local factor of the extended bar
    construction: the bar package of the algebra twisted at the MC element
    `at`."""
    if window < 1:
        raise WindowTooSmall("bar needs window >= 1")
    if not a.augmented:
        raise NotAugmented("bar construction needs an augmented algebra")
    source = a
    kind_tag = kind
    if kind == CHECK_LOCAL:
        if at is None:
            raise SchemaError("CHECK_LOCAL needs an MC element")
        mc = at if hasattr(at, "value") else mc_element(a, at)
        if not mc.is_mc:
            raise SchemaError("CHECK_LOCAL point is not Maurer-Cartan")
        source = twist_algebra(a, mc.value)
        if not source.augmented:
            raise NotAugmented("twisted algebra lost its augmentation")
        kind_tag = (CHECK_LOCAL, tuple(sorted(mc.value.items())))
    elif kind != HAT:
        raise SchemaError(f"unknown bar kind {kind!r}")
    dual = KoszulDual(source, window,
                      label=f"bar({a.label})" if a.label else "bar")
    pkg = KoszulPackage(source, dual, window, kind_tag, label=dual.label)
    # d² within the window, away from the boundary
    pkg.bar_complex().check_interior()
    return pkg


def cobar(c, window):
    """Windowed cobar of a finite-dimensional augmented algebra (treated as
    pseudocompact through its weight-window quotients)."""
    if window < 1:
        raise WindowTooSmall("cobar needs window >= 1")
    if not c.augmented:
        raise NotAugmented("cobar construction needs an augmented input")
    dual = KoszulDual(c, window,
                      label=f"cobar({c.label})" if c.label else "cobar")
    dual.weight_complex().check_interior()
    return dual


def package_of(c, window, label=None):
    """Wrap an explicit finite-dimensional augmented dg algebra as a bar
    side (every reduced element in weight 1); no algebra side, so only
    G_module/resolution/bimodule apply."""
    if window < 1:
        raise WindowTooSmall("package needs window >= 1")
    if not c.augmented:
        raise NotAugmented("explicit bar side must be augmented")
    if c.curvature:
        raise HochkindError("explicit bar side must be a dg algebra")
    weights = {b: (0 if b == c.unit else 1) for b in c.space.basis}
    return KoszulPackage(
        None, None, window, "EXPLICIT", view=c, weights=weights,
        label=label or c.label)


# G and friends ----------------------------------------------------------


def _require_left_module(pkg, n):
    view = pkg.bar_algebra()
    if n.left_algebra is None:
        raise SchemaError("module must carry a left bar-side action")
    if not same_algebra(n.left_algebra, view):
        raise SchemaError("module is not over this package's bar side")


def _require_dg_bar_side(pkg):
    if not pkg.is_dg_bar_side():
        raise HochkindError(
            "construction needs a dg bar side; curved sources place "
            "differentials on the unit word")


def _module_dual_tables(f, par, mdeg, diff_table, left_table, unit):
    """Transposed structure on the dual basis: the dual differential with
    the cochain sign (d*μ̂)(x) = -(-1)^{|μ̂|} μ̂(dx), and the plain
    transpose μ̂◁a of the left action with unit rows dropped."""
    dstar = {}
    for x, img in diff_table.items():
        for mu, c in img.items():
            sign = f.of(-1) if par(mdeg[mu]) % 2 == 0 else f.one
            tbl = dstar.setdefault(mu, {})
            v = f.add(tbl.get(x, f.zero), f.mul(sign, c))
            if f.is_zero(v):
                tbl.pop(x, None)
            else:
                tbl[x] = v
    act_star = {}
    for (a, x), img in left_table.items():
        if a == unit:
            continue
        for mu, c in img.items():
            tbl = act_star.setdefault((mu, a), {})
            v = f.add(tbl.get(x, f.zero), c)
            if f.is_zero(v):
                tbl.pop(x, None)
            else:
                tbl[x] = v
    return dstar, act_star


def _r_twisted_images(f, par, dual, dstar, act_star, mbasis, mdeg,
                      corrupt=None):
    """Images of the shared twisted shape on dual.words() x mbasis:

      D(w⊗μ̂) = δ(w)⊗μ̂ + (-1)^{|w|} w⊗d*μ̂
                - (-1)^{|w|+|μ̂|} Σ_a (-1)^{|μ̂||ℓ_a|} (w+(a,))⊗(μ̂◁a)

    corrupt names one letter whose twist contribution gets a flipped sign;
    downstream reports then locate the damage."""
    entries = []
    images = {}
    for w in dual.words():
        wp = par(dual.word_degree(w)) % 2
        for mu in mbasis:
            entries.append((w, mu))
            img = {}

            def put(key, coeff):
                v = f.add(img.get(key, f.zero), coeff)
                if f.is_zero(v):
                    img.pop(key, None)
                else:
                    img[key] = v

            for w2, c in dual.delta_word(w).items():
                put((w2, mu), c)
            wsign = f.of(-1) if wp else f.one
            for x, c in dstar.get(mu, {}).items():
                put((w, x), f.mul(wsign, c))
            if len(w) < dual.window:
                base = (wp + par(mdeg[mu])) % 2
                for a in dual.letters:
                    ops = act_star.get((mu, a))
                    if not ops:
                        continue
                    exp = (base + par(mdeg[mu]) * par(dual.ldeg[a])) % 2
                    sign = f.one if exp else f.of(-1)
                    if corrupt is not None and a == corrupt:
                        sign = f.neg(sign)
                    for x, c in ops.items():
                        put((w + (a,), x), f.mul(sign, c))
            images[(w, mu)] = img
    return entries, images


def _g_data(pkg, n, corrupt=None):
    """Structural form of the G complex on N*⊗ΩC: entries (word, v) with
    words over the reduced bar side, images keyed the same way.  N* is a
    right module over the bar side through the transposed left action, so
    the shared twisted shape applies with the cobar truncation as the word
    algebra."""
    f = pkg.field
    mode = pkg.mode
    par = mode.parity
    view = pkg.bar_algebra()
    nbasis = list(n.space.basis)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in nbasis}
    dstar, act_star = _module_dual_tables(
        f, par, ndeg, n.diff_table, n.left_table, view.unit)
    return _r_twisted_images(
        f, par, pkg.omega(), dstar, act_star, nbasis, ndeg, corrupt=corrupt)


def G_module(pkg, n, label=None):
    """(N*⊗ΩC)^[ξ] as a SUM-totalized WeightComplex, weight = number of
    cobar tensor factors."""
    if pkg.window < 1:
        raise WindowTooSmall("G needs window >= 1")
    _require_dg_bar_side(pkg)
    _require_left_module(pkg, n)
    f = pkg.field
    mode = pkg.mode
    om = pkg.omega()
    ndeg = {v: mode.norm(n.space.deg(v)) for v in n.space.basis}
    entries, images = _g_data(pkg, n)

    def name(key):
        w, v = key
        return f"{word_name(w)}⊗{v}*"

    basis = [
        (name(x), mode.norm(om.word_degree(x[0]) - ndeg[x[1]]),
         len(x[0]), None)
        for x in entries
    ]
    named = {
        name(k): {name(k2): c for k2, c in img.items()}
        for k, img in images.items()
    }
    wc = WeightComplex(
        f, mode, basis, named, SUM, pkg.window,
        label=label or (f"G({n.label})" if n.label else "G"))
    defects = wc.check_interior()
    if defects:
        raise HochkindError(f"G complex has boundary defects: {defects[:3]}")
    return wc


def _f_data(pkg, m, corrupt=None):
    """Structural form of the F complex on C⊗M*: entries (word, mu) and
    images keyed the same way."""
    f = pkg.field
    mode = pkg.mode
    par = mode.parity
    mbasis = list(m.space.basis)
    mdeg = {x: mode.norm(m.space.deg(x)) for x in mbasis}
    dstar, act_star = _module_dual_tables(
        f, par, mdeg, m.diff_table, m.left_table, pkg.source.unit)
    return _r_twisted_images(
        f, par, pkg.dual, dstar, act_star, mbasis, mdeg, corrupt=corrupt)


def F_module(pkg, m, label=None):
    """(M*⊗C)^[ξ] as a PRODUCT-totalized WeightComplex, weight = bar-side
    weight.  m is a finite left module over the package's algebra side."""
    if pkg.source is None:
        raise HochkindError("explicit package has no algebra side for F")
    if m.left_algebra is None or not same_algebra(m.left_algebra, pkg.source):
        raise SchemaError("module is not over this package's algebra side")
    mode = pkg.mode
    dual = pkg.dual
    mdeg = {x: mode.norm(m.space.deg(x)) for x in m.space.basis}
    entries, images = _f_data(pkg, m)

    def name(key):
        w, mu = key
        return f"{word_name(w)}⊗{mu}*"

    basis = [
        (name((w, mu)),
         mode.norm(dual.word_degree(w) - mdeg[mu]), len(w), None)
        for w, mu in entries
    ]
    named = {
        name(k): {name(k2): c for k2, c in img.items()}
        for k, img in images.items()
    }
    return WeightComplex(
        pkg.field, mode, basis, named, PRODUCT, pkg.window,
        label=label or (f"F({m.label})" if m.label else "F"))


# adjunction ---------------------------------------------------------------


class AdjunctionReport:
    """Outcome of comparing Hom(GN, M) with Hom(FM, N) through the
    canonical flip."""

    def __init__(self, ok, checked, mismatches, label=None):
        self.ok = ok
        self.checked = checked
        self.mismatches = mismatches
        self.label = label

    @property
    def passed(self):
        return self.ok

    def __repr__(self):
        verdict = "PASS" if self.ok else "FAIL"
        return f"AdjunctionReport({verdict}, checked={self.checked})"

    def summary(self):
        lines = [
            f"adjunction {self.label or ''}: "
            f"{'PASS' if self.ok else 'FAIL'} ({self.checked} entries)"
        ]
        for src, tgt, lhs, rhs in self.mismatches[:5]:
            lines.append(f"  mismatch at {src} -> {tgt}: {lhs} != {rhs}")
        return "\n".join(lines)


def _hom_g_images(pkg, n, m, corrupt=None):
    """Differential on Hom over the cobar side of G(n) into m, transported
    to the elementary basis (v, x) with v in N, x in M.

    The free-module structure of GN over the cobar truncation reduces the
    computation to the images of the cogenerator slots; single tensor
    factors act on m through the counit-complementary projection to the
    source, picking up the Koszul sign for passing the letter over the
    map."""
    f = pkg.field
    par = pkg.mode.parity
    mode = pkg.mode
    nbasis = list(n.space.basis)
    mbasis = list(m.space.basis)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in nbasis}
    mdeg = {x: mode.norm(m.space.deg(x)) for x in mbasis}
    om = pkg.omega()
    _, images = _g_data(pkg, n, corrupt=corrupt)
    out = {}
    for v in nbasis:
        for x in mbasis:
            img = {}

            def put(key, coeff):
                s = f.add(img.get(key, f.zero), coeff)
                if f.is_zero(s):
                    img.pop(key, None)
                else:
                    img[key] = s

            pphi = (par(ndeg[v]) + par(mdeg[x])) % 2
            msign = f.of(-1) if pphi == 0 else f.one
            for x2, c in m.diff_table.get(x, {}).items():
                put((v, x2), c)
            for v0 in nbasis:
                for (word, v2), c in images[((), v0)].items():
                    if v2 != v:
                        continue
                    if not word:
                        put((v0, x), f.mul(msign, c))
                        continue
                    if len(word) != 1:
                        raise HochkindError(
                            "cogenerator image left the single-letter range")
                    sign = msign
                    if pphi and par(om.ldeg[word[0]]) % 2:
                        sign = f.neg(sign)
                    rho = pkg.rho(word[0])
                    if not rho:
                        continue
                    for x2, c2 in m.act_left(rho, {x: f.one}).items():
                        put((v0, x2), f.mul(sign, f.mul(c, c2)))
            out[(v, x)] = img
    return out


def _hom_f_images(pkg, n, m):
    """Differential on Hom over the bar side of F(m) into n, transported to
    the elementary basis (x, v)."""
    f = pkg.field
    par = pkg.mode.parity
    mode = pkg.mode
    nbasis = list(n.space.basis)
    mbasis = list(m.space.basis)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in nbasis}
    mdeg = {x: mode.norm(m.space.deg(x)) for x in mbasis}
    _, images = _f_data(pkg, m)
    out = {}
    for x in mbasis:
        for v in nbasis:
            img = {}

            def put(key, coeff):
                s = f.add(img.get(key, f.zero), coeff)
                if f.is_zero(s):
                    img.pop(key, None)
                else:
                    img[key] = s

            ppsi = (par(ndeg[v]) + par(mdeg[x])) % 2
            msign = f.of(-1) if ppsi == 0 else f.one
            for v2, c in n.diff_table.get(v, {}).items():
                put((x, v2), c)
            for z in mbasis:
                for (word, mu), c in images[((), z)].items():
                    if mu != x:
                        continue
                    if not word:
                        put((z, v), f.mul(msign, c))
                        continue
                    if len(word) != 1:
                        raise HochkindError(
                            "cogenerator image left the single-letter range")
                    sign = msign
                    if ppsi and par(pkg.dual.ldeg[word[0]]) % 2:
                        sign = f.neg(sign)
                    acted = n.act_left({word_name(word): f.one}, {v: f.one})
                    for v2, c2 in acted.items():
                        put((z, v2), f.mul(sign, f.mul(c, c2)))
            out[(x, v)] = img
    return out


def _flip_sign(f, par, pv, px):
    # Koszul flip between the two Hom realizations; both slots are dualized
    # against a one-shifted word algebra, so the shifted parities swap:
    # exponent (pv+1)(px+1)+1 = pv + px + pv*px (mod 2)
    return f.of(-1) if (pv + px + pv * px) % 2 else f.one


def adjunction_check(pkg, n, m, corrupt=None, label=None):
    """Compare the two Hom complexes underlying the (G, F) adjunction on
    finite modules n (bar side) and m (algebra side), entry-exactly.

    corrupt names one reduced bar-side generator whose twist contribution
    gets a flipped sign on the G side; the report then locates the broken
    entries."""
    if pkg.source is None:
        raise HochkindError("explicit package has no algebra side")
    _require_dg_bar_side(pkg)
    _require_left_module(pkg, n)
    f = pkg.field
    par = pkg.mode.parity
    mode = pkg.mode
    ndeg = {v: mode.norm(n.space.deg(v)) for v in n.space.basis}
    mdeg = {x: mode.norm(m.space.deg(x)) for x in m.space.basis}
    hg = _hom_g_images(pkg, n, m, corrupt=corrupt)
    hf = _hom_f_images(pkg, n, m)
    mismatches = []
    checked = 0
    for (v, x), img in hg.items():
        lhs = {}
        for (v2, x2), c in img.items():
            s = _flip_sign(f, par, par(ndeg[v2]), par(mdeg[x2]))
            lhs[(x2, v2)] = f.mul(s, c)
        s0 = _flip_sign(f, par, par(ndeg[v]), par(mdeg[x]))
        rhs = {k: f.mul(s0, c) for k, c in hf[(x, v)].items()}
        keys = set(lhs) | set(rhs)
        checked += len(keys)
        for k in sorted(keys):
            a = lhs.get(k, f.zero)
            b = rhs.get(k, f.zero)
            if a != b:
                mismatches.append(
                    ((v, x), k, f.format(a), f.format(b)))
    return AdjunctionReport(
        not mismatches, checked, mismatches,
        label=label or pkg.label)


# resolutions --------------------------------------------------------------


class ResolutionRow:
    def __init__(self, weight, degree, dims, status, failures):
        self.weight = weight
        self.degree = degree
        self.dims = dims
        self.status = status
        self.failures = failures

    def __repr__(self):
        return (f"ResolutionRow(weight={self.weight}, degree={self.degree}, "
                f"dims={self.dims}, {self.status})")


class ResolutionReport:
    def __init__(self, rows, window, label=None):
        self.rows = rows
        self.window = window
        self.label = label

    @property
    def passed(self):
        return all(r.status != "FAIL" for r in self.rows)

    @property
    def skipped(self):
        return [r for r in self.rows if r.status == "SKIPPED"]

    def summary(self):
        lines = [f"resolution rows for {self.label or '?'} "
                 f"(window {self.window}):"]
        for r in self.rows:
            lines.append(
                f"  weight {r.weight} degree {r.degree}: dims {r.dims} "
                f"{r.status}")
            for j, kdim, idim in r.failures:
                lines.append(
                    f"    column {j}: kernel {kdim} != image {idim}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"  overall: {verdict}")
        return "\n".join(lines)


def _weighted_words(cbar, wt, limit):
    """All tuples over cbar with total weight <= limit, by length then
    basis order.  Needs every weight >= 1."""
    frontier = [((), 0)]
    while frontier:
        new = []
        for word, w0 in frontier:
            yield word, w0
            for u in cbar:
                w1 = w0 + wt[u]
                if w1 <= limit:
                    new.append((word + (u,), w1))
        frontier = new


def resolution_check(pkg, n, weights=None, corrupt=False, label=None):
    """Exactness of the weight-split rows of the standard relative
    resolution of n built from the bar side.

    Rows sit at a fixed (total weight, internal degree); the column at
    j >= 0 holds strings c (x) u_1..u_j (x) v with c a bar-side element and
    u_i reduced, the column at j = -1 holds n itself, and the maps merge
    neighbours or act on v, with the augmentation as the last step.  Rows of
    total weight equal to the window are reported SKIPPED: their exactness
    is a statement about the next window out.  `weights` assigns a
    nonnegative weight to each basis element of n (default 0); both the
    multiplication and the action must add weights.
    """
    from .sparse import SparseMatrix

    _require_dg_bar_side(pkg)
    _require_left_module(pkg, n)
    f = pkg.field
    mode = pkg.mode
    view = pkg.bar_algebra()
    window = pkg.window
    cbar = pkg.reduced()
    cwt = {b: pkg.weight_of(b) for b in view.space.basis}
    if any(cwt[u] < 1 for u in cbar):
        raise SchemaError("reduced bar-side elements must have weight >= 1")
    nbasis = list(n.space.basis)
    nwt = {v: 0 for v in nbasis}
    if weights is not None:
        for v, w in weights.items():
            if v not in n.space:
                raise SchemaError(f"weight given for unknown element {v!r}")
            if w < 0:
                raise SchemaError("module weights must be nonnegative")
            nwt[v] = int(w)

    for (a, b), img in view.mul_table.items():
        for tgt in img:
            if cwt[tgt] != cwt[a] + cwt[b]:
                raise SchemaError(
                    "bar-side multiplication does not add weights")
    for (a, v), img in n.left_table.items():
        for tgt in img:
            if nwt[tgt] != cwt[a] + nwt[v]:
                raise SchemaError("module action does not add weights")
    for v, img in n.diff_table.items():
        for tgt in img:
            if nwt[tgt] != nwt[v]:
                raise SchemaError("module differential must preserve weight")

    def mul(a, b):
        if corrupt and cwt[a] + cwt[b] == 1:
            return {}
        return view.mul_table.get((a, b), {})

    # bucket every string by (total weight, internal degree)
    cols = {}

    def slot(s, d):
        return cols.setdefault((s, d), {})

    for v in nbasis:
        d = mode.norm(n.space.deg(v))
        slot(nwt[v], d).setdefault(-1, []).append(v)
    for word, wwt in _weighted_words(cbar, cwt, window):
        j = len(word)
        wdeg = sum(view.deg(u) for u in word)
        for c in view.space.basis:
            if cwt[c] + wwt > window:
                continue
            for v in nbasis:
                s = cwt[c] + wwt + nwt[v]
                if s > window:
                    continue
                d = mode.norm(view.deg(c) + wdeg + n.space.deg(v))
                slot(s, d).setdefault(j, []).append((c, word, v))

    def face(entry):
        c, word, v = entry
        j = len(word)
        img = {}

        def put(key, coeff):
            s = f.add(img.get(key, f.zero), coeff)
            if f.is_zero(s):
                img.pop(key, None)
            else:
                img[key] = s

        if j == 0:
            for v2, cc in n.act_left({c: f.one}, {v: f.one}).items():
                put(v2, cc)
            return img
        for tgt, cc in mul(c, word[0]).items():
            put((tgt, word[1:], v), cc)
        for i in range(j - 1):
            sign = f.of(-1) if (i + 1) % 2 else f.one
            for tgt, cc in mul(word[i], word[i + 1]).items():
                put((c, word[:i] + (tgt,) + word[i + 2:], v),
                    f.mul(sign, cc))
        sign = f.of(-1) if j % 2 else f.one
        for v2, cc in n.act_left({word[j - 1]: f.one}, {v: f.one}).items():
            put((c, word[:j - 1], v2), f.mul(sign, cc))
        return img

    rows = []
    for (s, d) in sorted(cols):
        columns = cols[(s, d)]
        jmax = max(columns)
        dims = [len(columns.get(j, [])) for j in range(-1, jmax + 1)]
        if s >= window:
            rows.append(ResolutionRow(s, d, dims, "SKIPPED", []))
            continue
        ranks = {}
        for j in range(0, jmax + 1):
            src = columns.get(j, [])
            tgt = columns.get(j - 1, [])
            index = {e: i for i, e in enumerate(tgt)}
            entries = {}
            for ci, e in enumerate(src):
                for tgt_e, cc in face(e).items():
                    if tgt_e not in index:
                        raise SchemaError(
                            "face left its weight/degree row")
                    entries[(index[tgt_e], ci)] = cc
            ranks[j] = SparseMatrix(
                f, len(tgt), len(src), entries).rank()
        ranks[jmax + 1] = 0
        failures = []
        for j in range(-1, jmax + 1):
            dim_j = len(columns.get(j, []))
            rank_out = ranks.get(j, 0) if j >= 0 else 0
            kdim = dim_j - rank_out
            idim = ranks.get(j + 1, 0)
            if kdim != idim:
                failures.append((j, kdim, idim))
        rows.append(ResolutionRow(
            s, d, dims, "FAIL" if failures else "EXACT", failures))
    return ResolutionReport(rows, window, label=label or pkg.label)


# two-sided G --------------------------------------------------------------


def _pair_name(v, word):
    if not word:
        return v
    return f"{v}⊗" + "⊗".join(word)


def _g2_data(pkgL, pkgR, n):
    """Double-complex shape on slots (S, v, P): the fixed-|P| row is the
    one-sided twisted complex of the row module n tensored with the right
    letters of P (unwound through the name identification, entry-exactly),
    and the |P|-raising part is the transpose of the plain-simplicial face
    maps (right action, then adjacent letter merges with (-1)^i), scaled by
    (-1)^{total degree of the slot} to anticommute with the rows.

    Returns entries [(S, v, P)], images, and the three twist blocks
    (combined, left-only, right-only) for the additivity assertion."""
    f = pkgL.field
    mode = pkgL.mode
    par = mode.parity
    viewL = pkgL.bar_algebra()
    viewR = pkgR.bar_algebra()
    omL = pkgL.omega()
    cbarR = pkgR.reduced()
    nbasis = list(n.space.basis)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in nbasis}
    bdeg = {b: mode.norm(viewR.deg(b)) for b in cbarR}
    dstar, act_left_star = _module_dual_tables(
        f, par, ndeg, n.diff_table, n.left_table, viewL.unit)

    def transpose_into(tables, key_of, img, x):
        for y, c in img.items():
            tbl = tables.setdefault(key_of(y), {})
            s = f.add(tbl.get(x, f.zero), c)
            if f.is_zero(s):
                tbl.pop(x, None)
            else:
                tbl[x] = s

    act_right_star = {}
    for (x, b), img in n.right_table.items():
        if b != viewR.unit:
            transpose_into(act_right_star, lambda v: (v, b), img, x)
    reduced_set = set(cbarR)
    dr_star = {}
    for q in cbarR:
        transpose_into(dr_star, lambda p: p,
                       viewR.diff_table.get(q, {}), q)
    mulr_star = {}
    for pair in itertools.product(cbarR, repeat=2):
        img = viewR.mul_table.get(pair, {})
        img = {p: c for p, c in img.items() if p in reduced_set}
        transpose_into(mulr_star, lambda p: p, img, pair)

    def put(table, key, coeff):
        s = f.add(table.get(key, f.zero), coeff)
        if f.is_zero(s):
            table.pop(key, None)
        else:
            table[key] = s

    entries = []
    images = {}
    tw_c = {}
    tw_l = {}
    tw_r = {}
    pwords = [
        P for k in range(pkgR.window + 1)
        for P in itertools.product(cbarR, repeat=k)
    ]
    for P in pwords:
        k = len(P)
        pdeg = [par(bdeg[b]) % 2 for b in P]
        pp = sum(pdeg) % 2
        for S in omL.words():
            ps = par(omL.word_degree(S)) % 2
            for v in nbasis:
                x = (S, v, P)
                entries.append(x)
                img = {}
                mdeg = (par(ndeg[v]) + pp) % 2
                # row part: differential of the word S
                for S2, c in omL.delta_word(S).items():
                    put(img, (S2, v, P), c)
                # row part: transposed row-module differential, n slot
                sa = f.of(-1) if (ps + pp) % 2 else f.one
                for x2, c in dstar.get(v, {}).items():
                    put(img, (S, x2, P), f.mul(sa, c))
                # row part: transposed row-module differential, letters
                pre = 0
                for t in range(k):
                    e = (ps + 1 + pp + pre) % 2
                    sgn = f.of(-1) if e else f.one
                    for q, c in dr_star.get(P[t], {}).items():
                        put(img, (S, v, P[:t] + (q,) + P[t + 1:]),
                            f.mul(sgn, c))
                    pre = (pre + pdeg[t]) % 2
                # row part: appended twist through the transposed action
                if len(S) < omL.window:
                    base = (ps + mdeg) % 2
                    for a in omL.letters:
                        ops = act_left_star.get((v, a))
                        if not ops:
                            continue
                        exp = (base + mdeg * par(omL.ldeg[a])) % 2
                        sign = f.one if exp else f.of(-1)
                        for v2, c in ops.items():
                            key = (S + (a,), v2, P)
                            val = f.mul(sign, c)
                            put(img, key, val)
                            put(tw_c, (x, key), val)
                            put(tw_l, (x, key), val)
                # transposed faces, scaled by the slot's total degree
                if k < pkgR.window:
                    tot = (ps + k + pp + par(ndeg[v])) % 2
                    st = f.of(-1) if tot else f.one
                    for b in cbarR:
                        ops = act_right_star.get((v, b))
                        if not ops:
                            continue
                        for v2, c in ops.items():
                            key = (S, v2, (b,) + P)
                            val = f.mul(st, c)
                            put(img, key, val)
                            put(tw_c, (x, key), val)
                            put(tw_r, (x, key), val)
                    for t in range(k):
                        e = (tot + t + 1) % 2
                        face = f.of(-1) if e else f.one
                        for pair, c in mulr_star.get(P[t], {}).items():
                            put(img, (S, v, P[:t] + pair + P[t + 1:]),
                                f.mul(face, c))
                images[x] = img
    return entries, images, tw_c, tw_l, tw_r


def bimodule_G(pkgL, pkgR, n, label=None, assert_rows=True):
    """Two-sided G of a bar-side bimodule, as a doubly weight-graded
    complex: weight = total number of word factors, auxWeight = number of
    right-side factors.

    Construction-time assertions: the twist block equals the sum of the
    two one-sided twist blocks entry-exactly, and (with assert_rows) each
    fixed-aux row matches the one-sided G complex of n tensored with aux
    many right-side dual letters."""
    _require_dg_bar_side(pkgL)
    _require_dg_bar_side(pkgR)
    viewL = pkgL.bar_algebra()
    viewR = pkgR.bar_algebra()
    if n.side != CurvedModule.BIMODULE:
        raise SchemaError("two-sided G needs a bimodule")
    if not same_algebra(n.left_algebra, viewL):
        raise SchemaError("bimodule is not left-over the first bar side")
    if not same_algebra(n.right_algebra, viewR):
        raise SchemaError("bimodule is not right-over the second bar side")
    f = pkgL.field
    mode = pkgL.mode
    omL = pkgL.omega()
    omR = pkgR.omega()
    entries, images, tw_c, tw_l, tw_r = _g2_data(pkgL, pkgR, n)
    merged = dict(tw_l)
    for key, c in tw_r.items():
        if key in merged:
            raise HochkindError("one-sided twist blocks overlap")
        merged[key] = c
    if merged != tw_c:
        raise HochkindError(
            "twist block is not the sum of the one-sided twists")
    if assert_rows:
        _assert_bimodule_rows(pkgL, pkgR, n, images)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in n.space.basis}

    def name(x):
        S, v, P = x
        return "⊗".join(list(S) + [f"{v}*"] + list(P))

    def dual_degree(x):
        S, v, P = x
        return mode.norm(
            omL.word_degree(S) + omR.word_degree(P) - ndeg[v])

    basis = [(name(x), dual_degree(x), len(x[0]) + len(x[2]), len(x[2]))
             for x in entries]
    named = {
        name(k): {name(k2): c for k2, c in img.items()}
        for k, img in images.items()
    }
    wc = WeightComplex(
        f, mode, basis, named, SUM, pkgL.window + pkgR.window,
        label=label or "G2")
    defects = wc.check_interior()
    if defects:
        raise HochkindError(
            f"two-sided G has boundary defects: {defects[:3]}")
    return wc


def _row_module(pkgR, n, k):
    """n tensored with k reduced right-side letters, as a left module over
    the other bar side: the letters keep their bar-side degrees and evolve
    by the bar-side differential, Koszul past n."""
    f = pkgR.field
    mode = pkgR.mode
    par = mode.parity
    viewR = pkgR.bar_algebra()
    cbarR = pkgR.reduced()
    viewL = n.left_algebra
    nbasis = list(n.space.basis)
    ndeg = {v: mode.norm(n.space.deg(v)) for v in nbasis}
    pairs = [
        (v, P)
        for P in itertools.product(cbarR, repeat=k)
        for v in nbasis
    ]
    names = {}
    degs = {}
    for v, P in pairs:
        nm = _pair_name(v, P)
        names[(v, P)] = nm
        degs[nm] = mode.norm(
            n.space.deg(v) + sum(viewR.deg(b) for b in P))
    space = GradedSpace([names[p] for p in pairs], degs)
    diff = {}
    for v, P in pairs:
        img = {}

        def put(key, coeff):
            s = f.add(img.get(key, f.zero), coeff)
            if f.is_zero(s):
                img.pop(key, None)
            else:
                img[key] = s

        for v2, c in n.diff_table.get(v, {}).items():
            put(names[(v2, P)], c)
        prefix = par(ndeg[v])
        for t in range(k):
            sign = f.of(-1) if prefix % 2 else f.one
            for tgt, c in viewR.diff_table.get(P[t], {}).items():
                put(names[(v, P[:t] + (tgt,) + P[t + 1:])],
                    f.mul(sign, c))
            prefix += par(viewR.deg(P[t]))
        if img:
            diff[names[(v, P)]] = img
    action = {}
    for a in viewL.space.basis:
        for v, P in pairs:
            if a == viewL.unit:
                action[(a, names[(v, P)])] = {names[(v, P)]: f.one}
                continue
            acted = n.act_left({a: f.one}, {v: f.one})
            if acted:
                action[(a, names[(v, P)])] = {
                    names[(v2, P)]: c for v2, c in acted.items()}
    mk = CurvedModule(viewL, space, CurvedModule.LEFT, diff,
                      left_action=action)
    return mk, names


def _assert_bimodule_rows(pkgL, pkgR, n, images):
    """Fixed-aux rows must reproduce one-sided G complexes of the row
    modules entry-exactly under the name identification
    (S, v, P) <-> (S, v⊗P)."""
    for k in range(pkgR.window + 1):
        mk, names = _row_module(pkgR, n, k)
        _, g_images = _g_data(pkgL, mk)
        back = {names[p]: p for p in names}
        for (S, nm), img in g_images.items():
            v, P = back[nm]
            row_img = {}
            for (S2, nm2), c in img.items():
                v2, P2 = back[nm2]
                row_img[(S2, v2, P2)] = c
            big = {
                y: c for y, c in images[(S, v, P)].items()
                if len(y[2]) == k
            }
            if row_img != big:
                raise HochkindError(
                    f"row {k} differs from one-sided G at {(S, v, P)}")


def planar_word_dims(reduced_counts, window):
    """Direct count of planar tensor words by total weight: the dimension
    of weight s in the free graded algebra on reduced generators counted by
    weight."""
    counts = {int(k): int(v) for k, v in reduced_counts.items()}
    if any(k < 1 for k in counts):
        raise SchemaError("reduced generators need weight >= 1")
    dims = {0: 1}
    for s in range(1, window + 1):
        dims[s] = sum(
            counts.get(t, 0) * dims[s - t] for t in range(1, s + 1))
    return dims
