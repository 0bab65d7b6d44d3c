"""Maurer-Cartan elements, twisting, twisted modules, hom complexes,
uncurving, and free curved modules."""

import json
import os

import pytest
from hypothesis import given, strategies as st

from hochkind.errors import (
    AlgebraMismatch,
    FieldNotFinite,
    NonCentralCurvature,
    SearchSpaceTooLarge,
    WrongDegree,
)
from hochkind.fields import QQ, PrimeField
from hochkind.graded import (
    GradedSpace,
    Z2_MODE,
    el_add,
    el_neg,
    el_scale,
    end_of_graded_space,
    tensor,
)
from hochkind.twist import (
    HomComplex,
    TwistedModule,
    complex_of_algebra,
    complex_of_module,
    end_algebra,
    end_complex,
    free_curved_module,
    mc_defect,
    mc_enumerate,
    same_algebra,
    strip_aux,
    twist_algebra,
    twist_module,
    uncurve,
)

from fixtures_algebras import F5, corpus_algebras, lambda_e, mat2, kxn, rw

GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "mf_end.json")


def mf_x2(field=F5):
    """The rank-(1|1) factorization q = [[0,x],[x,0]] of w = x² over R_w."""
    a = rw(field)
    vspace = GradedSpace(["m0", "m1"], {"m0": 0, "m1": 1})
    q = {("m0", "m1"): {"x": field.one}, ("m1", "m0"): {"x": field.one}}
    return TwistedModule(a, vspace, q, label="mf_x2")


def mf_trivial(field=F5):
    """The contractible factorization q = [[0,1],[x²,0]] of w = x²."""
    a = rw(field)
    vspace = GradedSpace(["m0", "m1"], {"m0": 0, "m1": 1})
    q = {("m0", "m1"): {"1": field.one}, ("m1", "m0"): {"x2": field.one}}
    return TwistedModule(a, vspace, q, label="mf_trivial")


def noncentral_curved(field=F5):
    """A curved algebra whose curvature is not central: twist the dg algebra
    End(k⊕k[1])⊗Λ(e) by the non-MC element y = D[0]⊗e + E[v0,v1]⊗1, whose
    square -2·E[v0,v1]⊗e fails to commute with E[v1,v0]⊗1."""
    from hochkind.graded import Z_MODE

    vspace = GradedSpace(["v0", "v1"], {"v0": 0, "v1": -1})
    amb = tensor(end_of_graded_space(field, Z_MODE, vspace), lambda_e(field))
    y = {"D[0]⊗e": field.one, "E[v0,v1]⊗1": field.one}
    return twist_algebra(amb, y)


# -- Maurer-Cartan defects and enumeration ------------------------------------


def test_defect_of_zero_is_minus_curvature():
    a = rw()
    assert mc_defect(a, {}) == el_neg(F5, a.curvature)
    dg = lambda_e(QQ)
    assert mc_defect(dg, {}) == {}


def test_defect_rejects_wrong_degree():
    a = lambda_e(QQ)
    with pytest.raises(WrongDegree):
        mc_defect(a, {"1": QQ.one})
    with pytest.raises(WrongDegree):
        twist_algebra(a, {"1": QQ.one, "e": QQ.one})


def test_mc_enumerate_dual_numbers():
    pts = mc_enumerate(lambda_e(F5))
    assert len(pts) == 5
    values = sorted(p.value.get("e", 0) for p in pts)
    assert values == [0, 1, 2, 3, 4]
    assert all(p.is_mc for p in pts)


def test_mc_enumerate_rw_has_no_solutions():
    # R_w sits in even degree, so the only degree-1 element is 0 and its
    # defect is -h != 0
    assert mc_enumerate(rw()) == []


def test_mc_enumerate_guards():
    with pytest.raises(FieldNotFinite):
        mc_enumerate(lambda_e(QQ))
    square = tensor(lambda_e(F5), lambda_e(F5))
    with pytest.raises(SearchSpaceTooLarge):
        mc_enumerate(square, max_points=10)
    assert len(mc_enumerate(square)) == 25


# -- twisting algebras and modules --------------------------------------------


def test_twist_is_involutive():
    a = lambda_e(F5)
    x = {"e": F5.of(2)}
    back = twist_algebra(twist_algebra(a, x), el_neg(F5, x))
    assert same_algebra(back, strip_aux(a))


def test_twist_by_mc_element_of_dual_numbers_changes_nothing():
    a = lambda_e(F5)
    t = twist_algebra(a, {"e": F5.of(3)})
    assert same_algebra(t, strip_aux(a))
    assert t.curvature == {}


def test_twist_curvature_formula():
    a = rw()
    t = twist_algebra(a, {})
    assert t.curvature == a.curvature
    square = tensor(lambda_e(F5), lambda_e(F5))
    x = {"e⊗1": F5.of(2), "1⊗e": F5.of(4)}
    t2 = twist_algebra(square, x)
    want = el_add(F5, square.curvature,
                  el_add(F5, square.diff(x), square.mul(x, x)))
    assert t2.curvature == want
    assert t2.validate().ok


def test_twist_keeps_aux_only_for_weight_zero_twists():
    a = lambda_e(F5)
    assert twist_algebra(a, {"e": F5.one}).space.aux is None
    assert twist_algebra(a, {}).space.aux is not None


@given(st.integers(0, 4), st.integers(0, 4))
def test_twists_add(alpha, beta):
    a = tensor(lambda_e(F5), lambda_e(F5))
    x = {"e⊗1": F5.of(alpha)}
    y = {"1⊗e": F5.of(beta)}
    once = twist_algebra(a, el_add(F5, x, y))
    stepwise = twist_algebra(twist_algebra(a, x), y)
    assert same_algebra(strip_aux(once), strip_aux(stepwise))


def test_twist_module_left_regular():
    # left-regular module over the dual numbers, twisted by alpha*e
    from hochkind.graded import CurvedModule

    a = lambda_e(F5)
    left = {}
    for x in a.basis():
        for m in a.basis():
            prod = a.mul_basis(x, m)
            if prod:
                left[(x, m)] = prod
    mod = CurvedModule(a, a.space, CurvedModule.LEFT, {}, left_action=left)
    assert mod.validate().ok
    tw = twist_module(mod, {"e": F5.of(2)})
    assert tw.validate().ok
    assert tw.diff({"1": F5.one}) == {"e": F5.of(2)}
    assert tw.diff({"e": F5.one}) == {}


def test_twist_module_needs_left_action():
    from fixtures_algebras import right_regular

    a = lambda_e(F5)
    mod = right_regular(a)
    from hochkind.errors import SchemaError

    with pytest.raises(SchemaError):
        twist_module(mod, {"e": F5.one})


# -- twisted modules and their hom complexes ----------------------------------


def test_mf_connection_is_flat():
    t = mf_x2()
    assert t.defect == {}
    assert t.rank == 2


def test_twisted_module_rejects_wrong_degree_connection():
    a = rw()
    vspace = GradedSpace(["m0", "m1"], {"m0": 0, "m1": 1})
    with pytest.raises(WrongDegree):
        TwistedModule(a, vspace, {("m0", "m0"): {"x": F5.one}})


def test_end_complex_matches_golden_table():
    t = mf_x2()
    ec = end_complex(t)
    ec.complex.check()
    with open(GOLDEN) as fh:
        golden = json.load(fh)
    assert {str(k): v for k, v in ec.complex.dims.items()} == golden["dims"]
    coh = ec.complex.cohomology()
    assert {str(k): v for k, v in coh.items()} == golden["cohomology"]


def test_end_complex_identity_is_closed():
    ec = end_complex(mf_x2())
    ident = ec.identity()
    assert ec.element_degree(ident) == 0
    assert ec.apply_d(ident) == {}


def test_end_complex_identity_is_a_unit():
    ec = end_complex(mf_x2())
    ident = ec.identity()
    for key in ec.keys:
        f = {key: F5.one}
        assert ec.compose(ident, ec, f) == f
        assert ec.compose(f, ec, ident) == f


def test_end_complex_composition_associative():
    ec = end_complex(mf_x2())
    keys = ec.keys
    for f in keys[::3]:
        for g in keys[::3]:
            for h in keys[::3]:
                fg = ec.compose({f: F5.one}, ec, {g: F5.one})
                gh = ec.compose({g: F5.one}, ec, {h: F5.one})
                assert ec.compose(fg, ec, {h: F5.one}) == \
                    ec.compose({f: F5.one}, ec, gh)


def test_end_complex_differential_is_a_derivation():
    ec = end_complex(mf_x2())
    for f in ec.keys:
        pf = ec.degree[f]
        for g in ec.keys:
            lhs = ec.apply_d(ec.compose({f: F5.one}, ec, {g: F5.one}))
            rhs = ec.compose(ec.apply_d({f: F5.one}), ec, {g: F5.one})
            term = ec.compose({f: F5.one}, ec, ec.apply_d({g: F5.one}))
            if pf:
                term = {k: F5.neg(v) for k, v in term.items()}
            rhs = dict(rhs)
            for k, v in term.items():
                acc = F5.add(rhs.get(k, F5.zero), v)
                if F5.is_zero(acc):
                    rhs.pop(k, None)
                else:
                    rhs[k] = acc
            assert lhs == rhs


def test_hom_complex_between_different_modules():
    t = mf_x2()
    s = mf_trivial()
    assert s.defect == {}
    hom_ts = HomComplex(t, s)
    hom_ts.complex.check()
    # the target factorization is contractible, so the hom complex is acyclic
    assert all(v == 0 for v in hom_ts.complex.cohomology().values())
    hom_st = HomComplex(s, t)
    hom_st.complex.check()
    assert all(v == 0 for v in hom_st.complex.cohomology().values())
    # f: s -> t, g: t -> s, so f∘g ∈ End(t) and the derivation rule reads
    # D(f∘g) = D(f)∘g + (-1)^{|f|} f∘D(g) slot-exactly
    end_t = HomComplex(t, t)
    for f in hom_st.keys:
        pf = hom_st.degree[f]
        for g in hom_ts.keys:
            comp = hom_st.compose({f: F5.one}, hom_ts, {g: F5.one})
            lhs = end_t.apply_d(comp)
            rhs = hom_st.compose(hom_st.apply_d({f: F5.one}),
                                 hom_ts, {g: F5.one})
            term = hom_st.compose({f: F5.one}, hom_ts,
                                  hom_ts.apply_d({g: F5.one}))
            if pf:
                term = {k: F5.neg(v) for k, v in term.items()}
            total = dict(rhs)
            for k, v in term.items():
                acc = F5.add(total.get(k, F5.zero), v)
                if F5.is_zero(acc):
                    total.pop(k, None)
                else:
                    total[k] = acc
            assert lhs == total
    with pytest.raises(AlgebraMismatch):
        hom_ts.identity()


def test_hom_complex_rejects_mismatched_defects():
    from hochkind.errors import HochkindError

    a = rw()
    flat = mf_x2()
    bare = TwistedModule(a, GradedSpace(["g"], {"g": 0}), {})
    assert bare.defect != {}
    with pytest.raises(HochkindError):
        HomComplex(flat, bare)
    # equal central scalar defects are fine: q = 0 on both sides gives the
    # underlying complex of End(V)⊗A
    hom = HomComplex(bare, bare)
    hom.complex.check()
    assert hom.complex.total_dim() == a.space.dim


def test_rank_one_trivial_end_is_the_algebra_itself():
    a = rw()
    t = TwistedModule(a, GradedSpace(["g"], {"g": 0}), {})
    ea = end_algebra(t)
    assert ea.validate().ok
    assert ea.space.dim == a.space.dim
    # multiplication table is A's, relabeled through I⊗(-)
    for x in a.basis():
        for y in a.basis():
            prod = ea.mul_basis(f"I⊗{x}", f"I⊗{y}")
            want = {f"I⊗{n}": c for n, c in a.mul_basis(x, y).items()}
            assert prod == want


def test_noncentral_curvature_is_detected():
    bad = noncentral_curved()
    assert bad.validate().ok
    h = bad.curvature
    assert any(bad.bracket(h, {b: F5.one}) for b in bad.basis())
    t = TwistedModule(bad, GradedSpace(["g"], {"g": 0}), {})
    with pytest.raises(NonCentralCurvature):
        end_complex(t)
    with pytest.raises(NonCentralCurvature):
        end_algebra(t)
    with pytest.raises(NonCentralCurvature):
        uncurve(bad)


# -- uncurving -----------------------------------------------------------------


@pytest.mark.parametrize("a", corpus_algebras(), ids=lambda a: a.label)
def test_uncurve_gives_acyclic_dg_algebra(a):
    prime, witness = uncurve(a)
    assert prime.validate().ok
    assert prime.is_dg()
    assert prime.diff(witness) == {prime.unit: a.field.one}
    cx = complex_of_algebra(prime)
    cx.check()
    coh = cx.cohomology()
    assert all(v == 0 for v in coh.values())


def test_uncurve_witness_has_degree_minus_one():
    a = rw()
    prime, witness = uncurve(a)
    deg = prime.element_degree(witness)
    assert deg == a.mode.norm(-1)


# -- free curved modules --------------------------------------------------------


def test_free_module_over_dg_algebra_is_acyclic_right_module():
    from hochkind.graded import CurvedModule

    a = lambda_e(F5)
    L = GradedSpace(["l"], {"l": 0})
    m = free_curved_module(a, L)
    assert m.side == CurvedModule.RIGHT
    assert m.validate().ok
    cx = complex_of_module(m)
    cx.check()
    assert all(v == 0 for v in cx.cohomology().values())


def test_free_module_over_rw_is_left_module_with_curvature_law():
    from hochkind.graded import CurvedModule

    a = rw()
    L = GradedSpace(["l"], {"l": 0})
    m = free_curved_module(a, L)
    assert m.side == CurvedModule.LEFT
    assert m.validate().ok
    # d² = h·m, which is nonzero here
    probe = {"l⊗1": F5.one}
    assert m.diff(m.diff(probe)) == m.act_left(a.curvature, probe)


def test_free_module_on_zero_space_rejected():
    from hochkind.errors import SchemaError

    a = lambda_e(F5)
    with pytest.raises(SchemaError):
        free_curved_module(a, GradedSpace([], {}))


def test_free_module_noncommutative_curved_base_rejected():
    bad = noncentral_curved()
    L = GradedSpace(["l"], {"l": 0})
    with pytest.raises(NonCentralCurvature):
        free_curved_module(bad, L)


def test_free_module_name_collision_rejected():
    from hochkind.errors import SchemaError

    a = lambda_e(F5)
    L = GradedSpace(["l", "d_l"], {"l": 0, "d_l": 1})
    with pytest.raises(SchemaError):
        free_curved_module(a, L)


# -- randomized twisting laws ----------------------------------------------------


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_random_twists_validate_with_expected_curvature(alpha, beta, gamma):
    base = tensor(lambda_e(F5), lambda_e(F5))
    x = {}
    if alpha:
        x["e⊗1"] = F5.of(alpha)
    if beta:
        x["1⊗e"] = F5.of(beta)
    t = twist_algebra(base, x)
    assert t.validate().ok
    want = el_add(F5, base.curvature,
                  el_add(F5, base.diff(x), base.mul(x, x)))
    assert t.curvature == want
    assert (t.curvature == {}) == (mc_defect(base, x) == {})
    # twisting a module by gamma*e over the single factor
    a = lambda_e(F5)
    t1 = twist_algebra(a, {"e": F5.of(gamma)})
    assert t1.validate().ok
    assert (t1.curvature == {}) == (mc_defect(a, {"e": F5.of(gamma)}) == {})
