"""Hand-built algebras shared across the test suite.

These mirror the shipped corpus documents; corpus JSON files are generated
from these builders so the two never drift apart.
"""

from hochkind.fields import QQ, PrimeField
from hochkind.graded import (
    CurvedAlgebra,
    CurvedModule,
    GradedSpace,
    Z2_MODE,
    Z_MODE,
    complete_unit_rows,
    matrix_algebra,
)

F5 = PrimeField(5)


def scalar_algebra(field, label="k"):
    space = GradedSpace(["1"], {"1": 0}, {"1": 0})
    mul = complete_unit_rows(field, space.basis, "1", {})
    return CurvedAlgebra(field, Z_MODE, space, "1", mul, {}, {},
                         augmented=True, label=label)


def lambda_e(field, label=None):
    """Dual numbers on a degree-1 generator: k[e]/e², d = 0, h = 0."""
    space = GradedSpace(["1", "e"], {"1": 0, "e": 1}, {"1": 0, "e": 1})
    mul = complete_unit_rows(field, space.basis, "1", {})
    return CurvedAlgebra(field, Z_MODE, space, "1", mul, {}, {},
                         augmented=True, label=label or "lambda_e")


def kxn(field, n, label=None):
    """k[x]/xⁿ in degree 0, augmented at x = 0, auxWeight(x^i) = i."""
    names = ["1"] + [("x" if i == 1 else f"x{i}") for i in range(1, n)]
    space = GradedSpace(names, {nm: 0 for nm in names},
                        {nm: i for i, nm in enumerate(names)})
    mul = {}
    for i in range(1, n):
        for j in range(1, n):
            if i + j < n:
                mul[(names[i], names[j])] = {names[i + j]: field.one}
    mul = complete_unit_rows(field, names, "1", mul)
    return CurvedAlgebra(field, Z_MODE, space, "1", mul, {}, {},
                         augmented=True, label=label or f"kx{n}")


def rw(field=F5, n=4, label=None):
    """R_w: k[x]/xⁿ as a Z/2-graded curved algebra with h = x²."""
    names = ["1"] + [("x" if i == 1 else f"x{i}") for i in range(1, n)]
    space = GradedSpace(names, {nm: 0 for nm in names},
                        {nm: i for i, nm in enumerate(names)})
    mul = {}
    for i in range(1, n):
        for j in range(1, n):
            if i + j < n:
                mul[(names[i], names[j])] = {names[i + j]: field.one}
    mul = complete_unit_rows(field, names, "1", mul)
    return CurvedAlgebra(field, Z2_MODE, space, "1", mul, {}, {"x2": field.one},
                         augmented=True, label=label or "rw")


def mat2(field, label=None):
    return matrix_algebra(field, 2, label=label or "mat2")


def right_regular(a, label=None):
    """The algebra as a right module over itself; needs h = 0 so that the
    right curvature law d² = -m·h matches d² = [h, -]."""
    right = {}
    for m in a.basis():
        for b in a.basis():
            prod = a.mul_basis(m, b)
            if prod:
                right[(m, b)] = prod
    return CurvedModule(
        a, a.space, CurvedModule.RIGHT,
        {k: dict(v) for k, v in a.diff_table.items()},
        right_action=right, label=label,
    )


def corpus_algebras():
    """The validation corpus: named small algebras plus tensors and opposites."""
    base = [
        lambda_e(QQ, "lambda_e_q"),
        lambda_e(F5, "lambda_e_f5"),
        kxn(QQ, 3, "kx3_q"),
        kxn(F5, 2, "kx2_f5"),
        kxn(F5, 3, "kx3_f5"),
        kxn(F5, 4, "kx4_f5"),
        mat2(QQ, "mat2_q"),
        mat2(F5, "mat2_f5"),
        rw(F5, 4, "rw_f5"),
    ]
    return base
