import random

import pytest
import sympy as sp

from detlab.errors import DomainError
from detlab.hessian import (antidiag_specialization_check, cloned_dual_ladder, diag_specialization_check,
                            dual_ladder_check, factor_multiplicity, factor_multiplicity_with_residual, hessian,
                            hessian_determinant, hessian_rank, homaloidal_check, image_equation_substitution_check,
                            jacobian_rank, minors_image_equation, polar_ladder, restricted_multiplicity,
                            vanish_exactly, vanish_mod, zeros_dual_ladder, generic_cofactor_difference,
                            adjugate_image_ring)
from detlab.linalg import evaluate_matrix, rank_exact
from detlab.matrices import MatrixSpec, build
from detlab.poly import Polynomial, VarTable

from oracles import symbolic_grid, permutation_det, to_sympy

XY = VarTable(["x", "y"])
XYZ = VarTable(["x", "y", "z"])


def test_hessian_small_examples():
    x = VarTable(["x"])
    assert hessian(Polynomial.parse("x^2", x)).matrix == [[x.const(2)]]
    H = hessian(Polynomial.parse("x*y", XY)).matrix
    assert H == [[XY.zero(), XY.one()], [XY.one(), XY.zero()]]


@pytest.mark.parametrize("spec", [MatrixSpec.cloned(3), MatrixSpec.zeros(4, 1)], ids=["cloned3", "zeros41"])
def test_hessian_symmetric_and_linear(spec):
    rec = hessian(build(spec).determinant())
    assert rec.is_symmetric()
    assert all(p.is_zero() or p.degree() == spec.m - 2 for row in rec.matrix for p in row)


def test_hessian_matches_sympy():
    spec = MatrixSpec.zeros(3, 1)
    f = build(spec).determinant()
    fs = permutation_det(symbolic_grid(spec))
    syms = [sp.Symbol(n) for n in f.ring.names]
    Hs = sp.hessian(fs, syms)
    H = hessian(f).matrix
    for i in range(len(syms)):
        for j in range(len(syms)):
            assert to_sympy(H[i][j]) == sp.expand(Hs[i, j])


@pytest.mark.parametrize("m", [3, 4])
def test_cloned_hessian_full(m):
    f = build(MatrixSpec.cloned(m)).determinant()
    cert = hessian_rank(f, random.Random(1), upper_bound=len(f.ring))
    assert cert.rank == m * m - 1 and cert.certification == "exact"


@pytest.mark.parametrize("m, r", [(3, 1), (4, 1), (4, 2)])
def test_zeros_hessian_rank(m, r):
    f = build(MatrixSpec.zeros(m, r)).determinant()
    cert = hessian_rank(f, random.Random(1))
    assert cert.rank == m * m - r * (r + 1)


def test_hessian_rank_consistent_with_jacobian_of_gradient():
    f = build(MatrixSpec.zeros(4, 2)).determinant()
    grads = [f.derivative(v) for v in range(len(f.ring))]
    assert jacobian_rank(grads, random.Random(2)).rank == hessian_rank(f, random.Random(3)).rank


def test_hessian_rank_matches_sympy_at_a_point():
    spec = MatrixSpec.zeros(4, 1)
    f = build(spec).determinant()
    H = hessian(f).matrix
    rng = random.Random(7)
    pt = [rng.randint(-20, 20) for _ in range(len(f.ring))]
    assert rank_exact(evaluate_matrix(H, pt)) == sp.Matrix(evaluate_matrix(H, pt)).rank()


def test_zero_point_control():
    H = hessian(build(MatrixSpec.cloned(3)).determinant()).matrix
    assert rank_exact(evaluate_matrix(H, [0] * 8)) == 0


@pytest.mark.parametrize("m", [3, 4])
def test_diag_specialization(m):
    res = diag_specialization_check(m)
    assert res.status == "PASS"


@pytest.mark.parametrize("m, r", [(3, 1), (4, 1), (4, 2)])
def test_antidiag_specialization(m, r):
    res = antidiag_specialization_check(m, r)
    assert res.status == "PASS"
    assert res.witnesses["certified_lower_bound"] == m * m - r * (r + 1)


def test_factor_multiplicity_by_construction():
    f = Polynomial.parse("x^2 + y*z", XYZ)
    g = Polynomial.parse("x - z + 3", XYZ)
    assert factor_multiplicity(f * f * g, f) == 2
    with pytest.raises(DomainError):
        factor_multiplicity(XYZ.zero(), f)


def test_cloned3_hessian_determinant_and_residual():
    M = build(MatrixSpec.cloned(3))
    f = M.determinant()
    h = hessian_determinant(f)
    assert h == hessian_determinant(f, "bareiss")
    syms = [sp.Symbol(n) for n in f.ring.names]
    assert to_sympy(h) == sp.expand(sp.hessian(to_sympy(f), syms).det(method="berkowitz"))
    q = h.exact_divide(f)
    assert q.degree() == 5
    k, res = factor_multiplicity_with_residual(h, f)
    assert k == 2 == 3 * (3 - 2) - 1
    quotient = res.exact_divide(M.minor([2, 3], [2, 3]))
    assert quotient.is_constant() and not quotient.is_zero()


def test_restricted_multiplicity_small():
    f = build(MatrixSpec.cloned(3)).determinant()
    assert restricted_multiplicity(f, random.Random(4))["multiplicity"] == 2


def test_homaloidal_examples():
    assert homaloidal_check(build(MatrixSpec.cloned(3)), random.Random(0)).homaloidal == "yes"
    assert homaloidal_check(build(MatrixSpec.zeros(3, 1)), random.Random(0)).homaloidal == "no"
    # x^2*y in three variables: the gradient misses z, so the Hessian is singular
    assert homaloidal_check(Polynomial.parse("x^2*y", XYZ), random.Random(0)).homaloidal == "no"


def test_homaloidal_x2y_in_two_variables():
    # full Hessian (det = -4x^2) and the two partials have one linear syzygy,
    # so the criterion answers yes: the polar map (2xy : x^2) = (2y : x) is birational
    prof = homaloidal_check(Polynomial.parse("x^2*y", XY), random.Random(0))
    assert prof.polar_dim == 2 and prof.linear_rank == 1 and prof.homaloidal == "yes"


def test_image_equation():
    M = build(MatrixSpec.cloned(3))
    eq = minors_image_equation(M)
    target = generic_cofactor_difference(adjugate_image_ring(3), 3)
    assert eq == target.primitive()[1]
    assert eq.degree() == 2
    for m in (3, 4):
        assert image_equation_substitution_check(m).status == "PASS"
    with pytest.raises(DomainError):
        minors_image_equation(build(MatrixSpec.generic(2)))


@pytest.mark.parametrize("spec", [MatrixSpec.cloned(3), MatrixSpec.cloned(4), MatrixSpec.zeros(3, 1),
                                  MatrixSpec.zeros(4, 1)], ids=["c3", "c4", "z31", "z41"])
def test_dual_ladder_vanishes(spec):
    assert dual_ladder_check(build(spec)).status == "PASS"


def test_dual_ladder_perturbed_control():
    # a 2-minor with one sign flipped is not divisible by f
    yr, minors, _, images, M = cloned_dual_ladder(3)
    p = minors[0]
    terms = dict(p.terms)
    e = next(iter(terms))
    terms[e] = -terms[e]
    bad = Polynomial(yr, terms)
    assert vanish_mod([bad], images, M.determinant())


@pytest.mark.parametrize("m, r", [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)])
def test_polar_ladder_vanishes(m, r):
    yr, minors, images, M = polar_ladder(m, r)
    assert minors
    assert not vanish_exactly(minors, images, M.ring)


def test_zeros_dual_ladder_is_nonempty():
    yr, minors, images, M = zeros_dual_ladder(3, 1)
    assert len(minors) == 5
