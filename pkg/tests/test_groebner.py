import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from detlab.errors import BudgetExceeded, ContextError
from detlab.groebner import (Budget, Ideal, buchberger, codimension, contains, dimension, eliminate, equals,
                             graded_membership, ideal_quotient, in_radical, intersect, min_hitting_set,
                             normal_form, regular_sequence_check, saturation)
from detlab.matrices import MatrixSpec, anti_diagonal_free_entries, build
from detlab.poly import DEGREVLEX, LEX, Polynomial, VarTable

from oracles import to_sympy

XY = VarTable(["x", "y"])
XYZ = VarTable(["x", "y", "z"])


def P(text, ring=XY):
    return Polynomial.parse(text, ring)


def monic(p, order=DEGREVLEX):
    _, c = p.leading_term(order)
    return p * (1 / Fraction(c))


# ---- buchberger -------------------------------------------------------------------

def test_small_lex_basis():
    G = Ideal([P("x^2 - y"), P("y")], order=LEX).groebner()
    assert set(G.elements) == {P("y"), P("x^2")}


def test_generic_2x3_minors_are_a_basis():
    ring = VarTable.from_pairs([(i, j) for i in (1, 2) for j in (1, 2, 3)])
    x = lambda i, j: ring.var(ring.pair_index(i, j))
    minors = [x(1, a) * x(2, b) - x(1, b) * x(2, a) for a, b in itertools.combinations((1, 2, 3), 2)]
    G = Ideal(minors).groebner()
    assert {monic(p) for p in minors} == set(G.elements)


def test_generic_3x3_submaximal_minors_anti_diagonal_initial_ideal():
    M = build(MatrixSpec.generic(3))
    minors = M.submaximal_minors()
    G = Ideal(minors).groebner()
    assert set(G.elements) == {monic(p) for p in minors}
    anti = set()
    for rows in itertools.combinations((1, 2, 3), 2):
        for cols in itertools.combinations((1, 2, 3), 2):
            e = [0] * 9
            e[M.ring.pair_index(rows[0], cols[1])] += 1
            e[M.ring.pair_index(rows[1], cols[0])] += 1
            anti.add(tuple(e))
    assert set(G.leading_monomials()) == anti


def test_agrees_with_sympy_groebner():
    M = build(MatrixSpec.cloned(3))
    gens = M.gradient_generators()
    G = Ideal(gens).groebner()
    syms = [sp.Symbol(n) for n in M.ring.names]
    S = sp.groebner([to_sympy(g) for g in gens], *syms, order="grevlex")
    assert {sp.expand(to_sympy(p)) for p in G.elements} == {sp.expand(q / sp.Poly(q, *syms).LC(order="grevlex"))
                                                           for q in S.exprs}


def test_gb_idempotent():
    M = build(MatrixSpec.zeros(3, 1))
    G = Ideal(M.gradient_generators()).groebner()
    G2 = Ideal(G.elements).groebner()
    assert set(G2.elements) == set(G.elements)


_lin = st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                min_size=1, max_size=4)


def _poly(terms):
    return Polynomial(XYZ, {(a, b, c): k for k, a, b, c in terms})


@settings(max_examples=40, deadline=None)
@given(st.lists(_lin, min_size=1, max_size=3), _lin, st.randoms(use_true_random=False))
def test_normal_form_path_independent(gen_terms, p_terms, rnd):
    gens = [g for g in (_poly(t) for t in gen_terms) if not g.is_zero()]
    p = _poly(p_terms)
    if not gens:
        return
    G = Ideal(gens).groebner()
    nf = G.normal_form(p)
    # naive reduction with the basis tried in a random order at every step
    basis = list(G.elements)
    rem = XYZ.zero()
    cur = p
    while not cur.is_zero():
        e, c = cur.leading_term(DEGREVLEX)
        rnd.shuffle(basis)
        for g in basis:
            ge, gc = g.leading_term(DEGREVLEX)
            if all(a >= b for a, b in zip(e, ge)):
                shift = tuple(a - b for a, b in zip(e, ge))
                cur = cur - g.mul_term(shift, Fraction(c) / gc)
                break
        else:
            rem = rem + Polynomial(XYZ, {e: c})
            cur = cur - Polynomial(XYZ, {e: c})
    assert rem == nf
    for g in gens:
        assert normal_form(g, G).is_zero()


def test_normal_form_examples():
    M = build(MatrixSpec.cloned(3))
    G = Ideal(M.gradient_generators()).groebner()
    assert not G.normal_form(M.ring.one()).is_zero()
    minors = M.submaximal_minors()
    for a in range(9):
        for b in range(a, 9):
            assert G.reduces_to_zero(minors[a] * minors[b])


# ---- dimension ----------------------------------------------------------------------

def test_dimension_examples():
    assert dimension(Ideal([P("x*y")])) == 1
    assert codimension(Ideal(build(MatrixSpec.cloned(3)).submaximal_minors())) == 4
    assert codimension(Ideal(build(MatrixSpec.zeros(3, 1)).submaximal_minors())) == 4


def _brute_dimension(monos, n):
    best = 0
    for k in range(n + 1):
        for free in itertools.combinations(range(n), k):
            # a set of variables is independent when no generator lives only on it
            if all(any(e[v] for v in range(n) if v not in free) for e in monos):
                best = max(best, k)
    return best


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(*[st.integers(0, 2)] * n), min_size=1, max_size=5))))
def test_dimension_of_monomial_ideals_brute_force(data):
    n, monos = data
    monos = [e for e in monos if any(e)]
    if not monos:
        return
    ring = VarTable([f"v{k}" for k in range(n)])
    I = Ideal([Polynomial(ring, {e: 1}) for e in monos], ring)
    assert dimension(I) == _brute_dimension(monos, n)
    assert len(ring) - min_hitting_set(monos) == _brute_dimension(monos, n)


# ---- quotients, saturation, containment ----------------------------------------------

def test_quotient_examples():
    Q = ideal_quotient(Ideal([P("x^2"), P("x*y")]), Ideal([P("x")]))
    assert equals(Q, Ideal([P("x"), P("y")]))


@settings(max_examples=25, deadline=None)
@given(st.lists(_lin, min_size=1, max_size=2), st.lists(_lin, min_size=1, max_size=2))
def test_quotient_law(a_terms, b_terms):
    A = [g for g in (_poly(t) for t in a_terms) if not g.is_zero()]
    B = [g for g in (_poly(t) for t in b_terms) if not g.is_zero()]
    if not A or not B:
        return
    I, K = Ideal(A), Ideal(B)
    Q = ideal_quotient(I, K)
    assert contains(Q, I)
    assert contains(I, Q * K)


def test_saturation_examples():
    S, _ = saturation(Ideal([P("x^2*y")]), Ideal([P("y")]))
    assert equals(S, Ideal([P("x^2")]))
    S, _ = saturation(Ideal([P("x^2"), P("x*y")]), Ideal([P("x")]))
    assert S.groebner().is_unit()


def test_saturation_records_steps():
    M = build(MatrixSpec.zeros(3, 1))
    J = Ideal(M.gradient_generators())
    I = Ideal(M.submaximal_minors())
    S, steps = saturation(J, I)
    assert steps >= 1
    assert contains(S, ideal_quotient(J, I))


def test_containment_examples():
    assert contains(Ideal([P("x"), P("y")]), Ideal([P("x")]))
    assert not contains(Ideal([P("x")]), Ideal([P("x"), P("y")]))
    M = build(MatrixSpec.cloned(3))
    assert contains(Ideal(M.submaximal_minors()), Ideal(M.gradient_generators()))
    with pytest.raises(ContextError):
        Ideal([P("x"), P("x", XYZ)])


def test_cloned_conductor():
    M = build(MatrixSpec.cloned(3))
    Q = ideal_quotient(Ideal(M.gradient_generators()), Ideal(M.submaximal_minors()))
    target = Ideal([M.ring.var(v) for v in range(len(M.ring)) if M.ring.names[v] != "x_1_1"])
    assert equals(Q, target)


def test_intersection():
    A = Ideal([P("x")])
    B = Ideal([P("y")])
    assert equals(intersect(A, B), Ideal([P("x*y")]))


def test_in_radical():
    I = Ideal([P("x^3"), P("y^2")])
    assert in_radical(P("x + y"), I)
    assert not in_radical(P("x + 1"), I)


# ---- elimination ----------------------------------------------------------------------

def test_twisted_cubic():
    ring = VarTable(["x", "y", "z"])
    I = Ideal([P("y - x^2", ring), P("z - x^3", ring)])
    E = eliminate(I, [0])
    Gs = Ideal(E.gens).groebner()
    assert Gs.reduces_to_zero(P("z^2 - y^3", ring))
    for g in E.gens:
        assert g.terms and all(e[0] == 0 for e in g.terms)
        assert I.groebner().reduces_to_zero(g)


def test_eliminating_nothing():
    I = Ideal([P("x^2 - y"), P("x*y")])
    assert set(eliminate(I, []).gens) == set(I.groebner().elements)


# ---- regular sequences ----------------------------------------------------------------

def test_regular_sequence_trivial():
    assert regular_sequence_check(Ideal([], XY), [P("x"), P("y")]).status == "PASS"
    res = regular_sequence_check(Ideal([P("x")]), [P("x")])
    assert res.status == "FAIL" and res.witnesses["step"] == 1


def test_regular_sequence_generic_3x3():
    M = build(MatrixSpec.generic(3))
    seq = [M.entry(i, j) for i, j in anti_diagonal_free_entries(3)]
    assert regular_sequence_check(Ideal(M.submaximal_minors()), seq).status == "PASS"


def test_specialized_max_minors_codim():
    M = build(MatrixSpec.degenerate_rectangle(4, 3, 1))
    assert codimension(Ideal(M.maximal_minors(), M.ring)) == 4 - 3 + 1


def test_graded_membership_agrees_with_gb():
    M = build(MatrixSpec.cloned(3))
    J = Ideal(M.gradient_generators())
    d = M.cofactor(3, 3)
    JP = J * Ideal(M.submaximal_minors())
    assert not graded_membership(d * d, JP.gens)
    assert graded_membership(M.gradient_generators()[0] * M.entry(1, 1), J.gens)
    assert JP.groebner().reduces_to_zero(d * d) is False


def test_budget_exhaustion_is_an_error():
    M = build(MatrixSpec.cloned(4))
    with pytest.raises(BudgetExceeded):
        Ideal(M.gradient_generators()).groebner(Budget(max_pairs=5))
