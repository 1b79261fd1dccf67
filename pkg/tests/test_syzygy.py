import random
from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from detlab.errors import InternalInconsistency, SpecError
from detlab.linalg import (certify_rank, det_bareiss, det_mod_p, prime_pool, random_prime, rank_exact,
                           rank_mod_p, sparse_nullspace, two_primes)
from detlab.matrices import MatrixSpec, build
from detlab.poly import VarTable
from detlab.syzygy import (apply_syzygy, build_cloned_blocks, build_zeros_blocks, cloned_generator_order,
                           linear_rank, linear_syzygies, nonzero_det_certificate, verify_syzygy,
                           zeros_generator_order)

ZEROS_GRID = [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)]


# ---- exact and modular linear algebra -----------------------------------------

small_mats = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=1, max_size=5))


@settings(max_examples=80, deadline=None)
@given(small_mats)
def test_rank_matches_sympy(rows):
    assert rank_exact(rows) == sp.Matrix(rows).rank()
    assert rank_mod_p(rows, 1000000007) == sp.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_bareiss_matches_sympy(rows):
    d = int(sp.Matrix(rows).det())
    assert det_bareiss(rows) == d
    assert det_mod_p(rows, 1000000007) == d % 1000000007


@settings(max_examples=60, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=4), max_size=5))
def test_sparse_nullspace_is_a_kernel_basis(eqs):
    eqs = [{k: Fraction(v) for k, v in e.items() if v} for e in eqs]
    basis = sparse_nullspace(eqs, list(range(6)))
    for vec in basis:
        for e in eqs:
            assert sum(c * vec.get(k, 0) for k, c in e.items()) == 0
    rows = [[e.get(k, 0) for k in range(6)] for e in eqs]
    rk = rank_exact(rows) if rows else 0
    assert len(basis) == 6 - rk
    if basis:
        assert rank_exact([[v.get(k, 0) for k in range(6)] for v in basis]) == len(basis)


def test_primes_are_large_and_seeded():
    p, q = two_primes(random.Random(1))
    assert p != q and p > 2 ** 60 and q > 2 ** 60
    assert sp.isprime(p) and sp.isprime(q)
    assert two_primes(random.Random(1)) == (p, q)


def test_explicit_prime_pool():
    pool = [int(sp.nextprime(2 ** 61)), int(sp.nextprime(2 ** 62))]
    with prime_pool(pool):
        assert random_prime(random.Random(5)) in pool
    with pytest.raises(SpecError):
        with prime_pool([101, 103]):
            pass


def test_certify_rank_detects_disagreement():
    ring = VarTable(["x", "y"])
    x, y = ring.var(0), ring.var(1)
    mat = [[x, y], [y, x]]
    cert = certify_rank(mat, 2, random.Random(0), upper_bound=2)
    assert cert.rank == 2 and cert.certification == "exact"
    # a false "proven" bound contradicted by the prime-field rank is fatal
    with pytest.raises(InternalInconsistency):
        certify_rank([[x, x], [y, y]], 2, random.Random(0), upper_bound=0, exact=False)


# ---- linear syzygies ------------------------------------------------------------

def test_koszul_pair():
    ring = VarTable(["x", "y"])
    x, y = ring.var(0), ring.var(1)
    space = linear_syzygies([x, y])
    assert space.dimension == 1
    (col,) = space.vectors
    assert col[0] * x + col[1] * y == ring.zero()
    assert {str(col[0]), str(col[1])} in ({"y", "-x"}, {"-y", "x"})
    assert linear_rank(space).rank == 1


@pytest.mark.parametrize("m, want", [(3, 7), (4, 14)])
def test_cloned_linear_rank(m, want):
    space = linear_syzygies(build(MatrixSpec.cloned(m)).gradient_generators())
    assert space.dimension >= want
    cert = linear_rank(space, random.Random(0))
    assert cert.rank == want == m * m - 2 and cert.certification == "exact"


@pytest.mark.parametrize("m, r", ZEROS_GRID)
def test_zeros_linear_rank(m, r):
    space = linear_syzygies(build(MatrixSpec.zeros(m, r)).gradient_generators())
    want = m * m - comb(r + 1, 2) - 1
    assert linear_rank(space, random.Random(0), exact=m <= 4).rank == want


def test_syzygy_space_soundness():
    M = build(MatrixSpec.zeros(4, 2))
    gens = M.gradient_generators()
    space = linear_syzygies(gens)
    for col in space.vectors:
        assert apply_syzygy(col, gens).is_zero()
        assert all(l.is_zero() or l.degree() == 1 for l in col)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_cloned_blocks(m):
    S = build_cloned_blocks(m)
    assert S.shape == (m * m - 1, m * m - 2)
    M = build(MatrixSpec.cloned(m))
    gens = [M.gradient_generators()[v] for v in cloned_generator_order(M)]
    assert verify_syzygy(S, gens).status == "PASS"
    ok, cert, _ = nonzero_det_certificate(S.delete_row(0), random.Random(0), exact=m <= 4)
    assert ok and cert == "exact"


@pytest.mark.parametrize("m, r", ZEROS_GRID)
def test_zeros_blocks(m, r):
    n = m * m - comb(r + 1, 2)
    S = build_zeros_blocks(m, r)
    assert S.shape == (n, n - 1)
    M = build(MatrixSpec.zeros(m, r))
    gens = [M.gradient_generators()[v] for v in zeros_generator_order(M, r)]
    assert verify_syzygy(S, gens).status == "PASS"
    ok, _, _ = nonzero_det_certificate(S.delete_row(0), random.Random(0), exact=m <= 4)
    assert ok


def test_perturbed_column_fails_with_residual():
    S = build_cloned_blocks(3)
    M = build(MatrixSpec.cloned(3))
    gens = [M.gradient_generators()[v] for v in cloned_generator_order(M)]
    col = S.column(0)
    k = next(i for i, l in enumerate(col) if not l.is_zero())
    col[k] = -col[k]
    bad = S.with_column(0, col)
    res = verify_syzygy(bad, gens)
    assert res.status == "FAIL"
    assert not res.witnesses["column 1"].is_zero()


def test_blocks_lie_in_the_computed_space():
    # every explicit column is a combination of the computed basis
    M = build(MatrixSpec.zeros(4, 1))
    gens = [M.gradient_generators()[v] for v in zeros_generator_order(M, 1)]
    space = linear_syzygies(gens)
    S = build_zeros_blocks(4, 1)

    def flat(col):
        out = {}
        for k, l in enumerate(col):
            for e, c in l.terms.items():
                out[(k, e)] = c
        return out

    basis = [flat(v) for v in space.vectors]
    keys = sorted({k for b in basis for k in b} | {k for c in S.columns() for k in flat(c)})
    base_rows = [[b.get(k, 0) for k in keys] for b in basis]
    r0 = rank_exact(base_rows)
    for col in S.columns():
        assert rank_exact(base_rows + [[flat(col).get(k, 0) for k in keys]]) == r0


def test_zeros_regimes_are_distinct():
    # (5, 3) has r > m-r-1, (5, 1) does not
    assert build_zeros_blocks(5, 3).shape == (19, 18)
    assert build_zeros_blocks(5, 1).shape == (24, 23)
