"""Linear syzygies of gradient ideals and the explicit syzygy block matrices.

The block matrices are assembled from the cofactor relations

    Row(i, k) = sum_j M[i][j] * cof(k, j) = delta_ik * det
    Col(j, k) = sum_i M[i][j] * cof(i, k) = delta_jk * det

written as maps from cells to linear coefficients.  A combination whose
value is zero becomes a syzygy of the gradient generators once the cells
sharing a variable carry equal coefficients and zero cells carry none.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, SpecError
from .linalg import RankCertificate, certify_rank, det_bareiss, det_mod_p, evaluate_matrix, \
    evaluate_matrix_mod_p, two_primes
from .matrices import MatrixSpec, SymbolicMatrix, build
from .poly import Polynomial, VarTable, linear_combination
from .report import CheckResult


class LinearFormMatrix:
    """A grid of linear forms (degree <= 1, no constant term)."""

    def __init__(self, ring: VarTable, entries: Sequence[Sequence[Polynomial]], row_labels=None):
        self.ring = ring
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        self.row_labels = list(row_labels) if row_labels is not None else None
        for row in self.entries:
            if len(row) != self.cols:
                raise DomainError("ragged linear form matrix")
            for p in row:
                if p and (p.degree() != 1 or not p.is_homogeneous()):
                    raise DomainError(f"entry {p} is not a linear form")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def column(self, k: int) -> List[Polynomial]:
        return [row[k] for row in self.entries]

    def columns(self) -> List[List[Polynomial]]:
        return [self.column(k) for k in range(self.cols)]

    def delete_row(self, k: int) -> "LinearFormMatrix":
        labels = None if self.row_labels is None else self.row_labels[:k] + self.row_labels[k + 1:]
        return LinearFormMatrix(self.ring, self.entries[:k] + self.entries[k + 1:], labels)

    def with_column(self, k: int, col: Sequence[Polynomial]) -> "LinearFormMatrix":
        entries = [row[:k] + [col[i]] + row[k + 1:] for i, row in enumerate(self.entries)]
        return LinearFormMatrix(self.ring, entries, self.row_labels)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "row_labels": self.row_labels,
                "entries": [[p.to_str() for p in row] for row in self.entries]}


@dataclass
class LinearSyzygySpace:
    gens: List[Polynomial]
    vectors: List[List[Polynomial]]

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    def matrix(self) -> LinearFormMatrix:
        """Generators x basis-vectors matrix of linear forms."""
        n = len(self.gens)
        ring = self.gens[0].ring
        if not self.vectors:
            return LinearFormMatrix(ring, [[] for _ in range(n)])
        return LinearFormMatrix(ring, [[vec[w] for vec in self.vectors] for w in range(n)])


def _common_degree(gens: Sequence[Polynomial]) -> int:
    degs = set()
    for g in gens:
        if g:
            if not g.is_homogeneous():
                raise DomainError("generators must be homogeneous")
            degs.add(g.degree())
    if len(degs) != 1:
        raise DomainError("generators must be nonzero-free of mixed degrees and not all zero")
    d = degs.pop()
    if d < 1:
        raise DomainError("generators must have positive degree")
    return d


def linear_syzygies(gens: Sequence[Polynomial]) -> LinearSyzygySpace:
    """Exact basis of all relations sum_w l_w * gens[w] = 0 with linear l_w.

    Unknown (v, w) is the coefficient of variable v in l_w; each monomial of
    degree d+1 gives one equation.  The system splits into independent
    blocks (unknowns linked through shared monomials) that are solved
    separately.
    """
    gens = list(gens)
    _common_degree(gens)
    ring = gens[0].ring
    n, N = len(ring), len(gens)
    eqs: Dict[tuple, Dict[int, int]] = {}
    for w, g in enumerate(gens):
        for e, c in g.terms.items():
            for v in range(n):
                mono = e[:v] + (e[v] + 1,) + e[v + 1:]
                row = eqs.setdefault(mono, {})
                u = v * N + w
                row[u] = row.get(u, 0) + c
    # union-find on unknowns
    parent: Dict[int, int] = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for row in eqs.values():
        it = iter(row)
        first = find(next(it))
        for u in it:
            ru = find(u)
            if ru != first:
                parent[ru] = first
    blocks: Dict[int, List[dict]] = {}
    for row in eqs.values():
        blocks.setdefault(find(next(iter(row))), []).append(row)
    block_unknowns: Dict[int, List[int]] = {}
    for u in sorted(parent):
        block_unknowns.setdefault(find(u), []).append(u)
    from .linalg import sparse_nullspace
    raw: List[Dict[int, Fraction]] = []
    for root in sorted(block_unknowns):
        raw.extend(sparse_nullspace(blocks.get(root, []), block_unknowns[root]))
    # unknowns attached to zero generators appear in no equation and are free
    for w, g in enumerate(gens):
        if not g:
            raw.extend({v * N + w: Fraction(1)} for v in range(n))
    raw.sort(key=lambda vec: min(vec))
    xs = ring.gens()
    vectors = []
    for vec in raw:
        forms = [{} for _ in range(N)]
        for u, c in vec.items():
            v, w = divmod(u, N)
            forms[w][v] = c
        vectors.append([linear_combination(ring, ((c, xs[v]) for v, c in sorted(f.items()))) for f in forms])
    return LinearSyzygySpace(gens, vectors)


def apply_syzygy(column: Sequence[Polynomial], gens: Sequence[Polynomial]) -> Polynomial:
    ring = gens[0].ring
    acc = ring.zero()
    for l, g in zip(column, gens):
        if l and g:
            acc = acc + l * g
    return acc


def linear_rank(space: LinearSyzygySpace, rng: Optional[random.Random] = None, *,
                exact: bool = True, probabilistic: bool = True) -> RankCertificate:
    """Rank of the matrix of linear syzygies over the fraction field.

    The gradient row vector annihilates the matrix, so the rank is at most
    (number of nonzero generators) - 1; an evaluation reaching that bound is
    an exact certificate.
    """
    rng = rng or random.Random(0)
    if space.dimension == 0:
        return RankCertificate(0, "exact", 0, 0)
    N = sum(1 for g in space.gens if g)
    mat = space.matrix().entries
    return certify_rank(mat, len(space.gens[0].ring), rng, upper_bound=N - 1,
                        exact=exact, probabilistic=probabilistic)


# ---- cell relations ------------------------------------------------------------

class CellRelation:
    """sum over cells of (linear form) * cofactor(cell), stored sparsely."""

    def __init__(self, coeffs: Optional[Dict[Tuple[int, int], Polynomial]] = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    def __add__(self, other: "CellRelation") -> "CellRelation":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return CellRelation(out)

    def __sub__(self, other: "CellRelation") -> "CellRelation":
        return self + other.scale(-1)

    def scale(self, c) -> "CellRelation":
        return CellRelation({k: v * c for k, v in self.coeffs.items()})


def row_relation(M: SymbolicMatrix, i: int, k: int) -> CellRelation:
    """sum_j M[i][j] cof(k, j); equals det when i == k and 0 otherwise."""
    return CellRelation({(k, j): M.entry(i, j) for j in range(1, M.m + 1)})


def col_relation(M: SymbolicMatrix, j: int, k: int) -> CellRelation:
    """sum_i M[i][j] cof(i, k); equals det when j == k and 0 otherwise."""
    return CellRelation({(i, k): M.entry(i, j) for i in range(1, M.m + 1)})


def relation_to_column(M: SymbolicMatrix, rel: CellRelation, order: Sequence[int]) -> List[Polynomial]:
    """Coefficient vector on the gradient generators listed by variable ordinal in ``order``."""
    zero = M.ring.zero()
    per_var: Dict[int, Polynomial] = {}
    for (i, j), form in rel.coeffs.items():
        if not M.entry(i, j):
            raise SpecError(f"relation uses the cofactor of the zero cell ({i},{j})")
    for v, cells in M.var_cells.items():
        forms = [rel.coeffs.get(c, zero) for c in cells]
        if any(f != forms[0] for f in forms[1:]):
            raise SpecError(f"cells of variable {M.ring.names[v]} carry different coefficients")
        per_var[v] = forms[0]
    return [per_var[v] for v in order]


def _assemble(M: SymbolicMatrix, order: Sequence[int], rels: Sequence[CellRelation]) -> LinearFormMatrix:
    cols = [relation_to_column(M, rel, order) for rel in rels]
    entries = [[col[r] for col in cols] for r in range(len(order))]
    return LinearFormMatrix(M.ring, entries, [M.ring.names[v] for v in order])


def cloned_generator_order(M: SymbolicMatrix) -> List[int]:
    """Rows 1..m-2 left to right, then column pairs (x_{m-1,c}, x_{m,c}), then x_{m-1,m}."""
    m = M.m
    idx = M.ring.pair_index
    order = [idx(i, j) for i in range(1, m - 1) for j in range(1, m + 1)]
    for c in range(1, m):
        order += [idx(m - 1, c), idx(m, c)]
    order.append(idx(m - 1, m))
    return order


def build_cloned_blocks(m: int) -> LinearFormMatrix:
    """The (m^2-1) x (m^2-2) matrix of linear syzygies of the cloned gradient ideal."""
    if m < 3:
        raise SpecError("cloned syzygy blocks need m >= 3")
    M = build(MatrixSpec.cloned(m))
    R = lambda i, k: row_relation(M, i, k)
    C = lambda j, k: col_relation(M, j, k)
    rels: List[CellRelation] = [R(i, 1) for i in range(2, m + 1)]
    for k in range(2, m - 1):
        for i in range(1, m + 1):
            rels.append(R(k - 1, k - 1) - R(k, k) if i == k else R(i, k))
    for j in range(1, m - 2):
        rels += [C(j + 1, j), C(j + 2, j)]
    rels += [C(m - 1, m - 2), C(m, m - 2)]
    rels += [R(m - 1, m) + C(m, m - 1),
             C(m - 1, m) + R(m, m - 1),
             R(m - 1, m - 1) + R(m, m) - R(m - 2, m - 2).scale(2)]
    return _assemble(M, cloned_generator_order(M), rels)


def zeros_generator_order(M: SymbolicMatrix, r: int) -> List[int]:
    """Rows 1..m-r left to right, then the lower rows column by column, top to bottom."""
    m = M.m
    idx = M.ring.pair_index
    order = [idx(i, j) for i in range(1, m - r + 1) for j in range(1, m + 1)]
    for c in range(1, m):
        order += [idx(i, c) for i in range(m - r + 1, m + 1) if i + c <= 2 * m - r]
    return order


def build_zeros_blocks(m: int, r: int) -> LinearFormMatrix:
    """The matrix of linear syzygies of the gradient ideal of the zeros degeneration."""
    M = build(MatrixSpec.zeros(m, r))
    R = lambda i, k: row_relation(M, i, k)
    C = lambda j, k: col_relation(M, j, k)
    rels: List[CellRelation] = [R(i, 1) for i in range(2, m + 1)]
    for k in range(2, m - r + 1):
        for i in range(1, m + 1):
            rels.append(R(k - 1, k - 1) - R(k, k) if i == k else R(i, k))
    for i in range(1, m - r + 1):
        if r > m - r - 1:
            js = [j for j in range(1, m - r + 1) if j != i] + list(range(m - r + 1, r + 2))
        elif i <= r:
            js = [j for j in range(1, r + 2) if j != i]
        else:
            js = list(range(1, r + 1))
        rels += [C(j, i) for j in js]
    for l in range(1, r):
        c = m - r + l
        rels.append(C(c, c) - C(1, 1))
        rels += [C(m - r + k, c) for k in range(l + 1, r)]
    return _assemble(M, zeros_generator_order(M, r), rels)


def verify_syzygy(S: LinearFormMatrix, gens: Sequence[Polynomial], tag: str = "syzygy_blocks",
                  anchor: str = "syzygy-blocks") -> CheckResult:
    if S.rows != len(gens):
        raise DomainError(f"matrix has {S.rows} rows but there are {len(gens)} generators")
    bad = {}
    for k in range(S.cols):
        res = apply_syzygy(S.column(k), gens)
        if res:
            bad[f"column {k + 1}"] = res
    status = "FAIL" if bad else "PASS"
    detail = f"{S.cols - len(bad)}/{S.cols} columns are syzygies"
    return CheckResult(tag, anchor, status, "exact", bad, detail)


def nonzero_det_certificate(S: LinearFormMatrix, rng: random.Random, exact: bool = True,
                            attempts: int = 5) -> Tuple[bool, str, dict]:
    """Decide det(S) != 0 for a square linear-form matrix.

    A nonzero value at an integer point proves it exactly; otherwise the
    two-prime protocol gives a probabilistic answer (nonzero mod a prime
    is itself a proof of nonvanishing).
    """
    n = len(S.ring)
    if exact:
        for _ in range(attempts):
            point = [rng.randint(-50, 50) for _ in range(n)]
            val = det_bareiss(evaluate_matrix(S.entries, point))
            if val:
                return True, "exact", {"point": point, "value": val}
    for prime in two_primes(rng):
        point = [rng.randrange(1, prime) for _ in range(n)]
        val = det_mod_p(evaluate_matrix_mod_p(S.entries, point, prime), prime)
        if val:
            return True, "exact", {"prime": prime, "value_mod_p": val}
    return False, "probabilistic", {}
