"""Hessian matrices, Hessian ranks, specialisation arguments and polar-map checks."""
from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, NotDivisible, SpecError
from .linalg import RankCertificate, certify_rank, det_bareiss, rank_exact
from .matrices import MatrixSpec, SymbolicMatrix, build, grid_determinant, minor_det
from .poly import Polynomial, VarTable, parse_pair_name
from .report import CheckResult


@dataclass
class HessianRecord:
    matrix: List[List[Polynomial]]
    rank: Optional[RankCertificate] = None
    det: Optional[Polynomial] = None

    @property
    def size(self) -> int:
        return len(self.matrix)

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(n) for j in range(i))


@dataclass
class PolarProfile:
    polar_dim: int
    polar_certification: str
    linear_rank: int
    linear_certification: str
    mu: int
    nvars: int
    homaloidal: str  # "yes", "no", "undetermined"
    image_equation: Optional[Polynomial] = None


def jacobian(polys: Sequence[Polynomial]) -> List[List[Polynomial]]:
    n = len(polys[0].ring)
    return [[p.derivative(v) for v in range(n)] for p in polys]


def hessian(f: Polynomial) -> HessianRecord:
    n = len(f.ring)
    grad = [f.derivative(v) for v in range(n)]
    mat = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            mat[i][j] = mat[j][i] = grad[i].derivative(j)
    return HessianRecord(mat)


def hessian_rank(f: Polynomial, rng: Optional[random.Random] = None, *, upper_bound: Optional[int] = None,
                 exact: bool = True, probabilistic: bool = True) -> RankCertificate:
    """Rank of H(f) over the fraction field.

    ``upper_bound`` is an externally proven bound (for instance from a ladder
    ideal vanishing on the gradient); without it only full rank can be
    certified exactly.
    """
    rng = rng or random.Random(0)
    H = hessian(f).matrix
    return certify_rank(H, len(f.ring), rng, upper_bound=upper_bound, exact=exact, probabilistic=probabilistic)


def jacobian_rank(polys: Sequence[Polynomial], rng: Optional[random.Random] = None, **kw) -> RankCertificate:
    rng = rng or random.Random(0)
    return certify_rank(jacobian(polys), len(polys[0].ring), rng, **kw)


# ---- determinants of polynomial matrices ------------------------------------------

def bareiss_polynomial_det(mat: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Fraction-free elimination with exact polynomial division at every step."""
    a = [list(row) for row in mat]
    n = len(a)
    ring = a[0][0].ring
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ring.zero()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * piv - a[i][k] * a[k][j]
                a[i][j] = num.exact_divide(prev) if k else num
            a[i][k] = ring.zero()
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def hessian_determinant(f: Polynomial, method: str = "laplace") -> Polynomial:
    """Exact h(f).  ``laplace`` expands along rows with memoised column subsets;
    ``bareiss`` uses fraction-free elimination."""
    H = hessian(f).matrix
    if method == "laplace":
        return grid_determinant(H)
    if method == "bareiss":
        return bareiss_polynomial_det(H)
    raise ValueError(f"unknown method {method!r}")


def factor_multiplicity(h: Polynomial, f: Polynomial) -> int:
    """Largest k with f^k dividing h."""
    if not f:
        raise DomainError("multiplicity of the zero polynomial")
    if not h:
        raise DomainError("every power of f divides the zero polynomial")
    if f.is_constant():
        raise DomainError("multiplicity of a unit is unbounded")
    k = 0
    while True:
        try:
            h = h.exact_divide(f)
        except NotDivisible:
            return k
        k += 1


def factor_multiplicity_with_residual(h: Polynomial, f: Polynomial) -> Tuple[int, Polynomial]:
    k = 0
    while True:
        try:
            q = h.exact_divide(f)
        except NotDivisible:
            return k, h
        h = q
        k += 1


def restricted_multiplicity(f: Polynomial, rng: random.Random, bound: int = 10 ** 6) -> dict:
    """Multiplicity of f in h(f) along the random line a + t*b.

    h(f)(a + t b) is recovered by interpolating integer determinants of the
    Hessian at deg+1 values of t.  Divisibility survives restriction, so the
    returned multiplicity can only overestimate the true one; the result is
    probabilistic.
    """
    n = len(f.ring)
    a = [rng.randint(-bound, bound) for _ in range(n)]
    b = [rng.randint(-bound, bound) for _ in range(n)]
    H = hessian(f).matrix
    deg_f = f.degree()
    deg_h = n * (deg_f - 2)
    tring = VarTable(["t"])
    t = tring.var(0)
    line = [tring.const(a[v]) + t * b[v] for v in range(n)]
    f_line = f.substitute(dict(enumerate(line)), tring)
    samples = []
    for s in range(deg_h + 1):
        point = [a[v] + s * b[v] for v in range(n)]
        vals = [[p.evaluate(point) if p else 0 for p in row] for row in H]
        samples.append((s, det_bareiss(vals)))
    h_line = _interpolate(tring, samples)
    k, residual = factor_multiplicity_with_residual(h_line, f_line) if h_line else (None, h_line)
    return {"multiplicity": k, "line": {"a": a, "b": b}, "h_degree": h_line.degree() if h_line else None,
            "residual_degree": residual.degree() if residual else None}


def _interpolate(tring: VarTable, samples: Sequence[Tuple[int, int]]) -> Polynomial:
    """Newton interpolation through exact integer samples."""
    xs = [Fraction(s) for s, _ in samples]
    coef = [Fraction(v) for _, v in samples]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    t = tring.var(0)
    poly = tring.const(coef[-1])
    for i in range(n - 2, -1, -1):
        poly = poly * (t - xs[i]) + coef[i]
    return poly


# ---- specialisation arguments -------------------------------------------------------

def _specialize(p: Polynomial, keep: set) -> Polynomial:
    """Kill every variable whose ordinal is not in ``keep``."""
    return Polynomial(p.ring, {e: c for e, c in p.terms.items()
                               if all(not x or k in keep for k, x in enumerate(e))})


def _block_check(H, rows_v, rows_o, keep, g, tag, anchor) -> CheckResult:
    ring = H[0][0].ring
    spec = lambda p: _specialize(p, keep)
    off = {}
    for i in rows_v:
        for j in rows_o:
            q = spec(H[i][j])
            if q:
                off[f"({ring.names[i]},{ring.names[j]})"] = q
    M0 = [[spec(H[i][j]) for j in rows_v] for i in rows_v]
    M1 = [[spec(H[i][j]) for j in rows_o] for i in rows_o]
    Hg = hessian(g).matrix
    mismatch = [(ring.names[rows_v[a]], ring.names[rows_v[b]]) for a in range(len(rows_v))
                for b in range(len(rows_v)) if M0[a][b] != Hg[rows_v[a]][rows_v[b]]]
    d0 = grid_determinant(M0) if M0 else ring.one()
    d1 = grid_determinant(M1) if M1 else ring.one()
    prod = d0 * d1
    witnesses = {"det_M0": d0, "det_M1_terms": len(d1), "block_sizes": [len(rows_v), len(rows_o)]}
    if off:
        witnesses["nonzero_off_diagonal_block"] = off
    if mismatch:
        witnesses["M0_mismatch"] = mismatch[:10]
    status = "PASS" if (not off and not mismatch and prod) else "FAIL"
    detail = f"specialised Hessian block-diagonal, det(M0)det(M1) {'!= 0' if prod else '= 0'}"
    return CheckResult(tag, anchor, status, "exact", witnesses, detail)


def diag_specialization_check(m: int) -> CheckResult:
    """Kill the off-diagonal variables of the cloned matrix and inspect the Hessian blocks."""
    if m < 3:
        raise SpecError("diagonal specialisation needs m >= 3")
    M = build(MatrixSpec.cloned(m))
    ring = M.ring
    f = M.determinant()
    diag = [ring.pair_index(i, i) for i in range(1, m)]
    others = [v for v in range(len(ring)) if v not in diag]
    g = ring.one()
    for i in range(1, m - 1):
        g = g * ring.var(ring.pair_index(i, i))
    g = g * ring.var(ring.pair_index(m - 1, m - 1)) ** 2
    H = hessian(f).matrix
    return _block_check(H, diag, others, set(diag), g, "hessian_full", "cloned:hessian-nonvanishing")


def antidiag_specialization_check(m: int, r: int) -> CheckResult:
    """Restrict the Hessian of the zeros determinant to X = {r+2 <= i+j <= 2m-r},
    keep only the anti-diagonal variables and inspect the blocks."""
    M = build(MatrixSpec.zeros(m, r))
    ring = M.ring
    f = M.determinant()
    X = [ring.pair_index(i, j) for i in range(1, m + 1) for j in range(1, m + 1)
         if r + 2 <= i + j <= 2 * m - r]
    anti = [ring.pair_index(i, m + 1 - i) for i in range(1, m + 1)]
    rest = [v for v in X if v not in anti]
    # the anti-diagonal term of det carries the sign of the reversal permutation
    g = ring.const(-1 if (m * (m - 1) // 2) % 2 else 1)
    for v in anti:
        g = g * ring.var(v)
    H = hessian(f).matrix
    res = _block_check(H, anti, rest, set(anti), g, "hessian_rank", "zeros:polar-dimension")
    res.witnesses["certified_lower_bound"] = len(X)
    return res


# ---- ladders ---------------------------------------------------------------------

def y_ring(pairs: Sequence[Tuple[int, int]]) -> VarTable:
    return VarTable.from_pairs(pairs, "y")


def ladder_minors(ring: VarTable, positions: set, t: int) -> List[Polynomial]:
    """All t-minors of the y-matrix whose entries all lie in ``positions``."""
    rows = sorted({i for i, _ in positions})
    cols = sorted({j for _, j in positions})
    out = []
    for rs in itertools.combinations(rows, t):
        for cs in itertools.combinations(cols, t):
            if all((i, j) in positions for i in rs for j in cs):
                cells = [[ring.var(ring.pair_index(i, j, "y")) for j in cs] for i in rs]
                out.append(grid_determinant(cells))
    return out


def gradient_images(M: SymbolicMatrix, yring: VarTable, transpose: bool = False) -> Dict[int, Polynomial]:
    """y_{i,j} -> derivative of det by x_{i,j} (or x_{j,i} when ``transpose``)."""
    f = M.determinant()
    out = {}
    for k, name in enumerate(yring.names):
        _, i, j = parse_pair_name(name)
        if transpose:
            i, j = j, i
        out[k] = f.derivative(M.ring.pair_index(i, j))
    return out


def polar_ladder(m: int, r: int):
    """Ladder ideal of (m-r)-minors on positions i, c <= m-1, i + c <= 2m-r-1.

    The entry at (i, c) stands for the cofactor of cell (c, i), i.e. the
    partial derivative by x_{c,i}.  Returns (y-ring, minors, images).
    """
    M = build(MatrixSpec.zeros(m, r))
    positions = {(i, c) for i in range(1, m) for c in range(1, m) if i + c <= 2 * m - r - 1}
    yr = y_ring(positions)
    minors = ladder_minors(yr, positions, m - r)
    return yr, minors, gradient_images(M, yr, transpose=True), M


def cloned_dual_ladder_positions(m: int) -> List[List[Tuple[int, int]]]:
    """Rows of the dual ladder for the cloned family, as y index pairs."""
    rows = []
    for i in range(1, m - 1):
        rows.append([(i, j) for j in range(1, m - 1)] + [(i, m), (i, m - 1)])
    rows.append([(m - 1, j) for j in range(1, m - 1)] + [(m - 1, m)])
    rows.append([(m, j) for j in range(1, m - 1)])
    return rows


def cloned_dual_ladder(m: int):
    """(y-ring, 2-minors of the ladder, quadrics g and h, images y -> gradient, matrix)."""
    M = build(MatrixSpec.cloned(m))
    pairs = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if (i, j) != (m, m)]
    yr = y_ring(pairs)
    y = lambda i, j: yr.var(yr.pair_index(i, j, "y"))
    rows = cloned_dual_ladder_positions(m)
    minors = []
    for a, b in itertools.combinations(range(len(rows)), 2):
        for c, d in itertools.combinations(range(len(rows[b])), 2):
            p, q = rows[a][c], rows[a][d]
            s, u = rows[b][c], rows[b][d]
            minors.append(y(*p) * y(*u) - y(*q) * y(*s))
    g = y(1, 1) * y(m, m - 1) - y(1, m - 1) * y(m, 1)
    h = y(1, 1) * y(m - 1, m - 1) - y(m - 1, 1) * y(1, m - 1) - y(m, 1) * y(1, m)
    return yr, minors, [g, h], gradient_images(M, yr), M


def zeros_dual_ladder(m: int, r: int):
    """(y-ring, 2-minors inside the region 2 <= i+j <= 2m-r, images, matrix)."""
    M = build(MatrixSpec.zeros(m, r))
    positions = {(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i + j <= 2 * m - r}
    yr = y_ring(positions)
    return yr, ladder_minors(yr, positions, 2), gradient_images(M, yr), M


def vanish_mod(polys: Sequence[Polynomial], images: Dict[int, Polynomial], f: Polynomial) -> Dict[str, Polynomial]:
    """Substitute and test divisibility by f; returns the failures keyed by index."""
    bad = {}
    for k, p in enumerate(polys):
        img = p.substitute(images, f.ring)
        if img and not f.divides(img):
            bad[str(k)] = p
    return bad


def vanish_exactly(polys: Sequence[Polynomial], images: Dict[int, Polynomial], target: VarTable) -> Dict[str, Polynomial]:
    bad = {}
    for k, p in enumerate(polys):
        if p.substitute(images, target):
            bad[str(k)] = p
    return bad


def dual_ladder_check(M: SymbolicMatrix) -> CheckResult:
    spec = M.spec
    f = M.determinant()
    if spec.family == "cloned":
        yr, minors, quadrics, images, _ = cloned_dual_ladder(spec.m)
        bad = vanish_mod(minors, images, f)
        badq = vanish_mod(quadrics, images, f)
        witnesses = {"minors": len(minors)}
        if bad:
            witnesses["failing_minors"] = bad
        if badq:
            witnesses["failing_quadrics"] = badq
        ok = not bad and not badq
        detail = f"{len(minors)} ladder 2-minors and the quadrics g, h vanish mod f" if ok else "ladder relation not divisible by f"
    elif spec.family == "zeros":
        yr, minors, images, _ = zeros_dual_ladder(spec.m, spec.r)
        bad = vanish_mod(minors, images, f)
        witnesses = {"minors": len(minors)}
        if bad:
            witnesses["failing_minors"] = bad
        ok = not bad
        detail = f"{len(minors)} ladder 2-minors vanish mod f" if ok else "ladder minor not divisible by f"
    else:
        raise SpecError("dual ladder check needs the cloned or zeros family")
    return CheckResult("dual_ladder_vanish", "dual-variety:ladder-relations", "PASS" if ok else "FAIL",
                       "exact", witnesses, detail)


# ---- image of the cofactor map ----------------------------------------------------------

def adjugate_image_ring(m: int) -> VarTable:
    return y_ring([(i, j) for i in range(1, m + 1) for j in range(1, m + 1)])


def generic_cofactor_difference(yr: VarTable, m: int) -> Polynomial:
    """D_{m,m} - D_{m-1,m-1}: cofactors of the generic y-matrix."""
    from .matrices import generic_matrix, grid_cofactor
    Y = generic_matrix(yr, m, "y")
    return grid_cofactor(Y, m, m) - grid_cofactor(Y, m - 1, m - 1)


def adjugate_images(M: SymbolicMatrix, yr: VarTable) -> Dict[int, Polynomial]:
    """y_{k,l} -> adjugate entry (k,l) = cofactor of cell (l,k)."""
    out = {}
    for k, name in enumerate(yr.names):
        _, a, b = parse_pair_name(name)
        out[k] = M.cofactor(b, a)
    return out


def image_equation_substitution_check(m: int) -> CheckResult:
    M = build(MatrixSpec.cloned(m))
    yr = adjugate_image_ring(m)
    eq = generic_cofactor_difference(yr, m)
    val = eq.substitute(adjugate_images(M, yr), M.ring)
    status = "PASS" if not val else "FAIL"
    w = {"equation": eq}
    if val:
        w["residual"] = val
    return CheckResult("image_equation", "cloned:cofactor-image-hypersurface", status, "exact", w,
                       "(D_mm - D_{m-1,m-1}) vanishes on the adjugate" if not val else "nonzero residual")


def minors_image_equation(M: SymbolicMatrix, budget=None) -> Polynomial:
    """Equation of the image of x -> adj(M)(x), by eliminating x from (y_{k,l} - adj_{k,l}).

    Raises DomainError (with the Jacobian rank of the cofactor map) when the
    image is not a hypersurface.
    """
    from .groebner import Ideal, eliminate
    m = M.m
    if m > 3:
        warnings.warn(f"image elimination at m={m} is beyond desk scale", ResourceWarning, stacklevel=2)
    yr = adjugate_image_ring(m)
    imgs = adjugate_images(M, yr)
    big = VarTable(list(M.ring.names) + list(yr.names))
    nx = len(M.ring)
    gens = [big.var(nx + k) - imgs[k].embed(big) for k in range(len(yr))]
    grading = (1,) * nx + (m - 1,) * len(yr)
    E = eliminate(Ideal(gens, big, grading=grading), list(range(nx)), budget)
    eqs = [Polynomial(yr, {e[nx:]: c for e, c in g.terms.items()}) for g in E.gens]
    if len(eqs) != 1:
        nonzero = [imgs[k] for k in range(len(yr)) if imgs[k]]
        rk = jacobian_rank(nonzero, random.Random(0)).rank if nonzero else 0
        raise DomainError(f"cofactor image is not a hypersurface: {len(eqs)} equations, "
                          f"Jacobian rank {rk} of {len(yr)} coordinates")
    return eqs[0].primitive()[1]


def quadrics_vanishing_on(images: Dict[int, Polynomial], yr: VarTable, target: VarTable, degree: int = 2):
    """Basis of the forms of the given degree in y that vanish after substitution
    (graded linear algebra, independent of any Gröbner computation)."""
    from .linalg import sparse_nullspace
    n = len(yr)
    monos = []
    for combo in itertools.combinations_with_replacement(range(n), degree):
        e = [0] * n
        for k in combo:
            e[k] += 1
        monos.append(tuple(e))
    eqs: Dict[tuple, Dict[int, Fraction]] = {}
    for u, e in enumerate(monos):
        img = Polynomial(yr, {e: 1}).substitute(images, target)
        for te, c in img.terms.items():
            eqs.setdefault(te, {})[u] = c
    basis = sparse_nullspace(list(eqs.values()), list(range(len(monos))))
    return [Polynomial(yr, {monos[u]: c for u, c in vec.items()}) for vec in basis]


def homaloidal_check(M_or_f, rng: Optional[random.Random] = None, hessian_upper_bound: Optional[int] = None) -> PolarProfile:
    """Full Hessian rank plus maximal linear rank of the gradient ideal means the polar
    map is birational; deficient Hessian rank means it is not."""
    from .syzygy import linear_rank, linear_syzygies
    rng = rng or random.Random(0)
    f = M_or_f.determinant() if isinstance(M_or_f, SymbolicMatrix) else M_or_f
    n = len(f.ring)
    grads = [f.derivative(v) for v in range(n)]
    basis = _independent_subset(grads)
    mu = len(basis)
    hr = hessian_rank(f, rng, upper_bound=hessian_upper_bound)
    if mu >= 2:
        lr = linear_rank(linear_syzygies(basis), rng)
        lrank, lcert = lr.rank, lr.certification
    else:
        lrank, lcert = 0, "exact"
    certified = ("exact", "probabilistic")
    if hr.rank < n:
        verdict = "no"
    elif lrank == mu - 1 and hr.certification in certified and lcert in certified:
        verdict = "yes"
    else:
        verdict = "undetermined"
    return PolarProfile(hr.rank, hr.certification, lrank, lcert, mu, n, verdict)


def _independent_subset(polys: Sequence[Polynomial]) -> List[Polynomial]:
    """Greedy maximal linearly independent subfamily (over the rationals)."""
    chosen: List[Polynomial] = []
    monos: Dict[tuple, int] = {}
    rows: List[list] = []
    for p in polys:
        if not p:
            continue
        for e in p.terms:
            monos.setdefault(e, len(monos))
        trial = [dict(q.terms) for q in chosen + [p]]
        mat = [[q.get(e, 0) for e in monos] for q in trial]
        if rank_exact(mat) == len(trial):
            chosen.append(p)
    return chosen
