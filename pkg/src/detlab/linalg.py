"""Exact and prime-field linear algebra used by the rank certificates.

Matrices are plain lists of rows.  Exact routines work over ``Fraction``;
modular routines reduce integers modulo a prime.  Rank certificates for
polynomial matrices evaluate at points and record which path produced the
number (``exact`` or ``probabilistic``).
"""
from __future__ import annotations

import random
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import isprime, nextprime

from .errors import InternalInconsistency, RetryWithNewPrime, SpecError
from .poly import Polynomial

PRIME_FLOOR = 2 ** 61


_PRIME_POOL: ContextVar[Optional[Tuple[int, ...]]] = ContextVar("detlab_prime_pool", default=None)


@contextmanager
def prime_pool(primes: Optional[Sequence[int]]):
    """Draw primes from an explicit list (at least two distinct primes > 2^60) inside the block."""
    if primes is None:
        yield
        return
    pool = tuple(sorted({int(p) for p in primes}))
    if len(pool) < 2 or any(p <= 2 ** 60 or not isprime(p) for p in pool):
        raise SpecError("explicit primes must contain at least two distinct primes above 2^60")
    token = _PRIME_POOL.set(pool)
    try:
        yield
    finally:
        _PRIME_POOL.reset(token)


def random_prime(rng: random.Random) -> int:
    """A prime above 2^61 chosen from the seeded generator (or from the active pool)."""
    pool = _PRIME_POOL.get()
    if pool:
        return pool[rng.randrange(len(pool))]
    return int(nextprime(PRIME_FLOOR + rng.randrange(2 ** 60)))


def two_primes(rng: random.Random) -> Tuple[int, int]:
    p = random_prime(rng)
    q = random_prime(rng)
    while q == p:
        q = random_prime(rng)
    return p, q


# ---- exact elimination -------------------------------------------------------

def rank_exact(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals of a dense matrix of ints/Fractions."""
    work = [[Fraction(x) for x in row] for row in rows if any(row)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for c in range(ncols):
        piv = next((k for k in range(rank, len(work)) if work[k][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        inv = 1 / prow[c]
        for k in range(rank + 1, len(work)):
            a = work[k][c]
            if a:
                a *= inv
                row = work[k]
                for t in range(c, ncols):
                    if prow[t]:
                        row[t] -= a * prow[t]
        rank += 1
        if rank == len(work):
            break
    return rank


def det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sparse_nullspace(equations: Sequence[Dict[int, Fraction]], unknowns: Sequence[int]) -> List[Dict[int, Fraction]]:
    """Basis of the solutions of a homogeneous sparse system.

    ``equations`` map unknown ids to coefficients; ``unknowns`` lists the ids
    in the column order used for pivoting.  Each basis vector sets one free
    unknown to 1.
    """
    order = {u: k for k, u in enumerate(unknowns)}
    pivots: Dict[int, Dict[int, Fraction]] = {}  # pivot unknown -> row with coefficient 1 there
    for eq in equations:
        row = {u: Fraction(c) for u, c in eq.items() if c}
        # stored rows contain no pivot unknown but their own, so one pass suffices
        for lead in [u for u in row if u in pivots]:
            a = row.get(lead)
            if not a:
                continue
            for u, c in pivots[lead].items():
                v = row.get(u, 0) - a * c
                if v:
                    row[u] = v
                else:
                    row.pop(u, None)
        if not row:
            continue
        lead = min(row, key=order.__getitem__)
        inv = 1 / row[lead]
        row = {u: c * inv for u, c in row.items()}
        for other in pivots.values():
            a = other.get(lead)
            if a:
                for u, c in row.items():
                    v = other.get(u, 0) - a * c
                    if v:
                        other[u] = v
                    else:
                        other.pop(u, None)
        pivots[lead] = row
    free = [u for u in unknowns if u not in pivots]
    basis = []
    for fu in free:
        vec = {fu: Fraction(1)}
        for p, row in pivots.items():
            c = row.get(fu)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


# ---- prime-field elimination ---------------------------------------------------

def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    work = [[x % p for x in row] for row in rows]
    work = [row for row in work if any(row)]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for c in range(ncols):
        piv = next((k for k in range(rank, len(work)) if work[k][c]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        inv = pow(prow[c], -1, p)
        for k in range(rank + 1, len(work)):
            a = work[k][c]
            if a:
                a = a * inv % p
                row = work[k]
                for t in range(c, ncols):
                    if prow[t]:
                        row[t] = (row[t] - a * prow[t]) % p
        rank += 1
        if rank == len(work):
            break
    return rank


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in row] for row in rows]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c] % p
        inv = pow(a[c][c], -1, p)
        for k in range(c + 1, n):
            f = a[k][c] * inv % p
            if f:
                for t in range(c, n):
                    a[k][t] = (a[k][t] - f * a[c][t]) % p
    return det % p


# ---- rank certificates for polynomial matrices -----------------------------------

@dataclass
class RankCertificate:
    """Rank of a polynomial matrix over its fraction field, with provenance."""

    rank: int
    certification: str  # "exact" or "probabilistic"
    lower_bound: int
    upper_bound: Optional[int]
    trials: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "certification": self.certification,
                "lower_bound": self.lower_bound, "upper_bound": self.upper_bound,
                "trials": self.trials}


def evaluate_matrix(mat: Sequence[Sequence[Polynomial]], point: Sequence[int]) -> List[list]:
    return [[p.evaluate(point) if p else 0 for p in row] for row in mat]


def evaluate_matrix_mod_p(mat: Sequence[Sequence[Polynomial]], point: Sequence[int], prime: int) -> List[List[int]]:
    return [[p.evaluate_mod_p(point, prime) if p else 0 for p in row] for row in mat]


def probabilistic_rank(mat: Sequence[Sequence[Polynomial]], nvars: int, rng: random.Random,
                       max_trials: int = 6) -> Tuple[int, List[dict]]:
    """Two-trial protocol: ranks mod two distinct random primes at independent random
    points must agree.  Each trial rank is a certified lower bound for the
    generic rank; disagreement triggers further trials and the maximum wins."""
    trials = []
    best = -1
    agreed = None
    for _ in range(max_trials):
        prime = random_prime(rng)
        point = [rng.randrange(1, prime) for _ in range(nvars)]
        try:
            rk = rank_mod_p(evaluate_matrix_mod_p(mat, point, prime), prime)
        except RetryWithNewPrime:
            continue
        trials.append({"prime": prime, "rank": rk})
        if rk > best:
            best = rk
        if len(trials) >= 2 and trials[-1]["rank"] == trials[-2]["rank"] == best:
            agreed = best
            break
    if agreed is None:
        agreed = best
    return agreed, trials


def exact_rank_lower_bound(mat: Sequence[Sequence[Polynomial]], nvars: int, rng: random.Random,
                           bound: int = 97) -> Tuple[int, List[int]]:
    """Exact rational rank at one random integer point: a proven lower bound."""
    point = [rng.randint(-bound, bound) for _ in range(nvars)]
    return rank_exact(evaluate_matrix(mat, point)), point


def certify_rank(mat: Sequence[Sequence[Polynomial]], nvars: int, rng: random.Random, *,
                 upper_bound: Optional[int] = None, exact: bool = True,
                 probabilistic: bool = True, attempts: int = 3) -> RankCertificate:
    """Rank of a polynomial matrix.

    The exact path evaluates at integer points; its rank is a proven lower
    bound and becomes the exact rank when it meets ``upper_bound`` (a proven
    upper bound supplied by the caller).  The probabilistic path runs the
    two-prime protocol.  When both ran, an exact value that disagrees with the
    probabilistic one is an internal inconsistency.
    """
    ncols = len(mat[0]) if mat else 0
    hard_cap = min(len(mat), ncols)
    if upper_bound is None:
        upper_bound = hard_cap
    upper_bound = min(upper_bound, hard_cap)
    lower = 0
    trials: List[dict] = []
    if exact:
        for _ in range(attempts):
            lb, _point = exact_rank_lower_bound(mat, nvars, rng)
            lower = max(lower, lb)
            trials.append({"path": "exact-point", "rank": lb})
            if lower >= upper_bound:
                break
    prob = None
    if probabilistic:
        prob, ptrials = probabilistic_rank(mat, nvars, rng)
        trials.extend(dict(t, path="mod-p") for t in ptrials)
    if exact and lower >= upper_bound:
        if prob is not None and prob != lower:
            raise InternalInconsistency(f"exact rank {lower} but prime-field rank {prob}")
        return RankCertificate(lower, "exact", lower, upper_bound, trials)
    if prob is None:
        return RankCertificate(lower, "exact-lower-bound", lower, upper_bound, trials)
    if prob < lower or prob > upper_bound:
        raise InternalInconsistency(f"prime-field rank {prob} outside proven bounds [{lower}, {upper_bound}]")
    return RankCertificate(prob, "probabilistic", max(lower, 0), upper_bound, trials)
