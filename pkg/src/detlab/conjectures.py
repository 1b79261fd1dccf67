"""Falsification probes for open statements about the zeros degeneration.

Every probe returns PASS when the computation is consistent with the
statement at the tested size, FAIL with a witness when it refutes it, and
BUDGET when the Gröbner engine ran out of resources.  A PASS is never a
proof.
"""
from __future__ import annotations

import time
from typing import Callable, List, Optional

from .errors import BudgetExceeded, SpecError
from .groebner import Budget, Ideal, first_non_member, ideal_quotient, intersect, saturation
from .matrices import MatrixSpec, SymbolicMatrix, build
from .poly import Polynomial
from .report import CheckResult, Report


def _x(M: SymbolicMatrix, i: int, j: int) -> Polynomial:
    return M.entry(i, j)


def delta(M: SymbolicMatrix, t: int) -> Polynomial:
    """Determinant of the top t x t block of the last t columns."""
    m = M.m
    return M.minor(list(range(1, t + 1)), list(range(m - t + 1, m + 1)))


def gamma(M: SymbolicMatrix, t: int) -> Polynomial:
    """Determinant of the leftmost t x t block of the last t rows."""
    m = M.m
    return M.minor(list(range(m - t + 1, m + 1)), list(range(1, t + 1)))


def _intersect_all(ideals: List[Ideal], budget: Budget) -> Ideal:
    out = ideals[0]
    for K in ideals[1:]:
        out = intersect(out, K, budget)
    return out


def _both_containments(A: Ideal, B: Ideal, budget: Budget):
    """(A ⊆ B witness or None, B ⊆ A witness or None)."""
    return first_non_member(B, A, budget), first_non_member(A, B, budget)


def _guard(tag: str, anchor: str, fn: Callable[[], CheckResult]) -> CheckResult:
    try:
        return fn()
    except BudgetExceeded as exc:
        return CheckResult(tag, anchor, "BUDGET", None, {"exhausted": exc.what}, str(exc))


def strip_decomposition(M: SymbolicMatrix, j: int, side: str, budget: Budget) -> CheckResult:
    """I_j(M_j) = ∩_{t<=j} (x_{t+1,m-t+1}, δ_t), and the mirrored statement for N_j."""
    m = M.m
    tag = f"conj_strip_{side}_{j}"
    anchor = "zeros:conjecture-strip-decomposition"

    def run():
        comps = []
        for t in range(1, j + 1):
            if side == "cols":
                comps.append(Ideal([_x(M, t + 1, m - t + 1), delta(M, t)], M.ring))
            else:
                comps.append(Ideal([_x(M, m - t + 1, t + 1), gamma(M, t)], M.ring))
        target = Ideal(M.corner_strip_minors(j, side), M.ring)
        inter = _intersect_all(comps, budget)
        w1, w2 = _both_containments(target, inter, budget)
        if w1 is None and w2 is None:
            return CheckResult(tag, anchor, "PASS", "exact", {"components": len(comps)},
                               "strip ideal equals the stated intersection (not refuted)")
        w = {}
        if w1 is not None:
            w["in_strip_not_in_intersection"] = w1
        if w2 is not None:
            w["in_intersection_not_in_strip"] = w2
        return CheckResult(tag, anchor, "FAIL", "exact", w, "stated decomposition refuted")

    return _guard(tag, anchor, run)


def conductor_formula(M: SymbolicMatrix, r: int, budget: Budget) -> CheckResult:
    """J:I = ∩_{s,t>=1, s+t<=r+1} (x_{m-s+1,s+1}, γ_s, x_{t+1,m-t+1}, δ_t)."""
    m = M.m
    tag, anchor = "conj_conductor_formula", "zeros:conjecture-conductor-intersection"

    def run():
        J = Ideal(M.gradient_generators())
        I = Ideal(M.submaximal_minors())
        Q = ideal_quotient(J, I, budget)
        comps = []
        for s in range(1, r + 1):
            for t in range(1, r + 2 - s):
                comps.append(Ideal([_x(M, m - s + 1, s + 1), gamma(M, s), _x(M, t + 1, m - t + 1), delta(M, t)], M.ring))
        inter = _intersect_all(comps, budget)
        w1, w2 = _both_containments(Q, inter, budget)
        if w1 is None and w2 is None:
            return CheckResult(tag, anchor, "PASS", "exact", {"components": len(comps)},
                               "J:I equals the stated intersection (not refuted)")
        w = {}
        if w1 is not None:
            w["in_conductor_not_in_intersection"] = w1
        if w2 is not None:
            w["in_intersection_not_in_conductor"] = w2
        return CheckResult(tag, anchor, "FAIL", "exact", w, "stated intersection refuted")

    return _guard(tag, anchor, run)


def gradient_splits(M: SymbolicMatrix, budget: Budget) -> CheckResult:
    """J = I ∩ (J:I)."""
    tag, anchor = "conj_J_equals_I_cap_conductor", "zeros:conjecture-gradient-splitting"

    def run():
        J = Ideal(M.gradient_generators())
        I = Ideal(M.submaximal_minors())
        Q = ideal_quotient(J, I, budget)
        inter = intersect(I, Q, budget)
        w = first_non_member(J, inter, budget)
        if w is None:
            return CheckResult(tag, anchor, "PASS", "exact", {}, "J = I ∩ (J:I) (not refuted)")
        return CheckResult(tag, anchor, "FAIL", "exact", {"in_intersection_not_in_J": w},
                           "I ∩ (J:I) is strictly larger than J")

    return _guard(tag, anchor, run)


def minimal_prime_probe(M: SymbolicMatrix, budget: Budget) -> CheckResult:
    """J ⊆ (I_j(N_j), I_{m-1-j}(M_{m-1-j})) for every 1 <= j <= m-2."""
    m = M.m
    tag, anchor = "minimal_primes_probe", "zeros:gradient-minimal-primes"

    def run():
        J = Ideal(M.gradient_generators())
        bad = {}
        for j in range(1, m - 1):
            K = Ideal(M.corner_strip_minors(j, "rows") + M.corner_strip_minors(m - 1 - j, "cols"), M.ring)
            w = first_non_member(K, J, budget)
            if w is not None:
                bad[f"j={j}"] = w
        if bad:
            return CheckResult(tag, anchor, "FAIL", "exact", bad, "J not contained in a strip-minor ideal")
        return CheckResult(tag, anchor, "PASS", "exact", {"j_range": [1, m - 2]},
                           "J lies in every (I_j(N_j), I_{m-1-j}(M_{m-1-j}))")

    return _guard(tag, anchor, run)


def unmixed_probe(M: SymbolicMatrix, budget: Budget) -> CheckResult:
    """Compare I with J:(J:I) and with J:(J:I)^∞.

    I·(J:I) ⊆ J gives I ⊆ J:(J:I) ⊆ J:(J:I)^∞ always.  The saturation keeps
    the components of J whose primes contain I but not J:I, so it equals I
    whenever I is the unmixed part of J and J has no embedded component
    surviving the saturation.
    """
    tag, anchor = "question_unmixed_part", "zeros:question-unmixed-part"

    def run():
        J = Ideal(M.gradient_generators())
        I = Ideal(M.submaximal_minors())
        Q = ideal_quotient(J, I, budget)
        colon = ideal_quotient(J, Q, budget)
        sat, steps = saturation(J, Q, budget)
        w_colon = first_non_member(I, colon, budget)
        w_sat = first_non_member(I, sat, budget)
        wit = {"saturation_steps": steps, "colon_equals_I": w_colon is None, "saturation_equals_I": w_sat is None}
        if w_sat is None:
            return CheckResult(tag, anchor, "PASS", "exact", wit, "J:(J:I)^∞ = I (consistent with I = J^un)")
        wit["in_saturation_not_in_I"] = w_sat
        return CheckResult(tag, anchor, "FAIL", "exact", wit,
                           "J:(J:I)^∞ is larger than I: either I is not the unmixed part or an embedded component survives")

    return _guard(tag, anchor, run)


def conjecture_harness(m: int, r: int, budget: Optional[Budget] = None) -> Report:
    if not 1 <= r <= m - 2:
        raise SpecError(f"zeros family needs 1 <= r <= m-2, got m={m}, r={r}")
    budget = budget or Budget.default()
    M = build(MatrixSpec.zeros(m, r))
    rep = Report({"family": "zeros", "m": m, "r": r, "mode": "conjectures"})
    probes: List[Callable[[], CheckResult]] = []
    if r == m - 2:
        for j in range(1, m - 1):
            probes.append(lambda j=j: strip_decomposition(M, j, "cols", budget))
            probes.append(lambda j=j: strip_decomposition(M, j, "rows", budget))
        probes.append(lambda: conductor_formula(M, r, budget))
        probes.append(lambda: gradient_splits(M, budget))
        probes.append(lambda: minimal_prime_probe(M, budget))
    else:
        probes.append(lambda: unmixed_probe(M, budget))
    for probe in probes:
        start = time.perf_counter()
        res = probe()
        res.timing_ms = (time.perf_counter() - start) * 1000.0
        rep.add(res)
    return rep
