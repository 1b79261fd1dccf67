"""Buchberger's algorithm over the rationals and the ideal operations built on it.

Inside the engine polynomials are dictionaries with integer coefficients;
every reduction result is divided by its content so coefficients stay
primitive.  Pair selection follows the sugar variant of the normal strategy
(smallest sugar, then smallest lcm), and useless pairs are discarded with
the Gebauer-Moeller update, which implements both Buchberger criteria.
"""
from __future__ import annotations

import heapq
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, ContextError, DomainError
from .poly import DEGREVLEX, MonomialOrder, Polynomial, VarTable
from .report import CheckResult

Exp = Tuple[int, ...]


@dataclass
class Budget:
    """Resource caps for one Gröbner computation."""

    max_pairs: int = 200_000
    max_basis: int = 5_000
    max_degree: int = 60
    time_ms: Optional[int] = None

    @classmethod
    def default(cls) -> "Budget":
        env = os.environ.get("DETLAB_BUDGET_MS")
        return cls(time_ms=int(env) if env else None)

    def deadline(self) -> Optional[float]:
        return None if self.time_ms is None else time.monotonic() + self.time_ms / 1000.0


# ---- integer polynomial kernel ------------------------------------------------------

def _content(terms: Dict[Exp, int]) -> int:
    g = 0
    for c in terms.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _to_int_terms(p: Polynomial) -> Dict[Exp, int]:
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    return {e: int(c * den) for e, c in p.terms.items()}


class _Elt:
    __slots__ = ("terms", "lm", "lc", "mask", "sugar")

    def __init__(self, terms, lm, sugar):
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]
        self.mask = _mask(lm)
        self.sugar = sugar


def _mask(e: Exp) -> int:
    m = 0
    for k, x in enumerate(e):
        if x:
            m |= 1 << k
    return m


def _divides(a: Exp, b: Exp) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Engine:
    def __init__(self, ring: VarTable, order: MonomialOrder, grading: Optional[Sequence[int]],
                 budget: Budget):
        self.ring = ring
        self.order = order
        self.key = order.key
        n = len(ring)
        if grading is None:
            grading = order.weights if order.weights is not None else (1,) * n
        self.grading = tuple(grading)
        self.budget = budget
        self.deadline = budget.deadline()
        self.pairs_done = 0

    def deg(self, e: Exp) -> int:
        return sum(w * x for w, x in zip(self.grading, e))

    def lm(self, terms: Dict[Exp, int]) -> Exp:
        return max(terms, key=self.key)

    def check_clock(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("Gröbner computation exceeded its time budget", what="time")

    def find_reducer(self, e: Exp, basis: Sequence[_Elt]) -> Optional[_Elt]:
        me = _mask(e)
        for g in basis:
            if g.mask & ~me == 0 and _divides(g.lm, e):
                return g
        return None

    def reduce(self, terms: Dict[Exp, int], basis: Sequence[_Elt], full: bool = True) -> Tuple[Dict[Exp, int], int]:
        """Reduce ``terms`` modulo ``basis``.

        Returns (remainder, scale) with scale * input == remainder modulo the
        ideal; the remainder is not content-normalised.
        """
        if not terms:
            return {}, 1
        key = self.key
        rem = dict(terms)
        heap = [tuple(-x for x in key(e)) + (e,) for e in rem]
        heapq.heapify(heap)
        done: Dict[Exp, int] = {}
        scale = 1
        steps = 0
        while heap:
            e = heapq.heappop(heap)[-1]
            c = rem.pop(e, None)
            if c is None:
                continue
            g = self.find_reducer(e, basis)
            if g is None:
                if not full:
                    rem[e] = c
                    out = dict(done)
                    out.update(rem)
                    return out, scale
                done[e] = c
                continue
            steps += 1
            if steps % 256 == 0:
                self.check_clock()
            a = gcd(c, g.lc)
            mult_self = g.lc // a
            mult_g = c // a
            if mult_self != 1:
                scale *= mult_self
                for k in rem:
                    rem[k] *= mult_self
                for k in done:
                    done[k] *= mult_self
            shift = tuple(x - y for x, y in zip(e, g.lm))
            for f, d in g.terms.items():
                if f == g.lm:
                    continue
                h = tuple(x + y for x, y in zip(f, shift))
                v = rem.get(h, 0) - mult_g * d
                if v:
                    if h not in rem:
                        heapq.heappush(heap, tuple(-x for x in key(h)) + (h,))
                    rem[h] = v
                else:
                    rem.pop(h, None)
            if steps % 32 == 0:
                cont = gcd(_content(rem), _content(done)) if done else _content(rem)
                if cont > 1:
                    for k in rem:
                        rem[k] //= cont
                    for k in done:
                        done[k] //= cont
                    scale = Fraction(scale, cont)
        return done, scale

    def normalize(self, terms: Dict[Exp, int]) -> Dict[Exp, int]:
        cont = _content(terms)
        lm = self.lm(terms)
        if terms[lm] < 0:
            cont = -cont
        return {e: c // cont for e, c in terms.items()}

    def make(self, terms: Dict[Exp, int], sugar: Optional[int] = None) -> _Elt:
        terms = self.normalize(terms)
        lm = self.lm(terms)
        if sugar is None:
            sugar = max(self.deg(e) for e in terms)
        return _Elt(terms, lm, sugar)

    def spoly(self, f: _Elt, g: _Elt) -> Tuple[Dict[Exp, int], int]:
        L = _lcm(f.lm, g.lm)
        sf = tuple(x - y for x, y in zip(L, f.lm))
        sg = tuple(x - y for x, y in zip(L, g.lm))
        a = gcd(f.lc, g.lc)
        cf, cg = g.lc // a, f.lc // a
        out: Dict[Exp, int] = {}
        for e, c in f.terms.items():
            out[tuple(x + y for x, y in zip(e, sf))] = cf * c
        for e, c in g.terms.items():
            h = tuple(x + y for x, y in zip(e, sg))
            v = out.get(h, 0) - cg * c
            if v:
                out[h] = v
            else:
                out.pop(h, None)
        sugar = max(f.sugar + self.deg(sf), g.sugar + self.deg(sg))
        return out, sugar

    def run(self, gens: Sequence[Dict[Exp, int]]) -> List[_Elt]:
        polys: List[_Elt] = []
        active: List[int] = []
        pairs: List[tuple] = []  # heap of (sugar, deg(lcm), key(lcm), i, j)
        pair_set = set()
        # reduce the input against itself, lowest leading term first
        start = [self.make(t) for t in gens if t]
        start.sort(key=lambda el: self.key(el.lm))
        for el in start:
            basis = [polys[k] for k in active]
            red, _ = self.reduce(el.terms, basis)
            if red:
                self._insert(self.make(red, el.sugar), polys, active, pairs, pair_set)
        while pairs:
            sugar, _, _, i, j = heapq.heappop(pairs)
            if (i, j) not in pair_set:
                continue
            pair_set.discard((i, j))
            self.pairs_done += 1
            if self.pairs_done > self.budget.max_pairs:
                raise BudgetExceeded("pair budget exhausted", what="pairs")
            if sugar > self.budget.max_degree:
                raise BudgetExceeded("degree budget exhausted", what="degree")
            self.check_clock()
            s, sug = self.spoly(polys[i], polys[j])
            if not s:
                continue
            red, _ = self.reduce(s, [polys[k] for k in active])
            if red:
                self._insert(self.make(red, sug), polys, active, pairs, pair_set)
                if len(active) > self.budget.max_basis:
                    raise BudgetExceeded("basis size budget exhausted", what="basis")
        return self._reduced([polys[k] for k in active])

    def _insert(self, h: _Elt, polys, active, pairs, pair_set):
        """Gebauer-Moeller update."""
        hi = len(polys)
        polys.append(h)
        hl = h.lm
        cand = [(g, _lcm(hl, polys[g].lm)) for g in active]
        kept = []
        for idx, (g, L) in enumerate(cand):
            coprime = all(not (x and y) for x, y in zip(hl, polys[g].lm))
            if coprime:
                kept.append((g, L, True))
                continue
            dominated = False
            for g2, L2 in cand[idx + 1:]:
                if _divides(L2, L):
                    dominated = True
                    break
            if not dominated:
                for g2, L2, _c in kept:
                    if _divides(L2, L):
                        dominated = True
                        break
            if not dominated:
                kept.append((g, L, False))
        new_pairs = [(g, L) for g, L, cop in kept if not cop]
        # drop old pairs whose lcm is strictly divisible by lm(h) in the GM sense
        for (i, j) in list(pair_set):
            L = _lcm(polys[i].lm, polys[j].lm)
            if _divides(hl, L) and _lcm(polys[i].lm, hl) != L and _lcm(polys[j].lm, hl) != L:
                pair_set.discard((i, j))
        for g, L in new_pairs:
            sugar = max(polys[g].sugar + self.deg(L) - self.deg(polys[g].lm), h.sugar + self.deg(L) - self.deg(hl))
            heapq.heappush(pairs, (sugar, self.deg(L), self.key(L), g, hi))
            pair_set.add((g, hi))
        active[:] = [g for g in active if not _divides(hl, polys[g].lm)] + [hi]

    def _reduced(self, basis: List[_Elt]) -> List[_Elt]:
        basis = sorted(basis, key=lambda el: self.key(el.lm))
        minimal = []
        for el in basis:
            if not any(_divides(o.lm, el.lm) for o in minimal):
                minimal.append(el)
        out = []
        for k, el in enumerate(minimal):
            others = minimal[:k] + minimal[k + 1:]
            red, _ = self.reduce(el.terms, others)
            out.append(self.make(red, el.sugar))
        out.sort(key=lambda el: self.key(el.lm))
        return out


# ---- public types --------------------------------------------------------------------

class Ideal:
    """Generators over a variable table, with the order used for Gröbner computations."""

    def __init__(self, gens: Iterable[Polynomial], ring: Optional[VarTable] = None,
                 order: MonomialOrder = DEGREVLEX, grading: Optional[Sequence[int]] = None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise DomainError("an empty generator list needs an explicit variable table")
            ring = gens[0].ring
        seen = set()
        clean = []
        for g in gens:
            if g.ring != ring:
                raise ContextError("ideal generators over different variable tables")
            if g and g not in seen:
                seen.add(g)
                clean.append(g)
        self.gens = clean
        self.ring = ring
        self.order = order
        self.grading = grading
        self._gb: Optional[GroebnerBasis] = None

    def __repr__(self) -> str:
        return f"Ideal({len(self.gens)} generators over {len(self.ring)} variables)"

    def groebner(self, budget: Optional[Budget] = None) -> "GroebnerBasis":
        if self._gb is None:
            self._gb = buchberger(self, budget)
        return self._gb

    def with_order(self, order: MonomialOrder, grading=None) -> "Ideal":
        return Ideal(self.gens, self.ring, order, grading)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.gens + other.gens, self.ring, self.order, self.grading)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal([a * b for a in self.gens for b in other.gens], self.ring, self.order, self.grading)


class GroebnerBasis:
    """Reduced Gröbner basis.  ``elements`` are monic; ``primitive`` holds the
    integer primitive representatives used for reduction."""

    def __init__(self, source: Ideal, engine: _Engine, elts: List[_Elt]):
        self.source = source
        self.order = engine.order
        self.ring = source.ring
        self._engine = engine
        self._elts = elts
        self.primitive = [Polynomial(self.ring, dict(el.terms)) for el in elts]
        self.pairs_processed = engine.pairs_done

    @property
    def elements(self) -> List[Polynomial]:
        out = []
        for el in self._elts:
            out.append(Polynomial(self.ring, {e: Fraction(c, el.lc) for e, c in el.terms.items()}))
        return out

    def __len__(self) -> int:
        return len(self._elts)

    def is_unit(self) -> bool:
        return any(not any(el.lm) for el in self._elts)

    def leading_monomials(self) -> List[Exp]:
        return [el.lm for el in self._elts]

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            raise ContextError("polynomial and basis over different variable tables")
        if not p:
            return p
        den = 1
        for c in p.terms.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        red, scale = self._engine.reduce(_to_int_terms(p), self._elts)
        factor = Fraction(1) / (Fraction(scale) * den)
        return Polynomial(self.ring, {e: c * factor for e, c in red.items()})

    def reduces_to_zero(self, p: Polynomial) -> bool:
        if not p:
            return True
        red, _ = self._engine.reduce(_to_int_terms(p), self._elts)
        return not red

    def dimension(self) -> int:
        if self.is_unit():
            raise DomainError("dimension of the unit ideal is undefined")
        return len(self.ring) - min_hitting_set(self.leading_monomials())

    def codimension(self) -> int:
        return len(self.ring) - self.dimension()

    def lm_support_sets(self) -> List[int]:
        return [_mask(e) for e in self.leading_monomials()]


def buchberger(I: Ideal, budget: Optional[Budget] = None) -> GroebnerBasis:
    engine = _Engine(I.ring, I.order, I.grading, budget or Budget.default())
    elts = engine.run([_to_int_terms(g) for g in I.gens])
    return GroebnerBasis(I, engine, elts)


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.normal_form(p)


# ---- dimension from the initial ideal ----------------------------------------------------

def min_hitting_set(monomials: Sequence[Exp]) -> int:
    """Smallest number of variables meeting the support of every monomial.

    Krull dimension of R/in(I) is n minus this number: a variable set is
    independent modulo the initial ideal exactly when its complement hits
    every leading monomial.
    """
    sets = sorted({_mask(e) for e in monomials}, key=lambda s: bin(s).count("1"))
    if any(s == 0 for s in sets):
        raise DomainError("unit ideal has no dimension")
    minimal = []
    for s in sets:
        if not any(t & s == t for t in minimal):
            minimal.append(s)
    best = [bin(_or_all(minimal)).count("1")]

    def search(chosen: int, size: int):
        if size >= best[0]:
            return
        unhit = None
        for s in minimal:
            if not s & chosen:
                if unhit is None or bin(s).count("1") < bin(unhit).count("1"):
                    unhit = s
        if unhit is None:
            best[0] = size
            return
        bits = unhit
        while bits:
            low = bits & -bits
            search(chosen | low, size + 1)
            bits ^= low

    search(0, 0)
    return best[0]


def _or_all(sets):
    out = 0
    for s in sets:
        out |= s
    return out


def dimension(I: Ideal, budget: Optional[Budget] = None) -> int:
    return I.groebner(budget).dimension()


def codimension(I: Ideal, budget: Optional[Budget] = None) -> int:
    return I.groebner(budget).codimension()


# ---- ring extensions ----------------------------------------------------------------------

def _fresh(ring: VarTable, base: str) -> str:
    name = base
    k = 0
    while name in ring:
        k += 1
        name = f"{base}{k}"
    return name


def _prepend(ring: VarTable, names: Sequence[str]) -> VarTable:
    return VarTable(list(names) + list(ring.names))


def _restrict(p: Polynomial, ring: VarTable) -> Polynomial:
    """Map a polynomial free of the extra variables back to ``ring`` by name."""
    idx = [p.ring.index(n) for n in ring.names]
    return Polynomial(ring, {tuple(e[k] for k in idx): c for e, c in p.terms.items()})


def _elim_grading(big: VarTable, small: VarTable, killed: int, grading) -> Optional[tuple]:
    if grading is None:
        return None
    return (0,) * killed + tuple(grading)


def eliminate(I: Ideal, kill: Sequence[int], budget: Optional[Budget] = None) -> Ideal:
    """Generators of I intersected with the subring omitting the variables ``kill``."""
    ring = I.ring
    kill = sorted(set(kill))
    if not kill:
        return Ideal(I.groebner(budget).elements, ring, I.order, I.grading)
    keep = [v for v in range(len(ring)) if v not in kill]
    names = [ring.names[v] for v in kill] + [ring.names[v] for v in keep]
    big = VarTable(names)
    weights = None
    if I.order.weights is not None:
        weights = tuple(I.order.weights[v] for v in kill) + tuple(I.order.weights[v] for v in keep)
    order = MonomialOrder("elim", block=len(kill), weights=weights)
    grading = None
    if I.grading is not None:
        grading = tuple(I.grading[v] for v in kill) + tuple(I.grading[v] for v in keep)
    elif weights is not None:
        grading = weights
    J = Ideal([g.embed(big) for g in I.gens], big, order, grading)
    G = J.groebner(budget)
    nk = len(kill)
    out = [_restrict(g, ring) for g in G.primitive
           if not any(any(e[:nk]) for e in g.terms)]
    return Ideal(out, ring, I.order, I.grading)


def intersect(I: Ideal, K: Ideal, budget: Optional[Budget] = None) -> Ideal:
    """I ∩ K as the t-free part of t*I + (1-t)*K."""
    ring = I.ring
    tname = _fresh(ring, "t")
    big = _prepend(ring, [tname])
    t = big.var(0)
    gens = [t * g.embed(big) for g in I.gens] + [(1 - t) * g.embed(big) for g in K.gens]
    order = MonomialOrder("elim", block=1)
    grading = (0,) + tuple(I.grading if I.grading is not None else (1,) * len(ring))
    G = Ideal(gens, big, order, grading).groebner(budget)
    out = [_restrict(g, ring) for g in G.primitive if not any(e[0] for e in g.terms)]
    return Ideal(out, ring, I.order, I.grading)


def quotient_by_element(I: Ideal, g: Polynomial, budget: Optional[Budget] = None) -> Ideal:
    if not g:
        raise DomainError("quotient by the zero polynomial")
    G = I.groebner(budget)
    if G.reduces_to_zero(g):
        return Ideal([I.ring.one()], I.ring, I.order, I.grading)
    inter = intersect(I, Ideal([g], I.ring), budget)
    return Ideal([h.exact_divide(g) for h in inter.gens], I.ring, I.order, I.grading)


def ideal_quotient(I: Ideal, K: Ideal, budget: Optional[Budget] = None) -> Ideal:
    """I : K as the intersection of the quotients by each generator of K."""
    if not K.gens:
        raise DomainError("quotient by the zero ideal")
    result: Optional[Ideal] = None
    for g in K.gens:
        q = quotient_by_element(I, g, budget)
        if q.groebner(budget).is_unit():
            continue
        result = q if result is None else intersect(result, q, budget)
    if result is None:
        return Ideal([I.ring.one()], I.ring, I.order, I.grading)
    return Ideal(result.groebner(budget).elements, I.ring, I.order, I.grading)


def contains(I: Ideal, K: Ideal, budget: Optional[Budget] = None) -> bool:
    G = I.groebner(budget)
    return all(G.reduces_to_zero(g) for g in K.gens)


def first_non_member(I: Ideal, K: Ideal, budget: Optional[Budget] = None) -> Optional[Polynomial]:
    G = I.groebner(budget)
    for g in K.gens:
        if not G.reduces_to_zero(g):
            return g
    return None


def equals(I: Ideal, K: Ideal, budget: Optional[Budget] = None) -> bool:
    return contains(I, K, budget) and contains(K, I, budget)


def is_unit(I: Ideal, budget: Optional[Budget] = None) -> bool:
    return I.groebner(budget).is_unit()


def saturation(I: Ideal, K: Ideal, budget: Optional[Budget] = None, max_steps: int = 50) -> Tuple[Ideal, int]:
    """I : K^infinity, with the number of quotient steps needed to stabilise."""
    current = I
    for step in range(1, max_steps + 1):
        nxt = ideal_quotient(current, K, budget)
        if contains(current, nxt, budget):
            return current, step - 1
        current = nxt
    raise BudgetExceeded("saturation did not stabilise", what="saturation")


def in_radical(f: Polynomial, I: Ideal, budget: Optional[Budget] = None) -> bool:
    """f in sqrt(I) iff (I, 1 - t f) is the unit ideal."""
    ring = I.ring
    tname = _fresh(ring, "t")
    big = _prepend(ring, [tname])
    t = big.var(0)
    gens = [g.embed(big) for g in I.gens] + [1 - t * f.embed(big)]
    return Ideal(gens, big).groebner(budget).is_unit()


def regular_sequence_check(I: Ideal, seq: Sequence[Polynomial], budget: Optional[Budget] = None,
                           tag: str = "regular_sequence", anchor: str = "regular-sequence") -> CheckResult:
    current = I
    for k, a in enumerate(seq):
        colon = quotient_by_element(current, a, budget)
        bad = first_non_member(current, colon, budget)
        if bad is not None:
            return CheckResult(tag, anchor, "FAIL", "exact",
                               {"step": k + 1, "element": a, "colon_witness": bad},
                               f"element {k + 1} is a zero divisor")
        current = Ideal(current.gens + [a], I.ring, I.order, I.grading)
    if current.gens and is_unit(current, budget):
        return CheckResult(tag, anchor, "FAIL", "exact", {"unit": True},
                           "the sequence generates the unit ideal modulo I")
    return CheckResult(tag, anchor, "PASS", "exact", {"length": len(seq)},
                       f"all {len(seq)} elements are nonzerodivisors in turn")


def graded_membership(p: Polynomial, gens: Sequence[Polynomial]) -> bool:
    """Membership of a homogeneous p in the ideal of homogeneous generators, by
    linear algebra in the degree of p."""
    from itertools import combinations_with_replacement
    from .linalg import sparse_nullspace
    if not p:
        return True
    d = p.degree()
    ring = p.ring
    n = len(ring)
    spanning = []
    for g in gens:
        if not g:
            continue
        k = d - g.degree()
        if k < 0:
            continue
        for combo in combinations_with_replacement(range(n), k):
            e = [0] * n
            for v in combo:
                e[v] += 1
            spanning.append(g.mul_term(tuple(e), 1))
    # p in span iff the system sum c_i s_i - p = 0 has a solution with p's coefficient 1
    eqs: Dict[Exp, Dict[int, Fraction]] = {}
    for u, s in enumerate(spanning):
        for e, c in s.terms.items():
            eqs.setdefault(e, {})[u] = c
    target = len(spanning)
    for e, c in p.terms.items():
        eqs.setdefault(e, {})[target] = -c
    basis = sparse_nullspace(list(eqs.values()), list(range(target, -1, -1)))
    return any(vec.get(target) for vec in basis)
