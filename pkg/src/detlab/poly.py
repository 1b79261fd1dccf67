"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is an immutable map from dense exponent tuples to
nonzero coefficients (``int`` or :class:`fractions.Fraction`, with integral
fractions normalised back to ``int``), tied to a :class:`VarTable` that names
the variables.  Monomial orders are flat integer sort keys, so comparing two
monomials is a plain tuple comparison.
"""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import ContextError, DomainError, NotDivisible, RetryWithNewPrime

Exponent = Tuple[int, ...]
Coeff = Union[int, Fraction]

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def pair_name(i: int, j: int, prefix: str = "x") -> str:
    return f"{prefix}_{i}_{j}"


def parse_pair_name(name: str) -> Tuple[str, int, int]:
    """Split ``x_2_3`` into ``("x", 2, 3)``."""
    prefix, i, j = name.rsplit("_", 2)
    return prefix, int(i), int(j)


class VarTable:
    """Ordered, duplicate-free list of variable names.

    The ordinal of a variable is its position in ``names``; monomial orders
    treat ordinal 0 as the largest variable.
    """

    __slots__ = ("names", "_pos")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        pos = {}
        for k, name in enumerate(names):
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name {name!r}")
            if name in pos:
                raise ValueError(f"duplicate variable name {name!r}")
            pos[name] = k
        self.names = names
        self._pos = pos

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]], prefix: str = "x") -> "VarTable":
        """Variables ``prefix_i_j`` in row-major order of the index pairs."""
        return cls(pair_name(i, j, prefix) for i, j in sorted(set(pairs)))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self._pos

    def __eq__(self, other) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise ContextError(f"variable {name!r} not in table") from None

    def pair_index(self, i: int, j: int, prefix: str = "x") -> int:
        return self.index(pair_name(i, j, prefix))

    def has_pair(self, i: int, j: int, prefix: str = "x") -> bool:
        return pair_name(i, j, prefix) in self._pos

    def extend(self, names: Iterable[str]) -> "VarTable":
        return VarTable(self.names + tuple(names))

    def var(self, which: Union[int, str]) -> "Polynomial":
        k = which if isinstance(which, int) else self.index(which)
        if not 0 <= k < len(self.names):
            raise DomainError(f"variable ordinal {k} out of range")
        e = [0] * len(self.names)
        e[k] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(k) for k in range(len(self.names))]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def const(self, c: Coeff) -> "Polynomial":
        c = _norm(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return Polynomial(self, {(0,) * len(self.names): c} if c else {})

    def one(self) -> "Polynomial":
        return self.const(1)


class MonomialOrder:
    """A monomial order realised as a flat integer sort key (larger key = larger monomial).

    ``kind`` is ``"lex"``, ``"degrevlex"`` or ``"elim"``.  The elimination order
    compares the first ``block`` variables by degrevlex and breaks ties by
    degrevlex on the remaining ones.  Optional ``weights`` replace the plain
    total degree inside the degree-compatible parts.
    """

    __slots__ = ("kind", "block", "weights", "_cache")

    def __init__(self, kind: str = "degrevlex", block: Optional[int] = None,
                 weights: Optional[Sequence[int]] = None):
        if kind not in ("lex", "degrevlex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and block is None:
            raise ValueError("elimination order needs a block size")
        self.kind = kind
        self.block = block
        self.weights = tuple(weights) if weights is not None else None
        self._cache: Dict[Exponent, Tuple[int, ...]] = {}

    def __eq__(self, other) -> bool:
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.block == other.block and self.weights == other.weights)

    def __hash__(self) -> int:
        return hash((self.kind, self.block, self.weights))

    def __repr__(self) -> str:
        extra = f", block={self.block}" if self.block is not None else ""
        return f"MonomialOrder({self.kind!r}{extra})"

    def _grevlex(self, e, offset=0):
        if self.weights is None:
            d = sum(e)
        else:
            w = self.weights
            d = sum(w[offset + k] * x for k, x in enumerate(e))
        return (d,) + tuple(-x for x in reversed(e))

    def key(self, e: Exponent) -> Tuple[int, ...]:
        k = self._cache.get(e)
        if k is None:
            if self.kind == "lex":
                k = e
            elif self.kind == "degrevlex":
                k = self._grevlex(e)
            else:
                b = self.block
                k = self._grevlex(e[:b]) + self._grevlex(e[b:], b)
            self._cache[e] = k
        return k


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_exp(b: Exponent, a: Exponent) -> Exponent:
    return tuple(y - x for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial over the rationals."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: VarTable, terms: Optional[Mapping[Exponent, Coeff]] = None, *, _trusted=False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            n = len(ring)
            clean = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ContextError("exponent length does not match the variable table")
                c = _norm(c)
                if c:
                    clean[tuple(e)] = c
            self.terms = clean
        self._hash = None

    # ---- construction helpers -------------------------------------------
    @classmethod
    def _make(cls, ring, terms):
        return cls(ring, terms, _trusted=True)

    def _check(self, other: "Polynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise ContextError("polynomials live over different variable tables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # ---- basic queries ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * len(self.ring): _norm(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def degree(self) -> int:
        if not self.terms:
            raise DomainError("degree of the zero polynomial is undefined")
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            raise DomainError("homogeneity of the zero polynomial is undefined")
        degs = {sum(e) for e in self.terms}
        return len(degs) == 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Coeff:
        return self.terms.get((0,) * len(self.ring), 0)

    def support(self) -> set:
        """Ordinals of the variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(k for k, x in enumerate(e) if x)
        return used

    def coefficient(self, e: Exponent) -> Coeff:
        return self.terms.get(tuple(e), 0)

    # ---- arithmetic ------------------------------------------------------
    def __neg__(self) -> "Polynomial":
        return Polynomial._make(self.ring, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Polynomial._make(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) - c
            if v:
                out[e] = _norm(v)
            else:
                out.pop(e, None)
        return Polynomial._make(self.ring, out)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return Polynomial._make(self.ring, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponent, Coeff] = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return Polynomial._make(self.ring, {e: _norm(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise DomainError("only non-negative integer powers are supported")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, e: Exponent, c: Coeff) -> "Polynomial":
        """Multiply by the single term ``c * x^e``."""
        if not c:
            return self.ring.zero()
        return Polynomial._make(self.ring, {_add_exp(f, e): _norm(d * c) for f, d in self.terms.items()})

    # ---- calculus and substitution ----------------------------------------
    def derivative(self, v: int) -> "Polynomial":
        """Formal partial derivative with respect to the variable of ordinal ``v``."""
        if not 0 <= v < len(self.ring):
            raise DomainError(f"variable ordinal {v} out of range")
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                f = list(e)
                f[v] = k - 1
                out[tuple(f)] = _norm(c * k)
        return Polynomial._make(self.ring, out)

    def substitute(self, images: Mapping[int, "Polynomial"], target: Optional[VarTable] = None) -> "Polynomial":
        """Apply the ring map sending variable ``v`` to ``images[v]`` and fixing the rest.

        When ``target`` differs from this polynomial's table, unmapped
        variables are carried over by name.
        """
        target = target or self.ring
        for img in images.values():
            if img.ring != target:
                raise ContextError("substitution images must share the target variable table")
        fixed = {}
        for k, name in enumerate(self.ring.names):
            if k not in images:
                fixed[k] = target.var(name) if target != self.ring else None
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(k, x):
            key = (k, x)
            p = powers.get(key)
            if p is None:
                base = images[k] if k in images else fixed[k]
                p = base ** x
                powers[key] = p
            return p

        n = len(target)
        acc: Dict[Exponent, Coeff] = {}
        for e, c in self.terms.items():
            # variables fixed in the same ring are applied as a monomial shift
            shift = [0] * n
            factors = []
            for k, x in enumerate(e):
                if not x:
                    continue
                if k in images or fixed[k] is not None:
                    factors.append(power(k, x))
                else:
                    shift[k] += x
            term = Polynomial._make(target, {tuple(shift): c})
            for fac in factors:
                term = term * fac
                if not term.terms:
                    break
            for f, d in term.terms.items():
                acc[f] = acc.get(f, 0) + d
        return Polynomial._make(target, {e: _norm(c) for e, c in acc.items() if c})

    def embed(self, target: VarTable) -> "Polynomial":
        """Rewrite over a table that contains every variable of this one (matched by name)."""
        if target == self.ring:
            return self
        idx = [target.index(name) for name in self.ring.names]
        n = len(target)
        out = {}
        for e, c in self.terms.items():
            f = [0] * n
            for k, x in enumerate(e):
                if x:
                    f[idx[k]] = x
            out[tuple(f)] = c
        return Polynomial._make(target, out)

    def evaluate(self, point: Sequence[Coeff]) -> Coeff:
        """Exact value at a rational point."""
        if len(point) != len(self.ring):
            raise DomainError("point length differs from the number of variables")
        total = 0
        for e, c in self.terms.items():
            v = c
            for k, x in enumerate(e):
                if x:
                    v *= point[k] ** x
            total += v
        return _norm(total)

    def evaluate_mod_p(self, point: Sequence[int], prime: int) -> int:
        """Image under evaluation at ``point`` followed by reduction modulo ``prime``."""
        if len(point) != len(self.ring):
            raise DomainError("point length differs from the number of variables")
        total = 0
        for e, c in self.terms.items():
            if isinstance(c, Fraction):
                if c.denominator % prime == 0:
                    raise RetryWithNewPrime(f"denominator {c.denominator} vanishes mod {prime}")
                v = c.numerator * pow(c.denominator, -1, prime)
            else:
                v = c
            for k, x in enumerate(e):
                if x:
                    v = v * pow(point[k], x, prime) % prime
            total += v
        return total % prime

    # ---- orders and division ---------------------------------------------
    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> Tuple[Exponent, Coeff]:
        if not self.terms:
            raise DomainError("the zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def exact_divide(self, d: "Polynomial", order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        """Return ``q`` with ``self == q * d``; raise :class:`NotDivisible` otherwise."""
        self._check(d)
        if not d.terms:
            raise DomainError("division by the zero polynomial")
        if not self.terms:
            return self.ring.zero()
        key = order.key
        ld, lc = d.leading_term(order)
        rest = [(e, c) for e, c in d.terms.items() if e != ld]
        rem = dict(self.terms)
        heap = [tuple(-x for x in key(e)) + (e,) for e in rem]
        heapq.heapify(heap)
        quo: Dict[Exponent, Coeff] = {}
        while rem:
            while True:
                e = heapq.heappop(heap)[-1]
                if e in rem:
                    break
            c = rem.pop(e)
            if not _divides(ld, e):
                raise NotDivisible("leading term not divisible")
            t = _sub_exp(e, ld)
            if isinstance(c, int) and isinstance(lc, int) and c % lc == 0:
                q = c // lc
            else:
                q = _norm(Fraction(c) / lc)
            quo[t] = q
            for f, b in rest:
                g = _add_exp(f, t)
                v = rem.get(g, 0) - q * b
                if v:
                    if g not in rem:
                        heapq.heappush(heap, tuple(-x for x in key(g)) + (g,))
                    rem[g] = _norm(v)
                else:
                    rem.pop(g, None)
        return Polynomial._make(self.ring, quo)

    def divides(self, other: "Polynomial", order: MonomialOrder = DEGREVLEX) -> bool:
        try:
            other.exact_divide(self, order)
        except NotDivisible:
            return False
        return True

    # ---- content -----------------------------------------------------------
    def primitive(self) -> Tuple[Fraction, "Polynomial"]:
        """Split into (content, primitive integer polynomial with positive leading coefficient)."""
        if not self.terms:
            return Fraction(0), self
        from math import gcd, lcm
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        lead = self.leading_term()[0]
        if ints[lead] < 0:
            g = -g
        return Fraction(g, den), Polynomial._make(self.ring, {e: v // g for e, v in ints.items()})

    # ---- text form ---------------------------------------------------------
    def monomial_str(self, e: Exponent) -> str:
        parts = []
        for k, x in enumerate(e):
            if x == 1:
                parts.append(self.ring.names[k])
            elif x:
                parts.append(f"{self.ring.names[k]}^{x}")
        return "*".join(parts)

    def to_str(self, order: MonomialOrder = DEGREVLEX) -> str:
        """Canonical text: terms by decreasing order, rational coefficients as ``p/q``."""
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms(order):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            mono = self.monomial_str(e)
            cstr = str(a)
            if mono:
                body = mono if a == 1 else f"{cstr}*{mono}"
            else:
                body = cstr
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = to_str

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r})"

    @classmethod
    def parse(cls, text: str, ring: VarTable) -> "Polynomial":
        """Parse sums of products of rationals and ``name^k`` factors (no parentheses)."""
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty polynomial text")
        if src[0] not in "+-":
            src = "+" + src
        chunks = re.findall(r"[+-][^+-]+", src)
        if "".join(chunks) != src:
            raise ValueError(f"cannot parse polynomial {text!r}")
        n = len(ring)
        acc: Dict[Exponent, Coeff] = {}
        for chunk in chunks:
            coeff: Coeff = -1 if chunk[0] == "-" else 1
            e = [0] * n
            for factor in chunk[1:].split("*"):
                if not factor:
                    raise ValueError(f"cannot parse polynomial {text!r}")
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff = coeff * Fraction(factor)
                    continue
                name, _, power = factor.partition("^")
                e[ring.index(name)] += int(power) if power else 1
            e = tuple(e)
            acc[e] = acc.get(e, 0) + coeff
        return cls(ring, acc)


def linear_combination(ring: VarTable, pairs: Iterable[Tuple[Coeff, Polynomial]]) -> Polynomial:
    """Sum of ``c * p`` accumulated in a single dictionary."""
    acc: Dict[Exponent, Coeff] = {}
    for c, p in pairs:
        if not c:
            continue
        for e, d in p.terms.items():
            acc[e] = acc.get(e, 0) + c * d
    return Polynomial._make(ring, {e: _norm(v) for e, v in acc.items() if v})
