"""Degenerations of the generic square matrix and their determinantal data.

Cells are indexed 1-based as ``(i, j)``.  A cell is either ``None`` (zero) or
the index pair of the variable it carries; in the cloned family the cell
``(m, m)`` carries the pair ``(m-1, m-1)``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import SpecError
from .poly import Polynomial, VarTable, parse_pair_name

Cell = Optional[Tuple[int, int]]
FAMILIES = ("generic", "cloned", "zeros", "custom")


def zero_cells(m: int, r: int) -> List[Tuple[int, int]]:
    """Staircase of zero positions i + j > 2m - r, row-major."""
    return [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if i + j > 2 * m - r]


@dataclass(frozen=True)
class MatrixSpec:
    """Which variable (or zero) sits in each cell of a degeneration pattern."""

    m: int
    family: str
    r: Optional[int] = None
    entries: Optional[Tuple[Tuple[Cell, ...], ...]] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise SpecError("m must be a positive integer")
        if self.family == "zeros":
            if self.r is None or not 1 <= self.r <= self.m - 2:
                raise SpecError(f"zeros family needs 1 <= r <= m-2, got m={self.m}, r={self.r}")
        if self.family == "cloned" and self.m < 2:
            raise SpecError("cloned family needs m >= 2")
        if self.family == "custom":
            if not self.entries or any(len(row) != len(self.entries[0]) for row in self.entries):
                raise SpecError("custom entries must be a non-empty rectangular grid")
            if len(self.entries) != self.m:
                raise SpecError("custom grid must have m rows")

    @classmethod
    def generic(cls, m: int) -> "MatrixSpec":
        return cls(m, "generic")

    @classmethod
    def cloned(cls, m: int) -> "MatrixSpec":
        return cls(m, "cloned")

    @classmethod
    def zeros(cls, m: int, r: int) -> "MatrixSpec":
        return cls(m, "zeros", r)

    @classmethod
    def custom(cls, grid: Sequence[Sequence[Cell]]) -> "MatrixSpec":
        rows = tuple(tuple(None if c is None else tuple(c) for c in row) for row in grid)
        return cls(len(rows), "custom", None, rows)

    @classmethod
    def degenerate_rectangle(cls, a: int, b: int, r: int) -> "MatrixSpec":
        """The a x b generic matrix with cells i + j > a + b - r set to zero."""
        if not (a >= b and 0 <= r <= b - 2):
            raise SpecError("need a >= b and 0 <= r <= b-2")
        return cls.custom([[None if i + j > a + b - r else (i, j) for j in range(1, b + 1)]
                           for i in range(1, a + 1)])

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.family == "custom" else self.m

    def cell(self, i: int, j: int) -> Cell:
        m = self.m
        if self.family == "custom":
            return self.entries[i - 1][j - 1]
        if self.family == "cloned" and (i, j) == (m, m):
            return (m - 1, m - 1)
        if self.family == "zeros" and i + j > 2 * m - self.r:
            return None
        return (i, j)

    def grid(self) -> List[List[Cell]]:
        return [[self.cell(i, j) for j in range(1, self.ncols + 1)] for i in range(1, self.m + 1)]

    def to_json(self) -> dict:
        out = {"m": self.m, "family": self.family}
        if self.r is not None:
            out["r"] = self.r
        if self.family == "custom":
            out["entries"] = [["0" if c is None else f"x_{c[0]}_{c[1]}" for c in row] for row in self.entries]
        return out

    @classmethod
    def from_json(cls, data) -> "MatrixSpec":
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise SpecError(f"invalid matrix spec JSON: {exc}") from None
        try:
            m, family = int(data["m"]), data["family"]
        except (KeyError, TypeError, ValueError):
            raise SpecError("matrix spec needs integer 'm' and a 'family'") from None
        if family == "custom":
            grid = []
            for row in data.get("entries") or []:
                out = []
                for c in row:
                    if c in ("0", 0):
                        out.append(None)
                        continue
                    try:
                        prefix, i, j = parse_pair_name(str(c))
                    except ValueError:
                        raise SpecError(f"bad cell {c!r}") from None
                    if prefix != "x":
                        raise SpecError(f"bad cell {c!r}")
                    out.append((i, j))
                grid.append(out)
            spec = cls.custom(grid)
            if spec.m != m:
                raise SpecError("custom grid row count differs from m")
            return spec
        return cls(m, family, data.get("r"))


def matmul(a: Sequence[Sequence[Polynomial]], b: Sequence[Sequence[Polynomial]]) -> List[List[Polynomial]]:
    ring = a[0][0].ring
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ring.zero()
            for t in range(k):
                if a[i][t] and b[t][j]:
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def minor_det(cells: Sequence[Sequence[Polynomial]], rows: Sequence[int], cols: Sequence[int],
              memo: Optional[dict] = None) -> Polynomial:
    """Determinant of the submatrix on 0-based ``rows`` x ``cols`` by Laplace expansion
    along the first row with memoised column subsets."""
    if memo is None:
        memo = {}
    rows = tuple(rows)
    ring = cells[0][0].ring

    def rec(rk: int, colset: Tuple[int, ...]) -> Polynomial:
        if rk == len(rows):
            return ring.one()
        key = (rows[rk:], colset)
        hit = memo.get(key)
        if hit is not None:
            return hit
        acc = ring.zero()
        row = cells[rows[rk]]
        for pos, c in enumerate(colset):
            entry = row[c]
            if not entry:
                continue
            sub = rec(rk + 1, colset[:pos] + colset[pos + 1:])
            if sub:
                term = entry * sub
                acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return rec(0, tuple(cols))


class SymbolicMatrix:
    """A realised degeneration: polynomial cells over the table of variables actually used."""

    def __init__(self, spec: MatrixSpec, prefix: str = "x"):
        self.spec = spec
        self.m = spec.m
        self.ncols = spec.ncols
        grid = spec.grid()
        pairs = {c for row in grid for c in row if c is not None}
        self.ring = VarTable.from_pairs(pairs, prefix)
        self.prefix = prefix
        self.cells: List[List[Polynomial]] = [
            [self.ring.zero() if c is None else self.ring.var(self.ring.pair_index(*c, prefix)) for c in row]
            for row in grid]
        self.var_cells: Dict[int, List[Tuple[int, int]]] = {}
        for i, row in enumerate(grid, 1):
            for j, c in enumerate(row, 1):
                if c is not None:
                    self.var_cells.setdefault(self.ring.pair_index(*c, prefix), []).append((i, j))
        self._memo: dict = {}
        self._det: Optional[Polynomial] = None
        self._cof: Dict[Tuple[int, int], Polynomial] = {}

    def __repr__(self) -> str:
        return f"SymbolicMatrix({self.spec!r})"

    def _square(self):
        if self.m != self.ncols:
            raise SpecError("operation needs a square matrix")

    def entry(self, i: int, j: int) -> Polynomial:
        return self.cells[i - 1][j - 1]

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
        """Determinant of the submatrix on 1-based rows and columns (each sorted)."""
        if len(rows) != len(cols):
            raise SpecError("minor needs as many rows as columns")
        return minor_det(self.cells, [i - 1 for i in rows], [j - 1 for j in cols], self._memo)

    def determinant(self) -> Polynomial:
        self._square()
        if self._det is None:
            self._det = self.minor(range(1, self.m + 1), range(1, self.m + 1))
        return self._det

    def cofactor(self, i: int, j: int) -> Polynomial:
        """Signed cofactor of cell (i, j)."""
        self._square()
        m = self.m
        if not (1 <= i <= m and 1 <= j <= m):
            raise SpecError(f"cell ({i},{j}) outside a {m}x{m} matrix")
        key = (i, j)
        if key not in self._cof:
            rows = [k for k in range(1, m + 1) if k != i]
            cols = [k for k in range(1, m + 1) if k != j]
            val = self.minor(rows, cols) if m > 1 else self.ring.one()
            self._cof[key] = -val if (i + j) % 2 else val
        return self._cof[key]

    def adjugate(self) -> List[List[Polynomial]]:
        m = self.m
        return [[self.cofactor(l, k) for l in range(1, m + 1)] for k in range(1, m + 1)]

    def gradient_generators(self) -> List[Polynomial]:
        """For each variable (by ordinal), the sum of the cofactors of the cells carrying it."""
        out = []
        for v in range(len(self.ring)):
            acc = self.ring.zero()
            for i, j in self.var_cells[v]:
                acc = acc + self.cofactor(i, j)
            out.append(acc)
        return out

    def submaximal_minors(self) -> List[Polynomial]:
        """All m^2 signed cofactors, row-major by cell."""
        m = self.m
        return [self.cofactor(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]

    def maximal_minors(self) -> List[Polynomial]:
        """Maximal minors of a (possibly rectangular) matrix, nonzero ones only."""
        a, b = self.m, self.ncols
        k = min(a, b)
        out = []
        for rows in itertools.combinations(range(1, a + 1), k):
            for cols in itertools.combinations(range(1, b + 1), k):
                p = self.minor(rows, cols)
                if p:
                    out.append(p)
        return out

    def minors(self, t: int, rows: Optional[Sequence[int]] = None, cols: Optional[Sequence[int]] = None) -> List[Polynomial]:
        """All nonzero t-minors, optionally confined to given rows/columns."""
        rows = list(rows) if rows is not None else list(range(1, self.m + 1))
        cols = list(cols) if cols is not None else list(range(1, self.ncols + 1))
        if t == 0:
            return [self.ring.one()]
        out = []
        for rs in itertools.combinations(rows, t):
            for cs in itertools.combinations(cols, t):
                p = self.minor(rs, cs)
                if p:
                    out.append(p)
        return out

    def corner_strip_minors(self, j: int, side: str) -> List[Polynomial]:
        """Maximal minors of the last ``j`` rows (``side="rows"``) or columns (``"cols"``)."""
        m = self.m
        if not 0 <= j <= m:
            raise SpecError(f"strip width {j} outside 0..{m}")
        strip = list(range(m - j + 1, m + 1))
        if side == "rows":
            return self.minors(j, rows=strip)
        if side == "cols":
            return self.minors(j, cols=strip)
        raise SpecError(f"side must be 'rows' or 'cols', not {side!r}")


def build(spec: MatrixSpec, prefix: str = "x") -> SymbolicMatrix:
    return SymbolicMatrix(spec, prefix)


def generic_matrix(ring: VarTable, m: int, prefix: str = "y") -> List[List[Polynomial]]:
    """The m x m matrix of variables ``prefix_i_j`` taken from ``ring``."""
    return [[ring.var(ring.pair_index(i, j, prefix)) for j in range(1, m + 1)] for i in range(1, m + 1)]


def grid_cofactor(cells: Sequence[Sequence[Polynomial]], i: int, j: int) -> Polynomial:
    """Signed cofactor of cell (i, j) of an arbitrary square polynomial grid."""
    m = len(cells)
    rows = [k - 1 for k in range(1, m + 1) if k != i]
    cols = [k - 1 for k in range(1, m + 1) if k != j]
    val = minor_det(cells, rows, cols)
    return -val if (i + j) % 2 else val


def grid_adjugate(cells: Sequence[Sequence[Polynomial]]) -> List[List[Polynomial]]:
    m = len(cells)
    memo: dict = {}
    out = [[None] * m for _ in range(m)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            rows = [k - 1 for k in range(1, m + 1) if k != i]
            cols = [k - 1 for k in range(1, m + 1) if k != j]
            val = minor_det(cells, rows, cols, memo)
            out[j - 1][i - 1] = -val if (i + j) % 2 else val
    return out


def grid_determinant(cells: Sequence[Sequence[Polynomial]]) -> Polynomial:
    m = len(cells)
    return minor_det(cells, range(m), range(m))


def anti_diagonal_free_entries(m: int) -> List[Tuple[int, int]]:
    """Cells of the generic m x m matrix lying on no main anti-diagonal of a submaximal minor."""
    hit = set()
    for rows in itertools.combinations(range(1, m + 1), m - 1):
        for cols in itertools.combinations(range(1, m + 1), m - 1):
            for k in range(m - 1):
                hit.add((rows[k], cols[m - 2 - k]))
    return [(i, j) for i in range(1, m + 1) for j in range(1, m + 1) if (i, j) not in hit]
