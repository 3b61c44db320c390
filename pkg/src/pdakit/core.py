"""PDA data model and the condition checkers C1-C5.

Arrays are stored as ``F x K`` integer grids where ``STAR`` (0) marks a star
and positive entries are symbol ids.  All row, column and symbol indices that
cross the public API are 1-based, as in the usual PDA notation; the numpy grid
itself is indexed 0-based.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .errors import (
    C1Violation,
    C2Violation,
    C3Violation,
    C4Violation,
    EmptyArray,
    InvalidRange,
    NonDivisibleLambda,
    NoValidPhi,
    TooLarge,
    UnknownSymbol,
)

STAR = 0
DEFAULT_CELL_BUDGET = 10**7
DEFAULT_ISO_BUDGET = 10**4

# memory bound (elements) for the vectorised C3 cross check
_C3_CHUNK = 4_000_000


def _is_star_cell(x: Any) -> bool:
    return x is None or (isinstance(x, str) and x == "*")


@dataclass(frozen=True, eq=False)
class PdaArray:
    """An ``F x K`` grid of stars and symbol ids.

    ``labels`` optionally records where each symbol came from:
    ``labels[s - 1]`` is the original key of symbol ``s`` (an integer or a
    tuple).  Equality compares grids only.
    """

    grid: np.ndarray
    labels: Sequence[Any] | np.ndarray | None = field(default=None)

    def __post_init__(self):
        grid = np.array(self.grid, dtype=np.int64, copy=True)
        if grid.ndim != 2:
            raise ValueError(f"grid must be 2-dimensional, got shape {grid.shape}")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Any]]) -> "PdaArray":
        """Build from nested rows using ``"*"`` (or None) for stars."""
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        grid = np.zeros((len(rows), width), dtype=np.int64)
        for j, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {j + 1} has {len(row)} cells, expected {width}")
            for k, x in enumerate(row):
                if not _is_star_cell(x):
                    if int(x) <= 0:
                        raise InvalidRange(f"symbol ids must be positive, got {x!r}")
                    grid[j, k] = int(x)
        return cls(grid)

    def to_rows(self) -> list[list[Any]]:
        return [["*" if x == STAR else int(x) for x in row] for row in self.grid]

    @property
    def F(self) -> int:
        return self.grid.shape[0]

    @property
    def K(self) -> int:
        return self.grid.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    @property
    def size(self) -> int:
        return self.grid.size

    @cached_property
    def star_mask(self) -> np.ndarray:
        mask = self.grid == STAR
        mask.setflags(write=False)
        return mask

    @property
    def num_symbols(self) -> int:
        return int(self.grid.max()) if self.grid.size else 0

    def cell(self, j: int, k: int) -> int:
        """Entry at 1-based row ``j`` and column ``k`` (``STAR`` for a star)."""
        return int(self.grid[j - 1, k - 1])

    def label(self, s: int) -> Any:
        if self.labels is None:
            return s
        lab = self.labels[s - 1]
        if isinstance(lab, np.ndarray):
            return tuple(int(x) for x in lab)
        return lab

    @cached_property
    def symbol_metadata(self) -> dict[int, Any] | None:
        """Map from symbol id to its original key, if labels were recorded."""
        if self.labels is None:
            return None
        return {s: self.label(s) for s in range(1, len(self.labels) + 1)}

    def with_labels(self, labels) -> "PdaArray":
        return PdaArray(self.grid, labels)

    def __eq__(self, other):
        if not isinstance(other, PdaArray):
            return NotImplemented
        return np.array_equal(self.grid, other.grid)

    __hash__ = None

    def __repr__(self):
        return f"PdaArray(F={self.F}, K={self.K}, S={self.num_symbols})"

    def __str__(self):
        width = max(1, len(str(self.num_symbols)))
        return "\n".join(
            " ".join(("*" if x == STAR else str(x)).rjust(width) for x in row)
            for row in self.grid
        )


@dataclass(frozen=True)
class PdaParams:
    K: int
    F: int
    Z: int
    S: int
    regular_g: int | None = None

    def __post_init__(self):
        if not 0 <= self.Z <= self.F:
            raise InvalidRange(f"need 0 <= Z <= F, got Z={self.Z}, F={self.F}")
        if self.regular_g is not None and self.K * (self.F - self.Z) != self.regular_g * self.S:
            raise InvalidRange("K(F - Z) must equal g S for a g-regular PDA")

    @property
    def memory_ratio(self) -> Fraction:
        return Fraction(self.Z, self.F)

    @property
    def load(self) -> Fraction:
        return Fraction(self.S, self.F)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.K, self.F, self.Z, self.S)


@dataclass(frozen=True)
class BasePda:
    """A PDA together with a certificate that it is a base PDA.

    ``phi`` maps each symbol to its assigned star row in ``[1:F/lam]`` and
    ``partition[j - 1]`` lists the symbols assigned to row ``j`` in ascending
    order.
    """

    pda: PdaArray
    lam: int
    phi: Mapping[int, int]
    partition: tuple[tuple[int, ...], ...]
    params: PdaParams

    @property
    def K1(self) -> int:
        return self.params.K

    @property
    def F1(self) -> int:
        return self.params.F

    @property
    def Z1(self) -> int:
        return self.params.Z

    @property
    def S1(self) -> int:
        return self.params.S

    @property
    def g1(self) -> int | None:
        return self.params.regular_g

    @property
    def sub_rows(self) -> int:
        """Rows per stacked copy, ``F1 / lam``."""
        return self.F1 // self.lam

    @property
    def block_size(self) -> int:
        """Symbols per star row, ``lam S1 / F1``."""
        return self.lam * self.S1 // self.F1


def _grid_of(array) -> np.ndarray:
    return array.grid if isinstance(array, PdaArray) else np.asarray(array)


def _first_c3_violation(grid: np.ndarray, S: int):
    """Return ``(symbol, (pos1, pos2))`` for the smallest violating symbol or None."""
    F, K = grid.shape
    flat = grid.ravel()
    idx = np.flatnonzero(flat)
    sym = flat[idx]
    order = np.argsort(sym, kind="stable")
    idx, sym = idx[order], sym[order]
    counts = np.bincount(sym, minlength=S + 1)[1:]
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    rows, cols = idx // K, idx % K

    best = None
    for g in np.unique(counts):
        g = int(g)
        if g < 2:
            continue
        syms = np.flatnonzero(counts == g)
        if best is not None:
            syms = syms[syms < best[0] - 1]
        off_diag = ~np.eye(g, dtype=bool)
        step = max(1, _C3_CHUNK // (g * g))
        for c0 in range(0, len(syms), step):
            ss = syms[c0:c0 + step]
            pos = starts[ss][:, None] + np.arange(g)
            R, C = rows[pos], cols[pos]
            cross = grid[R[:, :, None], C[:, None, :]]
            bad = (cross != STAR) & off_diag
            if bad.any():
                n, a, b = np.argwhere(bad)[0]
                a, b = min(a, b), max(a, b)
                p1 = (int(R[n, a]) + 1, int(C[n, a]) + 1)
                p2 = (int(R[n, b]) + 1, int(C[n, b]) + 1)
                cand = (int(ss[n]) + 1, (p1, p2))
                if best is None or cand[0] < best[0]:
                    best = cand
                break
    return best


def verify_pda(array: PdaArray) -> PdaParams:
    """Check C1-C3 and return ``(K, F, Z, S)`` plus the regularity, if any.

    C1: every column has the same number ``Z`` of stars.  C2: the symbols are
    exactly ``1..S``.  C3: two equal symbols lie in distinct rows and columns
    and the two opposite corners of their 2x2 subarray are stars.
    """
    grid = _grid_of(array)
    F, K = grid.shape
    if F == 0 or K == 0:
        raise EmptyArray()
    if (grid < 0).any():
        raise InvalidRange("symbol ids must be positive")
    S = int(grid.max())
    if S == 0:
        raise EmptyArray("array contains only stars")

    col_stars = (grid == STAR).sum(axis=0)
    Z = int(col_stars[0])
    bad_cols = np.flatnonzero(col_stars != Z)
    if bad_cols.size:
        c = int(bad_cols[0])
        raise C1Violation(c + 1, int(col_stars[c]), Z)

    counts = np.bincount(grid.ravel(), minlength=S + 1)[1:]
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise C2Violation(int(missing[0]) + 1)

    hit = _first_c3_violation(grid, S)
    if hit is not None:
        raise C3Violation(hit[0], hit[1])

    g = int(counts[0]) if (counts == counts[0]).all() else None
    return PdaParams(K=K, F=F, Z=Z, S=S, regular_g=g)


def find_star_rows(array: PdaArray, s: int) -> set[int]:
    """All rows that hold a star in every column containing ``s``."""
    grid = _grid_of(array)
    cols = np.flatnonzero((grid == s).any(axis=0))
    if s <= 0 or cols.size == 0:
        raise UnknownSymbol(s)
    rows = np.flatnonzero((grid[:, cols] == STAR).all(axis=1))
    return {int(r) + 1 for r in rows}


def _candidate_rows(grid: np.ndarray, S: int, n_rows: int) -> list[list[int]]:
    """For each symbol (0-based), its star rows among the first ``n_rows`` rows."""
    F, K = grid.shape
    incidence = np.zeros((S, K), dtype=np.int64)
    r, c = np.nonzero(grid)
    incidence[grid[r, c] - 1, c] = 1
    non_star = (grid[:n_rows] != STAR).astype(np.int64)
    blocked = incidence @ non_star.T
    return [[int(r) for r in np.flatnonzero(row == 0)] for row in blocked]


def _assign_rows(cand: list[list[int]], n_rows: int, cap: int) -> list[int]:
    """Lexicographically least assignment of symbols to rows, ``cap`` per row.

    Every row must receive exactly ``cap`` symbols and ``len(cand) == n_rows
    * cap``.  A feasible assignment is found with augmenting paths and then
    improved symbol by symbol: symbol ``s`` moves to a smaller row ``r`` iff an
    alternating path over not-yet-fixed symbols leads from ``r`` back to the
    row ``s`` vacates.
    """
    S = len(cand)
    assign = [-1] * S
    members: list[list[int]] = [[] for _ in range(n_rows)]

    def path_from(sources, target_ok, fixed):
        # BFS over rows; parent[r] = (previous row, symbol moved into r)
        parent = {}
        queue = deque()
        for s, r in sources:
            if r not in parent:
                parent[r] = (None, s)
                queue.append(r)
        while queue:
            x = queue.popleft()
            if target_ok(x):
                return x, parent
            for s2 in members[x]:
                if s2 <= fixed:
                    continue
                for r2 in cand[s2]:
                    if r2 not in parent:
                        parent[r2] = (x, s2)
                        queue.append(r2)
        return None, parent

    def apply(end, parent):
        x = end
        while True:
            prev, s = parent[x]
            if prev is not None:
                members[prev].remove(s)
            elif assign[s] >= 0:
                members[assign[s]].remove(s)
            members[x].append(s)
            assign[s] = x
            if prev is None:
                return
            x = prev

    for s in range(S):
        end, parent = path_from([(s, r) for r in cand[s]],
                                lambda x: len(members[x]) < cap, -1)
        if end is None:
            raise NoValidPhi(f"C5: symbol {s + 1} cannot be given a star row")
        apply(end, parent)

    for s in range(S):
        cur = assign[s]
        for r in sorted(cand[s]):
            if r >= cur:
                break
            end, parent = path_from([(s, r)], lambda x: x == cur, s)
            if end is not None:
                apply(end, parent)
                break
    return assign


def verify_base_pda(array: PdaArray, lam: int) -> BasePda:
    """Check C4 and C5 for the given ``lam`` and return the certificate."""
    params = verify_pda(array)
    grid = _grid_of(array)
    F, Z, S = params.F, params.Z, params.S
    if lam <= 0 or F % lam or Z % lam:
        raise NonDivisibleLambda(f"lambda={lam} must divide F={F} and Z={Z}")
    n_rows = F // lam

    stars = grid == STAR
    first = stars[:n_rows]
    for c in range(1, lam):
        diff = np.argwhere(stars[c * n_rows:(c + 1) * n_rows] != first)
        if diff.size:
            r, k = diff[0]
            raise C4Violation(c * n_rows + int(r) + 1, int(k) + 1)

    cap, rem = divmod(lam * S, F)
    if rem or cap == 0:
        raise NoValidPhi(f"C5: lambda*S/F = {lam * S}/{F} is not a positive integer")

    cand = _candidate_rows(grid, S, n_rows)
    assign = _assign_rows(cand, n_rows, cap)
    phi = {s + 1: r + 1 for s, r in enumerate(assign)}
    parts = [[] for _ in range(n_rows)]
    for s, r in phi.items():
        parts[r - 1].append(s)
    partition = tuple(tuple(sorted(p)) for p in parts)
    return BasePda(pda=array if isinstance(array, PdaArray) else PdaArray(grid),
                   lam=lam, phi=phi, partition=partition, params=params)


def relabel_symbols(cells) -> PdaArray:
    """Densify symbol keys to ``1..S`` in ascending order of the keys.

    ``cells`` is a PdaArray or a nested sequence whose non-star entries are
    arbitrary mutually comparable keys (integers or tuples).  The original
    key of each new id is kept in ``labels``.
    """
    if isinstance(cells, PdaArray):
        grid = cells.grid
        keys = np.unique(grid[grid != STAR])
        new = np.zeros_like(grid)
        mask = grid != STAR
        new[mask] = np.searchsorted(keys, grid[mask]) + 1
        if cells.labels is not None:
            labels = [cells.label(int(k)) for k in keys]
        else:
            labels = [int(k) for k in keys]
        return PdaArray(new, labels)

    rows = [list(r) for r in cells]
    keys = sorted({x for r in rows for x in r if not _is_star_cell(x)})
    index = {k: i + 1 for i, k in enumerate(keys)}
    width = len(rows[0]) if rows else 0
    grid = np.zeros((len(rows), width), dtype=np.int64)
    for j, r in enumerate(rows):
        for k, x in enumerate(r):
            if not _is_star_cell(x):
                grid[j, k] = index[x]
    return PdaArray(grid, keys)


def _invariants(grid: np.ndarray):
    stars = grid == STAR
    counts = np.bincount(grid.ravel())[1:]
    return (
        grid.shape,
        tuple(np.sort(stars.sum(axis=0))),
        tuple(np.sort(stars.sum(axis=1))),
        tuple(np.sort(counts[counts > 0])),
    )


def _incidence_graph(grid: np.ndarray) -> nx.Graph:
    G = nx.Graph()
    F, K = grid.shape
    G.add_nodes_from((("r", j) for j in range(F)), kind="row")
    G.add_nodes_from((("c", k) for k in range(K)), kind="col")
    for s in np.unique(grid[grid != STAR]):
        G.add_node(("s", int(s)), kind="sym")
    for j, k in zip(*np.nonzero(grid)):
        node = ("x", int(j), int(k))
        G.add_node(node, kind="cell")
        G.add_edges_from([(node, ("r", int(j))), (node, ("c", int(k))),
                          (node, ("s", int(grid[j, k])))])
    return G


def is_isomorphic(a: PdaArray, b: PdaArray, max_cells: int = DEFAULT_ISO_BUDGET) -> bool:
    """True iff some row permutation, column permutation and symbol bijection map ``a`` onto ``b``.

    Cheap invariants (shape, sorted star counts per row and column, sorted
    symbol multiplicities) reject most non-isomorphic pairs; the rest is
    decided by VF2 on the row/column/symbol/cell incidence graph.
    """
    ga, gb = _grid_of(a), _grid_of(b)
    for g in (ga, gb):
        if g.size > max_cells:
            raise TooLarge(g.size, max_cells)
    if _invariants(ga) != _invariants(gb):
        return False
    if np.array_equal(ga, gb):
        return True
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        _incidence_graph(ga), _incidence_graph(gb),
        node_match=lambda x, y: x["kind"] == y["kind"])
    return matcher.is_isomorphic()
