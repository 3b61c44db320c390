"""Array constructors: MN PDAs, base-PDA families, Cartesian products and
the union-of-cache-configuration array ``P_{m,t}``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    DEFAULT_CELL_BUDGET,
    STAR,
    BasePda,
    PdaArray,
    PdaParams,
    relabel_symbols,
    verify_base_pda,
    verify_pda,
)
from .errors import (
    CellBudgetExceeded,
    ConstructionFailed,
    InvalidRange,
    NotRegular,
    UnevenStarRows,
    VerificationError,
    VerificationFailed,
)


def _check_budget(cells: int, max_cells: int | None):
    if max_cells is not None and cells > max_cells:
        raise CellBudgetExceeded(cells, max_cells)


def mn_pda(q: int, z: int) -> PdaArray:
    """The MN PDA for ``q`` users and cache parameter ``z``.

    Rows are the ``z``-subsets of ``[1:q]`` in lexicographic order.  Column
    ``k`` has a star in row ``A`` iff ``k`` is in ``A``; otherwise the entry is
    the lexicographic rank of ``A | {k}`` among the ``(z+1)``-subsets.
    """
    if not 1 <= z < q:
        raise InvalidRange(f"MN PDA needs 1 <= z < q, got q={q}, z={z}")
    users = range(1, q + 1)
    rank = {c: i + 1 for i, c in enumerate(combinations(users, z + 1))}
    rows = list(combinations(users, z))
    grid = np.zeros((len(rows), q), dtype=np.int64)
    for j, A in enumerate(rows):
        for k in users:
            if k not in A:
                grid[j, k - 1] = rank[tuple(sorted(A + (k,)))]
    return PdaArray(grid)


def transpose_pda(array: PdaArray) -> PdaArray:
    """Transpose ``array``; the result must itself satisfy C1-C3."""
    out = PdaArray(array.grid.T, array.labels)
    verify_pda(out)
    return out


def transform_to_base(array: PdaArray) -> BasePda:
    """Turn a ``g``-regular PDA with uniform row star counts into a base PDA
    with ``lam = g - 1``.

    The array is stacked ``g - 1`` times.  In copy ``eps`` the ``v``-th
    occurrence (row-major) of symbol ``s`` becomes ``(s, <v + eps>_g)``, so the
    new symbol ``(s, u)`` skips occurrence ``u``, whose row is then a star row
    for it.
    """
    params = verify_pda(array)
    g = params.regular_g
    if g is None:
        raise NotRegular("transform needs a regular PDA")
    if g < 2:
        raise NotRegular(f"transform needs g >= 2, got g={g}")
    row_stars = array.star_mask.sum(axis=1)
    if (row_stars != row_stars[0]).any():
        raise UnevenStarRows("transform needs the same number of stars in every row")

    grid = array.grid
    flat = grid.ravel()
    idx = np.flatnonzero(flat)
    order = idx[np.argsort(flat[idx], kind="stable")]
    occ = np.zeros_like(flat)
    occ[order] = np.tile(np.arange(1, g + 1), params.S)
    occ = occ.reshape(grid.shape)

    copies = []
    for eps in range(1, g):
        u = (occ + eps - 1) % g + 1
        code = np.where(grid == STAR, STAR, (grid - 1) * g + u)
        copies.append(code)
    stacked = relabel_symbols(PdaArray(np.vstack(copies)))
    keys = stacked.labels
    labels = [(int(c - 1) // g + 1, int(c - 1) % g + 1) for c in keys]
    stacked = stacked.with_labels(labels)

    try:
        base = verify_base_pda(stacked, g - 1)
    except VerificationError as exc:
        raise VerificationFailed(f"transformed array is not a base PDA: {exc}") from exc
    expected = (params.K, (g - 1) * params.F, (g - 1) * params.Z, g * params.S)
    if base.params.as_tuple() != expected or base.g1 != g - 1:
        raise VerificationFailed(f"transform gave {base.params}, expected {expected}")
    return base


def g2_base_pda(q: int) -> BasePda:
    """A 2-regular ``(q^2, 2q, 2, (q-1)q^2)`` base PDA with ``lam = 1``.

    Columns are pairs ``(a, b)`` in ``[1:q]^2``; rows ``1..q`` form the top
    block and rows ``q+1..2q`` the bottom block.  Column ``(a, b)`` has its two
    stars in top row ``a`` and bottom row ``b``.  Top entries pair up as
    ``(u, (a, b)) ~ (a, (u, b))`` and bottom entries as
    ``(v, (a, b)) ~ (b, (a, v))``; the bottom row ``b`` (resp. top row ``a``)
    is the unique star row of such a pair.
    """
    if q < 2:
        raise InvalidRange(f"g2_base_pda needs q >= 2, got {q}")
    cells = [[None] * (q * q) for _ in range(2 * q)]
    for a in range(q):
        for b in range(q):
            col = a * q + b
            for u in range(q):
                if u != a:
                    cells[u][col] = (0, min(u, a), max(u, a), b)
            for v in range(q):
                if v != b:
                    cells[q + v][col] = (1, min(v, b), max(v, b), a)
    array = relabel_symbols(cells).with_labels(None)
    try:
        base = verify_base_pda(array, 1)
    except VerificationError as exc:
        raise ConstructionFailed(f"g2 base PDA for q={q} failed: {exc}") from exc
    if base.params.as_tuple() != (q * q, 2 * q, 2, (q - 1) * q * q) or base.g1 != 2:
        raise ConstructionFailed(f"g2 base PDA for q={q} has parameters {base.params}")
    return base


def cartesian_product(a, b) -> PdaArray:
    """``a x b``: rows ``(i, j)`` with ``a``'s row index varying fastest.

    Row ``j * F_a + i`` of the result is row ``i`` of ``a`` followed by row
    ``j`` of ``b`` (0-based).  Symbols are copied unchanged.
    """
    A = a.grid if isinstance(a, PdaArray) else np.asarray(a, dtype=np.int64)
    B = b.grid if isinstance(b, PdaArray) else np.asarray(b, dtype=np.int64)
    F1, F2 = A.shape[0], B.shape[0]
    return PdaArray(np.hstack([np.tile(A, (F2, 1)), np.repeat(B, F1, axis=0)]))


def cartesian_power(a, m: int) -> PdaArray:
    if m < 1:
        raise InvalidRange(f"m must be positive, got {m}")
    out = a if isinstance(a, PdaArray) else PdaArray(a)
    for _ in range(m - 1):
        out = cartesian_product(out, a)
    return out


@dataclass(frozen=True)
class UnionIndex:
    """Row/column bookkeeping for ``P_{m,t}``.

    Rows ``(f, eps)`` range over ``[1:F1/lam]^m x [1:lam]^t`` and columns
    ``(T, b)`` over the ``t``-subsets of ``[1:m]`` times ``[1:K1]^t``, both in
    lexicographic order.  Indices returned here are 1-based.
    """

    m: int
    t: int
    sub_rows: int
    lam: int
    K1: int

    @classmethod
    def for_base(cls, base: BasePda, m: int, t: int) -> "UnionIndex":
        return cls(m, t, base.sub_rows, base.lam, base.K1)

    @property
    def subsets(self) -> list[tuple[int, ...]]:
        return list(combinations(range(1, self.m + 1), self.t))

    @property
    def n_rows(self) -> int:
        return self.sub_rows ** self.m * self.lam ** self.t

    @property
    def n_cols(self) -> int:
        return comb(self.m, self.t) * self.K1 ** self.t

    def row_index(self, f, eps=None) -> int:
        eps = eps if eps is not None else (1,) * self.t
        if len(f) != self.m or len(eps) != self.t:
            raise InvalidRange("row key has the wrong length")
        r = 0
        for x in f:
            r = r * self.sub_rows + (x - 1)
        for x in eps:
            r = r * self.lam + (x - 1)
        return r + 1

    def row_key(self, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        r = j - 1
        r, e = divmod(r, self.lam ** self.t)
        eps = np.unravel_index(e, (self.lam,) * self.t) if self.t else ()
        f = np.unravel_index(r, (self.sub_rows,) * self.m)
        return tuple(int(x) + 1 for x in f), tuple(int(x) + 1 for x in eps)

    def col_index(self, T, b) -> int:
        T = tuple(sorted(T))
        ti = self.subsets.index(T)
        c = 0
        for x in b:
            c = c * self.K1 + (x - 1)
        return ti * self.K1 ** self.t + c + 1

    def col_key(self, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        ti, c = divmod(k - 1, self.K1 ** self.t)
        b = np.unravel_index(c, (self.K1,) * self.t)
        return self.subsets[ti], tuple(int(x) + 1 for x in b)

    def w(self, T) -> int:
        """Number of elements of ``T`` inside ``[1:m-t+1]``."""
        return sum(1 for d in T if d <= self.m - self.t + 1)

    def sigma(self, T) -> tuple[int, ...]:
        """``[m-t+2:m]`` minus ``T``, ascending; it has ``w(T) - 1`` elements."""
        return tuple(i for i in range(self.m - self.t + 2, self.m + 1) if i not in T)


def _block_tables(base: BasePda):
    """``l_of[s], mu_of[s]`` locate ``s`` as ``B_l[mu]``; ``btab[l, mu]`` inverts it."""
    S1, n, cap = base.S1, base.sub_rows, base.block_size
    l_of = np.zeros(S1 + 1, dtype=np.int64)
    mu_of = np.zeros(S1 + 1, dtype=np.int64)
    btab = np.zeros((n + 1, cap + 1), dtype=np.int64)
    for l, block in enumerate(base.partition, 1):
        for mu, s in enumerate(block, 1):
            l_of[s], mu_of[s], btab[l, mu] = l, mu, s
    return l_of, mu_of, btab


def pmt_cell(base: BasePda, m: int, t: int, f, eps, T, b):
    """One entry of ``P_{m,t}`` computed straight from the defining rule.

    Returns None for a star, otherwise the symbol vector ``e`` (a tuple of
    ``m`` base symbols).  Used as a per-cell reference for ``construct_pmt``.
    """
    P = base.pda
    n = base.sub_rows
    T = tuple(sorted(T))
    if any(P.cell(f[d - 1], b[h]) == STAR for h, d in enumerate(T)):
        return None
    blocks = base.partition
    l, mu = [], []
    for h, d in enumerate(T):
        s = P.cell(f[d - 1] + (eps[h] - 1) * n, b[h])
        l.append(base.phi[s])
        mu.append(blocks[base.phi[s] - 1].index(s) + 1)
    idx = UnionIndex(m, t, n, base.lam, base.K1)
    w, sigma = idx.w(T), idx.sigma(T)
    e = [None] * m
    for h, d in enumerate(T, 1):
        e[d - 1] = blocks[l[h - 1] - 1][(mu[0] if h <= w else mu[h - 1]) - 1]
    for h, sg in enumerate(sigma, 1):
        e[sg - 1] = blocks[f[sg - 1] - 1][mu[h] - 1]
    for i in range(1, m - t + 2):
        if i not in T:
            e[i - 1] = blocks[f[i - 1] - 1][mu[0] - 1]
    return tuple(e)


def union_params(base: PdaParams, lam: int, m: int, t: int) -> PdaParams:
    """Exact ``(K, F, Z, S)`` and regularity of ``P_{m,t}`` built on ``base``."""
    if not 1 <= t <= m:
        raise InvalidRange(f"need 1 <= t <= m, got m={m}, t={t}")
    n = base.F // lam
    F = lam ** t * n ** m
    Z = F - lam ** t * n ** (m - t) * (n - base.Z // lam) ** t
    g = comb(m, t) * base.regular_g ** t if base.regular_g is not None else None
    return PdaParams(K=comb(m, t) * base.K ** t, F=F, Z=Z,
                     S=n ** (m - t) * base.S ** t, regular_g=g)


def build_cache_config_array(base: BasePda, m: int, t: int,
                             max_cells: int | None = DEFAULT_CELL_BUDGET) -> PdaArray:
    """The array ``C`` whose column ``(delta, b)`` is a cache configuration.

    ``C((f, eps), (delta, b)) = P(f_delta, b)`` with rows ordered as in
    ``construct_pmt`` and column ``(delta, b)`` at 0-based position
    ``(delta - 1) K1 + (b - 1)``.
    """
    if not 1 <= t <= m:
        raise InvalidRange(f"need 1 <= t <= m, got m={m}, t={t}")
    n, lam = base.sub_rows, base.lam
    R = n ** m * lam ** t
    _check_budget(R * m * base.K1, max_cells)
    f = _row_digits(n, m, lam, t)[0]
    A1 = base.pda.grid[:n]
    return PdaArray(np.hstack([A1[f[:, d]] for d in range(m)]))


def _row_digits(n: int, m: int, lam: int, t: int):
    """0-based ``f`` (R x m) and ``eps`` (R x t) digits for every row."""
    R = n ** m * lam ** t
    fflat, eflat = np.divmod(np.arange(R, dtype=np.int64), lam ** t)
    f = np.stack(np.unravel_index(fflat, (n,) * m), axis=1)
    if t:
        eps = np.stack(np.unravel_index(eflat, (lam,) * t), axis=1)
    else:
        eps = np.zeros((R, 0), dtype=np.int64)
    return f, eps


def construct_pmt(base: BasePda, m: int, t: int,
                  max_cells: int | None = DEFAULT_CELL_BUDGET,
                  verify: bool = True) -> PdaArray:
    """Build ``P_{m,t}`` from a base PDA.

    Cell ``((f, eps), (T, b))`` is a star when some ``P(f_{delta_h}, b_h)`` is
    a star, and otherwise the vector ``e`` assembled from the star-row blocks
    ``B_l`` (see ``pmt_cell``).  Vectors are densified to ids in lexicographic
    order and kept in ``labels``.  With ``verify`` the result is checked
    against the closed-form parameters from ``union_params``.
    """
    if not 1 <= t <= m:
        raise InvalidRange(f"need 1 <= t <= m, got m={m}, t={t}")
    if base.g1 is None:
        raise NotRegular("construct_pmt needs a regular base PDA")
    n, lam, K1, S1 = base.sub_rows, base.lam, base.K1, base.S1
    idx = UnionIndex(m, t, n, lam, K1)
    R, B = idx.n_rows, K1 ** t
    _check_budget(R * idx.n_cols, max_cells)

    P = base.pda.grid
    l_of, mu_of, btab = _block_tables(base)
    f, eps = _row_digits(n, m, lam, t)
    bcols = np.stack(np.unravel_index(np.arange(B), (K1,) * t), axis=1)

    packed = S1 ** m < 2 ** 62
    blocks = []
    for T in idx.subsets:
        w, sigma = idx.w(T), idx.sigma(T)
        star = np.zeros((R, B), dtype=bool)
        l, mu = [], []
        for h, d in enumerate(T):
            rows = f[:, d - 1] + eps[:, h] * n
            val = P[rows[:, None], bcols[None, :, h]]
            star |= val == STAR
            l.append(l_of[val])
            mu.append(mu_of[val])
        e = [None] * m
        for h, d in enumerate(T, 1):
            e[d - 1] = btab[l[h - 1], mu[0] if h <= w else mu[h - 1]]
        for h, sg in enumerate(sigma, 1):
            e[sg - 1] = btab[f[:, sg - 1, None] + 1, mu[h]]
        for i in range(1, m - t + 2):
            if i not in T:
                e[i - 1] = btab[f[:, i - 1, None] + 1, mu[0]]
        if packed:
            code = np.zeros((R, B), dtype=np.int64)
            for i in range(m):
                code = code * S1 + (e[i] - 1)
            code[star] = -1
            blocks.append(code)
        else:
            vec = np.stack(e, axis=-1)
            vec[star] = 0
            blocks.append(vec)

    if packed:
        codes = np.hstack(blocks)
        mask = codes >= 0
        keys = np.unique(codes[mask])
        grid = np.zeros(codes.shape, dtype=np.int64)
        grid[mask] = np.searchsorted(keys, codes[mask]) + 1
        labels = np.stack(np.unravel_index(keys, (S1,) * m), axis=1) + 1
    else:
        vecs = np.concatenate(blocks, axis=1)
        mask = vecs[..., 0] > 0
        labels, inv = np.unique(vecs[mask], axis=0, return_inverse=True)
        grid = np.zeros(mask.shape, dtype=np.int64)
        grid[mask] = inv.ravel() + 1
    out = PdaArray(grid, labels)

    if verify:
        expected = union_params(base.params, lam, m, t)
        try:
            got = verify_pda(out)
        except VerificationError as exc:
            raise VerificationFailed(f"P_{{{m},{t}}} is not a PDA: {exc}") from exc
        if got != expected:
            raise VerificationFailed(f"P_{{{m},{t}}} has {got}, expected {expected}")
    return out


def construct_pm(base: BasePda, m: int, max_cells: int | None = DEFAULT_CELL_BUDGET,
                 verify: bool = True) -> PdaArray:
    """The Cartesian-product PDA ``P_m``, i.e. ``P_{m,1}``."""
    out = construct_pmt(base, m, 1, max_cells=max_cells, verify=verify)
    if verify:
        n = base.sub_rows
        product_tuple = (m * base.K1, base.lam * n ** m, base.Z1 * n ** (m - 1), base.S1 * n ** (m - 1))
        got = verify_pda(out)
        if got.as_tuple() != product_tuple or got.regular_g != m * base.g1:
            raise VerificationFailed(f"P_{m} has {got}, expected {product_tuple}")
    return out
