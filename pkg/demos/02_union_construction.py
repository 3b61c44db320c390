"""The union-of-cache-configurations array P_{m,t}."""

import time

from pdakit import (
    PdaArray,
    UnionIndex,
    build_cache_config_array,
    construct_pm,
    construct_pmt,
    pmt_cell,
    union_params,
    verify_base_pda,
    verify_pda,
)

P = PdaArray.from_rows([["*", "*", 3, 1], [2, "*", "*", 4], [1, 3, "*", "*"], ["*", 2, 4, "*"]])
base = verify_base_pda(P, 1)

# m-fold Cartesian product: 12 cache configurations in 3 groups
C = build_cache_config_array(base, 3, 1)
print("C:", C.shape)

# plain product construction (t = 1)
P3 = construct_pm(base, 3)
print("P_3:", verify_pda(P3))

# unions of t = 2 configurations from different groups
t0 = time.perf_counter()
P32 = construct_pmt(base, 3, 2)
print(f"P_(3,2): {verify_pda(P32)}  built in {time.perf_counter() - t0:.3f}s")
print("expected:", union_params(base.params, base.lam, 3, 2))

# cells are addressed by (f, eps) rows and (T, b) columns
idx = UnionIndex.for_base(base, 3, 2)
j = idx.row_index((3, 2, 2), (1, 1))
k = idx.col_index((1, 2), (1, 1))
s = P32.cell(j, k)
print(f"row (3,2,2), column ({{1,2}},(1,1)) -> symbol {s} = vector {P32.label(s)}")
print("oracle:", pmt_cell(base, 3, 2, (3, 2, 2), (1, 1), (1, 2), (1, 1)))

# the vector (1,2,3) fills a 12x12 subarray with exactly one entry per row and column
rows, cols = (P32.grid == s).nonzero()
print(len(rows), "occurrences in", len(set(rows)), "rows and", len(set(cols)), "columns")

# users and gain grow like C(m,t) K1^t and C(m,t) g1^t
for m, t in [(3, 1), (3, 2), (3, 3), (4, 2), (6, 3)]:
    p = union_params(base.params, 1, m, t)
    print(f"m={m} t={t}: K={p.K:>5} F={p.F:>6} g={p.regular_g:>4} M/N={p.memory_ratio} R={p.load}")
