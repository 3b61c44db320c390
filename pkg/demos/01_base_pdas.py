"""Base PDAs: checking C1-C5 and finding the star-row assignment."""

from pdakit import PdaArray, find_star_rows, mn_pda, transform_to_base, verify_base_pda, verify_pda
from pdakit.errors import NoValidPhi

# the 4-user base PDA used throughout
P = PdaArray.from_rows([
    ["*", "*", 3, 1],
    [2, "*", "*", 4],
    [1, 3, "*", "*"],
    ["*", 2, 4, "*"],
])
print(P)
print(verify_pda(P))  # (K, F, Z, S) = (4, 4, 2, 4), 2-regular

for s in range(1, 5):
    print(f"symbol {s}: star rows {sorted(find_star_rows(P, s))}")

base = verify_base_pda(P, lam=1)
print("phi =", dict(base.phi))
print("blocks =", base.partition)

# MN PDA for two users: symbol 1 has no star row, so it is not a base PDA
Q = mn_pda(2, 1)
try:
    verify_base_pda(Q, 1)
except NoValidPhi as exc:
    print("Q:", exc)

# ...but stacking relabelled copies turns any regular PDA into one
T = transform_to_base(Q)
print(T.pda)
print("lambda =", T.lam, "params =", T.params.as_tuple())
print("labels:", T.pda.symbol_metadata)

# larger MN arrays, lambda = z
for q, z in [(4, 1), (4, 2), (5, 3)]:
    b = transform_to_base(mn_pda(q, z))
    print(f"MN({q},{z}) -> lambda={b.lam} {b.params.as_tuple()}")
