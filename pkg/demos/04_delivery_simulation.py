"""Placement and XOR delivery on synthetic files."""

import time

from pdakit import FileLibrary, PdaArray, construct_pmt, deliver, mn_pda, place, sweep_demands, verify_base_pda

P = PdaArray.from_rows([["*", "*", 3, 1], [2, "*", "*", 4], [1, 3, "*", "*"], ["*", 2, 4, "*"]])
lib = FileLibrary(N=4, F=P.F, packet_bytes=32, seed=7)
caches = place(P, lib)
print("user 1 caches", sorted(caches[0].cached))

tr = deliver(P, lib, caches, demand=[1, 2, 3, 4])
for m in tr.messages:
    print(f"symbol {m.symbol}: cells {m.cells} digest {m.digest[:12]}")
print("decoded:", tr.decode_results, "load", tr.load)

# every demand vector
print(sweep_demands(P, lib))
Q = mn_pda(4, 2)
print(sweep_demands(Q, FileLibrary(4, Q.F, seed=1)))

# the 48-user array, 100 random demands
P32 = construct_pmt(verify_base_pda(P, 1), 3, 2)
t0 = time.perf_counter()
s = sweep_demands(P32, FileLibrary(48, P32.F, seed=0), mode="sampled", count=100, seed=0)
print(f"P_(3,2): {s.demands} demands, all decoded={s.all_decoded}, load {s.max_load}, "
      f"{time.perf_counter() - t0:.1f}s")
