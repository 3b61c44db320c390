"""Schemes A, B and C: closed forms, small built instances, and ratios against WCLC."""

from pdakit import g2_base_pda, is_isomorphic, verify_pda
from pdakit.schemes import SchemeSpec, compare_ratios, scheme_a_params, scheme_b_params, scheme_build, scheme_c_params

# the g = 2 base family
for q in range(2, 7):
    print(f"g2({q}):", g2_base_pda(q).params.as_tuple())

for p in [scheme_a_params(4, 2, 8, 3), scheme_b_params(4, 2, 4, 2), scheme_c_params(4, 2, 3)]:
    print(f"Scheme {p.name}{p.args}: K={p.K} M/N={p.memory_ratio} F={p.F} R={p.R} g={p.g}")

# small instances are materialised and checked against the closed form
for spec in [SchemeSpec("a", (2, 2, 2, 1)), SchemeSpec("b", (2, 1, 3, 2)), SchemeSpec("c", (2, 2, 2))]:
    a = scheme_build(spec)
    print(spec.name, spec.args, verify_pda(a))

print("C(1,1,2) is the 4-user base PDA:",
      is_isomorphic(scheme_build(SchemeSpec("c", (1, 1, 2))), g2_base_pda(2).pda))

# load ratios against WCLC at equal K and M/N
for q in (3, 5, 8):
    for t in (1, 2, 3):
        rows = compare_ratios(t + 1, t, q, 1)
        print(f"q={q} t={t}: " + "  ".join(f"{r.scheme}: R {r.r_ratio}, F {float(r.f_ratio):.3g}" for r in rows))
