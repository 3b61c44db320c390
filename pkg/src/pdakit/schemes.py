"""Closed-form parameters of coded caching schemes, in exact arithmetic.

Every calculator returns a ``SchemeParams`` with integer ``K`` and ``F`` and
``Fraction`` memory ratio, load and gain.  Nothing here materialises an
array, so subpacketizations of 10^12 and beyond are fine.  ``scheme_build``
is the bridge to the constructors for Schemes A, B and C.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, gcd, prod

from .constructors import (
    construct_pmt,
    g2_base_pda,
    mn_pda,
    transform_to_base,
    transpose_pda,
)
from .core import DEFAULT_CELL_BUDGET, PdaArray, verify_pda
from .errors import InvalidRange, VerificationFailed


@dataclass(frozen=True)
class SchemeParams:
    K: int
    memory_ratio: Fraction
    F: int
    R: Fraction
    g: Fraction | None = field(default=None)
    name: str = ""
    args: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "memory_ratio", Fraction(self.memory_ratio))
        object.__setattr__(self, "R", Fraction(self.R))
        if self.K <= 0 or self.F <= 0:
            raise InvalidRange(f"K and F must be positive, got K={self.K}, F={self.F}")
        if not 0 <= self.memory_ratio <= 1 or self.R < 0:
            raise InvalidRange(f"bad memory ratio {self.memory_ratio} or load {self.R}")
        g = self.K * (1 - self.memory_ratio) / self.R if self.R else None
        object.__setattr__(self, "g", g)

    @property
    def S(self) -> Fraction:
        """Number of transmissions of a matching PDA, ``R * F``."""
        return self.R * self.F

    @property
    def Z(self) -> Fraction:
        return self.memory_ratio * self.F


def _need(cond: bool, msg: str):
    if not cond:
        raise InvalidRange(msg)


def gaussian_binomial(k: int, t: int, p: int) -> int:
    """``[k t]_p = prod_{i<t} (p^(k-i) - 1) / (p^(t-i) - 1)``."""
    _need(0 <= t <= k, f"Gaussian binomial needs 0 <= t <= k, got k={k}, t={t}")
    num = prod(p ** (k - i) - 1 for i in range(t))
    den = prod(p ** (t - i) - 1 for i in range(t))
    return num // den


def _is_prime_power(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            while p % d == 0:
                p //= d
            return p == 1
        d += 1
    return True


def scheme_a_params(m: int, t: int, q: int, z: int) -> SchemeParams:
    """Union construction on the transformed MN PDA."""
    _need(1 <= z < q and 1 <= t <= m, f"Scheme A needs 1 <= z < q, 1 <= t <= m; got {(m, t, q, z)}")
    return SchemeParams(
        K=comb(m, t) * q ** t,
        memory_ratio=1 - Fraction(q - z, q) ** t,
        F=z ** t * comb(q, z) ** m,
        R=Fraction(q - z, z) ** t,
        name="A", args=(m, t, q, z))


def scheme_b_params(m: int, t: int, q: int, z: int) -> SchemeParams:
    """Union construction on the transformed transpose of the MN PDA."""
    _need(1 <= z < q and 1 <= t <= m, f"Scheme B needs 1 <= z < q, 1 <= t <= m; got {(m, t, q, z)}")
    return SchemeParams(
        K=comb(m, t) * comb(q, z) ** t,
        memory_ratio=1 - Fraction(q - z, q) ** t,
        F=z ** t * q ** m,
        R=Fraction(comb(q - 1, z), z) ** t,
        name="B", args=(m, t, q, z))


def scheme_c_params(m: int, t: int, q: int) -> SchemeParams:
    """Union construction on the g=2 base PDA family."""
    _need(q >= 2 and 1 <= t <= m, f"Scheme C needs q >= 2, 1 <= t <= m; got {(m, t, q)}")
    return SchemeParams(
        K=comb(m, t) * q ** (2 * t),
        memory_ratio=1 - Fraction(q - 1, q) ** t,
        F=(2 * q) ** m,
        R=Fraction((q - 1) * q, 2) ** t,
        name="C", args=(m, t, q))


def mn_params(K: int, t: int) -> SchemeParams:
    _need(1 <= t <= K, f"MN needs 1 <= t <= K, got K={K}, t={t}")
    return SchemeParams(K=K, memory_ratio=Fraction(t, K), F=comb(K, t),
                        R=Fraction(K - t, t + 1), name="MN", args=(K, t))


def grouping_params(K: int, q: int, z: int) -> SchemeParams:
    """MN PDA with ``q`` users and parameter ``z`` replicated over ``K`` users."""
    _need(1 <= z <= q <= K, f"grouping needs 1 <= z <= q <= K, got {(K, q, z)}")
    return SchemeParams(K=K, memory_ratio=Fraction(z, q),
                        F=q // gcd(q, K) * comb(q, z),
                        R=Fraction(K, q) * Fraction(q - z, z + 1),
                        name="grouping", args=(K, q, z))


def wclc_params(m: int, t: int, q: int, z: int) -> SchemeParams:
    _need(1 <= z < q and 1 <= t <= m, f"WCLC needs 1 <= z < q, 1 <= t <= m; got {(m, t, q, z)}")
    fl = (q - 1) // (q - z)
    return SchemeParams(K=comb(m, t) * q ** t,
                        memory_ratio=1 - Fraction(q - z, q) ** t,
                        F=fl ** t * q ** (m - 1),
                        R=Fraction(q - z, fl) ** t,
                        name="WCLC", args=(m, t, q, z))


def wcwc_params(m: int, q: int, z: int) -> SchemeParams:
    _need(1 <= z < q and m >= 1, f"WCWC needs 1 <= z < q, m >= 1; got {(m, q, z)}")
    return SchemeParams(K=m * q, memory_ratio=Fraction(z, q), F=z * comb(q, z) ** m,
                        R=Fraction(q - z, z), name="WCWC", args=(m, q, z))


def ytcc_params(H: int, a: int, b: int, r: int) -> SchemeParams:
    _need(0 <= r < a < H and r < b < H and a + b <= H + r,
          f"YTCC needs r < a < H, r < b < H, a + b <= H + r; got {(H, a, b, r)}")
    return SchemeParams(
        K=comb(H, a),
        memory_ratio=1 - Fraction(comb(a, r) * comb(H - a, b - r), comb(H, b)),
        F=comb(H, b),
        R=Fraction(comb(H, a + b - 2 * r), comb(H, b))
        * min(comb(H - a - b + 2 * r, r), comb(a + b - 2 * r, a - r)),
        name="YTCC", args=(H, a, b, r))


def cksm_params(p: int, k: int, t: int, m: int, variant: int = 1) -> SchemeParams:
    """Projective-geometry schemes; ``variant`` selects the first or second
    family.  Load and subpacketization are assigned so that the load is the
    smaller, per-file quantity (see README, parameter tables)."""
    _need(_is_prime_power(p), f"CKSM needs a prime power p, got {p}")
    _need(t >= 1 and m >= 1 and m + t <= k, f"CKSM needs m + t <= k, got {(k, t, m)}")

    def gb(n, r):
        return gaussian_binomial(n, r, p)

    if variant == 1:
        K = Fraction(p ** (t * (t - 1) // 2), factorial(t)) * prod(gb(k - i, 1) for i in range(t))
        mem = 1 - p ** (m * t) * prod(Fraction(gb(k - t - i, 1), gb(k - i, 1)) for i in range(m))
        F = Fraction(p ** (m * (m - 1) // 2), factorial(m)) * prod(gb(k - i, 1) for i in range(m))
        R = (Fraction(factorial(m) * p ** (m * t), factorial(m + t)) * p ** (t * (t - 1) // 2)
             * prod(gb(k - m - i, 1) for i in range(t)))
    elif variant == 2:
        K = gb(k, t)
        mem = 1 - Fraction(gb(k - t, m), gb(k, m + t))
        F = gb(k, m + t)
        R = Fraction(gb(k, m), gb(k, m + t))
    else:
        raise InvalidRange(f"CKSM variant must be 1 or 2, got {variant}")
    if Fraction(K).denominator != 1 or Fraction(F).denominator != 1:
        raise InvalidRange(f"CKSM{(p, k, t, m)} gives non-integral K or F")
    return SchemeParams(K=int(K), memory_ratio=mem, F=int(F), R=R,
                        name="CKSM", args=(p, k, t, m, variant))


_CALCULATORS = {
    "a": scheme_a_params,
    "b": scheme_b_params,
    "c": scheme_c_params,
    "mn": mn_params,
    "grouping": grouping_params,
    "wclc": wclc_params,
    "wcwc": wcwc_params,
    "ytcc": ytcc_params,
    "cksm": cksm_params,
}

SCHEME_NAMES = tuple(_CALCULATORS)


@dataclass(frozen=True)
class SchemeSpec:
    """A scheme name plus its integer parameters, e.g. ``SchemeSpec("b", (4, 2, 4, 2))``.

    Argument order per name: a/b/wclc ``(m, t, q, z)``; c ``(m, t, q)``;
    mn ``(K, t)``; grouping ``(K, q, z)``; wcwc ``(m, q, z)``;
    ytcc ``(H, a, b, r)``; cksm ``(p, k, t, m[, variant])``.
    """

    name: str
    args: tuple[int, ...]

    def __post_init__(self):
        name = self.name.lower()
        if name not in _CALCULATORS:
            raise InvalidRange(f"unknown scheme {self.name!r}; choose from {', '.join(SCHEME_NAMES)}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "args", tuple(int(a) for a in self.args))


def baseline_params(spec: SchemeSpec) -> SchemeParams:
    try:
        return _CALCULATORS[spec.name](*spec.args)
    except TypeError as exc:
        raise InvalidRange(f"wrong number of arguments for {spec.name}: {spec.args}") from exc


scheme_params = baseline_params


def scheme_build(spec: SchemeSpec, max_cells: int | None = DEFAULT_CELL_BUDGET) -> PdaArray:
    """Materialise Scheme A, B or C and check it against its closed form."""
    if spec.name == "a":
        m, t, q, z = spec.args
        base = transform_to_base(mn_pda(q, z))
    elif spec.name == "b":
        m, t, q, z = spec.args
        base = transform_to_base(transpose_pda(mn_pda(q, z)))
    elif spec.name == "c":
        m, t, q = spec.args
        base = g2_base_pda(q)
    else:
        raise InvalidRange(f"only schemes a, b, c can be built, got {spec.name!r}")
    expected = baseline_params(spec)
    array = construct_pmt(base, m, t, max_cells=max_cells)
    got = verify_pda(array)
    if (got.K, got.F, Fraction(got.Z, got.F), Fraction(got.S, got.F)) != (
            expected.K, expected.F, expected.memory_ratio, expected.R):
        raise VerificationFailed(f"built {spec} has {got}, closed form says {expected}")
    return array


@dataclass(frozen=True)
class RatioRow:
    scheme: str
    ours: SchemeParams
    wclc: SchemeParams
    f_ratio: Fraction
    r_ratio: Fraction


def compare_ratios(m: int, t: int, q: int, z: int) -> list[RatioRow]:
    """Subpacketization and load ratios of Schemes A, B, C against WCLC at
    the same number of users and memory ratio.

    Scheme B is matched with WCLC at ``q' = C(q, z)``, ``z' = C(q-1, z-1)``
    and Scheme C (which ignores ``z``) at ``q' = q^2``, ``z' = q``.
    """
    pairs = [
        ("A", scheme_a_params(m, t, q, z), wclc_params(m, t, q, z)),
        ("B", scheme_b_params(m, t, q, z),
         wclc_params(m, t, comb(q, z), comb(q - 1, z - 1))),
        ("C", scheme_c_params(m, t, q), wclc_params(m, t, q * q, q)),
    ]
    rows = []
    for name, ours, ref in pairs:
        if (ours.K, ours.memory_ratio) != (ref.K, ref.memory_ratio):
            raise InvalidRange(f"Scheme {name} and WCLC are not matched: {ours} vs {ref}")
        rows.append(RatioRow(name, ours, ref, Fraction(ours.F, ref.F), ours.R / ref.R))
    return rows


def virtual_user_m(K: int, t: int, K1: int) -> int:
    """Smallest ``m >= t`` with ``C(m, t) K1^t >= K``; surplus users are virtual."""
    _need(K >= 1 and t >= 1 and K1 >= 1, f"bad arguments {(K, t, K1)}")
    m = t
    while comb(m, t) * K1 ** t < K:
        m += 1
    return m
