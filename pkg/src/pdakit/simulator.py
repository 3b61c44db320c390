"""Run the coded caching protocol described by a PDA on synthetic files.

Placement caches packet ``j`` of every file at user ``k`` iff cell ``(j, k)``
is a star.  Delivery broadcasts, for every symbol ``s``, the XOR of the
packets ``W[d_k, j]`` over the cells ``(j, k)`` holding ``s``.  Each user
recovers its missing packets by cancelling the other, cached, terms.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import STAR, PdaArray
from .errors import BadDemand, BudgetExceeded, DecodeFailure, DimensionMismatch

DEFAULT_PACKET_BYTES = 64
DEFAULT_DEMAND_BUDGET = 10**5


@dataclass(frozen=True, eq=False)
class FileLibrary:
    """``N`` files of ``F`` packets each, filled from a seeded generator."""

    N: int
    F: int
    packet_bytes: int = DEFAULT_PACKET_BYTES
    seed: int = 0
    contents: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1 or self.F < 1 or self.packet_bytes < 1:
            raise ValueError(f"need N, F, packet_bytes >= 1, got {self.N}, {self.F}, {self.packet_bytes}")
        rng = np.random.default_rng(self.seed)
        data = rng.integers(0, 256, size=(self.N, self.F, self.packet_bytes), dtype=np.uint8)
        data.setflags(write=False)
        object.__setattr__(self, "contents", data)

    def packet(self, n: int, j: int) -> np.ndarray:
        """Packet ``j`` of file ``n`` (both 1-based)."""
        return self.contents[n - 1, j - 1]


@dataclass(frozen=True)
class UserCache:
    user: int
    cached: dict  # (file, packet) -> bytes

    @property
    def packets(self) -> int:
        return len(self.cached)


@dataclass(frozen=True)
class Message:
    symbol: int
    cells: tuple[tuple[int, int], ...]
    payload: bytes

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.payload).hexdigest()


@dataclass(frozen=True)
class DeliveryTranscript:
    demand: tuple[int, ...]
    messages: tuple[Message, ...]
    decode_results: tuple[bool, ...]
    load: Fraction
    measured_load: Fraction
    seed: int

    @property
    def all_decoded(self) -> bool:
        return all(self.decode_results)

    def to_jsonl(self) -> str:
        """One JSON record per broadcast message, in symbol order."""
        return "".join(
            json.dumps({"symbol": msg.symbol, "cells": [list(c) for c in msg.cells],
                        "digest": msg.digest}, separators=(",", ":")) + "\n"
            for msg in self.messages)


def place(pda: PdaArray, library: FileLibrary) -> list[UserCache]:
    if library.F != pda.F:
        raise DimensionMismatch(f"library has F={library.F}, PDA has F={pda.F}")
    caches = []
    for k in range(pda.K):
        rows = np.flatnonzero(pda.grid[:, k] == STAR) + 1
        cached = {(n, int(j)): library.packet(n, int(j)).tobytes()
                  for n in range(1, library.N + 1) for j in rows}
        caches.append(UserCache(user=k + 1, cached=cached))
    return caches


def _cells_by_symbol(pda: PdaArray):
    grid = pda.grid
    j, k = np.nonzero(grid)
    sym = grid[j, k]
    order = np.argsort(sym, kind="stable")
    j, k, sym = j[order] + 1, k[order] + 1, sym[order]
    bounds = np.flatnonzero(np.diff(sym)) + 1
    return [tuple(zip(map(int, jj), map(int, kk)))
            for jj, kk in zip(np.split(j, bounds), np.split(k, bounds))]


def _xor(chunks: Iterable[np.ndarray], size: int) -> np.ndarray:
    acc = np.zeros(size, dtype=np.uint8)
    for c in chunks:
        acc ^= c
    return acc


def deliver(pda: PdaArray, library: FileLibrary, caches: Sequence[UserCache],
            demand: Sequence[int], _groups=None) -> DeliveryTranscript:
    """Broadcast one message per symbol and let every user decode.

    Raises ``DecodeFailure`` if some user lacks a term it needs to cancel or
    ends up with a wrong packet.
    """
    demand = tuple(int(d) for d in demand)
    if len(demand) != pda.K or not all(1 <= d <= library.N for d in demand):
        raise BadDemand(f"demand must lie in [1:{library.N}]^{pda.K}, got {demand}")
    if library.F != pda.F:
        raise DimensionMismatch(f"library has F={library.F}, PDA has F={pda.F}")
    groups = _groups if _groups is not None else _cells_by_symbol(pda)
    W = library.contents
    size = library.packet_bytes

    messages = []
    for s, cells in enumerate(groups, 1):
        payload = _xor((W[demand[k - 1] - 1, j - 1] for j, k in cells), size)
        messages.append(Message(s, cells, payload.tobytes()))

    decoded = [set() for _ in range(pda.K)]
    for msg in messages:
        coded = np.frombuffer(msg.payload, dtype=np.uint8)
        for j, k in msg.cells:
            cache = caches[k - 1].cached
            rest = []
            for j2, k2 in msg.cells:
                if (j2, k2) == (j, k):
                    continue
                key = (demand[k2 - 1], j2)
                if key not in cache:
                    raise DecodeFailure(k, j)
                rest.append(np.frombuffer(cache[key], dtype=np.uint8))
            packet = coded ^ _xor(rest, size)
            if not np.array_equal(packet, W[demand[k - 1] - 1, j - 1]):
                raise DecodeFailure(k, j)
            decoded[k - 1].add(j)

    # a user succeeds when cache plus decoded packets cover its whole file
    ok = []
    for k in range(pda.K):
        cached = set((np.flatnonzero(pda.grid[:, k] == STAR) + 1).tolist())
        ok.append(not (cached & decoded[k]) and len(cached | decoded[k]) == pda.F)

    sent = sum(len(m.payload) for m in messages)
    return DeliveryTranscript(
        demand=demand,
        messages=tuple(messages),
        decode_results=tuple(ok),
        load=Fraction(len(groups), pda.F),
        measured_load=Fraction(sent, pda.F * size),
        seed=library.seed,
    )


@dataclass(frozen=True)
class SweepSummary:
    demands: int
    all_decoded: bool
    max_load: Fraction
    mean_load: Fraction
    failures: tuple[tuple[int, ...], ...] = ()


def sweep_demands(pda: PdaArray, library: FileLibrary, mode: str = "exhaustive",
                  count: int = 100, seed: int = 0,
                  budget: int = DEFAULT_DEMAND_BUDGET) -> SweepSummary:
    """Deliver over every demand vector (``mode="exhaustive"``) or ``count``
    seeded random ones (``mode="sampled"``)."""
    N, K = library.N, pda.K
    if mode == "exhaustive":
        total = N ** K
        if total > budget:
            raise BudgetExceeded("exhaustive demand count", total, budget)
        demands = itertools.product(range(1, N + 1), repeat=K)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        demands = (tuple(int(x) for x in rng.integers(1, N + 1, size=K)) for _ in range(count))
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")

    caches = place(pda, library)
    groups = _cells_by_symbol(pda)
    n = 0
    loads = []
    failures = []
    for d in demands:
        n += 1
        try:
            tr = deliver(pda, library, caches, d, _groups=groups)
        except DecodeFailure:
            failures.append(tuple(d))
            continue
        if not tr.all_decoded:
            failures.append(tuple(d))
        loads.append(tr.measured_load)
    return SweepSummary(
        demands=n,
        all_decoded=not failures,
        max_load=max(loads) if loads else Fraction(0),
        mean_load=sum(loads, Fraction(0)) / len(loads) if loads else Fraction(0),
        failures=tuple(failures),
    )
