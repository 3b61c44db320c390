import json
from fractions import Fraction

import numpy as np
import pytest

from pdakit import PdaArray, FileLibrary, construct_pmt, deliver, mn_pda, place, sweep_demands
from pdakit.errors import BadDemand, BudgetExceeded, DecodeFailure, DimensionMismatch


def test_library_is_seeded():
    a, b = FileLibrary(3, 4, 16, seed=5), FileLibrary(3, 4, 16, seed=5)
    assert np.array_equal(a.contents, b.contents)
    assert not np.array_equal(a.contents, FileLibrary(3, 4, 16, seed=6).contents)
    assert a.packet(1, 1).shape == (16,)


def test_placement_follows_stars(p4):
    lib = FileLibrary(2, 4)
    caches = place(p4, lib)
    assert sorted(caches[0].cached) == [(1, 1), (1, 4), (2, 1), (2, 4)]
    assert all(c.packets == 2 * 2 for c in caches)


def test_single_delivery(p4):
    lib = FileLibrary(4, 4, seed=1)
    tr = deliver(p4, lib, place(p4, lib), [1, 2, 3, 4])
    assert tr.all_decoded and len(tr.messages) == 4
    assert tr.load == 1 and tr.measured_load == 1
    rec = [json.loads(x) for x in tr.to_jsonl().splitlines()]
    assert [r["symbol"] for r in rec] == [1, 2, 3, 4]
    assert rec[0]["cells"] == [[1, 4], [3, 1]]


def test_payload_is_xor(p4):
    lib = FileLibrary(2, 4, seed=2)
    tr = deliver(p4, lib, place(p4, lib), [1, 2, 1, 2])
    m = tr.messages[0]  # symbol 1 at (1,4) for user 4 and (3,1) for user 1
    want = lib.packet(2, 1) ^ lib.packet(1, 3)
    assert m.payload == want.tobytes()


def test_exhaustive_p4(p4):
    s = sweep_demands(p4, FileLibrary(4, 4, seed=0))
    assert s.demands == 256 and s.all_decoded and s.max_load == 1 == s.mean_load


def test_exhaustive_mn42():
    a = mn_pda(4, 2)
    s = sweep_demands(a, FileLibrary(4, a.F, seed=0))
    assert s.demands == 256 and s.all_decoded
    assert s.max_load == Fraction(4, 6)


def test_sampled_p32(base4):
    a = construct_pmt(base4, 3, 2)
    s = sweep_demands(a, FileLibrary(48, a.F, packet_bytes=8, seed=0), mode="sampled",
                      count=10, seed=3)
    assert s.demands == 10 and s.all_decoded and s.max_load == 1


def test_broken_pda_fails_decoding():
    # symbol 1 shares a row: the other user never caches the needed term
    a = PdaArray.from_rows([[1, 1], ["*", "*"]])
    lib = FileLibrary(2, 2)
    with pytest.raises(DecodeFailure):
        deliver(a, lib, place(a, lib), [1, 2])
    s = sweep_demands(a, lib)
    assert not s.all_decoded and len(s.failures) == 4


def test_errors(p4):
    lib = FileLibrary(2, 4)
    with pytest.raises(BadDemand):
        deliver(p4, lib, place(p4, lib), [1, 2, 3])
    with pytest.raises(BadDemand):
        deliver(p4, lib, place(p4, lib), [1, 2, 3, 1])
    with pytest.raises(DimensionMismatch):
        place(p4, FileLibrary(2, 5))
    with pytest.raises(BudgetExceeded):
        sweep_demands(p4, lib, budget=10)
    with pytest.raises(ValueError):
        sweep_demands(p4, lib, mode="bogus")
