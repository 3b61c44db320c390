import numpy as np
import pytest

from pdakit import (
    STAR,
    PdaArray,
    PdaParams,
    find_star_rows,
    is_isomorphic,
    mn_pda,
    relabel_symbols,
    verify_base_pda,
    verify_pda,
)
from pdakit.errors import (
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

from conftest import P4_ROWS, shuffled


def test_from_rows_roundtrip(p4):
    assert p4.to_rows() == P4_ROWS
    assert p4.shape == (4, 4)
    assert p4.cell(1, 3) == 3 and p4.cell(1, 1) == STAR


def test_grid_is_read_only(p4):
    with pytest.raises(ValueError):
        p4.grid[0, 0] = 5


def test_from_rows_rejects_nonpositive():
    with pytest.raises(InvalidRange):
        PdaArray.from_rows([["*", 0]])


def test_verify_p4(p4):
    p = verify_pda(p4)
    assert p.as_tuple() == (4, 4, 2, 4)
    assert p.regular_g == 2
    assert p.memory_ratio == 0.5 and p.load == 1


def test_verify_mn_q(mn_q):
    p = verify_pda(mn_q)
    assert p.as_tuple() == (2, 2, 1, 1) and p.regular_g == 2


def test_params_consistency():
    with pytest.raises(InvalidRange):
        PdaParams(K=4, F=4, Z=2, S=4, regular_g=3)
    with pytest.raises(InvalidRange):
        PdaParams(K=4, F=4, Z=5, S=4)


def test_irregular_pda_has_no_g():
    a = PdaArray.from_rows([[1, 2], [3, "*"], ["*", 1]])
    # symbol 1 at (1,1),(3,2): corners (1,2)=2 is not a star -> C3
    with pytest.raises(C3Violation):
        verify_pda(a)
    b = PdaArray.from_rows([["*", 1, 2], [1, "*", 3], [4, 5, "*"]])
    p = verify_pda(b)
    assert p.regular_g is None


@pytest.mark.parametrize("rows", [[], [[]]])
def test_empty(rows):
    with pytest.raises(EmptyArray):
        verify_pda(PdaArray(np.zeros((len(rows), 0), dtype=np.int64)))


def test_all_stars_is_empty():
    with pytest.raises(EmptyArray):
        verify_pda(PdaArray.from_rows([["*", "*"]]))


def test_c1_reports_first_bad_column():
    a = PdaArray.from_rows([["*", "*", 1], ["*", 1, "*"]])
    with pytest.raises(C1Violation) as e:
        verify_pda(a)
    assert (e.value.column, e.value.count, e.value.expected) == (2, 1, 2)


def test_c2_missing_symbol():
    a = PdaArray.from_rows([["*", 1], [3, "*"]])
    with pytest.raises(C2Violation) as e:
        verify_pda(a)
    assert e.value.missing == 2


def test_c3_same_row():
    a = PdaArray.from_rows([[1, 1]])
    with pytest.raises(C3Violation) as e:
        verify_pda(a)
    assert e.value.symbol == 1
    assert e.value.positions == ((1, 1), (1, 2))


def test_c3_corner_not_star():
    a = PdaArray.from_rows([["*", 1], [1, 2], [2, "*"]])
    # symbol 1 at (1,2),(2,1): corners (1,1)=*, (2,2)=2 -> violation
    with pytest.raises(C3Violation) as e:
        verify_pda(a)
    assert e.value.symbol == 1
    assert set(e.value.positions) == {(1, 2), (2, 1)}


def test_c3_smallest_symbol_reported():
    a = PdaArray.from_rows([[1, 1, 2, 2]])
    with pytest.raises(C3Violation) as e:
        verify_pda(a)
    assert e.value.symbol == 1


def test_star_rows_p4(p4):
    assert [find_star_rows(p4, s) for s in range(1, 5)] == [{4}, {1}, {2}, {3}]
    with pytest.raises(UnknownSymbol):
        find_star_rows(p4, 9)


def test_base_p4_phi(base4):
    assert dict(base4.phi) == {1: 4, 2: 1, 3: 2, 4: 3}
    assert base4.partition == ((2,), (3,), (4,), (1,))
    assert (base4.sub_rows, base4.block_size) == (4, 1)


def test_mn_q_is_not_base(mn_q):
    with pytest.raises(NoValidPhi):
        verify_base_pda(mn_q, 1)


def test_lambda_must_divide(p4):
    with pytest.raises(NonDivisibleLambda):
        verify_base_pda(p4, 3)


def test_c4_violation_coordinates():
    # two copies of a 2-row block; second copy has a different star layout
    a = PdaArray.from_rows([["*", 1], [2, "*"], [3, "*"], ["*", 4]])
    with pytest.raises(C4Violation) as e:
        verify_base_pda(a, 2)
    assert (e.value.row, e.value.column) == (3, 1)


def test_c5_no_assignment():
    # MN(3,1): no symbol has a star row
    with pytest.raises(NoValidPhi):
        verify_base_pda(mn_pda(3, 1), 1)


def test_phi_respects_capacity():
    from pdakit import g2_base_pda
    b = g2_base_pda(3)
    grid = b.pda.grid
    for s, r in b.phi.items():
        rows = find_star_rows(b.pda, s)
        assert r in rows
    counts = np.bincount(list(b.phi.values()), minlength=b.sub_rows + 1)[1:]
    assert (counts == b.block_size).all()
    assert grid.shape == (6, 9)


def test_relabel_arbitrary_keys():
    a = relabel_symbols([["*", (2, 1)], [(1, 5), "*"]])
    assert a.to_rows() == [["*", 2], [1, "*"]]
    assert a.symbol_metadata == {1: (1, 5), 2: (2, 1)}


def test_relabel_composes_labels():
    a = relabel_symbols([["*", (2, 1)], [(1, 5), "*"]])
    b = relabel_symbols(a)
    assert b == a and b.symbol_metadata == a.symbol_metadata


def test_relabel_densifies_ints():
    a = PdaArray.from_rows([["*", 7], [3, "*"]])
    b = relabel_symbols(a)
    assert b.to_rows() == [["*", 2], [1, "*"]]
    assert b.label(2) == 7


def test_isomorphism_examples(p4, mn_q):
    assert is_isomorphic(p4, shuffled(p4, 3))
    assert not is_isomorphic(p4, mn_pda(4, 2))
    assert is_isomorphic(PdaArray.from_rows([["*"], [1]]), PdaArray.from_rows([[1], ["*"]]))
    assert is_isomorphic(mn_q, mn_q)


def test_isomorphism_cyclic_shift(p4):
    shifted = PdaArray(np.roll(p4.grid, 1, axis=0))
    relabelled = PdaArray(np.array([0, 3, 4, 1, 2])[shifted.grid])
    assert is_isomorphic(p4, relabelled)


def test_isomorphism_same_invariants_not_iso():
    # same shape, star counts and multiplicities, different structure
    a = PdaArray.from_rows([[1, 2, "*", "*"], ["*", "*", 1, 2]])
    b = PdaArray.from_rows([[1, 2, "*", "*"], ["*", "*", 2, 1]])
    assert is_isomorphic(a, b)
    c = PdaArray.from_rows([[1, 1, "*"], ["*", "*", 2]])
    d = PdaArray.from_rows([[1, 2, "*"], ["*", "*", 1]])
    assert not is_isomorphic(c, d)


def test_isomorphism_budget(p4):
    with pytest.raises(TooLarge):
        is_isomorphic(p4, p4, max_cells=3)
