import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from molphase.groups import get_group
from molphase.isotypic import (
    adapted_basis,
    branching_table,
    check_adapted,
    multiplicity,
    rotational_states,
)

FINITE = ["C1", "C2", "C3", "C4", "C5", "D2", "D3", "D4", "D5", "D6", "T", "O", "I"]


@pytest.mark.parametrize("name", FINITE)
def test_dimension_sum_rule(name):
    G = get_group(name)
    for l in range(41):
        assert sum(ir.dim * multiplicity(l, ir) for ir in G.irreps) == 2 * l + 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["C3", "D3", "D4", "T", "O", "I"]), st.integers(0, 14))
def test_adapted_basis_block_identity(name, l):
    G = get_group(name)
    assert check_adapted(adapted_basis(l, G), G) < 5e-14 * max(1, l)


@pytest.mark.parametrize("name", ["Cinf", "Dinf"])
@pytest.mark.parametrize("l", [0, 3, 6])
def test_continuous_dimension_rule(name, l):
    G = get_group(name)
    B = adapted_basis(l, G)
    assert sum(b.dim * b.mult for b in B.blocks) == 2 * l + 1
    assert np.allclose(B.U.conj().T @ B.U, np.eye(2 * l + 1))


def test_c3_trivial_block_at_l4():
    C3 = get_group("C3")
    cols = adapted_basis(4, C3).columns("a")[:, 0, :]
    omegas = [int(np.argmax(np.abs(c))) - 4 for c in cols.T]
    assert omegas == [-3, 0, 3]


@pytest.mark.parametrize("l", range(0, 13))
def test_c3_second_irrep_follows_closed_form(l):
    C3 = get_group("C3")
    m = multiplicity(l, "2e", C3)
    assert m == l - l // 3
    cols = adapted_basis(l, C3).columns("2e")[:, 0, :]
    omegas = [int(np.argmax(np.abs(c))) - l for c in cols.T]
    assert omegas == [3 * k - 1 - 3 * ((l + 2) // 3) for k in range(1, m + 1)]


def test_icosahedral_trivial_support():
    assert branching_table(get_group("I"), "a", 20).support == [0, 6, 10, 12, 15, 16, 18, 20]


def test_octahedral_low_l():
    O = get_group("O")
    assert {ir.label: multiplicity(4, ir) for ir in O.irreps} == {"a1": 1, "a2": 0, "e": 1, "t1": 1, "t2": 1}


def test_rotational_states_index():
    rs = rotational_states(get_group("D3"), "e", 3)
    assert rs.support == [1, 2, 3]
    assert len(rs.indices()) == sum((2 * l + 1) * rs.mult[l] for l in range(4))


def test_negative_l():
    with pytest.raises(ValueError):
        multiplicity(-1, "a", get_group("C2"))
