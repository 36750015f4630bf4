import math

import numpy as np
import pytest

from molphase.cyclotomic import Cyclotomic
from molphase.groups import (
    GroupError,
    _table_fingerprint,
    check_group_axioms,
    check_homomorphism,
    get_group,
    identify,
    inner_product,
    quotient_table,
    subgroup_quotient,
    tensor_decompose,
)

FINITE = ["C1", "C2", "C3", "C4", "C6", "D2", "D3", "D4", "D6", "T", "O", "I"]


@pytest.mark.parametrize("name", FINITE)
def test_axioms_and_irrep_counting(name):
    G = get_group(name)
    assert check_group_axioms(G)
    assert sum(ir.dim ** 2 for ir in G.irreps) == G.order
    assert len(G.classes) == len(G.irreps)


@pytest.mark.parametrize("name", FINITE)
def test_exact_homomorphism_and_orthogonality(name):
    G = get_group(name)
    for ir in G.irreps:
        assert check_homomorphism(ir)
    for a in G.irreps:
        for b in G.irreps:
            ip = inner_product(a.characters, b.characters, G)
            assert ip == (1 if a.label == b.label else 0)


@pytest.mark.parametrize("name", ["D3", "T", "O", "I"])
def test_float_matrices_are_unitary(name):
    G = get_group(name)
    for ir in G.irreps:
        F = ir.fmats
        eye = np.eye(ir.dim)
        assert np.abs(np.einsum("gji,gjk->gik", F.conj(), F) - eye).max() < 1e-12


def test_orders_and_labels():
    assert [get_group(n).order for n in ("C5", "D5", "T", "O", "I")] == [5, 10, 12, 24, 60]
    assert [ir.label for ir in get_group("O").irreps] == ["a1", "a2", "e", "t1", "t2"]
    assert [ir.label for ir in get_group("I").irreps] == ["a", "t1", "t2", "g", "h"]
    assert get_group("T").irrep("t").dim == 3


def test_icosahedral_t1_squared():
    I = get_group("I")
    assert tensor_decompose(I.irrep("t1"), I.irrep("t1")) == {"a": 1, "t1": 1, "h": 1}


def test_identify_catalog():
    for name in ("C6", "D3", "D4", "T", "O", "I"):
        assert identify(_table_fingerprint(get_group(name).table.tolist())) == name


def test_quotient_by_kernel():
    D6 = get_group("D6")
    assert subgroup_quotient(D6, D6.irrep("e2").kernel()) == "D3"
    assert subgroup_quotient(D6, D6.irrep("e1").kernel()) == "D6"
    T = get_group("T")
    q, _, _ = quotient_table(T.table.tolist(), list(T.inverse), T.irrep("1e").kernel())
    assert len(q) == 3


def test_character_values_exact():
    C3 = get_group("C3")
    r = C3.index_of(__import__("molphase").Rotation.from_axis_angle((0, 0, 1), 2 * math.pi / 3))
    assert C3.irrep("1e").exact(r)[0][0] == Cyclotomic.root(3)


def test_bad_names():
    for bad in ("Q3", "C0", "Dx", "", "T2"):
        with pytest.raises((GroupError, ValueError)):
            get_group(bad)
    with pytest.raises((GroupError, KeyError)):
        get_group("O").irrep("t3")


def test_continuous_groups():
    cinf, dinf = get_group("Cinf"), get_group("Dinf")
    assert cinf.omegas("a", 3) == [0]
    assert cinf.omegas("l-2", 3) == [-2]
    assert cinf.omegas("l4", 3) == []
    assert dinf.omegas("a1", 2) == [0] and dinf.omegas("a1", 3) == []
    assert dinf.omegas("a2", 3) == [0]
    assert dinf.omegas("e2", 3) == [-2, 2]
    assert dinf.irrep_dim("e1") == 2
    assert dinf.monodromy("a2") == "C2"
