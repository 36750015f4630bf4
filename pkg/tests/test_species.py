from fractions import Fraction

import numpy as np
import pytest

from molphase.groups import get_group
from molphase.species import (
    PRESETS,
    entangled_basis_state,
    entangled_fraction,
    get_preset,
    schmidt_coefficients,
    species_for_molecule,
    total_nuclear_dimension,
)

SIGMA = {
    "H2O": "b", "BF3": "a2", "CH4": "a", "XeF4": "b2", "C6H6": "b1",
    "C7H7+": "a2", "C8H8-2": "b2", "SF6": "a2", "H2": "a2", "D2": "a1",
}


@pytest.mark.parametrize("name,sigma", sorted(SIGMA.items()))
def test_spin_statistics_irrep(name, sigma):
    assert species_for_molecule(name).sigma == sigma


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_weights_account_for_every_nuclear_state(name):
    preset = get_preset(name)
    rep = species_for_molecule(name)
    G = get_group(rep.group)
    dims = {}
    if hasattr(G, "irreps"):
        dims = {ir.label: ir.dim for ir in G.irreps}
    total = sum(dims.get(k, 1) * v for k, v in rep.decomposition.items())
    assert total == total_nuclear_dimension(preset)


def test_water_species():
    rep = species_for_molecule("H2O")
    assert [(s.display, s.nuc, s.weight) for s in rep.species] == [("a*", "b", 1), ("b*", "a", 3)]


def test_bf3_species_and_missing_pair():
    rep = species_for_molecule("BF3")
    assert [(s.display, s.weight, s.d) for s in rep.species] == [("a2*", 4, 1), ("e*", 2, 2)]
    assert rep.missing == [{"rot": "a1", "nuc": "a2"}]
    assert rep.spectator_factor == 4
    v = rep.get("e*").coupling
    assert np.allclose(v, [0, 2 ** -0.5, -(2 ** -0.5), 0], atol=1e-12)


def test_c60_only_trivial_species():
    rep = species_for_molecule("C60")
    assert [s.display for s in rep.species] == ["a"]
    assert {m["rot"] for m in rep.missing} == {"t1", "t2", "g", "h"}


def test_13c60_weights_exact():
    rep = species_for_molecule("13C60")
    w = {s.rot: s.weight for s in rep.species}
    assert w == {
        "a": 19215358678900736,
        "t1": 57646074961907712,
        "t2": 57646074961907712,
        "g": 76861433640804352,
        "h": 96076792318656512,
    }
    assert sum(s.d * s.weight for s in rep.species) == 2 ** 60


@pytest.mark.parametrize("name", ["CH4", "BF3", "SF6", "13C60", "C7H7+"])
def test_coupling_state_is_maximally_entangled(name):
    for s in species_for_molecule(name).species:
        sv = schmidt_coefficients(s.coupling, s.d)
        assert np.allclose(sv, np.full(s.d, s.d ** -0.5), atol=1e-10)


def test_exact_limits():
    rep = species_for_molecule("CH4")
    assert entangled_fraction(get_group("T"), rep.species) == Fraction(9, 16)
    rep = species_for_molecule("BF3")
    assert entangled_fraction(get_group("D3"), rep.species) == Fraction(1, 2)


@pytest.mark.parametrize("name,values", [
    ("BF3", (0.429, 0.444, 0.491)),
    ("C6H6", (0.518, 0.567, 0.611)),
])
def test_finite_cutoff_fractions(name, values):
    rep = species_for_molecule(name)
    G = get_group(rep.group)
    for L, v in zip((2, 4, 8), values):
        assert entangled_fraction(G, rep.species, cutoff=L) == pytest.approx(v, abs=1e-3)


def test_fraction_tends_to_limit():
    rep = species_for_molecule("BF3")
    G = get_group("D3")
    assert entangled_fraction(G, rep.species, cutoff=60) == pytest.approx(0.5, abs=0.01)


def test_basis_state_has_schmidt_rank_d():
    s = species_for_molecule("SF6").get("t1*")
    coeffs = entangled_basis_state(s, 3, 1, 1, 1)
    M = np.zeros((3, 3), dtype=complex)
    for ((_, _, _, a), (b, _)), c in coeffs.items():
        M[a - 1, b - 1] = c
    assert np.linalg.matrix_rank(M, tol=1e-10) == 3
    with pytest.raises(IndexError):
        entangled_basis_state(s, 1, 2, 1, 1)
    with pytest.raises(IndexError):
        entangled_basis_state(s, 1, 0, 1, s.weight + 1)


def test_unknown_molecule():
    with pytest.raises(KeyError):
        get_preset("unobtainium")
