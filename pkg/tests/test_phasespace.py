import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import sph_harm_y

from molphase.groups import get_group
from molphase.phasespace import (
    asymmetric_coefficients,
    canonicalize,
    fourier_roundtrip,
    gram_overlap,
    harmonic,
    position_vector,
    zak_state,
    zak_state_adapted,
)
from molphase.rotation import Rotation, wigner_matrix

quats = st.tuples(*[st.floats(-1, 1, allow_nan=False) for _ in range(4)]).filter(
    lambda q: sum(x * x for x in q) > 1e-3)


def random_rotations(n, seed):
    rng = np.random.default_rng(seed)
    return [Rotation(*q) for q in rng.normal(size=(n, 4))]


def test_identity_is_its_own_representative():
    for name in ("C2", "D3", "O", "I"):
        p = canonicalize(Rotation.identity(), get_group(name))
        assert p.s.isclose(Rotation.identity())


def test_water_euler_chart():
    C2 = get_group("C2")
    p = canonicalize(Rotation.from_euler(0.3, 0.9, 4.0), C2, chart="euler")
    a, b, c = p.s.euler()
    assert (a, b) == pytest.approx((0.3, 0.9))
    assert c == pytest.approx(4.0 - math.pi)
    q = canonicalize(Rotation.from_euler(0.3, 0.9, 1.0), C2, chart="euler")
    assert q.s.euler()[2] == pytest.approx(1.0) and q.g == 0
    with pytest.raises(ValueError):
        canonicalize(Rotation.identity(), get_group("D3"), chart="euler")


@pytest.mark.parametrize("name", ["C3", "D4", "T", "O"])
def test_coset_invariance(name):
    G = get_group(name)
    for r in random_rotations(200, 1):
        s = canonicalize(r, G).s
        for h in G.elements[:6]:
            assert canonicalize(r * h, G).s.isclose(s, tol=1e-9)


@pytest.mark.parametrize("name", ["C2", "D3", "I"])
def test_partition_property(name):
    G = get_group(name)
    for r in random_rotations(500, 2):
        p = canonicalize(r, G)
        assert np.abs((p.s * G.elements[p.g]).matrix - r.matrix).max() < 1e-9
        hits = [g for g, h in enumerate(G.elements)
                if np.abs((p.s * h).matrix - r.matrix).max() < 1e-9]
        assert hits == [p.g]


@settings(max_examples=20, deadline=None)
@given(quats, st.integers(0, 4))
def test_trivial_group_harmonic_is_wigner(q, l):
    C1 = get_group("C1")
    s = Rotation(*q)
    D = wigner_matrix(l, s)
    for m in range(-l, l + 1):
        for k in range(1, 2 * l + 2):
            ref = math.sqrt((2 * l + 1) / (8 * math.pi ** 2)) * D[m + l, k - 1]
            assert abs(harmonic(C1, "a", l, m, k, s, 1) - ref) < 1e-12


@pytest.mark.parametrize("l", [0, 1, 3, 6])
def test_linear_rotor_harmonics_are_spherical(l):
    alpha, beta = 0.7, 1.2
    s = Rotation.from_euler(alpha, beta, 0.0)
    cinf, dinf = get_group("Cinf"), get_group("Dinf")
    for m in range(-l, l + 1):
        y = np.conj(sph_harm_y(l, m, beta, alpha)) / math.sqrt(2 * math.pi)
        assert abs(harmonic(cinf, "a", l, m, 1, s, 1) - y) < 1e-12
        if l % 2 == 0:
            assert abs(harmonic(dinf, "a1", l, m, 1, s, 1) - math.sqrt(2) * y) < 1e-12
    if l % 2:
        with pytest.raises(ValueError):
            harmonic(dinf, "a1", l, 0, 1, s, 1)


@pytest.mark.parametrize("name,irrep", [("C2", "b"), ("D3", "e"), ("T", "t"), ("O", "e")])
def test_zak_routes_agree(name, irrep):
    G = get_group(name)
    s = random_rotations(1, 3)[0]
    d = G.irrep(irrep).dim
    for mu in range(1, d + 1):
        for nu in range(1, d + 1):
            a = zak_state(G, s, irrep, mu, nu, 8)
            b = zak_state_adapted(G, s, irrep, mu, nu, 8)
            assert np.abs(a - b).max() < 1e-9


def test_water_coset_state():
    C2 = get_group("C2")
    s = Rotation.from_euler(0.2, 1.0, 0.5)
    flip = Rotation.from_euler(0.2, 1.0, 0.5 + math.pi)
    ref = (asymmetric_coefficients(s, 6) - asymmetric_coefficients(flip, 6)) / math.sqrt(2)
    assert np.abs(zak_state(C2, s, "b", 1, 1, 6) - ref).max() < 1e-12


def test_zak_orthogonality():
    G = get_group("D3")
    s = random_rotations(1, 4)[0]
    labels = [("a1", 1, 1), ("a2", 1, 1)] + [("e", m, n) for m in (1, 2) for n in (1, 2)]
    vecs = [zak_state_adapted(G, s, *lab, 20) for lab in labels]
    for i in range(len(vecs)):
        for j in range(i):
            ov = abs(np.vdot(vecs[i], vecs[j]))
            assert ov < 1e-8 * math.sqrt(np.vdot(vecs[i], vecs[i]).real * np.vdot(vecs[j], vecs[j]).real)


def test_molecule_based_action_on_zak_labels():
    # s -> s·h relabels the coset sum: |s h, μν⟩ = Σ_σ Γ^{μσ}(h⁻¹) |s, σν⟩
    G = get_group("D3")
    ir = G.irrep("e")
    s = random_rotations(1, 5)[0]
    lmax = 6
    base = {(m, n): zak_state(G, s, "e", m, n, lmax) for m in (1, 2) for n in (1, 2)}
    for h in range(G.order):
        hi = G.inverse[h]
        for mu in (1, 2):
            for nu in (1, 2):
                lhs = zak_state(G, s * G.elements[h], "e", mu, nu, lmax)
                rhs = sum(ir.fmats[hi, mu - 1, sig - 1] * base[(sig, nu)] for sig in (1, 2))
                assert np.abs(lhs - rhs).max() < 1e-8


@pytest.mark.parametrize("name,species,lmax,tol", [
    ("C1", "a", 4, 1e-10), ("D3", "a1", 8, 1e-8), ("D3", "e", 8, 1e-8), ("T", "t", 6, 1e-8),
])
def test_fourier_roundtrip(name, species, lmax, tol):
    assert fourier_roundtrip(get_group(name), species, lmax) < tol


def test_fourier_underspecified():
    with pytest.raises(ValueError):
        fourier_roundtrip(get_group("C2"), "a", 6, nbeta=5)


def test_fiber_orthogonality_and_norms():
    G = get_group("O")
    s = random_rotations(1, 6)[0]
    states = [position_vector(G, "t1", s, mu, 40, 0.1) for mu in (1, 2, 3)]
    n = [st_.norm2() for st_ in states]
    assert max(n) - min(n) < 1e-10 * max(n)
    assert abs(gram_overlap(states[0], states[1])) / n[0] < 1e-6
    self_ov = gram_overlap(states[2], states[2])
    assert self_ov.real > 0 and abs(self_ov.imag) < 1e-12


@settings(max_examples=10, deadline=None)
@given(quats, st.floats(0.01, 1.0))
def test_norm_independent_of_fiber_index(q, delta):
    G = get_group("D4")
    s = Rotation(*q)
    a = position_vector(G, "e", s, 1, 16, delta).norm2()
    b = position_vector(G, "e", s, 2, 16, delta).norm2()
    assert abs(a - b) < 1e-10 * a


def test_linear_rotor_antipodes_identified():
    G = get_group("Dinf")
    a = position_vector(G, "a1", Rotation.from_euler(0.4, 1.1, 0), 1, 20, 0.1)
    b = position_vector(G, "a1", Rotation.from_euler(0.4 + math.pi, math.pi - 1.1, 0), 1, 20, 0.1)
    assert abs(gram_overlap(a, b) - a.norm2()) < 1e-12 * a.norm2()


def test_overlap_validation():
    G = get_group("D3")
    s = Rotation.identity()
    a = position_vector(G, "e", s, 1, 10, 0.1)
    with pytest.raises(ValueError):
        gram_overlap(a, position_vector(G, "a2", s, 1, 10, 0.1))
    with pytest.raises(ValueError):
        gram_overlap(a, position_vector(G, "e", s, 1, 12, 0.1))
    with pytest.raises(IndexError):
        position_vector(G, "e", s, 3, 10)
    with pytest.raises(ValueError):
        position_vector(G, "e", s, 1, 10, -0.1)
