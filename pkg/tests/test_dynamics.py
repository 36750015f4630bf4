import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm
from hypothesis import given, settings, strategies as st

from molphase.dynamics import (
    alignment,
    cos2_axis,
    cos2_matrix,
    equatorial_pi,
    evolve_revivals,
    impulsive_kick,
    interferometer_phase,
    planar_rotate,
    planar_state,
    rotate_state,
    rotor_evolve,
    rotor_state,
    stroboscopic_reorient,
    tilted_schedule,
)
from molphase.groups import get_group
from molphase.holonomy import monodromy_matrix
from molphase.rotation import Rotation


def test_planar_species_phases():
    para = planar_state({0: 1, 2: 0.5j, -4: 0.3})
    ortho = planar_state({1: 1, -3: 2})
    assert para.parity == "para" and ortho.parity == "ortho"
    assert planar_rotate(para, math.pi)[1] == 1
    assert planar_rotate(ortho, math.pi)[1] == -1
    with pytest.raises(ValueError):
        planar_state({0: 1, 1: 1})
    with pytest.raises(ValueError):
        planar_rotate({0: 1, 1: 1}, math.pi)
    with pytest.raises(ValueError):
        planar_state({2: 1}, parity="ortho")


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10))
def test_planar_rotation_is_unitary(phi):
    out, _ = planar_rotate({3: 1.0}, phi)
    assert abs(abs(out[3]) - 1) < 1e-14


def _random_state(lmax, seed, B=1.0):
    rng = np.random.default_rng(seed)
    terms = {(l, m): complex(*rng.normal(size=2)) for l in range(lmax + 1) for m in range(-l, l + 1)}
    return rotor_state(lmax, terms, B=B)


def test_exact_revival():
    s = _random_state(10, 0, B=1.7)
    assert np.array_equal(evolve_revivals(s, 1).coeffs, s.coeffs)
    assert np.array_equal(rotor_evolve(s, s.T_rev).coeffs, s.coeffs) or \
        np.abs(rotor_evolve(s, s.T_rev).coeffs - s.coeffs).max() < 1e-12


def test_fractional_revival_phases():
    one = rotor_state(3, {(1, 0): 1})
    assert evolve_revivals(one, Fraction(1, 2)).amplitude(1, 0) == 1
    two = rotor_state(3, {(2, 1): 1})
    assert evolve_revivals(two, Fraction(1, 4)).amplitude(2, 1) == pytest.approx(-1, abs=1e-15)


def test_evolution_preserves_norm():
    s = _random_state(8, 1)
    assert abs(rotor_evolve(s, 0.37).norm() - 1) < 1e-15
    with pytest.raises(ValueError):
        rotor_evolve(s, -1.0)


def test_zero_kick_is_identity():
    s = _random_state(6, 2)
    assert np.array_equal(impulsive_kick(s, eta=0).coeffs, s.coeffs)


def test_z_kick_keeps_m_populations():
    s = _random_state(6, 3)
    padded = rotor_state(20, {(l, m): s.amplitude(l, m) for l in range(7) for m in range(-l, l + 1)})
    k = impulsive_kick(padded, (0, 0, 1), 1.5)

    def by_m(state):
        out = {}
        for (l, m), p in state.populations().items():
            out[m] = out.get(m, 0) + p
        return out
    before, after = by_m(padded), by_m(k)
    for m in before:
        assert abs(before[m] - after[m]) < 1e-12


@pytest.mark.parametrize("axis", [(0, 0, 1), (1, 0, 0), (0.3, 0.4, 0.5)])
def test_kick_unitarity(axis):
    s = rotor_state(24, {(0, 0): 1})
    k = impulsive_kick(s, axis, 2.0)
    assert abs(k.norm() - 1) < 1e-12
    assert k.leakage < 1e-8


@pytest.mark.parametrize("axis", [(0, 0, 1), (0.6, -0.2, 0.4)])
def test_kick_matches_dense_exponential(axis):
    s = _random_state(4, 7)
    lmax, pad = 16, 14
    big = rotor_state(lmax, {(l, m): s.amplitude(l, m) for l in range(5) for m in range(-l, l + 1)})
    k = impulsive_kick(big, axis, 1.3, pad=pad)
    dense = expm(1j * 1.3 * cos2_axis(lmax + pad, axis))
    v = np.zeros(dense.shape[0], dtype=complex)
    v[:big.coeffs.size] = big.coeffs
    assert np.abs((dense @ v)[:big.coeffs.size] - k.coeffs).max() < 1e-10


def test_kick_leak_guard():
    with pytest.raises(ArithmeticError):
        impulsive_kick(rotor_state(2, {(0, 0): 1}), (0, 0, 1), 30.0, pad=2)


def test_alignment_dynamics():
    s = rotor_state(24, {(0, 0): 1})
    assert alignment(s) == pytest.approx(1 / 3, abs=1e-14)
    k = impulsive_kick(s, (0, 0, 1), 2.0)
    # the kick is diagonal in cos²θ, so alignment only grows under free evolution
    assert alignment(k) == pytest.approx(1 / 3, abs=1e-12)
    peak = max(alignment(rotor_evolve(k, t)) for t in np.linspace(0, k.T_rev, 257))
    assert peak > 0.6


def test_cos2_matrix_spectrum():
    M = cos2_matrix(30)
    assert np.allclose(M, M.conj().T)
    w = np.linalg.eigvalsh(M)
    assert w.min() > -1e-12 and w.max() < 1 + 1e-12


def test_rotation_maps_alignment_axes():
    s = impulsive_kick(rotor_state(20, {(0, 0): 1}), (0, 0, 1), 2.0)
    s = rotor_evolve(s, 0.9 * s.T_rev)
    r = rotate_state(s, Rotation.from_axis_angle((0, 1, 0), math.pi / 2))
    assert alignment(r, (1, 0, 0)) == pytest.approx(alignment(s, (0, 0, 1)), abs=1e-10)


def test_stroboscopic_same_axis_trend():
    s = rotor_state(24, {(0, 0): 1})
    T = s.T_rev
    tr = stroboscopic_reorient(s, [(k * T, (0, 0, 1)) for k in range(4)], eta=2.0)
    assert tr.period_peaks[-1] > tr.period_peaks[0]
    assert max(tr.period_peaks) > 0.85


def test_stroboscopic_tilted_schedule():
    s = rotor_state(24, {(0, 0): 1})
    sched = tilted_schedule(3, 60, s.T_rev)
    tr = stroboscopic_reorient(s, sched, eta=2.0, target=(0, 0, -1))
    assert tr.values[0] == pytest.approx(1 / 3, abs=1e-12)
    assert tr.period_peaks[-1] > 1 / 3
    assert all(p > 1 / 3 for p in tr.period_peaks)


def test_stroboscopic_guards():
    s = rotor_state(12, {(0, 0): 1})
    T = s.T_rev
    with pytest.raises(ValueError):
        stroboscopic_reorient(s, [(0, (0, 0, 1)), (T, (1, 0, 0))])
    with pytest.warns(UserWarning):
        stroboscopic_reorient(s, [(0.5 * T, (0, 0, 1))], eta=1.0, samples=4)
    free = stroboscopic_reorient(s, [], samples=8)
    assert np.allclose(free.values, 1 / 3)


@pytest.mark.parametrize("l", range(0, 11))
def test_fringe_factor(l):
    ref = rotor_state(12, {(l, 0): 1})
    sp = "even" if l % 2 == 0 else "odd"
    for az in (math.pi / 2, 0.0, 1.1):
        f, vis = interferometer_phase(sp, ref, equatorial_pi(az))
        assert abs(f - (-1) ** l) < 1e-12
        assert vis == pytest.approx(1.0)


def test_fringe_guards():
    with pytest.raises(ValueError):
        interferometer_phase("a1", rotor_state(4, {(1, 0): 1}), equatorial_pi())
    with pytest.raises(ValueError):
        interferometer_phase(None, rotor_state(4, {(1, 1): 1}), equatorial_pi())
    with pytest.raises(ArithmeticError):
        interferometer_phase(None, rotor_state(4, {(1, 0): 1}), Rotation.from_axis_angle((0, 1, 0), math.pi / 2))


def test_fringe_agrees_with_monodromy():
    D = get_group("Dinf")
    ref = rotor_state(6, {(1, 0): 1, (3, 0): 0.5, (5, 0): 0.2})
    f, _ = interferometer_phase("a2", ref, equatorial_pi(0.4))
    assert abs(f - monodromy_matrix(D, "a2", equatorial_pi(0.4))[0, 0]) < 1e-12
