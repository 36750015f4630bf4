"""Planar toy model and a kicked linear rotor for stroboscopic interferometry.

The 3D rotor keeps only the lab projection m (body projection fixed to
zero), so states are vectors over ``(ℓ, m)`` with index ``ℓ² + ℓ + m``.
Kicks are impulsive phase masks ``exp(iη cos²θ_n)``; η is a free model
parameter with no counterpart in the source physics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
import math
import warnings

import numpy as np

from .rotation import Rotation, wigner_matrix

DEFAULT_ETA = 2.0


# --- planar model -----------------------------------------------------------------


@dataclass(frozen=True)
class PlanarState:
    """Superposition of planar momenta ``ℓ`` for a homonuclear diatomic."""

    coeffs: dict
    parity: str
    nuclear: str = ""

    def __post_init__(self):
        if self.parity not in ("para", "ortho"):
            raise ValueError("parity must be 'para' or 'ortho'")
        want = 0 if self.parity == "para" else 1
        if any(l % 2 != want for l, c in self.coeffs.items() if c != 0):
            raise ValueError(f"{self.parity} states carry only {'even' if want == 0 else 'odd'} ℓ")
        nrm = math.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values()))
        if abs(nrm - 1) > 1e-12:
            raise ValueError("planar state must have unit norm")


def planar_state(coeffs, parity=None):
    """Normalize ``coeffs`` and infer the parity tag from its support."""
    coeffs = {int(l): complex(c) for l, c in coeffs.items() if c != 0}
    if not coeffs:
        raise ValueError("empty state")
    pars = {l % 2 for l in coeffs}
    if len(pars) > 1:
        raise ValueError("mixed parity: no species assignment")
    inferred = "para" if pars == {0} else "ortho"
    if parity is not None and parity != inferred:
        raise ValueError(f"support is {inferred}, not {parity}")
    nrm = math.sqrt(sum(abs(c) ** 2 for c in coeffs.values()))
    nuclear = "singlet" if inferred == "para" else "triplet"
    return PlanarState({l: c / nrm for l, c in coeffs.items()}, inferred, nuclear)


def planar_rotate(state, phi):
    """Rotate by ``phi``: ``c_ℓ → e^{iφℓ} c_ℓ``.

    Returns the rotated coefficients and, when they differ from the input by
    a common factor, that factor (always for φ = π on a species).
    """
    if isinstance(state, dict):
        coeffs = {int(l): complex(c) for l, c in state.items() if c != 0}
    else:
        coeffs = dict(state.coeffs)
    if abs(abs(math.remainder(phi, 2 * math.pi)) - math.pi) < 1e-15:
        # exact signs at φ = ±π
        factors = {l: (-1) ** (l % 2) for l in coeffs}
    else:
        factors = {l: np.exp(1j * phi * l) for l in coeffs}
    out = {l: factors[l] * c for l, c in coeffs.items()}
    vals = set(complex(v) for v in factors.values())
    if len({(round(v.real, 12), round(v.imag, 12)) for v in vals}) != 1:
        raise ValueError("state is not an eigenstate of the rotation: no global phase")
    return out, next(iter(vals))


# --- 3D rotor ---------------------------------------------------------------------


def _idx(l, m):
    return l * l + l + m


def _dim(lmax):
    return (lmax + 1) ** 2


_PARITY = {"a1": 0, "a2": 1, "para": 0, "ortho": 1, "even": 0, "odd": 1}


@dataclass(frozen=True)
class RotorState:
    B: float
    lmax: int
    coeffs: np.ndarray
    species: str | None = None
    leakage: float = 0.0

    def __post_init__(self):
        if self.coeffs.shape != (_dim(self.lmax),):
            raise ValueError("coefficient vector does not match lmax")
        if self.species is not None:
            par = _PARITY[self.species]
            for l in range(self.lmax + 1):
                if l % 2 != par and np.abs(self.coeffs[l * l:(l + 1) ** 2]).max() > 1e-12:
                    raise ValueError(f"species {self.species} excludes ℓ={l}")

    @property
    def T_rev(self):
        return 2 * math.pi / self.B

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def amplitude(self, l, m):
        return complex(self.coeffs[_idx(l, m)])

    def populations(self):
        """Weight per (ℓ, m)."""
        return {(l, m): float(abs(self.coeffs[_idx(l, m)]) ** 2)
                for l in range(self.lmax + 1) for m in range(-l, l + 1)}


def rotor_state(lmax, terms, B=1.0, species=None):
    """Normalized state from ``{(ℓ, m): amplitude}``."""
    v = np.zeros(_dim(lmax), dtype=complex)
    for (l, m), c in terms.items():
        if not (0 <= l <= lmax and abs(m) <= l):
            raise ValueError(f"(ℓ={l}, m={m}) outside the truncation")
        v[_idx(l, m)] = c
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("empty state")
    return RotorState(float(B), int(lmax), v / n, species)


def _ell(lmax):
    return np.concatenate([[l] * (2 * l + 1) for l in range(lmax + 1)])


def rotor_evolve(state, t):
    """Free evolution: ``c_{ℓm} → e^{-iBℓ(ℓ+1)t} c_{ℓm}``.

    The phase is reduced modulo 2π before exponentiation, so integer and
    half-integer multiples of the revival time give exact phases.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    x = Fraction(t) if isinstance(t, Fraction) else state.B * t / (2 * math.pi)
    ls = _ell(state.lmax)
    phases = np.empty(len(ls), dtype=complex)
    cache = {}
    for i, l in enumerate(ls):
        if l not in cache:
            frac = (l * (l + 1) * x) % 1
            frac = float(frac)
            cache[l] = 1.0 + 0j if frac == 0 else complex(np.exp(-2j * math.pi * frac))
        phases[i] = cache[l]
    return replace(state, coeffs=phases * state.coeffs)


def evolve_revivals(state, n):
    """Evolve by an exact rational number ``n`` of revival periods."""
    return rotor_evolve(state, Fraction(n))


def _cos_matrix(lmax, m):
    """cos θ on |ℓ, m⟩ for ℓ = |m| … lmax (exact, tridiagonal)."""
    ls = np.arange(abs(m), lmax + 1)
    n = len(ls)
    C = np.zeros((n, n))
    for i in range(n - 1):
        l = ls[i] + 1
        C[i, i + 1] = C[i + 1, i] = math.sqrt((l * l - m * m) / ((2 * l - 1) * (2 * l + 1)))
    return C


def cos2_matrix(lmax):
    """cos²θ about z in the (ℓ, m) basis truncated at ``lmax`` (exact entries)."""
    M = np.zeros((_dim(lmax), _dim(lmax)))
    for m in range(-lmax, lmax + 1):
        C = _cos_matrix(lmax + 1, m)
        C2 = (C @ C)[:-1, :-1]
        idx = [_idx(l, m) for l in range(abs(m), lmax + 1)]
        M[np.ix_(idx, idx)] = C2
    return M


def rotation_operator(lmax, g):
    """Block-diagonal ``⊕_ℓ D^ℓ(g)`` acting on the m index."""
    U = np.zeros((_dim(lmax), _dim(lmax)), dtype=complex)
    for l in range(lmax + 1):
        s = slice(l * l, (l + 1) ** 2)
        U[s, s] = wigner_matrix(l, g)
    return U


def _axis_rotation(axis):
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    beta = math.acos(max(-1.0, min(1.0, n[2])))
    alpha = math.atan2(n[1], n[0]) if abs(n[2]) < 1 else 0.0
    return Rotation.from_euler(alpha, beta, 0.0)


def cos2_axis(lmax, axis):
    """cos²θ_n = (n·r̂)² as the z operator conjugated by a rotation taking z to n."""
    n = np.asarray(axis, dtype=float)
    return _cos2_axis_cached(int(lmax), tuple(float(x) for x in n / np.linalg.norm(n)))


@lru_cache(maxsize=64)
def _cos2_axis_cached(lmax, n):
    U = rotation_operator(lmax, _axis_rotation(n))
    M = U @ cos2_matrix(lmax) @ U.conj().T
    M.setflags(write=False)
    return M


def alignment(state, axis=(0, 0, 1)):
    """⟨cos²θ_axis⟩."""
    return float(np.real(np.vdot(state.coeffs, cos2_axis(state.lmax, axis) @ state.coeffs)))


def rotate_state(state, g):
    return replace(state, coeffs=rotation_operator(state.lmax, g) @ state.coeffs)


def impulsive_kick(state, axis=(0, 0, 1), eta=DEFAULT_ETA, pad=None, leak_tol=1e-8):
    """Apply ``exp(iη cos²θ_axis)`` with a truncation-leakage report.

    The kick is computed on an enlarged basis (``lmax + pad``) and projected
    back; the discarded weight is stored on the returned state and must stay
    below ``leak_tol``.
    """
    if not math.isfinite(eta):
        raise ValueError("η must be finite")
    if eta == 0:
        return state
    pad = pad if pad is not None else 2 * int(math.ceil(abs(eta))) + 8
    big = state.lmax + pad
    v = np.zeros(_dim(big), dtype=complex)
    v[:_dim(state.lmax)] = state.coeffs
    U = rotation_operator(big, _axis_rotation(axis))
    out = U @ _z_kick(big, float(eta), U.conj().T @ v)
    kept = out[:_dim(state.lmax)]
    leak = float(np.vdot(out[_dim(state.lmax):], out[_dim(state.lmax):]).real)
    if leak > leak_tol:
        raise ArithmeticError(f"kick leaks {leak:.2e} of the norm past ℓ={state.lmax}")
    return replace(state, coeffs=kept, leakage=state.leakage + leak)


@lru_cache(maxsize=16)
def _z_blocks(lmax):
    """Eigen-decomposition of cos²θ about z per m block."""
    out = []
    for m in range(-lmax, lmax + 1):
        C = _cos_matrix(lmax + 1, m)
        w, V = np.linalg.eigh((C @ C)[:-1, :-1])
        out.append((np.array([_idx(l, m) for l in range(abs(m), lmax + 1)]), w, V))
    return out


def _z_kick(lmax, eta, v):
    """exp(iη cos²θ_z) v, block by block in m."""
    out = np.empty_like(v)
    for idx, w, V in _z_blocks(lmax):
        out[idx] = V @ (np.exp(1j * eta * w) * (V.T @ v[idx]))
    return out


@dataclass
class StroboscopicTrace:
    times: list
    values: list
    pulse_times: list
    period_peaks: list = field(default_factory=list)
    final: RotorState | None = None


def stroboscopic_reorient(state, schedule, eta=DEFAULT_ETA, target=(0, 0, 1),
                          samples=64, tail_periods=1):
    """Alternate free evolution and kicks, sampling ⟨cos²θ_target⟩.

    ``schedule`` lists ``(time, axis)`` pulses in ascending time.  Pulse
    times off integer revivals are allowed with a warning.  After the last
    pulse the state evolves for ``tail_periods`` revivals.  Peaks are the
    maxima of the alignment within each revival period following a pulse.
    """
    T = state.T_rev
    axes = [np.asarray(a, float) / np.linalg.norm(a) for _, a in schedule]
    for a, b in zip(axes, axes[1:]):
        if float(a @ b) <= 0:
            raise ValueError("consecutive pulse axes must tilt by less than 90 degrees")
    for t, _ in schedule:
        k = t / T
        if abs(k - round(k)) > 1e-9:
            warnings.warn(f"pulse at t={t} is not a revival multiple", stacklevel=2)
    M = cos2_axis(state.lmax, target)

    def measure(s):
        return float(np.real(np.vdot(s.coeffs, M @ s.coeffs)))

    times, values, peaks = [0.0], [measure(state)], []
    now, cur = 0.0, state
    events = [(float(t), a) for t, a in schedule]
    for i, (t, a) in enumerate(events):
        if t < now:
            raise ValueError("pulse schedule must be ascending")
        cur = rotor_evolve(cur, t - now)
        now = t
        cur = impulsive_kick(cur, a, eta)
        end = events[i + 1][0] if i + 1 < len(events) else t + tail_periods * T
        grid = np.linspace(t, end, samples + 1)
        seg = []
        for tt in grid:
            v = measure(rotor_evolve(cur, tt - t))
            times.append(float(tt))
            values.append(v)
            if tt <= t + T * (1 + 1e-12):
                seg.append(v)
        peaks.append(max(seg))
    if not events:
        for tt in np.linspace(0, tail_periods * T, samples + 1)[1:]:
            times.append(float(tt))
            values.append(measure(rotor_evolve(cur, tt)))
        now = tail_periods * T
    final = rotor_evolve(cur, max(0.0, (events[-1][0] + tail_periods * T if events else now) - now))
    return StroboscopicTrace(times, values, [t for t, _ in events], peaks, final)


def tilted_schedule(pulses, tilt_deg, T_rev, azimuth=0.0):
    """Pulses at successive revivals, each tilted ``tilt_deg`` further from z."""
    out = []
    for k in range(pulses):
        th = math.radians(tilt_deg * k)
        out.append((k * T_rev, (math.sin(th) * math.cos(azimuth), math.sin(th) * math.sin(azimuth), math.cos(th))))
    return out


# --- fringe phases --------------------------------------------------------------------


def interferometer_phase(species, reference, g):
    """Fringe factor ``⟨ref|D(g)|ref⟩ / |⟨ref|D(g)|ref⟩|`` and the visibility.

    ``reference`` must be supported on the species' momenta with m = 0.
    """
    if species is not None:
        par = _PARITY[species]
        for l in range(reference.lmax + 1):
            blk = reference.coeffs[l * l:(l + 1) ** 2]
            if np.abs(blk).max() > 1e-12 and l % 2 != par:
                raise ValueError(f"reference has weight at ℓ={l}, outside species {species}")
    for l in range(reference.lmax + 1):
        for m in range(-l, l + 1):
            if m and abs(reference.coeffs[_idx(l, m)]) > 1e-12:
                raise ValueError("reference must have m = 0 only")
    ov = complex(np.vdot(reference.coeffs, rotate_state(reference, g).coeffs))
    vis = abs(ov) / reference.norm() ** 2
    if vis < 1e-12:
        raise ArithmeticError("zero overlap: fringe phase undefined")
    return ov / abs(ov), vis


def equatorial_pi(azimuth=math.pi / 2):
    """π-rotation about the equatorial axis at the given azimuth (default y)."""
    return Rotation.from_axis_angle((math.cos(azimuth), math.sin(azimuth), 0.0), math.pi)
