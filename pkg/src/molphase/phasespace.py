"""Coset points, position states and the generalized Fourier transform on SO(3)/G.

Coefficient layout
    Entangled position states ``|s, μ⟩`` live on the index set
    ``(ℓ, m, κ)``; their coefficients are the G-adapted harmonics

        H^ℓ_{mκ}(s, μ) = sqrt(((2ℓ+1)/d) / (8π²/|G|)) · (D^ℓ(s) W)_{m, μκ}

    with ``W = conj(U)`` the conjugated adapted isometry.  Uncoupled (Zak)
    states live on the full asymmetric index set ``(ℓ, m, ω)``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .groups import ContinuousGroup, FiniteGroup
from .isotypic import adapted_basis, multiplicity
from .rotation import Rotation, little_d, wigner_matrix

HAAR = 8 * math.pi ** 2


@dataclass(frozen=True)
class CosetPoint:
    s: Rotation
    r: Rotation
    g: int


def canonicalize(r, group, chart="closest"):
    """Representative ``s`` of ``r G`` with ``r = s · g``.

    ``chart="closest"`` picks the element nearest the identity, ties (measure
    zero) broken by the lexicographically largest canonical quaternion.
    ``chart="euler"`` is available for C_N about z and reduces γ into
    ``[0, 2π/N)``.
    """
    if isinstance(group, ContinuousGroup):
        a, b, _ = r.euler()
        s = Rotation.from_euler(a, b, 0.0)
        return CosetPoint(s, r, -1)
    if chart == "euler":
        if not group.name.startswith("C"):
            raise ValueError("the Euler chart exists for cyclic groups only")
        N = group.order
        a, b, c = r.euler()
        step = 2 * math.pi / N
        k = int(math.floor(c / step + 1e-12)) % N
        s = Rotation.from_euler(a, b, c - k * step)
        g = group.index_of(Rotation.from_axis_angle((0, 0, 1), k * step))
        return CosetPoint(s, r, g)
    if chart != "closest":
        raise ValueError(f"unknown chart {chart!r}")
    best = None
    for idx, h in enumerate(group.elements):
        cand = r * h.inverse()
        key = (round(cand.angle, 10), tuple(-np.round(cand.canonical_quat(), 10)))
        if best is None or key < best[0]:
            best = (key, cand, idx)
    return CosetPoint(best[1], r, best[2])


def _norm_factor(l, d, order):
    return math.sqrt(((2 * l + 1) / d) / (HAAR / order))


def _W(group, label, l):
    """``conj(U)`` restricted to one irrep, shape (2ℓ+1, d, mult)."""
    return adapted_basis(l, group).columns(label).conj()


def _label(group, species):
    return species if isinstance(species, str) else species.rot


def _dim(group, label):
    if isinstance(group, ContinuousGroup):
        return group.irrep_dim(label)
    return group.irrep(label).dim


def _order(group):
    # continuous groups use the normalization of the 2-element quotient chart
    if isinstance(group, ContinuousGroup):
        return 2 if group.dihedral else 1
    return group.order


def harmonic(group, species, l, m, kappa, s, mu):
    """G-adapted harmonic ``H^ℓ_{mκ}(s, μ)`` (κ, μ 1-based)."""
    label = _label(group, species)
    if multiplicity(l, label, group) == 0:
        raise ValueError(f"ℓ={l} does not carry the irrep {label}")
    W = _W(group, label, l)
    D = wigner_matrix(l, s)
    d = _dim(group, label)
    return _norm_factor(l, d, _order(group)) * (D[m + l] @ W[:, mu - 1, kappa - 1])


@dataclass
class PositionStateVector:
    group: str
    species: str
    s: Rotation
    mu: int
    lmax: int
    delta: float
    index: list
    coeffs: np.ndarray

    def norm2(self):
        return float(np.vdot(self.coeffs, self.coeffs).real)


def position_vector(group, species, s, mu, lmax, delta=0.0):
    """Truncated coefficient vector of ``e^{-Δ ℓ(ℓ+1)/2} |s, μ⟩`` over (ℓ, m, κ)."""
    if delta < 0:
        raise ValueError("Δ must be nonnegative")
    label = _label(group, species)
    d = _dim(group, label)
    if not 1 <= mu <= d:
        raise IndexError("fiber index out of range")
    index, parts = [], []
    for l in range(lmax + 1):
        mult = multiplicity(l, label, group)
        if not mult:
            continue
        W = _W(group, label, l)
        D = wigner_matrix(l, s)
        c = _norm_factor(l, d, _order(group)) * math.exp(-delta * l * (l + 1) / 2) * (D @ W[:, mu - 1, :])
        parts.append(c.reshape(-1))
        index += [(l, m, k) for m in range(-l, l + 1) for k in range(1, mult + 1)]
    coeffs = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
    return PositionStateVector(group.name, label, s, mu, lmax, delta, index, coeffs)


def gram_overlap(a, b):
    """Inner product ``⟨a|b⟩`` of two truncated position states."""
    if (a.group, a.species) != (b.group, b.species):
        raise ValueError("states belong to different species")
    if a.lmax != b.lmax or a.delta != b.delta:
        raise ValueError("states must share the truncation and the damping")
    return complex(np.vdot(a.coeffs, b.coeffs))


# --- uncoupled (Zak) states ---------------------------------------------------


def asymmetric_coefficients(r, lmax):
    """Position state ``|r⟩`` of an asymmetric rotor over (ℓ, m, ω), ℓ ≤ lmax."""
    parts = [math.sqrt((2 * l + 1) / HAAR) * wigner_matrix(l, r).reshape(-1) for l in range(lmax + 1)]
    return np.concatenate(parts)


def zak_state(group, s, irrep, mu, nu, lmax):
    """``sqrt(d/|G|) Σ_g Γ^{μν}(g) |s·g⟩`` truncated at ``lmax`` (μ, ν 1-based)."""
    ir = group.irrep(irrep) if isinstance(irrep, str) else irrep
    vec = 0
    for g, h in enumerate(group.elements):
        vec = vec + ir.fmats[g, mu - 1, nu - 1] * asymmetric_coefficients(s * h, lmax)
    return math.sqrt(ir.dim / group.order) * vec


def zak_state_adapted(group, s, irrep, mu, nu, lmax):
    """Same state built from the adapted basis instead of the coset sum."""
    ir = group.irrep(irrep) if isinstance(irrep, str) else irrep
    parts = []
    for l in range(lmax + 1):
        n = 2 * l + 1
        if multiplicity(l, ir.label, group) == 0:
            parts.append(np.zeros(n * n, dtype=complex))
            continue
        W = _W(group, ir.label, l)
        D = wigner_matrix(l, s)
        # (|G|/d) Σ_κ (D W)_{m, μκ} conj(W)_{ω, νκ}
        M = (D @ W[:, mu - 1, :]) @ W[:, nu - 1, :].conj().T
        parts.append((math.sqrt(group.order / ir.dim) * math.sqrt(n / HAAR) * M).reshape(-1))
    return np.concatenate(parts)


# --- quadrature -----------------------------------------------------------------


def so3_quadrature(nbeta):
    """Product rule: uniform α, γ with ``2·nbeta-1`` points; Gauss–Legendre in cos β."""
    x, wx = np.polynomial.legendre.leggauss(nbeta)
    beta = np.arccos(x)
    na = 2 * nbeta - 1
    alpha = 2 * np.pi * np.arange(na) / na
    w = wx * (2 * np.pi / na) ** 2
    return alpha, beta, alpha.copy(), w


def _harmonic_grid(group, label, lmax, alpha, beta, gamma):
    """H values on the grid: array (na, nb, ng, d, rows) with rows over (ℓ, m, κ)."""
    d = _dim(group, label)
    cols = []
    m_all = []
    for l in range(lmax + 1):
        mult = multiplicity(l, label, group)
        if not mult:
            continue
        W = _W(group, label, l)
        m = np.arange(-l, l + 1)
        dl = little_d(l, beta)  # (nb, n, n)
        ea = np.exp(-1j * np.multiply.outer(alpha, m))  # (na, n)
        eg = np.exp(-1j * np.multiply.outer(gamma, m))  # (ng, n)
        # (D W)[a, b, c, m, μ, κ] = e^{-imα} Σ_ω d_{mω}(β) e^{-iωγ} W_{ω μ κ}
        t = np.einsum("cw,wuk->cwuk", eg, W)
        t = np.einsum("bmw,cwuk->bcmuk", dl, t)
        H = ea[:, None, None, :, None, None] * t[None]
        H = H * _norm_factor(l, d, _order(group))
        na, nb, ng = H.shape[:3]
        cols.append(H.transpose(0, 1, 2, 4, 3, 5).reshape(na, nb, ng, d, -1))
        m_all.append(l)
    return np.concatenate(cols, axis=-1)


def fourier_roundtrip(group, species, lmax, nbeta=None):
    """Max deviation of the position-space Gram matrix from the identity.

    ``G[(ℓmκ),(ℓ'm'κ')] = Σ_μ ∫_{SO(3)/G} conj(H) H``, computed on the full
    group with the product rule and divided by |G|.
    """
    label = _label(group, species)
    if nbeta is None:
        nbeta = lmax + 1
    if nbeta < lmax + 1:
        raise ValueError(f"quadrature with {nbeta} β-nodes cannot resolve bandlimit 2·{lmax}")
    alpha, beta, gamma, w = so3_quadrature(nbeta)
    H = _harmonic_grid(group, label, lmax, alpha, beta, gamma)
    wt = np.broadcast_to(w[None, :, None], H.shape[:3])
    Hw = H * np.sqrt(wt)[..., None, None]
    flat = Hw.reshape(-1, H.shape[-1])
    gram = flat.conj().T @ flat / _order(group)
    return float(np.abs(gram - np.eye(gram.shape[0])).max()) if gram.size else 0.0
