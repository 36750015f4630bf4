"""
molphase.isotypic
-----------------

Restriction of Wigner matrices to a symmetry group: exact irrep
multiplicities and the G-adapted basis.

For a finite group ``G`` the adapted basis at angular momentum ℓ is an
isometry ``U`` (columns ordered ``(Γ, ν, κ)`` with ν major) satisfying::

    conj(D^ℓ(g)) @ U == U @ (⊕_Γ Γ(g) ⊗ I_mult)

Downstream, position-space coefficients use ``W = conj(U)``, for which
``D^ℓ(g) W = W (⊕ conj(Γ(g)) ⊗ I)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import threading

import numpy as np

from .cyclotomic import dirichlet_kernel, Cyclotomic
from .groups import ContinuousGroup, FiniteGroup, Irrep, normalize_label
from .rotation import _check_l, wigner_matrix

RANK_TOL = 1e-8


@dataclass(frozen=True)
class BranchingTable:
    group: str
    irrep: str
    mult: dict

    @property
    def support(self):
        """The momenta ℓ at which the irrep occurs."""
        return [l for l, m in sorted(self.mult.items()) if m > 0]


@dataclass(frozen=True)
class Block:
    irrep: str
    dim: int
    mult: int
    offset: int

    def column(self, nu, kappa):
        """Column of the (ν, κ) vector, both indices 0-based."""
        return self.offset + nu * self.mult + kappa


@dataclass(frozen=True)
class AdaptedBasis:
    l: int
    blocks: tuple
    U: np.ndarray

    def block(self, label):
        want = normalize_label(label)
        for b in self.blocks:
            if normalize_label(b.irrep) == want:
                return b
        raise KeyError(label)

    def columns(self, label):
        """Sub-isometry of the Γ block, shape ``(2ℓ+1, d, mult)``."""
        b = self.block(label)
        cols = self.U[:, b.offset:b.offset + b.dim * b.mult]
        return cols.reshape(2 * self.l + 1, b.dim, b.mult)


_lock = threading.Lock()


# --- multiplicities -----------------------------------------------------------


@lru_cache(maxsize=None)
def _class_kernels(group_name, l):
    from .groups import build_group
    G = build_group(group_name)
    return [dirichlet_kernel(l, G.orders[c[0]], G.turns[c[0]]) for c in G.classes]


def multiplicity(l, irrep, group=None):
    """Exact number of copies of ``irrep`` in the restriction of ``D^ℓ*``.

    ``irrep`` is an :class:`Irrep` of a finite group, or a label together
    with a :class:`ContinuousGroup`.
    """
    l = int(l)
    if l < 0:
        raise ValueError("ℓ must be nonnegative")
    if isinstance(group, ContinuousGroup):
        return group.multiplicity(irrep if isinstance(irrep, str) else irrep.label, l)
    if isinstance(irrep, str):
        irrep = group.irrep(irrep)
    return _finite_mult(irrep.group.name, irrep.label, l)


@lru_cache(maxsize=None)
def _finite_mult(group_name, label, l):
    from .groups import build_group
    G = build_group(group_name)
    ir = G.irrep(label)
    kern = _class_kernels(group_name, l)
    total = Cyclotomic.rational(0)
    for c, k in zip(G.classes, kern):
        # D^ℓ characters are real, so no conjugation is needed on them
        total = total + ir.characters[c[0]] * k * len(c)
    m = (total / G.order).to_rational()
    if m.denominator != 1 or m < 0:
        raise ArithmeticError(f"non-integral multiplicity {m}")
    return int(m)


def branching_table(group, irrep, lmax):
    label = irrep if isinstance(irrep, str) else irrep.label
    return BranchingTable(group.name, label, {l: multiplicity(l, label, group) for l in range(lmax + 1)})


# --- adapted basis ------------------------------------------------------------


def _cyclic_order(G):
    if G.name.startswith("C"):
        return int(G.name[1:])
    return None


def _native_cyclic_basis(l, G):
    """C_N about z: the adapted basis is a selection of |ω⟩ states."""
    N = _cyclic_order(G)
    n = 2 * l + 1
    blocks, cols = [], []
    for ir in G.irreps:
        # ¹e_i(r) = ζ^i etc.; conj(D(r))|ω⟩ = ζ^ω |ω⟩ so ω ≡ i (mod N)
        val = complex(ir.characters[1]) if N > 1 else 1.0
        i = int(round(np.angle(val) * N / (2 * np.pi))) % N if N > 1 else 0
        omegas = [w for w in range(-l, l + 1) if (w - i) % N == 0]
        blocks.append(Block(ir.label, 1, len(omegas), len(cols)))
        for w in omegas:
            v = np.zeros(n, dtype=complex)
            v[w + l] = 1.0
            cols.append(v)
    return AdaptedBasis(l, tuple(blocks), np.array(cols).T.reshape(n, n))


def _projector(ir, Dc, mu, nu):
    """P^{μν} = (d/|G|) Σ_g conj(Γ^{μν}(g)) conj(D(g))."""
    coef = ir.fmats[:, mu, nu].conj()
    return (ir.dim / len(coef)) * np.einsum("g,gij->ij", coef, Dc)


def _projected_basis(l, G):
    n = 2 * l + 1
    Dc = np.array([wigner_matrix(l, e).conj() for e in G.elements])
    blocks, cols = [], []
    for ir in G.irreps:
        m = multiplicity(l, ir)
        blocks.append(Block(ir.label, ir.dim, m, len(cols)))
        if m == 0:
            continue
        P11 = _projector(ir, Dc, 0, 0)
        seeds = []
        # deterministic seed order: descending ω
        for w in range(l, -l - 1, -1):
            v = P11[:, w + l].copy()
            for s in seeds:
                v -= s * (s.conj() @ v)
            nv = np.linalg.norm(v)
            if nv > 1e-6:
                v = v / nv
                # re-orthogonalize once for stability
                for s in seeds:
                    v -= s * (s.conj() @ v)
                seeds.append(v / np.linalg.norm(v))
            if len(seeds) == m:
                break
        if len(seeds) != m:
            raise np.linalg.LinAlgError(f"rank deficiency in the {ir.label} block at ℓ={l}")
        S = np.array(seeds).T  # (n, m), ν = 0 copies
        for mu in range(ir.dim):
            Pm = S if mu == 0 else _projector(ir, Dc, mu, 0) @ S
            for k in range(m):
                cols.append(Pm[:, k])
    U = np.array(cols).T.reshape(n, n)
    return AdaptedBasis(l, tuple(blocks), U)


@lru_cache(maxsize=None)
def _adapted_cached(group_name, l):
    from .groups import build_group
    G = build_group(group_name)
    if _cyclic_order(G) is not None:
        basis = _native_cyclic_basis(l, G)
    else:
        basis = _projected_basis(l, G)
    basis.U.setflags(write=False)
    return basis


def adapted_basis(l, group):
    """G-adapted isometry at angular momentum ``l``."""
    l = _check_l(l)
    if isinstance(group, ContinuousGroup):
        return _continuous_basis(l, group)
    with _lock:
        return _adapted_cached(group.name, l)


def _continuous_basis(l, group):
    n = 2 * l + 1
    blocks, cols = [], []
    for label in group.irrep_labels(l):
        ws = group.omegas(label, l)
        d = group.irrep_dim(label)
        blocks.append(Block(label, d, 1 if ws else 0, len(cols)))
        for j, w in enumerate(ws):
            v = np.zeros(n, dtype=complex)
            # D∞ e_λ: ν=1 ↔ |−λ⟩, ν=2 ↔ (−1)^(ℓ−λ)|λ⟩, mirroring the D_N basis
            v[w + l] = (-1) ** ((l - w) % 2) if (group.dihedral and d == 2 and j == 1) else 1.0
            cols.append(v)
    U = np.array(cols).T.reshape(n, n)
    return AdaptedBasis(l, tuple(blocks), U)


def check_adapted(basis, group, tol=1e-9):
    """Max residual of the block identity over all group elements."""
    U = basis.U
    worst = float(np.abs(U.conj().T @ U - np.eye(U.shape[0])).max())
    for g, e in enumerate(group.elements):
        Dc = wigner_matrix(basis.l, e).conj()
        blocks = []
        for b in basis.blocks:
            if b.mult:
                blocks.append(np.kron(group.irrep(b.irrep).fmats[g], np.eye(b.mult)))
        B = _blockdiag(blocks)
        worst = max(worst, float(np.abs(Dc @ U - U @ B).max()))
    return worst


def _blockdiag(blocks):
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


# --- rotational state enumeration ---------------------------------------------


@dataclass(frozen=True)
class RotationalStates:
    """Index set {(ℓ, m, κ)} of states transforming in a given irrep."""

    group: str
    irrep: str
    dim: int
    lmax: int
    mult: dict

    def indices(self):
        out = []
        for l in range(self.lmax + 1):
            for m in range(-l, l + 1):
                for k in range(1, self.mult[l] + 1):
                    out.append((l, m, k))
        return out

    @property
    def support(self):
        return [l for l in range(self.lmax + 1) if self.mult[l]]


def rotational_states(group, irrep, lmax):
    label = irrep if isinstance(irrep, str) else irrep.label
    if isinstance(group, FiniteGroup):
        d = group.irrep(label).dim
        label = group.irrep(label).label
    else:
        d = group.irrep_dim(normalize_label(label))
    mult = {l: multiplicity(l, label, group) for l in range(lmax + 1)}
    return RotationalStates(group.name, label, d, lmax, mult)


def adapted_columns(group, irrep, l):
    """``(2ℓ+1, d, mult)`` slice of the adapted basis for one irrep."""
    basis = adapted_basis(l, group)
    label = irrep if isinstance(irrep, str) else irrep.label
    return basis.columns(label)
