"""
molphase.species
----------------

Nuclear-spin permutation actions, the spin-statistics irrep, species
enumeration, statistical weights and entangled-state fractions.

A species is a triple ``(Γ_rot, Γ_nuc, σ)`` with σ contained (once) in
``Γ_rot ⊗ Γ_nuc``.  It is displayed by its rotational irrep, with a
trailing ``*`` when σ is not the trivial irrep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import Cyclotomic
from .groups import (ContinuousGroup, FiniteGroup, GroupError, Irrep, build_group,
                     get_group, icosahedron_vertices, normalize_label, tensor_decompose)
from .isotypic import multiplicity


# --- presets ---------------------------------------------------------------


@dataclass(frozen=True)
class Orbit:
    element: str
    spin: Fraction
    coords: Tuple[Tuple[float, float, float], ...]

    @property
    def count(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class MoleculePreset:
    name: str
    group: str
    orbits: Tuple[Orbit, ...]
    spectators: Tuple[Tuple[str, Fraction], ...] = ()

    def spectator_factor(self) -> int:
        """Dimension of the spin space of nuclei no symmetry permutes."""
        out = 1
        for _, s in self.spectators:
            out *= int(2 * s + 1)
        return out


def _ring(n, radius=1.0, z=0.0):
    """Ring of n points; the first at (0, r, z), the rest by 2π/n steps about z."""
    pts = []
    for j in range(n):
        t = 2 * math.pi * j / n
        pts.append((-radius * math.sin(t), radius * math.cos(t), z))
    return tuple(pts)


def _truncated_icosahedron():
    v = icosahedron_vertices()
    pts = []
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            if abs(np.linalg.norm(v[i] - v[j]) - 2.0) < 1e-9:
                pts.append(tuple(v[i] + (v[j] - v[i]) / 3))
                pts.append(tuple(v[i] + 2 * (v[j] - v[i]) / 3))
    return tuple(pts)


_H = Fraction(1, 2)
_TETRA = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
_OCTA = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))
_AXIAL = ((0, 0, 1), (0, 0, -1))


def _planar(name, n, ring_spin, ring_elem="H", core=None):
    orbits = [Orbit(ring_elem, ring_spin, _ring(n, 2.0))]
    if core:
        orbits.insert(0, Orbit(core, Fraction(0), _ring(n, 1.0)))
    return MoleculePreset(name, f"D{n}", tuple(orbits))


PRESETS: Dict[str, MoleculePreset] = {
    p.name: p for p in [
        MoleculePreset("HCl", "Cinf", (), (("H", _H), ("Cl", Fraction(3, 2)))),
        MoleculePreset("S2", "Dinf", (Orbit("S", Fraction(0), _AXIAL),)),
        MoleculePreset("H2", "Dinf", (Orbit("H", _H, _AXIAL),)),
        MoleculePreset("D2", "Dinf", (Orbit("D", Fraction(1), _AXIAL),)),
        MoleculePreset("H2O", "C2", (Orbit("H", _H, ((1.0, 0.0, -0.6), (-1.0, 0.0, -0.6))),),
                       (("O", Fraction(0)),)),
        MoleculePreset("NH3", "C3", (Orbit("H", _H, _ring(3, 1.0, -0.4)),), (("N", Fraction(1)),)),
        MoleculePreset("SO3", "D3", (Orbit("O", Fraction(0), _ring(3)),), (("S", Fraction(0)),)),
        MoleculePreset("BF3", "D3", (Orbit("F", _H, _ring(3)),), (("B", Fraction(3, 2)),)),
        MoleculePreset("CH4", "T", (Orbit("H", _H, _TETRA),), (("C", Fraction(0)),)),
        MoleculePreset("XeF4", "D4", (Orbit("F", _H, _ring(4)),), (("Xe", Fraction(0)),)),
        _planar("C5H5-", 5, _H, core="C"),
        _planar("C6H6", 6, _H, core="C"),
        _planar("C7H7+", 7, _H, core="C"),
        _planar("C8H8-2", 8, _H, core="C"),
        MoleculePreset("SF6", "O", (Orbit("F", _H, _OCTA),), (("S", Fraction(0)),)),
        MoleculePreset("C60", "I", (Orbit("C", Fraction(0), _truncated_icosahedron()),)),
        MoleculePreset("13C60", "I", (Orbit("13C", _H, _truncated_icosahedron()),)),
    ]
}
_ALIASES = {"C8H8": "C8H8-2", "C8H8^2-": "C8H8-2", "C8H8²⁻": "C8H8-2", "C5H5": "C5H5-",
            "C7H7": "C7H7+", "13C60": "13C60", "C13_60": "13C60"}


def get_preset(name: str) -> MoleculePreset:
    key = _ALIASES.get(name, name)
    for k, v in PRESETS.items():
        if k.lower() == key.lower():
            return v
    raise KeyError(f"unknown molecule {name!r}; presets: {', '.join(PRESETS)}")


# --- permutation action ----------------------------------------------------------


def _cycles(perm: Sequence[int]) -> List[int]:
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            lengths.append(k)
    return lengths


def perm_sign(perm: Sequence[int]) -> int:
    return -1 if sum(c - 1 for c in _cycles(perm)) % 2 else 1


@dataclass
class PermAction:
    """Permutations of every identical-nuclei orbit, one tuple per group element.

    For continuous groups the action factors through ``{e, flip}``; the
    elements are then the identity and the π-rotation about y.
    """

    group: object
    orbits: Tuple[Orbit, ...]
    perms: List[Tuple[Tuple[int, ...], ...]]

    @property
    def n_elements(self) -> int:
        return len(self.perms)

    def cycle_counts(self, g: int) -> List[int]:
        return [len(_cycles(p)) for p in self.perms[g]]

    def signs(self, g: int) -> List[int]:
        return [perm_sign(p) for p in self.perms[g]]


def _match(points: np.ndarray, R: np.ndarray, tol: float = 1e-6) -> Tuple[int, ...]:
    img = points @ R.T
    out = []
    for v in img:
        d = np.abs(points - v).max(axis=1)
        k = int(np.argmin(d))
        if d[k] > tol:
            raise GroupError("geometry is not invariant under the symmetry group")
        out.append(k)
    if sorted(out) != list(range(len(points))):
        raise GroupError("geometry maps two nuclei onto one site")
    return tuple(out)


def _quotient_elements(group):
    """Representative rotations through which an action can be evaluated."""
    from .rotation import Rotation
    if isinstance(group, ContinuousGroup):
        els = [Rotation.identity()]
        if group.dihedral:
            els.append(Rotation.from_axis_angle([0, 1, 0], math.pi))
        return els
    return group.elements


def perm_action_from_geometry(group, preset: MoleculePreset) -> PermAction:
    """Nearest-coordinate matching of every orbit under every group element."""
    els = _quotient_elements(group)
    perms = []
    for e in els:
        R = e.matrix
        perms.append(tuple(_match(np.array(o.coords, dtype=float), R) for o in preset.orbits))
    if isinstance(group, FiniteGroup):
        for g in range(group.order):
            for h in range(group.order):
                gh = group.table[g, h]
                for k in range(len(preset.orbits)):
                    pg, ph = perms[g][k], perms[h][k]
                    if tuple(pg[ph[j]] for j in range(len(ph))) != perms[gh][k]:
                        raise GroupError("permutation action is not a homomorphism")
    return PermAction(group, preset.orbits, perms)


# --- σ and nuclear decomposition --------------------------------------------------


def _one_dim_values(group):
    """Map label → list of values on the action's elements, for 1D irreps."""
    if isinstance(group, ContinuousGroup):
        if group.dihedral:
            return {"a1": [1, 1], "a2": [1, -1]}
        return {"a": [1]}
    return {ir.label: [ir.characters[g] for g in range(group.order)]
            for ir in group.irreps if ir.dim == 1}


def spin_statistics_irrep(action: PermAction) -> str:
    """Label of the 1D irrep σ(g) = Π_orbits sign(perm)^(2s)."""
    vals = []
    for g in range(action.n_elements):
        v = 1
        for orb, sgn in zip(action.orbits, action.signs(g)):
            if (2 * orb.spin) % 2 == 1:
                v *= sgn
        vals.append(v)
    for label, chi in _one_dim_values(action.group).items():
        if all(c == v for c, v in zip(chi, vals)):
            return label
    raise AssertionError("spin-statistics character is not an irrep")


def _perm_character(action: PermAction, g: int) -> int:
    out = 1
    for orb, c in zip(action.orbits, action.cycle_counts(g)):
        out *= int(2 * orb.spin + 1) ** c
    return out


def nuclear_decomposition(action: PermAction) -> Dict[str, int]:
    """Exact multiplicity m(Λ) of every irrep in the nuclear permutation representation."""
    group = action.group
    out = {}
    if isinstance(group, ContinuousGroup):
        chis = [_perm_character(action, g) for g in range(action.n_elements)]
        for label, vals in _one_dim_values(group).items():
            m = Fraction(sum(c * v for c, v in zip(chis, vals)), len(chis))
            out[label] = int(m)
        return out
    for ir in group.irreps:
        total = Cyclotomic.rational(0)
        for cls in group.classes:
            g = cls[0]
            total = total + ir.characters[g].conjugate() * (_perm_character(action, g) * len(cls))
        m = (total / group.order).to_rational()
        if m.denominator != 1:
            raise ArithmeticError(f"non-integral nuclear multiplicity {m}")
        out[ir.label] = int(m)
    return out


# --- species ---------------------------------------------------------------------


@dataclass
class SpeciesDescriptor:
    group: str
    rot: str
    nuc: str
    sigma: str
    d: int
    weight: int
    starred: bool
    coupling: np.ndarray = field(repr=False)

    @property
    def display(self) -> str:
        return self.rot + ("*" if self.starred else "")

    def to_dict(self) -> dict:
        return {"rot": self.rot, "nuc": self.nuc, "d": self.d, "weight": self.weight,
                "display": self.display}


@dataclass
class SpeciesReport:
    group: str
    sigma: str
    species: List[SpeciesDescriptor]
    missing: List[dict]
    decomposition: Dict[str, int]
    spectator_factor: int = 1
    notes: List[str] = field(default_factory=list)

    def get(self, display: str) -> SpeciesDescriptor:
        for s in self.species:
            if normalize_label(s.display) == normalize_label(display) and \
                    s.display.endswith("*") == display.endswith("*"):
                return s
        for s in self.species:
            if normalize_label(s.rot) == normalize_label(display):
                return s
        raise KeyError(display)

    def to_dict(self) -> dict:
        return {"group": self.group, "sigma": self.sigma,
                "species": [s.to_dict() for s in self.species],
                "missing": self.missing, "spectator_factor": self.spectator_factor,
                "notes": self.notes}


def _trivial_label(group) -> str:
    if isinstance(group, ContinuousGroup):
        return "a1" if group.dihedral else "a"
    return group.trivial.label


def coupling_state(gamma: Irrep, tau: Irrep, sigma: Irrep) -> np.ndarray:
    """Unit vector spanning the σ-isotypic line of ``Γ ⊗ τ`` (index ν_rot·d + ν_nuc).

    The phase is fixed by making the first nonzero component real positive.
    """
    G = gamma.group
    d1, d2 = gamma.dim, tau.dim
    P = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for g in range(G.order):
        P += np.conj(sigma.fmats[g, 0, 0]) * np.kron(gamma.fmats[g], tau.fmats[g])
    P /= G.order
    w, V = np.linalg.eigh((P + P.conj().T) / 2)
    keep = np.where(w > 0.5)[0]
    if len(keep) != 1:
        raise ValueError(f"σ occurs {len(keep)} times in Γ⊗τ; coupling undefined")
    v = V[:, keep[0]]
    k = int(np.argmax(np.abs(v) > 1e-10))
    v = v * (abs(v[k]) / v[k])
    return v


def enumerate_species(group, sigma: str, decomposition: Dict[str, int]) -> Tuple[List[SpeciesDescriptor], List[dict]]:
    """All admissible (Γ, τ) pairs; pairs with m(τ) = 0 go to ``missing``."""
    species, missing = [], []
    trivial = _trivial_label(group)
    starred = normalize_label(sigma) != normalize_label(trivial)
    if isinstance(group, ContinuousGroup):
        labels = list(_one_dim_values(group))
        for rot in labels:
            # 1D irreps of the two-element quotient: τ = Γ ⊗ σ
            nuc = rot if not starred else [l for l in labels if l != rot][0]
            w = decomposition.get(nuc, 0)
            rec = SpeciesDescriptor(group.name, rot, nuc, sigma, 1, w, starred, np.ones(1, dtype=complex))
            (species.append(rec) if w > 0 else missing.append({"rot": rot, "nuc": nuc}))
        return species, missing
    sig = group.irrep(sigma)
    for gam in group.irreps:
        for tau in group.irreps:
            if tau.dim != gam.dim:
                continue
            dec = tensor_decompose(gam, tau)
            if dec.get(sig.label, 0) == 0:
                continue
            if dec[sig.label] != 1:
                raise ArithmeticError("σ occurs more than once")
            w = decomposition.get(tau.label, 0)
            if w == 0:
                missing.append({"rot": gam.label, "nuc": tau.label})
                continue
            s = coupling_state(gam, tau, sig)
            species.append(SpeciesDescriptor(group.name, gam.label, tau.label, sig.label,
                                             gam.dim, w, starred, s))
    return species, missing


def species_report(preset: MoleculePreset) -> SpeciesReport:
    group = get_group(preset.group)
    action = perm_action_from_geometry(group, preset)
    sigma = spin_statistics_irrep(action)
    dec = nuclear_decomposition(action)
    sp, missing = enumerate_species(group, sigma, dec)
    notes = []
    if len({(2 * o.spin) % 2 for o in preset.orbits if o.count > 1}) > 1:
        notes.append("mixed boson/fermion orbits: unvalidated against reference tables")
    return SpeciesReport(group.name, sigma, sp, missing, dec, preset.spectator_factor(), notes)


def species_for_molecule(name: str) -> SpeciesReport:
    return species_report(get_preset(name))


def total_nuclear_dimension(preset: MoleculePreset) -> int:
    out = 1
    for o in preset.orbits:
        out *= int(2 * o.spin + 1) ** o.count
    return out


# --- fractions --------------------------------------------------------------------


def _rot_mult(group, species: SpeciesDescriptor, l: int, rule: str) -> int:
    label = species.rot if rule == "rot" else species.nuc
    return multiplicity(l, label, group)


def entangled_fraction(group, species: Sequence[SpeciesDescriptor], cutoff=None, rule: str = "nuc"):
    """Fraction of admissible states lying in species of dimension d > 1.

    ``cutoff=None`` gives the exact limit ``Σ_{d>1} d·m / Σ d·m`` as a
    :class:`Fraction`.  With an integer cutoff L the rotational content of
    each species is counted as ``Σ_{ℓ≤L} mult(ℓ)·m``; ``rule`` selects whose
    multiplicities are used ("nuc": the nuclear irrep τ, which is what the
    reference tables use; "rot": the rotational irrep Γ).
    """
    if cutoff is None or cutoff == math.inf:
        num = sum(s.d * s.weight for s in species if s.d > 1)
        den = sum(s.d * s.weight for s in species)
        return Fraction(num, den)
    num = den = 0
    for s in species:
        tot = sum(_rot_mult(group, s, l, rule) for l in range(int(cutoff) + 1)) * s.weight
        den += tot
        if s.d > 1:
            num += tot
    return num / den if den else 0.0


def entangled_basis_state(species: SpeciesDescriptor, l: int, m: int, kappa: int, chi: int,
                          mult: Optional[int] = None) -> Dict[Tuple[Tuple[int, int, int, int], Tuple[int, int]], complex]:
    """Coefficients of (1/√d) Σ_ν s_ν |ℓ_{mκ}, ν⟩_rot |ν, χ⟩_nuc.

    Keys are ``((ℓ, m, κ, ν_rot), (ν_nuc, χ))`` with 1-based ν; the χ index
    runs over the τ copies, i.e. ``1 ≤ χ ≤ weight``.
    """
    if abs(m) > l:
        raise IndexError("|m| must not exceed ℓ")
    if mult is not None and not 1 <= kappa <= mult:
        raise IndexError("κ out of range")
    if not 1 <= chi <= species.weight:
        raise IndexError("χ out of range")
    d = species.d
    S = species.coupling.reshape(d, d)
    out = {}
    for a in range(d):
        for b in range(d):
            if abs(S[a, b]) > 1e-12:
                out[((l, m, kappa, a + 1), (b + 1, chi))] = complex(S[a, b])
    return out


def schmidt_coefficients(vec: np.ndarray, d: int) -> np.ndarray:
    return np.linalg.svd(np.asarray(vec).reshape(d, -1), compute_uv=False)
