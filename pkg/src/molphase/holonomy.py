"""Berry-connection components, flatness checks, monodromy and the lift test."""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .groups import (
    ContinuousGroup,
    FiniteGroup,
    GroupError,
    _table_fingerprint,
    identify,
    quotient_table,
    subgroup_quotient,
)
from .isotypic import adapted_basis, multiplicity
from .rotation import Rotation, _check_l, _qmul, generators, wigner_matrix

AXES = "xyz"


class ConventionError(ArithmeticError):
    """The two connection expressions disagree."""


@dataclass(frozen=True)
class ConnectionComponent:
    group: str
    irrep: str
    l: int
    axis: str
    matrix: np.ndarray
    projection: np.ndarray

    @property
    def residual(self):
        return float(np.abs(self.matrix - self.projection).max()) if self.matrix.size else 0.0

    @property
    def trace(self):
        return complex(np.trace(self.matrix))


def _irrep(group, irrep):
    return group.irrep(irrep) if isinstance(irrep, str) else irrep


def _element_traces(group, l, axis):
    """tr(D^ℓ(g) L_a) for every g, shape (|G|,)."""
    L = generators(l)[axis]
    return np.array([np.einsum("ij,ji->", wigner_matrix(l, e), L) for e in group.elements])


def _projection_route(group, ir, l, axis):
    tr = _element_traces(group, l, axis)
    # Σ_g Γ^{νμ}(g) tr(D(g) L_a), entry [μ, ν]
    return np.einsum("gnu,g->un", ir.fmats, tr)


def _basis_route(group, ir, l, axis):
    if multiplicity(l, ir) == 0:
        return np.zeros((ir.dim, ir.dim), dtype=complex)
    W = adapted_basis(l, group).columns(ir.label).conj()
    L = generators(l)[axis]
    return (group.order / ir.dim) * np.einsum("wuk,wv,vnk->un", W.conj(), L, W)


def connection_component(group, irrep, l, axis, tol=1e-8):
    """The ℓ-dependent component ``A^{a,ℓ}_{μν}`` by both defining expressions.

    Raises :class:`ConventionError` when they differ by more than ``tol``.
    """
    if not isinstance(group, FiniteGroup):
        raise GroupError("connection components need a finite group")
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES!r}")
    l = _check_l(l)
    ir = _irrep(group, irrep)
    A = _basis_route(group, ir, l, axis)
    B = _projection_route(group, ir, l, axis)
    comp = ConnectionComponent(group.name, ir.label, l, axis, A, B)
    if comp.residual > tol * max(1.0, float(np.abs(B).max())):
        raise ConventionError(
            f"{group.name}/{ir.label} ℓ={l} axis {axis}: routes differ by {comp.residual:.3e}")
    return comp


# --- regularized sums ---------------------------------------------------------


def tail_lmax(delta, tail=1e-12):
    """Smallest ℓ with e^{-Δℓ(ℓ+1)} below ``tail``."""
    target = -math.log(tail) / delta
    return int(math.ceil((-1 + math.sqrt(1 + 4 * target)) / 2))


@dataclass
class RegularizedConnection:
    group: str
    irrep: str
    deltas: list
    lmax: list
    values: dict  # (μ, ν, axis) -> list of complex, one per Δ
    threshold: float
    floor: float = 1e-13
    notes: list = field(default_factory=list)

    def magnitudes(self):
        """max over components of |A(Δ)|, one entry per Δ."""
        return [max(abs(v[i]) for v in self.values.values()) for i in range(len(self.deltas))]

    def component_decays(self, key):
        mags = [abs(v) for v in self.values[key]]
        if all(m <= self.floor for m in mags):
            return True
        return all(b < a for a, b in zip(mags, mags[1:])) and mags[-1] < self.threshold

    @property
    def decays(self):
        mags = self.magnitudes()
        strict = all(m <= self.floor for m in mags) or all(b < a for a, b in zip(mags, mags[1:]))
        return strict and mags[-1] < self.threshold


def flatness_scan(group, irrep, pairs=None, axes=AXES, deltas=(0.5, 0.2, 0.1, 0.05),
                  threshold=1e-6, tail=1e-12, lcap=None, cross_check_lmax=20):
    """Damped ratio Σ e^{-Δℓ(ℓ+1)}(2ℓ+1)A^ℓ / Σ e^{-Δℓ(ℓ+1)}(2ℓ+1)mult(ℓ) per Δ.

    Components up to ``cross_check_lmax`` go through both expressions;
    beyond that only the character sum is evaluated.
    """
    deltas = [float(x) for x in deltas]
    if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("Δ grid must be positive and strictly descending")
    ir = _irrep(group, irrep)
    lmaxes = [tail_lmax(d, tail) for d in deltas]
    top = max(lmaxes)
    if lcap is not None and top > lcap:
        raise ValueError(f"tail bound needs ℓ={top} beyond the cap {lcap}")
    if pairs is None:
        pairs = [(m, n) for m in range(1, ir.dim + 1) for n in range(1, ir.dim + 1)]
    comps = {}
    mult = np.zeros(top + 1)
    for l in range(top + 1):
        mult[l] = multiplicity(l, ir)
        for a in axes:
            if l <= cross_check_lmax:
                comps[l, a] = connection_component(group, ir, l, a).matrix
            else:
                comps[l, a] = _projection_route(group, ir, l, a)
    values = {}
    for mu, nu in pairs:
        for a in axes:
            vals = []
            for d, lm in zip(deltas, lmaxes):
                ls = np.arange(lm + 1)
                w = np.exp(-d * ls * (ls + 1)) * (2 * ls + 1)
                num = sum(w[l] * comps[l, a][mu - 1, nu - 1] for l in ls)
                den = float(w @ mult[:lm + 1])
                if den <= 0:
                    raise ArithmeticError("irrep absent below the tail cutoff")
                vals.append(complex(num / den))
            values[mu, nu, a] = vals
    return RegularizedConnection(group.name, ir.label, deltas, lmaxes, values, threshold)


def traced_connection(group, irrep, l):
    """The traced vector (tr A^{x,ℓ}, tr A^{y,ℓ}, tr A^{z,ℓ})."""
    return np.array([connection_component(group, irrep, l, a).trace for a in AXES])


def su2_structure(group, irrep, l):
    """Gram ``tr(A^a A^b)`` and triple products ``tr(A^a A^b A^c)`` at one ℓ."""
    A = [connection_component(group, irrep, l, a).matrix for a in AXES]
    gram = np.array([[np.trace(x @ y) for y in A] for x in A])
    triple = np.array([[[np.trace(x @ y @ z) for z in A] for y in A] for x in A])
    return gram, triple


# --- symmetry verdicts ------------------------------------------------------------


def symmetry_flatness_proof(group, irrep):
    """``"flat-by-symmetry"`` or ``"undetermined"``.

    A 1D irrep is protected whenever no vector (ℓ=1) is invariant under the
    group.  Two multi-dimensional cases are added by hand: the octahedral
    ``e`` irrep, where a D2 element reverses one generator while fixing the
    fiber, and the icosahedral ``t2`` irrep.
    """
    label = irrep if isinstance(irrep, str) else irrep.label
    if isinstance(group, ContinuousGroup):
        dim = group.irrep_dim(label)
        invariant_vector = group.multiplicity("a1" if group.dihedral else "a", 1)
    else:
        ir = _irrep(group, label)
        label, dim = ir.label, ir.dim
        invariant_vector = multiplicity(1, group.trivial)
    if dim == 1 and invariant_vector == 0:
        return "flat-by-symmetry"
    if (group.name, label) in {("O", "e"), ("I", "t2")}:
        return "flat-by-symmetry"
    return "undetermined"


# --- asymmetric rotor ---------------------------------------------------------------


def asymmetric_flatness_check(lmax, path, times, step=1e-4, tol=1e-5):
    """Max |tr(D^ℓ(r⁻¹) ∂_t D^ℓ(r))| along ``path`` for each ℓ ≤ ``lmax``.

    ``path`` maps a time to a :class:`Rotation`.  Central differences are
    taken at ``step`` and ``step/2``; a disagreement beyond ``tol`` means
    the step is too coarse.
    """
    out = []
    for l in range(lmax + 1):
        worst = 0.0
        for t in times:
            Dinv = wigner_matrix(l, path(t).inverse())

            def deriv(h):
                return (wigner_matrix(l, path(t + h)) - wigner_matrix(l, path(t - h))) / (2 * h)

            d1, d2 = deriv(step), deriv(step / 2)
            if np.abs(d1 - d2).max() > tol:
                raise ArithmeticError(f"finite-difference step {step} too coarse at ℓ={l}")
            worst = max(worst, abs(np.trace(Dinv @ d2)))
        out.append(worst)
    return out


# --- monodromy ----------------------------------------------------------------------


def _element_index(group, g):
    if isinstance(g, (int, np.integer)):
        if not 0 <= g < group.order:
            raise GroupError(f"element index {g} out of range")
        return int(g)
    try:
        return group.index_of(g)
    except Exception as exc:
        raise GroupError(f"{g} is not an element of {group.name}") from exc


def _continuous_value(group, label, g):
    """1D irrep value of C∞/D∞ at a rotation; e irreps are not supported."""
    R = g.matrix
    flips = R[2, 2] < 0
    if abs(abs(R[2, 2]) - 1) > 1e-9:
        raise GroupError(f"{g} is not an element of {group.name}")
    if flips and not group.dihedral:
        raise GroupError(f"{g} is not an element of {group.name}")
    from .groups import normalize_label
    label = normalize_label(label)
    if label in ("a", "a1"):
        return 1.0
    if label == "a2":
        return -1.0 if flips else 1.0
    if label.startswith("l"):
        theta = math.atan2(R[1, 0], R[0, 0])
        return complex(np.exp(-1j * int(label[1:]) * theta))
    raise GroupError(f"monodromy of {label} is outside the supported catalog")


def monodromy_matrix(group, irrep, g):
    """``Γ(g⁻¹)`` as a complex matrix, evaluated from the exact irrep entries."""
    if isinstance(group, ContinuousGroup):
        label = irrep if isinstance(irrep, str) else irrep.label
        return np.array([[_continuous_value(group, label, g.inverse())]], dtype=complex)
    ir = _irrep(group, irrep)
    gi = group.inverse[_element_index(group, g)]
    return np.array([[complex(x) for x in row] for row in ir.exact(gi)], dtype=complex)


def lab_rotation_check(group, irrep, g, lmax=20, delta=0.05, s=None):
    """Relative residual of the lab-rotated |s, μ⟩ against Σ_ν Γ^{μν}(g⁻¹)|s, ν⟩.

    The rotation acts blockwise with ``D^ℓ(g)`` on the m index of each
    truncated position vector.
    """
    from .phasespace import position_vector
    label = irrep if isinstance(irrep, str) else irrep.label
    if isinstance(group, ContinuousGroup):
        rot, dim = g, group.irrep_dim(label)
    else:
        rot = group.elements[_element_index(group, g)]
        dim = _irrep(group, label).dim
    s = s or Rotation.identity()
    M = monodromy_matrix(group, label, g)
    vecs = [position_vector(group, label, s, mu, lmax, delta) for mu in range(1, dim + 1)]
    worst = 0.0
    for mu in range(dim):
        rotated = _rotate_lab(vecs[mu], rot)
        expect = sum(M[mu, nu] * vecs[nu].coeffs for nu in range(dim))
        worst = max(worst, float(np.linalg.norm(rotated - expect) / np.linalg.norm(vecs[mu].coeffs)))
    return worst


def _rotate_lab(vec, rot):
    out = np.empty_like(vec.coeffs)
    idx = vec.index
    i = 0
    while i < len(idx):
        l = idx[i][0]
        j = i
        while j < len(idx) and idx[j][0] == l:
            j += 1
        block = vec.coeffs[i:j].reshape(2 * l + 1, -1)
        out[i:j] = (wigner_matrix(l, rot) @ block).reshape(-1)
        i = j
    return out


@dataclass(frozen=True)
class MonodromyGroup:
    group: str
    irrep: str
    kernel: tuple
    quotient: str
    non_abelian: bool

    @property
    def kernel_order(self):
        return len(self.kernel)

    def to_dict(self):
        return {"group": self.group, "irrep": self.irrep, "kernel_order": self.kernel_order,
                "quotient": self.quotient, "non_abelian": self.non_abelian}


def monodromy_group(group, irrep):
    """``G / ker Γ`` with the kernel found in exact arithmetic."""
    if isinstance(group, ContinuousGroup):
        label = irrep if isinstance(irrep, str) else irrep.label
        q = group.monodromy(label)
        return MonodromyGroup(group.name, label, (), q, False)
    ir = _irrep(group, irrep)
    kernel = tuple(ir.kernel())
    label = subgroup_quotient(group, kernel)
    q, _, _ = quotient_table(group.table.tolist(), list(group.inverse), kernel)
    return MonodromyGroup(group.name, ir.label, kernel, label, not _table_fingerprint(q)[1])


# --- lift to the binary cover ---------------------------------------------------------


def binary_cover(group):
    """Quaternion preimages ±q of the elements; returns (quats, table, projection)."""
    quats = []
    proj = []
    for i, e in enumerate(group.elements):
        q = np.array(e.quat, dtype=float)
        quats += [q, -q]
        proj += [i, i]
    Q = np.array(quats)
    n = len(Q)
    table = np.empty((n, n), dtype=int)
    for a in range(n):
        prods = np.array([_qmul(Q[a], Q[b]) for b in range(n)])
        # match each product against the list of preimages
        dist = np.abs(prods[:, None, :] - Q[None, :, :]).max(axis=2)
        hit = dist.argmin(axis=1)
        if dist[np.arange(n), hit].max() > 1e-9:
            raise ArithmeticError("binary cover is not closed")
        table[a] = hit
    return Q, table, np.array(proj)


@dataclass(frozen=True)
class ConjectureWitness:
    holds: bool
    cover_order: int
    kernel_order: int
    cover_kernel_order: int
    quotient: str
    cover_quotient: str
    rho: str

    def to_dict(self):
        return dict(self.__dict__)


def conjecture_check(group, irrep):
    """Lift Γ to ρ(±q) = Γ(π(q)) on 2G and compare 2G/ker ρ with G/ker Γ."""
    if not isinstance(group, FiniteGroup):
        raise GroupError("the lift is built for finite groups")
    ir = _irrep(group, irrep)
    Q, table, proj = binary_cover(group)
    n = len(Q)
    rho = ir.fmats[proj]
    # ρ must be a homomorphism of 2G
    lhs = np.einsum("aij,bjk->abik", rho, rho)
    rhs = rho[table]
    if np.abs(lhs - rhs).max() > 1e-9:
        raise AssertionError("the lift is not a representation of the cover")
    ker = set(ir.kernel())
    cover_ker = [a for a in range(n) if proj[a] in ker]
    inverse = [int(np.where(table[a] == 0)[0][0]) for a in range(n)]
    q_cover, _, _ = quotient_table(table.tolist(), inverse, cover_ker)
    fp_cover = _table_fingerprint(q_cover)
    mono = monodromy_group(group, ir)
    q_base, _, _ = quotient_table(group.table.tolist(), list(group.inverse), mono.kernel)
    fp_base = _table_fingerprint(q_base)
    cover_label = identify(fp_cover)
    holds = (len(cover_ker) == 2 * len(ker)) and fp_cover == fp_base and cover_label == mono.quotient
    if ir.dim == 1:
        vals = sorted({complex(np.round(v, 12)) for v in rho[:, 0, 0]}, key=lambda z: (np.angle(z) % (2 * np.pi)))
        desc = "trivial" if len(vals) == 1 else ("sign" if len(vals) == 2 else f"{len(vals)}-valued character")
    else:
        desc = f"{ir.dim}-dimensional lift of {ir.label}"
    return ConjectureWitness(holds, n, len(ker), len(cover_ker), mono.quotient, cover_label, desc)
