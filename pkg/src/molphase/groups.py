"""
molphase.groups
---------------

Finite rotation groups C_N, D_N, T, O, I with exact irreducible
representations, plus closed-form handling of C∞ and D∞.

Canonical embeddings
~~~~~~~~~~~~~~~~~~~~
* ``C_N``: rotations ``r^k`` by ``2πk/N`` about z, ordered by k.
* ``D_N``: ``r^k`` followed by ``r^k f`` with ``f`` the π-rotation about y.
* ``T`` and ``O``: rotation symmetries of the cube ``[-1, 1]^3``
  (``T`` preserves the tetrahedron with a vertex at ``(1, 1, 1)``).
* ``I``: the icosahedron with vertices ``(0, ±1, ±φ)`` and cyclic
  permutations; z is a two-fold axis and ``(φ, 0, 1)`` a five-fold axis.

Irrep bases
~~~~~~~~~~~
* ``C_N``: ``¹e_i(r^k) = ζ_N^{ik}``, ``²e_i`` its conjugate, ``b(r^k) = (-1)^k``.
* ``D_N``: ``e_i(r^k) = diag(ζ_N^{-ik}, ζ_N^{ik})`` and ``e_i(f) = [[0,1],[1,0]]``;
  ``b1`` is +1 on ``f``, ``b2`` is -1 on ``f``.
* ``T``: ``¹e`` is ``ζ_3^k`` where k counts the cyclic shift of the
  coordinate axes; ``t`` is the rotation matrix itself.
* ``O``: ``t1`` is the rotation matrix, ``t2 = a2 ⊗ t1``; ``e`` is the
  permutation action on the three coordinate axes in the discrete
  Fourier basis ``(1, ζ_3^a, ζ_3^{2a})/√3``, ``a = 1, 2``.
* ``I``: ``t1`` is the rotation matrix (entries in Q(√5)), ``t2`` its
  Galois conjugate under √5 → -√5; ``g`` and ``h`` are the permutation
  actions on the five orthogonal triples of two-fold axes and on the six
  five-fold axes, written in discrete Fourier bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
import math
import re

import numpy as np

from .cyclotomic import Cyclotomic, CycArray, dirichlet_kernel
from .rotation import Rotation

PHI = (1 + 5 ** 0.5) / 2
_TOL = 1e-9


def _lcm(a, b):
    return a * b // gcd(a, b)


class GroupError(ValueError):
    pass


@dataclass(eq=False)
class Irrep:
    """An irreducible unitary representation with exact matrix entries."""

    label: str
    dim: int
    group: "FiniteGroup" = field(repr=False)
    mats: CycArray = field(repr=False)

    def __post_init__(self):
        self._chars = None
        self._fmats = None

    @property
    def characters(self):
        """Exact character value for every element (list of Cyclotomic)."""
        if self._chars is None:
            self._chars = [self.mats.trace(g) for g in range(self.group.order)]
        return self._chars

    def class_characters(self):
        return [self.characters[c[0]] for c in self.group.classes]

    @property
    def fmats(self):
        """Complex matrices, shape ``(|G|, d, d)``."""
        if self._fmats is None:
            self._fmats = self.mats.to_complex()
            self._fmats.setflags(write=False)
        return self._fmats

    def matrix(self, g):
        return self.fmats[g]

    def exact(self, g):
        return [[self.mats.entry(g, i, j) for j in range(self.dim)] for i in range(self.dim)]

    @property
    def is_trivial(self):
        return self.dim == 1 and all(c == 1 for c in self.characters)

    def kernel(self):
        """Elements with χ(g) = d, decided exactly."""
        return [g for g, c in enumerate(self.characters) if c == self.dim]

    def __repr__(self):
        return f"Irrep({self.group.name}:{self.label}, d={self.dim})"


class FiniteGroup:
    """A finite subgroup of SO(3) under a fixed embedding."""

    def __init__(self, name, elements, irrep_builder=None):
        self.name = name
        self.elements = list(elements)
        n = len(self.elements)
        self.order = n
        mats = np.array([e.matrix for e in self.elements])
        self._mats = mats
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            prod = np.einsum("ab,jbc->jac", mats[i], mats)
            for j in range(n):
                table[i, j] = self._locate(prod[j])
        self.table = table
        ident = self._locate(np.eye(3))
        if ident != 0:
            raise GroupError("identity must be the first element")
        self.inverse = np.array([int(np.where(table[i] == 0)[0][0]) for i in range(n)])
        self.orders = [self._element_order(i) for i in range(n)]
        # exact angle: element i is a rotation by 2π·turns[i]/orders[i]
        self.turns = [int(round(self.elements[i].angle * self.orders[i] / (2 * math.pi))) for i in range(n)]
        self.classes = self._conjugacy_classes()
        self.class_of = np.empty(n, dtype=np.int64)
        for c, members in enumerate(self.classes):
            self.class_of[list(members)] = c
        self.field_order = reduce(_lcm, self.orders + [4])
        self._irrep_builder = irrep_builder
        self._irreps = None

    # construction helpers

    def _locate(self, M):
        d = np.abs(self._mats - M).reshape(self.order, -1).max(axis=1)
        k = int(np.argmin(d))
        if d[k] > _TOL * 10:
            raise GroupError(f"{self.name}: element set is not closed")
        return k

    def _element_order(self, i):
        k, cur = 1, i
        while cur != 0:
            cur = self.table[cur, i]
            k += 1
        return k

    def _conjugacy_classes(self):
        seen = set()
        classes = []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({int(self.table[self.table[h, g], self.inverse[h]]) for h in range(self.order)})
            seen.update(cls)
            classes.append(tuple(cls))
        classes.sort(key=lambda c: (self.orders[c[0]], c[0]))
        return classes

    # queries

    def mul(self, i, j):
        return int(self.table[i, j])

    def index_of(self, rot, tol=1e-6):
        d = np.abs(self._mats - rot.matrix).reshape(self.order, -1).max(axis=1)
        k = int(np.argmin(d))
        if d[k] > tol:
            raise GroupError(f"rotation is not an element of {self.name}")
        return k

    def is_abelian(self):
        return bool(np.all(self.table == self.table.T))

    @property
    def irreps(self):
        if self._irreps is None:
            self._irreps = self._irrep_builder(self)
        return self._irreps

    def irrep(self, label):
        want = normalize_label(label)
        for ir in self.irreps:
            if normalize_label(ir.label) == want:
                return ir
        for ir in self.irreps:
            if want in _aliases(ir.label):
                return ir
        raise GroupError(f"{self.name} has no irrep {label!r}; choose from {[i.label for i in self.irreps]}")

    @property
    def trivial(self):
        return self.irreps[0]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def normalize_label(label):
    return label.replace("_", "").replace("^", "").replace("*", "").strip().lower()


def _aliases(label):
    lab = normalize_label(label)
    out = {lab}
    m = re.fullmatch(r"([12]?)e(\d*)", lab)
    if m:
        j, i = m.groups()
        out.add(f"{j}e{i or 1}")
        if i == "1":
            out.add(f"{j}e")
    if lab == "t":
        out.update({"ti", "t1"})
    if lab == "a":
        out.add("a1")
    if lab == "a1":
        out.add("a")
    return out


# --- element sets -----------------------------------------------------------


def _closure(gens):
    elems = [Rotation.identity()]
    mats = [np.eye(3)]
    frontier = list(elems)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                p = g * a
                pm = p.matrix
                if all(np.abs(pm - m).max() > 1e-8 for m in mats):
                    elems.append(p)
                    mats.append(pm)
                    nxt.append(p)
        frontier = nxt
    return elems


def _sort_elements(elems):
    def key(r):
        q = r.canonical_quat()
        return (round(r.angle, 8),) + tuple(-round(float(x), 8) for x in q)
    rest = sorted(elems[1:], key=key)
    return [elems[0]] + rest


def _cyclic_elements(N):
    return [Rotation.from_axis_angle([0, 0, 1], 2 * math.pi * k / N) for k in range(N)]


def _dihedral_elements(N):
    rots = _cyclic_elements(N)
    f = Rotation.from_axis_angle([0, 1, 0], math.pi)
    return rots + [r * f for r in rots]


TETRA_VERTS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)


def icosahedron_vertices():
    v = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            v += [(0, s1, s2 * PHI), (s1, s2 * PHI, 0), (s2 * PHI, 0, s1)]
    return np.array(v, dtype=float)


def _polyhedral_elements(name):
    if name == "T":
        gens = [Rotation.from_axis_angle([1, 1, 1], 2 * math.pi / 3),
                Rotation.from_axis_angle([0, 0, 1], math.pi)]
    elif name == "O":
        gens = [Rotation.from_axis_angle([0, 0, 1], math.pi / 2),
                Rotation.from_axis_angle([1, 1, 1], 2 * math.pi / 3)]
    else:
        gens = [Rotation.from_axis_angle([PHI, 0, 1], 2 * math.pi / 5),
                Rotation.from_axis_angle([0, 0, 1], math.pi),
                Rotation.from_axis_angle([1, 1, 1], 2 * math.pi / 3)]
    return _sort_elements(_closure(gens))


# --- irrep builders -----------------------------------------------------------


def _one_dim(group, label, values):
    n = group.field_order
    return Irrep(label, 1, group, CycArray.from_entries(n, [[[v]] for v in values]))


def _from_entries(group, label, mats):
    return Irrep(label, len(mats[0]), group, CycArray.from_entries(group.field_order, mats))


def _cyclic_irreps(group, N):
    n = group.field_order
    z = lambda k: Cyclotomic.root(N, k).lift(n)
    out = [_one_dim(group, "a", [1] * N)]
    if N % 2 == 0:
        out.append(_one_dim(group, "b", [(-1) ** k for k in range(N)]))
    single = N in (3, 4)
    for i in range(1, (N + 1) // 2):
        if 2 * i == N:
            continue
        suffix = "" if single else str(i)
        out.append(_one_dim(group, f"1e{suffix}", [z(i * k) for k in range(N)]))
        out.append(_one_dim(group, f"2e{suffix}", [z(-i * k) for k in range(N)]))
    return out


def _dihedral_irreps(group, N):
    z = lambda k: Cyclotomic.root(N, k)
    rot = range(N)
    a1 = [1] * (2 * N)
    a2 = [1] * N + [-1] * N
    if N == 2:
        out = [_one_dim(group, "a", a1), _one_dim(group, "b1", a2),
               _one_dim(group, "b2", [1, -1, 1, -1]), _one_dim(group, "b3", [1, -1, -1, 1])]
        return out
    out = [_one_dim(group, "a1", a1), _one_dim(group, "a2", a2)]
    if N % 2 == 0:
        s = [(-1) ** k for k in rot]
        out.append(_one_dim(group, "b1", s + s))
        out.append(_one_dim(group, "b2", s + [-x for x in s]))
    single = N in (3, 4)
    for i in range(1, (N + 1) // 2):
        if 2 * i == N:
            continue
        mats = [[[z(-i * k), 0], [0, z(i * k)]] for k in rot]
        mats += [[[0, z(-i * k)], [z(i * k), 0]] for k in rot]
        out.append(_from_entries(group, "e" if single else f"e{i}", mats))
    return out


def _perm_of(group, points, signed=False, tol=1e-6):
    """Permutation of ``points`` induced by each element (optionally up to sign)."""
    perms = []
    for e in group.elements:
        img = points @ e.matrix.T
        p = []
        for v in img:
            d = np.abs(points - v).max(axis=1)
            if signed:
                d = np.minimum(d, np.abs(points + v).max(axis=1))
            k = int(np.argmin(d))
            if d[k] > tol:
                raise GroupError("point set is not invariant")
            p.append(k)
        perms.append(p)
    return perms


def _fourier_perm_irrep(group, label, perms):
    """Perm rep on k objects minus the trivial summand, in the DFT basis."""
    k = len(perms[0])
    mats = []
    for p in perms:
        M = []
        for a in range(1, k):
            row = []
            for b in range(1, k):
                # <v_a| P |v_b> = (1/k) Σ_j conj(ζ^{a p(j)}) ζ^{b j}
                terms = {}
                for j in range(k):
                    e = (b * j - a * p[j]) % k
                    terms[e] = terms.get(e, 0) + Fraction(1, k)
                row.append(Cyclotomic.from_terms(k, terms))
            M.append(row)
        mats.append(M)
    return _from_entries(group, label, mats)


def _recognize_sqrt5(x):
    best = None
    for a in range(-4, 5):
        for b in range(-4, 5):
            err = abs((a + b * 5 ** 0.5) / 4 - x)
            if best is None or err < best[0]:
                best = (err, a, b)
    if best[0] > 1e-9:
        raise GroupError(f"matrix entry {x} is not in (1/4)Z[√5]")
    _, a, b = best
    return Cyclotomic.rational(Fraction(a, 4)) + Cyclotomic.sqrt5() * Fraction(b, 4)


def _rotation_irrep(group, label, recognize):
    mats = [[[recognize(x) for x in row] for row in e.matrix] for e in group.elements]
    return _from_entries(group, label, mats)


def _int_entry(x):
    r = round(x)
    if abs(r - x) > 1e-9:
        raise GroupError(f"expected an integer entry, got {x}")
    return Cyclotomic.rational(int(r))


def _axis_cycle(R):
    """Which cyclic shift of the coordinate axes a T-element induces (0, 1, 2)."""
    P = np.abs(np.rint(R)).astype(int)
    img = [int(np.argmax(P[:, j])) for j in range(3)]
    return (img[0] - 0) % 3


def _tetrahedral_irreps(group):
    w = lambda k: Cyclotomic.root(3, k)
    shifts = [_axis_cycle(e.matrix) for e in group.elements]
    return [
        _one_dim(group, "a", [1] * 12),
        _one_dim(group, "1e", [w(s) for s in shifts]),
        _one_dim(group, "2e", [w(-s) for s in shifts]),
        _rotation_irrep(group, "t", _int_entry),
    ]


def _octahedral_irreps(group):
    sign = []
    for e in group.elements:
        img = TETRA_VERTS @ e.matrix.T
        inside = all(np.abs(TETRA_VERTS - v).max(axis=1).min() < 1e-6 for v in img)
        sign.append(1 if inside else -1)
    axes = np.eye(3)
    t1 = _rotation_irrep(group, "t1", _int_entry)
    t2mats = [[[t1.mats.entry(g, i, j) * sign[g] for j in range(3)] for i in range(3)]
              for g in range(group.order)]
    return [
        _one_dim(group, "a1", [1] * 24),
        _one_dim(group, "a2", sign),
        _fourier_perm_irrep(group, "e", _perm_of(group, axes, signed=True)),
        t1,
        _from_entries(group, "t2", t2mats),
    ]


def _orthogonal_triples(axes):
    triples = []
    k = len(axes)
    for i in range(k):
        for j in range(i + 1, k):
            for l in range(j + 1, k):
                a, b, c = axes[i], axes[j], axes[l]
                if abs(a @ b) < 1e-9 and abs(a @ c) < 1e-9 and abs(b @ c) < 1e-9:
                    triples.append((i, j, l))
    return triples


def _icosahedral_irreps(group):
    t1 = _rotation_irrep(group, "t1", _recognize_sqrt5)
    # ζ → ζ^7 sends √5 to -√5 inside Q(ζ_60)
    t2mats = [[[t1.mats.entry(g, i, j).lift(group.field_order).galois(7) for j in range(3)]
               for i in range(3)] for g in range(group.order)]
    verts = icosahedron_vertices()
    five_axes = []
    for v in verts:
        u = v / np.linalg.norm(v)
        if all(np.abs(np.abs(w @ u) - 1) > 1e-9 for w in five_axes):
            five_axes.append(u)
    five_axes = np.array(five_axes)
    two_axes = []
    for e in group.elements:
        if group.orders[group.elements.index(e)] == 2:
            ax, _ = e.axis_angle()
            two_axes.append(ax)
    two_axes = np.array(two_axes)
    triples = _orthogonal_triples(two_axes)
    tperm = _perm_of(group, two_axes, signed=True)
    cube_perm = []
    for p in tperm:
        img = []
        for tr in triples:
            s = sorted(p[i] for i in tr)
            img.append(next(k for k, t2 in enumerate(triples) if sorted(t2) == s))
        cube_perm.append(img)
    return [
        _one_dim(group, "a", [1] * 60),
        t1,
        _from_entries(group, "t2", t2mats),
        _fourier_perm_irrep(group, "g", cube_perm),
        _fourier_perm_irrep(group, "h", _perm_of(group, five_axes, signed=True)),
    ]


# --- public API ----------------------------------------------------------------


_NAME_RE = re.compile(r"^(C|D)(\d+|inf)$|^(T|O|I)$")


def parse_group_name(name):
    s = name.strip().replace("_", "").replace("∞", "inf")
    m = _NAME_RE.match(s)
    if not m:
        raise GroupError(f"unknown group name {name!r}; use C<N>, D<N>, T, O, I, Cinf or Dinf")
    if m.group(3):
        return m.group(3), None
    kind, n = m.group(1), m.group(2)
    if n == "inf":
        return kind, math.inf
    N = int(n)
    if N == 0 or (kind == "D" and N < 2):
        raise GroupError(f"invalid order in {name!r}")
    return kind, N


@lru_cache(maxsize=None)
def build_group(name):
    """Build one of the finite rotation groups ``C<N>``, ``D<N>``, ``T``, ``O``, ``I``."""
    kind, N = parse_group_name(name)
    if N == math.inf:
        raise GroupError(f"{name} is continuous; use continuous_group()")
    if kind == "C":
        return FiniteGroup(f"C{N}", _cyclic_elements(N), lambda g: _cyclic_irreps(g, N))
    if kind == "D":
        return FiniteGroup(f"D{N}", _dihedral_elements(N), lambda g: _dihedral_irreps(g, N))
    builder = {"T": _tetrahedral_irreps, "O": _octahedral_irreps, "I": _icosahedral_irreps}[kind]
    return FiniteGroup(kind, _polyhedral_elements(kind), builder)


def irreps(group):
    return group.irreps


def check_group_axioms(group):
    """Exhaustive closure/identity/inverse/associativity check; returns True or raises."""
    t = group.table
    n = group.order
    if not np.all(t[0] == np.arange(n)) or not np.all(t[:, 0] == np.arange(n)):
        raise GroupError("identity law fails")
    for i in range(n):
        if sorted(t[i]) != list(range(n)):
            raise GroupError("row is not a permutation")
        if t[i, group.inverse[i]] != 0:
            raise GroupError("inverse law fails")
    lhs = t[t, :]  # (a·b)·c indexed [a, b, c]
    rhs = t[:, t]  # a·(b·c) indexed [a, b, c]
    if not np.array_equal(lhs, rhs):
        raise GroupError("associativity fails")
    return True


def check_homomorphism(irrep):
    """Exact check that ``Γ(g)Γ(h) = Γ(gh)`` for every pair; returns True or raises."""
    G = irrep.group
    A = irrep.mats
    idx = np.arange(G.order)
    for g in range(G.order):
        prod = A.matmul_num(np.full(G.order, g), idx)
        target = A.num[G.table[g]] * A.den
        if not np.array_equal(prod, target):
            raise GroupError(f"{irrep} is not a homomorphism at element {g}")
    return True


def inner_product(chars1, chars2, group):
    """Exact (1/|G|) Σ_g χ₁(g) χ₂(g)*."""
    total = Cyclotomic.rational(0)
    for cls in group.classes:
        g = cls[0]
        total = total + chars1[g] * chars2[g].conjugate() * len(cls)
    return total / group.order


def tensor_decompose(gamma1, gamma2):
    """Multiplicity of every irrep in ``Γ₁ ⊗ Γ₂`` (exact character inner products)."""
    if gamma1.group is not gamma2.group:
        raise GroupError("irreps belong to different groups")
    G = gamma1.group
    chi = [a * b for a, b in zip(gamma1.characters, gamma2.characters)]
    out = {}
    for ir in G.irreps:
        m = inner_product(chi, ir.characters, G).to_rational()
        if m.denominator != 1:
            raise ArithmeticError("non-integral tensor multiplicity")
        if m:
            out[ir.label] = int(m)
    return out


def rotation_character(group, g, l):
    """Exact ``tr D^ℓ(g)`` from the element's order and turn count."""
    return dirichlet_kernel(l, group.orders[g], group.turns[g])


# --- quotients and isomorphism fingerprints ---------------------------------


def _table_fingerprint(table):
    n = len(table)
    orders = []
    for i in range(n):
        k, cur = 1, i
        while cur != 0:
            cur = table[cur][i]
            k += 1
        orders.append(k)
    abelian = all(table[i][j] == table[j][i] for i in range(n) for j in range(n))
    return n, abelian, tuple(sorted(orders))


def quotient_table(table, inverse, kernel):
    """Multiplication table of G/K (cosets ordered by smallest member).

    Raises if ``kernel`` is not a normal subgroup.
    """
    n = len(table)
    K = set(int(k) for k in kernel)
    if 0 not in K or any(table[a][b] not in K for a in K for b in K):
        raise GroupError("kernel is not a subgroup")
    for g in range(n):
        for k in K:
            if table[table[g][k]][inverse[g]] not in K:
                raise GroupError("kernel is not a normal subgroup")
    coset_of = [-1] * n
    reps = []
    for g in range(n):
        if coset_of[g] < 0:
            for k in K:
                coset_of[table[g][k]] = len(reps)
            reps.append(g)
    q = [[coset_of[table[a][b]] for b in reps] for a in reps]
    return q, reps, coset_of


@lru_cache(maxsize=None)
def _catalog_fingerprint(label):
    kind, M = label[0], int(label[1:]) if len(label) > 1 else None
    if kind == "C":
        orders = sorted(M // gcd(k, M) for k in range(M))
        return M, True, tuple(orders)
    if kind == "D":
        orders = sorted([M // gcd(k, M) for k in range(M)] + [2] * M)
        return 2 * M, M <= 2, tuple(orders)
    G = build_group(label)
    return _table_fingerprint(G.table.tolist())


def identify(fingerprint):
    """Isomorphism label among C_M, D_M, T, O, I for a fingerprint tuple."""
    n = fingerprint[0]
    cands = [f"C{n}"]
    if n % 2 == 0 and n >= 4:
        cands.append(f"D{n // 2}")
    cands += {12: ["T"], 24: ["O"], 60: ["I"]}.get(n, [])
    for c in cands:
        if _catalog_fingerprint(c) == fingerprint:
            return c
    raise GroupError(f"quotient of order {n} is outside the C/D/T/O/I catalog")


def subgroup_quotient(group, kernel):
    """Isomorphism class label of ``group / kernel``."""
    q, _, _ = quotient_table(group.table.tolist(), list(group.inverse), kernel)
    return identify(_table_fingerprint(q))


# --- continuous groups ---------------------------------------------------------


@dataclass(frozen=True)
class ContinuousGroup:
    """C∞ (rotations about z) or D∞ (adds the π-flip about y).

    Irreps: C∞ has ``a`` (λ=0) and integer λ ≠ 0, written ``l<λ>``;
    D∞ has ``a1``, ``a2`` and two-dimensional ``e<λ>`` for λ ≥ 1.
    """

    name: str

    @property
    def dihedral(self):
        return self.name == "Dinf"

    def irrep_labels(self, lmax):
        if self.dihedral:
            return ["a1", "a2"] + [f"e{k}" for k in range(1, lmax + 1)]
        return ["a"] + [f"l{k}" for k in range(-lmax, lmax + 1) if k]

    def irrep_dim(self, label):
        return 2 if label.startswith("e") else 1

    def omegas(self, label, l):
        """The ``|ω⟩`` states of ``D^ℓ*`` spanning the irrep's copies at ℓ."""
        label = normalize_label(label)
        if label in ("a", "a1"):
            return [0] if (not self.dihedral or l % 2 == 0) else []
        if label == "a2":
            return [0] if (self.dihedral and l % 2 == 1) else []
        if label.startswith("e") and self.dihedral:
            k = int(label[1:])
            return [-k, k] if k <= l else []
        if label.startswith("l") and not self.dihedral:
            k = int(label[1:])
            return [k] if abs(k) <= l else []
        raise GroupError(f"{self.name} has no irrep {label!r}")

    def multiplicity(self, label, l):
        w = self.omegas(label, l)
        return 1 if w else 0

    def monodromy(self, label):
        label = normalize_label(label)
        if label in ("a", "a1"):
            return "C1"
        if label == "a2":
            return "C2"
        return "not flat, out of catalog"


def continuous_group(name):
    kind, N = parse_group_name(name)
    if N != math.inf:
        raise GroupError(f"{name} is finite")
    return ContinuousGroup(f"{kind}inf")


def get_group(name):
    kind, N = parse_group_name(name)
    return continuous_group(name) if N == math.inf else build_group(name)
