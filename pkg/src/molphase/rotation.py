"""
molphase.rotation
-----------------

Rotations of rigid bodies, Wigner D-matrices and angular-momentum
generators for integer angular momentum.

Conventions
~~~~~~~~~~~
Euler angles are active z-y-z: ``R(α, β, γ) = Rz(α) Ry(β) Rz(γ)``.
Wigner matrices use the standard form

.. math::

   D^\\ell_{m m'}(\\alpha, \\beta, \\gamma)
       = e^{-i m \\alpha}\\, d^\\ell_{m m'}(\\beta)\\, e^{-i m' \\gamma},

with rows and columns ordered ``m = -ℓ, …, ℓ``.  With this choice
``conj(D(z, φ))`` is ``diag(exp(i m φ))`` and ``D(y, π)`` maps ``|ω⟩`` to
``(-1)^(ℓ+ω) |-ω⟩``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

#: resource guard on the angular momentum accepted by the D-matrix routines
LCAP = 128


def set_lcap(value):
    """Change the global ℓ guard; returns the previous value."""
    global LCAP
    old = LCAP
    LCAP = int(value)
    return old


def _check_l(l):
    if int(l) != l or l < 0:
        raise ValueError(f"angular momentum must be a nonnegative integer, got {l}")
    if l > LCAP:
        raise ValueError(f"ℓ={l} exceeds the configured cap {LCAP}")
    return int(l)


def _qmul(p, q):
    w1, x1, y1, z1 = p
    w2, x2, y2, z2 = q
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


@dataclass(frozen=True)
class Rotation:
    """A proper rotation stored as a unit quaternion ``(w, x, y, z)``.

    ``r1 * r2`` is the composition "first ``r2``, then ``r1``", i.e. the
    rotation matrix of the product is ``r1.matrix @ r2.matrix``.
    """

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("quaternion must be finite and nonzero")
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)) / n)

    # constructors

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_axis_angle(cls, axis, angle):
        v = np.asarray(axis, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise ValueError("rotation axis must be nonzero")
        v = v / nv
        h = 0.5 * float(angle)
        s = math.sin(h)
        return cls(math.cos(h), s * v[0], s * v[1], s * v[2])

    @classmethod
    def from_euler(cls, alpha, beta, gamma):
        qa = (math.cos(alpha / 2), 0.0, 0.0, math.sin(alpha / 2))
        qb = (math.cos(beta / 2), 0.0, math.sin(beta / 2), 0.0)
        qg = (math.cos(gamma / 2), 0.0, 0.0, math.sin(gamma / 2))
        return cls(*_qmul(_qmul(qa, qb), qg))

    @classmethod
    def from_matrix(cls, R):
        R = np.asarray(R, dtype=float)
        tr = R[0, 0] + R[1, 1] + R[2, 2]
        # Shepperd's method: pivot on the largest diagonal combination
        cands = [tr, R[0, 0], R[1, 1], R[2, 2]]
        k = int(np.argmax(cands))
        if k == 0:
            s = 2.0 * math.sqrt(max(1.0 + tr, 0.0))
            q = (0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s)
        elif k == 1:
            s = 2.0 * math.sqrt(max(1.0 + R[0, 0] - R[1, 1] - R[2, 2], 0.0))
            q = ((R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s)
        elif k == 2:
            s = 2.0 * math.sqrt(max(1.0 - R[0, 0] + R[1, 1] - R[2, 2], 0.0))
            q = ((R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s)
        else:
            s = 2.0 * math.sqrt(max(1.0 - R[0, 0] - R[1, 1] + R[2, 2], 0.0))
            q = ((R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s)
        return cls(*q)

    # algebra

    @property
    def quat(self):
        return np.array([self.w, self.x, self.y, self.z])

    def __mul__(self, other):
        if not isinstance(other, Rotation):
            return NotImplemented
        return Rotation(*_qmul(tuple(self.quat), tuple(other.quat)))

    def inverse(self):
        return Rotation(self.w, -self.x, -self.y, -self.z)

    @property
    def matrix(self):
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])

    @property
    def angle(self):
        """Rotation angle in ``[0, π]``."""
        v = math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        return 2.0 * math.atan2(v, abs(self.w))

    def axis_angle(self):
        v = np.array([self.x, self.y, self.z])
        nv = np.linalg.norm(v)
        if nv < 1e-15:
            return np.array([0.0, 0.0, 1.0]), 0.0
        return v / nv, 2.0 * math.atan2(nv, self.w)

    def euler(self):
        """Return ``(α, β, γ)`` with ``β ∈ [0, π]``; ``γ = 0`` at the poles."""
        R = self.matrix
        beta = math.atan2(math.hypot(R[0, 2], R[1, 2]), R[2, 2])
        sb = math.sin(beta)
        if sb > 1e-9:
            alpha = math.atan2(R[1, 2], R[0, 2])
            gamma = math.atan2(R[2, 1], -R[2, 0])
        elif R[2, 2] > 0:
            alpha, gamma = math.atan2(R[1, 0], R[0, 0]), 0.0
        else:
            alpha, gamma = math.atan2(-R[1, 0], R[1, 1]), 0.0
        return alpha % (2 * math.pi), beta, gamma % (2 * math.pi)

    def canonical_quat(self):
        """Quaternion with the sign fixed so the first nonzero entry is positive."""
        q = self.quat
        for c in q:
            if abs(c) > 1e-12:
                return q if c > 0 else -q
        return q

    def distance(self, other):
        """Rotation angle of ``self⁻¹ other``."""
        return (self.inverse() * other).angle

    def isclose(self, other, tol=1e-9):
        return abs(abs(float(np.dot(self.quat, other.quat))) - 1.0) < tol * tol or \
            np.max(np.abs(self.matrix - other.matrix)) < tol


def rotation_from_euler(alpha, beta, gamma):
    """Rotation from active z-y-z Euler angles (radians)."""
    return Rotation.from_euler(alpha, beta, gamma)


# --- angular momentum ------------------------------------------------------


@dataclass(frozen=True)
class MomentumGenerators:
    l: int
    Lx: np.ndarray
    Ly: np.ndarray
    Lz: np.ndarray

    def __getitem__(self, axis):
        return {"x": self.Lx, "y": self.Ly, "z": self.Lz}[axis]


@lru_cache(maxsize=None)
def _generators(l):
    m = np.arange(-l, l + 1, dtype=float)
    Lz = np.diag(m).astype(complex)
    # L+ |m> = sqrt(l(l+1) - m(m+1)) |m+1>
    up = np.sqrt(l * (l + 1) - m[:-1] * (m[:-1] + 1))
    Lp = np.diag(up, -1).astype(complex)
    Lm = Lp.T.copy()
    Lx = 0.5 * (Lp + Lm)
    Ly = -0.5j * (Lp - Lm)
    for a in (Lx, Ly, Lz):
        a.setflags(write=False)
    return Lx, Ly, Lz


def generators(l):
    """Angular-momentum matrices ``L_x, L_y, L_z`` in the ``|ℓ m⟩`` basis."""
    l = _check_l(l)
    return MomentumGenerators(l, *_generators(l))


# --- Wigner matrices -------------------------------------------------------


@lru_cache(maxsize=None)
def _ly_eigen(l):
    _, Ly, _ = _generators(l)
    vals, vecs = np.linalg.eigh(Ly)
    # the spectrum of L_y is exactly -l..l
    vals = np.rint(vals.real)
    return vals, vecs


def little_d(l, beta):
    """Wigner small-d matrix ``d^ℓ(β) = exp(-iβ L_y)``.

    Evaluated through the eigen-decomposition of ``L_y``, whose spectrum is
    known exactly; unlike the factorial sum this does not cancel
    catastrophically at large ℓ.  ``beta`` may be an array, in which case
    the result has shape ``beta.shape + (2ℓ+1, 2ℓ+1)``.
    """
    l = _check_l(l)
    vals, V = _ly_eigen(l)
    b = np.asarray(beta, dtype=float)
    ph = np.exp(-1j * b[..., None] * vals)
    d = np.einsum("ik,...k,jk->...ij", V, ph, V.conj())
    return d.real


def _log_fact(n):
    return math.lgamma(n + 1)


def little_d_factorial(l, beta):
    """Small-d matrix from the explicit factorial sum (log-factorial weights).

    Accurate to roughly ``1e-13`` up to ℓ ≈ 20; kept as an independent
    route for cross-checking :func:`little_d`.
    """
    l = _check_l(l)
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    n = 2 * l + 1
    out = np.zeros((n, n))
    for i, m in enumerate(range(-l, l + 1)):
        for j, mp in enumerate(range(-l, l + 1)):
            pre = 0.5 * (_log_fact(l + m) + _log_fact(l - m) + _log_fact(l + mp) + _log_fact(l - mp))
            total = 0.0
            for k in range(max(0, mp - m), min(l + mp, l - m) + 1):
                e_c = 2 * l + mp - m - 2 * k
                e_s = m - mp + 2 * k
                mag = pre - (_log_fact(l + mp - k) + _log_fact(k) + _log_fact(m - mp + k) + _log_fact(l - m - k))
                term = math.exp(mag)
                if e_c:
                    term *= c ** e_c
                if e_s:
                    term *= s ** e_s
                total += -term if (m - mp + k) % 2 else term
            out[i, j] = total
    return out


def little_d_mp(l, beta, dps=50):
    """High-precision small-d via mpmath; slow, used as a test oracle."""
    import mpmath

    with mpmath.workdps(dps):
        b = mpmath.mpf(beta)
        c, s = mpmath.cos(b / 2), mpmath.sin(b / 2)
        n = 2 * l + 1
        out = np.zeros((n, n))
        f = mpmath.factorial
        for i, m in enumerate(range(-l, l + 1)):
            for j, mp in enumerate(range(-l, l + 1)):
                pre = mpmath.sqrt(f(l + m) * f(l - m) * f(l + mp) * f(l - mp))
                total = mpmath.mpf(0)
                for k in range(max(0, mp - m), min(l + mp, l - m) + 1):
                    den = f(l + mp - k) * f(k) * f(m - mp + k) * f(l - m - k)
                    term = c ** (2 * l + mp - m - 2 * k) * s ** (m - mp + 2 * k) / den
                    total += -term if (m - mp + k) % 2 else term
                out[i, j] = float(pre * total)
    return out


@dataclass(frozen=True)
class WignerBlock:
    l: int
    matrix: np.ndarray

    def conj(self):
        return WignerBlock(self.l, self.matrix.conj())


def wigner_matrix(l, g):
    """``D^ℓ(g)`` as a bare complex array."""
    l = _check_l(l)
    if l == 0:
        return np.ones((1, 1), dtype=complex)
    a, b, c = g.euler()
    m = np.arange(-l, l + 1)
    d = little_d(l, b)
    return np.exp(-1j * m * a)[:, None] * d * np.exp(-1j * m * c)[None, :]


def wigner_d(l, g):
    """Wigner D-matrix of rotation ``g`` for angular momentum ``l``."""
    return WignerBlock(_check_l(l), wigner_matrix(l, g))


def wigner_grid(l, alpha, beta, gamma):
    """D-matrices on a product grid; shape ``(len α, len β, len γ, n, n)``."""
    l = _check_l(l)
    m = np.arange(-l, l + 1)
    ea = np.exp(-1j * np.multiply.outer(np.asarray(alpha), m))
    eg = np.exp(-1j * np.multiply.outer(np.asarray(gamma), m))
    d = little_d(l, np.asarray(beta))
    return ea[:, None, None, :, None] * d[None, :, None, :, :] * eg[None, None, :, None, :]


def character(l, theta):
    """``tr D^ℓ`` for a rotation by ``theta``: ``sin((ℓ+½)θ)/sin(θ/2)``."""
    s = math.sin(theta / 2)
    if abs(s) < 1e-12:
        return float(2 * l + 1) if math.cos(theta / 2) > 0 else float((-1) ** (2 * l) * (2 * l + 1))
    return math.sin((l + 0.5) * theta) / s
