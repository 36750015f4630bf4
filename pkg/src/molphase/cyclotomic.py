"""Exact arithmetic in cyclotomic fields Q(ζ_n).

Elements are stored in the power basis ``1, ζ, …, ζ^(φ(n)-1)`` after
reduction modulo the n-th cyclotomic polynomial, which makes the
representation canonical: two elements are equal iff their coefficient
tuples agree (after lifting to a common order).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import cmath

import numpy as np


def _lcm(a, b):
    return a * b // gcd(a, b)


def _polydiv_exact(num, den):
    """Quotient of integer polynomials (low-to-high coefficients), exact."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // lead
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients (low to high) of Φ_n."""
    if n < 1:
        raise ValueError("order must be positive")
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p = _polydiv_exact(p, cyclotomic_polynomial(d))
    return tuple(p)


def totient(n):
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _reduction_table(n, top):
    """Integer matrix sending ζ^e (e < top) to its reduced coefficient vector."""
    phi = totient(n)
    cp = cyclotomic_polynomial(n)
    R = np.zeros((top, phi), dtype=np.int64)
    for e in range(top):
        if e < phi:
            R[e, e] = 1
        else:
            # ζ^e = ζ * ζ^(e-1); multiply the previous row by ζ and reduce
            prev = R[e - 1]
            row = np.zeros(phi + 1, dtype=np.int64)
            row[1:] = prev
            lead = row[phi]
            row[:phi] -= lead * np.array(cp[:phi], dtype=np.int64)
            R[e] = row[:phi]
    R.setflags(write=False)
    return R


def _reduce(coeffs, n):
    """Reduce a coefficient list of arbitrary length modulo Φ_n."""
    cp = cyclotomic_polynomial(n)
    phi = len(cp) - 1
    c = list(coeffs)
    for d in range(len(c) - 1, phi - 1, -1):
        lead = c[d]
        if lead:
            for j in range(phi + 1):
                c[d - phi + j] -= lead * cp[j]
    c = c[:phi] + [0] * max(0, phi - len(c))
    return c


class Cyclotomic:
    """An element of Q(ζ_n), ζ = exp(2πi/n), with rational coefficients."""

    __slots__ = ("n", "c")

    def __init__(self, n, coeffs):
        self.n = int(n)
        self.c = tuple(Fraction(x) for x in _reduce(coeffs, self.n))

    # construction

    @classmethod
    def rational(cls, q, n=1):
        return cls(n, [Fraction(q)])

    @classmethod
    def root(cls, n, k=1):
        """ζ_n^k."""
        k %= n
        c = [0] * (k + 1)
        c[k] = 1
        return cls(n, c)

    @classmethod
    def from_terms(cls, n, terms):
        """Build from a sparse map exponent → rational coefficient."""
        c = [0] * n
        for k, v in terms.items():
            c[k % n] += Fraction(v)
        return cls(n, c)

    @classmethod
    def sqrt5(cls):
        # √5 = 1 + 2(ζ5 + ζ5⁴)
        return cls.from_terms(5, {0: 1, 1: 2, 4: 2})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # structure

    def lift(self, m):
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"Q(ζ_{self.n}) is not a subfield of Q(ζ_{m})")
        step = m // self.n
        c = [Fraction(0)] * ((len(self.c) - 1) * step + 1)
        for k, v in enumerate(self.c):
            c[k * step] = v
        return Cyclotomic(m, c)

    def _common(self, other):
        other = Cyclotomic.coerce(other)
        m = _lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    def terms(self):
        """Sparse map exponent → coefficient of the canonical form."""
        return {k: v for k, v in enumerate(self.c) if v}

    # arithmetic

    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.n, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.c])

    def __sub__(self, other):
        try:
            return self + (-Cyclotomic.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [x * other for x in self.c])
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        prod = [Fraction(0)] * (len(a.c) + len(b.c) - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(a.n, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [x / Fraction(other) for x in self.c])
        other = Cyclotomic.coerce(other)
        if other.is_rational():
            return self / other.to_rational()
        return self * other.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Cyclotomic.rational(1, self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, j):
        """Apply the automorphism ζ → ζ^j (gcd(j, n) = 1)."""
        if gcd(j, self.n) != 1:
            raise ValueError("exponent must be a unit modulo n")
        return Cyclotomic.from_terms(self.n, {k * j: v for k, v in self.terms().items()})

    def conjugate(self):
        return self.galois(-1 % self.n) if self.n > 2 else self

    def norm(self):
        """Field norm to Q, product over all Galois conjugates."""
        out = Cyclotomic.rational(1, self.n)
        for j in range(1, self.n):
            if gcd(j, self.n) == 1:
                out = out * self.galois(j)
        return out.to_rational()

    def inverse(self):
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        rest = Cyclotomic.rational(1, self.n)
        for j in range(2, self.n):
            if gcd(j, self.n) == 1:
                rest = rest * self.galois(j)
        return rest / nrm

    # comparison / conversion

    def __eq__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a.c == b.c

    __hash__ = None

    def is_zero(self):
        return not any(self.c)

    def is_rational(self):
        return not any(self.c[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.c[0] if self.c else Fraction(0)

    def to_complex(self):
        return sum(complex(float(v)) * cmath.exp(2j * cmath.pi * k / self.n)
                   for k, v in enumerate(self.c) if v) + 0j

    __complex__ = to_complex

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.to_rational()})"
        parts = " + ".join(f"{v}·ζ{self.n}^{k}" for k, v in self.terms().items())
        return f"Cyclotomic({parts})"


def dirichlet_kernel(l, n, j):
    """Exact character Σ_{|m|≤l} ζ_n^{jm} of ``D^l`` at rotation angle 2πj/n."""
    counts = [0] * n
    for m in range(-l, l + 1):
        counts[(j * m) % n] += 1
    return Cyclotomic(n, _reduce(counts, n))


# --- exact matrices --------------------------------------------------------


class CycArray:
    """A stack of matrices over Q(ζ_n) with a common denominator.

    ``num`` holds int64 numerators with shape ``(..., r, c, φ(n))``; the value
    is ``num / den``.  Used for batch homomorphism checks that would be far
    too slow entry-by-entry.
    """

    def __init__(self, n, num, den=1):
        self.n = n
        self.num = np.asarray(num, dtype=np.int64)
        self.den = int(den)

    @classmethod
    def from_entries(cls, n, mats):
        """From nested lists (stack, rows, cols) of Cyclotomic entries."""
        phi = totient(n)
        ents = [[[Cyclotomic.coerce(x).lift(n) for x in row] for row in m] for m in mats]
        den = 1
        for m in ents:
            for row in m:
                for x in row:
                    for v in x.c:
                        den = _lcm(den, v.denominator)
        arr = np.zeros((len(ents), len(ents[0]), len(ents[0][0]), phi), dtype=np.int64)
        for g, m in enumerate(ents):
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    arr[g, i, j] = [int(v * den) for v in x.c]
        return cls(n, arr, den)

    def entry(self, *idx):
        return Cyclotomic(self.n, [Fraction(int(v), self.den) for v in self.num[idx]])

    def to_complex(self):
        phi = self.num.shape[-1]
        z = np.exp(2j * np.pi * np.arange(phi) / self.n)
        return (self.num @ z) / self.den

    def matmul_num(self, a, b):
        """Numerators (denominator ``den²``) of ``A[a] @ B[b]`` for index arrays."""
        phi = self.num.shape[-1]
        R = _reduction_table(self.n, 2 * phi - 1)
        A, B = self.num[a], self.num[b]
        prod = np.einsum("...ikp,...kjq->...ijpq", A, B)
        flat = np.zeros(prod.shape[:-2] + (2 * phi - 1,), dtype=np.int64)
        for p in range(phi):
            flat[..., p:p + phi] += prod[..., p, :]
        return flat @ R

    def trace(self, g):
        t = self.num[g].trace(axis1=0, axis2=1)
        return Cyclotomic(self.n, [Fraction(int(v), self.den) for v in t])
