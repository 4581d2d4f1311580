"""Truncated multivariate Taylor arithmetic in the four real coordinates (x, y, u, v).

A Jet stores the Taylor coefficients (partial derivatives divided by the
factorial of the multi-index) of a smooth complex-valued function of
tau = x + iy and z = u + iv up to a fixed total order.  All catalog series
in the library are evaluated term by term in this arithmetic, which gives
closed-form partial derivatives to machine precision -- the "exact jet"
path that the third-order operator compositions rely on.

Conjugation is coefficient-wise because the underlying variables are real.
"""

import cmath
import math
from functools import lru_cache

import numpy as np

NVARS = 4  # x, y, u, v
VAR_X, VAR_Y, VAR_U, VAR_V = range(NVARS)


@lru_cache(maxsize=None)
def monomials(order):
    """All exponent 4-tuples of total degree <= order, grouped by degree.

    Degree blocks are contiguous so that the list for a smaller order is a
    prefix of the list for a larger one (truncation is a slice).
    """
    mons = []
    for deg in range(order + 1):
        block = []
        for a in range(deg + 1):
            for b in range(deg - a + 1):
                for c in range(deg - a - b + 1):
                    d = deg - a - b - c
                    block.append((a, b, c, d))
        block.sort()
        mons.extend(block)
    return tuple(mons)


@lru_cache(maxsize=None)
def monomial_index(order):
    return {mon: i for i, mon in enumerate(monomials(order))}


@lru_cache(maxsize=None)
def _mul_table(order):
    """Index triples (i, j, k) with monomial_i * monomial_j = monomial_k."""
    mons = monomials(order)
    idx = monomial_index(order)
    ii, jj, kk = [], [], []
    for i, a in enumerate(mons):
        da = sum(a)
        for j, b in enumerate(mons):
            if da + sum(b) > order:
                continue
            k = idx[(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])]
            ii.append(i)
            jj.append(j)
            kk.append(k)
    return np.asarray(ii), np.asarray(jj), np.asarray(kk)


@lru_cache(maxsize=None)
def _deriv_table(order, var):
    """For each target monomial of order-1, the source index and factor."""
    mons_lo = monomials(order - 1)
    idx_hi = monomial_index(order)
    src = np.empty(len(mons_lo), dtype=np.intp)
    fac = np.empty(len(mons_lo))
    for t, a in enumerate(mons_lo):
        bumped = list(a)
        bumped[var] += 1
        src[t] = idx_hi[tuple(bumped)]
        fac[t] = a[var] + 1
    return src, fac


class Jet:
    __slots__ = ("order", "c")

    def __init__(self, order, coef):
        self.order = order
        self.c = coef

    @classmethod
    def constant(cls, val, order):
        c = np.zeros(len(monomials(order)), dtype=complex)
        c[0] = val
        return cls(order, c)

    @classmethod
    def variable(cls, var, val, order):
        c = np.zeros(len(monomials(order)), dtype=complex)
        c[0] = val
        if order >= 1:
            e = [0, 0, 0, 0]
            e[var] = 1
            c[monomial_index(order)[tuple(e)]] = 1.0
        return cls(order, c)

    @property
    def value(self):
        return complex(self.c[0])

    def copy(self):
        return Jet(self.order, self.c.copy())

    def truncate(self, order):
        if order == self.order:
            return self
        if order > self.order:
            c = np.zeros(len(monomials(order)), dtype=complex)
            c[: len(self.c)] = self.c
            return Jet(order, c)
        return Jet(order, self.c[: len(monomials(order))].copy())

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order == self.order:
                return self, other
            n = min(self.order, other.order)
            return self.truncate(n), other.truncate(n)
        return self, Jet.constant(other, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a.order, a.c + b.c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, -self.c)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.order, a.c - b.c)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.order, b.c - a.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, self.c * other)
        a, b = self._coerce(other)
        ii, jj, kk = _mul_table(a.order)
        out = np.zeros_like(a.c)
        np.add.at(out, kk, a.c[ii] * b.c[jj])
        return Jet(a.order, out)

    def __rmul__(self, other):
        return Jet(self.order, self.c * other)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, self.c / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, int):
            if n < 0:
                return self.reciprocal() ** (-n)
            out = Jet.constant(1.0, self.order)
            base = self
            e = n
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        return self.cpow(n)

    def conj(self):
        return Jet(self.order, np.conj(self.c))

    def deriv(self, var):
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        src, fac = _deriv_table(self.order, var)
        return Jet(self.order - 1, self.c[src] * fac)

    # -- analytic functions ----------------------------------------------

    def apply_taylor(self, ts):
        """Compose with a univariate function given by Taylor coefficients.

        ts[j] must equal f^(j)(a0) / j! where a0 is this jet's value.
        """
        tilde = self.copy()
        tilde.c[0] = 0.0
        out = Jet.constant(ts[-1], self.order)
        for j in range(len(ts) - 2, -1, -1):
            out = out * tilde + ts[j]
        return out

    def apply_derivatives(self, ds):
        ts = [d / math.factorial(j) for j, d in enumerate(ds)]
        return self.apply_taylor(ts)

    def exp(self):
        e0 = cmath.exp(self.value)
        ts = [e0 / math.factorial(j) for j in range(self.order + 1)]
        return self.apply_taylor(ts)

    def reciprocal(self):
        a0 = self.value
        if a0 == 0:
            raise ZeroDivisionError("jet with zero constant term")
        ts = [(-1) ** j * a0 ** (-(j + 1)) for j in range(self.order + 1)]
        return self.apply_taylor(ts)

    def cpow(self, alpha):
        """Principal-branch power with arbitrary (complex) exponent."""
        a0 = self.value
        if a0 == 0:
            raise ZeroDivisionError("jet power at zero base")
        ts = [cmath.exp(alpha * cmath.log(a0))]
        for j in range(1, self.order + 1):
            ts.append(ts[-1] * (alpha - j + 1) / (j * a0))
        return self.apply_taylor(ts)

    def sqrt(self):
        return self.cpow(0.5)

    def real(self):
        return (self + self.conj()) * 0.5

    def imag(self):
        return (self - self.conj()) * (-0.5j)

    # -- output ----------------------------------------------------------

    def partial(self, alpha):
        """Mixed partial derivative for an exponent 4-tuple."""
        idx = monomial_index(self.order).get(tuple(alpha))
        if idx is None:
            raise KeyError("order of %s exceeds jet order %d" % (alpha, self.order))
        f = 1.0
        for a in alpha:
            f *= math.factorial(a)
        return complex(self.c[idx]) * f

    def table(self):
        return {mon: self.partial(mon) for mon in monomials(self.order)}

    def __repr__(self):
        return "Jet(order=%d, value=%r)" % (self.order, self.value)


# -- Wirtinger derivatives ----------------------------------------------

def d_tau(j):
    return (j.deriv(VAR_X) - 1j * j.deriv(VAR_Y)) * 0.5


def d_taubar(j):
    return (j.deriv(VAR_X) + 1j * j.deriv(VAR_Y)) * 0.5


def d_z(j):
    return (j.deriv(VAR_U) - 1j * j.deriv(VAR_V)) * 0.5


def d_zbar(j):
    return (j.deriv(VAR_U) + 1j * j.deriv(VAR_V)) * 0.5
