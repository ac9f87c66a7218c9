"""Vectorised forward-mode automatic differentiation.

A :class:`Dual` carries a value array of shape ``S`` and ``k`` tangent arrays
stored as one array of shape ``(k,) + S``.  Putting the tangent axis first
lets ordinary numpy broadcasting and indexing act on the value axes only.

Arithmetic mixes freely with floats and numpy arrays.  The helper functions
:func:`exp`, :func:`log`, :func:`sqrt` and :func:`stack` dispatch on the
argument type so that model code can be written once and evaluated either on
plain arrays or on duals.
"""

from __future__ import annotations

import numpy as np


class Dual:
    __slots__ = ("val", "der")
    __array_ufunc__ = None  # ndarray (op) Dual defers to the reflected Dual method

    def __init__(self, val, der):
        self.val = np.asarray(val, dtype=float)
        self.der = np.asarray(der, dtype=float)

    @classmethod
    def seed(cls, x):
        """Seed ``x`` of shape ``S + (k,)`` with the identity along its last axis.

        The result has ``k`` tangents; tangent ``i`` is the unit vector in
        component ``i`` of every cell.
        """
        x = np.asarray(x, dtype=float)
        k = x.shape[-1]
        der = np.zeros((k,) + x.shape)
        idx = np.arange(k)
        der[idx, ..., idx] = 1.0
        return cls(x, der)

    @property
    def shape(self):
        return self.val.shape

    @property
    def ntangents(self):
        return self.der.shape[0]

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return Dual(self.val[key], self.der[(slice(None),) + key])

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.der + other.der)
        val = self.val + other
        return Dual(val, np.broadcast_to(self.der, self.der.shape[:1] + val.shape))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.der * other.val + self.val * other.der)
        other = np.asarray(other, dtype=float)
        return Dual(self.val * other, self.der * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            val = self.val / other.val
            return Dual(val, (self.der - val * other.der) / other.val)
        other = np.asarray(other, dtype=float)
        return Dual(self.val / other, self.der / other)

    def __rtruediv__(self, other):
        val = np.asarray(other, dtype=float) / self.val
        return Dual(val, -val / self.val * self.der)

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(n * log(self))
        n = float(n)
        return Dual(self.val**n, n * self.val ** (n - 1.0) * self.der)

    def exp(self):
        v = np.exp(self.val)
        return Dual(v, v * self.der)

    def log(self):
        return Dual(np.log(self.val), self.der / self.val)

    def sqrt(self):
        v = np.sqrt(self.val)
        return Dual(v, self.der / (2.0 * v))

    def sum(self, axis=None):
        if axis is None:
            return Dual(self.val.sum(), self.der.reshape(self.ntangents, -1).sum(axis=1))
        ax = axis if axis < 0 else axis + 1
        return Dual(self.val.sum(axis=axis), self.der.sum(axis=ax))

    def __repr__(self):
        return f"Dual(val={self.val!r}, ntangents={self.ntangents})"


def value(x):
    """Strip tangents; plain arrays pass through."""
    return x.val if isinstance(x, Dual) else np.asarray(x, dtype=float)


def exp(x):
    return x.exp() if isinstance(x, Dual) else np.exp(x)


def log(x):
    return x.log() if isinstance(x, Dual) else np.log(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Dual) else np.sqrt(x)


def stack(items, axis=-1):
    """``np.stack`` that understands duals.  ``axis`` refers to value axes."""
    duals = [it for it in items if isinstance(it, Dual)]
    if not duals:
        return np.stack([np.asarray(it, dtype=float) for it in items], axis=axis)
    k = duals[0].ntangents
    shape = np.broadcast_shapes(*(np.shape(value(it)) for it in items))
    vals, ders = [], []
    for it in items:
        if isinstance(it, Dual):
            vals.append(np.broadcast_to(it.val, shape))
            ders.append(np.broadcast_to(it.der, (k,) + shape))
        else:
            vals.append(np.broadcast_to(np.asarray(it, dtype=float), shape))
            ders.append(np.zeros((k,) + shape))
    der_axis = axis if axis < 0 else axis + 1
    return Dual(np.stack(vals, axis=axis), np.stack(ders, axis=der_axis))


def jacobian(fn, x):
    """Jacobian of a vector map ``fn: (..., n) -> (..., m)`` at ``x``.

    Returns an array of shape ``(..., m, n)``.
    """
    out = fn(Dual.seed(x))
    # der has shape (n, ..., m); move tangent axis to the end
    return np.moveaxis(out.der, 0, -1)
