"""Cutoff functions: the plateau bump phi and the annulus bump psi.

``phi`` is the indicator of ``[-9/8, 9/8]`` convolved with the standard
mollifier of radius ``1/8``.  It is exactly one on ``[-1, 1]``, exactly zero
off ``(-5/4, 5/4)``, even, nonincreasing in ``|x|`` and equal to ``1/2`` at
``|x| = 9/8``.  ``psi(x) = phi(x) - phi(2x)`` lives on ``1/2 <= |x| <= 5/4``.

The convolution is evaluated through the mollifier's distribution function,
computed by 64-point Gauss-Legendre quadrature (error below 1e-14).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss

__all__ = [
    "MOLLIFIER_RADIUS",
    "PLATEAU_HALF_WIDTH",
    "mollifier",
    "mollifier_cdf",
    "plateau_bump",
    "annulus_bump",
    "plateau_bump_ft",
    "annulus_bump_ft",
]

MOLLIFIER_RADIUS = 1 / 8
PLATEAU_HALF_WIDTH = 9 / 8

_GL_X, _GL_W = leggauss(64)


def _unit_bump(y):
    y = np.asarray(y, dtype=float)
    inside = np.abs(y) < 1
    out = np.zeros_like(y)
    yi = y[inside]
    out[inside] = np.exp(-1.0 / (1.0 - yi * yi))
    return out


def _half_mass(z):
    """integral_0^z of the unnormalised unit bump, 0 <= z <= 1."""
    z = np.asarray(z, dtype=float)
    nodes = z[..., None] * (_GL_X + 1) / 2
    return (_unit_bump(nodes) * _GL_W).sum(-1) * z / 2


_MASS = 2 * float(_half_mass(np.array(1.0)))


def mollifier(x, delta: float = MOLLIFIER_RADIUS):
    """Standard mollifier of radius ``delta`` with unit integral."""
    return _unit_bump(np.asarray(x, dtype=float) / delta) / (_MASS * delta)


def mollifier_cdf(u):
    """Distribution function of the unit-radius mollifier (exact 0 / 1 off (-1, 1))."""
    u = np.asarray(u, dtype=float)
    out = np.where(u >= 1, 1.0, 0.0)
    mid = np.abs(u) < 1
    um = u[mid]
    out[mid] = 0.5 + np.sign(um) * _half_mass(np.abs(um)) / _MASS
    return out


def plateau_bump(x):
    """phi(x); one on [-1, 1], zero off (-5/4, 5/4)."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.where(x <= 1.0, 1.0, 0.0)
    edge = (x > 1.0) & (x < 1.25)
    xe = x[edge]
    d, a = MOLLIFIER_RADIUS, PLATEAU_HALF_WIDTH
    out[edge] = mollifier_cdf((xe + a) / d) - mollifier_cdf((xe - a) / d)
    return out if out.ndim else float(out)


def annulus_bump(x):
    """psi(x) = phi(x) - phi(2x)."""
    x = np.asarray(x, dtype=float)
    return plateau_bump(x) - plateau_bump(2 * x)


def _mollifier_char(k):
    """integral of the unit-mass unit mollifier against cos(k y)."""
    k = np.abs(np.asarray(k, dtype=float))
    kmax = float(k.max()) if k.size else 0.0
    panels = max(8, int(math.ceil(kmax / 6.0)))
    edges = np.linspace(0.0, 1.0, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    gx, gw = leggauss(24)
    y = (lo[:, None] + (hi - lo)[:, None] * (gx + 1) / 2).ravel()
    w = ((hi - lo)[:, None] / 2 * gw).ravel() * _unit_bump(y)
    flat = k.ravel()
    out = np.empty_like(flat)
    for i0 in range(0, flat.size, 4096):
        kk = flat[i0:i0 + 4096]
        out[i0:i0 + 4096] = np.cos(kk[:, None] * y[None, :]) @ w
    return (2 * out / _MASS).reshape(k.shape)


def plateau_bump_ft(omega):
    """Unitary Fourier transform of phi, ``(2 pi)^{-1/2} integral phi(t) e^{-i t omega} dt``."""
    w = np.asarray(omega, dtype=float)
    a = PLATEAU_HALF_WIDTH
    with np.errstate(invalid="ignore", divide="ignore"):
        box = np.where(w == 0, 2 * a, 2 * np.sin(a * w) / np.where(w == 0, 1.0, w))
    return box * _mollifier_char(MOLLIFIER_RADIUS * w) / math.sqrt(2 * math.pi)


def annulus_bump_ft(omega):
    w = np.asarray(omega, dtype=float)
    return plateau_bump_ft(w) - 0.5 * plateau_bump_ft(w / 2)
