"""Discrete space-time fields, their Fourier transforms, and the two norms.

Conventions
-----------
The continuous transform is the unitary one on R^2::

    u_hat(tau, xi) = (1/2pi) * integral u(t, x) exp(-i (t tau + x xi)) dt dx

so Plancherel holds with constant one.  On a grid with ``n_t x n_x`` samples
on the centred box ``[-T/2, T/2) x [-X/2, X/2)`` the transform is the
rectangle-rule discretisation of the integral above, i.e.
``FOURIER_NORM * dt * dx * fft2``, and frequencies are ``2 pi j / T`` for
``j in [-n/2, n/2)``.  Arrays are stored with the zero frequency (and the
origin) at index ``n // 2``.

Two frames are supported.  In the *lab* frame the spectral array is indexed
by ``(tau, xi)`` and the modulation ``tau - xi**3`` is evaluated from the grid
values.  In the *modulation* frame the spectral array is indexed by
``(mu, eta)`` with ``mu = tau - xi**3`` and ``xi = xi_shift + eta``; the physical
array then holds the co-moving envelope

    w(t, y) = u(t, y - 3 xi_shift**2 t) * exp(-i (xi_shift (y - 3 xi_shift**2 t) + xi_shift**3 t))

which has the same modulus slice by slice, so every ``L^q_t L^r_x`` norm is
unchanged.  This frame makes high-frequency, low-modulation fields cheap to
represent: the cubic phase is applied analytically instead of being sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .indices import INF, as_exponent

__all__ = [
    "FOURIER_NORM",
    "GridSpec",
    "SpacetimeField",
    "NormReport",
    "japanese",
    "xsb_norm",
    "mixed_norm",
    "norm_report",
    "airy_evolve",
    "airy_cutoff",
    "fractional_x_derivative",
    "lebesgue_norm_1d",
]

# one factor of 1/sqrt(2 pi) per dimension
FOURIER_NORM = 1.0 / (2.0 * math.pi)


def japanese(x):
    """<x> = sqrt(1 + x^2)."""
    return np.sqrt(1.0 + np.square(x))


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    t_extent: float
    x_extent: float
    n_t: int
    n_x: int

    def __post_init__(self):
        if not (self.t_extent > 0 and self.x_extent > 0):
            raise ValueError("grid extents must be positive")
        if not (_is_pow2(int(self.n_t)) and _is_pow2(int(self.n_x))):
            raise ValueError("grid counts must be powers of two")
        object.__setattr__(self, "t_extent", float(self.t_extent))
        object.__setattr__(self, "x_extent", float(self.x_extent))
        object.__setattr__(self, "n_t", int(self.n_t))
        object.__setattr__(self, "n_x", int(self.n_x))

    @property
    def shape(self):
        return (self.n_t, self.n_x)

    @property
    def dt(self):
        return self.t_extent / self.n_t

    @property
    def dx(self):
        return self.x_extent / self.n_x

    @property
    def dtau(self):
        return 2 * math.pi / self.t_extent

    @property
    def dxi(self):
        return 2 * math.pi / self.x_extent

    @property
    def t(self):
        return (np.arange(self.n_t) - self.n_t // 2) * self.dt

    @property
    def x(self):
        return (np.arange(self.n_x) - self.n_x // 2) * self.dx

    @property
    def tau(self):
        return (np.arange(self.n_t) - self.n_t // 2) * self.dtau

    @property
    def xi(self):
        return (np.arange(self.n_x) - self.n_x // 2) * self.dxi

    @property
    def tau_nyquist(self):
        return math.pi * self.n_t / self.t_extent

    @property
    def xi_nyquist(self):
        return math.pi * self.n_x / self.x_extent

    def require_cubic_resolution(self, xi_max: float, margin: float = 1.0):
        """Reject a lab-frame grid whose time Nyquist cannot hold ``xi_max**3``."""
        if xi_max > self.xi_nyquist:
            raise ValueError(f"xi support {xi_max:g} exceeds the space Nyquist {self.xi_nyquist:g}")
        if margin * xi_max**3 >= self.tau_nyquist:
            raise ValueError(
                f"xi^3 = {xi_max**3:g} (margin {margin:g}) reaches the time Nyquist {self.tau_nyquist:g}; "
                "refine n_t or shrink t_extent"
            )

    def as_dict(self):
        return {"t_extent": self.t_extent, "x_extent": self.x_extent, "n_t": self.n_t, "n_x": self.n_x}


class SpacetimeField:
    """Complex samples of u on a :class:`GridSpec`, with a lazily computed twin.

    Construct with exactly one of ``physical`` or ``spectral``; the other
    representation is derived on first access and cached.  Both arrays are
    read-only.
    """

    def __init__(self, grid: GridSpec, *, physical=None, spectral=None, frame: str = "lab",
                 xi_shift: float = 0.0, meta: Optional[dict] = None):
        if (physical is None) == (spectral is None):
            raise ValueError("give exactly one of physical / spectral")
        if frame not in ("lab", "modulation"):
            raise ValueError(f"unknown frame {frame!r}")
        if frame == "lab" and xi_shift != 0.0:
            raise ValueError("xi_shift only applies to the modulation frame")
        self.grid = grid
        self.frame = frame
        self.xi_shift = float(xi_shift)
        self.meta = dict(meta or {})
        arr = physical if physical is not None else spectral
        arr = np.array(arr, dtype=np.complex128)
        if arr.shape != grid.shape:
            raise ValueError(f"array shape {arr.shape} does not match grid {grid.shape}")
        arr.setflags(write=False)
        self._physical = arr if physical is not None else None
        self._spectral = arr if spectral is not None else None
        self.authoritative = "physical" if physical is not None else "spectral"

    # frequencies seen by the weights
    @property
    def xi(self):
        """Actual spatial frequencies (1-D, along axis 1)."""
        return self.grid.xi + self.xi_shift

    @property
    def modulation(self):
        """``tau - xi**3`` on the spectral grid (2-D)."""
        g = self.grid
        if self.frame == "modulation":
            return np.broadcast_to(g.tau[:, None], g.shape)
        xi = g.xi
        return g.tau[:, None] - (xi**3)[None, :]

    def _dispersion_phase(self):
        eta = self.grid.xi
        c = self.xi_shift
        return np.exp(1j * self.grid.t[:, None] * (3 * c * eta**2 + eta**3)[None, :])

    @property
    def physical(self):
        if self._physical is None:
            g = self.grid
            if self.frame == "lab":
                u = _inverse(_inverse(self._spectral, g.dt, 0), g.dx, 1)
            else:
                b = _inverse(self._spectral, g.dt, 0)
                u = _inverse(b * self._dispersion_phase(), g.dx, 1)
            u.setflags(write=False)
            self._physical = u
        return self._physical

    @property
    def spectral(self):
        if self._spectral is None:
            g = self.grid
            if self.frame == "lab":
                uh = _forward(_forward(self._physical, g.dt, 0), g.dx, 1)
            else:
                b = _forward(self._physical, g.dx, 1) * np.conj(self._dispersion_phase())
                uh = _forward(b, g.dt, 0)
            uh.setflags(write=False)
            self._spectral = uh
        return self._spectral

    def with_spectral(self, spectral, **meta):
        return SpacetimeField(self.grid, spectral=spectral, frame=self.frame, xi_shift=self.xi_shift,
                              meta={**self.meta, **meta})

    def with_physical(self, physical, **meta):
        return SpacetimeField(self.grid, physical=physical, frame=self.frame, xi_shift=self.xi_shift,
                              meta={**self.meta, **meta})

    def scaled(self, c):
        if self._physical is not None:
            return self.with_physical(c * self._physical)
        return self.with_spectral(c * self._spectral)

    def l2_norm(self):
        g = self.grid
        return math.sqrt(float(np.sum(np.abs(self.physical) ** 2)) * g.dt * g.dx)

    def __repr__(self):
        return f"SpacetimeField({self.grid}, frame={self.frame!r}, xi_shift={self.xi_shift:g})"


def _forward(u, d, axis):
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(u, axes=axis), axis=axis), axes=axis) * (
        d / math.sqrt(2 * math.pi)
    )


def _inverse(uh, d, axis):
    # exact inverse of _forward: rectangle rule in frequency with step 2 pi / (n d)
    return np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(uh, axes=axis), axis=axis), axes=axis) * (
        math.sqrt(2 * math.pi) / d
    )


def _as_lebesgue(p) -> float:
    if isinstance(p, (float, int)) and not isinstance(p, bool):
        p = float(p)
    else:
        p = as_exponent(p)
        p = math.inf if p is INF else float(p)
    if p == math.inf:
        return p
    if p < 1:
        raise ValueError(f"Lebesgue exponent must be >= 1 (got {p:g})")
    return p


def lebesgue_norm_1d(values, p, d: float, axis: int = -1):
    """Rectangle-rule ``(sum |v|^p d)^(1/p)`` along ``axis``; max-norm at ``p = inf``."""
    p = _as_lebesgue(p)
    a = np.abs(np.asarray(values))
    if p == math.inf:
        return a.max(axis=axis)
    peak = a.max(axis=axis, keepdims=True)
    scale = np.where(peak > 0, peak, 1.0)
    inner = np.sum((a / scale) ** p, axis=axis) * d
    return np.squeeze(scale, axis=axis) * inner ** (1.0 / p)


def mixed_norm(u: SpacetimeField, q, r) -> float:
    """``||u||_{L^q_t L^r_x}``: space first, then time (rectangle rule)."""
    g = u.grid
    q, r = _as_lebesgue(q), _as_lebesgue(r)
    slices = lebesgue_norm_1d(u.physical, r, g.dx, axis=1)
    return float(lebesgue_norm_1d(slices, q, g.dt, axis=0))


def xsb_norm(u: SpacetimeField, s, b) -> float:
    """Discrete Bourgain norm ``||<xi>^s <tau - xi^3>^b u_hat||_{L^2}``."""
    uh = u.spectral
    if not np.all(np.isfinite(uh)):
        raise ValueError("field has non-finite amplitudes")
    s, b = float(s), float(b)
    g = u.grid
    w = np.abs(uh) ** 2
    if s != 0.0:
        w = w * japanese(u.xi)[None, :] ** (2 * s)
    if b != 0.0:
        w = w * japanese(u.modulation) ** (2 * b)
    return math.sqrt(float(np.sum(w)) * g.dtau * g.dxi)


@dataclass(frozen=True)
class NormReport:
    xsb: float
    mixed: float
    indices: object
    grid: GridSpec

    @property
    def ratio(self) -> float:
        if not self.xsb > 0:
            raise ZeroDivisionError("xsb norm vanishes; ratio undefined")
        return self.mixed / self.xsb


def norm_report(u: SpacetimeField, idx) -> NormReport:
    return NormReport(xsb_norm(u, idx.s, idx.b), mixed_norm(u, idx.q, idx.r), idx, u.grid)


def airy_cutoff(t):
    """Smooth time cutoff, identically one on [0, 1] and zero off [-1/8, 9/8]."""
    from .bumps import plateau_bump

    return plateau_bump(2 * np.asarray(t, dtype=float) - 1)


def airy_evolve(u0, grid: GridSpec, cutoff: Optional[Callable] = None) -> SpacetimeField:
    """Free Airy flow ``u(t) = exp(-t d_xxx) u0`` sampled on ``grid``.

    ``u(t, x) = sum_k u0_hat(xi_k) exp(i (x xi_k + t xi_k^3))``.  With ``cutoff``
    (a callable of t, e.g. :func:`airy_cutoff`) the result is ``cutoff(t) * u``.
    """
    u0 = np.asarray(u0, dtype=np.complex128)
    if u0.shape != (grid.n_x,):
        raise ValueError(f"u0 has {u0.shape} samples, grid expects ({grid.n_x},)")
    u0h = _forward(u0, grid.dx, 0)
    xi3 = grid.xi**3
    out = np.empty(grid.shape, dtype=np.complex128)
    for j, tj in enumerate(grid.t):
        out[j] = _inverse(u0h * np.exp(1j * tj * xi3), grid.dx, 0)
    if cutoff is not None:
        out *= np.asarray(cutoff(grid.t))[:, None]
    return SpacetimeField(grid, physical=out, meta={"built_by": "airy_evolve"})


def fractional_x_derivative(u: SpacetimeField, a, kind: str = "homogeneous") -> SpacetimeField:
    """Multiply ``u_hat`` by ``|xi|^a`` (homogeneous) or ``<xi>^a`` (inhomogeneous).

    For ``a < 0`` the homogeneous multiplier is set to zero at ``xi = 0``.
    """
    a = float(a)
    if a == 0.0:
        return u
    xi = u.xi
    if kind == "homogeneous":
        mag = np.abs(xi)
        with np.errstate(divide="ignore"):
            m = np.where(mag > 0, mag**a, 0.0)
    elif kind == "inhomogeneous":
        m = japanese(xi) ** a
    else:
        raise ValueError(f"unknown kind {kind!r}")
    g = u.grid
    # x-only multiplier: apply on the x transform of the physical array
    phys = _inverse(_forward(u.physical, g.dx, 1) * m[None, :], g.dx, 1)
    return u.with_physical(phys, derivative=a)
