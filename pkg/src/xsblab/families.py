"""Extremal families for the necessity direction, and the Airy packet profile.

Each family is indexed by a dyadic frequency ``N`` and exposes
``xsb_norm(s, b)`` and ``mixed_norm(q, r)``.  Norms are evaluated in rescaled
coordinates with the scaling prefactors applied analytically, so a sweep up
to ``N = 64`` costs the same as ``N = 4``.  ``direct_field`` realises the
family on an ordinary lab-frame grid for small ``N``; comparing the two is
how the rescaling algebra is validated.

Families
--------
``UBlock``          u_N = F^{-1}[psi(tau/N^3) psi(xi/N)]
``ModulationShell`` u_N = F^{-1}[psi(tau - xi^3) psi(xi/N)]
``WavePacket``      v_N = phi(t) * integral phi(N^{1/2}(xi - N)) e^{i x xi + i t xi^3} d xi
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .bumps import annulus_bump, annulus_bump_ft, plateau_bump, plateau_bump_ft
from .grid import GridSpec, SpacetimeField, _as_lebesgue, _inverse, japanese, lebesgue_norm_1d, mixed_norm
from .indices import IndexQuadruple

__all__ = [
    "ExtremalFamily",
    "UBlock",
    "ModulationShell",
    "WavePacket",
    "gen_u_block",
    "gen_modulation_shell",
    "gen_wave_packet",
    "make_family",
    "airy_packet_profile",
    "packet_envelope",
    "packet_profile_norm",
    "packet_xgrid",
    "InsufficientNodes",
    "sobolev_norm_1d",
    "gen_separable",
    "separable_bound",
    "log_divergent_profile",
    "Concentrating",
    "gen_concentrating",
]

# panel edges on which psi is smooth (one side)
_PSI_EDGES = (0.5, 0.5625, 0.625, 1.0, 1.125, 1.25)
_PHI_EDGES = (-1.25, -1.125, -1.0, 1.0, 1.125, 1.25)


def _gl_panels(edges, n=24):
    """Composite Gauss-Legendre nodes and weights over consecutive ``edges``."""
    gx, gw = leggauss(n)
    e = np.asarray(edges, dtype=float)
    lo, hi = e[:-1], e[1:]
    x = (lo[:, None] + (hi - lo)[:, None] * (gx + 1) / 2).ravel()
    w = ((hi - lo)[:, None] / 2 * gw).ravel()
    return x, w


def _graded_edges(lo, hi, point, scale):
    """Edges on [lo, hi] refined geometrically towards ``point`` down to ``scale``."""
    edges = {lo, hi}
    if lo < point < hi:
        edges.add(point)
        d = scale
        while d < hi - lo:
            for p in (point - d, point + d):
                if lo < p < hi:
                    edges.add(p)
            d *= 4.0
    return sorted(edges)


class ExtremalFamily:
    kind = "abstract"

    def __init__(self, N):
        if N < 2:
            raise ValueError("N must be >= 2")
        self.N = N

    def xsb_norm(self, s, b) -> float:
        raise NotImplementedError

    def mixed_norm(self, q, r) -> float:
        raise NotImplementedError

    def ratio(self, idx: IndexQuadruple) -> float:
        return self.mixed_norm(idx.q, idx.r) / self.xsb_norm(idx.s, idx.b)

    def sidecar(self, norms=None, grid=None, rescaled=True) -> dict:
        return {
            "family": self.kind,
            "N": self.N,
            "grid": grid.as_dict() if grid is not None else None,
            "rescaled": rescaled,
            "norms": dict(norms or {}),
        }

    def __repr__(self):
        return f"{type(self).__name__}(N={self.N})"


# --------------------------------------------------------------------- U-block


@lru_cache(maxsize=8)
def _u_profile_field(n: int, extent: float) -> SpacetimeField:
    g = GridSpec(extent, extent, n, n)
    spec = np.outer(annulus_bump(g.tau), annulus_bump(g.xi))
    return SpacetimeField(g, spectral=spec, meta={"family": "U-block profile"})


class UBlock(ExtremalFamily):
    """``u_N(t, x) = N^4 U(N^3 t, N x)`` with ``U = F^{-1}(psi (x) psi)``."""

    kind = "U-block"

    def __init__(self, N, profile_n: int = 2048, profile_extent: float = 1024.0, quad_nodes: int = 24):
        super().__init__(N)
        self.profile_n = profile_n
        self.profile_extent = profile_extent
        self.quad_nodes = quad_nodes

    def profile(self) -> SpacetimeField:
        return _u_profile_field(self.profile_n, self.profile_extent)

    def mixed_norm(self, q, r) -> float:
        qq, rr = _as_lebesgue(q), _as_lebesgue(r)
        expo = 4 - 3 / qq - 1 / rr
        return self.N**expo * mixed_norm(self.profile(), q, r)

    def xsb_norm(self, s, b) -> float:
        # N^4 * integral psi(a)^2 psi(c)^2 <N c>^{2s} <N^3 (a - c^3)>^{2b} over both sign patterns;
        # the a-integral is graded towards the near-singular point a = +-c^3
        return _u_block_xsb(self.N, float(s), float(b), self.quad_nodes)

    def default_direct_grid(self) -> GridSpec:
        N = self.N
        xi_max = 1.25 * N
        t_ext = 800.0 / N**3
        x_ext = 800.0 / N
        n_t = _pow2_at_least(1.25 * xi_max**3 * t_ext / math.pi)
        n_x = _pow2_at_least(4 * xi_max * x_ext / math.pi)
        return GridSpec(t_ext, x_ext, n_t, n_x)

    def direct_field(self, grid: GridSpec = None) -> SpacetimeField:
        g = grid or self.default_direct_grid()
        g.require_cubic_resolution(1.25 * self.N)
        N = self.N
        spec = np.outer(annulus_bump(g.tau / N**3), annulus_bump(g.xi / N))
        return SpacetimeField(g, spectral=spec, meta={"family": self.kind, "N": N})


@lru_cache(maxsize=1024)
def _u_block_xsb(N, s, b, quad_nodes) -> float:
    c, wc = _gl_panels(_PSI_EDGES, quad_nodes)
    wc = wc * annulus_bump(c) ** 2 * japanese(N * c) ** (2 * s)
    scale = float(N) ** -3
    nodes, weights, owner = [], [], []
    for i, ci in enumerate(c):
        for sign in (1.0, -1.0):
            edges = sorted(set(_PSI_EDGES) | set(_graded_edges(0.5, 1.25, sign * ci**3, scale)))
            a, wa = _gl_panels(edges, 16)
            nodes.append(N**3 * (a - sign * ci**3))
            weights.append(wa * annulus_bump(a) ** 2)
            owner.append(np.full(a.size, i))
    vals = np.concatenate(weights) * japanese(np.concatenate(nodes)) ** (2 * b)
    inner = np.bincount(np.concatenate(owner), weights=vals, minlength=c.size)
    return math.sqrt(2 * N**4 * float(np.sum(wc * inner)))


def _pow2_at_least(x) -> int:
    return 1 << max(0, int(math.ceil(math.log2(max(x, 1.0)))))


# ------------------------------------------------------------ modulation shell


class ModulationShell(ExtremalFamily):
    """``u_N = F^{-1}[psi(tau - xi^3) psi(xi/N)]``.

    In physical space ``u_N(t, x) = (2 pi)^{-1/2} Psi(t) * N * W(N^3 t, N x)``
    with ``Psi = F^{-1} psi`` and ``W(s, y) = integral psi(e) e^{i(y e + s e^3)} de``.
    ``mixed_norm`` returns the norm restricted to the box
    ``|t| <= box N^-3, |x| <= box N^-1``: a lower bound for the full norm that
    captures the ``|u| >~ N`` concentration.
    """

    kind = "ModulationShell"

    def __init__(self, N, box: float = 0.25, box_n: int = 64, quad_nodes: int = 24):
        super().__init__(N)
        self.box = box
        self.box_n = box_n
        self.quad_nodes = quad_nodes

    def xsb_norm(self, s, b) -> float:
        m, wm = _gl_panels(_PSI_EDGES, self.quad_nodes)
        mod = 2 * np.sum(wm * annulus_bump(m) ** 2 * japanese(m) ** (2 * float(b)))
        xi = self.N * m
        freq = 2 * self.N * np.sum(wm * annulus_bump(m) ** 2 * japanese(xi) ** (2 * float(s)))
        return math.sqrt(mod * freq)

    def _rescaled_profile(self, s_nodes, y_nodes):
        e, we = _gl_panels(_PSI_EDGES, self.quad_nodes)
        e = np.concatenate([-e[::-1], e])
        we = np.concatenate([we[::-1], we]) * annulus_bump(e)
        phase = np.exp(1j * (y_nodes[None, :, None] * e + s_nodes[:, None, None] * e**3))
        W = phase @ we
        Psi = annulus_bump_ft(s_nodes / self.N**3)
        return Psi[:, None] * W / math.sqrt(2 * math.pi)

    def value(self, t, x):
        """``u_N(t, x)`` by quadrature of the spectral definition (small |t|, |x|)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return self.N * self._rescaled_profile(self.N**3 * t, self.N * x)

    def center_value(self) -> float:
        return float(abs(self.value(0.0, 0.0)[0, 0]))

    def mixed_norm(self, q, r) -> float:
        qq, rr = _as_lebesgue(q), _as_lebesgue(r)
        k = self.box_n
        h = 2 * self.box / k
        nodes = -self.box + h * (np.arange(k) + 0.5)
        prof = self._rescaled_profile(nodes, nodes)
        inner = lebesgue_norm_1d(prof, r, h, axis=1)
        box_norm = float(lebesgue_norm_1d(inner, q, h, axis=0))
        return self.N ** (1 - 3 / qq - 1 / rr) * box_norm

    def modulation_field(self, t_extent: float = 1024.0, n_t: int = 2048, x_extent: float = None) -> SpacetimeField:
        """Positive-frequency half of the shell in the modulation frame.

        Spectral array ``psi(mu) psi(xi / N)`` indexed by ``(mu, eta)`` with
        ``xi = 7N/8 + eta``, so high ``N`` costs no more time samples than low ``N``.
        The long time box makes the ``mu`` lattice fine enough for the steep
        edges of ``psi`` (lattice sums over ``mu`` converge like the tails of
        ``F^{-1} psi``; 1024 gives about 1e-7).
        """
        N = self.N
        centre, half = 0.875 * N, 0.375 * N
        X = x_extent if x_extent is not None else float(_pow2_at_least(16 * N * N))
        n_x = _pow2_at_least(2 * half * X / math.pi)
        grid = GridSpec(t_extent, X, n_t, n_x)
        if 1.25 >= grid.tau_nyquist:
            raise ValueError("time grid cannot hold the unit modulation shell")
        xi = centre + grid.xi
        spec = annulus_bump(grid.tau)[:, None] * np.where(xi > 0, annulus_bump(xi / N), 0.0)[None, :]
        return SpacetimeField(grid, spectral=spec, frame="modulation", xi_shift=centre,
                              meta={"family": self.kind, "N": N, "half": "positive"})

    def direct_field(self, grid: GridSpec) -> SpacetimeField:
        grid.require_cubic_resolution(1.25 * self.N, margin=1.0)
        xi = grid.xi
        spec = annulus_bump(grid.tau[:, None] - xi[None, :] ** 3) * annulus_bump(xi / self.N)[None, :]
        return SpacetimeField(grid, spectral=spec, meta={"family": self.kind, "N": self.N})


# ----------------------------------------------------------------- wave packet


@lru_cache(maxsize=4)
def _bump_ft_nodes(omega_max: float = 3000.0, panel: float = 1.4, order: int = 8):
    """Half-line nodes, weights and |phi_hat|^2 for weighted spectral integrals.

    Panels are graded geometrically towards 0 so weights like ``<n w>^a``,
    whose complex singularities sit at distance ``1/n``, stay resolved.
    """
    graded = panel * 2.0 ** -np.arange(1, 16)
    edges = np.union1d(np.concatenate([[0.0], graded]), np.arange(0.0, omega_max + panel, panel))
    w, wt = _gl_panels(edges, order)
    return w, wt, plateau_bump_ft(w) ** 2


def bump_ft_weighted_integral(weight) -> float:
    """``integral_R |phi_hat(w)|^2 weight(|w|) dw`` for an even weight."""
    w, wt, p2 = _bump_ft_nodes()
    return 2 * float(np.sum(wt * p2 * weight(w)))


@lru_cache(maxsize=64)
def _packet_modulation_factor(b: float) -> float:
    return bump_ft_weighted_integral(lambda w: japanese(w) ** (2 * b))


@lru_cache(maxsize=256)
def _packet_slice_norms(N, r, time_nodes, dx, x_extent):
    # L^r_x norms of phi(t') A_phi(N^{-3/2} t', .) at midpoints t' of [-5/4, 5/4]
    h = 2.5 / time_nodes
    tp = -1.25 + h * (np.arange(time_nodes) + 0.5)
    x = packet_xgrid(dx, x_extent)
    norms = np.empty(time_nodes)
    for i, t in enumerate(tp):
        A = airy_packet_profile(N, t * N**-1.5, x, window=plateau_bump)
        norms[i] = plateau_bump(t) * lebesgue_norm_1d(A, r, dx)
    norms.setflags(write=False)
    return norms, h


class WavePacket(ExtremalFamily):
    """``v_N(t, x) = phi(t) * integral phi(N^{1/2}(xi - N)) e^{i x xi} e^{i t xi^3} d xi``.

    Spectrum ``(2 pi)^{1/2} phi_hat(tau - xi^3) phi(N^{1/2}(xi - N))``.  The mixed
    norm is computed in the frame ``t = N^{-3/2} t'``, ``x = N^{1/2} x'`` (after
    removing the group translation), where it equals
    ``N^{1/(2r) - 1/2} || phi(t') A_phi(N^{-3/2} t', x') ||_{L^q_t' L^r_x'}`` and
    ``A_phi`` is :func:`airy_packet_profile` with window ``phi``.
    """

    kind = "WavePacket"

    def __init__(self, N, time_nodes: int = 128, dx: float = 0.25, x_extent: float = 1024.0):
        super().__init__(N)
        self.time_nodes = time_nodes
        self.dx = dx
        self.x_extent = x_extent

    def xsb_norm(self, s, b) -> float:
        N = self.N
        e, we = _gl_panels(_PHI_EDGES, 24)
        freq = np.sum(we * plateau_bump(e) ** 2 * japanese(N + e / math.sqrt(N)) ** (2 * float(s))) / math.sqrt(N)
        return math.sqrt(2 * math.pi * _packet_modulation_factor(float(b)) * freq)

    def _slice_norms(self, r):
        return _packet_slice_norms(self.N, _as_lebesgue(r), self.time_nodes, self.dx, self.x_extent)

    def mixed_norm(self, q, r) -> float:
        rr = _as_lebesgue(r)
        norms, h = self._slice_norms(r)
        return self.N ** (1 / (2 * rr) - 0.5) * float(lebesgue_norm_1d(norms, q, h))

    def default_direct_grid(self) -> GridSpec:
        N = self.N
        xi_max = N + 1.25 / math.sqrt(N)
        t_ext = 4.0
        n_t = _pow2_at_least((xi_max**3 + 900.0) * t_ext / math.pi)
        x_ext = 1024.0
        n_x = _pow2_at_least(1.5 * xi_max * x_ext / math.pi)
        return GridSpec(t_ext, x_ext, n_t, n_x)

    def direct_field(self, grid: GridSpec = None) -> SpacetimeField:
        """Lab-frame realisation: exact free flow of the packet times phi(t)."""
        g = grid or self.default_direct_grid()
        N = self.N
        g.require_cubic_resolution(N + 1.25 / math.sqrt(N))
        xi = g.xi
        # spatial spectrum of the t = 0 profile, unitary normalisation
        amp = math.sqrt(2 * math.pi) * plateau_bump(math.sqrt(N) * (xi - N))
        env = plateau_bump(g.t)
        out = np.zeros(g.shape, dtype=np.complex128)
        live = np.flatnonzero(env)
        for j0 in range(0, live.size, 64):
            rows = live[j0:j0 + 64]
            block = amp[None, :] * np.exp(1j * g.t[rows, None] * (xi**3)[None, :])
            out[rows] = env[rows, None] * _inverse(block, g.dx, 1)
        return SpacetimeField(g, physical=out, meta={"family": self.kind, "N": N})


# ------------------------------------------------------------ packet profile


class InsufficientNodes(RuntimeError):
    pass


def packet_envelope(N, t):
    """Stationary-phase envelope ``<N^{3/2} t>^{-1/2}``."""
    return japanese(N**1.5 * np.asarray(t, dtype=float)) ** -0.5


def packet_xgrid(dx: float, extent: float):
    n = int(round(extent / dx))
    return (np.arange(n) - n // 2) * dx


def _profile_sum(N, t, x0, dx, n_x, M, window):
    h = 2 * math.pi / (M * dx)
    n = int(math.floor(2.5 / h)) + 1
    eta = -1.25 + h * np.arange(n)
    f = window(eta) * np.exp(1j * t * eta**2 * (eta + 3 * N**1.5))
    g = np.zeros(M, dtype=np.complex128)
    g[:n] = f * np.exp(1j * x0 * eta)
    s = np.fft.ifft(g)[:n_x] * M
    k = np.arange(n_x)
    return h * np.exp(-1.25j * k * dx) * s


def airy_packet_profile(N, t, x, window=annulus_bump, tol: float = 1e-6, max_size: int = 1 << 22):
    """``A(t, x) = integral window(e) e^{i x e} e^{i t e^2 (e + 3 N^{3/2})} de`` on a uniform x-grid.

    Trapezoid rule on the window's support ``[-5/4, 5/4]`` (spectrally
    accurate for a smooth compactly supported window), evaluated at all ``x``
    at once by FFT.  The node spacing is halved until two successive
    evaluations agree to ``tol`` relative to ``max |A|``; if that needs more
    than ``max_size`` nodes :class:`InsufficientNodes` is raised.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("x must be a 1-D uniform grid")
    dx = float(x[1] - x[0])
    if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=1e-12 * max(1.0, abs(dx))):
        raise ValueError("x must be uniformly spaced")
    t = float(t)
    spread = abs(t) * (6 * N**1.5 * 1.25 + 3 * 1.25**2)
    span = x[-1] - x[0]
    M = _pow2_at_least((span + 2 * spread + 4096.0) / dx)
    M = max(M, _pow2_at_least(x.size))
    prev = _profile_sum(N, t, x[0], dx, x.size, M, window)
    while True:
        M *= 2
        if M > max_size:
            raise InsufficientNodes(f"packet profile unresolved at N={N}, t={t} with {M // 2} nodes")
        cur = _profile_sum(N, t, x[0], dx, x.size, M, window)
        scale = max(np.abs(cur).max(), 1e-300)
        if np.abs(cur - prev).max() <= tol * scale:
            return cur
        prev = cur


def packet_profile_norm(N, t, r, window=annulus_bump, dx: float = 0.5, tail: float = 2048.0):
    """``||A(t, .)||_{L^r_x}`` on an automatically sized x-grid."""
    spread = abs(t) * (6 * N**1.5 * 1.25 + 3 * 1.25**2)
    x = packet_xgrid(dx, 2 * (spread + tail))
    return float(lebesgue_norm_1d(airy_packet_profile(N, t, x, window=window), r, dx))


# ------------------------------------------------------ separable / concentrating


def sobolev_norm_1d(values, d: float, sigma, homogeneous: bool = False) -> float:
    """``H^sigma`` (or ``H-dot^sigma``) norm of a sampled 1-D profile, unitary transform."""
    v = np.asarray(values, dtype=np.complex128)
    n = v.size
    freq = 2 * math.pi * np.fft.fftfreq(n, d=d)
    vh = np.fft.fft(v) * d / math.sqrt(2 * math.pi)
    sigma = float(sigma)
    if homogeneous:
        weight = np.zeros(n)
        nz = freq != 0
        weight[nz] = np.abs(freq[nz]) ** (2 * sigma)
    else:
        weight = japanese(freq) ** (2 * sigma)
    return math.sqrt(float(np.sum(np.abs(vh) ** 2 * weight)) * 2 * math.pi / (n * d))


def gen_separable(f, g, grid: GridSpec) -> SpacetimeField:
    """Tensor product field ``u(t, x) = f(t) g(x)``; ``f``, ``g`` are callables or samples."""
    fv = np.asarray(f(grid.t) if callable(f) else f, dtype=np.complex128)
    gv = np.asarray(g(grid.x) if callable(g) else g, dtype=np.complex128)
    if fv.shape != (grid.n_t,) or gv.shape != (grid.n_x,):
        raise ValueError("profile sample counts do not match the grid")
    return SpacetimeField(grid, physical=np.outer(fv, gv), meta={"family": "Separable"})


def separable_bound(f, g, grid: GridSpec, s, b) -> float:
    """``||f||_{H^b} ||g||_{H^s} + ||f||_{H^b} ||g||_{H^{s+3b}}`` for sampled profiles."""
    fv = f(grid.t) if callable(f) else f
    gv = g(grid.x) if callable(g) else g
    fb = sobolev_norm_1d(fv, grid.dt, b)
    return fb * (sobolev_norm_1d(gv, grid.dx, s) + sobolev_norm_1d(gv, grid.dx, float(s) + 3 * float(b)))


def log_divergent_profile(M: float):
    """Sup norm and ``H^{1/2}`` norm of ``g_M`` with ``g_M_hat = 1_[2, M](xi) / (xi sqrt(log M))``.

    ``g_M_hat >= 0`` so the sup is attained at ``x = 0``.  The first value grows
    like ``sqrt(log M)`` while the second stays bounded.
    """
    if M <= 2:
        raise ValueError("M must exceed 2")
    c = 1.0 / math.sqrt(math.log(M))
    sup = c * math.log(M / 2) / math.sqrt(2 * math.pi)
    # integral of <xi> / xi^2 from 2 to M, in closed form
    F = lambda x: math.asinh(x) - math.sqrt(1 + x * x) / x  # noqa: E731
    h_half = c * math.sqrt(F(M) - F(2.0))
    return sup, h_half


class Concentrating:
    """Time profiles ``f_n(t) = n^{1/q} h(n t)`` with ``h = phi``; ``2 < q < inf``."""

    kind = "Concentrating"

    def __init__(self, n: int, q):
        qq = _as_lebesgue(q)
        if not (2 < qq < math.inf):
            raise ValueError("concentrating sequence needs 2 < q < inf")
        if n < 1:
            raise ValueError("n must be a positive integer")
        self.n = int(n)
        self.q = qq

    def __call__(self, t):
        return self.n ** (1 / self.q) * plateau_bump(self.n * np.asarray(t, dtype=float))

    def lebesgue_norm(self, p) -> float:
        p = _as_lebesgue(p)
        e, we = _gl_panels(np.asarray(_PHI_EDGES) / self.n, 24)
        vals = np.abs(self(e))
        if p == math.inf:
            return float(vals.max())
        return float(np.sum(we * vals**p)) ** (1 / p)

    def sobolev_norm(self, sigma=None, homogeneous: bool = False) -> float:
        # |f_n_hat(w)|^2 = n^{2/q - 2} |h_hat(w/n)|^2; substitute w = n v
        sigma = 0.5 - 1 / self.q if sigma is None else float(sigma)
        n = self.n
        if homogeneous:
            weight = lambda v: (n * v) ** (2 * sigma)  # noqa: E731
        else:
            weight = lambda v: japanese(n * v) ** (2 * sigma)  # noqa: E731
        return math.sqrt(n ** (2 / self.q - 1) * bump_ft_weighted_integral(weight))


def gen_concentrating(n: int, q) -> Concentrating:
    return Concentrating(n, q)


# ------------------------------------------------------------------ factories


def gen_u_block(N, **policy) -> UBlock:
    return UBlock(N, **policy)


def gen_modulation_shell(N, **policy) -> ModulationShell:
    return ModulationShell(N, **policy)


def gen_wave_packet(N, **policy) -> WavePacket:
    return WavePacket(N, **policy)


_FACTORIES = {"U-block": UBlock, "ModulationShell": ModulationShell, "WavePacket": WavePacket}


def make_family(kind: str, N, **policy) -> ExtremalFamily:
    try:
        cls = _FACTORIES[kind]
    except KeyError:
        raise ValueError(f"unknown family {kind!r}") from None
    return cls(N, **policy)
