"""Sharp dyadic projections in frequency and modulation, and the single-modulation ratio.

A band of level ``N`` (a power of two) on an axis selects ``<v> in [N, 2N)``
where ``v`` is ``xi`` (frequency axis) or ``tau - xi^3`` (modulation axis).
The bands tile ``[1, inf)``; since ``<v> >= 1`` every grid point lies in
exactly one band per axis.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .grid import GridSpec, SpacetimeField, _as_lebesgue, japanese, mixed_norm, xsb_norm

__all__ = [
    "AXES",
    "DyadicBand",
    "band_levels",
    "project",
    "project_cell",
    "square_function_defect",
    "single_modulation_ratio",
    "modulation_exponents",
    "random_band_field",
    "random_cell_field",
    "cell_grid",
    "sweep_csv",
    "xsb_decomposition",
]

AXES = ("frequency", "modulation")


def _is_dyadic(n) -> bool:
    n = int(n)
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DyadicBand:
    axis: str
    level: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        if not (float(self.level).is_integer() and _is_dyadic(self.level)):
            raise ValueError("band level must be a power of two >= 1")
        object.__setattr__(self, "level", int(self.level))

    def contains(self, bracket):
        """Mask of ``N <= bracket < 2N`` (``bracket`` already a Japanese bracket)."""
        b = np.asarray(bracket)
        return (b >= self.level) & (b < 2 * self.level)


def _bracket(u: SpacetimeField, axis: str):
    if axis == "frequency":
        return np.broadcast_to(japanese(u.xi)[None, :], u.grid.shape)
    return japanese(u.modulation)


def band_levels(u: SpacetimeField, axis: str) -> list:
    """Every level whose band meets the grid's spectral points on ``axis``."""
    top = float(_bracket(u, axis).max())
    k = max(0, int(math.floor(math.log2(top))))
    return [1 << j for j in range(k + 1)]


def project(u: SpacetimeField, band: DyadicBand) -> SpacetimeField:
    """Sharp spectral restriction of ``u`` to ``band``."""
    mask = band.contains(_bracket(u, band.axis))
    return u.with_spectral(np.where(mask, u.spectral, 0.0))


def project_cell(u: SpacetimeField, N: int, L: int) -> SpacetimeField:
    """``P_N Q_L u``."""
    return project(project(u, DyadicBand("frequency", N)), DyadicBand("modulation", L))


def square_function_defect(u: SpacetimeField, q, r) -> float:
    """``||u||_{L^q L^r} / (sum_N ||P_N u||_{L^q L^r}^2)^{1/2}``."""
    qq, rr = _as_lebesgue(q), _as_lebesgue(r)
    if not (2 <= qq < math.inf and 2 <= rr < math.inf):
        raise ValueError("square function defect needs 2 <= q, r < inf")
    pieces = [mixed_norm(project(u, DyadicBand("frequency", N)), qq, rr) for N in band_levels(u, "frequency")]
    denom = math.sqrt(sum(p * p for p in pieces))
    if denom == 0.0:
        raise ValueError("zero field")
    return mixed_norm(u, qq, rr) / denom


def modulation_exponents(r) -> tuple:
    """Exponents ``(a, c)`` of ``L^a N^c`` in the single-modulation bound at ``L^2_t L^r_x``."""
    rr = _as_lebesgue(r)
    return 0.25 - 0.5 / rr, 0.5 / rr - 0.25


def single_modulation_ratio(u: SpacetimeField, N: int, L: int, r) -> float:
    """``||P_N Q_L u||_{L^2 L^r} / (L^{1/4 - 1/(2r)} N^{1/(2r) - 1/4} ||P_N Q_L u||_{L^2})``."""
    rr = _as_lebesgue(r)
    if not (2 <= rr < math.inf):
        raise ValueError("single modulation ratio needs 2 <= r < inf")
    v = project_cell(u, N, L)
    l2 = v.l2_norm()
    if l2 == 0.0:
        raise ValueError(f"empty band (N={N}, L={L})")
    a, c = modulation_exponents(rr)
    return mixed_norm(v, 2, rr) / (L**a * N**c * l2)


# ------------------------------------------------------------- random ensembles


def random_band_field(grid: GridSpec, N, rng, L=None) -> SpacetimeField:
    """Lab-frame complex Gaussian spectrum restricted to frequency band ``N``
    (and modulation band ``L`` when given)."""
    shape = grid.shape
    coef = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    u = SpacetimeField(grid, spectral=coef)
    u = project(u, DyadicBand("frequency", N))
    if L is not None:
        u = project(u, DyadicBand("modulation", L))
    return u


def _band_interval(N):
    """``xi >= 0`` range of ``<xi> in [N, 2N)``."""
    return math.sqrt(max(N * N - 1.0, 0.0)), math.sqrt(4.0 * N * N - 1.0)


def cell_grid(N, L, n: int = 128, width: float = 1.0, box: float = 64.0):
    """Modulation-frame grid matched to the ``(N, L)`` cell.

    The frequency window has width ``W = width * sqrt(L / N)`` (capped by the
    band), the uncertainty scale on which the single-modulation bound is
    sharp.  The box is ``box / W`` in space and ``box / L`` in time, so every
    cell is sampled by the same number of points in the same relative way.
    """
    lo, hi = _band_interval(N)
    W = min(width * math.sqrt(L / N), hi - lo)
    return GridSpec(box / L, box / W, n, n), W


def random_cell_field(N, L, rng, n: int = 128, width: float = 1.0, box: float = 64.0) -> SpacetimeField:
    """Random field with spectrum in the cell ``<xi> ~ N``, ``<tau - xi^3> ~ L``.

    Complex Gaussian coefficients fill a frequency window of width ``W`` (see
    :func:`cell_grid`) placed uniformly at random inside the band, and the
    whole modulation band.  Returned in the modulation frame.
    """
    grid, W = cell_grid(N, L, n=n, width=width, box=box)
    lo, hi = _band_interval(N)
    centre = lo + W / 2 + rng.uniform() * (hi - lo - W)
    eta = grid.xi
    xi = centre + eta
    inside_x = (np.abs(eta) <= W / 2) & DyadicBand("frequency", N).contains(japanese(xi))
    inside_t = DyadicBand("modulation", L).contains(japanese(grid.tau))
    mask = inside_t[:, None] & inside_x[None, :]
    coef = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    if not mask.any():
        raise ValueError(f"cell (N={N}, L={L}) holds no grid points")
    return SpacetimeField(grid, spectral=np.where(mask, coef, 0.0), frame="modulation", xi_shift=centre,
                          meta={"ensemble": "cell", "N": N, "L": L})


def sweep_csv(rows) -> str:
    """CSV with header ``N,L,r,ratio`` from ``(N, L, r, ratio)`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "L", "r", "ratio"])
    for N, L, r, ratio in rows:
        w.writerow([int(N), int(L), r, repr(float(ratio))])
    return buf.getvalue()


def xsb_decomposition(u: SpacetimeField, s, b):
    """``(xsb(u)^2, sum_{N,L} xsb(P_N Q_L u)^2)``; equal up to rounding."""
    total = xsb_norm(u, s, b) ** 2
    parts = 0.0
    for N in band_levels(u, "frequency"):
        for L in band_levels(u, "modulation"):
            parts += xsb_norm(project_cell(u, N, L), s, b) ** 2
    return total, parts
