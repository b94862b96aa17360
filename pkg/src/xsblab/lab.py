"""Scaling fits, the necessity battery and the sufficiency probes.

Slopes are exponents: every fit regresses ``log2(ratio)`` on ``log2(N)``.
Reports say "consistent with" boundedness; a finite random ensemble is
evidence, never a proof.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bumps import plateau_bump
from .dyadic import random_cell_field
from .families import Concentrating, log_divergent_profile, make_family
from .grid import GridSpec, _as_lebesgue, _forward, _inverse, lebesgue_norm_1d, mixed_norm, xsb_norm
from .indices import (FAMILIES, INF, IndexQuadruple, Verdict, as_exponent, classify, format_rational,
                      predicted_slope, reciprocal)

__all__ = [
    "SCHEMA_VERSION",
    "DEFAULT_N_LIST",
    "CONSISTENT",
    "COUNTEREXAMPLE",
    "INCONCLUSIVE",
    "ScalingFit",
    "FamilyError",
    "fit_family",
    "BatteryReport",
    "necessity_battery",
    "fits_csv",
    "ProbeReport",
    "sufficiency_probe",
    "strichartz_check",
    "strichartz_plane_wave",
    "l2_linfty_check",
    "regression_suite",
    "default_threads",
]

SCHEMA_VERSION = "xsblab.report/1"
DEFAULT_N_LIST = (4, 8, 16, 32, 64)
PROBE_N_LIST = (2, 4, 8, 16, 32, 64)

CONSISTENT = "CONSISTENT"
COUNTEREXAMPLE = "COUNTEREXAMPLE-FOUND"
INCONCLUSIVE = "INCONCLUSIVE"

CONSISTENT_SLOPE = 0.05
COUNTER_SLOPE = 0.1
COUNTER_RESIDUAL = 0.1

# which family's growth exponent equals the margin of which condition
WITNESS = {"S_PACKET": "WavePacket", "S_SOBOLEV": "ModulationShell", "SB_SCALING": "U-block"}


def default_threads() -> int:
    env = os.environ.get("XSB_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"XSB_LAB_THREADS must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ValueError("XSB_LAB_THREADS must be a positive integer")
        return n
    return 1


def _run(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _ols(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.abs(resid).max())


def _check_dyadic_list(n_list, minimum=4):
    n_list = [int(n) for n in n_list]
    if len(n_list) < minimum:
        raise ValueError(f"need at least {minimum} values of N")
    for n in n_list:
        if n < 1 or n & (n - 1):
            raise ValueError(f"N = {n} is not dyadic")
    if len(set(n_list)) != len(n_list):
        raise ValueError("repeated N")
    return sorted(n_list)


# ------------------------------------------------------------------ fits


@dataclass(frozen=True)
class ScalingFit:
    family: str
    indices: IndexQuadruple
    points: tuple
    slope: float
    intercept: float
    max_residual: float
    predicted: Fraction

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "indices": self.indices.as_dict(),
            "points": [[x, y] for x, y in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
            "max_residual": self.max_residual,
            "predicted": format_rational(self.predicted),
        }


class FamilyError(RuntimeError):
    def __init__(self, family, N, cause):
        super().__init__(f"{family} failed at N={N}: {cause}")
        self.family, self.N = family, N


def fit_family(family: str, idx: IndexQuadruple, n_list=DEFAULT_N_LIST, threads: int = 1, **policy) -> ScalingFit:
    """Least-squares exponent of ``mixed / xsb`` in ``N`` for one family."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    n_list = _check_dyadic_list(n_list)

    def one(N):
        try:
            return make_family(family, N, **policy).ratio(idx)
        except Exception as exc:  # noqa: BLE001 - re-raised with the offending N
            raise FamilyError(family, N, exc) from exc

    ratios = _run(one, n_list, threads)
    pts = tuple((float(math.log2(N)), float(math.log2(v))) for N, v in zip(n_list, ratios))
    slope, icept, res = _ols(*zip(*pts))
    return ScalingFit(family, idx, pts, slope, icept, res, predicted_slope(family, idx))


# --------------------------------------------------------------- battery


def _separable_diagnostic():
    Ms = [2.0**k for k in (4, 8, 16, 32, 64)]
    rows = [log_divergent_profile(M) for M in Ms]
    ratios = [a / b for a, b in rows]
    # sup / H^{1/2} ~ sqrt(log M): exponent of the ratio against log M
    slope, _, _ = _ols(np.log2(np.log(Ms)), np.log2(ratios))
    return {
        "test": "separable-Linf",
        "M": Ms,
        "sup_over_h_half": ratios,
        "log_growth_exponent": slope,
        "unbounded": bool(slope > 0.25 and ratios[-1] > ratios[0]),
    }


def _concentrating_diagnostic(q):
    ns = [2, 4, 8, 16, 32, 64, 128, 256]
    fam = [Concentrating(n, q) for n in ns]
    lq = [f.lebesgue_norm(q) for f in fam]
    hs = [f.sobolev_norm() for f in fam]
    l2 = [f.lebesgue_norm(2) for f in fam]
    slope, _, _ = _ols(np.log2(ns), np.log2(l2))
    return {
        "test": "concentrating",
        "q": format_rational(q),
        "n": ns,
        "Lq": lq,
        "H_sigma": hs,
        "L2": l2,
        "L2_slope": slope,
        "L2_slope_predicted": float(1 / _as_lebesgue(q) - 0.5),
    }


@dataclass
class BatteryReport:
    indices: IndexQuadruple
    classifier: Verdict
    fits: dict
    witnesses: dict
    probe: object
    diagnostics: list
    conclusion: str
    config: dict = field(default_factory=dict)

    @property
    def coherent(self) -> bool:
        """False when a counterexample was found for a classifier-admissible quadruple."""
        return not (self.conclusion == COUNTEREXAMPLE and self.classifier.admissible)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": "battery",
            "config": self.config,
            "indices": self.indices.as_dict(),
            "classifier": self.classifier.as_dict(),
            "fits": {k: v.as_dict() for k, v in sorted(self.fits.items())},
            "witnesses": dict(sorted(self.witnesses.items())),
            "probe": self.probe.as_dict() if self.probe is not None else None,
            "diagnostics": self.diagnostics,
            "conclusion": self.conclusion,
            "coherent": self.coherent,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def fits_csv(reports) -> str:
    """``family,q,r,s,b,slope,predicted,residual,conclusion`` for every fit of every report."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "q", "r", "s", "b", "slope", "predicted", "residual", "conclusion"])
    for rep in reports:
        d = rep.indices.as_dict()
        for fam in sorted(rep.fits):
            f = rep.fits[fam]
            w.writerow([fam, d["q"], d["r"], d["s"], d["b"], repr(f.slope), format_rational(f.predicted),
                        repr(f.max_residual), rep.conclusion])
    return buf.getvalue()


def necessity_battery(idx: IndexQuadruple, n_list=DEFAULT_N_LIST, threads: int = 1, probe: bool = True,
                      probe_options: dict = None, policy: dict = None) -> BatteryReport:
    """Run the extremal families against ``idx`` and compare with :func:`classify`.

    COUNTEREXAMPLE-FOUND needs one family with slope >= 0.1 and max residual
    <= 0.1.  CONSISTENT needs an admissible quadruple whose family slopes (and
    probe trend slopes, when the probe runs) are all <= 0.05.  Everything else
    is INCONCLUSIVE.  ``B_LOWER`` and the knife-edge exclusions have no
    power-law witness among the families and are reported NOT-WITNESSED.
    """
    n_list = _check_dyadic_list(n_list)
    verdict = classify(idx)
    policy = policy or {}
    fits = {}
    for fam in FAMILIES:
        fits[fam] = fit_family(fam, idx, n_list, threads=threads, **policy.get(fam, {}))
    counter = [f for f in fits.values() if f.slope >= COUNTER_SLOPE and f.max_residual <= COUNTER_RESIDUAL]

    witnesses = {}
    for tag in verdict.violations:
        fam = WITNESS.get(tag)
        if fam is None:
            witnesses[tag] = "NOT-WITNESSED"
        elif fits[fam] in counter:
            witnesses[tag] = f"WITNESSED:{fam}"
        else:
            witnesses[tag] = "UNRESOLVED"

    diagnostics = []
    if idx.r is INF:
        diagnostics.append(_separable_diagnostic())
        q = idx.q
        if idx.s == Fraction(1, 2) and q is not INF and q > 2 and idx.b == Fraction(1, 2) - reciprocal(q):
            diagnostics.append(_concentrating_diagnostic(q))

    probe_report = None
    if probe and verdict.admissible:
        probe_report = sufficiency_probe(idx, threads=threads, **(probe_options or {}))

    slopes_ok = all(f.slope <= CONSISTENT_SLOPE for f in fits.values())
    probe_ok = probe_report is None or probe_report.trend_ok
    if counter:
        conclusion = COUNTEREXAMPLE
    elif verdict.admissible and slopes_ok and probe_ok:
        conclusion = CONSISTENT
    else:
        conclusion = INCONCLUSIVE
    config = {"n_list": n_list, "probe": bool(probe), "probe_options": dict(probe_options or {}),
              "policy": {k: dict(v) for k, v in sorted(policy.items())}}
    return BatteryReport(idx, verdict, fits, witnesses, probe_report, diagnostics, conclusion, config)


# ---------------------------------------------------------------- probes


@dataclass
class ProbeReport:
    kind: str
    indices: dict
    cells: list
    max_ratio: float
    slope_N: float
    slope_L: float
    config: dict

    @property
    def trend_ok(self) -> bool:
        return self.slope_N <= CONSISTENT_SLOPE and self.slope_L <= CONSISTENT_SLOPE

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "kind": self.kind,
            "config": self.config,
            "indices": self.indices,
            "cells": self.cells,
            "max_ratio": self.max_ratio,
            "slope_N": self.slope_N,
            "slope_L": self.slope_L,
            "trend_ok": self.trend_ok,
            "statement": "consistent with boundedness" if self.trend_ok else "growth observed",
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def _cell_rng(seed, *key):
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key)))


def _envelope_slope(table, axis_values, key_index):
    """Slope of ``log2 max ratio`` over the other coordinate, against ``log2`` of this one."""
    env = []
    for v in axis_values:
        vals = [row["max_ratio"] for row in table if row[key_index] == v]
        env.append(max(vals))
    if len(axis_values) < 2:
        return 0.0
    return _ols(np.log2(axis_values), np.log2(env))[0]


def sufficiency_probe(idx: IndexQuadruple, n_list=PROBE_N_LIST, l_list=None, draws: int = 8, seed: int = 0,
                      threads: int = 1, n: int = 128, width: float = 1.0, box: float = 64.0,
                      require_admissible: bool = True) -> ProbeReport:
    """Max of ``mixed / xsb`` over random cell fields on a dyadic ``(N, L)`` lattice.

    Each cell draws ``draws`` random fields from :func:`random_cell_field`.
    The L lattice runs to ``max(N)^3``: beyond ``L ~ N^3`` the frequency
    window saturates the band, which is where the worst cells sit.  Trend
    slopes are taken from the envelopes ``max_L ratio(N, L)`` against ``N`` and
    ``max_N ratio(N, L)`` against ``L``.
    """
    if require_admissible and not classify(idx).admissible:
        raise ValueError(f"sufficiency probe needs an admissible quadruple, got {idx}")
    n_list = _check_dyadic_list(n_list, minimum=2)
    if l_list is None:
        top = max(n_list) ** 3
        l_list = [1 << k for k in range(int(math.log2(top)) + 1)]
    l_list = _check_dyadic_list(l_list, minimum=2)
    q, r = _as_lebesgue(idx.q), _as_lebesgue(idx.r)
    s, b = float(idx.s), float(idx.b)

    def cell(key):
        N, L = key
        rng = _cell_rng(seed, N, L)
        ratios = []
        for _ in range(draws):
            u = random_cell_field(N, L, rng, n=n, width=width, box=box)
            ratios.append(mixed_norm(u, q, r) / xsb_norm(u, s, b))
        return {"N": N, "L": L, "max_ratio": max(ratios), "min_ratio": min(ratios)}

    table = _run(cell, [(N, L) for N in n_list for L in l_list], threads)
    report = ProbeReport(
        kind="sufficiency-probe",
        indices=idx.as_dict(),
        cells=table,
        max_ratio=max(row["max_ratio"] for row in table),
        slope_N=_envelope_slope(table, n_list, "N"),
        slope_L=_envelope_slope(table, l_list, "L"),
        config={"n_list": n_list, "l_list": l_list, "draws": draws, "seed": seed, "grid_n": n,
                "width": width, "box": box, "ensemble": "random cell fields, modulation frame"},
    )
    return report


def l2_linfty_check(b, threads: int = 1, **options) -> ProbeReport:
    """Probe at the endpoint ``(q, r, s, b) = (2, inf, -1/4, b)``, ``b > 1/4``."""
    idx = IndexQuadruple(2, INF, Fraction(-1, 4), b)
    if not idx.b > Fraction(1, 4):
        raise ValueError("the L^2 L^inf endpoint needs b > 1/4")
    rep = sufficiency_probe(idx, threads=threads, **options)
    rep.kind = "l2-linfty-check"
    return rep


# ------------------------------------------------------------- Strichartz


def _strichartz_grid(N, t_scale, x_scale, n_t, n_x):
    return GridSpec(2 * t_scale / N**3, x_scale / N, n_t, n_x)


def _strichartz_norm(u0, grid, q, r, T, a):
    """``||D^a e^{-t d^3} u0 * phi(5t / 4T)||_{L^q L^r}`` on ``grid`` (t in [-T, T))."""
    uh = _forward(u0, grid.dx, 0)
    xi = grid.xi
    mag = np.abs(xi)
    uh = uh * np.where(mag > 0, mag**a, 0.0)
    win = plateau_bump(grid.t * 1.25 / T)
    slices = np.zeros(grid.n_t)
    xi3 = xi**3
    for j0 in range(0, grid.n_t, 64):
        tj = grid.t[j0:j0 + 64]
        block = _inverse(uh[None, :] * np.exp(1j * tj[:, None] * xi3[None, :]), grid.dx, 1)
        slices[j0:j0 + 64] = lebesgue_norm_1d(block, r, grid.dx, axis=1)
    return float(lebesgue_norm_1d(slices * win, q, grid.dt))


def _check_strichartz_pair(q, r):
    qe, re_ = as_exponent(q), as_exponent(r)
    if qe is INF or reciprocal(qe) * 2 + reciprocal(re_) != Fraction(1, 2):
        raise ValueError("Strichartz pair must satisfy 2/q + 1/r = 1/2 with q finite")
    if qe < 4:
        raise ValueError("Strichartz pair needs q >= 4")
    return qe, re_


def strichartz_check(q, r, n_list=PROBE_N_LIST, draws: int = 8, seed: int = 0, threads: int = 1,
                     t_scale: float = 16.0, x_scale: float = 512.0, n_t: int = 512, n_x: int = 2048,
                     localisation: float = 16.0) -> ProbeReport:
    """``||D^{1/q} e^{-t d^3} u0||_{L^q L^r} / ||u0||_{L^2}`` for random data at frequency ``N``.

    Data: complex white noise times ``phi(N x / localisation)``, restricted to
    ``|xi| in [N, 2N)``.  Time window ``phi(5t / 4T)`` with ``T = t_scale / N^3``
    on ``t in [-T, T)``; the box ``x_scale / N`` holds the dispersed data.
    """
    qe, re_ = _check_strichartz_pair(q, r)
    n_list = _check_dyadic_list(n_list, minimum=2)
    qf, rf = _as_lebesgue(qe), _as_lebesgue(re_)

    def one(N):
        grid = _strichartz_grid(N, t_scale, x_scale, n_t, n_x)
        rng = _cell_rng(seed, N)
        T = t_scale / N**3
        band = (np.abs(grid.xi) >= N) & (np.abs(grid.xi) < 2 * N)
        ratios = []
        for _ in range(draws):
            noise = rng.standard_normal(n_x) + 1j * rng.standard_normal(n_x)
            u0 = _inverse(np.where(band, _forward(noise * plateau_bump(N * grid.x / localisation), grid.dx, 0), 0.0),
                          grid.dx, 0)
            l2 = math.sqrt(float(np.sum(np.abs(u0) ** 2)) * grid.dx)
            ratios.append(_strichartz_norm(u0, grid, qf, rf, T, 1 / qf) / l2)
        return {"N": N, "L": 0, "max_ratio": max(ratios), "min_ratio": min(ratios)}

    table = _run(one, n_list, threads)
    return ProbeReport(
        kind="strichartz-check",
        indices={"q": format_rational(qe), "r": format_rational(re_)},
        cells=table,
        max_ratio=max(row["max_ratio"] for row in table),
        slope_N=_envelope_slope(table, n_list, "N"),
        slope_L=0.0,
        config={"n_list": n_list, "draws": draws, "seed": seed, "t_scale": t_scale, "x_scale": x_scale,
                "n_t": n_t, "n_x": n_x, "localisation": localisation,
                "window": "phi(5 t / (4 T)), T = t_scale / N^3, t in [-T, T)"},
    )


def strichartz_plane_wave(q, r, k: int = 8, t_scale: float = 16.0, x_scale: float = 512.0,
                          n_t: int = 256, n_x: int = 512):
    """Numerical and closed-form Strichartz ratio for the single mode ``e^{i xi0 x}``.

    ``xi0 = 2 pi k / X`` is a grid frequency, ``|u| = 1`` everywhere, so the
    ratio is ``xi0^{1/q} X^{1/r - 1/2} ||phi(5t / 4T)||_{L^q}``.
    """
    qe, re_ = _check_strichartz_pair(q, r)
    qf, rf = _as_lebesgue(qe), _as_lebesgue(re_)
    grid = GridSpec(2 * t_scale, x_scale, n_t, n_x)
    xi0 = 2 * math.pi * k / grid.x_extent
    u0 = np.exp(1j * xi0 * grid.x)
    l2 = math.sqrt(grid.x_extent)
    numeric = _strichartz_norm(u0, grid, qf, rf, t_scale, 1 / qf) / l2
    win = plateau_bump(grid.t * 1.25 / t_scale)
    x_factor = 1.0 if rf == math.inf else grid.x_extent ** (1 / rf)
    closed = xi0 ** (1 / qf) * x_factor / l2 * float(lebesgue_norm_1d(win, qf, grid.dt))
    return numeric, closed


# ------------------------------------------------------- regression suite


def _f(x):
    return Fraction(x)


def regression_suite() -> list:
    """Fifty quadruples on and around every face of the admissible region.

    Each entry is ``(IndexQuadruple, label)``.  Rejected points off a face
    violate it by at least 0.1 unless the label says otherwise; ``b >= 0``
    throughout.
    """
    h = Fraction(1, 2)
    out = []

    def add(q, r, s, b, label):
        out.append((IndexQuadruple(q, r, _f(s), _f(b)), label))

    # interior and on-face admissible points
    add(2, 2, 0, 0, "identity")
    add(2, 2, 1, 1, "interior")
    add(6, 2, 0, Fraction(1, 3), "L^q L^2 endpoint q=6")
    add(4, 2, 0, Fraction(1, 4), "L^q L^2 endpoint q=4")
    add(2, 4, Fraction(-1, 8), Fraction(1, 8), "single-modulation endpoint r=4")
    add(2, 4, Fraction(1, 8), Fraction(1, 8), "single-modulation interior")
    add(2, 8, Fraction(-3, 16), Fraction(3, 16), "single-modulation endpoint r=8")
    add(2, INF, Fraction(-1, 4), Fraction(3, 10), "L^2 L^inf endpoint b=0.3")
    add(4, INF, Fraction(-1, 5), h, "near b-half edge")
    add(4, 4, -h, h, "SB face, S_PACKET -0.375 and b-half edge")
    add(4, 4, 0, h, "interior (4,4)")
    add(INF, INF, Fraction(3, 5), Fraction(3, 5), "interior (inf,inf)")
    add(INF, 2, 0, Fraction(3, 5), "interior (inf,2)")
    add(8, 4, 0, Fraction(1, 2), "interior (8,4)")
    add(3, 6, Fraction(-1, 10), Fraction(2, 5), "interior (3,6)")
    add(6, 6, Fraction(1, 10), h, "interior (6,6)")
    add(INF, 4, Fraction(1, 4), Fraction(3, 5), "interior (inf,4)")
    add(2, 6, Fraction(-1, 6), Fraction(1, 6), "S_PACKET face r=6")
    add(12, 3, Fraction(1, 10), h, "interior (12,3)")
    add(5, 5, 0, Fraction(2, 5), "SB face (5,5)")
    # S_PACKET violations
    add(2, 4, Fraction(-7, 20), Fraction(1, 2), "S_PACKET -0.225")
    add(2, 2, Fraction(-1, 2), 1, "S_PACKET -0.5")
    add(2, INF, Fraction(-1, 2), 1, "S_PACKET -0.25")
    add(4, 8, Fraction(-2, 5), 1, "S_PACKET -0.2125, S_SOBOLEV -0.025")
    add(2, 6, Fraction(-3, 10), 1, "S_PACKET -0.133")
    # S_SOBOLEV violations
    add(INF, INF, Fraction(2, 5), Fraction(3, 5), "S_SOBOLEV -0.1")
    add(INF, 2, Fraction(-1, 5), 1, "S_SOBOLEV -0.2, S_PACKET -0.2")
    add(INF, 4, 0, 1, "S_SOBOLEV -0.25")
    add(12, INF, 0, 1, "S_SOBOLEV -0.25")
    add(INF, INF, 0, 1, "S_SOBOLEV -0.5")
    # SB_SCALING violations
    add(4, 4, Fraction(-3, 5), h, "SB -0.1, S_PACKET -0.475")
    add(3, 3, 0, Fraction(1, 6), "SB_SCALING -0.167 (3,3)")
    add(6, 2, Fraction(-1, 5), Fraction(1, 3), "SB and S_PACKET (6,2)")
    add(4, 2, Fraction(-1, 8), Fraction(1, 4), "SB -0.125, S_PACKET -0.125 (4,2)")
    add(8, 4, Fraction(-1, 2), Fraction(1, 2), "SB, S_PACKET, S_SOBOLEV -0.375")
    add(INF, INF, 1, Fraction(1, 5), "SB -0.4 with B_LOWER")
    add(6, 6, Fraction(-1, 5), Fraction(1, 3), "SB -0.533 with S_PACKET")
    # B_LOWER violations (no family witness)
    add(6, 2, 1, Fraction(1, 5), "B_LOWER")
    add(INF, 2, 1, Fraction(2, 5), "B_LOWER")
    add(4, 4, 1, Fraction(1, 5), "B_LOWER")
    # knife-edge exclusions
    add(INF, 2, 1, h, "EXC_Q_INF_B_HALF")
    add(INF, INF, h, 1, "EXC_QR_INF_S_HALF")
    add(4, INF, Fraction(-1, 4), h, "EXC_B_HALF_S_EDGE")
    add(2, INF, Fraction(1, 2), 0, "both r = inf exclusions")
    add(4, INF, h, Fraction(1, 4), "EXC_R_INF_S_HALF_B_EDGE")
    # mixed violations
    add(INF, INF, 0, 0, "many")
    add(2, INF, Fraction(-1, 2), Fraction(1, 4), "S_PACKET and SB")
    add(4, 4, Fraction(-1), Fraction(1, 2), "SB and S_PACKET")
    add(8, 8, Fraction(-1, 2), 0, "B_LOWER with S_PACKET")
    add(INF, 4, Fraction(-1, 2), 1, "S_SOBOLEV and S_PACKET")
    return out
