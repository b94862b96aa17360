"""Exact index arithmetic and the admissibility classifier.

Exponents ``q`` and ``r`` live in ``[0, inf]`` and are represented either by a
:class:`fractions.Fraction` or by the singleton :data:`INF`.  Regularity
indices ``s`` and ``b`` are plain fractions.  Nothing in this module touches
floating point: several of the boundary conditions are equalities, and a
float cannot tell ``-1/4`` from ``-1/4 + 1e-17``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

__all__ = [
    "INF",
    "Exponent",
    "IndexQuadruple",
    "Verdict",
    "VIOLATION_TAGS",
    "parse_exponent",
    "parse_rational",
    "reciprocal",
    "classify",
    "predicted_slope",
    "region_slice",
    "region_csv",
    "format_rational",
    "FAMILIES",
]


class _Infinity:
    """Positive infinity, ordered above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("xsblab.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Exponent = Union[Fraction, _Infinity]

_HALF = Fraction(1, 2)

VIOLATION_TAGS = (
    "Q_BELOW_2",
    "R_BELOW_2",
    "B_LOWER",
    "S_PACKET",
    "S_SOBOLEV",
    "SB_SCALING",
    "EXC_Q_INF_B_HALF",
    "EXC_R_INF_S_HALF_B_EDGE",
    "EXC_QR_INF_S_HALF",
    "EXC_R_INF_SB_HALF",
    "EXC_B_HALF_S_EDGE",
)

_RATIONAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a decimal literal into an exact fraction.

    Decimals are read digit by digit, so ``"0.1"`` is exactly ``1/10``.
    """
    t = str(text).strip()
    if not _RATIONAL_RE.match(t) or ("/" in t and ("." in t.split("/")[0] or "e" in t.lower())):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def parse_exponent(text: str) -> Exponent:
    """Parse a Lebesgue exponent: ``"inf"`` or a nonnegative rational."""
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "+inf", "∞"):
        return INF
    value = parse_rational(t)
    if value < 0:
        raise ValueError(f"exponent must be nonnegative: {text!r}")
    return value


def as_exponent(value) -> Exponent:
    """Coerce ints, fractions, strings and ``INF`` to an :data:`Exponent`."""
    if value is INF:
        return value
    if isinstance(value, str):
        return parse_exponent(value)
    if isinstance(value, float):
        if value == float("inf"):
            return INF
        raise TypeError("float exponents are not exact; pass a string or Fraction")
    value = Fraction(value)
    if value < 0:
        raise ValueError("exponent must be nonnegative")
    return value


def as_rational(value) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("float indices are not exact; pass a string or Fraction")
    return Fraction(value)


def reciprocal(x: Exponent) -> Fraction:
    """``1/x`` with ``1/INF == 0``."""
    if x is INF:
        return Fraction(0)
    if x <= 0:
        raise ZeroDivisionError("reciprocal of a non-positive exponent")
    return 1 / Fraction(x)


def format_rational(x) -> str:
    """Serialise as ``p/q`` (``inf`` for :data:`INF`)."""
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class IndexQuadruple:
    q: Exponent
    r: Exponent
    s: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_exponent(self.q))
        object.__setattr__(self, "r", as_exponent(self.r))
        object.__setattr__(self, "s", as_rational(self.s))
        object.__setattr__(self, "b", as_rational(self.b))
        if not (self.q > 0 and self.r > 0):
            raise ValueError("q and r must be positive")

    @property
    def inv_q(self) -> Fraction:
        return reciprocal(self.q)

    @property
    def inv_r(self) -> Fraction:
        return reciprocal(self.r)

    def as_dict(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("q", "r", "s", "b")}

    def __str__(self):
        return "({})".format(",".join(format_rational(getattr(self, k)) for k in "qrsb"))


@dataclass(frozen=True)
class Verdict:
    admissible: bool
    violations: tuple = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {"admissible": self.admissible, "violations": list(self.violations)}


def classify(idx: IndexQuadruple) -> Verdict:
    """Decide whether ``||u||_{L^q_t L^r_x} <~ ||u||_{X^{s,b}}`` holds.

    Every failed condition is reported, in the order of :data:`VIOLATION_TAGS`.
    Reading of the garbled ``(2, inf, 1/2 - 3b)`` clause: reject whenever
    ``r = inf`` and ``s + 3b = 1/2``.
    """
    q, r, s, b = idx.q, idx.r, idx.s, idx.b
    iq, ir = idx.inv_q, idx.inv_r
    out = []
    if q < 2:
        out.append("Q_BELOW_2")
    if r < 2:
        out.append("R_BELOW_2")
    if b < _HALF - iq:
        out.append("B_LOWER")
    if s < ir / 2 - Fraction(1, 4):
        out.append("S_PACKET")
    if s < _HALF - 3 * iq - ir:
        out.append("S_SOBOLEV")
    if s + 3 * b < 2 - 3 * iq - ir:
        out.append("SB_SCALING")
    if q is INF and b == _HALF:
        out.append("EXC_Q_INF_B_HALF")
    if r is INF and s == _HALF and b == _HALF - iq:
        out.append("EXC_R_INF_S_HALF_B_EDGE")
    if q is INF and r is INF and s == _HALF:
        out.append("EXC_QR_INF_S_HALF")
    if r is INF and s + 3 * b == _HALF:
        out.append("EXC_R_INF_SB_HALF")
    if b == _HALF and s == _HALF - 3 * iq - ir:
        out.append("EXC_B_HALF_S_EDGE")
    return Verdict(not out, tuple(out))


FAMILIES = ("U-block", "ModulationShell", "WavePacket")


def predicted_slope(family: str, idx: IndexQuadruple) -> Fraction:
    """Closed-form growth exponent in N of ``mixed / xsb`` for an extremal family."""
    iq, ir, s, b = idx.inv_q, idx.inv_r, idx.s, idx.b
    if family == "U-block":
        return (4 - 3 * iq - ir) - (s + 3 * b + 2)
    if family == "ModulationShell":
        return (1 - 3 * iq - ir) - (s + _HALF)
    if family == "WavePacket":
        return (ir / 2 - _HALF) - (s - Fraction(1, 4))
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _axis(lo: Fraction, hi: Fraction, resolution: int) -> list:
    if lo == hi:
        return [lo]
    step = (hi - lo) / (resolution - 1)
    return [lo + k * step for k in range(resolution)]


def region_slice(q, r, s_range, b_range, resolution: int) -> list:
    """Classify every point of an exact rational ``(s, b)`` grid.

    A degenerate range (``lo == hi``) contributes a single sample.
    Returns ``[(s, b, Verdict), ...]`` with ``s`` varying slowest.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    s_lo, s_hi = (as_rational(v) for v in s_range)
    b_lo, b_hi = (as_rational(v) for v in b_range)
    if s_lo > s_hi or b_lo > b_hi:
        raise ValueError("inverted range")
    q, r = as_exponent(q), as_exponent(r)
    return [
        (s, b, classify(IndexQuadruple(q, r, s, b)))
        for s in _axis(s_lo, s_hi, resolution)
        for b in _axis(b_lo, b_hi, resolution)
    ]


def region_csv(rows: Iterable) -> str:
    """CSV with header ``s,b,admissible,violations``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s", "b", "admissible", "violations"])
    for s, b, v in rows:
        w.writerow([format_rational(s), format_rational(b), str(v.admissible).lower(), "|".join(v.violations)])
    return buf.getvalue()
