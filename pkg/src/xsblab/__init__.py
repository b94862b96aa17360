"""Exact classifier and numerical laboratory for X^{s,b} -> L^q_t L^r_x embeddings of the Airy flow."""

__version__ = "0.1.0"

from .indices import INF, IndexQuadruple, Verdict, classify, parse_exponent, predicted_slope, region_slice  # noqa: E402
from .grid import GridSpec, SpacetimeField, airy_evolve, mixed_norm, xsb_norm  # noqa: E402
from .lab import necessity_battery, sufficiency_probe  # noqa: E402

__all__ = [
    "INF",
    "IndexQuadruple",
    "Verdict",
    "classify",
    "parse_exponent",
    "predicted_slope",
    "region_slice",
    "GridSpec",
    "SpacetimeField",
    "airy_evolve",
    "mixed_norm",
    "xsb_norm",
    "necessity_battery",
    "sufficiency_probe",
]
