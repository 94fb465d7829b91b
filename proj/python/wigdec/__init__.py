"""Shift-averaged Wigner functions and decoherence of split wave packets.

Lengths are in angstrom, wavenumbers in inverse angstrom.  State cases are
named ``"single"``, ``"interferometer"`` and ``"magnetic"``.
"""

from ._core import (
    GOLDEN_MEAN,
    CoherenceReport,
    GaussianPacket,
    GaussianShift,
    GoldenMean,
    TwoTone,
    WigdecError,
    __version__,
    analytic_epsilon,
    averaged_wigner,
    coherence_report,
    count_critical_points,
    density,
    elliptic_f,
    elliptic_k,
    entropy,
    fibonacci,
    fibonacci_ratio,
    pure_wigner,
    shift_at,
)

__all__ = [
    "GOLDEN_MEAN",
    "CoherenceReport",
    "GaussianPacket",
    "GaussianShift",
    "GoldenMean",
    "TwoTone",
    "WigdecError",
    "__version__",
    "analytic_epsilon",
    "averaged_wigner",
    "coherence_report",
    "count_critical_points",
    "density",
    "elliptic_f",
    "elliptic_k",
    "entropy",
    "fibonacci",
    "fibonacci_ratio",
    "pure_wigner",
    "shift_at",
]
