"""Semi-analytic oracles and post-processing."""
from __future__ import annotations

from .blowup import (
    ASYMPTOTIC_THRESHOLD,
    BlowupFit,
    BlowupHypothesisReport,
    FitModel,
    InsufficientAsymptotics,
    check_blowup_hypotheses,
    fit_blowup,
)
from .conservation import (
    ConservationMonitor,
    ConservationReport,
    ConservationSample,
    a_rate,
    conservation_report,
    gradient_energy_balance,
    sample_conservation,
)
from .riccati import (
    RiccatiDomainError,
    RiccatiForm,
    RiccatiSeries,
    RiccatiSolution,
    blowup_time,
    classify_forcing,
    riccati_exact,
    riccati_numeric,
)

__all__ = [
    "ASYMPTOTIC_THRESHOLD",
    "BlowupFit",
    "BlowupHypothesisReport",
    "ConservationMonitor",
    "ConservationReport",
    "ConservationSample",
    "FitModel",
    "InsufficientAsymptotics",
    "RiccatiDomainError",
    "RiccatiForm",
    "RiccatiSeries",
    "RiccatiSolution",
    "a_rate",
    "blowup_time",
    "check_blowup_hypotheses",
    "classify_forcing",
    "conservation_report",
    "gradient_energy_balance",
    "fit_blowup",
    "riccati_exact",
    "riccati_numeric",
    "sample_conservation",
]
