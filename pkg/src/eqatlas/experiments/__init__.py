"""Validation scenarios tying the closed-form theory to Monte Carlo measurements."""

from .catalog import get_scenario, scenario_catalog
from .figures import emit_figures
from .laplace import LaplaceRow, laplace_sanity
from .model import Check, CheckResult, Curve, RunManifest, Scenario, Source
from .runner import load_manifest, rerun_manifest, run_scenario

__all__ = [
    "Check",
    "CheckResult",
    "Curve",
    "LaplaceRow",
    "RunManifest",
    "Scenario",
    "Source",
    "emit_figures",
    "get_scenario",
    "laplace_sanity",
    "load_manifest",
    "rerun_manifest",
    "run_scenario",
    "scenario_catalog",
]
