"""Inequality registry, checks, suite runs and exponent fits."""

from .fit import ExponentFit, crossover, exponent_fit, fit_loglog
from .harness import InequalityRecord, Report, Sink, SuiteConfig, check, exact_suite, reproduce_command, run_suite
from .registry import EXP_T1, EXP_T2, EXP_T3, REGISTRY, SPECS, Aux, InequalitySpec, Instance, get_spec, select

__all__ = [
    "EXP_T1",
    "EXP_T2",
    "EXP_T3",
    "REGISTRY",
    "SPECS",
    "Aux",
    "ExponentFit",
    "InequalityRecord",
    "InequalitySpec",
    "Instance",
    "Report",
    "Sink",
    "SuiteConfig",
    "check",
    "crossover",
    "exact_suite",
    "exponent_fit",
    "fit_loglog",
    "get_spec",
    "reproduce_command",
    "run_suite",
    "select",
]
