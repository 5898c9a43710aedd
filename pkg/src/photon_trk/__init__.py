"""Generalized Thomas-Reiche-Kuhn sum rules for interacting light-matter systems."""

from .models import BuiltModel, ModelDefinition, build, catalog_default
from .sumrules import DressedSpectrum, SumRuleReport, diagonalize_model, sum_rule_report

__all__ = [
    "BuiltModel",
    "DressedSpectrum",
    "ModelDefinition",
    "SumRuleReport",
    "build",
    "catalog_default",
    "diagonalize_model",
    "sum_rule_report",
]

__version__ = "0.1.0"
