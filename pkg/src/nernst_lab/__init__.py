"""Executable third-law checks for spin models and Kerr-Newman black holes.

Entropies are in natural units (k = 1). Spin models use the dimensionless
ratios ``b = B/T`` and ``x = lambda/T``; classical entropies use the
normalized single-spin measure.
"""

from .core import (AccessibilityStructure, EntropyModel, EntropyTable, ThermoState,
                   check_entropy_principle, check_extensivity, check_third_law_table,
                   planck_spread)
from .errors import (BracketError, ContinuityFailure, DomainError, EvaluationError,
                     InputError, InstabilityRegionError, NernstLabError, NoSolutionError,
                     StepSizeError)
from .kerr_newman import (KerrNewmanModel, KNParams, kn_derived, kn_extremal_mass,
                          kn_first_law_residual, kn_invert_temperature, kn_residual_entropy,
                          kn_temperature_max)
from .limit_lab import (AuditReport, Verdict, audit_model, heat_capacity,
                        iterated_limit_experiment, t0_classify, thermodynamic_temperature,
                        z_derivatives)
from .numerics import Classification, LimitEstimate, extrapolate_limit
from .spin_models import (ClassicalHeisenbergChainModel, ClassicalHeisenbergLimitModel,
                          ParamagnetModel, QuantumHeisenbergModel, RotorModel)

__version__ = "0.1.0"

__all__ = [
    "AccessibilityStructure", "EntropyModel", "EntropyTable", "ThermoState",
    "check_entropy_principle", "check_extensivity", "check_third_law_table", "planck_spread",
    "BracketError", "ContinuityFailure", "DomainError", "EvaluationError", "InputError",
    "InstabilityRegionError", "NernstLabError", "NoSolutionError", "StepSizeError",
    "KerrNewmanModel", "KNParams", "kn_derived", "kn_extremal_mass", "kn_first_law_residual",
    "kn_invert_temperature", "kn_residual_entropy", "kn_temperature_max",
    "AuditReport", "Verdict", "audit_model", "heat_capacity", "iterated_limit_experiment",
    "t0_classify", "thermodynamic_temperature", "z_derivatives", "Classification", "LimitEstimate", "extrapolate_limit",
    "ClassicalHeisenbergChainModel", "ClassicalHeisenbergLimitModel", "ParamagnetModel",
    "QuantumHeisenbergModel", "RotorModel",
]
