"""Numerical laboratory for the HHL filter functions and their error analysis.

Subpackages: :mod:`filters` (f, g and regions), :mod:`certifier` (sampled sup
ratios and interval proofs), :mod:`linalg` (Hermitian eigensolver),
:mod:`qpe` (bins and kernels), :mod:`sim` (filtered states and the bound),
:mod:`cli`.
"""
from .errors import (ConfigurationError, DegenerateStateError, DomainError, HHLCertError,
                     InputError, NumericalError, ParameterError, SingularMatrixError,
                     SpectrumWarning)
from .filters import (FilterValue, GenericFilter, KappaParams, Region, classify_region,
                      eval_filter, filter_derivatives, filter_difference, filter_values,
                      hhl_filter)

__version__ = "0.1.0"
