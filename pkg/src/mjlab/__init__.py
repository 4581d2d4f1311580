"""Numerical library for Jacobi-type modular objects: special functions,
metaplectic slash actions, covariant differential operators, Weil
representation matrices, completed Appell sums, Fourier kernel bases, and
theta decomposition, with a verification harness for the operator
identities connecting them.
"""

__version__ = "0.1.0"

from .core import EvalPoint, FunctionHandle, TruncationPolicy, WeightIndex
from .errors import MjlabError

__all__ = [
    "EvalPoint",
    "FunctionHandle",
    "TruncationPolicy",
    "WeightIndex",
    "MjlabError",
    "__version__",
]
