"""Exact tools for universal extension tensors of Lie algebras.

A tensor W^{ij}_k turns n copies of any Lie algebra into a new Lie algebra
exactly when the product e^i * e^j = sum_k W^{ij}_k e^k is commutative and
associative.  The submodules cover exact linear algebra, tensor validation
and transforms, the associated commutative algebra, carrier Lie algebras,
second cohomology and monoid-based generators.
"""

__version__ = "0.1.0"

from .errors import UextError  # noqa: E402
from .exact_linalg import RationalMatrix, to_rational  # noqa: E402
from .tensor_core import ExtensionTensor, BasisChange, validate, is_valid, transform  # noqa: E402
from .comm_algebra import CommAlgebra  # noqa: E402

__all__ = [
    "__version__",
    "UextError",
    "RationalMatrix",
    "to_rational",
    "ExtensionTensor",
    "BasisChange",
    "validate",
    "is_valid",
    "transform",
    "CommAlgebra",
]
