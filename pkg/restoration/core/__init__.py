from .operators import Preconditioner, as_vector, m_inner, m_norm
from .linear_maps import DenseMap, IdentityMap, LinearMap
from .spectral import adjoint_defect, estimate_operator_norm

__all__ = [
    "Preconditioner",
    "as_vector",
    "m_inner",
    "m_norm",
    "LinearMap",
    "DenseMap",
    "IdentityMap",
    "estimate_operator_norm",
    "adjoint_defect",
]
