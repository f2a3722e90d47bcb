"""Weighted composition operators on weighted Bergman spaces of the right half-plane.

Operators act exactly on finite spans of reproducing kernels; an adaptive
quadrature oracle and a Laplace-side model check the same identities by
independent routes.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Constant,
    ConstantMap,
    KernelSpan,
    MoebiusMap,
    ReciprocalPower,
    SymbolPair,
    kernel,
    make_map,
    make_rng,
)
from .errors import *  # noqa: E402,F401,F403
from .kernelspace import bergman_norm, inner_product, kernel_eval  # noqa: E402
from .maps import denjoy_wolff, fixed_points, self_map_check  # noqa: E402
from .operators import Ca, Cstar, UCstarU, adjoint, apply, conjugate, wco_adjoint, wco_apply  # noqa: E402
from .classify import (  # noqa: E402
    classify_all,
    classify_Ca,
    classify_Cstar,
    classify_hermitian,
    classify_unitary,
    classify_UCstarU,
    find_symmetry,
    symmetry_obstruction,
)
from .quadrature import QuadratureConfig, quad_inner_product, quad_norm_squared, verify_identity  # noqa: E402
