"""Multilinear time-invariant systems via the Einstein product on paired tensors."""

from .blocks import (
    BlockSpec,
    block_permutation,
    mode_col_block,
    mode_row_block,
    n_mode_col_block,
    n_mode_row_block,
)
from .errors import (
    DecompositionUnavailableError,
    FileFormatError,
    IndexBoundsError,
    MltiError,
    NoUniqueSolutionError,
    NumericalRefusal,
    ShapeError,
    SingularTensorError,
    SizeLimitError,
    SolverError,
    UnreachableTargetError,
)
from .spectral import (
    EigenCluster,
    TensorEVD,
    USpectrum,
    cayley_hamilton_residual,
    characteristic_polynomial,
    eigenvalue_clusters,
    polynomial_of,
    spectral_radius,
    tevd,
    u_eigen,
    u_eigenvalues,
)
from .systems import (
    MltiSystem,
    Stability,
    StabilityVerdict,
    Trajectory,
    TuckerFactors,
    classify_stability,
    from_tucker,
    is_observable,
    is_reachable,
    lyapunov_residual,
    lyapunov_solve,
    min_energy_input,
    obs_gramian_finite,
    obs_gramian_infinite,
    observability_tensor,
    reach_gramian_finite,
    reach_gramian_infinite,
    reachability_tensor,
    simulate,
    solution_at,
)
from .tensor import (
    DenseTensor,
    PairedTensor,
    einstein_apply,
    einstein_power,
    einstein_product,
    frobenius_norm,
    general_unfold,
    inner_product,
    is_u_orthogonal,
    is_u_positive_definite,
    is_weakly_symmetric,
    ivec,
    mode_n_product,
    n_mode_matricization,
    nullity_u,
    outer_product,
    phi,
    phi_inverse,
    rank_u,
    s_transpose,
    symmetric_part_eigenvalues,
    to_paired,
    tucker_product,
    u_det,
    u_diagonal,
    u_identity,
    u_inverse,
    u_transpose,
)
from .tolerance import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"
