"""Triangular random matrix ensembles: samplers, Lambert-W limit laws,
finite-n biorthogonal kernels, and alternating-tree combinatorics."""

from .biorthogonal import (
    GTPattern,
    KernelCoeffs,
    MomentMatrixG,
    StirlingTable,
    bari_K,
    bari_haar_mc,
    correlation,
    det_G,
    g_entry,
    gt_volume,
    joint_density,
    kernel_eval,
    lu_identity_residual,
    stirling_unsigned,
    wishart_joint_density,
)
from .ensembles import (
    EmpiricalDistribution,
    EnsembleParams,
    RngState,
    SpectrumSample,
    ks_statistic,
    mc_moment,
    sample_gamma,
    sample_haar_unitary,
    sample_matrix,
    sample_standard_complex_gaussian,
    spectrum,
)
from .errors import (
    AccuracyError,
    BranchError,
    BudgetError,
    ConvergenceError,
    DegeneracyError,
    DomainError,
    InputError,
    TrimatError,
)
from .limitlaws import (
    E_EDGE,
    LambertCutValue,
    f0_cdf,
    f0_density,
    ftheta_density,
    ftheta_density_grid,
    ftheta_edge,
    lambert_w_cut,
    lambert_w_cut_log,
    lambert_w_principal,
    lambert_w_real,
    mp_atom,
    mp_density,
    mu0_moment,
    r_transform,
    stieltjes_S,
)
from .numerics import QuadratureRule, integrate, newton_complex, qr_unitary, singular_values
from .trees import (
    IndexPair,
    PlaneTree,
    classify_index_pair,
    count_alternating_trees,
    count_delta_hat,
    egf_partial_sum,
    is_alternating,
    iter_index_pairs,
    walk_profile,
)

__version__ = "0.1.0"
