"""proxlab: l1 proximal denoising and its parameter-sensitivity lab.

Exact solvers for the three identity-measurement l1 programs, the
closed-form small-noise risk of soft thresholding, Gaussian-mean-width
estimators, a reproducible Monte-Carlo sweep harness, reduced-scale
generalized-Lasso solvers, and a CLI that serializes everything to CSV.
"""

from .errors import (
    DegenerateInputError,
    InfeasibleProblemError,
    InvalidParameterError,
    ProxlabError,
    SamplingFailureError,
    SolverDivergenceError,
)
from .prox import (
    PROGRAMS,
    ProgramSpec,
    bp_denoise,
    descent_cone_member,
    equivalence_map,
    project_l1_ball,
    project_shifted,
    soft_threshold,
    solve_pd,
)
from .risk import (
    g_lambda,
    g_lambda_prime,
    lambda_bar,
    lambda_star,
    mse,
    phi_cdf_neg,
    phi_pdf,
    psnr,
    qp_risk,
    qp_risk_derivative,
    stat_dim_l1,
)
from .geometry import (
    EVENT_ENERGY_BAND,
    EVENT_LOW_ENERGY,
    EventSpec,
    GmwSetSpec,
    InstabilityConstants,
    bellec_lower,
    bellec_upper,
    gmw_estimate,
    n0_estimate,
    sample_event,
    sup_linear_l1l2,
)
from .mclab import (
    ProblemInstance,
    RiskCurve,
    SweepGrid,
    best_loss_vs_N,
    loss,
    make_instance,
    mc_risk,
    optimal_param,
    sweep,
)
from .cs import (
    SolverReport,
    bp_sigma_general,
    gaussian_matrix,
    haar_forward,
    haar_inverse,
    ista_qp,
    pg_ls,
)
from .estimators import GeneralizedLasso, ProximalDenoiser

__version__ = "0.1.0"
