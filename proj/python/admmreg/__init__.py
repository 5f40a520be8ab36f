"""ADMM iterative regularization for ill-posed linear inverse problems.

Thin Python surface over the C++ core: linear operators with exact adjoints,
the strongly convex penalty and its prox, the ADMM loop with the
discrepancy-style stopping rule, and the experiment generators.
"""

from ._core import (  # noqa: F401
    DimensionError,
    ParameterError,
    UnsupportedOperatorError,
    SolverError,
    IoError,
    LinearOperator,
    Penalty,
    add_noise,
    blur_operator,
    circulant1d,
    circulant2d,
    dense,
    frame_penalty_weights,
    gaussian_kernel_1d,
    gradient2d,
    identity,
    oracle_solve_small,
    phantom,
    psf_gaussian,
    psf_motion,
    psnr,
    read_pgm,
    run_admm,
    tight_frame,
    write_pgm,
)

__all__ = [
    "DimensionError",
    "ParameterError",
    "UnsupportedOperatorError",
    "SolverError",
    "IoError",
    "LinearOperator",
    "Penalty",
    "add_noise",
    "blur_operator",
    "circulant1d",
    "circulant2d",
    "dense",
    "frame_penalty_weights",
    "gaussian_kernel_1d",
    "gradient2d",
    "identity",
    "oracle_solve_small",
    "phantom",
    "psf_gaussian",
    "psf_motion",
    "psnr",
    "read_pgm",
    "run_admm",
    "tight_frame",
    "write_pgm",
]
