"""Fractional diffusion numerics: stable samplers, Mittag-Leffler functions,
Lévy-stable Green functions, a periodic Grünwald-Letnikov Riesz solver and
agent-based simulators."""

from .stable import (
    StableParams,
    EllipticalParams,
    RandomStream,
    characteristic_function,
    sample_stable,
    sample_one_sided_S,
    sample_subgaussian_2d,
    empirical_cf,
)
from .mittag_leffler import MLEvalConfig, ml, ml_asymptotic, ml_derivative, jump_count_pmf
from .green import (
    QuadratureConfig,
    SlowDecayWarning,
    gaussian_green,
    levy_tail_constant,
    levy_pdf,
    levy_cdf,
    scaled_green,
    scaled_cdf,
    green_pdf,
    convolve_initial,
)
from .riesz import (
    GridSpec,
    SchemeKernel,
    DensityField,
    InstabilityError,
    grunwald_coefficients,
    scheme_weights,
    build_kernel,
    identity_kernel,
    permutation_indices,
    step,
    solve,
    total_mass,
    amplification_spectrum,
)
from .agents import (
    AgentConfig,
    AgentEnsemble,
    fsde_step,
    run_ensemble,
    boxplot_stats,
    ctrw_simulate,
    marginal_histogram,
)
from .harness import parse_config, compare_micro_macro, mass_report

__version__ = "0.1.0"
