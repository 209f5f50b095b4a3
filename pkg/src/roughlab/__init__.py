"""Numerical laboratory for path-space norms, rough-path lifts, exact
optimal transport and Gaussian concentration experiments."""

from .concentration import (
    ConcentrationReport,
    CountTailReport,
    FerniqueReport,
    TailFit,
    brownian_running_max_survival,
    empirical_concentration_experiment,
    fernique_check,
    n1_tail_experiment,
    tail_fit,
)
from .errors import NumericalError
from .flows import (
    AdditiveShiftReport,
    RdeShiftReport,
    SobolevRatioReport,
    VectorFieldSpec,
    additive_lipschitz_ratio,
    additive_sobolev_ratio,
    ode_additive_solve,
    rde_shift_response,
    rde_solve,
    shift_entropy,
)
from .gaussian import (
    GaussianSpec,
    SeededRng,
    cm_norm,
    fbm_covariance,
    projection_metric,
    sample_path,
    sample_paths,
    sample_vectors,
    schauder_coeffs,
    schauder_functional_norms,
)
from .paths import (
    Partition,
    SampledPath,
    SobolevParams,
    control_eval,
    p_variation,
    p_variation_bruteforce,
    read_path_csv,
    sobolev_norm,
    sup_distance,
    variation_sum,
    write_path_csv,
)
from .roughlift import (
    DEFAULT_SHIFT_ALPHA,
    RoughPath2,
    ShiftCountReport,
    chen_lift,
    chen_residual,
    greedy_count_from_control,
    homog_pvar_norm,
    n_alpha,
    n_alpha_shift_bound_check,
    pvar_norm_terms,
    read_rough_csv,
    rho_pvar,
    sym_residual,
    translate,
    write_rough_csv,
)
from .transport import (
    EmpiricalMeasure,
    GroundCost,
    LipschitzMap,
    MetricAxiomsReport,
    PushforwardReport,
    ShiftPathReport,
    TransportCheck,
    empirical_wasserstein,
    gaussian_kl,
    gaussian_w2,
    measure_from_vectors,
    metric_axioms_check,
    pushforward_check,
    t2_check_finite_dim,
    t2_shift_experiment_path,
    wasserstein_bruteforce,
    write_cost_matrix_csv,
)

__version__ = "0.1.0"
