"""Fuzzy-valued recurrent fractal interpolation.

Builds a recurrent iterated function system over a data set of fuzzy
numbers, computes the fuzzy-valued interpolation function it fixes, and
certifies its analytic properties (contraction, Hölder continuity,
stability under data and scaling perturbations).
"""

from .analysis import (
    HolderCheck,
    HolderParams,
    StabilityReport,
    a_priori_norm_bound,
    bound_perturb_alpha,
    bound_perturb_both,
    bound_perturb_u,
    bound_perturb_x,
    holder_params,
    run_perturbation_experiment,
    run_perturbation_suite,
    verify_holder,
)
from .config import ProblemConfig, example_config, load_config
from .errors import FuzzFracError
from .fuzzy import (
    DEFAULT_GRID_SIZE,
    FuzzyNumber,
    Interval,
    add,
    crisp,
    d_inf,
    from_breakpoints,
    fuzzy_zero,
    hukuhara_diff,
    len_level,
    level,
    make_triangular,
    resample,
    scale,
    uniform_levels,
)
from .rifs import (
    AddressMap,
    ContractionCertificate,
    FuzzyDataSet,
    RifsSpec,
    ScalingReport,
    build_matrix,
    build_rifs,
    check_irreducible,
    contraction_certificate,
    f_map,
    lipschitz_q,
    map_l,
    map_l_inv,
    q_map,
    validate_scaling,
)
from .solver import (
    ChaosGameSample,
    IterationReport,
    LevelSetTable,
    SampledFuzzyFunction,
    apply_T,
    chaos_game,
    evaluate,
    export_level_sets,
    make_grid,
    metric_D,
    node_interpolant,
    refinement_residual,
    residual,
    solve,
    unroll_value,
)

__version__ = "0.1.0"
