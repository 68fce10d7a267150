"""burnside_lab: exact-arithmetic and Monte Carlo laboratory for the
Burnside process on k-ary n-tuples."""

__version__ = "0.1.0"

from .chain import (
    Kernel,
    OrbitKernel,
    RngStream,
    State,
    StateSpaceCapError,
    build_kernel,
    burnside_step,
    kernel_entry,
    kernel_entry_alphabet,
    kernel_entry_binary,
    lump_to_coordinates,
    lump_to_orbits,
    orbit_kernel,
    run_chain,
    sample_stationary,
    sample_stationary_many,
    stationary_probability,
)
from .exactcore import (
    LogReal,
    RationalMatrix,
    binomial,
    mat_pow,
    mpq,
    rational_nullspace,
    rational_rank,
    rising_factorial,
)
from .mixing import (
    BoundReport,
    DistanceCurve,
    bound_envelopes,
    chi2_avg,
    chi2_avg_definition,
    chi2_exact,
    chi2_from_one_one,
    chi2_spectral,
    cutoff_scan,
    cutoff_time,
    distance_curve,
    self_loop_lower_bound,
    tv_exact,
)
from .spectral import (
    Eigenvalue,
    OrthoVector,
    Tableau,
    beta,
    build_basis,
    build_f_Q,
    build_g_Q,
    chebyshev_eval,
    enumerate_tableaux,
    f_subset_eval,
    gamma_Q,
    gram_normalized,
    hahn_eval,
    jm_apply,
    multiplicity_table,
    norm_f_Q,
    subset_vector,
    t_scalar,
    tau_apply,
)
from .stats import (
    alternation_histogram,
    alternations,
    expected_alternations_after,
    ones_moments,
    stationary_alternation_variance,
)
from .verifier import (
    CheckResult,
    run_suite,
    verify_ck_multiplicities,
    verify_eigenstructure,
    verify_identities_appendixA,
    verify_johnson_gram,
    verify_lumpings,
    verify_orthobasis,
    verify_pplus_conjecture,
    verify_statistics_identities,
)
