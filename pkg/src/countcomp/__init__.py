"""countcomp: distributions on counts and compositions.

The library covers the Dirichlet family and its ratio / log-ratio
push-forwards on the open simplex, the Poisson-Gamma count chain
(negative binomial totals, multinomial conditionals,
Dirichlet-multinomial and beta-binomial marginals), the mass function of
a normalized count, and a verification suite that mechanically checks
every identity connecting them.
"""

from .checks import (
    CheckReport,
    adaptive_simpson,
    all_passed,
    check_beta_binomial_merge,
    check_conditional_multinomial,
    check_dm_integral,
    check_pi_independent_of_s,
    check_transform_density,
    enumerate_compositions,
    run_all,
)
from .distributions import (
    AggregatedValueMass,
    BetaBinomialParams,
    CountVector,
    DirichletParams,
    GammaMixtureParams,
    alr_dirichlet_log_pdf,
    beta_binomial_log_pmf,
    dirichlet_log_pdf,
    dirichlet_multinomial_log_pmf,
    dirichlet_sample,
    gamma_sample,
    inverted_dirichlet_log_pdf,
    multinomial_log_pmf,
    multinomial_sample,
    nb_truncation_bound,
    negative_binomial_log_pmf,
    negative_binomial_sample_via_mixture,
    normalized_nb_log_pmf,
    normalized_nb_value_pmf,
    poisson_sample,
)
from .simplex import (
    Composition,
    LogRatioVector,
    RatioVector,
    finite_difference_jacobian,
    finite_difference_log_det_log_ratio_inverse,
    finite_difference_log_det_ratio_inverse,
    log_det_jacobian_log_ratio_inverse,
    log_det_jacobian_ratio_inverse,
    log_ratio_forward,
    log_ratio_inverse,
    ratio_forward,
    ratio_inverse,
)
from .special import (
    log_beta,
    log_gamma,
    log_multivariate_beta,
    log_sum_exp,
    rank_one_update_det,
)

__version__ = "0.1.0"

__all__ = [
    "AggregatedValueMass",
    "BetaBinomialParams",
    "CheckReport",
    "Composition",
    "CountVector",
    "DirichletParams",
    "GammaMixtureParams",
    "LogRatioVector",
    "RatioVector",
    "adaptive_simpson",
    "all_passed",
    "alr_dirichlet_log_pdf",
    "beta_binomial_log_pmf",
    "check_beta_binomial_merge",
    "check_conditional_multinomial",
    "check_dm_integral",
    "check_pi_independent_of_s",
    "check_transform_density",
    "dirichlet_log_pdf",
    "dirichlet_multinomial_log_pmf",
    "dirichlet_sample",
    "enumerate_compositions",
    "finite_difference_jacobian",
    "finite_difference_log_det_log_ratio_inverse",
    "finite_difference_log_det_ratio_inverse",
    "gamma_sample",
    "inverted_dirichlet_log_pdf",
    "log_beta",
    "log_det_jacobian_log_ratio_inverse",
    "log_det_jacobian_ratio_inverse",
    "log_gamma",
    "log_multivariate_beta",
    "log_ratio_forward",
    "log_ratio_inverse",
    "log_sum_exp",
    "multinomial_log_pmf",
    "multinomial_sample",
    "nb_truncation_bound",
    "negative_binomial_log_pmf",
    "negative_binomial_sample_via_mixture",
    "normalized_nb_log_pmf",
    "normalized_nb_value_pmf",
    "poisson_sample",
    "rank_one_update_det",
    "ratio_forward",
    "ratio_inverse",
    "run_all",
]
