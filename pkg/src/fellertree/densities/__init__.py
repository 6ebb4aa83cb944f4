"""Closed-form densities and probability mass functions, by conditioning regime."""
from .ancestors import (ancestor_rate, ancestors_pmf, ancestors_pmf_unconditioned_x,
                        final_pop_cdf, final_pop_density, log_ancestors_pmf,
                        log_ancestors_pmf_unconditioned_x, log_final_pop_density,
                        log_sample_ancestors_pmf, log_sample_ancestors_pmf_unconditioned_x,
                        pair_mrca_cdf, sample_ancestors_pmf,
                        sample_ancestors_pmf_unconditioned_x, sample_mrca_cdf)
from .coalescent import (coalescent_coordinate, coalescent_time_cdf, coalescent_time_joint,
                         coalescent_time_joint_unconditioned_x, coalescent_time_marginal,
                         coalescent_time_marginal_unconditioned_x, log_coalescent_time_joint,
                         log_coalescent_time_joint_unconditioned_x,
                         log_coalescent_time_marginal,
                         log_coalescent_time_marginal_unconditioned_x)
from .endpoints import (ancestors_pmf_both_endpoints, bessel_argument,
                        log_ancestors_pmf_both_endpoints,
                        log_sample_ancestors_pmf_both_endpoints,
                        sample_ancestors_pmf_both_endpoints)
from .largex import (largex_joint, largex_marginal, largex_mrca_joint, log_largex_joint,
                     log_largex_marginal, log_largex_mrca_joint, shift, shifted_time,
                     unshifted_time)
from .mrca import log_mrca_joint_density, mrca_joint_density
from .mte import EULER_GAMMA, MteSummary, mte_summary
from .population import (log_past_pop_density, log_posterior_t1_density,
                         log_posterior_x0_density, past_pop_density, posterior_t1_cdf,
                         posterior_t1_density, posterior_x0_density,
                         posterior_x0_density_exp_prior)
from .regimes import (REGIME_TAGS, ConditioningRegime, FixedT1, InfT1, PopulationState,
                      UnifT1, UnifX0, make_regime)
from .transition import (DensityWithAtom, cpe_density, log_cpe_density,
                         log_transition_density, log_transition_density_component,
                         transition_cdf, transition_density, transition_density_component,
                         transition_density_series)
