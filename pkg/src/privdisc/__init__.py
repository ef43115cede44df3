"""Data-disclosure mappings with exact per-sample privacy.

Compute how much a latent variable (or the dataset itself) can be revealed
while the disclosed output stays statistically independent of every
individual data sample, build the optimal mappings that achieve it, and
verify the privacy guarantees independently.
"""

from .asymptotics import (CapacityScan, PrivateInformationResult, c_alpha_zero,
                          capacity_scan, j_value, private_information)
from .closedform import (TwoBinaryParams, iid_uniform_scenario, modular_chain_construct,
                         modular_sum_construct, partition_construct,
                         two_binary_scenario, two_binary_solve)
from .engine import (DisclosureMapping, DisclosureReport, SelfDisclosureReport,
                     assemble_mapping, check_feasibility, conditional_entropy_bound,
                     constant_mapping, deterministic_mapping, disclosure_upper_bound,
                     latent_output_information, privacy_residuals, self_disclosure,
                     solve_capacity)
from .errors import (BudgetExceededError, DimensionMismatchError, DistributionError,
                     InfeasibleLPError, NotIndependentError, PrivDiscError,
                     ScenarioFormatError, TruncatedEnumerationError)
from .geometry import (ConstraintMatrix, ConstraintSystem, ExtremePointSet,
                       build_constraint_matrix, enumerate_extreme_points,
                       indicator_channel, null_space_basis)
from .heuristics import (HeuristicReport, compose_window_mappings, iid_bernoulli_scenario,
                         partial_processing, preprocess_chain, preprocess_composite,
                         uniformize)
from .oracle import (ExactExtremePointSet, VerificationResult, brute_force_capacity,
                     exact_constraint_matrix, exact_dataset_law, exact_extreme_points,
                     exact_null_space, verify_mapping)
from .probability import (Channel, DiscreteScenario, Pmf, binary_entropy,
                          build_observation_scenario, build_observation_scenario_exact,
                          conditional_mutual_information, entropy, mutual_information,
                          tv_distance)

__version__ = "0.1.0"
