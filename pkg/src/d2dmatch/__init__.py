"""Distributed greedy matching on weighted user graphs, with exact oracles,
closed-form analysis and Monte Carlo experiments."""

__version__ = "0.1.0"

from .errors import (D2DError, InvalidParameterError, ParseError, SolverError,  # noqa: E402
                     UnsupportedParameterError, ValidationError)
from .graph import (UNIFORM_12, LocationSet, WeightDistribution, WeightedGraph,  # noqa: E402
                    assign_weights, gen_geometric, gen_gnp, gen_grid, gen_line,
                    gen_poisson_forest, gen_poisson_tree, load_graph, load_locations,
                    save_graph, save_locations, uniform_disk_locations)
from .greedy import MatchingResult, TiePolicy, greedy_match, longest_chain_stat  # noqa: E402
from .exact import (BoundReport, ExactResult, exact_match, exact_match_bruteforce,  # noqa: E402
                    per_instance_bound, welfare_upper_bound)
from .analytics import (GridBoundReport, ProposalProbs, RecurrenceTable,  # noqa: E402
                        gnp_pr_bound, grid_bound_report, linear_recurrence, linear_slope,
                        root_expected_weight, solve_proposal_probs)
from .experiments import (AggregateResult, FailureModel, GenSpec, TrialRecord,  # noqa: E402
                          mc_ratio, mc_rounds, range_sweep, tree_approx_error, worst_case_demo)
