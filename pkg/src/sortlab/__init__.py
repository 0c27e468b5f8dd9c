"""sortlab: a comparison-counting sorting laboratory.

Implements binary insertion with right-heavy search, paired insertion with
two-element merges (plain and deviation-aware pivot schedules),
merge-insertion sort, and their combination, with every comparison routed
through an explicit tally.  Exact expectation oracles and closed-form cost
models live alongside the algorithms so each can be checked against the
other; the `sortlab` command line drives experiments and emits CSV.
"""

from .analytics import (
    binary_slack,
    binary_sort_formula,
    info_lower_bound,
    linear_constant,
    per_step_extra_plain,
    per_step_extra_star,
    per_step_two_merge_star,
    star_pair_formula,
    step4_expected,
    sum_via_integral,
    total_formula,
    two_merge_pair_formula,
    worst_constant,
)
from .combination import PrefixChoice, choose_n_prime, combination_sort
from .core import (
    DuplicateKeyError,
    Expectation,
    Tally,
    ceil_lg,
    counting_compare,
    is_sorted_permutation,
    pow2_ratio,
    random_permutation,
)
from .harness import Fig1Spec, ResultRow, main, run_fig1, run_fig2, run_verify
from .merge_insertion import InsertionPlan, batch_bounds, merge_insertion_sort
from .oracles import (
    ALGORITHMS,
    RoundExpectation,
    exact_sort_expectation,
    exhaustive_average,
    monte_carlo,
    pair_enumeration_expectation,
    round_expectation_exact,
    sortedness_scan,
    worst_case,
)
from .rhbs import rhbs_average, rhbs_gap_cost, rhbs_insert, rhbs_pivot
from .sorters import (
    BINARY,
    ONE_TWO,
    ONE_TWO_STAR,
    VariantPolicy,
    binary_insertion_sort,
    one_two_insertion,
    use_two_merge,
)
from .two_merge import PivotSchedule, pivot_fraction, pivot_fraction_star, pivot_schedule, two_merge

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BINARY",
    "DuplicateKeyError",
    "Expectation",
    "Fig1Spec",
    "InsertionPlan",
    "ONE_TWO",
    "ONE_TWO_STAR",
    "PivotSchedule",
    "PrefixChoice",
    "ResultRow",
    "RoundExpectation",
    "Tally",
    "VariantPolicy",
    "batch_bounds",
    "binary_insertion_sort",
    "binary_slack",
    "binary_sort_formula",
    "ceil_lg",
    "choose_n_prime",
    "combination_sort",
    "counting_compare",
    "exact_sort_expectation",
    "exhaustive_average",
    "info_lower_bound",
    "is_sorted_permutation",
    "linear_constant",
    "main",
    "merge_insertion_sort",
    "monte_carlo",
    "one_two_insertion",
    "pair_enumeration_expectation",
    "per_step_extra_plain",
    "per_step_extra_star",
    "per_step_two_merge_star",
    "pivot_fraction",
    "pivot_fraction_star",
    "pivot_schedule",
    "pow2_ratio",
    "random_permutation",
    "rhbs_average",
    "rhbs_gap_cost",
    "rhbs_insert",
    "rhbs_pivot",
    "round_expectation_exact",
    "run_fig1",
    "run_fig2",
    "run_verify",
    "sortedness_scan",
    "star_pair_formula",
    "step4_expected",
    "sum_via_integral",
    "total_formula",
    "two_merge",
    "two_merge_pair_formula",
    "use_two_merge",
    "worst_case",
    "worst_constant",
]
