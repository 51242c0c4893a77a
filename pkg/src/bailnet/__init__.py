"""bailnet: clearing, bailout optimization and manipulation search for
financial networks with default costs and senior central-bank debt."""

from .money import Money, format_approx, format_exact, parse_rational
from .netmodel import (
    Bank,
    BailnetError,
    CapacityError,
    ClearingResult,
    FinancialNetwork,
    InvalidNetworkError,
    Liability,
    UnknownBankError,
    Violation,
    clear,
    least_clearing,
    market_value,
    network,
    shortfall,
    update_function,
    validate,
)
from .objectives import (
    BailoutPlan,
    InfeasiblePlanError,
    ObjectiveSpec,
    apply_exact_bailouts,
    evaluate,
    welfare_loss,
)
from .optimizer import (
    SolveReport,
    analytic_unlimited_total_value,
    objective_on_injection,
    optimize_exact,
    optimize_greedy,
    oracle_grid_search,
)
from .reductions import (
    ReductionInstance,
    SimpleGraph,
    blackhole_length,
    gen_densest_k,
    gen_independent_set,
    gen_total_value_budget,
    gen_vertex_cover,
    gen_welfare_blackhole,
    load_example,
    paper_examples,
)
from .abuse import ContractProposal, ExploitReport, apply_contract, find_exploits

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
