# Sign-Preservation game SP(k, r)
from signgame.constants import (
    ADMISSIBLE_ALPHA,
    ADMISSIBLE_BETA,
    ADMISSIBLE_C0,
    admissibility_lower_bound,
    derived_constants,
    derived_constants_record,
)
from signgame.solver import MinimaxSolver, SolverBudget, solve_opt
from signgame.state import Sign, SignGameState, new_game, place, preserved_count, rescan_preserved
from signgame.strategies import (
    BinarySearchStrategy,
    MinimaxStrategy,
    PlayerA,
    PlayerF,
    TensorStrategy,
    binary_search_strategy,
    play_out,
    tensor_strategy,
    worst_case_preserved,
)

__all__ = [
    "ADMISSIBLE_ALPHA",
    "ADMISSIBLE_BETA",
    "ADMISSIBLE_C0",
    "BinarySearchStrategy",
    "MinimaxSolver",
    "MinimaxStrategy",
    "PlayerA",
    "PlayerF",
    "Sign",
    "SignGameState",
    "SolverBudget",
    "TensorStrategy",
    "admissibility_lower_bound",
    "binary_search_strategy",
    "derived_constants",
    "derived_constants_record",
    "new_game",
    "place",
    "play_out",
    "preserved_count",
    "rescan_preserved",
    "solve_opt",
    "tensor_strategy",
    "worst_case_preserved",
]
