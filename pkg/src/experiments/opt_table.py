from __future__ import annotations

from typing import List, Optional

import structlog
from pydantic import BaseModel

from calibration.errors import SolverBudgetError
from signgame.solver import MinimaxSolver, SolverBudget
from signgame.state import new_game

log = structlog.get_logger(__name__)


class OptRow(BaseModel):
    k: int
    r: int
    opt: Optional[int]  # None when SP(k, r) is over the solver budget
    diagonal: bool  # (k, r) = (2^t - 1, t)
    diagonal_ok: Optional[bool] = None


def _diagonal_depth(k: int, r: int) -> Optional[int]:
    return r if k == 2**r - 1 else None


def opt_table(k_max: int, r_max: int, budget: Optional[SolverBudget] = None) -> List[OptRow]:
    """opt(k, r) for 1 <= k <= k_max, 1 <= r <= r_max; one solver per k shares its memo across r."""
    budget = budget or SolverBudget()
    rows: List[OptRow] = []
    for k in range(1, k_max + 1):
        solver: Optional[MinimaxSolver] = None
        for r in range(1, r_max + 1):
            depth = _diagonal_depth(k, r)
            try:
                budget.check(k, min(r, k))
                if solver is None:
                    solver = MinimaxSolver(k, min(r_max, k, budget.max_rounds), budget)
                value: Optional[int] = solver.value(new_game(k, r))
            except SolverBudgetError:
                value = None
            ok = None if depth is None or value is None else value == depth
            if ok is False:
                log.warning("opt_diagonal_mismatch", k=k, r=r, opt=value, expected=depth)
            rows.append(OptRow(k=k, r=r, opt=value, diagonal=depth is not None, diagonal_ok=ok))
        if solver is not None:
            log.debug("opt_table_row", k=k, states=solver.states_visited)
    return rows
