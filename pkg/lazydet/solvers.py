# lazydet/solvers.py
"""Reachability probabilities on explicit Markov chains and MDPs.

Both solvers take any object exposing `num_states`, `graph()` and
`distributions(s)` (a list of [(target, probability), ...] per action).
States that cannot reach the target are fixed to 0 and states that reach it
almost surely (under some scheduler, for MDPs) to 1 before the numeric part.
"""

import logging
from typing import Iterable, List

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .config import config
from .exceptions import ConvergenceError
from .graph import can_reach, prob1_reach

logger = logging.getLogger(__name__)


def _qualitative(system, target: Iterable[int]):
    graph = system.graph()
    target = set(target)
    positive = can_reach(graph, target)
    sure = prob1_reach(graph, target) & positive if target else set()
    values = np.zeros(system.num_states)
    values[sorted(sure)] = 1.0
    return values, sorted(positive - sure)


def reach_probability_mc(system, target: Iterable[int], settings=None) -> np.ndarray:
    settings = settings or config['default']
    values, transient = _qualitative(system, target)
    if not transient:
        return values
    position = {s: i for i, s in enumerate(transient)}
    rows, cols, data = [], [], []
    constant = np.zeros(len(transient))
    for s in transient:
        for distribution in system.distributions(s):
            for t, p in distribution:
                if t in position:
                    rows.append(position[s])
                    cols.append(position[t])
                    data.append(p)
                else:
                    constant[position[s]] += p * values[t]
    size = len(transient)
    inner = sparse.csr_matrix((data, (rows, cols)), shape=(size, size))

    if size <= settings.DIRECT_SOLVE_LIMIT:
        solution = np.atleast_1d(spsolve((sparse.identity(size, format='csr') - inner).tocsc(), constant))
    else:
        solution = np.zeros(size)
        residual = np.inf
        for iteration in range(1, settings.MAX_ITERATIONS + 1):
            updated = inner @ solution + constant
            residual = float(np.max(np.abs(updated - solution)))
            solution = updated
            if residual < settings.SOLVER_TOLERANCE:
                logger.debug(f"chain solver converged after {iteration} iterations")
                break
        else:
            raise ConvergenceError(settings.MAX_ITERATIONS, residual)
    values[transient] = np.clip(solution, 0.0, 1.0)
    return values


def reach_probability_max_mdp(system, target: Iterable[int], settings=None) -> np.ndarray:
    """Maximal reachability by value iteration (Bellman updates over all actions)"""
    settings = settings or config['default']
    values, unknown = _qualitative(system, target)
    if not unknown:
        return values

    rows, cols, data = [], [], []
    starts: List[int] = []
    row = 0
    for s in unknown:
        starts.append(row)
        for distribution in system.distributions(s):
            for t, p in distribution:
                rows.append(row)
                cols.append(t)
                data.append(p)
            row += 1
    matrix = sparse.csr_matrix((data, (rows, cols)), shape=(row, system.num_states))
    starts = np.array(starts)

    residual = np.inf
    for iteration in range(1, settings.MAX_ITERATIONS + 1):
        best = np.maximum.reduceat(matrix @ values, starts)
        residual = float(np.max(np.abs(best - values[unknown])))
        values[unknown] = best
        if residual < settings.SOLVER_TOLERANCE:
            logger.debug(f"value iteration converged after {iteration} iterations")
            break
    else:
        raise ConvergenceError(settings.MAX_ITERATIONS, residual)
    np.clip(values, 0.0, 1.0, out=values)
    return values
