#!/usr/bin/env python3
"""
Cantor mass bound

Largest total mass a nonnegative, contractive kernel on the dyadic map can put
over a target point when x -> mu_x must be L-Lipschitz against a local family of
1-Lipschitz test functions. The bound shrinks with depth: in the limit the only
such kernel is zero.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from core.constants import CANTOR_BUMP_RADIUS, CANTOR_DEFAULT_DEPTHS, CANTOR_DEFAULT_L, LP_TOL
from core.errors import MassBoundError, ResolutionError
from core.spaces import NetMap, build_gallery_map, fiber_ids

from .common import _dbg

logger = logging.getLogger(__name__)

FIBER_MODELS = ("dyadic", "identity")


def _target_index(target: Union[str, float, Fraction], depth: int) -> int:
    value = Fraction(target)
    if not 0 < value < 1:
        raise ValueError(f"target must lie strictly between 0 and 1, got {target}")
    scaled = value * 2 ** depth
    if scaled.denominator != 1:
        raise ValueError(f"target {target} is not a grid point at depth {depth}")
    return int(scaled)


def _mass_model(depth: int, fiber_model: str) -> Tuple[NetMap, float]:
    if fiber_model == "dyadic":
        return build_gallery_map("dyadic", depth), 0.5 ** depth
    if fiber_model == "identity":
        return build_gallery_map("identity", 0.5 ** depth), 0.0
    raise ValueError(f"Unknown fiber model: {fiber_model}. Available: {', '.join(FIBER_MODELS)}")


def cantor_mass_bound(depth: int, L: float = CANTOR_DEFAULT_L, target: Union[str, float, Fraction] = "1/2",
                      fiber_model: str = "dyadic", bump_radius: float = CANTOR_BUMP_RADIUS) -> float:
    """Optimal mass at target of the kernel linear program at the given depth"""
    if isinstance(depth, bool) or int(depth) != depth or depth < 2:
        raise ResolutionError(f"depth must be an integer >= 2, got {depth!r}")
    if L < 0:
        raise ValueError(f"L must be non-negative, got {L}")
    depth = int(depth)
    j, tol = _mass_model(depth, fiber_model)
    target_x = _target_index(target, depth)
    base, total = j.codomain, j.domain

    # one variable per (x, y) with y in the tolerance fiber over x
    offsets, fibers = [0], []
    for x in range(len(base)):
        fib = fiber_ids(j, x, tol)
        fibers.append(fib)
        offsets.append(offsets[-1] + fib.size)
    n_vars = offsets[-1]

    rows, cols, vals, bounds = [], [], [], []
    row = 0

    # contractive: total mass at most 1 over each base point
    for x, fib in enumerate(fibers):
        rows.extend([row] * fib.size)
        cols.extend(range(offsets[x], offsets[x + 1]))
        vals.extend([1.0] * fib.size)
        bounds.append(1.0)
        row += 1

    # |int b dmu_x - int b dmu_x'| <= L d(x, x') for the constant and the local bumps
    total_dist = total.distances
    for x, other in base.neighbor_pairs:
        centres = np.union1d(fibers[x], fibers[other])
        tests = [np.ones(len(total))] + [np.maximum(0.0, bump_radius - total_dist[p]) for p in centres]
        limit = L * base.distances[x, other]
        for test in tests:
            left, right = test[fibers[x]], test[fibers[other]]
            for sign in (1.0, -1.0):
                rows.extend([row] * (left.size + right.size))
                cols.extend(range(offsets[x], offsets[x + 1]))
                cols.extend(range(offsets[other], offsets[other + 1]))
                vals.extend(sign * left)
                vals.extend(-sign * right)
                bounds.append(limit)
                row += 1

    a_ub = sparse.csr_matrix((vals, (rows, cols)), shape=(row, n_vars))
    objective = np.zeros(n_vars)
    objective[offsets[target_x]:offsets[target_x + 1]] = -1.0
    _dbg(f"cantor LP depth={depth} L={L}: {n_vars} variables, {row} constraints")

    result = linprog(objective, A_ub=a_ub, b_ub=np.array(bounds), bounds=(0, None), method="highs",
                     options={"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL})
    if result.status == 3:
        raise MassBoundError(f"Mass linear program unbounded at depth {depth}")
    if result.status != 0:
        raise MassBoundError(f"Mass linear program failed at depth {depth}: {result.message}")

    value = float(-result.fun)
    if value < LP_TOL:
        value = 0.0
    logger.debug(f"cantor mass bound depth={depth} L={L:g} target={target}: {value:.6g}")
    return value


def cantor_mass_sweep(depths: Iterable[int] = CANTOR_DEFAULT_DEPTHS, L: float = CANTOR_DEFAULT_L,
                      target: Union[str, float, Fraction] = "1/2", fiber_model: str = "dyadic",
                      workers: Optional[int] = None) -> List[Tuple[int, float]]:
    """(depth, bound) rows for a depth sweep, solved concurrently, returned in depth order"""
    depths = sorted(set(int(d) for d in depths))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        bounds = list(pool.map(lambda d: cantor_mass_bound(d, L, target, fiber_model), depths))
    return list(zip(depths, bounds))
