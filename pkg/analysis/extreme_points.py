#!/usr/bin/env python3
"""
Vertices of the product of fiber simplices (base treated as discrete)

Brute-force vertex enumeration: a vertex is a feasible point where N - m of the
nonnegativity constraints are active, m being the number of fiber equalities.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from core.errors import SurjectivityError
from core.kernels import Kernel, kernel_from_selection
from core.spaces import NetMap, fiber_ids

logger = logging.getLogger(__name__)

VERTEX_TOL = 1e-9


@dataclass
class ExtremePointEnumeration:
    count: int
    selections: List[Tuple[int, ...]] = field(default_factory=list)
    kernels: List[Kernel] = field(default_factory=list)


def _polytope(j: NetMap, tol: Optional[float]):
    """Fiber-sum equality rows over the variables (x, y), y in fiber(x)"""
    variables = []
    for x in range(len(j.codomain)):
        fib = fiber_ids(j, x, tol)
        if fib.size == 0:
            raise SurjectivityError(f"Empty fiber over x={j.codomain.point(x).coords}", witness=j.codomain.point(x))
        variables.extend((x, int(y)) for y in fib)
    equalities = np.zeros((len(j.codomain), len(variables)))
    for k, (x, _) in enumerate(variables):
        equalities[x, k] = 1.0
    return variables, equalities


def enumerate_extreme_points_discrete(j: NetMap, tol: Optional[float] = 0.0) -> ExtremePointEnumeration:
    variables, equalities = _polytope(j, tol)
    rows, columns = equalities.shape
    rhs = np.ones(rows)

    vertices = set()
    for free in itertools.combinations(range(columns), rows):
        block = equalities[:, free]
        if np.linalg.matrix_rank(block) < rows:
            continue
        values = np.linalg.solve(block, rhs)
        if np.any(values < -VERTEX_TOL):
            continue
        point = np.zeros(columns)
        point[list(free)] = values
        vertices.add(tuple(np.round(point, 9)))

    selections = []
    for vertex in vertices:
        vertex = np.array(vertex)
        if not np.all(np.isclose(vertex, 0.0) | np.isclose(vertex, 1.0)):
            raise RuntimeError(f"Vertex is not a deterministic selection: {vertex}")
        chosen = [variables[k] for k in np.flatnonzero(np.isclose(vertex, 1.0))]
        selections.append(tuple(y for _, y in sorted(chosen)))
    selections.sort()

    expected = math.prod(int(row.sum()) for row in equalities)
    if len(selections) != expected:
        raise RuntimeError(f"Found {len(selections)} vertices, expected the product of fiber sizes {expected}")

    kernels = [kernel_from_selection(j, selection, label=f"vertex-{k}") for k, selection in enumerate(selections)]
    logger.info(f"{j.name}: {len(selections)} extreme point(s) over {rows} fiber(s)")
    return ExtremePointEnumeration(len(selections), selections, kernels)
