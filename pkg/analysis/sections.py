#!/usr/bin/env python3
"""
Section search: every net-scale continuous right inverse alpha of j

Each base point is a variable whose domain is its fiber; adjacent base points
constrain d(alpha(x), alpha(x')) <= L * d(x, x'). Arc consistency prunes the
domains first (decisive on interval-like bases), then a depth-first search with
forward checking enumerates the survivors in lexicographic order.
"""

import logging
from collections import deque
from typing import List, Optional

import numpy as np

from core.constants import DEFAULT_LIPSCHITZ_BOUND, DISTANCE_EPS, MODULUS_REL_SLACK
from core.errors import SurjectivityError
from core.spaces import NetMap, fiber_ids

from .common import SectionCandidate, _dbg

logger = logging.getLogger(__name__)


def _arc_consistency(domains, neighbors, allowed) -> bool:
    queue = deque((a, b) for a in range(len(domains)) for b in neighbors[a])
    while queue:
        a, b = queue.popleft()
        if not domains[a]:
            return False
        keep = allowed(a, b).any(axis=1)
        if not keep.all():
            domains[a] = [y for y, k in zip(domains[a], keep) if k]
            if not domains[a]:
                return False
            queue.extend((c, a) for c in neighbors[a] if c != b)
    return True


def find_sections(j: NetMap, lipschitz_bound: float = DEFAULT_LIPSCHITZ_BOUND, tol: Optional[float] = None,
                  max_sections: Optional[int] = None) -> List[SectionCandidate]:
    """All sections of j at net scale with grid-adjacent Lipschitz bound and j(alpha(x)) within tol of x.

    Raises SurjectivityError when some fiber is empty at tolerance tol.
    """
    if lipschitz_bound <= 0:
        raise ValueError(f"lipschitz_bound must be positive, got {lipschitz_bound}")
    base, total = j.codomain, j.domain
    tol = base.covering_radius if tol is None else tol

    domains = []
    for x in range(len(base)):
        fib = fiber_ids(j, x, tol)
        if fib.size == 0:
            raise SurjectivityError(f"Empty fiber over x={base.point(x).coords} at tolerance {tol:g}",
                                    witness=base.point(x))
        domains.append([int(y) for y in fib])

    neighbors = [base.neighbors(x) for x in range(len(base))]
    base_dist, total_dist = base.distances, total.distances

    def allowed(a, b):
        limit = lipschitz_bound * base_dist[a, b] + DISTANCE_EPS
        return total_dist[np.ix_(domains[a], domains[b])] <= limit

    if not _arc_consistency(domains, neighbors, allowed):
        logger.info(f"{j.name}: no section with Lipschitz bound {lipschitz_bound:g} (arc consistency)")
        return []
    _dbg(f"{j.name}: domain sizes after arc consistency {[len(d) for d in domains]}")

    n = len(base)
    assignment = [-1] * n
    next_choice = [0] * n
    removals: List[list] = [[] for _ in range(n)]
    found: List[SectionCandidate] = []
    level = 0

    while level >= 0:
        if level == n:
            alpha = NetMap.from_assignment(base, total, assignment, name=f"section-{len(found)}")
            if alpha.lipschitz_estimate <= lipschitz_bound * (1 + MODULUS_REL_SLACK) + DISTANCE_EPS:
                landing = j.assignment[alpha.assignment]
                defect = float(base_dist[np.arange(n), landing].max())
                found.append(SectionCandidate(alpha, lipschitz_bound, defect))
                if max_sections is not None and len(found) >= max_sections:
                    logger.info(f"{j.name}: section search stopped at cap {max_sections}")
                    break
            level -= 1
            continue

        x = level
        for other, previous in reversed(removals[x]):
            domains[other] = previous
        removals[x] = []
        if next_choice[x] >= len(domains[x]):
            next_choice[x] = 0
            assignment[x] = -1
            level -= 1
            continue

        y = domains[x][next_choice[x]]
        next_choice[x] += 1
        assignment[x] = y

        # forward checking on unassigned neighbours
        consistent = True
        for other in neighbors[x]:
            if other < x:
                continue
            limit = lipschitz_bound * base_dist[x, other] + DISTANCE_EPS
            keep = [z for z in domains[other] if total_dist[y, z] <= limit]
            if len(keep) < len(domains[other]):
                removals[x].append((other, domains[other]))
                domains[other] = keep
            if not keep:
                consistent = False
                break
        if consistent:
            level += 1

    logger.info(f"{j.name}: {len(found)} section(s) with Lipschitz bound {lipschitz_bound:g}")
    return found
