#!/usr/bin/env python3
"""
Minimal surjective transversals: subsets meeting every fiber that no single
removal keeps surjective. At net scale these come from one-point-per-fiber
selections pruned to minimal, so the selection count is the product of the fiber sizes.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from core.constants import DEFAULT_MAX_COUNT
from core.errors import SurjectivityError
from core.spaces import NetMap, fiber_ids, surjectivity_defect

from .common import CandidateSet

logger = logging.getLogger(__name__)


@dataclass
class TransversalEnumeration:
    count: int
    transversals: List[CandidateSet] = field(default_factory=list)
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.transversals)

    def __iter__(self):
        return iter(self.transversals)


def _is_minimal(points, fibers) -> bool:
    """Every member is the only representative of some fiber"""
    members = set(points)
    sole = set()
    for fib in fibers:
        hit = members.intersection(fib)
        if len(hit) == 1:
            sole.update(hit)
    return sole == members


def _prune_to_minimal(points, fibers) -> tuple:
    """Drop redundant members, highest id first, until every member is some fiber's sole representative"""
    members = set(points)
    for y in sorted(points, reverse=True):
        rest = members - {y}
        if all(rest.intersection(fib) for fib in fibers):
            members = rest
    return tuple(sorted(members))


def minimal_surjective_transversals(j: NetMap, max_count: int = DEFAULT_MAX_COUNT,
                                    tol: Optional[float] = None) -> TransversalEnumeration:
    base = j.codomain
    tol = base.covering_radius if tol is None else tol
    fibers = []
    for x in range(len(base)):
        fib = fiber_ids(j, x, tol)
        if fib.size == 0:
            raise SurjectivityError(f"No transversal: empty fiber over x={base.point(x).coords}",
                                    witness=base.point(x))
        fibers.append([int(y) for y in fib])
    count = math.prod(len(fib) for fib in fibers)

    fiber_sets = [set(fib) for fib in fibers]
    found, seen, truncated = [], set(), False
    for selection in itertools.product(*fibers):
        # a point shared by two fibers can make another selected point redundant
        points = _prune_to_minimal(set(selection), fiber_sets)
        if points in seen:
            continue
        if len(found) >= max_count:
            truncated = True
            break
        seen.add(points)
        found.append(CandidateSet(points, surjectivity_defect(j, points), None,
                                  minimal_flag=_is_minimal(points, fiber_sets),
                                  source=f"transversal-{len(found)}", surjectivity_tol=tol))

    logger.info(f"{j.name}: {count} fiber selection(s), {len(found)} distinct transversal(s) listed"
                f"{' (truncated)' if truncated else ''}")
    return TransversalEnumeration(count, found, truncated)
