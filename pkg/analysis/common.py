#!/usr/bin/env python3
"""
Shared records and helpers for the classification layer
"""

import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.constants import DISTANCE_EPS
from core.spaces import NetMap, NetSpace, openness_defect, surjectivity_defect

# Debug logging - accepts true/yes/on/1
_debug_val = os.getenv("KERNELS_DEBUG", "0").lower()
DEBUG = _debug_val in ("1", "true", "yes", "on")


def _dbg(msg):
    """Debug logging function - only outputs when KERNELS_DEBUG is truthy"""
    if DEBUG:
        print(msg, file=sys.stderr)


@dataclass(frozen=True, eq=False)
class SectionCandidate:
    """A net-scale section alpha: X -> Y of j"""

    alpha: NetMap
    lipschitz_bound: float
    section_defect: float

    @property
    def graph_ids(self) -> Tuple[int, ...]:
        return tuple(int(y) for y in np.unique(self.alpha.assignment))


@dataclass
class CandidateSet:
    """A subset A of the total space with its restriction defects"""

    points: Tuple[int, ...]
    surjectivity_defect: float
    openness_defect: Optional[float]
    minimal_flag: bool = False
    source: str = ""
    surjectivity_tol: float = 0.0
    refined_openness_defect: Optional[float] = None

    def __post_init__(self):
        self.points = tuple(sorted(int(p) for p in self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def surjective(self) -> bool:
        return self.surjectivity_defect <= self.surjectivity_tol + DISTANCE_EPS

    @property
    def admissible(self) -> bool:
        return (self.surjective and self.openness_defect == 0.0
                and self.refined_openness_defect in (None, 0.0))

    def point_objects(self, space: NetSpace):
        return [space.point(p) for p in self.points]


def certify_subset(j: NetMap, points, delta: float, c: float, source: str = "",
                   surjectivity_tol: float = 0.0) -> CandidateSet:
    """Restriction defects of j on a subset; openness is not evaluated once surjectivity fails"""
    points = tuple(sorted(int(p) for p in points))
    surj = surjectivity_defect(j, points)
    if surj > surjectivity_tol + DISTANCE_EPS:
        return CandidateSet(points, surj, None, source=source, surjectivity_tol=surjectivity_tol)
    return CandidateSet(points, surj, openness_defect(j, points, delta, c), source=source,
                        surjectivity_tol=surjectivity_tol)
