#!/usr/bin/env python3
"""
Admissible sets: subsets A of Y on which j restricts to an open surjection

Candidates are the section graphs, the whole total space and the single-point
prunes of the whole space (B = A minus one point whose fiber has another
member). Each accepted set is re-certified one refinement finer when a refined
map is supplied.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.constants import DEFAULT_LIPSCHITZ_BOUND, DEFAULT_MAX_SETS, DISTANCE_EPS
from core.spaces import NetMap, NetPoint, openness_defect, surjectivity_defect, transport_subset

from .common import CandidateSet, SectionCandidate, _dbg, certify_subset
from .sections import find_sections

logger = logging.getLogger(__name__)


def prune_point(A: CandidateSet, y: Union[NetPoint, int], j: NetMap, delta: float, c: float,
                surjectivity_tol: Optional[float] = None) -> Optional[CandidateSet]:
    """A minus y with recomputed defects, or None when surjectivity or openness breaks"""
    y_id = y.id if isinstance(y, NetPoint) else int(y)
    if y_id not in A.points:
        raise ValueError(f"Point {y_id} is not a member of the candidate set")
    remaining = [p for p in A.points if p != y_id]
    if not remaining:
        return None
    tol = A.surjectivity_tol if surjectivity_tol is None else surjectivity_tol
    pruned = certify_subset(j, remaining, delta, c, source=f"{A.source or 'set'}-minus-{y_id}",
                            surjectivity_tol=tol)
    return pruned if pruned.admissible else None


def _fiberwise_singleton(j: NetMap, points: Sequence[int]) -> bool:
    counts = np.bincount(j.assignment[list(points)], minlength=len(j.codomain))
    return bool(counts.max() <= 1)


def _recertify(A: CandidateSet, j: NetMap, refined: NetMap, delta: float, c: float) -> CandidateSet:
    fine_points = transport_subset(j, refined, A.points)
    fine_delta = delta * refined.codomain.spacing / j.codomain.spacing
    fine_tol = A.surjectivity_tol * refined.codomain.spacing / j.codomain.spacing
    if fine_points.size == 0 or surjectivity_defect(refined, fine_points) > fine_tol + DISTANCE_EPS:
        A.refined_openness_defect = float("inf")
    else:
        A.refined_openness_defect = openness_defect(refined, fine_points, fine_delta, c)
    return A


def admissible_search(j: NetMap, delta: float, c: float, max_sets: int = DEFAULT_MAX_SETS,
                      lipschitz_bound: float = DEFAULT_LIPSCHITZ_BOUND, section_tol: Optional[float] = None,
                      surjectivity_tol: float = 0.0, refined: Optional[NetMap] = None,
                      sections: Optional[List[SectionCandidate]] = None,
                      workers: Optional[int] = None) -> Tuple[List[CandidateSet], bool]:
    """enumerate_admissible_sets plus a flag telling whether the cap truncated the list"""
    if sections is None:
        sections = find_sections(j, lipschitz_bound, section_tol, max_sections=max_sets)

    proposals: List[Tuple[Tuple[int, ...], str]] = []
    for k, section in enumerate(sections):
        proposals.append((section.graph_ids, f"section-graph-{k}"))
    everything = tuple(range(len(j.domain)))
    proposals.append((everything, "full"))
    fiber_sizes = np.bincount(j.assignment, minlength=len(j.codomain))
    for y in everything:
        if fiber_sizes[j.assignment[y]] >= 2:
            proposals.append((tuple(p for p in everything if p != y), f"full-minus-{y}"))

    seen = set()
    unique_proposals = []
    for points, source in proposals:
        if points not in seen:
            seen.add(points)
            unique_proposals.append((points, source))
    _dbg(f"{j.name}: certifying {len(unique_proposals)} candidate set(s)")

    def certify(proposal):
        points, source = proposal
        return certify_subset(j, points, delta, c, source, surjectivity_tol)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        certified = list(pool.map(certify, unique_proposals))

    accepted = sorted((A for A in certified if A.admissible), key=lambda A: A.points)
    truncated = len(accepted) > max_sets or (max_sets is not None and len(sections) >= max_sets)
    accepted = accepted[:max_sets]

    for A in accepted:
        A.minimal_flag = _fiberwise_singleton(j, A.points)
        if refined is not None:
            _recertify(A, j, refined, delta, c)
    rejected_at_refinement = [A.source for A in accepted if not A.admissible]
    if rejected_at_refinement:
        logger.info(f"{j.name}: refinement rejected {', '.join(rejected_at_refinement)}")
    accepted = [A for A in accepted if A.admissible]

    logger.info(f"{j.name}: {len(accepted)} admissible set(s) from {len(unique_proposals)} candidates"
                f"{' (truncated)' if truncated else ''}")
    return accepted, truncated


def enumerate_admissible_sets(j: NetMap, delta: float, c: float, max_sets: int = DEFAULT_MAX_SETS,
                              **options) -> List[CandidateSet]:
    """Inclusion-distinct subsets A with zero surjectivity and openness defects, sorted by point ids"""
    sets, _ = admissible_search(j, delta, c, max_sets, **options)
    return sets
