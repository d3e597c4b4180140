#!/usr/bin/env python3
"""
Milutin kernel on an admissible set A

mu_x is proportional to sum over base points x' of hat(x, x') * uniform(A n fiber(x')),
hat(x, x') = max(0, 1 - d(x, x') / s). With s at most the grid spacing only x' = x
contributes and mu_x is uniform on the A-fiber over x.
"""

import logging
import math
from typing import Iterable, Optional, Union

import numpy as np

from core.constants import DEFAULT_SMOOTHING_FACTOR, DISTANCE_EPS
from core.errors import KernelError
from core.kernels import Kernel, certified_modulus
from core.measures import DiscreteMeasure
from core.spaces import NetMap, as_ids

from .common import CandidateSet

logger = logging.getLogger(__name__)


def milutin_kernel(j: NetMap, A: Union[CandidateSet, Iterable], smoothing: Optional[float] = None,
                   fiber_tol: float = 0.0) -> Kernel:
    """Normalized kernel averaging uniform measures on nearby A-fibers; declared modulus 2 / smoothing"""
    base, total = j.codomain, j.domain
    smoothing = DEFAULT_SMOOTHING_FACTOR * base.spacing if smoothing is None else smoothing
    if smoothing <= 0:
        raise ValueError(f"smoothing must be positive, got {smoothing}")

    members = np.array(A.points, dtype=int) if isinstance(A, CandidateSet) else as_ids(A)
    if members.size == 0:
        raise KernelError("Milutin construction needs a non-empty set A")

    # A-fibers over every base point
    base_dist = base.distances
    images = j.assignment[members]
    a_fibers = [members[base_dist[x, images] <= fiber_tol + DISTANCE_EPS] for x in range(len(base))]

    measures = []
    for x in range(len(base)):
        hats = np.maximum(0.0, 1.0 - base_dist[x] / smoothing)
        atoms = []
        for other in np.flatnonzero(hats > 0):
            fib = a_fibers[other]
            if fib.size:
                atoms.extend((int(y), hats[other] / fib.size) for y in fib)
        if not atoms:
            raise KernelError(f"A has no points over the neighbourhood of x={base.point(x).coords}")
        total_weight = math.fsum(w for _, w in atoms)
        measures.append(DiscreteMeasure(total, tuple((y, w / total_weight) for y, w in atoms)))
    measures = tuple(measures)

    declared = 2.0 / smoothing
    measured = certified_modulus(base, measures)
    if measured > declared:
        # left to the certificate: validate_kernel reports the failure
        logger.warning(f"Milutin kernel on {j.name}: measured modulus {measured:.4g} exceeds 2/s = {declared:.4g}")
    tol = fiber_tol if smoothing <= base.spacing else fiber_tol + smoothing
    return Kernel(j, measures, declared, True, tol, label=f"milutin:{getattr(A, 'source', '') or 'A'}")
