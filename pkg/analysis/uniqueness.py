#!/usr/bin/env python3
"""
Uniqueness report

Runs the section search and the admissible-set enumeration, builds a Milutin
kernel on every admissible set (plus a reweighted variant wherever a kernel is
not Dirac), validates them and counts how many are genuinely different.

Verdicts:
    non-unique    at least two distinct valid kernels were exhibited
    none-found    no admissible set survived
    inconclusive  an enumeration cap was hit, or the counts do not settle it
    unique        exactly one admissible set and exactly one kernel
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional

import numpy as np

from core.constants import (
    DEFAULT_DELTA_FACTOR,
    DEFAULT_LIPSCHITZ_BOUND,
    DEFAULT_MAX_COUNT,
    DEFAULT_MAX_SETS,
    DEFAULT_OPENNESS_RATIO,
    DEFAULT_SMOOTHING_FACTOR,
    DISTINCT_FACTOR,
    REWEIGHT_AMPLITUDE,
)
from core.kernels import (
    GridFunction,
    Kernel,
    KernelCertificate,
    mass_function,
    reweight_kernel,
    sup_bl_distance,
    validate_kernel,
)
from core.measures import support_ids
from core.spaces import NetMap

from .admissible import admissible_search
from .common import CandidateSet, SectionCandidate, _dbg
from .milutin import milutin_kernel
from .sections import find_sections
from .transversals import minimal_surjective_transversals

logger = logging.getLogger(__name__)

VERDICTS = ("unique", "non-unique", "none-found", "inconclusive")


@dataclass
class UniquenessParams:
    """Tolerances for one report; None means derive from the map's base spacing"""

    lipschitz_bound: float = DEFAULT_LIPSCHITZ_BOUND
    atom_tol: float = 0.0
    fiber_tol: float = 0.0
    section_tol: Optional[float] = None
    surjectivity_tol: float = 0.0
    delta: Optional[float] = None
    openness_ratio: float = DEFAULT_OPENNESS_RATIO
    smoothing: Optional[float] = None
    max_sets: int = DEFAULT_MAX_SETS
    max_count: int = DEFAULT_MAX_COUNT
    distinct_threshold: Optional[float] = None
    workers: Optional[int] = None

    def resolved(self, j: NetMap) -> "UniquenessParams":
        spacing = j.codomain.spacing
        smoothing = DEFAULT_SMOOTHING_FACTOR * spacing if self.smoothing is None else self.smoothing
        return replace(
            self,
            section_tol=j.codomain.covering_radius if self.section_tol is None else self.section_tol,
            delta=DEFAULT_DELTA_FACTOR * spacing if self.delta is None else self.delta,
            smoothing=smoothing,
            distinct_threshold=(DISTINCT_FACTOR * (spacing + smoothing)
                                if self.distinct_threshold is None else self.distinct_threshold),
        )

    def as_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values.pop("workers")
        return values


@dataclass
class UniquenessReport:
    map_name: str
    verdict: str
    sections: List[SectionCandidate] = field(default_factory=list)
    admissible_sets: List[CandidateSet] = field(default_factory=list)
    kernels: List[Kernel] = field(default_factory=list)
    certificates: List[KernelCertificate] = field(default_factory=list)
    distinct_valid_kernels: int = 0
    transversal_count: int = 0
    caps_hit: bool = False
    unique_set_is_section_graph: Optional[bool] = None
    parameters: Dict[str, Any] = field(default_factory=dict)

    @property
    def sections_found(self) -> int:
        return len(self.sections)

    @property
    def admissible_sets_found(self) -> int:
        return len(self.admissible_sets)

    @property
    def mass_functions(self) -> List[List[float]]:
        return [[float(m) for m in mass_function(K)] for K in self.kernels]


def reweighting_witness(K: Kernel, atom_tol: float = 0.0) -> Optional[Kernel]:
    """A second kernel w * mu_x / norm, w(y) = 1 + a * d(y, y0) / diam, when some mu_x is not Dirac"""
    if all(support_ids(mu, atom_tol).size <= 1 for mu in K.measures):
        return None
    total = K.total
    diameter = total.diameter or 1.0
    weights = 1.0 + REWEIGHT_AMPLITUDE * total.distances[0] / diameter
    return reweight_kernel(K, GridFunction.from_values(total, weights), label=f"reweighted:{K.label}")


def count_distinct(kernels: List[Kernel], threshold: float) -> int:
    """Greedy clustering: a kernel is new when it is farther than threshold from every representative"""
    representatives: List[Kernel] = []
    for K in kernels:
        if all(sup_bl_distance(K, R, stop_above=threshold) > threshold for R in representatives):
            representatives.append(K)
    return len(representatives)


def decide_verdict(admissible_count: int, distinct: int, caps_hit: bool) -> str:
    if distinct >= 2:
        return "non-unique"
    if admissible_count == 0:
        return "none-found"
    if caps_hit:
        return "inconclusive"
    if admissible_count == 1 and distinct == 1:
        return "unique"
    return "inconclusive"


def uniqueness_report(j: NetMap, params: Optional[UniquenessParams] = None,
                      refined: Optional[NetMap] = None) -> UniquenessReport:
    p = (params or UniquenessParams()).resolved(j)
    logger.info(f"Uniqueness report for {j.name}: |Y|={len(j.domain)}, |X|={len(j.codomain)}")

    sections = find_sections(j, p.lipschitz_bound, p.section_tol, max_sections=p.max_sets)
    admissible, truncated = admissible_search(
        j, p.delta, p.openness_ratio, p.max_sets, sections=sections, section_tol=p.section_tol,
        surjectivity_tol=p.surjectivity_tol, refined=refined, workers=p.workers)
    transversals = minimal_surjective_transversals(j, p.max_count, tol=p.section_tol)

    def build(A: CandidateSet) -> List[Kernel]:
        K = milutin_kernel(j, A, p.smoothing, p.fiber_tol)
        witness = reweighting_witness(K, p.atom_tol)
        return [K] if witness is None else [K, witness]

    with ThreadPoolExecutor(max_workers=p.workers) as pool:
        built = [K for group in pool.map(build, admissible) for K in group]
        certificates = list(pool.map(lambda K: validate_kernel(K, atom_tol=p.atom_tol), built))

    valid = [(K, cert) for K, cert in zip(built, certificates) if cert.passed]
    for K, cert in zip(built, certificates):
        if not cert.passed:
            logger.warning(f"{K.label} failed validation (violation={cert.fiber_violation:.3g}, "
                           f"modulus={cert.recomputed_modulus:.4g}/{cert.declared_modulus:.4g})")
    kernels = [K for K, _ in valid]
    distinct = count_distinct(kernels, p.distinct_threshold)
    _dbg(f"{j.name}: {len(kernels)} valid kernel(s), {distinct} distinct")

    verdict = decide_verdict(len(admissible), distinct, truncated)
    section_graph = None
    if verdict == "unique":
        counts = np.bincount(j.assignment[list(admissible[0].points)], minlength=len(j.codomain))
        section_graph = bool(counts.max() <= 1)

    logger.info(f"{j.name}: verdict {verdict} ({len(sections)} section(s), {len(admissible)} admissible set(s), "
                f"{distinct} distinct kernel(s))")
    return UniquenessReport(
        map_name=j.name,
        verdict=verdict,
        sections=sections,
        admissible_sets=admissible,
        kernels=kernels,
        certificates=[cert for _, cert in valid],
        distinct_valid_kernels=distinct,
        transversal_count=transversals.count,
        caps_hit=truncated,
        unique_set_is_section_graph=section_graph,
        parameters=p.as_dict(),
    )
