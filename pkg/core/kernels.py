#!/usr/bin/env python3
"""
Kernels and Averaging Operators

A kernel x -> mu_x assigns each base point a measure on the total space supported
in (a tolerance neighbourhood of) the fiber j^{-1}(x). It induces the averaging
operator E(g)(x) = int g dmu_x; conversely the kernel is recovered from the
operator by probing with atom indicators.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import DISTANCE_EPS, MODULUS_REL_SLACK, NORMALIZATION_TOL
from .errors import KernelError, SectionError, SpaceMismatchError
from .measures import DiscreteMeasure, bl_distance, convex_combination, dirac, support_ids
from .spaces import NetMap, NetSpace, build_gallery_map, fiber_ids


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real or complex values on every point of a net space"""

    space: NetSpace
    values: np.ndarray
    lipschitz_estimate: float

    @classmethod
    def from_values(cls, space: NetSpace, values: Sequence) -> "GridFunction":
        values = np.asarray(values)
        if values.shape != (len(space),):
            raise ValueError(f"Grid function needs {len(space)} values, got shape {values.shape}")
        values = values.astype(complex) if np.iscomplexobj(values) else values.astype(float)
        values.setflags(write=False)
        return cls(space, values, grid_lipschitz(space, values))

    @classmethod
    def from_callable(cls, space: NetSpace, fn: Callable) -> "GridFunction":
        return cls.from_values(space, [fn(p.coords) for p in space.points])

    @classmethod
    def constant(cls, space: NetSpace, value: float = 1.0) -> "GridFunction":
        return cls.from_values(space, np.full(len(space), value))

    def __mul__(self, other: "GridFunction") -> "GridFunction":
        if not self.space.same_as(other.space):
            raise SpaceMismatchError("Cannot multiply grid functions on different spaces")
        return GridFunction.from_values(self.space, self.values * other.values)

    def compose(self, m: NetMap) -> "GridFunction":
        """f o m, a grid function on m.domain"""
        if not self.space.same_as(m.codomain):
            raise SpaceMismatchError("Function space is not the map's codomain")
        return GridFunction.from_values(m.domain, self.values[m.assignment])

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


def grid_lipschitz(space: NetSpace, values: np.ndarray) -> float:
    if len(space) < 2:
        return 0.0
    dist = space.distances
    mask = dist > 0
    return float((np.abs(values[:, None] - values[None, :])[mask] / dist[mask]).max())


def bump_family(space: NetSpace, radius: Optional[float] = None) -> List[GridFunction]:
    """1-Lipschitz bumps max(0, radius - d(p, .)) centred at every point; radius defaults to the spacing"""
    radius = space.spacing if radius is None else radius
    return [GridFunction.from_values(space, np.maximum(0.0, radius - space.distances[p]))
            for p in range(len(space))]


@dataclass(frozen=True, eq=False)
class Kernel:
    """x -> mu_x over the base (X) of map_ref, measures on its total space (Y)"""

    map_ref: NetMap
    measures: Tuple[DiscreteMeasure, ...]
    continuity_modulus: float
    normalized: bool
    fiber_tol: float = 0.0
    label: str = "kernel"

    def __post_init__(self):
        if len(self.measures) != len(self.base):
            raise KernelError(f"Need one measure per base point ({len(self.base)}), got {len(self.measures)}")
        for x, mu in enumerate(self.measures):
            if not mu.space.same_as(self.total):
                raise SpaceMismatchError(f"Measure at base point {x} is not on the total space")
            if self.normalized and not mu.is_probability:
                raise KernelError(f"Measure at base point {x} has mass {mu.total_mass}, expected 1")

    @property
    def base(self) -> NetSpace:
        return self.map_ref.codomain

    @property
    def total(self) -> NetSpace:
        return self.map_ref.domain

    @cached_property
    def weight_matrix(self) -> np.ndarray:
        matrix = np.zeros((len(self.base), len(self.total)))
        for x, mu in enumerate(self.measures):
            matrix[x, mu.ids] = mu.weights
        matrix.setflags(write=False)
        return matrix


@dataclass
class KernelCertificate:
    """Outcome of validate_kernel; failures are reported here, never raised"""

    fiber_violation: float
    normalization_drift: float
    recomputed_modulus: float
    declared_modulus: float
    mass_function: List[float] = field(default_factory=list)
    fiber_tol: float = 0.0
    atom_tol: float = 0.0

    @property
    def passed(self) -> bool:
        return (self.fiber_violation <= DISTANCE_EPS
                and self.normalization_drift <= NORMALIZATION_TOL
                and self.recomputed_modulus <= self.declared_modulus * (1 + MODULUS_REL_SLACK) + DISTANCE_EPS)


def certified_modulus(base: NetSpace, measures: Sequence[DiscreteMeasure]) -> float:
    """max over grid-adjacent base pairs of bl_distance(mu_x, mu_x') / d(x, x')"""
    ratios = [bl_distance(measures[i], measures[k]) / base.distances[i, k] for i, k in base.neighbor_pairs]
    return float(max(ratios, default=0.0))


def mass_function(K: Kernel) -> np.ndarray:
    return np.array([mu.total_mass for mu in K.measures])


def apply_operator(K: Kernel, g: GridFunction) -> GridFunction:
    """E(g)(x) = int g dmu_x"""
    if not g.space.same_as(K.total):
        raise SpaceMismatchError("Grid function must live on the kernel's total space")
    return GridFunction.from_values(K.base, K.weight_matrix @ g.values)


def validate_kernel(K: Kernel, fiber_tol: Optional[float] = None, atom_tol: float = 0.0) -> KernelCertificate:
    logger = logging.getLogger(__name__)
    fiber_tol = K.fiber_tol if fiber_tol is None else fiber_tol
    dist = K.total.distances

    violation = 0.0
    for x, mu in enumerate(K.measures):
        supp = support_ids(mu, atom_tol)
        if supp.size == 0:
            continue
        fib = fiber_ids(K.map_ref, x, fiber_tol)
        if fib.size == 0:
            violation = math.inf
            break
        violation = max(violation, float(dist[np.ix_(supp, fib)].min(axis=1).max()))

    masses = mass_function(K)
    drift = float(np.abs(masses - 1.0).max()) if K.normalized else 0.0
    certificate = KernelCertificate(
        fiber_violation=violation,
        normalization_drift=drift,
        recomputed_modulus=certified_modulus(K.base, K.measures),
        declared_modulus=K.continuity_modulus,
        mass_function=[float(m) for m in masses],
        fiber_tol=fiber_tol,
        atom_tol=atom_tol,
    )
    logger.debug(f"{K.label}: violation={violation:.3g}, drift={drift:.3g}, "
                 f"modulus={certificate.recomputed_modulus:.4g}/{K.continuity_modulus:.4g}, "
                 f"passed={certificate.passed}")
    return certificate


def bimodularity_defect(K: Kernel, f: GridFunction, g: GridFunction) -> float:
    """max over x of |E((f o j) g)(x) - f(x) E(g)(x)|"""
    if not f.space.same_as(K.base):
        raise SpaceMismatchError("f must live on the base space")
    left = apply_operator(K, f.compose(K.map_ref) * g).values
    right = f.values * apply_operator(K, g).values
    return float(np.abs(left - right).max())


def multiplicativity_defect(K: Kernel, g: GridFunction, h: GridFunction) -> float:
    """max over x of |E(g h)(x) - E(g)(x) E(h)(x)|"""
    if not K.normalized:
        raise KernelError("Multiplicativity is only defined for normalized kernels")
    left = apply_operator(K, g * h).values
    right = apply_operator(K, g).values * apply_operator(K, h).values
    return float(np.abs(left - right).max())


def is_extremal_candidate(K: Kernel, atom_tol: float = 0.0) -> bool:
    """True iff every mu_x has a single support point"""
    if not K.normalized:
        raise KernelError("Extremality is only tested on normalized kernels")
    return all(support_ids(mu, atom_tol).size == 1 for mu in K.measures)


def union_of_support_ids(K: Kernel, atom_tol: float = 0.0) -> np.ndarray:
    parts = [support_ids(mu, atom_tol) for mu in K.measures]
    return np.unique(np.concatenate(parts)) if parts else np.array([], dtype=int)


def union_of_supports(K: Kernel, atom_tol: float = 0.0) -> frozenset:
    return frozenset(K.total.point(i) for i in union_of_support_ids(K, atom_tol))


def kernel_from_section(alpha: NetMap, j: NetMap, fiber_tol: float = 0.0) -> Kernel:
    """mu_x = delta_{alpha(x)} for a section alpha of j"""
    if not (alpha.domain.same_as(j.codomain) and alpha.codomain.same_as(j.domain)):
        raise SpaceMismatchError("alpha must map the base of j into its total space")
    base = j.codomain
    landing = j.assignment[alpha.assignment]
    deviation = float(base.distances[np.arange(len(base)), landing].max())
    if deviation > fiber_tol + DISTANCE_EPS:
        worst = int(np.argmax(base.distances[np.arange(len(base)), landing]))
        raise SectionError(f"Not a section: j(alpha(x)) misses x={base.point(worst).coords} by {deviation:.4g}")
    measures = tuple(dirac(j.domain, y) for y in alpha.assignment)
    return Kernel(j, measures, alpha.lipschitz_estimate, True, fiber_tol, label=f"section:{alpha.name}")


def kernel_from_selection(j: NetMap, selection: Union[Mapping[int, int], Sequence[int]],
                          label: str = "selection") -> Kernel:
    """Dirac kernel of a (not necessarily continuous) choice y(x) in each fiber"""
    chosen = [selection[x] for x in range(len(j.codomain))]
    measures = tuple(dirac(j.domain, y) for y in chosen)
    return Kernel(j, measures, certified_modulus(j.codomain, measures), True, 0.0, label=label)


def kernel_from_operator(operator: Callable[[GridFunction], GridFunction], j: NetMap,
                         normalized: bool = True, label: str = "recovered") -> Kernel:
    """Recover mu_x(y) = E(1_y)(x) by probing with atom indicators"""
    total = j.domain
    columns = []
    for y in range(len(total)):
        indicator = np.zeros(len(total))
        indicator[y] = 1.0
        columns.append(np.real(operator(GridFunction.from_values(total, indicator)).values))
    matrix = np.column_stack(columns)
    measures = tuple(DiscreteMeasure.from_weights(total, row) for row in matrix)
    return Kernel(j, measures, certified_modulus(j.codomain, measures), normalized, label=label)


def canonical_kernel(mesh: float) -> Kernel:
    """nu_x = x delta_(x,0) + (1-x) delta_(x,1) on [0,1], delta_(x,0) on [1,2]"""
    j = build_gallery_map("canonical-projection", mesh)
    per_unit = (len(j.codomain) - 1) // 2
    measures = []
    for i, point in enumerate(j.codomain.points):
        x = point.coords[0]
        if i <= per_unit:
            atoms = ((i, x), (2 * per_unit + 1 + i, 1.0 - x))
        else:
            atoms = ((i, 1.0),)
        measures.append(DiscreteMeasure(j.domain, atoms))
    return Kernel(j, tuple(measures), 3.0, True, 0.0, label="canonical")


def convex_combination_kernel(t: float, K1: Kernel, K2: Kernel) -> Kernel:
    if K1.map_ref is not K2.map_ref and not (K1.total.same_as(K2.total) and K1.base.same_as(K2.base)):
        raise SpaceMismatchError("Kernels must share the map j")
    measures = tuple(convex_combination(t, a, b) for a, b in zip(K1.measures, K2.measures))
    modulus = t * K1.continuity_modulus + (1 - t) * K2.continuity_modulus
    return Kernel(K1.map_ref, measures, modulus, K1.normalized and K2.normalized,
                  max(K1.fiber_tol, K2.fiber_tol), label=f"{t:g}*{K1.label}+{1 - t:g}*{K2.label}")


def reweight_kernel(K: Kernel, w: GridFunction, label: Optional[str] = None) -> Kernel:
    """mu'_x proportional to w * mu_x for a positive weight w on the total space"""
    if not w.space.same_as(K.total):
        raise SpaceMismatchError("Weight must live on the total space")
    values = np.real(w.values)
    if np.any(values <= 0):
        raise ValueError("Reweighting needs a strictly positive weight")
    measures = []
    for mu in K.measures:
        atoms = [(pid, weight * values[pid]) for pid, weight in mu.atoms]
        if K.normalized and atoms:
            total = math.fsum(a[1] for a in atoms)
            atoms = [(pid, weight / total) for pid, weight in atoms]
        measures.append(DiscreteMeasure(K.total, tuple(atoms)))
    measures = tuple(measures)
    return Kernel(K.map_ref, measures, certified_modulus(K.base, measures), K.normalized, K.fiber_tol,
                  label=label or f"reweighted:{K.label}")


def sup_bl_distance(K1: Kernel, K2: Kernel, stop_above: Optional[float] = None) -> float:
    """sup over x of bl_distance(mu_x, mu'_x); returns early once stop_above is exceeded"""
    worst = 0.0
    for a, b in zip(K1.measures, K2.measures):
        worst = max(worst, bl_distance(a, b))
        if stop_above is not None and worst > stop_above:
            break
    return worst
