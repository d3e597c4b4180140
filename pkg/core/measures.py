#!/usr/bin/env python3
"""
Discrete Measures

Finitely supported nonnegative measures on a NetSpace, with support extraction,
integration, pushforward and the bounded-Lipschitz (Fortet-Mourier) distance used
as the weak* proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linprog

from .constants import LP_TOL, NORMALIZATION_TOL
from .errors import SpaceMismatchError
from .spaces import NetMap, NetPoint, NetSpace, _check_same_space, as_ids


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Atoms are (point id, weight) pairs, merged per id and sorted; zero weights dropped"""

    space: NetSpace
    atoms: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        merged: Dict[int, list] = {}
        for point_id, weight in self.atoms:
            point_id = int(point_id)
            weight = float(weight)
            if weight < 0 or not math.isfinite(weight):
                raise ValueError(f"Atom weights must be finite and non-negative, got {weight} at {point_id}")
            if not 0 <= point_id < len(self.space):
                raise ValueError(f"Atom id {point_id} is not a point of {self.space.ambient_tag}")
            merged.setdefault(point_id, []).append(weight)
        canonical = tuple((pid, math.fsum(ws)) for pid, ws in sorted(merged.items()))
        object.__setattr__(self, "atoms", tuple((pid, w) for pid, w in canonical if w > 0))

    @classmethod
    def from_weights(cls, space: NetSpace, weights: Sequence[float]) -> "DiscreteMeasure":
        return cls(space, tuple((i, w) for i, w in enumerate(weights) if w != 0))

    @cached_property
    def total_mass(self) -> float:
        return math.fsum(w for _, w in self.atoms)

    @property
    def is_probability(self) -> bool:
        return abs(self.total_mass - 1.0) <= NORMALIZATION_TOL

    @cached_property
    def ids(self) -> np.ndarray:
        return np.array([pid for pid, _ in self.atoms], dtype=int)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    def weights_vector(self) -> np.ndarray:
        dense = np.zeros(len(self.space))
        dense[self.ids] = self.weights
        return dense

    def weight(self, point: Union[NetPoint, int]) -> float:
        point_id = point.id if isinstance(point, NetPoint) else int(point)
        return dict(self.atoms).get(point_id, 0.0)

    def same_as(self, other: "DiscreteMeasure") -> bool:
        return self.space.same_as(other.space) and self.atoms == other.atoms


def dirac(space: NetSpace, y: Union[NetPoint, int], mass: float = 1.0) -> DiscreteMeasure:
    point_id = y.id if isinstance(y, NetPoint) else int(y)
    return DiscreteMeasure(space, ((point_id, mass),))


def zero_measure(space: NetSpace) -> DiscreteMeasure:
    return DiscreteMeasure(space, ())


def support_ids(mu: DiscreteMeasure, atom_tol: float = 0.0) -> np.ndarray:
    if atom_tol < 0:
        raise ValueError("atom_tol must be non-negative")
    return mu.ids[mu.weights > atom_tol]


def support(mu: DiscreteMeasure, atom_tol: float = 0.0) -> frozenset:
    """{y : weight(y) > atom_tol}"""
    return frozenset(mu.space.point(i) for i in support_ids(mu, atom_tol))


def _values(g, space: NetSpace) -> np.ndarray:
    values = getattr(g, "values", g)
    source = getattr(g, "space", None)
    if source is not None and not source.same_as(space):
        raise SpaceMismatchError("Grid function and measure live on different spaces")
    values = np.asarray(values)
    if values.shape != (len(space),):
        raise ValueError(f"Grid function must have {len(space)} values, got shape {values.shape}")
    return values


def integrate(mu: DiscreteMeasure, g) -> Union[float, complex]:
    """sum of g(y) * weight(y) over the atoms; g is a GridFunction or a per-point vector"""
    values = _values(g, mu.space)
    picked = values[mu.ids]
    if np.any(np.isnan(picked)):
        raise ValueError("Grid function is undefined at an atom")
    result = np.dot(picked, mu.weights) if picked.size else 0.0
    return complex(result) if np.iscomplexobj(values) else float(result)


def measure_of(mu: DiscreteMeasure, subset: Iterable) -> float:
    """mu(V) for V a set of points (e.g. a union of balls)"""
    members = set(int(i) for i in as_ids(subset))
    return math.fsum(w for pid, w in mu.atoms if pid in members)


def pushforward(mu: DiscreteMeasure, m: NetMap) -> DiscreteMeasure:
    _check_same_space(mu.space, m.domain, "measure and map domain")
    return DiscreteMeasure(m.codomain, tuple((int(m.assignment[pid]), w) for pid, w in mu.atoms))


def convex_combination(t: float, mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """atomwise t * mu + (1 - t) * nu"""
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    _check_same_space(mu.space, nu.space, "measures")
    if t == 1:
        return mu
    if t == 0:
        return nu
    atoms = [(pid, t * w) for pid, w in mu.atoms] + [(pid, (1 - t) * w) for pid, w in nu.atoms]
    return DiscreteMeasure(mu.space, tuple(atoms))


def bl_distance(mu: DiscreteMeasure, nu: DiscreteMeasure) -> float:
    """Bounded-Lipschitz distance: sup |int f dmu - int f dnu| over ||f||_inf <= 1, Lip(f) <= 1.

    Solved exactly as a linear program over the union of the atoms (any feasible
    f on the atoms extends to the whole space with the same bounds).
    """
    _check_same_space(mu.space, nu.space, "measures")
    if mu.atoms == nu.atoms:
        return 0.0

    ids = np.union1d(mu.ids, nu.ids)
    if len(mu.atoms) == 1 and len(nu.atoms) == 1 and math.isclose(mu.total_mass, nu.total_mass):
        d = mu.space.distances[mu.ids[0], nu.ids[0]]
        return float(min(d, 2.0) * mu.total_mass)

    signed = mu.weights_vector()[ids] - nu.weights_vector()[ids]
    n = ids.size
    if n == 1:
        return float(abs(signed[0]))

    dist = mu.space.distances[np.ix_(ids, ids)]
    rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    a_ub = np.zeros((rows.size, n))
    a_ub[np.arange(rows.size), rows] = 1.0
    a_ub[np.arange(rows.size), cols] = -1.0
    b_ub = dist[rows, cols]

    result = linprog(-signed, A_ub=a_ub, b_ub=b_ub, bounds=[(-1.0, 1.0)] * n, method="highs",
                     options={"primal_feasibility_tolerance": LP_TOL, "dual_feasibility_tolerance": LP_TOL})
    if result.status != 0:
        raise RuntimeError(f"BL linear program failed: {result.message}")
    return max(0.0, float(-result.fun))
