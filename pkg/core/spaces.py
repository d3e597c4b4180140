#!/usr/bin/env python3
"""
Net Spaces and Net Maps

Finite epsilon-net models of compact metric spaces and discretized continuous
maps between them, with the quantitative surjectivity/openness diagnostics the
analysis layer certifies against.

Point ids are the indices 0..n-1 of the net, so every per-point quantity is a
plain numpy vector.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .constants import ADJACENCY_FACTOR, DISTANCE_EPS
from .errors import ResolutionError, SpaceMismatchError, UnknownGalleryError

Coords = Union[Tuple[float, ...], str]

METRICS = ("euclidean", "cantor", "arc")
GALLERY_SPACES = ("interval", "canonical-Y", "cantor", "circle", "square")
GALLERY_MAPS = ("canonical-projection", "dyadic", "identity", "square-projection", "circle-doubling")


@dataclass(frozen=True)
class NetPoint:
    """A point of a net: integer id plus ambient (real) or Cantor (binary) coordinates"""

    id: int
    coords: Coords

    @property
    def is_binary(self) -> bool:
        return isinstance(self.coords, str)


def _pairwise(metric: str, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    if metric == "euclidean":
        return cdist(left, right)
    if metric == "arc":
        diff = np.abs(left[:, 0][:, None] - right[:, 0][None, :]) % 1.0
        return np.minimum(diff, 1.0 - diff)
    if metric == "cantor":
        width = max(left.shape[1], right.shape[1])
        left = np.pad(left, ((0, 0), (0, width - left.shape[1])))
        right = np.pad(right, ((0, 0), (0, width - right.shape[1])))
        weights = 0.5 ** np.arange(1, width + 1)
        return cdist(left * weights, right * weights, "cityblock")
    raise ValueError(f"Unknown metric: {metric}")


def _coordinate_array(metric: str, coords: Sequence[Coords]) -> np.ndarray:
    if metric == "cantor":
        return np.array([[int(bit) for bit in c] for c in coords], dtype=float).reshape(len(coords), -1)
    return np.array(coords, dtype=float).reshape(len(coords), -1)


@dataclass(frozen=True, eq=False)
class NetSpace:
    """An epsilon-net model of a compact metric space"""

    points: Tuple[NetPoint, ...]
    metric: str
    covering_radius: float
    ambient_tag: str
    spacing: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"Unknown metric: {self.metric}. Available: {', '.join(METRICS)}")
        if not self.points:
            raise ValueError("A net space needs at least one point")
        for index, point in enumerate(self.points):
            if point.id != index:
                raise ValueError(f"Point ids must be 0..n-1 in order; found id {point.id} at position {index}")
        kinds = {p.is_binary for p in self.points}
        if len(kinds) != 1:
            raise ValueError("Coordinate kind must be uniform across a net space")
        if (self.metric == "cantor") != self.points[0].is_binary:
            raise ValueError(f"Metric {self.metric} does not match the coordinate kind")
        if self.covering_radius <= 0 or self.spacing <= 0:
            raise ResolutionError("covering_radius and spacing must be positive")

    def __len__(self) -> int:
        return len(self.points)

    def point(self, point_id: int) -> NetPoint:
        return self.points[int(point_id)]

    @cached_property
    def coordinates(self) -> np.ndarray:
        return _coordinate_array(self.metric, [p.coords for p in self.points])

    @cached_property
    def distances(self) -> np.ndarray:
        matrix = _pairwise(self.metric, self.coordinates, self.coordinates)
        matrix = 0.5 * (matrix + matrix.T)
        np.fill_diagonal(matrix, 0.0)
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def diameter(self) -> float:
        return float(self.distances.max())

    def cross_distances(self, coords: Sequence[Coords]) -> np.ndarray:
        """Distances from arbitrary coordinates (rows) to the net points (columns)"""
        other = _coordinate_array(self.metric, list(coords))
        return _pairwise(self.metric, other, self.coordinates)

    def nearest(self, coords: Sequence[Coords]) -> np.ndarray:
        """Nearest net point for each coordinate; ties go to the lowest id"""
        return np.argmin(self.cross_distances(coords), axis=1)

    def ball(self, point_id: int, radius: float) -> np.ndarray:
        return np.flatnonzero(self.distances[int(point_id)] <= radius + DISTANCE_EPS)

    @cached_property
    def neighbor_pairs(self) -> List[Tuple[int, int]]:
        """Grid-adjacent pairs (i < j) within ADJACENCY_FACTOR * spacing"""
        radius = ADJACENCY_FACTOR * self.spacing + DISTANCE_EPS
        rows, cols = np.nonzero(np.triu(self.distances <= radius, k=1))
        return [(int(i), int(j)) for i, j in zip(rows, cols)]

    def neighbors(self, point_id: int) -> List[int]:
        radius = ADJACENCY_FACTOR * self.spacing + DISTANCE_EPS
        row = self.distances[int(point_id)]
        return [int(i) for i in np.flatnonzero(row <= radius) if i != point_id]

    def same_as(self, other: "NetSpace") -> bool:
        if self is other:
            return True
        return (self.metric == other.metric and self.points == other.points
                and math.isclose(self.covering_radius, other.covering_radius)
                and math.isclose(self.spacing, other.spacing))


def _check_same_space(left: NetSpace, right: NetSpace, what: str = "operands"):
    if not left.same_as(right):
        raise SpaceMismatchError(f"{what} live on different net spaces ({left.ambient_tag} vs {right.ambient_tag})")


@dataclass(frozen=True, eq=False)
class NetMap:
    """A discretized continuous map between net spaces"""

    domain: NetSpace
    codomain: NetSpace
    assignment: np.ndarray
    lipschitz_estimate: float
    name: str = "map"

    def __post_init__(self):
        assignment = np.asarray(self.assignment, dtype=int)
        if assignment.shape != (len(self.domain),):
            raise ValueError(f"Assignment must be total: expected {len(self.domain)} entries, got {assignment.shape}")
        if assignment.size and (assignment.min() < 0 or assignment.max() >= len(self.codomain)):
            raise ValueError("Assignment points outside the codomain")
        assignment.setflags(write=False)
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def from_assignment(cls, domain: NetSpace, codomain: NetSpace, assignment: Sequence[int],
                        name: str = "map") -> "NetMap":
        assignment = np.asarray(assignment, dtype=int)
        return cls(domain, codomain, assignment, lipschitz_constant(domain, codomain, assignment), name)

    @classmethod
    def from_function(cls, domain: NetSpace, codomain: NetSpace, fn: Callable[[Coords], Coords],
                      name: str = "map") -> "NetMap":
        """Send each net point to the codomain point nearest its analytic image"""
        images = [fn(p.coords) for p in domain.points]
        return cls.from_assignment(domain, codomain, codomain.nearest(images), name)

    def __call__(self, point: Union[NetPoint, int]) -> NetPoint:
        point_id = point.id if isinstance(point, NetPoint) else int(point)
        return self.codomain.point(self.assignment[point_id])

    def image_ids(self, subset: Optional[Iterable] = None) -> np.ndarray:
        ids = np.arange(len(self.domain)) if subset is None else as_ids(subset)
        return np.unique(self.assignment[ids])


def lipschitz_constant(domain: NetSpace, codomain: NetSpace, assignment: np.ndarray) -> float:
    """max over pairs of d(f(p), f(q)) / d(p, q)"""
    if len(domain) < 2:
        return 0.0
    source = domain.distances
    target = codomain.distances[np.ix_(assignment, assignment)]
    mask = source > 0
    return float((target[mask] / source[mask]).max())


def as_ids(items: Iterable) -> np.ndarray:
    """Normalize NetPoints / ints / boolean masks to a sorted id array"""
    items = list(items) if not isinstance(items, np.ndarray) else items
    if isinstance(items, np.ndarray) and items.dtype == bool:
        return np.flatnonzero(items)
    ids = [p.id if isinstance(p, NetPoint) else int(p) for p in items]
    return np.array(sorted(set(ids)), dtype=int)


def fiber_ids(m: NetMap, x: Union[NetPoint, int], tol: Optional[float] = None) -> np.ndarray:
    x_id = x.id if isinstance(x, NetPoint) else int(x)
    tol = m.codomain.covering_radius if tol is None else tol
    if tol < 0:
        raise ValueError("Fiber tolerance must be non-negative")
    distance = m.codomain.distances[x_id][m.assignment]
    return np.flatnonzero(distance <= tol + DISTANCE_EPS)


def fiber(m: NetMap, x: Union[NetPoint, int], tol: Optional[float] = None) -> frozenset:
    """{y : d(m(y), x) <= tol}; tol defaults to the codomain covering radius"""
    return frozenset(m.domain.point(i) for i in fiber_ids(m, x, tol))


def surjectivity_defect(m: NetMap, subset: Optional[Iterable] = None) -> float:
    """max over codomain points of the distance to the image of (the subset of) the domain"""
    image = m.image_ids(subset)
    if image.size == 0:
        return math.inf
    return float(m.codomain.distances[:, image].min(axis=1).max())


def openness_shortfalls(m: NetMap, subset: Iterable, delta: float, c: float) -> Tuple[np.ndarray, np.ndarray]:
    """Per-point shortfall of j(B_A(a, delta)) covering B_X(j(a), c * delta).

    A target point missed by the image is excused when a point of Y \\ A inside
    B_Y(a, delta) maps onto it and the A-fiber over j(a) has another point: A is
    open at that end (the net cannot otherwise tell an open end from a closed one).
    """
    members = as_ids(subset)
    if members.size == 0:
        raise ValueError("Openness needs a non-empty subset A")
    if delta <= 0 or not 0 < c <= 1:
        raise ValueError("Openness needs delta > 0 and ratio c in (0, 1]")

    mask = np.zeros(len(m.domain), dtype=bool)
    mask[members] = True
    source = m.domain.distances
    target_metric = m.codomain.distances
    j = m.assignment
    fiber_counts = np.bincount(j[members], minlength=len(m.codomain))

    shortfalls = np.zeros(members.size)
    for k, a in enumerate(members):
        near = source[a] <= delta + DISTANCE_EPS
        image = np.unique(j[near & mask])
        target = np.flatnonzero(target_metric[j[a]] <= c * delta + DISTANCE_EPS)
        missing = target[~np.isin(target, image)]
        if missing.size and fiber_counts[j[a]] >= 2:
            open_end = np.unique(j[near & ~mask])
            missing = missing[~np.isin(missing, open_end)]
        if missing.size:
            shortfalls[k] = target_metric[np.ix_(missing, image)].min(axis=1).max()
    return members, shortfalls


def openness_defect(m: NetMap, subset: Iterable, delta: float, c: float) -> float:
    """0 certifies delta-scale openness of m restricted to the subset with ratio c"""
    _, shortfalls = openness_shortfalls(m, subset, delta, c)
    return float(shortfalls.max())


# =============================================================================
# DYADIC BRANCHES
# =============================================================================

def _binary_digits(value: Fraction, count: int) -> str:
    digits = []
    for _ in range(count):
        value *= 2
        bit = int(value >= 1)
        digits.append(str(bit))
        value -= bit
    return "".join(digits)


def dyadic_branches(x: Union[float, Fraction, str], depth: int) -> Tuple[NetPoint, NetPoint]:
    """Truncations of the zero-tail and one-tail preimages of x under the dyadic map"""
    if depth < 1:
        raise ResolutionError("depth must be >= 1")
    value = Fraction(x)
    if not 0 <= value <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")

    if value == 1:
        zero_tail = "1" * depth
    else:
        zero_tail = _binary_digits(value, depth)
    one_tail = zero_tail

    denominator = value.denominator
    is_dyadic = denominator & (denominator - 1) == 0
    if is_dyadic and 0 < value < 1:
        last = denominator.bit_length() - 1  # position of the final 1 in the expansion
        if last <= depth:
            one_tail = zero_tail[:last - 1] + "0" + "1" * (depth - last)

    return (NetPoint(int(zero_tail, 2), zero_tail), NetPoint(int(one_tail, 2), one_tail))


# =============================================================================
# GALLERY
# =============================================================================

def _steps(length: float, mesh: float) -> int:
    return max(1, math.ceil(length / mesh - 1e-9))


def _check_mesh(resolution) -> float:
    if isinstance(resolution, bool) or not isinstance(resolution, (int, float)) or resolution <= 0:
        raise ResolutionError(f"Resolution must be a positive mesh, got {resolution!r}")
    return float(resolution)


def _check_depth(resolution) -> int:
    if isinstance(resolution, bool) or int(resolution) != resolution or resolution < 1:
        raise ResolutionError(f"Cantor resolution must be a positive integer depth, got {resolution!r}")
    return int(resolution)


def _interval(a: float, b: float, steps: int) -> NetSpace:
    spacing = (b - a) / steps
    points = tuple(NetPoint(i, (a + i * spacing,)) for i in range(steps + 1))
    return NetSpace(points, "euclidean", spacing / 2, f"[{a:g},{b:g}]", spacing)


def _canonical_y(per_unit: int) -> NetSpace:
    spacing = 1.0 / per_unit
    lower = [(i * spacing, 0.0) for i in range(2 * per_unit + 1)]
    upper = [(i * spacing, 1.0) for i in range(per_unit + 1)]
    points = tuple(NetPoint(i, c) for i, c in enumerate(lower + upper))
    return NetSpace(points, "euclidean", spacing / 2, "([0,2]x{0}) u ([0,1]x{1})", spacing)


def _cantor(depth: int) -> NetSpace:
    points = tuple(NetPoint(v, format(v, f"0{depth}b")) for v in range(2 ** depth))
    return NetSpace(points, "cantor", 0.5 ** depth, f"cantor[{depth}]", 0.5 ** depth)


def _circle(count: int) -> NetSpace:
    points = tuple(NetPoint(k, (k / count,)) for k in range(count))
    return NetSpace(points, "arc", 0.5 / count, "circle", 1.0 / count)


def _square(steps: int) -> NetSpace:
    spacing = 1.0 / steps
    points = tuple(NetPoint(i * (steps + 1) + l, (i * spacing, l * spacing))
                   for i in range(steps + 1) for l in range(steps + 1))
    return NetSpace(points, "euclidean", spacing * math.sqrt(2) / 2, "[0,1]^2", spacing)


def build_gallery_space(name: str, resolution, a: float = 0.0, b: float = 1.0) -> NetSpace:
    """Net model of a gallery continuum; resolution is a mesh, or a depth for cantor"""
    if name not in GALLERY_SPACES:
        raise UnknownGalleryError(f"Unknown gallery space: {name}. Available: {', '.join(GALLERY_SPACES)}")
    if name == "cantor":
        return _cantor(_check_depth(resolution))
    mesh = _check_mesh(resolution)
    if name == "interval":
        if b <= a:
            raise ValueError("interval needs a < b")
        return _interval(a, b, _steps(b - a, mesh))
    if name == "canonical-Y":
        return _canonical_y(_steps(1.0, mesh))
    if name == "circle":
        return _circle(_steps(1.0, mesh))
    return _square(_steps(1.0, mesh))


def build_gallery_map(name: str, resolution) -> NetMap:
    """Discretized gallery surjection j: Y -> X"""
    logger = logging.getLogger(__name__)
    if name not in GALLERY_MAPS:
        raise UnknownGalleryError(f"Unknown gallery map: {name}. Available: {', '.join(GALLERY_MAPS)}")

    if name == "dyadic":
        depth = _check_depth(resolution)
        y_space = _cantor(depth)
        x_space = _interval(0.0, 1.0, 2 ** depth)
        result = NetMap.from_function(
            y_space, x_space, lambda bits: (sum(int(b) * 0.5 ** (i + 1) for i, b in enumerate(bits)),), name)
    else:
        mesh = _check_mesh(resolution)
        if name == "canonical-projection":
            per_unit = _steps(1.0, mesh)
            result = NetMap.from_function(_canonical_y(per_unit), _interval(0.0, 2.0, 2 * per_unit),
                                          lambda c: (c[0],), name)
        elif name == "identity":
            space = _interval(0.0, 1.0, _steps(1.0, mesh))
            result = NetMap(space, space, np.arange(len(space)), 1.0, name)
        elif name == "square-projection":
            steps = _steps(1.0, mesh)
            result = NetMap.from_function(_square(steps), _interval(0.0, 1.0, steps), lambda c: (c[0],), name)
        else:
            count = _steps(1.0, mesh)
            result = NetMap.from_function(_circle(2 * count), _circle(count), lambda c: ((2 * c[0]) % 1.0,), name)

    logger.debug(f"Built {name} at resolution {resolution}: |Y|={len(result.domain)}, "
                 f"|X|={len(result.codomain)}, Lip={result.lipschitz_estimate:.3f}")
    return result


def refine_gallery_map(name: str, resolution) -> NetMap:
    """The same gallery map one refinement finer (half mesh, or depth + 1)"""
    if name == "dyadic":
        return build_gallery_map(name, _check_depth(resolution) + 1)
    return build_gallery_map(name, _check_mesh(resolution) / 2)


def build_discrete_map(fiber_sizes: Sequence[int], name: str = "discrete") -> NetMap:
    """Finite instance: base points 0..k-1 on a line, fiber over i of the given size"""
    if not fiber_sizes or min(fiber_sizes) < 1:
        raise ValueError("Every fiber needs at least one point")
    x_space = NetSpace(tuple(NetPoint(i, (float(i),)) for i in range(len(fiber_sizes))),
                       "euclidean", 0.5, "discrete base", 1.0)
    coords = [(float(i), float(level)) for i, size in enumerate(fiber_sizes) for level in range(size)]
    y_space = NetSpace(tuple(NetPoint(k, c) for k, c in enumerate(coords)),
                       "euclidean", 0.5, "discrete total", 1.0)
    return NetMap.from_assignment(y_space, x_space, [int(c[0]) for c in coords], name)


def transport_subset(coarse: NetMap, fine: NetMap, subset: Iterable) -> np.ndarray:
    """Fine domain points whose nearest coarse domain point lies in the subset"""
    members = np.zeros(len(coarse.domain), dtype=bool)
    members[as_ids(subset)] = True
    nearest = coarse.domain.nearest([p.coords for p in fine.domain.points])
    return np.flatnonzero(members[nearest])
