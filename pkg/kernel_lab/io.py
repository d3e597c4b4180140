"""
Problem-definition files and output layout

A problem file is JSON with sections "X", "Y" (metric, points[].id, points[].coords),
"j" (assignment: Y id -> X id), optional "parameters" and optional "refinement"
holding the same triple one mesh finer.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from core.errors import ProblemFormatError, SurjectivityError
from core.spaces import METRICS, NetMap, NetPoint, NetSpace, surjectivity_defect
from gallery_registry import GalleryConfig

FORMAT_VERSION = 1


@dataclass
class ProblemInstance:
    name: str
    x_space: NetSpace
    y_space: NetSpace
    j: NetMap
    provenance: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    refined: Optional[NetMap] = None


def create_output_structure(out_dir: Union[str, Path], name: str) -> Dict[str, Path]:
    """Create organized output directory structure"""
    run_dir = Path(out_dir) / name
    dirs = {"base": Path(out_dir), "run": run_dir, "kernels": run_dir / "kernels", "tables": run_dir / "tables"}
    for path in dirs.values():
        path.mkdir(parents=True, exist_ok=True)
    return dirs


# =============================================================================
# EXPORT
# =============================================================================

def _space_to_dict(space: NetSpace) -> Dict[str, Any]:
    return {
        "metric": space.metric,
        "ambient_tag": space.ambient_tag,
        "covering_radius": space.covering_radius,
        "spacing": space.spacing,
        "points": [{"id": p.id, "coords": p.coords if p.is_binary else list(p.coords)} for p in space.points],
    }


def _map_to_dict(m: NetMap) -> Dict[str, Any]:
    return {"name": m.name, "assignment": {str(y): int(x) for y, x in enumerate(m.assignment)}}


def gallery_problem(config: GalleryConfig, resolution=None) -> ProblemInstance:
    """Problem instance for a gallery entry, with gallery tolerances resolved"""
    j = config.build_map(resolution)
    parameters = {"fiber_tol": 0.0}
    parameters.update(config.resolved_parameters(j))
    return ProblemInstance(
        name=config.name,
        x_space=j.codomain,
        y_space=j.domain,
        j=j,
        provenance=f"gallery:{config.name}",
        parameters=parameters,
        refined=config.refined_map(resolution),
    )


def problem_to_dict(instance: ProblemInstance) -> Dict[str, Any]:
    data = {
        "format_version": FORMAT_VERSION,
        "name": instance.name,
        "X": _space_to_dict(instance.x_space),
        "Y": _space_to_dict(instance.y_space),
        "j": _map_to_dict(instance.j),
        "parameters": dict(instance.parameters),
    }
    if instance.refined is not None:
        data["refinement"] = {
            "X": _space_to_dict(instance.refined.codomain),
            "Y": _space_to_dict(instance.refined.domain),
            "j": _map_to_dict(instance.refined),
        }
    return data


def export_problem(instance: ProblemInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(problem_to_dict(instance), indent=2) + "\n")
    logging.getLogger(__name__).info(f"Exported {instance.name} to {path}")
    return path


# =============================================================================
# LOAD
# =============================================================================

def _require(section: Dict[str, Any], key: str, where: str):
    if not isinstance(section, dict) or key not in section:
        raise ProblemFormatError(f"Missing required field '{key}'", field=f"{where}.{key}" if where else key)
    return section[key]


def _parse_space(data: Dict[str, Any], where: str) -> NetSpace:
    metric = _require(data, "metric", where)
    if metric not in METRICS:
        raise ProblemFormatError(f"Unknown metric '{metric}'", field=f"{where}.metric")
    raw_points = _require(data, "points", where)
    if not isinstance(raw_points, list) or not raw_points:
        raise ProblemFormatError("points must be a non-empty list", field=f"{where}.points")

    points = []
    for index, raw in enumerate(raw_points):
        spot = f"{where}.points[{index}]"
        point_id = _require(raw, "id", spot)
        coords = _require(raw, "coords", spot)
        if point_id != index:
            raise ProblemFormatError(f"Point ids must be 0..n-1 in order, found {point_id}", field=f"{spot}.id")
        if metric == "cantor":
            if not isinstance(coords, str) or set(coords) - {"0", "1"}:
                raise ProblemFormatError("Cantor coordinates must be binary strings", field=f"{spot}.coords")
            points.append(NetPoint(index, coords))
        else:
            if not isinstance(coords, list) or not all(isinstance(c, (int, float)) for c in coords):
                raise ProblemFormatError("Coordinates must be a list of numbers", field=f"{spot}.coords")
            points.append(NetPoint(index, tuple(float(c) for c in coords)))

    spacing = data.get("spacing")
    covering_radius = data.get("covering_radius")
    try:
        space = NetSpace(tuple(points), metric, 1.0, data.get("ambient_tag", where), 1.0)
        if spacing is None:
            nearest = space.distances + np.diag(np.full(len(space), np.inf))
            spacing = float(nearest.min(axis=1).max()) if len(space) > 1 else 1.0
        if covering_radius is None:
            covering_radius = spacing / 2
        return NetSpace(tuple(points), metric, float(covering_radius), data.get("ambient_tag", where), float(spacing))
    except ValueError as e:
        raise ProblemFormatError(str(e), field=where) from e


def _parse_map(data: Dict[str, Any], domain: NetSpace, codomain: NetSpace, where: str) -> NetMap:
    raw = _require(data, "assignment", where)
    if not isinstance(raw, dict):
        raise ProblemFormatError("assignment must map Y ids to X ids", field=f"{where}.assignment")
    assignment = []
    for y in range(len(domain)):
        if str(y) not in raw:
            raise ProblemFormatError(f"Y point {y} is unassigned", field=f"{where}.assignment")
        x = raw[str(y)]
        if not isinstance(x, int) or not 0 <= x < len(codomain):
            raise ProblemFormatError(f"Y point {y} maps to unknown X id {x!r}", field=f"{where}.assignment.{y}")
        assignment.append(x)
    extra = set(raw) - {str(y) for y in range(len(domain))}
    if extra:
        raise ProblemFormatError(f"assignment names unknown Y ids {sorted(extra)}", field=f"{where}.assignment")
    return NetMap.from_assignment(domain, codomain, assignment, name=data.get("name", "j"))


def _parse_triple(data: Dict[str, Any], prefix: str = "") -> NetMap:
    def at(key):
        return f"{prefix}.{key}" if prefix else key

    x_space = _parse_space(_require(data, "X", prefix), at("X"))
    y_space = _parse_space(_require(data, "Y", prefix), at("Y"))
    return _parse_map(_require(data, "j", prefix), y_space, x_space, at("j"))


def load_problem(path: Union[str, Path], gallery_names=()) -> ProblemInstance:
    """Parse and validate a problem file; rejects maps that are not surjective within tolerance"""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"Invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ProblemFormatError("Top-level JSON must be an object", line=1)

    j = _parse_triple(data)
    parameters = data.get("parameters", {})
    if not isinstance(parameters, dict):
        raise ProblemFormatError("parameters must be an object", field="parameters")

    tol = parameters.get("surjectivity_tol")
    tol = j.codomain.covering_radius if tol is None else float(tol)
    defect = surjectivity_defect(j)
    if defect > tol + 1e-12:
        distance_to_image = j.codomain.distances[:, j.image_ids()].min(axis=1)
        witness = j.codomain.point(int(np.argmax(distance_to_image)))
        coords = witness.coords if witness.is_binary else ", ".join(f"{c:g}" for c in witness.coords)
        raise SurjectivityError(f"j misses x=({coords}) by {defect:g} (tolerance {tol:g})", witness=witness)

    refined = _parse_triple(data["refinement"], "refinement") if "refinement" in data else None

    name = str(data.get("name") or path.stem)
    if name in gallery_names:
        name = f"file-{name}"
    parameters = dict(parameters)
    parameters.setdefault("fiber_tol", j.codomain.covering_radius)
    return ProblemInstance(name, j.codomain, j.domain, j, str(path), parameters, refined)
