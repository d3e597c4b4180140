from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from analysis import cantor_mass_sweep, enumerate_extreme_points_discrete, uniqueness_report
from analysis.uniqueness import UniquenessParams
from core.constants import (
    CANTOR_DEFAULT_DEPTHS,
    CANTOR_DEFAULT_L,
    CANTOR_DEFAULT_TARGET,
    EXIT_INCONCLUSIVE,
    EXIT_OK,
    EXIT_VALIDATION,
)
from core.kernels import canonical_kernel
from gallery_registry import GalleryConfig
from .io import ProblemInstance, create_output_structure, gallery_problem
from .reports import canonical_weight_rows, emit_report, write_kernel, write_table
from .utils import instance_footprint

_PARAM_FIELDS = {f.name for f in fields(UniquenessParams)}


@dataclass
class AnalysisConfig:
    """Run options; None means take the instance's value, then the library default"""

    lipschitz_bound: Optional[float] = None
    atom_tol: Optional[float] = None
    fiber_tol: Optional[float] = None
    section_tol: Optional[float] = None
    delta: Optional[float] = None
    openness_ratio: Optional[float] = None
    smoothing: Optional[float] = None
    max_sets: Optional[int] = None
    max_count: Optional[int] = None
    distinct_threshold: Optional[float] = None
    report_format: str = "structured"
    workers: Optional[int] = None
    depths: Optional[List[int]] = None
    mass_L: Optional[float] = None
    target: Optional[str] = None

    def uniqueness_params(self, instance: ProblemInstance) -> UniquenessParams:
        values = {k: v for k, v in instance.parameters.items() if k in _PARAM_FIELDS}
        values.update({k: getattr(self, k) for k in _PARAM_FIELDS
                       if hasattr(self, k) and getattr(self, k) is not None})
        values["workers"] = self.workers
        return UniquenessParams(**values)


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


class PipelineRunner:
    def __init__(self, config: AnalysisConfig):
        self.config = config

    def process_problem(self, instance: ProblemInstance, output_dirs: Dict[str, Path]) -> Dict[str, object]:
        logger = logging.getLogger(__name__)
        start = time.time()
        try:
            report = uniqueness_report(instance.j, self.config.uniqueness_params(instance), instance.refined)
        except ValueError as e:
            logger.error(f"{instance.name}: analysis failed: {e}")
            return {"success": False, "name": instance.name, "error": str(e), "exit_code": EXIT_VALIDATION}

        suffix = "json" if self.config.report_format == "structured" else "csv"
        report_path = emit_report(report, self.config.report_format, output_dirs["run"] / f"report.{suffix}")
        kernel_paths = [write_kernel(K, output_dirs["kernels"] / f"{k:02d}_{_slug(K.label)}.json")
                        for k, K in enumerate(report.kernels)]

        footprint = instance_footprint(instance.j)
        rss = f"{footprint['rss_mb']:.0f} MB" if footprint["rss_mb"] is not None else "n/a"
        logger.debug(f"{instance.name}: distance tables {footprint['tables_mb']:.1f} MB, process RSS {rss}")

        return {
            "success": True,
            "name": instance.name,
            "verdict": report.verdict,
            "report": report_path,
            "kernels": kernel_paths,
            "tables": [],
            "duration": time.time() - start,
            "exit_code": EXIT_INCONCLUSIVE if report.verdict == "inconclusive" else EXIT_OK,
            "uniqueness": report,
        }

    def process_gallery(self, gallery: GalleryConfig, out_dir: Path, resolution=None) -> Dict[str, object]:
        logger = logging.getLogger(__name__)
        resolution = gallery.resolution if resolution is None else resolution
        try:
            instance = gallery_problem(gallery, resolution)
        except ValueError as e:
            return {"success": False, "name": gallery.name, "error": str(e), "exit_code": EXIT_VALIDATION}

        output_dirs = create_output_structure(out_dir, gallery.name)
        result = self.process_problem(instance, output_dirs)
        if not result["success"]:
            return result

        try:
            result["tables"].extend(self._write_extras(gallery, resolution, output_dirs, result))
        except ValueError as e:
            logger.error(f"{gallery.name}: extra outputs failed: {e}")
            return {"success": False, "name": gallery.name, "error": str(e), "exit_code": EXIT_VALIDATION}
        logger.info(f"✓ {gallery.name}: {result['verdict']} in {result['duration']:.1f}s")
        return result

    def _write_extras(self, gallery: GalleryConfig, resolution, output_dirs: Dict[str, Path],
                      result: Dict[str, Any]) -> List[Path]:
        tables = []
        if "canonical_kernel" in gallery.extras:
            nu = canonical_kernel(resolution)
            result["kernels"].append(write_kernel(nu, output_dirs["kernels"] / "canonical.json"))
            tables.append(write_table(output_dirs["tables"] / "canonical_weights.csv",
                                      ("x", "weight_lower", "weight_upper"), canonical_weight_rows(nu)))

        if "mass_sweep" in gallery.extras:
            sweep = gallery.mass_sweep or {}
            depths = self.config.depths or sweep.get("depths", CANTOR_DEFAULT_DEPTHS)
            L = self.config.mass_L if self.config.mass_L is not None else sweep.get("L", CANTOR_DEFAULT_L)
            target = self.config.target or sweep.get("target", CANTOR_DEFAULT_TARGET)
            rows = cantor_mass_sweep(depths, L, target, workers=self.config.workers)
            tables.append(write_table(output_dirs["tables"] / "cantor_mass_bound.csv",
                                      ("depth", "L", "target", "mass_bound"),
                                      [(d, float(L), target, bound) for d, bound in rows]))

        if "extreme_points" in gallery.extras:
            vertices = enumerate_extreme_points_discrete(gallery.build_map(resolution))
            tables.append(write_table(output_dirs["tables"] / "extreme_points.csv",
                                      ["vertex"] + [f"x{x}" for x in range(len(vertices.selections[0]))],
                                      [(k,) + selection for k, selection in enumerate(vertices.selections)]))
        return tables
