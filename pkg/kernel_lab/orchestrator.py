import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Union

from core.constants import EXIT_VALIDATION
from gallery_registry import get_gallery_registry
from .io import create_output_structure, export_problem, gallery_problem, load_problem
from .pipeline import AnalysisConfig, PipelineRunner


def run_gallery(name: str, resolution=None, out_dir: Union[str, Path] = "outputs",
                config: Optional[AnalysisConfig] = None) -> Dict[str, object]:
    """Analyze one gallery instance and write its report, kernels and tables under out_dir/name."""
    registry = get_gallery_registry()
    try:
        gallery = registry.require(name)
    except ValueError as e:
        return {"success": False, "name": name, "error": str(e), "exit_code": EXIT_VALIDATION}
    runner = PipelineRunner(config or AnalysisConfig())
    try:
        return runner.process_gallery(gallery, Path(out_dir), resolution)
    except OSError as e:
        logging.getLogger(__name__).error(f"{name}: cannot write outputs: {e}")
        return {"success": False, "name": name, "error": f"Cannot write to {out_dir}: {e}", "exit_code": EXIT_VALIDATION}


def run_galleries(names: List[str], out_dir: Union[str, Path] = "outputs",
                  config: Optional[AnalysisConfig] = None, max_workers: Optional[int] = None) -> List[Dict[str, object]]:
    """Analyze several gallery instances concurrently at their default resolutions."""
    logger = logging.getLogger(__name__)
    start = time.time()
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(lambda n: run_gallery(n, None, out_dir, config), names))

    ok = sum(1 for r in results if r["success"])
    logger.info(f"Gallery run complete: {ok}/{len(results)} succeeded in {time.time() - start:.1f}s")
    for result in results:
        if not result["success"]:
            logger.warning(f"  {result['name']}: {result['error']}")
    return results


def analyze_file(path: Union[str, Path], out_dir: Union[str, Path] = "outputs",
                 config: Optional[AnalysisConfig] = None) -> Dict[str, object]:
    """Analyze a problem-definition file; the run directory is named after the instance."""
    registry = get_gallery_registry()
    try:
        instance = load_problem(path, gallery_names=registry.list_galleries())
    except (ValueError, OSError) as e:
        logging.getLogger(__name__).error(f"{path}: {e}")
        return {"success": False, "name": str(path), "error": str(e), "exit_code": EXIT_VALIDATION}
    try:
        output_dirs = create_output_structure(out_dir, instance.name)
        return PipelineRunner(config or AnalysisConfig()).process_problem(instance, output_dirs)
    except OSError as e:
        return {"success": False, "name": instance.name, "error": f"Cannot write to {out_dir}: {e}", "exit_code": EXIT_VALIDATION}


def export_gallery(name: str, path: Union[str, Path], resolution=None) -> Path:
    """Write a gallery instance as a problem-definition file."""
    gallery = get_gallery_registry().require(name)
    return export_problem(gallery_problem(gallery, resolution), path)
