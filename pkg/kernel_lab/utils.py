import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import scipy

from core.spaces import NetMap


def parse_depth_range(range_str: Optional[str]) -> Optional[List[int]]:
    """Parse a depth range string ("4-8" or "4,6,8") into a list of ints."""
    if not range_str:
        return None
    if "-" in range_str:
        start, end = map(int, range_str.split("-"))
        return list(range(start, end + 1))
    return [int(d) for d in range_str.split(",") if d]


def default_workers() -> Optional[int]:
    """Worker count from KERNELS_WORKERS, None (executor default) when unset or invalid"""
    value = os.getenv("KERNELS_WORKERS")
    try:
        workers = int(value) if value else None
    except ValueError:
        return None
    return workers if workers and workers > 0 else None


def setup_logging(debug: bool = False, output_dir: Optional[Path] = None, command: str = "analysis") -> Path:
    """Log every command to <out>/logs/<command>_<timestamp>.log; the console only gets INFO unless debug.

    Returns the log file path. The header records the numpy/scipy versions since
    LP optima and BL distances depend on the HiGHS build.
    """
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_dir = Path(output_dir) / "logs" if output_dir else Path("logs")
    log_dir.mkdir(parents=True, exist_ok=True)
    log_file = log_dir / f"{command}_{timestamp}.log"

    fh = logging.FileHandler(log_file)
    fh.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
    fh.setLevel(logging.DEBUG)

    ch = logging.StreamHandler()
    ch.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    ch.setLevel(logging.DEBUG if debug else logging.INFO)

    logging.basicConfig(level=logging.DEBUG, handlers=[fh, ch], force=True)

    # one linprog call per adjacent base pair; keep solver chatter out of the run log
    logging.getLogger("scipy").setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.info(f"kernels {command}: numpy {np.__version__}, scipy {scipy.__version__}. Log: {log_file}")
    return log_file


def instance_footprint(j: NetMap) -> Dict[str, Optional[float]]:
    """Size in MB of the dense distance tables an instance holds, with the process RSS when psutil is present"""
    tables_mb = 8 * (len(j.domain) ** 2 + len(j.codomain) ** 2) / 2 ** 20
    try:
        import psutil
        rss_mb = psutil.Process().memory_info().rss / 2 ** 20
    except Exception:
        rss_mb = None
    return {"tables_mb": tables_mb, "rss_mb": rss_mb}
