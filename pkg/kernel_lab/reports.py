"""
Report, kernel and table writers

Everything written here is byte-deterministic: fixed key order, base points by
id, atoms by point id, numbers rounded to REPORT_SIGNIFICANT_DIGITS.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from analysis.uniqueness import UniquenessReport
from core.constants import REPORT_SIGNIFICANT_DIGITS
from core.kernels import Kernel

REPORT_FORMATS = ("structured", "csv")


def number(value: Optional[float]) -> Optional[float]:
    """Round to the report precision; non-finite values become null"""
    if value is None or not math.isfinite(value):
        return None
    return float(f"{value:.{REPORT_SIGNIFICANT_DIGITS}g}")


def _text(value) -> str:
    if isinstance(value, float):
        rounded = number(value)
        return "" if rounded is None else f"{rounded:.{REPORT_SIGNIFICANT_DIGITS}g}"
    if isinstance(value, bool):
        return str(value).lower()
    return "" if value is None else str(value)


def _parameter_value(value):
    return number(value) if isinstance(value, float) else value


def report_to_dict(report: UniquenessReport) -> Dict[str, Any]:
    return {
        "map": report.map_name,
        "verdict": report.verdict,
        "sections_found": report.sections_found,
        "sections": [
            {
                "assignment": [int(y) for y in section.alpha.assignment],
                "lipschitz_estimate": number(section.alpha.lipschitz_estimate),
                "section_defect": number(section.section_defect),
            }
            for section in report.sections
        ],
        "admissible_sets_found": report.admissible_sets_found,
        "admissible_sets": [
            {
                "source": A.source,
                "points": list(A.points),
                "surjectivity_defect": number(A.surjectivity_defect),
                "openness_defect": number(A.openness_defect),
                "refined_openness_defect": number(A.refined_openness_defect),
                "minimal": A.minimal_flag,
            }
            for A in report.admissible_sets
        ],
        "kernels": [
            {
                "label": K.label,
                "declared_modulus": number(cert.declared_modulus),
                "recomputed_modulus": number(cert.recomputed_modulus),
                "fiber_violation": number(cert.fiber_violation),
                "normalization_drift": number(cert.normalization_drift),
                "mass_function": [number(m) for m in cert.mass_function],
            }
            for K, cert in zip(report.kernels, report.certificates)
        ],
        "distinct_valid_kernels": report.distinct_valid_kernels,
        "transversal_count": report.transversal_count,
        "caps_hit": report.caps_hit,
        "unique_set_is_section_graph": report.unique_set_is_section_graph,
        "parameters": {key: _parameter_value(value) for key, value in report.parameters.items()},
    }


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_text(v) for v in row])
    return buffer.getvalue()


def render_report(report: UniquenessReport, fmt: str = "structured") -> str:
    if fmt == "structured":
        return json.dumps(report_to_dict(report), indent=2) + "\n"
    if fmt == "csv":
        rows = [
            ("verdict", report.verdict),
            ("sections_found", report.sections_found),
            ("admissible_sets_found", report.admissible_sets_found),
            ("distinct_valid_kernels", report.distinct_valid_kernels),
            ("transversal_count", report.transversal_count),
            ("caps_hit", report.caps_hit),
        ]
        rows.extend((f"param:{key}", value) for key, value in report.parameters.items())
        return _csv_text(("field", "value"), rows)
    raise ValueError(f"Unknown report format: {fmt}. Available: {', '.join(REPORT_FORMATS)}")


def emit_report(report: UniquenessReport, fmt: str, out: Union[str, Path]) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        f.write(render_report(report, fmt))
    return out


# =============================================================================
# KERNELS AND TABLES
# =============================================================================

def kernel_to_dict(K: Kernel) -> Dict[str, Any]:
    return {
        "label": K.label,
        "map": K.map_ref.name,
        "normalized": K.normalized,
        "declared_modulus": number(K.continuity_modulus),
        "fiber_tol": number(K.fiber_tol),
        "measures": [
            {"x": x, "atoms": [{"point_id": pid, "weight": number(w)} for pid, w in mu.atoms]}
            for x, mu in enumerate(K.measures)
        ],
    }


def write_kernel(K: Kernel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(json.dumps(kernel_to_dict(K), indent=2) + "\n")
    return path


def write_table(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(_csv_text(header, rows))
    return path


def canonical_weight_rows(K: Kernel) -> List[Tuple[float, float, float]]:
    """(x, weight on the lower segment, weight on the upper segment) over the base points"""
    rows = []
    for x, mu in enumerate(K.measures):
        lower = sum(w for pid, w in mu.atoms if K.total.point(pid).coords[1] == 0.0)
        upper = sum(w for pid, w in mu.atoms if K.total.point(pid).coords[1] == 1.0)
        rows.append((K.base.point(x).coords[0], lower, upper))
    return rows
