# analysis/__init__.py
"""
Kernel Analysis Package

Classification operations over a discretized surjection j: section search,
admissible sets, transversals, Milutin kernels, discrete extreme points, the
Cantor mass bound and the uniqueness report that combines them.
"""

from typing import Any, Dict

from .common import CandidateSet, SectionCandidate, certify_subset
from .sections import find_sections
from .admissible import admissible_search, enumerate_admissible_sets, prune_point
from .transversals import TransversalEnumeration, minimal_surjective_transversals
from .milutin import milutin_kernel
from .extreme_points import ExtremePointEnumeration, enumerate_extreme_points_discrete
from .cantor import cantor_mass_bound, cantor_mass_sweep
from .uniqueness import (
    VERDICTS,
    UniquenessParams,
    UniquenessReport,
    count_distinct,
    decide_verdict,
    reweighting_witness,
    uniqueness_report,
)

# Dispatch table of the named analyses
_ANALYSIS_FUNCTIONS = {
    'find_sections': find_sections,
    'enumerate_admissible_sets': enumerate_admissible_sets,
    'minimal_surjective_transversals': minimal_surjective_transversals,
    'milutin_kernel': milutin_kernel,
    'enumerate_extreme_points_discrete': enumerate_extreme_points_discrete,
    'cantor_mass_bound': cantor_mass_bound,
    'uniqueness_report': uniqueness_report,
}


def run_analysis(name: str, *args, **kwargs) -> Any:
    """
    Run a named analysis from the dispatch table.

    Raises:
        ValueError: If the analysis is not registered
    """
    if name not in _ANALYSIS_FUNCTIONS:
        raise ValueError(f"Analysis {name} not found. Available: {', '.join(sorted(_ANALYSIS_FUNCTIONS))}")
    return _ANALYSIS_FUNCTIONS[name](*args, **kwargs)


def list_analyses() -> Dict[str, str]:
    return {name: (func.__doc__ or "").strip().splitlines()[0] if func.__doc__ else ""
            for name, func in sorted(_ANALYSIS_FUNCTIONS.items())}
