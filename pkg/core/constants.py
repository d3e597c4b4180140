#!/usr/bin/env python3
"""
Centralized Constants for Kernel Analysis

Tolerances, caps and scale factors shared by the spaces, measures, kernels and
analysis layers, kept in one place so defaults cannot drift between modules.
"""

# =============================================================================
# NUMERICAL TOLERANCES
# =============================================================================

NORMALIZATION_TOL = 1e-9        # |total_mass - 1| for the probability flag
LP_TOL = 1e-8                   # HiGHS primal/dual feasibility and optimality
DISTANCE_EPS = 1e-12            # slack on metric comparisons (d <= r)
MODULUS_REL_SLACK = 1e-6        # relative slack when comparing a recomputed modulus

# =============================================================================
# GRID AND SEARCH SCALES
# =============================================================================

ADJACENCY_FACTOR = 1.5          # grid neighbours: d(x, x') <= 1.5 * spacing
DEFAULT_LIPSCHITZ_BOUND = 2.0   # section search bound
DEFAULT_OPENNESS_RATIO = 0.5    # c in j(B(a, delta)) >= B(j(a), c * delta)
DEFAULT_DELTA_FACTOR = 2.0      # delta = 2 * spacing
DEFAULT_SMOOTHING_FACTOR = 0.5  # smoothing = 0.5 * spacing (exact fiber support)
DISTINCT_FACTOR = 0.1           # kernels differ when sup-BL > 0.1 * (spacing + smoothing)
REWEIGHT_AMPLITUDE = 0.5        # w(y) = 1 + 0.5 * d(y, y0) / diam(Y)

# =============================================================================
# ENUMERATION CAPS
# =============================================================================

DEFAULT_MAX_SETS = 64
DEFAULT_MAX_COUNT = 64

# =============================================================================
# CANTOR EXPERIMENT
# =============================================================================

CANTOR_BUMP_RADIUS = 1.0        # radius of the 1-Lipschitz bumps in the mass LP
CANTOR_DEFAULT_DEPTHS = (4, 5, 6, 7, 8)
CANTOR_DEFAULT_L = 1.0
CANTOR_DEFAULT_TARGET = "1/2"

# =============================================================================
# REPORTING
# =============================================================================

REPORT_SIGNIFICANT_DIGITS = 12

# =============================================================================
# CLI EXIT CODES
# =============================================================================

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_INCONCLUSIVE = 3
