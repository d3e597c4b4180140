#!/usr/bin/env python3
"""
Tests for the Cantor mass-bound linear program
"""
import sys
from pathlib import Path

import pytest

# Add project directory to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from analysis import cantor_mass_bound, cantor_mass_sweep
from core.errors import ResolutionError


class TestMassBound:
    def test_bounds_shrink_with_depth(self):
        bounds = [cantor_mass_bound(depth, L=1.0) for depth in (4, 5, 6)]
        assert all(0.0 <= b <= 1.0 for b in bounds)
        assert bounds[0] > bounds[1] > bounds[2]

    def test_identity_model_keeps_full_mass(self):
        # the Dirac kernel x -> delta_x satisfies every constraint
        assert cantor_mass_bound(4, L=1.0, fiber_model="identity") == pytest.approx(1.0, abs=1e-7)

    def test_zero_lipschitz_kills_mass_near_the_gap(self):
        assert cantor_mass_bound(4, L=0.0) == 0.0

    @pytest.mark.slow
    def test_bound_halves_by_depth_eight(self):
        bounds = [bound for _, bound in cantor_mass_sweep(range(4, 9), L=1.0, workers=2)]
        assert all(a > b for a, b in zip(bounds, bounds[1:]))
        assert bounds[-1] <= 0.5 * bounds[0]

    def test_bound_grows_with_lipschitz_constant(self):
        bounds = [cantor_mass_bound(5, L=L) for L in (0.0, 0.5, 1.0, 2.0)]
        assert bounds[0] == 0.0
        assert all(a <= b + 1e-9 for a, b in zip(bounds, bounds[1:]))

    def test_zero_lipschitz_at_every_depth(self):
        assert all(cantor_mass_bound(depth, L=0.0) == 0.0 for depth in (4, 5, 6))

    def test_other_targets(self):
        assert 0.0 <= cantor_mass_bound(4, L=1.0, target="1/4") <= 1.0

    def test_argument_checks(self):
        with pytest.raises(ResolutionError):
            cantor_mass_bound(1)
        with pytest.raises(ValueError):
            cantor_mass_bound(4, L=-1.0)
        with pytest.raises(ValueError):
            cantor_mass_bound(4, target="1/3")
        with pytest.raises(ValueError):
            cantor_mass_bound(4, target="1")
        with pytest.raises(ValueError):
            cantor_mass_bound(4, fiber_model="tent")


class TestSweep:
    def test_rows_in_depth_order(self):
        rows = cantor_mass_sweep([6, 4, 5], L=1.0, workers=2)
        assert [d for d, _ in rows] == [4, 5, 6]
        assert rows[0][1] == pytest.approx(cantor_mass_bound(4, L=1.0))
