#!/usr/bin/env python3
"""
Unit tests for net spaces, net maps and their diagnostics
"""
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add project directory to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

os.environ.setdefault("KERNELS_DEBUG", "0")

from core.errors import ResolutionError, UnknownGalleryError
from core.spaces import (
    NetMap,
    NetPoint,
    NetSpace,
    build_discrete_map,
    build_gallery_map,
    build_gallery_space,
    dyadic_branches,
    fiber,
    fiber_ids,
    openness_defect,
    openness_shortfalls,
    refine_gallery_map,
    surjectivity_defect,
    transport_subset,
)


def coords_of(space, ids):
    return {space.point(i).coords for i in ids}


class TestGallerySpaces:
    """Net models of the gallery continua"""

    def test_interval_grid(self):
        space = build_gallery_space("interval", 0.5, a=0.0, b=2.0)
        assert [p.coords for p in space.points] == [(0.0,), (0.5,), (1.0,), (1.5,), (2.0,)]
        assert space.covering_radius <= 0.5
        assert space.spacing == 0.5

    def test_canonical_y_shape(self):
        space = build_gallery_space("canonical-Y", 0.25)
        coords = {p.coords for p in space.points}
        assert (1.0, 1.0) in coords
        assert (2.0, 0.0) in coords
        assert all(not (c[0] > 1.0 and c[1] == 1.0) for c in coords)
        assert len(space) == 9 + 5

    def test_cantor_points_and_metric(self):
        space = build_gallery_space("cantor", 3)
        assert len(space) == 8
        assert {p.coords for p in space.points} == {format(v, "03b") for v in range(8)}
        # d(a, b) = sum |a_i - b_i| 2^-i
        assert space.distances[0b000, 0b100] == pytest.approx(0.5)
        assert space.distances[0b000, 0b001] == pytest.approx(0.125)
        assert space.distances[0b011, 0b100] == pytest.approx(0.875)

    def test_circle_metric_wraps(self):
        space = build_gallery_space("circle", 0.25)
        assert len(space) == 4
        assert space.distances[0, 3] == pytest.approx(0.25)
        assert space.distances[0, 2] == pytest.approx(0.5)

    def test_unknown_and_bad_resolution(self):
        with pytest.raises(UnknownGalleryError):
            build_gallery_space("torus", 0.1)
        with pytest.raises(ResolutionError):
            build_gallery_space("interval", 0.0)
        with pytest.raises(ResolutionError):
            build_gallery_space("cantor", 0)

    def test_dense_samples_are_covered(self):
        rng = np.random.default_rng(7)

        def assert_covered(space, samples, distance):
            net = np.array([p.coords for p in space.points])
            worst = max(distance(s, net).min() for s in samples)
            assert worst <= space.covering_radius + 1e-12

        euclid = lambda s, net: np.linalg.norm(net - s, axis=1)
        arc = lambda s, net: np.minimum(np.abs(net[:, 0] - s[0]), 1 - np.abs(net[:, 0] - s[0]))

        assert_covered(build_gallery_space("interval", 0.3), rng.uniform(0, 1, (500, 1)), euclid)
        assert_covered(build_gallery_space("square", 0.25), rng.uniform(0, 1, (500, 2)), euclid)
        assert_covered(build_gallery_space("circle", 0.1), rng.uniform(0, 1, (500, 1)), arc)
        lower = np.column_stack([rng.uniform(0, 2, 300), np.zeros(300)])
        upper = np.column_stack([rng.uniform(0, 1, 300), np.ones(300)])
        assert_covered(build_gallery_space("canonical-Y", 0.25), np.vstack([lower, upper]), euclid)

    def test_cantor_covering_by_truncation(self):
        depth = 4
        space = build_gallery_space("cantor", depth)
        weights = 0.5 ** np.arange(1, depth + 11)
        rng = np.random.default_rng(11)
        for bits in rng.integers(0, 2, (200, depth + 10)):
            # distance to the depth-4 prefix point is the weight of the tail
            assert float(bits[depth:] @ weights[depth:]) <= space.covering_radius + 1e-12

    def test_metric_axioms_on_sampled_triples(self):
        rng = np.random.default_rng(3)
        for space in (build_gallery_space("canonical-Y", 0.25), build_gallery_space("circle", 0.1),
                      build_gallery_space("cantor", 4), build_gallery_space("square", 0.25)):
            D = space.distances
            np.testing.assert_allclose(D, D.T)
            assert np.all(np.diag(D) == 0)
            for i, j, k in rng.integers(0, len(space), (300, 3)):
                assert D[i, k] <= D[i, j] + D[j, k] + 1e-12

    def test_ids_must_be_indices(self):
        with pytest.raises(ValueError):
            NetSpace((NetPoint(1, (0.0,)),), "euclidean", 0.5, "bad", 1.0)

    def test_neighbors_on_interval(self):
        space = build_gallery_space("interval", 0.25)
        assert space.neighbors(0) == [1]
        assert space.neighbors(2) == [1, 3]
        assert (0, 1) in space.neighbor_pairs and (0, 2) not in space.neighbor_pairs


class TestGalleryMaps:
    """Discretized surjections"""

    def test_canonical_projection(self):
        j = build_gallery_map("canonical-projection", 0.25)
        upper_half = [p.id for p in j.domain.points if p.coords == (0.5, 1.0)][0]
        assert j(upper_half).coords == (0.5,)
        assert j.lipschitz_estimate == pytest.approx(1.0)

    def test_dyadic_truncated_sum(self):
        j = build_gallery_map("dyadic", 3)
        assert j(0b100).coords == (0.5,)
        assert j(0b011).coords == (0.375,)

    def test_identity(self):
        j = build_gallery_map("identity", 0.1)
        np.testing.assert_array_equal(j.assignment, np.arange(len(j.domain)))
        assert j.lipschitz_estimate == 1.0

    def test_integer_mesh_is_a_mesh(self):
        # mesh coarser than the interval still keeps both endpoints
        assert len(build_gallery_map("identity", 1).domain) == 2
        assert len(build_gallery_map("identity", 2).domain) == 2
        assert len(build_gallery_map("square-projection", 1).codomain) == 2

    def test_bad_resolution_kind(self):
        with pytest.raises(ResolutionError):
            build_gallery_map("dyadic", 0.5)
        with pytest.raises(ResolutionError):
            build_gallery_map("identity", -1)
        with pytest.raises(UnknownGalleryError):
            build_gallery_map("tent", 0.1)

    def test_assignment_must_be_total(self):
        space = build_gallery_space("interval", 0.5)
        with pytest.raises(ValueError):
            NetMap(space, space, np.array([0, 1]), 1.0)

    def test_refinement_halves_the_mesh(self):
        coarse = build_gallery_map("canonical-projection", 0.5)
        fine = refine_gallery_map("canonical-projection", 0.5)
        assert fine.codomain.spacing == pytest.approx(coarse.codomain.spacing / 2)
        assert len(refine_gallery_map("dyadic", 3).domain) == 16

    def test_discrete_map_fibers(self):
        j = build_discrete_map([2, 3, 2])
        assert len(j.domain) == 7
        assert [fiber_ids(j, x).size for x in range(3)] == [2, 3, 2]
        with pytest.raises(ValueError):
            build_discrete_map([2, 0])


class TestFibersAndDefects:
    """Fibers, surjectivity and openness"""

    def test_canonical_fiber(self):
        j = build_gallery_map("canonical-projection", 0.25)
        x = [p.id for p in j.codomain.points if p.coords == (0.5,)][0]
        assert {p.coords for p in fiber(j, x, tol=0.0)} == {(0.5, 0.0), (0.5, 1.0)}

    def test_dyadic_fiber_with_tolerance(self):
        j = build_gallery_map("dyadic", 3)
        half = [p.id for p in j.codomain.points if p.coords == (0.5,)][0]
        assert {"100", "011"} <= {p.coords for p in fiber(j, half, tol=2 ** -3)}

    def test_identity_fibers_are_singletons(self):
        j = build_gallery_map("identity", 0.1)
        for x in range(len(j.codomain)):
            assert fiber_ids(j, x, tol=0.0).tolist() == [x]

    def test_surjectivity_defect(self):
        assert surjectivity_defect(build_gallery_map("identity", 0.1)) == 0.0
        j = build_gallery_map("canonical-projection", 0.25)
        assert surjectivity_defect(j) == 0.0
        upper = [p.id for p in j.domain.points if p.coords[1] == 1.0]
        assert surjectivity_defect(j, upper) == pytest.approx(1.0)

    def test_dyadic_misses_the_right_end_by_one_step(self):
        j = build_gallery_map("dyadic", 3)
        assert surjectivity_defect(j) == pytest.approx(0.125)

    def test_openness_identity(self):
        j = build_gallery_map("identity", 0.1)
        assert openness_defect(j, range(len(j.domain)), 0.3, 0.5) == 0.0

    def test_openness_of_section_graph(self):
        j = build_gallery_map("canonical-projection", 0.25)
        lower = [p.id for p in j.domain.points if p.coords[1] == 0.0]
        assert openness_defect(j, lower, 0.25, 1.0) == 0.0

    def test_full_canonical_is_one_sided_at_the_seam(self):
        j = build_gallery_map("canonical-projection", 0.25)
        corner = [p.id for p in j.domain.points if p.coords == (1.0, 1.0)][0]
        members, shortfalls = openness_shortfalls(j, range(len(j.domain)), 0.25, 1.0)
        assert shortfalls[list(members).index(corner)] > 0
        assert openness_defect(j, range(len(j.domain)), 0.25, 1.0) > 0

    def test_openness_defect_grows_with_ratio(self):
        j = build_gallery_map("canonical-projection", 0.25)
        everything = range(len(j.domain))
        defects = [openness_defect(j, everything, 0.5, c) for c in (0.25, 0.5, 0.75, 1.0)]
        assert defects == sorted(defects)
        lower = [p.id for p in j.domain.points if p.coords[1] == 0.0]
        defects = [openness_defect(j, lower, 0.25, c) for c in (0.25, 0.5, 1.0)]
        assert defects == sorted(defects)

    def test_openness_argument_checks(self):
        j = build_gallery_map("identity", 0.1)
        with pytest.raises(ValueError):
            openness_defect(j, [], 0.2, 0.5)
        with pytest.raises(ValueError):
            openness_defect(j, [0], 0.2, 1.5)


class TestDyadicBranches:
    """Zero-tail and one-tail truncations"""

    def test_half(self):
        zero, one = dyadic_branches(Fraction(1, 2), 5)
        assert (zero.coords, one.coords) == ("10000", "01111")

    def test_non_dyadic_has_one_preimage(self):
        zero, one = dyadic_branches(Fraction(1, 3), 6)
        assert zero.coords == one.coords == "010101"

    def test_quarter(self):
        zero, one = dyadic_branches(0.25, 4)
        assert (zero.coords, one.coords) == ("0100", "0011")
        assert zero.id == 0b0100

    def test_branches_land_near_x(self):
        depth = 6
        j = build_gallery_map("dyadic", depth)
        points = [Fraction(k, 16) for k in range(1, 16)] + [Fraction(1, 3), 0.7, Fraction(5, 7)]
        for x in points:
            for branch in dyadic_branches(x, depth):
                assert abs(j(branch.id).coords[0] - float(x)) <= 2 ** -depth + 1e-12

    def test_bad_arguments(self):
        with pytest.raises(ResolutionError):
            dyadic_branches(0.5, 0)
        with pytest.raises(ValueError):
            dyadic_branches(1.5, 3)


class TestTransport:
    def test_subset_follows_nearest_coarse_point(self):
        coarse = build_gallery_map("identity", 0.5)
        fine = build_gallery_map("identity", 0.25)
        # ties between coarse neighbours go to the lower id
        assert transport_subset(coarse, fine, [0]).tolist() == [0, 1]
        assert transport_subset(coarse, fine, [2]).tolist() == [4]
