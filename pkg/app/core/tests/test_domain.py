"""
Tests for the shared domain types and simplex arithmetic.
"""

import numpy as np

from django.test import SimpleTestCase

from core.domain import (
    Allocation,
    GroupCounts,
    GroupedSample,
    PopulationSpec,
    allocation_from_counts,
    counts_from_allocation,
    sample_from_allocation,
)
from core.exceptions import InvalidInputError, SamplingError
from core.streams import make_generator


def gaussian_generator(mean):
    """Create a generator returning one feature and a shifted label."""

    def generate(count, rng):
        x = rng.standard_normal((count, 1))
        return x, x[:, 0] + mean

    return generate


class AllocationTests(SimpleTestCase):
    """Test Allocation and PopulationSpec validation."""

    def test_renormalizes_within_tolerance(self):
        """Test vectors within 1e-9 of the simplex are accepted exactly."""

        alpha = Allocation([0.5 + 4e-10, 0.5])

        self.assertAlmostEqual(alpha.weights.sum(), 1.0, places=15)
        self.assertAlmostEqual(alpha[0], alpha[1], places=9)

    def test_rejects_sum_off_simplex(self):
        """Test a sum off by more than the tolerance is rejected."""

        with self.assertRaises(InvalidInputError):
            Allocation([0.5, 0.5 + 1e-6])

    def test_rejects_negative_entries(self):
        """Test negative entries are rejected."""

        with self.assertRaises(InvalidInputError):
            Allocation([1.2, -0.2])

    def test_population_needs_positive_prevalence(self):
        """Test a zero prevalence is rejected while a zero share is not."""

        Allocation([1.0, 0.0])

        with self.assertRaises(InvalidInputError):
            PopulationSpec([1.0, 0.0])

    def test_weights_are_read_only(self):
        """Test the weight vector cannot be mutated."""

        alpha = Allocation([0.25, 0.75])

        with self.assertRaises(ValueError):
            alpha.weights[0] = 0.5


class CountsTests(SimpleTestCase):
    """Test conversions between counts and allocations."""

    def test_allocation_from_counts(self):
        """Test alpha_g = n_g / n."""

        self.assertEqual(
            allocation_from_counts(GroupCounts((2500, 2500))).tolist(),
            [0.5, 0.5],
        )
        self.assertEqual(
            allocation_from_counts(GroupCounts((10000, 0))).tolist(),
            [1.0, 0.0],
        )
        np.testing.assert_allclose(
            allocation_from_counts(GroupCounts((68, 30, 1, 1))).weights,
            [0.68, 0.30, 0.01, 0.01],
        )

    def test_empty_sample_error(self):
        """Test a zero total count is rejected."""

        with self.assertRaisesMessage(InvalidInputError, "empty sample"):
            allocation_from_counts(GroupCounts((0, 0)))

    def test_counts_from_allocation(self):
        """Test floors and the reported shortfall."""

        self.assertEqual(
            counts_from_allocation(Allocation([0.5, 0.5]), 100),
            GroupCounts((50, 50)),
        )
        counts = counts_from_allocation(Allocation([1 / 3, 2 / 3]), 10)
        self.assertEqual(counts.n_per_group, (3, 6))
        self.assertEqual(counts.shortfall, 1)

        counts = counts_from_allocation(
            Allocation([0.68, 0.30, 0.01, 0.01]), 1000
        )
        self.assertEqual(counts.n_per_group, (680, 300, 10, 10))
        self.assertEqual(counts.shortfall, 0)

    def test_counts_round_trip(self):
        """Test counts survive a trip through their allocation."""

        rng = np.random.default_rng(7)
        for _ in range(200):
            counts = GroupCounts(tuple(rng.integers(0, 500, size=4)))
            if counts.n == 0:
                continue
            alpha = allocation_from_counts(counts)

            self.assertEqual(counts_from_allocation(alpha, counts.n), counts)

    def test_without_withholds_one_group(self):
        """Test withholding a group zeroes only that group."""

        counts = GroupCounts((5, 6, 7))

        self.assertEqual(counts.without(1).n_per_group, (5, 0, 7))
        self.assertEqual(counts.without(1).n, 12)


class SampleFromAllocationTests(SimpleTestCase):
    """Test sampling a grouped training set."""

    def setUp(self):
        self.generators = [gaussian_generator(0.0), gaussian_generator(5.0)]

    def test_empty_sample(self):
        """Test n = 0 gives an empty sample."""

        sample = sample_from_allocation(
            self.generators, Allocation([0.5, 0.5]), 0, seed=1
        )

        self.assertEqual(len(sample), 0)

    def test_boundary_allocation(self):
        """Test alpha = (1, 0) draws every record from group 0."""

        sample = sample_from_allocation(
            self.generators, Allocation([1.0, 0.0]), 50, seed=1
        )

        self.assertEqual(sample.counts().n_per_group, (50, 0))

    def test_counts_match_allocation(self):
        """Test group counts equal counts_from_allocation."""

        alpha = Allocation([0.25, 0.75])
        sample = sample_from_allocation(self.generators, alpha, 401, seed=3)

        self.assertEqual(
            sample.counts().n_per_group,
            counts_from_allocation(alpha, 401).n_per_group,
        )

    def test_replay_is_identical(self):
        """Test a fixed seed reproduces the sample exactly."""

        alpha = Allocation([0.25, 0.75])
        first = sample_from_allocation(self.generators, alpha, 400, seed=9)
        second = sample_from_allocation(self.generators, alpha, 400, seed=9)

        np.testing.assert_array_equal(first.features, second.features)
        np.testing.assert_array_equal(first.labels, second.labels)
        np.testing.assert_array_equal(first.groups, second.groups)

    def test_group_draws_do_not_depend_on_other_counts(self):
        """Test group 0 records are the same whatever group 1 receives."""

        small = sample_from_allocation(
            self.generators, Allocation([0.5, 0.5]), 100, seed=4
        )
        large = sample_from_allocation(
            self.generators, Allocation([0.25, 0.75]), 200, seed=4
        )

        np.testing.assert_array_equal(
            small.labels[small.groups == 0], large.labels[large.groups == 0]
        )

    def test_generator_failure_names_group(self):
        """Test a failing generator raises an error naming its group."""

        def broken(count, rng):
            raise RuntimeError("disk on fire")

        with self.assertRaises(SamplingError) as ctx:
            sample_from_allocation(
                [self.generators[0], broken], Allocation([0.5, 0.5]), 10, 0
            )

        self.assertEqual(ctx.exception.group, 1)
        self.assertIn("group 1", str(ctx.exception))

    def test_grouped_sample_rejects_bad_group(self):
        """Test records must reference a known group."""

        with self.assertRaises(InvalidInputError):
            GroupedSample([[0.0]], [1.0], [2], n_groups=2)

    def test_generator_stream_is_per_group(self):
        """Test group g uses stream (seed, g)."""

        sample = sample_from_allocation(
            self.generators, Allocation([0.0, 1.0]), 3, seed=11
        )
        expected = make_generator(11, 1).standard_normal((3, 1))

        np.testing.assert_array_equal(sample.features, expected)
