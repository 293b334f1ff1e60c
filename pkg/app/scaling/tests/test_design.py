"""
Tests for the subsetting designs.
"""

from django.test import SimpleTestCase

from core.domain import GroupCounts
from core.exceptions import InvalidInputError
from scaling.design import (
    FIXED_N_ALPHAS,
    SkipRule,
    design_subset_grid,
    fixed_n_design,
    replicate_design,
)


class SubsetGridTests(SimpleTestCase):
    """Test the ratio x fraction subset grid."""

    def test_default_grid_size(self):
        """Test the default lists give 99 distinct pairs."""

        design = design_subset_grid((10000, 10000))

        self.assertEqual(len(design), 99)
        self.assertEqual(len(set(design)), 99)

    def test_single_pair(self):
        """Test one ratio and one fraction give a single pair."""

        design = design_subset_grid((100, 100), ratios=[1.0],
                                    fractions=[1.0])

        self.assertEqual(design, [GroupCounts((100, 100))])

    def test_roles_are_symmetric(self):
        """Test each pair appears with the groups swapped."""

        design = set(design_subset_grid((5000, 5000)))

        for counts in design:
            self.assertIn(GroupCounts((counts[1], counts[0])), design)

    def test_skip_rule(self):
        """Test the smallest fraction is skipped for unbalanced ratios."""

        skipped = design_subset_grid((10000, 10000), ratios=[0.125])
        kept = design_subset_grid(
            (10000, 10000), ratios=[0.125], skip_rules=()
        )

        self.assertNotIn(GroupCounts((100, 12)), skipped)
        self.assertIn(GroupCounts((100, 12)), kept)
        self.assertTrue(SkipRule(0.01).applies(0.5, 0.01))
        self.assertFalse(SkipRule(0.01).applies(1.0, 0.01))

    def test_unequal_group_sizes(self):
        """Test the minority cap limits the majority subset."""

        design = design_subset_grid((100, 10000), ratios=[0.5],
                                    fractions=[1.0])

        self.assertEqual(
            design, [GroupCounts((100, 200)), GroupCounts((100, 50))]
        )

    def test_empty_design_rejected(self):
        """Test a design emptied by skip rules is rejected."""

        with self.assertRaises(InvalidInputError):
            design_subset_grid((10000, 10000), ratios=[0.5],
                               fractions=[0.01])

    def test_rejects_fraction_outside_unit_interval(self):
        """Test fractions must lie in (0, 1]."""

        with self.assertRaises(InvalidInputError):
            design_subset_grid((100, 100), fractions=[1.5])


class FixedNTests(SimpleTestCase):
    """Test the fixed-n and replicated designs."""

    def test_constant_total(self):
        """Test every point sums to n and spans the allocation grid."""

        design = fixed_n_design(10000)

        self.assertEqual(len(design), len(FIXED_N_ALPHAS))
        self.assertTrue(all(counts.n == 10000 for counts in design))
        self.assertEqual(design[0], GroupCounts((0, 10000)))
        self.assertEqual(design[-1], GroupCounts((10000, 0)))

    def test_replicates(self):
        """Test each point repeats once per seed tag."""

        points = replicate_design(fixed_n_design(100, [0.5]), 3)

        self.assertEqual([point.seed_tag for point in points], [0, 1, 2])
        self.assertTrue(
            all(point.counts == GroupCounts((50, 50)) for point in points)
        )
