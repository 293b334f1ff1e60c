"""
Tests for the pilot-sample workflow and grid baselines.
"""

import math
from unittest.mock import patch

import numpy as np

from django.test import SimpleTestCase

from core.domain import GroupCounts, PopulationSpec
from core.exceptions import FitError, InvalidInputError
from allocation.forecast import ScalingModel
from harness.evaluators import PowerLawEvaluator
from harness.pilot import (
    EQUAL,
    GAMMA,
    MINMAX,
    PilotConfig,
    alpha_grid,
    grid_baseline,
    mean_and_se,
    run_pilot_workflow,
)
from harness.presets import PILOT, resolve_config
from harness.serializers import PilotConfigSerializer
from harness.services import pilot_config, run_pilot


def preset_data(name, **overrides):
    """Validated pilot config of a preset with overrides applied."""
    serializer = PilotConfigSerializer(
        data=resolve_config({"preset": name, **overrides}, PILOT)
    )
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def small_config(**kwargs):
    """Create a quick two-group pilot config."""
    params = {
        "pilot_counts": GroupCounts((400, 400)),
        "population": PopulationSpec([0.3, 0.7]),
        "n_new_multipliers": (1.0,),
        "trials": 2,
        "ratios": (0.25, 0.5, 1.0),
        "fractions": (0.25, 0.5, 0.75, 1.0),
        "starts": 2,
    }
    params.update(kwargs)
    return PilotConfig(**params)


class MeanAndSeTests(SimpleTestCase):
    """Test the aggregate helper."""

    def test_standard_error(self):
        """Test the standard error uses the sample deviation."""

        mean, se = mean_and_se([1.0, 3.0])

        self.assertEqual(mean, 2.0)
        self.assertAlmostEqual(se, math.sqrt(2.0) / math.sqrt(2.0))

    def test_single_value_has_no_standard_error(self):
        """Test one value leaves the standard error undefined."""

        self.assertEqual(mean_and_se([1.5]), (1.5, None))
        self.assertEqual(mean_and_se([]), (None, None))


class PilotWorkflowTests(SimpleTestCase):
    """Test the pilot workflow end to end."""

    def test_asymmetric_minmax_beats_prevalence(self):
        """Test minmax cuts the worst group loss at small population cost."""

        report, _ = run_pilot(preset_data("synthetic-asymmetric"))

        self.assertEqual(report.failed_trials, 0)
        for multiplier in (1.0, 2.0, 4.0, 8.0):
            minmax = report.summary(multiplier, MINMAX)
            baselines = [
                report.summary(multiplier, name) for name in (GAMMA, EQUAL)
            ]
            best = min(baselines, key=lambda item: item.population_loss)

            for baseline in baselines:
                self.assertLess(
                    minmax.max_group_loss, baseline.max_group_loss
                )
            se = math.hypot(minmax.population_loss_se,
                            best.population_loss_se)
            self.assertLessEqual(
                minmax.population_loss, best.population_loss + 2 * se
            )

        for alpha_range in report.alpha_ranges:
            self.assertGreater(alpha_range.low, 0.7)
            self.assertLess(alpha_range.high, 0.9)
            self.assertEqual(alpha_range.clipped_trials, 0)

    def test_symmetric_recommends_even_split(self):
        """Test interchangeable groups get about half the samples."""

        report, payload = run_pilot(
            preset_data("synthetic-symmetric", trials=3, multipliers=[1])
        )

        alpha_range = report.alpha_ranges[0]
        self.assertGreaterEqual(alpha_range.low, 0.4)
        self.assertLessEqual(alpha_range.high, 0.6)
        self.assertEqual(payload["trials"], 3)
        self.assertEqual(
            [item["strategy"] for item in payload["summaries"]],
            [MINMAX, GAMMA, EQUAL],
        )

    def test_single_trial_has_no_standard_errors(self):
        """Test trials = 1 reports means without standard errors."""

        config, evaluator = pilot_config(preset_data(
            "synthetic-asymmetric", trials=1, multipliers=[1], replicates=1,
        ))

        report = run_pilot_workflow(config, evaluator)

        for item in report.summaries:
            self.assertIsNotNone(item.max_group_loss)
            self.assertIsNone(item.max_group_loss_se)
            self.assertIsNone(item.population_loss_se)

    def test_failed_trials_are_counted(self):
        """Test trials whose fit fails are excluded and counted."""

        model = ScalingModel.shared_exponent([2.0, 1.0], 1.0)
        evaluator = PowerLawEvaluator(model, noise_sd=0.001)

        with patch(
            "harness.pilot.fit_group_scaling",
            side_effect=FitError("too few observations"),
        ):
            with self.assertLogs("harness.pilot", level="WARNING"):
                report = run_pilot_workflow(small_config(), evaluator)

        self.assertEqual(report.failed_trials, 2)
        self.assertIsNone(report.summaries[0].max_group_loss)
        self.assertIsNone(report.alpha_ranges[0].low)

    def test_reproducible(self):
        """Test the same seed gives identical summaries."""

        model = ScalingModel.shared_exponent([2.0, 1.0], 1.0)
        evaluator = PowerLawEvaluator(model, noise_sd=0.001)

        first = run_pilot_workflow(small_config(seed=5), evaluator)
        second = run_pilot_workflow(small_config(seed=5), evaluator)

        self.assertEqual(first.summaries, second.summaries)
        self.assertEqual(first.alpha_ranges, second.alpha_ranges)

    def test_custom_baseline_name(self):
        """Test explicit baseline allocations are named by alpha_A."""

        config, _ = pilot_config(preset_data(
            "synthetic-asymmetric", baselines=["gamma", [0.25, 0.75]],
        ))

        self.assertEqual(config.strategies, (MINMAX, GAMMA, "alpha_a=0.25"))

    def test_rejects_three_groups(self):
        """Test the workflow needs two groups."""

        with self.assertRaises(InvalidInputError):
            small_config(pilot_counts=GroupCounts((10, 10, 10)))


class GridBaselineTests(SimpleTestCase):
    """Test the exhaustive allocation grid."""

    def test_matches_minmax(self):
        """Test the grid optimum sits within one cell of 0.8."""

        evaluator = PowerLawEvaluator(
            ScalingModel.shared_exponent([4.0, 1.0], 1.0)
        )

        result = grid_baseline(evaluator, 1000, 0.01, trials=1, seed=0)

        self.assertAlmostEqual(result.alpha_grid_star, 0.8, delta=0.01)
        self.assertTrue(result.unsampled[0])
        self.assertTrue(result.unsampled[-1])
        self.assertFalse(result.unsampled[1:-1].any())

    def test_forecast_curve(self):
        """Test the power-law forecast is reported next to the losses."""

        evaluator = PowerLawEvaluator(
            ScalingModel.shared_exponent([4.0, 1.0], 1.0)
        )

        result = grid_baseline(
            evaluator, 1000, 0.01, trials=1, seed=0,
            population=PopulationSpec([0.5, 0.5]),
        )

        forecast = result.forecast_max_group_loss
        self.assertTrue(np.isinf(forecast[0]))
        self.assertTrue(np.isinf(forecast[-1]))
        self.assertEqual(int(np.argmin(forecast)), 80)
        self.assertAlmostEqual(forecast[80], 0.005)
        self.assertEqual(len(result.forecast_population_loss), 101)

    def test_no_forecast_without_population(self):
        """Test the forecast curve needs a population."""

        evaluator = PowerLawEvaluator(
            ScalingModel.shared_exponent([1.0, 1.0], 1.0)
        )

        result = grid_baseline(evaluator, 100, 0.5, trials=1, seed=0)

        self.assertIsNone(result.forecast_max_group_loss)
        self.assertIsNone(result.forecast_population_loss)

    def test_coarse_grid(self):
        """Test resolution 0.5 evaluates three allocations."""

        evaluator = PowerLawEvaluator(
            ScalingModel.shared_exponent([1.0, 1.0], 1.0)
        )

        result = grid_baseline(
            evaluator, 100, 0.5, trials=2, seed=0,
            population=PopulationSpec([0.5, 0.5]),
        )

        self.assertEqual(result.alphas.tolist(), [0.0, 0.5, 1.0])
        self.assertEqual(result.alpha_grid_star, 0.5)
        self.assertEqual(len(result.population_loss), 3)

    def test_rejects_bad_resolution(self):
        """Test the resolution must lie in (0, 0.5]."""

        with self.assertRaises(InvalidInputError):
            alpha_grid(0.75)
