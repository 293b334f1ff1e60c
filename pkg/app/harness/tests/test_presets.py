"""
Tests for stored workflow presets and evaluator configs.
"""

import numpy as np

from django.test import SimpleTestCase

from core.domain import GroupCounts
from core.exceptions import EvaluatorError, InvalidInputError
from core.streams import Stream
from harness.evaluators import (
    LinearGroupEvaluator,
    LossEvaluator,
    PowerLawEvaluator,
    ShiftedLinearEvaluator,
    evaluator_from_config,
)
from harness.presets import (
    LOGO,
    PILOT,
    load_preset,
    preset_names,
    resolve_config,
)
from harness.serializers import EvaluatorSerializer


class FailingEvaluator(LossEvaluator):
    """Evaluator that always raises."""

    n_groups = 2

    def losses(self, counts, stream):
        raise RuntimeError("training diverged")


def evaluator_data(**data):
    """Validated evaluator config."""
    serializer = EvaluatorSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


class PresetTests(SimpleTestCase):
    """Test preset lookup and merging."""

    def test_names_by_workflow(self):
        """Test presets are listed per workflow."""

        self.assertIn("synthetic-asymmetric", preset_names(PILOT))
        self.assertIn("goodreads-pilot", preset_names(PILOT))
        self.assertIn("linear-shift", preset_names(LOGO))
        self.assertNotIn("linear-shift", preset_names(PILOT))

    def test_unknown_preset(self):
        """Test an unknown name lists the choices."""

        with self.assertRaisesRegex(InvalidInputError, "Unknown preset"):
            load_preset("nope", PILOT)

    def test_wrong_workflow(self):
        """Test a LOGO preset cannot configure a pilot run."""

        with self.assertRaisesRegex(InvalidInputError, "logo preset"):
            load_preset("linear-shift", PILOT)

    def test_explicit_keys_override(self):
        """Test keys next to the preset replace the stored values."""

        config = resolve_config(
            {"preset": "synthetic-symmetric", "trials": 3}, PILOT
        )

        self.assertEqual(config["trials"], 3)
        self.assertEqual(config["gamma"], [0.5, 0.5])
        self.assertNotIn("preset", config)

    def test_config_must_be_object(self):
        """Test non-object configs are rejected."""

        with self.assertRaises(InvalidInputError):
            resolve_config([1, 2], PILOT)


class EvaluatorTests(SimpleTestCase):
    """Test evaluator construction and validation."""

    def test_powerlaw_from_dataset(self):
        """Test a published dataset fit builds a power-law evaluator."""

        evaluator = evaluator_from_config(
            evaluator_data(kind="powerlaw", dataset="goodreads")
        )

        self.assertIsInstance(evaluator, PowerLawEvaluator)
        self.assertEqual(evaluator.n_groups, 2)

    def test_linear(self):
        """Test the linear evaluator returns one loss per group."""

        evaluator = evaluator_from_config(evaluator_data(
            kind="linear", beta=[1.0, 2.0], intercepts=[0.0, 1.0],
            noise_sd=0.5, eval_size=200,
        ))

        losses = evaluator.evaluate(GroupCounts((50, 50)), Stream(0))

        self.assertIsInstance(evaluator, LinearGroupEvaluator)
        self.assertEqual(losses.shape, (2,))
        self.assertTrue(np.all(losses > 0))

    def test_shifted_linear(self):
        """Test per-group coefficient rows build a shifted evaluator."""

        evaluator = evaluator_from_config(evaluator_data(
            kind="shifted-linear", group_betas=[[1.0], [-1.0]],
            intercepts=[0.0, 0.0], noise_sd=0.1,
        ))

        self.assertIsInstance(evaluator, ShiftedLinearEvaluator)
        self.assertEqual(evaluator.model.group_betas.tolist(),
                         [[1.0], [-1.0]])

    def test_linear_needs_noise(self):
        """Test linear evaluators need a positive noise level."""

        serializer = EvaluatorSerializer(data={
            "kind": "linear", "beta": [1.0], "intercepts": [0.0],
        })

        self.assertFalse(serializer.is_valid())
        self.assertIn("noise_sd", serializer.errors)

    def test_powerlaw_needs_one_source(self):
        """Test powerlaw takes exactly one of groups or dataset."""

        serializer = EvaluatorSerializer(data={"kind": "powerlaw"})

        self.assertFalse(serializer.is_valid())

    def test_failures_name_counts(self):
        """Test evaluator failures are wrapped with the counts."""

        with self.assertRaisesRegex(EvaluatorError, r"\(3, 4\)"):
            FailingEvaluator().evaluate(GroupCounts((3, 4)), Stream(0))

    def test_wrong_group_count(self):
        """Test counts must match the evaluator's groups."""

        with self.assertRaises(InvalidInputError):
            FailingEvaluator().evaluate(GroupCounts((3,)), Stream(0))
