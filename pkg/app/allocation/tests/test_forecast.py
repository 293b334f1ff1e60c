"""
Tests for the power-law risk forecasts.
"""

import math

import numpy as np

from django.test import SimpleTestCase

from core.domain import Allocation, PopulationSpec
from core.exceptions import InvalidInputError, UnboundedRiskError
from allocation.forecast import (
    GroupScaling,
    ScalingModel,
    forecast_group_risk,
    forecast_population_risk,
    population_objective,
    population_risk_curve,
)


def cifar_animal_model():
    """Create a one-group model with the CIFAR-4 animal parameters."""
    return ScalingModel((
        GroupScaling(sigma2=1.9 ** 2, p=0.47, tau2=0.0, delta=1.1e-3),
    ))


class GroupScalingTests(SimpleTestCase):
    """Test parameter validation."""

    def test_rejects_negative_sigma2(self):
        """Test negative constants are rejected."""

        with self.assertRaises(InvalidInputError):
            GroupScaling(sigma2=-1.0, p=1.0)

    def test_rejects_exponent_above_two(self):
        """Test exponents are boxed to [0, 2]."""

        with self.assertRaises(InvalidInputError):
            GroupScaling(sigma2=1.0, p=2.5)

    def test_rejects_zero_m_min(self):
        """Test m_min must be at least one."""

        with self.assertRaises(InvalidInputError):
            GroupScaling(sigma2=1.0, p=1.0, m_min=0)


class ForecastGroupRiskTests(SimpleTestCase):
    """Test the per-group forecast."""

    def test_cifar_animal_row(self):
        """Test the published animal row at n_g = 1000."""

        risk = forecast_group_risk(cifar_animal_model(), 0, 1000, 1000)

        self.assertAlmostEqual(risk, 0.1416, places=4)
        self.assertAlmostEqual(
            risk, 3.61 * 1000 ** -0.47 + 1.1e-3, places=12
        )

    def test_constant_model(self):
        """Test a model with only the floor term is constant."""

        model = ScalingModel((GroupScaling(sigma2=0.0, p=1.0, delta=0.3),))

        for n_g, n in ((1, 1), (10, 500), (1e6, 1e7)):
            self.assertEqual(forecast_group_risk(model, 0, n_g, n), 0.3)

    def test_doubling_halves_forecast(self):
        """Test p = 1 without other terms halves the risk per doubling."""

        model = ScalingModel.shared_exponent([2.0], 1.0)

        small = forecast_group_risk(model, 0, 100, 1000)
        large = forecast_group_risk(model, 0, 200, 1000)

        self.assertAlmostEqual(large, small / 2, places=15)

    def test_strictly_decreasing(self):
        """Test the forecast falls in n_g and, with tau2 > 0, in n."""

        model = ScalingModel((
            GroupScaling(sigma2=1.0, p=0.5, tau2=0.5, q=0.7, delta=0.01),
        ))

        by_n_g = [forecast_group_risk(model, 0, m, 5000) for m in
                  (10, 100, 1000, 5000)]
        by_n = [forecast_group_risk(model, 0, 10, n) for n in
                (10, 100, 1000, 5000)]

        self.assertTrue(np.all(np.diff(by_n_g) < 0))
        self.assertTrue(np.all(np.diff(by_n) < 0))

    def test_zero_samples_unbounded(self):
        """Test n_g = 0 with sigma2 > 0 reports unbounded risk."""

        with self.assertRaisesRegex(UnboundedRiskError, "unbounded risk"):
            forecast_group_risk(cifar_animal_model(), 0, 0, 1000)

    def test_n_g_above_n_rejected(self):
        """Test n_g may not exceed n."""

        with self.assertRaises(InvalidInputError):
            forecast_group_risk(cifar_animal_model(), 0, 2000, 1000)

    def test_extrapolation_is_logged(self):
        """Test forecasts below m_min log a debug message."""

        model = ScalingModel((GroupScaling(sigma2=1.0, p=1.0, m_min=250),))

        with self.assertLogs("allocation.forecast", level="DEBUG") as logs:
            forecast_group_risk(model, 0, 100, 1000)

        self.assertIn("extrapolates", logs.output[0])


class ForecastPopulationRiskTests(SimpleTestCase):
    """Test the population-level forecast."""

    def test_single_group(self):
        """Test one group equals its group forecast."""

        model = cifar_animal_model()
        risk = forecast_population_risk(
            model, PopulationSpec([1.0]), Allocation([1.0]), 1000
        )

        self.assertEqual(risk, forecast_group_risk(model, 0, 1000, 1000))

    def test_symmetric_groups(self):
        """Test symmetric groups at the even split match either group."""

        model = ScalingModel.shared_exponent([1.5, 1.5], 0.8)
        risk = forecast_population_risk(
            model, PopulationSpec([0.5, 0.5]), Allocation([0.5, 0.5]), 400
        )

        self.assertAlmostEqual(
            risk, forecast_group_risk(model, 0, 200, 400), places=15
        )

    def test_matches_weighted_loop(self):
        """Test the forecast equals a direct weighted sum."""

        model = ScalingModel((
            GroupScaling(sigma2=2.0, p=0.6, tau2=0.3, q=0.4, delta=0.02),
            GroupScaling(sigma2=0.5, p=1.2, tau2=0.1, q=0.9, delta=0.05),
        ))
        gamma = [0.3, 0.7]
        alpha = [0.45, 0.55]
        n = 3000
        expected = 0.0
        for g in range(2):
            s = model[g]
            expected += gamma[g] * (
                s.sigma2 * (alpha[g] * n) ** -s.p
                + s.tau2 * n ** -s.q
                + s.delta
            )

        risk = forecast_population_risk(
            model, PopulationSpec(gamma), Allocation(alpha), n
        )

        self.assertAlmostEqual(risk, expected, places=14)

    def test_unsampled_group_is_infinite(self):
        """Test alpha_g = 0 with sigma2 > 0 reports infinity."""

        model = ScalingModel.shared_exponent([1.0, 1.0], 1.0)
        risk = forecast_population_risk(
            model, PopulationSpec([0.5, 0.5]), Allocation([1.0, 0.0]), 100
        )

        self.assertEqual(risk, math.inf)

    def test_objective_matches_scalar_forecast(self):
        """Test the vectorized objective agrees with the scalar one."""

        model = ScalingModel.shared_exponent([1.0, 3.0, 0.5], 0.7)
        pop = PopulationSpec([0.2, 0.5, 0.3])
        alphas = np.array([[0.2, 0.5, 0.3], [0.1, 0.1, 0.8]])

        values = population_objective(model, pop, 900)(alphas)

        for row, value in zip(alphas, values):
            self.assertAlmostEqual(
                value,
                forecast_population_risk(model, pop, Allocation(row), 900),
                places=12,
            )

    def test_risk_curve_boundaries(self):
        """Test risk curves carry inf where a group is unsampled."""

        model = ScalingModel.shared_exponent([1.0, 1.0], 1.0)
        group_risks, population = population_risk_curve(
            model, PopulationSpec([0.5, 0.5]), 100, [0.0, 0.5, 1.0]
        )

        self.assertEqual(group_risks.shape, (3, 2))
        self.assertEqual(group_risks[0, 0], math.inf)
        self.assertEqual(group_risks[2, 1], math.inf)
        self.assertAlmostEqual(population[1], 0.02, places=15)
