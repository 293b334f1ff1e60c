"""
Tests for the estimator API.
"""

from django.test import SimpleTestCase
from django.urls import reverse

from rest_framework import status
from rest_framework.test import APIClient

ANALYZE_URL = reverse("estimator:analyze")


class EstimatorApiTests(SimpleTestCase):
    """Test the estimator analysis endpoint."""

    def setUp(self):
        self.client = APIClient()

    def test_explicit_weights(self):
        """Test explicit weights report the variance before and after."""

        payload = {
            "alpha": [0.25, 0.75],
            "weights": "2,1",
            "means": [0.3, 0.1],
            "variances": [1.0, 1.0],
            "n": 100,
        }

        res = self.client.post(ANALYZE_URL, payload, format="json")

        self.assertEqual(res.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(res.data["variance"], 0.0175)
        self.assertAlmostEqual(res.data["variance_after"], 0.015625)
        self.assertAlmostEqual(res.data["c"], 1.25)
        self.assertIsNone(res.data["mc"])

    def test_importance_weights_with_monte_carlo(self):
        """Test IW weights and a Monte Carlo summary."""

        payload = {
            "gamma": [0.5, 0.5],
            "alpha": [0.5, 0.5],
            "weights": "iw",
            "means": [0.2, 0.4],
            "variances": [0.5, 0.5],
            "n": 50,
            "mc_trials": 200,
            "seed": 3,
        }

        res = self.client.post(ANALYZE_URL, payload, format="json")

        self.assertEqual(res.status_code, status.HTTP_200_OK)
        self.assertEqual(res.data["weights"], [1.0, 1.0])
        self.assertEqual(res.data["mc"]["trials"], 200)

    def test_iw_without_gamma_rejected(self):
        """Test importance weights need gamma."""

        payload = {
            "alpha": [0.5, 0.5],
            "means": [0.2, 0.4],
            "variances": [0.5, 0.5],
            "n": 50,
        }

        res = self.client.post(ANALYZE_URL, payload, format="json")

        self.assertEqual(res.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("gamma", res.data)

    def test_zero_weighted_sum_rejected(self):
        """Test weights vanishing on every sampled group are rejected."""

        payload = {
            "alpha": [1.0, 0.0],
            "weights": "0,1",
            "means": [0.2, 0.4],
            "variances": [0.5, 0.5],
            "n": 50,
        }

        res = self.client.post(ANALYZE_URL, payload, format="json")

        self.assertEqual(res.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("must be positive", res.data["detail"])

    def test_zero_variance_group_reports_moments(self):
        """Test a group without loss spread nulls only the optimal pair."""

        payload = {
            "alpha": [0.25, 0.75],
            "weights": "2,1",
            "means": [0.3, 0.1],
            "variances": [0.0, 1.0],
            "n": 100,
        }

        with self.assertLogs("estimator.services", level="WARNING"):
            res = self.client.post(ANALYZE_URL, payload, format="json")

        self.assertEqual(res.status_code, status.HTTP_200_OK)
        self.assertAlmostEqual(res.data["mean"], 0.225)
        self.assertAlmostEqual(res.data["variance"], 0.0075)
        for field in ("w_star", "alpha_star", "mean_after",
                      "variance_after", "strict_improvement_expected"):
            self.assertIsNone(res.data[field])
