"""
Tests for the pilot report chart.
"""

from django.test import SimpleTestCase

from harness.pilot import AlphaRange, PilotReport, StrategySummary
from harness.report import pilot_report_svg


def sample_report():
    """Create a one-multiplier report with an undefined standard error."""
    summaries = tuple(
        StrategySummary(
            multiplier=1.0,
            n_new=1000,
            strategy=name,
            max_group_loss=0.1 + index / 100,
            max_group_loss_se=None if index == 2 else 0.01,
            population_loss=0.05,
            population_loss_se=0.005,
        )
        for index, name in enumerate(("minmax", "gamma", "equal"))
    )
    return PilotReport(
        summaries=summaries,
        alpha_ranges=(AlphaRange(1.0, 1000, 0.4, 0.6, 0),),
        trials=2,
        failed_trials=0,
    )


class PilotReportSvgTests(SimpleTestCase):
    """Test the SVG rendering."""

    def test_renders_svg(self):
        """Test the output is an SVG document."""

        svg = pilot_report_svg(sample_report())

        self.assertIn("<svg", svg)
        self.assertNotIn("<dc:date>", svg)

    def test_identical_reports_render_identically(self):
        """Test rendering is reproducible."""

        self.assertEqual(
            pilot_report_svg(sample_report()),
            pilot_report_svg(sample_report()),
        )
