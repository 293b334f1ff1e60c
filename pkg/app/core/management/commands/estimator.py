"""
Django command to analyze a group-weighted loss estimator.
"""

from core.management.base import AllocplanCommand
from estimator.serializers import (
    EstimatorRequestSerializer,
    EstimatorResultSerializer,
)
from estimator.services import run_estimator


class Command(AllocplanCommand):
    help = "Mean, variance and variance-optimal (w*, alpha*) of an estimator."

    def add_command_arguments(self, parser):
        parser.add_argument("--gamma")
        parser.add_argument("--alpha", required=True)
        parser.add_argument(
            "--weights", default="iw",
            help="iw, erm, gdro or comma separated per-group weights.",
        )
        parser.add_argument("--means", required=True)
        parser.add_argument("--variances", required=True)
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--group-losses")
        parser.add_argument("--mc-trials", type=int, default=None)
        parser.add_argument("--output", default="estimator.json")

    def run(self, **options):
        data = {
            key: options[key]
            for key in (
                "gamma", "alpha", "weights", "means", "variances", "n",
                "group_losses", "mc_trials",
            )
            if options[key] is not None
        }
        result = run_estimator(
            self.validate(EstimatorRequestSerializer, data),
            seed=self.seed(options),
        )
        self.write_json(
            options, options["output"], EstimatorResultSerializer(result).data
        )
