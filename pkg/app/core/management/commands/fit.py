"""
Django command to fit per-group scaling laws to an observation CSV.
"""

from core.management.base import AllocplanCommand
from scaling.fitting import DEFAULT_STARTS
from scaling.io import read_observations
from scaling.serializers import FitReportSerializer
from scaling.services import run_fit


class Command(AllocplanCommand):
    help = "Fit loss ~ sigma2 n_g^-p + tau2 n^-q + delta per group."

    def add_command_arguments(self, parser):
        parser.add_argument(
            "observations", help="CSV with group,n_g,n,loss[,seed_tag]."
        )
        parser.add_argument("--group", type=int, default=None)
        parser.add_argument("--m-min", type=int, default=1)
        parser.add_argument("--starts", type=int, default=DEFAULT_STARTS)
        parser.add_argument("--output", default="fit.json")

    def run(self, **options):
        observations = read_observations(options["observations"])
        self.stdout.write(f"Fitting {len(observations)} observations...")

        payload = run_fit(
            observations,
            group=options["group"],
            m_min=options["m_min"],
            starts=options["starts"],
            seed=self.seed(options),
        )
        self.write_json(
            options, options["output"], FitReportSerializer(payload).data
        )
