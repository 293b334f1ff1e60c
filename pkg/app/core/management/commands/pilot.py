"""
Django command to run the pilot-sample allocation workflow.
"""

from core.exceptions import InvalidInputError
from core.management.base import AllocplanCommand
from harness.presets import PILOT, resolve_config
from harness.report import write_pilot_report_svg
from harness.serializers import PilotConfigSerializer
from harness.services import run_pilot


class Command(AllocplanCommand):
    help = "Fit a pilot sample, recommend minmax allocations, compare them."

    def add_command_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="Pilot config JSON.")
        parser.add_argument("--preset", help="Named pilot preset.")
        parser.add_argument(
            "--svg", action="store_true", help="Also write report.svg."
        )
        parser.add_argument("--output", default="pilot_report.json")

    def run(self, **options):
        if options["config"]:
            data = self.read_config(options["config"])
        elif options["preset"]:
            data = {}
        else:
            raise InvalidInputError("Give a config file or --preset.")
        if options["preset"]:
            data = {**data, "preset": options["preset"]}

        config = self.validate(
            PilotConfigSerializer, resolve_config(data, PILOT)
        )
        self.stdout.write(f"Running {config['trials']} pilot trials...")
        report, payload = run_pilot(config, seed=self.seed(options))
        if report.failed_trials:
            self.stdout.write(
                self.style.WARNING(f"{report.failed_trials} trials failed.")
            )

        self.write_json(options, options["output"], payload)
        if options["svg"]:
            path = write_pilot_report_svg(
                self.output_path(options, "report.svg"), report
            )
            self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))
