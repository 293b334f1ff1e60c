"""
Django command to run the leave-one-group-out interaction scan.
"""

from core.exceptions import InvalidInputError
from core.io import write_atomic
from core.management.base import AllocplanCommand
from harness.logo import logo_frame
from harness.presets import LOGO, resolve_config
from harness.serializers import LogoConfigSerializer
from harness.services import run_logo


class Command(AllocplanCommand):
    help = "Percent change of each group's loss when one group is withheld."

    def add_command_arguments(self, parser):
        parser.add_argument("config", nargs="?", help="LOGO config JSON.")
        parser.add_argument("--preset", help="Named LOGO preset.")
        parser.add_argument(
            "--format", choices=["csv", "json"], default="csv"
        )
        parser.add_argument("--output", default=None)

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
            LogoConfigSerializer, resolve_config(data, LOGO)
        )
        result, labels, payload = run_logo(config, seed=self.seed(options))

        if options["format"] == "json":
            self.write_json(
                options, options["output"] or "logo.json", payload
            )
            return

        text = logo_frame(result, labels).to_csv(
            float_format="%.17g", lineterminator="\n"
        )
        path = write_atomic(
            self.output_path(options, options["output"] or "logo_matrix.csv"),
            text,
        )
        self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))
