"""
Django command to compute an optimal allocation.
"""

from allocation.serializers import (
    AllocationResultSerializer,
    OptimizeRequestSerializer,
)
from allocation.services import run_optimize
from core.management.base import AllocplanCommand
from scaling.services import model_from_fit_report


class Command(AllocplanCommand):
    help = "Allocation minimizing population or worst-group forecast risk."

    def add_command_arguments(self, parser):
        parser.add_argument("--gamma", help="Comma separated prevalences.")
        parser.add_argument("--sigma2", help="Comma separated sigma2.")
        parser.add_argument("--p", help="Shared exponent or one per group.")
        parser.add_argument("--model", help="fit.json from the fit command.")
        parser.add_argument("--preset", help="Published dataset fit.")
        parser.add_argument(
            "--objective", choices=["population", "minmax"],
            default="population",
        )
        parser.add_argument("--n", type=float, default=None)
        parser.add_argument("--output", default="allocation.json")

    def run(self, **options):
        data = {"objective": options["objective"]}
        for key in ("gamma", "sigma2", "p", "preset", "n"):
            if options[key] is not None:
                data[key] = options[key]
        if options["model"]:
            model = model_from_fit_report(self.read_config(options["model"]))
            data["groups"] = [
                scaling.as_dict() for scaling in model.per_group
            ]

        result = run_optimize(self.validate(OptimizeRequestSerializer, data))
        self.stdout.write(
            "alpha* = " + ", ".join(f"{a:.6g}" for a in result["alpha_star"])
        )
        self.write_json(
            options, options["output"],
            AllocationResultSerializer(result).data,
        )
