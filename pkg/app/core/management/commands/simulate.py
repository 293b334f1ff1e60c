"""
Django command to run the synthetic oracles.

linear: empirical OLS group risk against its analytic prediction (risks.json).
powerlaw: noisy scaling-law observations for the fit command (CSV).
"""

from core.domain import GroupCounts
from core.exceptions import InvalidInputError
from core.management.base import AllocplanCommand
from allocation.forecast import GroupScaling, ScalingModel
from scaling.design import (
    design_subset_grid,
    fixed_n_design,
    replicate_design,
)
from scaling.io import write_observations
from scaling.presets import load_dataset_preset
from synthetic.linear import (
    LinearGroupModel,
    empirical_group_risk,
    predict_ols_group_risk,
)
from synthetic.powerlaw import simulate_design

LINEAR = "linear"
POWERLAW = "powerlaw"
GRID_REPLICATES = 10


def _floats(value, name):
    if value is None:
        return None
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise InvalidInputError(f"--{name} expects comma separated numbers.")


def _counts(value):
    try:
        return GroupCounts(tuple(
            int(item) for item in value.split(",") if item.strip()
        ))
    except ValueError:
        raise InvalidInputError("--counts expects comma separated integers.")


def _per_group(values, name, k, default):
    if values is None:
        return [default] * k
    if len(values) == 1:
        return values * k
    if len(values) != k:
        raise InvalidInputError(f"--{name} needs 1 or {k} entries.")
    return values


class Command(AllocplanCommand):
    help = "Simulate the linear or power-law oracle."

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--model", choices=[LINEAR, POWERLAW], required=True
        )
        parser.add_argument("--counts", help="Comma separated n_g per group.")
        parser.add_argument(
            "--trials", type=int, default=None,
            help="Monte Carlo trials (linear) or replicates (powerlaw).",
        )
        parser.add_argument("--noise-sd", type=float, default=None)
        parser.add_argument("--output", default=None)

        linear = parser.add_argument_group("linear model")
        linear.add_argument("--beta", help="Shared coefficients.")
        linear.add_argument(
            "--dim", type=int, default=None,
            help="Feature dimension with beta = 1 (instead of --beta).",
        )
        linear.add_argument("--intercepts")
        linear.add_argument("--eval-size", type=int, default=2000)

        powerlaw = parser.add_argument_group("power-law model")
        powerlaw.add_argument("--preset", help="Published dataset fit.")
        for name in ("sigma2", "p", "tau2", "q", "delta"):
            powerlaw.add_argument(f"--{name}")
        powerlaw.add_argument(
            "--design", choices=["grid"], default=None,
            help="Full subset grid plus fixed-n grid instead of --counts.",
        )
        powerlaw.add_argument("--n-max", type=int, default=10000)

    def run(self, **options):
        trials = options["trials"]
        if trials is not None and trials < 1:
            raise InvalidInputError("--trials must be at least 1.")

        if options["model"] == LINEAR:
            self.run_linear(options)
        else:
            self.run_powerlaw(options)

    def run_linear(self, options):
        if not options["counts"]:
            raise InvalidInputError("--counts is required for linear.")
        counts = _counts(options["counts"])
        k = counts.n_groups

        beta = _floats(options["beta"], "beta")
        if beta is None:
            beta = [1.0] * (options["dim"] or 0)
        elif options["dim"] is not None and options["dim"] != len(beta):
            raise InvalidInputError("--dim disagrees with --beta.")
        noise_sd = 1.0 if options["noise_sd"] is None else options["noise_sd"]
        if noise_sd <= 0:
            raise InvalidInputError("--noise-sd must be positive.")

        model = LinearGroupModel(
            beta=beta,
            intercepts=_per_group(
                _floats(options["intercepts"], "intercepts"),
                "intercepts", k, 0.0,
            ),
            noise_sd=noise_sd,
        )
        predictions = [
            predict_ols_group_risk(model, counts[group], counts.n)
            for group in range(k)
        ]
        trials = options["trials"] or 200
        self.stdout.write(f"Simulating {trials} OLS trials...")
        empirical = empirical_group_risk(
            model, counts, options["eval_size"], trials, self.seed(options)
        )

        self.write_json(options, options["output"] or "risks.json", {
            "model": LINEAR,
            "dim": model.dim,
            "noise_sd": model.noise_sd,
            "n": counts.n,
            "trials": trials,
            "eval_size": options["eval_size"],
            "groups": [
                {
                    "group": group,
                    "n_g": counts[group],
                    "empirical": float(empirical[group]),
                    "predicted": prediction.per_group_risk,
                    "ratio": float(empirical[group])
                    / prediction.per_group_risk,
                    "intercept_term": prediction.intercept_term,
                    "shared_term": prediction.shared_term,
                    "mean_term_bound": prediction.mean_term_bound,
                }
                for group, prediction in enumerate(predictions)
            ],
        })

    def powerlaw_model(self, options):
        if options["preset"]:
            return load_dataset_preset(options["preset"]).model
        sigma2 = _floats(options["sigma2"], "sigma2")
        p = _floats(options["p"], "p")
        if sigma2 is None or p is None:
            raise InvalidInputError(
                "powerlaw needs --preset or --sigma2 and --p."
            )
        k = len(sigma2)
        columns = {
            "p": _per_group(p, "p", k, None),
            "tau2": _per_group(_floats(options["tau2"], "tau2"),
                               "tau2", k, 0.0),
            "q": _per_group(_floats(options["q"], "q"), "q", k, 1.0),
            "delta": _per_group(_floats(options["delta"], "delta"),
                                "delta", k, 0.0),
        }
        return ScalingModel(tuple(
            GroupScaling(
                sigma2=sigma2[group],
                **{name: values[group] for name, values in columns.items()},
            )
            for group in range(k)
        ))

    def run_powerlaw(self, options):
        model = self.powerlaw_model(options)
        noise_sd = options["noise_sd"] or 0.0
        if noise_sd < 0:
            raise InvalidInputError("--noise-sd must be non-negative.")

        if options["design"]:
            if model.n_groups != 2:
                raise InvalidInputError("--design grid needs two groups.")
            n_max = options["n_max"]
            design = design_subset_grid((n_max, n_max))
            design += fixed_n_design(n_max)
            replicates = options["trials"] or GRID_REPLICATES
        elif options["counts"]:
            design = [_counts(options["counts"])]
            replicates = options["trials"] or 1
        else:
            raise InvalidInputError("powerlaw needs --counts or --design.")

        if any(counts.n_groups != model.n_groups for counts in design):
            raise InvalidInputError("--counts disagrees with the model.")

        observations = simulate_design(
            model,
            replicate_design(design, replicates),
            noise_sd,
            self.seed(options),
        )
        path = write_observations(
            self.output_path(
                options, options["output"] or "observations.csv"
            ),
            observations,
        )
        self.stdout.write(self.style.SUCCESS(
            f"Wrote {len(observations)} observations to {path}"
        ))
