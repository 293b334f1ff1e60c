"""
Shared behaviour of the allocplan management commands.
"""

import json
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from rest_framework.exceptions import ValidationError

from core.exceptions import AllocplanError, InvalidInputError
from core.io import read_json, write_json
from core.serializers import error_message

INPUT_ERROR = 2


class AllocplanCommand(BaseCommand):
    """Base command: --seed, --output-dir and exit code 2 for bad input.

    Subclasses implement add_command_arguments() and run(**options).
    """

    def add_arguments(self, parser):
        self.add_command_arguments(parser)
        parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="Seed for every random stream (default: ALLOCPLAN_SEED).",
        )
        parser.add_argument(
            "--output-dir",
            default=None,
            help="Directory for output files (default: ALLOCPLAN_OUTPUT_DIR).",
        )

    def add_command_arguments(self, parser):
        pass

    def run(self, **options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except ValidationError as exc:
            raise CommandError(
                error_message(exc.detail), returncode=INPUT_ERROR
            )
        except AllocplanError as exc:
            raise CommandError(str(exc), returncode=INPUT_ERROR)

    def seed(self, options):
        seed = options.get("seed")
        if seed is None:
            seed = settings.ALLOCPLAN_SEED
        if seed < 0:
            raise InvalidInputError("--seed must be non-negative.")
        return seed

    def output_path(self, options, name):
        directory = options.get("output_dir") or settings.ALLOCPLAN_OUTPUT_DIR
        return Path(directory) / name

    def validate(self, serializer_class, data):
        serializer = serializer_class(data=data)
        serializer.is_valid(raise_exception=True)
        return serializer.validated_data

    def read_config(self, path):
        try:
            return read_json(path)
        except FileNotFoundError:
            raise InvalidInputError(f"Config file {path} does not exist.")
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise InvalidInputError(f"Cannot read config {path}: {exc}")

    def write_json(self, options, name, payload):
        path = write_json(self.output_path(options, name), payload)
        self.stdout.write(self.style.SUCCESS(f"Wrote {path}"))
        return path
