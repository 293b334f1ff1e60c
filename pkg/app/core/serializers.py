"""
Serializer building blocks shared by the config readers, the command-line
tools and the API views.
"""

import math

from django.utils.translation import gettext as _

from rest_framework import serializers


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                msg = _("Unknown keys: %(keys)s.") % {
                    "keys": ", ".join(unknown),
                }
                raise serializers.ValidationError(
                    {"non_field_errors": [msg]}, code="unknown_keys"
                )

        return super().to_internal_value(data)


class FloatListField(serializers.ListField):
    """List of floats; also accepts a comma separated string."""

    child = serializers.FloatField()

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                data = [
                    float(item) for item in data.split(",") if item.strip()
                ]
            except ValueError:
                raise serializers.ValidationError(
                    _("Expected comma separated numbers."), code="invalid"
                )

        return super().to_internal_value(data)


class IntegerListField(serializers.ListField):
    """List of non-negative integers; also accepts a comma separated string."""

    child = serializers.IntegerField(min_value=0)

    def to_internal_value(self, data):
        if isinstance(data, str):
            try:
                data = [int(item) for item in data.split(",") if item.strip()]
            except ValueError:
                raise serializers.ValidationError(
                    _("Expected comma separated integers."), code="invalid"
                )

        return super().to_internal_value(data)


class FiniteFloatField(serializers.FloatField):
    """Float output that renders inf and nan as null."""

    def to_representation(self, value):
        if value is None:
            return None
        value = float(value)
        if not math.isfinite(value):
            return None
        return value


class FiniteFloatListField(serializers.ListField):
    child = FiniteFloatField(allow_null=True)


def error_message(detail):
    """Flatten a DRF error detail into one line."""
    if isinstance(detail, dict):
        return "; ".join(
            f"{key}: {error_message(value)}" for key, value in detail.items()
        )
    if isinstance(detail, (list, tuple)):
        return " ".join(error_message(item) for item in detail)
    return str(detail)
