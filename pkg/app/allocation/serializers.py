"""
Serializers for allocation requests and results.
"""

from django.utils.translation import gettext as _

from rest_framework import serializers

from core.serializers import (
    FiniteFloatField,
    FloatListField,
    StrictSerializer,
)
from allocation.optimize import METHODS

POPULATION = "population"
MINMAX = "minmax"


class GroupScalingSerializer(StrictSerializer):
    """Scaling parameters of one group."""

    sigma2 = serializers.FloatField(min_value=0)
    p = serializers.FloatField(min_value=0, max_value=2)
    tau2 = serializers.FloatField(min_value=0, default=0.0)
    q = serializers.FloatField(min_value=0, max_value=2, default=1.0)
    delta = serializers.FloatField(min_value=0, default=0.0)
    m_min = serializers.IntegerField(min_value=1, default=1)


class OptimizeRequestSerializer(StrictSerializer):
    """Inputs of the allocation optimizer.

    The model comes from exactly one of sigma2 (+ p), groups, or preset.
    """

    gamma = FloatListField(required=False, min_length=1)
    sigma2 = FloatListField(required=False, min_length=1)
    p = FloatListField(required=False, min_length=1)
    groups = GroupScalingSerializer(many=True, required=False)
    preset = serializers.CharField(required=False)
    objective = serializers.ChoiceField(
        choices=[POPULATION, MINMAX], default=POPULATION
    )
    n = serializers.FloatField(required=False, min_value=0)

    def validate(self, attrs):
        sources = [
            key for key in ("sigma2", "groups", "preset") if key in attrs
        ]
        if len(sources) != 1:
            raise serializers.ValidationError(
                _("Give exactly one of sigma2, groups or preset."),
                code="model_source",
            )
        if "sigma2" in attrs:
            if "p" not in attrs:
                raise serializers.ValidationError(
                    {"p": _("Required together with sigma2.")}
                )
            if len(attrs["p"]) not in (1, len(attrs["sigma2"])):
                raise serializers.ValidationError(
                    {"p": _("Give one shared exponent or one per group.")}
                )
        if "gamma" not in attrs and "preset" not in attrs:
            raise serializers.ValidationError(
                {"gamma": _("This field is required.")}
            )
        if attrs["objective"] == MINMAX and "n" not in attrs:
            raise serializers.ValidationError(
                {"n": _("Required for the minmax objective.")}
            )

        return attrs


class MinorityBoundsSerializer(serializers.Serializer):
    group = serializers.IntegerField()
    lower = serializers.FloatField()
    upper = serializers.FloatField()
    alpha_star = serializers.FloatField()


class AllocationResultSerializer(serializers.Serializer):
    """allocation.json body."""

    alpha_star = serializers.ListField(child=serializers.FloatField())
    objective_value = FiniteFloatField(allow_null=True)
    method = serializers.ChoiceField(choices=METHODS)
    degenerate = serializers.BooleanField()
    clipped = serializers.BooleanField()
    bounds = MinorityBoundsSerializer(allow_null=True)
