"""
Serializers for the weighted-estimator analysis.
"""

from django.utils.translation import gettext as _

from rest_framework import serializers

from core.serializers import FloatListField, StrictSerializer

WEIGHT_SCHEMES = ("iw", "erm", "gdro")


class EstimatorRequestSerializer(StrictSerializer):
    """Inputs of the estimator analysis.

    weights is one of iw, erm, gdro or a comma separated list of per-group
    weights.
    """

    gamma = FloatListField(required=False, min_length=1)
    alpha = FloatListField(min_length=1)
    weights = serializers.CharField(default="iw")
    means = FloatListField(min_length=1)
    variances = FloatListField(min_length=1)
    n = serializers.IntegerField(min_value=1)
    group_losses = FloatListField(required=False, min_length=1)
    mc_trials = serializers.IntegerField(required=False, min_value=2)
    seed = serializers.IntegerField(required=False, min_value=0)

    def validate_weights(self, value):
        value = value.strip()
        if value in WEIGHT_SCHEMES:
            return value
        try:
            weights = [float(item) for item in value.split(",")]
        except ValueError:
            raise serializers.ValidationError(
                _("Use iw, erm, gdro or comma separated weights.")
            )
        if any(weight < 0 for weight in weights):
            raise serializers.ValidationError(_("Weights must be >= 0."))
        return weights

    def validate(self, attrs):
        k = len(attrs["alpha"])
        for key in ("gamma", "means", "variances", "group_losses"):
            if key in attrs and len(attrs[key]) != k:
                raise serializers.ValidationError(
                    {key: _("Needs one entry per group.")}
                )
        weights = attrs["weights"]
        if isinstance(weights, list) and len(weights) != k:
            raise serializers.ValidationError(
                {"weights": _("Needs one entry per group.")}
            )
        if weights == "iw" and "gamma" not in attrs:
            raise serializers.ValidationError(
                {"gamma": _("Required for importance weights.")}
            )

        return attrs


class MonteCarloSerializer(serializers.Serializer):
    trials = serializers.IntegerField()
    mean = serializers.FloatField()
    variance = serializers.FloatField()
    mean_standard_error = serializers.FloatField()
    variance_standard_error = serializers.FloatField()


class EstimatorResultSerializer(serializers.Serializer):
    """estimator.json body."""

    weights = serializers.ListField(child=serializers.FloatField())
    high_variance = serializers.BooleanField()
    mean = serializers.FloatField()
    variance = serializers.FloatField()
    gamma_prime = serializers.ListField(child=serializers.FloatField())
    c = serializers.FloatField()
    w_star = serializers.ListField(
        child=serializers.FloatField(), allow_null=True
    )
    alpha_star = serializers.ListField(
        child=serializers.FloatField(), allow_null=True
    )
    mean_after = serializers.FloatField(allow_null=True)
    variance_after = serializers.FloatField(allow_null=True)
    strict_improvement_expected = serializers.BooleanField(allow_null=True)
    mc = MonteCarloSerializer(allow_null=True)
