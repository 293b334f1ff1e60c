"""
Serializers for scaling-law fits.
"""

from rest_framework import serializers

from core.serializers import FiniteFloatField, StrictSerializer
from scaling.fitting import DEFAULT_STARTS


class ObservationSerializer(StrictSerializer):
    group = serializers.IntegerField(min_value=0)
    n_g = serializers.IntegerField(min_value=1)
    n = serializers.IntegerField(min_value=1)
    loss = serializers.FloatField(min_value=0)
    seed_tag = serializers.IntegerField(required=False, allow_null=True)


class FitRequestSerializer(StrictSerializer):
    """Observations plus the fit options of the fit command."""

    observations = ObservationSerializer(many=True, allow_empty=False)
    group = serializers.IntegerField(required=False, min_value=0)
    m_min = serializers.IntegerField(min_value=1, default=1)
    starts = serializers.IntegerField(min_value=1, default=DEFAULT_STARTS)
    seed = serializers.IntegerField(required=False, min_value=0)


class FitDiagnosticsSerializer(serializers.Serializer):
    residuals = serializers.ListField(child=serializers.FloatField())
    r_squared = serializers.FloatField()
    flagged = serializers.ListField(child=serializers.CharField())
    caveat = serializers.CharField()


class FitSerializer(serializers.Serializer):
    """One group's entry of fit.json; unidentified stderr values are null."""

    group = serializers.IntegerField()
    sigma2 = serializers.FloatField()
    p = serializers.FloatField()
    tau2 = serializers.FloatField()
    q = serializers.FloatField()
    delta = serializers.FloatField()
    m_min = serializers.IntegerField()
    stderr = serializers.DictField(child=FiniteFloatField(allow_null=True))
    sse = serializers.FloatField()
    n_used = serializers.IntegerField()
    n_excluded = serializers.IntegerField()
    diagnostics = FitDiagnosticsSerializer()


class FitReportSerializer(serializers.Serializer):
    """fit.json body."""

    fits = FitSerializer(many=True)
