"""
Serializers for pilot and leave-one-group-out configs and reports.
"""

from django.utils.translation import gettext as _

from rest_framework import serializers

from core.serializers import (
    FiniteFloatField,
    FiniteFloatListField,
    FloatListField,
    IntegerListField,
    StrictSerializer,
)
from allocation.serializers import GroupScalingSerializer
from harness.evaluators import (
    EVALUATOR_KINDS,
    LINEAR,
    POWERLAW,
    SHIFTED_LINEAR,
)
from harness.pilot import DEFAULT_MULTIPLIERS, EQUAL, GAMMA, PILOT_STARTS
from scaling.design import PILOT_FRACTIONS, PILOT_RATIOS


class EvaluatorSerializer(StrictSerializer):
    """Loss oracle of a workflow.

    powerlaw takes groups or a published dataset fit; linear takes beta and
    intercepts; shifted-linear takes one coefficient row per group.
    """

    kind = serializers.ChoiceField(choices=EVALUATOR_KINDS)
    groups = GroupScalingSerializer(many=True, required=False)
    dataset = serializers.CharField(required=False)
    noise_sd = serializers.FloatField(min_value=0, default=0.0)
    beta = FloatListField(required=False)
    intercepts = FloatListField(required=False, min_length=1)
    group_betas = serializers.ListField(
        child=FloatListField(), required=False, min_length=1
    )
    eval_size = serializers.IntegerField(min_value=1, default=1000)

    def validate(self, attrs):
        kind = attrs["kind"]
        if kind == POWERLAW:
            if ("groups" in attrs) == ("dataset" in attrs):
                raise serializers.ValidationError(
                    _("powerlaw needs exactly one of groups or dataset.")
                )
        elif kind == LINEAR:
            for key in ("beta", "intercepts"):
                if key not in attrs:
                    raise serializers.ValidationError(
                        {key: _("Required for the linear evaluator.")}
                    )
        elif kind == SHIFTED_LINEAR:
            for key in ("group_betas", "intercepts"):
                if key not in attrs:
                    raise serializers.ValidationError(
                        {key: _("Required for the shifted-linear evaluator.")}
                    )
            if len(attrs["group_betas"]) != len(attrs["intercepts"]):
                raise serializers.ValidationError(
                    {"group_betas": _("Needs one row per intercept.")}
                )
        if kind != POWERLAW and attrs["noise_sd"] <= 0:
            raise serializers.ValidationError(
                {"noise_sd": _("Linear evaluators need noise_sd > 0.")}
            )

        return attrs


class BaselineField(serializers.Field):
    """'gamma', 'equal' or an explicit two-group allocation."""

    def to_internal_value(self, data):
        if data in (GAMMA, EQUAL):
            return data
        if isinstance(data, list) and len(data) == 2:
            try:
                return [float(value) for value in data]
            except (TypeError, ValueError):
                pass
        raise serializers.ValidationError(
            _("Use gamma, equal or a two-entry allocation.")
        )

    def to_representation(self, value):
        return value


class PilotConfigSerializer(StrictSerializer):
    evaluator = EvaluatorSerializer()
    gamma = FloatListField(min_length=2, max_length=2)
    pilot_counts = IntegerListField(min_length=2, max_length=2)
    multipliers = FloatListField(
        min_length=1, default=list(DEFAULT_MULTIPLIERS)
    )
    baselines = serializers.ListField(
        child=BaselineField(), default=[GAMMA, EQUAL]
    )
    ratios = FloatListField(min_length=1, default=list(PILOT_RATIOS))
    fractions = FloatListField(min_length=1, default=list(PILOT_FRACTIONS))
    replicates = serializers.IntegerField(min_value=1, default=1)
    trials = serializers.IntegerField(min_value=1, default=10)
    m_min = serializers.IntegerField(min_value=1, default=1)
    starts = serializers.IntegerField(min_value=1, default=PILOT_STARTS)
    seed = serializers.IntegerField(min_value=0, required=False)

    def validate_multipliers(self, value):
        if any(multiplier <= 0 for multiplier in value):
            raise serializers.ValidationError(_("Multipliers must be > 0."))
        return value


class LogoConfigSerializer(StrictSerializer):
    """groups lists the labels to withhold and evaluate (default: all)."""

    evaluator = EvaluatorSerializer()
    counts = IntegerListField(min_length=2)
    labels = serializers.ListField(
        child=serializers.CharField(), required=False
    )
    groups = serializers.ListField(
        child=serializers.CharField(), required=False, min_length=2
    )
    trials = serializers.IntegerField(min_value=1, default=10)
    seed = serializers.IntegerField(min_value=0, required=False)

    def validate(self, attrs):
        counts = attrs["counts"]
        labels = attrs.setdefault(
            "labels", [str(group) for group in range(len(counts))]
        )
        if len(labels) != len(counts):
            raise serializers.ValidationError(
                {"labels": _("Needs one label per group.")}
            )
        if len(set(labels)) != len(labels):
            raise serializers.ValidationError(
                {"labels": _("Labels must be unique.")}
            )
        for label in attrs.get("groups", []):
            if label not in labels:
                raise serializers.ValidationError(
                    {"groups": _("unknown group label %(label)r") % {
                        "label": label,
                    }}
                )

        return attrs


class StrategySummarySerializer(serializers.Serializer):
    multiplier = serializers.FloatField()
    n_new = serializers.IntegerField()
    strategy = serializers.CharField()
    max_group_loss = FiniteFloatField(allow_null=True)
    max_group_loss_se = FiniteFloatField(allow_null=True)
    population_loss = FiniteFloatField(allow_null=True)
    population_loss_se = FiniteFloatField(allow_null=True)


class AlphaRangeSerializer(serializers.Serializer):
    multiplier = serializers.FloatField()
    n_new = serializers.IntegerField()
    low = FiniteFloatField(allow_null=True)
    high = FiniteFloatField(allow_null=True)
    clipped_trials = serializers.IntegerField()


class PilotReportSerializer(serializers.Serializer):
    """pilot_report.json body."""

    summaries = StrategySummarySerializer(many=True)
    alpha_ranges = AlphaRangeSerializer(many=True)
    trials = serializers.IntegerField()
    failed_trials = serializers.IntegerField()


class LogoResultSerializer(serializers.Serializer):
    """logo.json body; rows are withheld groups."""

    labels = serializers.ListField(child=serializers.CharField())
    percent_change = serializers.ListField(child=FiniteFloatListField())
    standard_error = serializers.ListField(child=FiniteFloatListField())
    baseline_loss = FiniteFloatListField()
    trials = serializers.IntegerField()
