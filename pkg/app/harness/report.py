"""
Static SVG chart of a pilot report: one panel per multiplier, strategies
side by side, max-group and population loss bars with standard errors.
"""

import io

import matplotlib
from matplotlib.figure import Figure

from core.io import write_atomic

SVG_RC = {
    "svg.hashsalt": "allocplan",
    "svg.fonttype": "path",
}
BAR_WIDTH = 0.38


def _value(value):
    return 0.0 if value is None else value


def pilot_report_svg(report):
    """SVG text of the report; identical reports give identical text."""
    multipliers = []
    for item in report.summaries:
        if item.multiplier not in multipliers:
            multipliers.append(item.multiplier)

    with matplotlib.rc_context(SVG_RC):
        figure = Figure(figsize=(3.2 * len(multipliers), 3.6))
        axes = figure.subplots(1, len(multipliers), sharey=True, squeeze=False)

        for axis, multiplier in zip(axes[0], multipliers):
            rows = [
                item for item in report.summaries
                if item.multiplier == multiplier
            ]
            positions = range(len(rows))
            axis.bar(
                [x - BAR_WIDTH / 2 for x in positions],
                [_value(row.max_group_loss) for row in rows],
                BAR_WIDTH,
                yerr=[_value(row.max_group_loss_se) for row in rows],
                label="max group loss",
                color="#c44e52",
            )
            axis.bar(
                [x + BAR_WIDTH / 2 for x in positions],
                [_value(row.population_loss) for row in rows],
                BAR_WIDTH,
                yerr=[_value(row.population_loss_se) for row in rows],
                label="population loss",
                color="#4c72b0",
            )
            axis.set_xticks(list(positions))
            axis.set_xticklabels([row.strategy for row in rows], rotation=30)
            axis.set_title(f"n_new = {rows[0].n_new} ({multiplier:g}x)")

        axes[0][0].set_ylabel("loss")
        axes[0][-1].legend(loc="upper right", fontsize="small")
        figure.tight_layout()

        buffer = io.StringIO()
        figure.savefig(buffer, format="svg", metadata={"Date": None})

    return buffer.getvalue()


def write_pilot_report_svg(path, report):
    return write_atomic(path, pilot_report_svg(report))
