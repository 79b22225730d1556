"""
This module is designed to render report artifacts from the packaged Jinja2 templates.
"""
# Built-in/Generic Imports
import logging
from typing import Any, Dict, List

# Libraries
from jinja2 import Environment, PackageLoader, TemplateError, select_autoescape
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from .metrics_director import MetricsReport

# Exceptions
from fexception import FCustomException

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, template_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.1"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

SVG_WIDTH = 600
SVG_HEIGHT = 400
# Plot area inside the SVG: left, top, right, bottom margins.
MARGINS = (60, 40, 20, 50)
SERIES_COLORS = {"genuine": "#2b8a3e", "impostor": "#c92a2a", "morph": "#1864ab"}


class TemplateRenderFailure(Exception):
    """Exception raised for a template render failure."""

    __module__ = "builtins"
    pass


def render_template(template_name: str, **template_args: Any) -> str:
    """
    Renders a packaged template with the passing arguments.

    Args:
        template_name (str):
        \t\\- The template file name under morph3dkit/templates.
        **template_args (Any):
        \t\\- The template variables.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{template_name}' is not an instance of the required class(es) or subclass(es).
        TemplateRenderFailure:
        \t\\- The template failed to render.

    Returns:
        str:
        \t\\- The rendered text.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=template_name, required_type=str, tb_remove_name="render_template")

    logger.debug(
        "Passing parameters:\n"
        f"  - template_name (str):\n        - {template_name}\n"
        f"  - template_args (dict):\n        - {sorted(template_args)}\n"
    )

    try:
        env = Environment(
            loader=PackageLoader("morph3dkit", "templates"),
            autoescape=select_autoescape(["html", "xml", "svg", "j2"]),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        template = env.get_template(template_name)
        return template.render(**template_args)
    except (TemplateError, ValueError) as exc:
        exc_args = {
            "main_message": "The template failed to render.",
            "custom_type": TemplateRenderFailure,
            "original_exception": exc,
            "returned_result": template_name,
            "suggested_resolution": "Please verify the template exists in the package and its variables are set.",
        }
        raise TemplateRenderFailure(FCustomException(message_args=exc_args, tb_remove_name="render_template"))


def _histogram_bars(report: MetricsReport) -> Dict[str, Any]:
    left, top, right, bottom = MARGINS
    plot_width = SVG_WIDTH - left - right
    plot_height = SVG_HEIGHT - top - bottom
    # Each series is normalized to its own total so the distributions compare by shape.
    fractions: Dict[str, List[float]] = {}
    for name, counts in report.histograms.items():
        total = max(int(counts.counts.sum()), 1)
        fractions[name] = [int(c) / total for c in counts.counts]
    peak = max((max(values) for values in fractions.values() if values), default=0.0) or 1.0

    edges = next(iter(report.histograms.values())).edges
    lo, hi = float(edges[0]), float(edges[-1])
    n_bins = len(edges) - 1
    bin_width = plot_width / n_bins
    series = []
    for name, values in fractions.items():
        bars = []
        for index, value in enumerate(values):
            height = value / peak * plot_height
            bars.append(
                {
                    "x": round(left + index * bin_width, 3),
                    "y": round(top + plot_height - height, 3),
                    "width": round(bin_width, 3),
                    "height": round(height, 3),
                }
            )
        series.append({"name": name, "color": SERIES_COLORS.get(name, "#495057"), "bars": bars})

    threshold_x = None
    if lo <= report.threshold <= hi:
        threshold_x = round(left + (report.threshold - lo) / (hi - lo) * plot_width, 3)
    return {
        "series": series,
        "threshold_x": threshold_x,
        "axis": {
            "left": left,
            "top": top,
            "bottom": top + plot_height,
            "right": left + plot_width,
            "lo": f"{lo:.4g}",
            "hi": f"{hi:.4g}",
        },
    }


def render_histogram_svg(report: MetricsReport) -> str:
    """
    Renders the genuine, impostor and morph score distributions of a report as a 600x400 SVG.

    Raises:
        TemplateRenderFailure:
        \t\\- The template failed to render.
    """
    type_check(value=report, required_type=MetricsReport, tb_remove_name="render_histogram_svg")
    return render_template(
        "histogram.svg.j2",
        width=SVG_WIDTH,
        height=SVG_HEIGHT,
        title=f"{report.matcher} score distribution",
        threshold=f"{report.threshold:.6g}",
        rates=(
            f"FMR {report.fmr * 100:.2f}%  FNMR {report.fnmr * 100:.2f}%  "
            f"MMPMR {report.mmpmr * 100:.2f}%  RMMR {report.rmmr * 100:.2f}%"
        ),
        **_histogram_bars(report),
    )
