"""
This script is used to test the template_director module using pytest.
"""
# Built-in/Generic Imports
import xml.etree.ElementTree as ET

# Libraries
import pytest

# Local Functions
from morph3dkit import (
    HistogramConfig,
    MorphTrial,
    Polarity,
    TrialSet,
    evaluate_trials,
    render_histogram_svg,
    render_template,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_template_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

SVG = "{http://www.w3.org/2000/svg}"


def _report(tau: float = 5.0):
    trials = TrialSet(
        "likelihood",
        Polarity.SIMILARITY,
        genuine=(8.0, 9.0, 10.0),
        impostor=(0.0, 1.0, 2.0, 6.0),
        morphs=(MorphTrial("m_a_b", {"a": (4.0, 7.0), "b": (6.0,)}),),
    )
    return evaluate_trials(trials, tau, HistogramConfig(bins=4, range=(0.0, 12.0)))


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_render_histogram_svg():
    """Tests the SVG parses and holds one group per score distribution."""
    svg = render_histogram_svg(_report())
    root = ET.fromstring(svg)
    assert root.attrib["width"] == "600"
    assert root.attrib["height"] == "400"
    groups = [g.attrib["class"] for g in root.iter(f"{SVG}g")]
    assert groups == ["genuine", "impostor", "morph"]
    texts = [t.text for t in root.iter(f"{SVG}text")]
    assert "likelihood score distribution" in texts
    assert "tau 5" in texts


def test_1_1_render_histogram_svg():
    """Tests a threshold outside the histogram range draws no threshold line."""
    svg = render_histogram_svg(_report(tau=50.0))
    assert "stroke-dasharray" not in svg
    assert "RMMR" in svg


def test_1_render_template():
    """Tests template variables are escaped."""
    svg = render_template(
        "histogram.svg.j2",
        width=100,
        height=100,
        title="<a & b>",
        rates="",
        series=[],
        threshold_x=None,
        threshold="",
        axis={"left": 0, "top": 0, "bottom": 90, "right": 90, "lo": "0", "hi": "1"},
    )
    assert "&lt;a &amp; b&gt;" in svg


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_render_template():
    """Tests a template that is not packaged."""
    with pytest.raises(Exception) as excinfo:
        render_template("missing.svg.j2")
    assert """The template failed to render.""" in str(excinfo.value)


def test_2_render_histogram_svg():
    """Tests an incorrect report type."""
    with pytest.raises(Exception) as excinfo:
        render_histogram_svg("report")
    assert """The object value 'report' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )
