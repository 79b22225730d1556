"""
This script is used to test the score_director module using pytest.
"""
# Built-in/Generic Imports
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import (
    Polarity,
    ScoreRecord,
    as_polarity,
    calibrate_threshold,
    fmr,
    is_match,
    read_scores_csv,
    write_scores_csv,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_score_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_is_match():
    """Tests the tie rule of both polarities."""
    scores = [1.0, 2.0, 3.0]
    assert is_match(scores, 2.0, Polarity.SIMILARITY).tolist() == [False, True, True]
    assert is_match(scores, 2.0, "distance").tolist() == [True, False, False]


def test_1_as_polarity():
    """Tests polarity names are case-insensitive."""
    assert as_polarity("SIMILARITY") is Polarity.SIMILARITY
    assert as_polarity(Polarity.DISTANCE) is Polarity.DISTANCE


def test_1_calibrate_threshold():
    """Tests SIMILARITY calibration on ten impostor scores."""
    impostor = [float(v) for v in range(1, 11)]
    # 10% of 10 lets one impostor through: only 10 may match.
    tau = calibrate_threshold([20.0], impostor, 0.1, Polarity.SIMILARITY)
    assert tau == np.nextafter(9.0, np.inf)
    assert fmr(impostor, tau, Polarity.SIMILARITY) == pytest.approx(0.1)
    assert fmr(impostor, np.nextafter(tau, -np.inf), Polarity.SIMILARITY) > 0.1


def test_1_1_calibrate_threshold():
    """Tests DISTANCE calibration on ten impostor scores."""
    impostor = [float(v) for v in range(1, 11)]
    tau = calibrate_threshold([0.0], impostor, 0.2, Polarity.DISTANCE)
    assert tau == 3.0
    assert fmr(impostor, tau, Polarity.DISTANCE) == pytest.approx(0.2)
    assert fmr(impostor, np.nextafter(tau, np.inf), Polarity.DISTANCE) > 0.2


def test_1_2_calibrate_threshold():
    """Tests a zero target admits no impostor and a full target admits all."""
    impostor = [0.5, 0.25, 0.75]
    similarity_tau = calibrate_threshold([1.0], impostor, 0.0, Polarity.SIMILARITY)
    assert fmr(impostor, similarity_tau, Polarity.SIMILARITY) == 0.0
    distance_tau = calibrate_threshold([0.0], impostor, 0.0, Polarity.DISTANCE)
    assert distance_tau == 0.25
    assert fmr(impostor, distance_tau, Polarity.DISTANCE) == 0.0
    assert fmr(impostor, calibrate_threshold([1.0], impostor, 1.0, Polarity.SIMILARITY), Polarity.SIMILARITY) == 1.0
    assert fmr(impostor, calibrate_threshold([1.0], impostor, 1.0, Polarity.DISTANCE), Polarity.DISTANCE) == 1.0


def test_1_3_calibrate_threshold():
    """Tests exact products like 0.001 * 1000 keep their allowance."""
    impostor = np.arange(1000, dtype=np.float64)
    tau = calibrate_threshold([2000.0], impostor, 0.001, Polarity.SIMILARITY)
    assert tau == np.nextafter(998.0, np.inf)
    assert fmr(impostor, tau, Polarity.SIMILARITY) == pytest.approx(0.001)


def test_1_4_calibrate_threshold():
    """Tests ties at the boundary stay under the target."""
    impostor = [1.0, 2.0, 2.0, 2.0, 3.0]
    tau = calibrate_threshold([5.0], impostor, 0.4, Polarity.SIMILARITY)
    assert fmr(impostor, tau, Polarity.SIMILARITY) <= 0.4
    assert tau == np.nextafter(2.0, np.inf)


def test_1_write_scores_csv(tmp_path):
    """Tests score records survive the CSV file with full precision."""
    records = [
        ScoreRecord("s0_0", "s1_0", 0.1 + 0.2, Polarity.DISTANCE, "distance"),
        ScoreRecord("s0_0", "m_s0_s1", 42.0, Polarity.SIMILARITY, "likelihood"),
    ]
    path = str(tmp_path / "scores.csv")
    write_scores_csv(records, path)
    assert read_scores_csv(path) == records
    with open(path, "r", encoding="utf-8") as f:
        assert f.readline().strip() == "probe_id,gallery_id,matcher,polarity,score"


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_calibrate_threshold():
    """Tests an empty impostor set."""
    with pytest.raises(Exception) as excinfo:
        calibrate_threshold([1.0], [], 0.1, Polarity.SIMILARITY)
    assert """The impostor score set is empty.""" in str(excinfo.value)


def test_2_1_calibrate_threshold():
    """Tests an out-of-range target."""
    with pytest.raises(Exception) as excinfo:
        calibrate_threshold([1.0], [0.5], 1.5, Polarity.SIMILARITY)
    assert """The target false match rate is outside [0, 1].""" in str(excinfo.value)


def test_2_2_calibrate_threshold():
    """Tests an incorrect target type."""
    with pytest.raises(Exception) as excinfo:
        calibrate_threshold([1.0], [0.5], "0.1", Polarity.SIMILARITY)
    assert """The object value '0.1' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )


def test_2_read_scores_csv(tmp_path):
    """Tests a foreign header is rejected."""
    path = tmp_path / "scores.csv"
    path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        read_scores_csv(str(path))
    assert """The score file header is malformed.""" in str(excinfo.value)


def test_2_1_read_scores_csv(tmp_path):
    """Tests a row with a non-numeric score is rejected."""
    path = tmp_path / "scores.csv"
    path.write_text("probe_id,gallery_id,matcher,polarity,score\na,b,distance,distance,abc\n", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        read_scores_csv(str(path))
    assert """A score row is malformed.""" in str(excinfo.value)
