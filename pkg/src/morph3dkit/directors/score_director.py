"""
This module is designed to hold the comparison score types shared by the matchers and the metrics.

It also calibrates decision thresholds and reads/writes score dumps.
"""
# Built-in/Generic Imports
import io
import csv
import math
import logging
from enum import Enum
from typing import Iterable, List, NamedTuple, Sequence, Union

# Libraries
import numpy as np
from fchecker.type import type_check
from fchecker.file import file_check

# Local Functions
from ..helpers.py_helper import get_function_name
from .file_director import write_text_file
from .mesh_io_director import MalformedFile

# Exceptions
from fexception import FCustomException, FValueError

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, score_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.0"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

# Published operating points of the reference systems. Documentation only:
# the re-implemented matchers are always calibrated on their own scores.
REFERENCE_LIKELIHOOD_THRESHOLD = 8.0
REFERENCE_LIKELIHOOD_REGIONS = 60
REFERENCE_DISTANCE_THRESHOLD = 0.71565
REFERENCE_LOOKALIKE_BAND = (3.0, 7.0)

SCORE_CSV_HEADER = ["probe_id", "gallery_id", "matcher", "polarity", "score"]


class EmptyScoreSet(Exception):
    """Exception raised when a rate or threshold is requested over no scores."""

    __module__ = "builtins"
    pass


class Polarity(Enum):
    """SIMILARITY: larger is more alike, match when score >= tau. DISTANCE: match when score < tau."""

    SIMILARITY = "similarity"
    DISTANCE = "distance"


class ScoreRecord(NamedTuple):
    probe_id: str
    gallery_id: str
    score: float
    polarity: Polarity
    matcher: str


def as_polarity(value: Union[Polarity, str]) -> Polarity:
    return value if isinstance(value, Polarity) else Polarity(str(value).lower())


def is_match(scores: Union[Sequence[float], np.ndarray], tau: float, polarity: Union[Polarity, str]) -> np.ndarray:
    """Match decisions at tau. A score equal to tau matches only under SIMILARITY."""
    scores = np.asarray(scores, dtype=np.float64)
    if as_polarity(polarity) is Polarity.SIMILARITY:
        return scores >= tau
    return scores < tau


def require_scores(scores: Union[Sequence[float], np.ndarray], label: str, tb_remove_name: str) -> np.ndarray:
    """Returns the scores as a float array. Raises EmptyScoreSet when there are none."""
    array = np.asarray(scores, dtype=np.float64).reshape(-1)
    if array.size == 0:
        exc_args = {
            "main_message": f"The {label} score set is empty.",
            "custom_type": EmptyScoreSet,
            "expected_result": "at least one score",
            "returned_result": 0,
        }
        raise EmptyScoreSet(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))
    return array


def calibrate_threshold(
    genuine: Union[Sequence[float], np.ndarray],
    impostor: Union[Sequence[float], np.ndarray],
    target_fmr: float,
    polarity: Union[Polarity, str],
) -> float:
    """
    Finds the least strict threshold whose impostor match rate stays within the target.

    With n impostor scores at most k = floor(target_fmr * n) may match.\\
    SIMILARITY: the smallest tau with count(impostor >= tau) <= k, which is the float right\\
    above the (k+1)-th largest impostor score.\\
    DISTANCE: the largest tau with count(impostor < tau) <= k, which is the (k+1)-th smallest\\
    impostor score.\\
    The next less strict representable threshold admits one more impostor than allowed.

    Args:
        genuine (Sequence[float]):
        \t\\- Genuine scores. Only logged; the threshold depends on impostors alone.
        impostor (Sequence[float]):
        \t\\- Impostor scores.
        target_fmr (float):
        \t\\- Target false match rate in [0, 1].
        polarity (Polarity):
        \t\\- Score polarity.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{target_fmr}' is not an instance of the required class(es) or subclass(es).
        FValueError (fexception):
        \t\\- The target false match rate is outside [0, 1].
        EmptyScoreSet:
        \t\\- The impostor score set is empty.

    Returns:
        float:
        \t\\- The threshold tau.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=target_fmr, required_type=(float, int), tb_remove_name="calibrate_threshold")
    polarity = as_polarity(polarity)

    logger.debug(
        "Passing parameters:\n"
        f"  - genuine (Sequence[float]):\n        - {len(genuine)} scores\n"
        f"  - impostor (Sequence[float]):\n        - {len(impostor)} scores\n"
        f"  - target_fmr (float):\n        - {target_fmr}\n"
        f"  - polarity (Polarity):\n        - {polarity.value}\n"
    )

    if not (0.0 <= target_fmr <= 1.0):
        exc_args = {
            "main_message": "The target false match rate is outside [0, 1].",
            "expected_result": "0 <= target_fmr <= 1",
            "returned_result": target_fmr,
        }
        raise FValueError(message_args=exc_args, tb_remove_name="calibrate_threshold")
    ordered = np.sort(require_scores(impostor, "impostor", "calibrate_threshold"))
    n = len(ordered)
    # Tolerance keeps exact products like 0.001 * 1000 from rounding down.
    allowed = int(math.floor(target_fmr * n + 1e-12))

    if polarity is Polarity.SIMILARITY:
        if allowed >= n:
            tau = float(ordered[0])
        else:
            tau = float(np.nextafter(ordered[n - allowed - 1], np.inf))
    else:
        if allowed >= n:
            tau = float(np.nextafter(ordered[-1], np.inf))
        else:
            tau = float(ordered[allowed])

    logger.info(f"Calibrated {polarity.value} threshold {tau!r} at FMR target {target_fmr} over {n} impostor scores")
    logger.debug(f"Returning value(s):\n  - Return = {tau!r}")
    return tau


def write_scores_csv(records: Iterable[ScoreRecord], path: str) -> None:
    """Writes score records as CSV: probe_id, gallery_id, matcher, polarity, score."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SCORE_CSV_HEADER)
    for record in records:
        writer.writerow(
            [record.probe_id, record.gallery_id, record.matcher, as_polarity(record.polarity).value, f"{record.score:.17g}"]
        )
    write_text_file(path, buffer.getvalue())


def read_scores_csv(path: str) -> List[ScoreRecord]:
    """
    Reads a score CSV written by write_scores_csv.

    Raises:
        FFileNotFoundError (fexception):
        \t\\- The file does not exist.
        MalformedFile:
        \t\\- The score file header or a score row is malformed.
    """
    type_check(value=path, required_type=str, tb_remove_name="read_scores_csv")
    file_check(path)
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        return []
    if rows[0] != SCORE_CSV_HEADER:
        exc_args = {
            "main_message": "The score file header is malformed.",
            "custom_type": MalformedFile,
            "expected_result": SCORE_CSV_HEADER,
            "returned_result": rows[0],
        }
        raise MalformedFile(FCustomException(message_args=exc_args, tb_remove_name="read_scores_csv"))
    records = []
    for line_number, row in enumerate(rows[1:], start=2):
        try:
            probe_id, gallery_id, matcher, polarity, score = row
            records.append(ScoreRecord(probe_id, gallery_id, float(score), as_polarity(polarity), matcher))
        except ValueError as exc:
            exc_args = {
                "main_message": "A score row is malformed.",
                "custom_type": MalformedFile,
                "original_exception": exc,
                "returned_result": f"line {line_number}: {row}",
            }
            raise MalformedFile(FCustomException(message_args=exc_args, tb_remove_name="read_scores_csv"))
    return records
