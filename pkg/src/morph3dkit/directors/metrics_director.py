"""
This module is designed to compute the morphing vulnerability metrics of labeled trial sets.

Rates are fractions. A SIMILARITY score matches when score >= tau, a DISTANCE
score when score < tau.
"""
# Built-in/Generic Imports
import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

# Libraries
import numpy as np
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from .score_director import Polarity, as_polarity, is_match, require_scores, calibrate_threshold

# Exceptions
from fexception import FCustomException, FValueError

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, metrics_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class MissingMatedSamples(Exception):
    """Exception raised when a morph has no mated score for a contributing subject."""

    __module__ = "builtins"
    pass


class InvalidRange(Exception):
    """Exception raised for an invalid histogram range or bin count."""

    __module__ = "builtins"
    pass


@dataclass(frozen=True)
class MorphTrial:
    """
    Scores of one morph against the mated samples of its two contributing subjects.

    Attributes:
        morph_id (str):
        \t\\- The morph id.
        mated_scores (Dict[str, Tuple[float, ...]]):
        \t\\- Contributing subject id -> scores against that subject's mated samples.
    """

    morph_id: str
    mated_scores: Dict[str, Tuple[float, ...]]

    def __post_init__(self) -> None:
        if len(self.mated_scores) != 2:
            exc_args = {
                "main_message": "A morph trial must reference exactly 2 contributing subjects.",
                "expected_result": 2,
                "returned_result": f"{self.morph_id}: {sorted(self.mated_scores)}",
            }
            raise FValueError(message_args=exc_args, tb_remove_name="__post_init__")
        object.__setattr__(
            self, "mated_scores", {str(k): tuple(float(s) for s in v) for k, v in sorted(self.mated_scores.items())}
        )

    @property
    def subjects(self) -> Tuple[str, ...]:
        return tuple(self.mated_scores)


@dataclass(frozen=True)
class TrialSet:
    """
    Labeled scores of one matcher.

    Attributes:
        matcher (str):
        \t\\- The matcher id.
        polarity (Polarity):
        \t\\- Polarity of every score in the set.
        genuine (Tuple[float, ...]):
        \t\\- Same-subject scores.
        impostor (Tuple[float, ...]):
        \t\\- Cross-subject scores.
        morphs (Tuple[MorphTrial, ...]):
        \t\\- Morph trials.
        score_range (Tuple[float, float], optional):
        \t\\- Histogram range. Defaults to the observed score range.
    """

    matcher: str
    polarity: Polarity
    genuine: Tuple[float, ...]
    impostor: Tuple[float, ...]
    morphs: Tuple[MorphTrial, ...] = ()
    score_range: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "polarity", as_polarity(self.polarity))
        object.__setattr__(self, "genuine", tuple(float(s) for s in self.genuine))
        object.__setattr__(self, "impostor", tuple(float(s) for s in self.impostor))
        object.__setattr__(self, "morphs", tuple(self.morphs))

    def mated_scores(self) -> List[float]:
        return [s for morph in self.morphs for scores in morph.mated_scores.values() for s in scores]


class HistogramCounts(NamedTuple):
    edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int
    nan: int = 0

    def to_dict(self) -> dict:
        return {
            "edges": [float(e) for e in self.edges],
            "counts": [int(c) for c in self.counts],
            "underflow": int(self.underflow),
            "overflow": int(self.overflow),
            "nan": int(self.nan),
        }


@dataclass(frozen=True)
class HistogramConfig:
    """Histogram bin count and optional fixed range."""

    bins: int = 30
    range: Optional[Tuple[float, float]] = None


@dataclass(frozen=True)
class MetricsReport:
    """
    Rates of one matcher at one threshold.

    rmmr == mmpmr + fnmr exactly; the other rates are fractions in [0, 1].
    """

    matcher: str
    polarity: Polarity
    threshold: float
    fmr_target: Optional[float]
    fmr: float
    fnmr: float
    mmpmr: float
    rmmr: float
    counts: Dict[str, int]
    histograms: Dict[str, HistogramCounts] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "matcher": self.matcher,
            "polarity": self.polarity.value,
            "threshold": float(self.threshold),
            "fmr_target": self.fmr_target,
            "fmr": float(self.fmr),
            "fnmr": float(self.fnmr),
            "mmpmr": float(self.mmpmr),
            "rmmr": float(self.rmmr),
            "counts": dict(self.counts),
            "histograms": {name: histogram.to_dict() for name, histogram in self.histograms.items()},
        }


def fmr(impostor: Union[Sequence[float], np.ndarray], tau: float, polarity: Union[Polarity, str]) -> float:
    """
    Fraction of impostor scores that match at tau.

    Raises:
        EmptyScoreSet:
        \t\\- The impostor score set is empty.
    """
    scores = require_scores(impostor, "impostor", "fmr")
    return float(np.count_nonzero(is_match(scores, tau, polarity))) / len(scores)


def fnmr(genuine: Union[Sequence[float], np.ndarray], tau: float, polarity: Union[Polarity, str]) -> float:
    """
    Fraction of genuine scores that do not match at tau.

    Raises:
        EmptyScoreSet:
        \t\\- The genuine score set is empty.
    """
    scores = require_scores(genuine, "genuine", "fnmr")
    return float(np.count_nonzero(~is_match(scores, tau, polarity))) / len(scores)


def mmpmr(morphs: Sequence[MorphTrial], tau: float, polarity: Union[Polarity, str]) -> float:
    """
    Mated morph presentation match rate (MinMax variant).

    Per morph, each contributing subject's best mated score is taken (max for
    SIMILARITY, min for DISTANCE). The morph succeeds when the worst of these
    bests matches at tau.

    Args:
        morphs (Sequence[MorphTrial]):
        \t\\- The morph trials.
        tau (float):
        \t\\- The decision threshold.
        polarity (Polarity):
        \t\\- Score polarity.

    Raises:
        EmptyScoreSet:
        \t\\- The morph trial set is empty.
        MissingMatedSamples:
        \t\\- A morph has no mated score for a contributing subject.

    Returns:
        float:
        \t\\- Successful morphs / morphs.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    polarity = as_polarity(polarity)
    logger.debug(
        "Passing parameters:\n"
        f"  - morphs (Sequence[MorphTrial]):\n        - {len(morphs)} morphs\n"
        f"  - tau (float):\n        - {tau!r}\n"
        f"  - polarity (Polarity):\n        - {polarity.value}\n"
    )

    require_scores([0.0] * len(morphs), "morph trial", "mmpmr")
    similarity = polarity is Polarity.SIMILARITY
    worst = np.empty(len(morphs))
    for index, morph in enumerate(morphs):
        bests = []
        for subject_id, scores in morph.mated_scores.items():
            if len(scores) == 0:
                exc_args = {
                    "main_message": "A morph has no mated score for a contributing subject.",
                    "custom_type": MissingMatedSamples,
                    "expected_result": "at least one mated score per contributing subject",
                    "returned_result": f"morph {morph.morph_id}, subject {subject_id}",
                }
                raise MissingMatedSamples(FCustomException(message_args=exc_args, tb_remove_name="mmpmr"))
            bests.append(max(scores) if similarity else min(scores))
        worst[index] = min(bests) if similarity else max(bests)

    rate = float(np.count_nonzero(is_match(worst, tau, polarity))) / len(morphs)
    logger.debug(f"Returning value(s):\n  - Return = {rate}")
    return rate


def rmmr(mmpmr_value: float, fnmr_value: float) -> float:
    """Relative morph match rate: MMPMR + FNMR at the same threshold."""
    return mmpmr_value + fnmr_value


def histogram(scores: Union[Sequence[float], np.ndarray], bins: int, score_range: Tuple[float, float]) -> HistogramCounts:
    """
    Uniform-bin score histogram over a closed range.

    Scores below or above the range are not binned; they are counted in
    underflow and overflow. NaN scores are counted in nan, so the counters
    always add up to the score count.

    Raises:
        InvalidRange:
        \t\\- The histogram needs at least one bin and lo < hi.
    """
    lo, hi = (float(v) for v in score_range)
    if isinstance(bins, bool) or not isinstance(bins, int) or bins < 1 or not lo < hi:
        exc_args = {
            "main_message": "The histogram needs at least one bin and lo < hi.",
            "custom_type": InvalidRange,
            "expected_result": "bins >= 1, lo < hi",
            "returned_result": f"bins={bins}, range=({lo}, {hi})",
        }
        raise InvalidRange(FCustomException(message_args=exc_args, tb_remove_name="histogram"))
    values = np.asarray(scores, dtype=np.float64).reshape(-1)
    missing = np.isnan(values)
    values = values[~missing]
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return HistogramCounts(
        edges,
        counts,
        int(np.count_nonzero(values < lo)),
        int(np.count_nonzero(values > hi)),
        int(np.count_nonzero(missing)),
    )


def _histogram_range(trials: TrialSet, config: HistogramConfig) -> Tuple[float, float]:
    if config.range is not None:
        return config.range
    if trials.score_range is not None:
        return trials.score_range
    every = list(trials.genuine) + list(trials.impostor) + trials.mated_scores()
    lo, hi = min(every), max(every)
    return (lo, hi) if lo < hi else (lo - 0.5, hi + 0.5)


def evaluate_trials(
    trials: TrialSet, tau: float, histogram_config: HistogramConfig = HistogramConfig(), fmr_target: Optional[float] = None
) -> MetricsReport:
    """
    Computes every rate of a trial set at a fixed threshold.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{trials}' is not an instance of the required class(es) or subclass(es).
        EmptyScoreSet:
        \t\\- A score set is empty.
        MissingMatedSamples:
        \t\\- A morph has no mated score for a contributing subject.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=trials, required_type=TrialSet, tb_remove_name="evaluate_trials")

    logger.debug(
        "Passing parameters:\n"
        f"  - trials (TrialSet):\n        - {trials.matcher}: {len(trials.genuine)} genuine, "
        f"{len(trials.impostor)} impostor, {len(trials.morphs)} morphs\n"
        f"  - tau (float):\n        - {tau!r}\n"
    )

    fmr_value = fmr(trials.impostor, tau, trials.polarity)
    fnmr_value = fnmr(trials.genuine, tau, trials.polarity)
    mmpmr_value = mmpmr(trials.morphs, tau, trials.polarity)
    score_range = _histogram_range(trials, histogram_config)
    report = MetricsReport(
        matcher=trials.matcher,
        polarity=trials.polarity,
        threshold=tau,
        fmr_target=fmr_target,
        fmr=fmr_value,
        fnmr=fnmr_value,
        mmpmr=mmpmr_value,
        rmmr=rmmr(mmpmr_value, fnmr_value),
        counts={
            "genuine": len(trials.genuine),
            "impostor": len(trials.impostor),
            "morphs": len(trials.morphs),
            "mated_scores": len(trials.mated_scores()),
        },
        histograms={
            "genuine": histogram(trials.genuine, histogram_config.bins, score_range),
            "impostor": histogram(trials.impostor, histogram_config.bins, score_range),
            "morph": histogram(trials.mated_scores(), histogram_config.bins, score_range),
        },
    )
    logger.info(
        f"{trials.matcher}: tau={tau:.6g} FMR={report.fmr:.4f} FNMR={report.fnmr:.4f} "
        f"MMPMR={report.mmpmr:.4f} RMMR={report.rmmr:.4f}"
    )
    logger.debug(f"Returning value(s):\n  - Return = {report.to_dict()}")
    return report


def build_report(
    trials: TrialSet, fmr_target: float, histogram_config: HistogramConfig = HistogramConfig()
) -> MetricsReport:
    """Calibrates tau on the trial set's genuine and impostor scores at the FMR target, then evaluates."""
    tau = calibrate_threshold(trials.genuine, trials.impostor, fmr_target, trials.polarity)
    return evaluate_trials(trials, tau, histogram_config, fmr_target)
