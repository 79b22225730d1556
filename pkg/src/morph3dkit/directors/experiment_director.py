"""
This module is designed to run end-to-end morphing vulnerability experiments.

A run generates and registers a synthetic population, optionally builds a
shape model and trains the likelihood matcher on a disjoint training
population, morphs the selected subject pairs from their neutral samples,
scores genuine, impostor and morph trials, calibrates every matcher at the FMR
target and writes the run artifacts.
"""
# Built-in/Generic Imports
import os
import time
import json
import platform
import logging
import functools
import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from importlib import metadata, resources
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

# Libraries
import numpy as np
import scipy
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..helpers.sort_helper import id_sort_key
from ..geometry.depth_map import DepthMap, GridSpec
from .synth_director import SyntheticPopulation, generate_population
from .registration_director import RegistrationConfig, register_batch
from .shape_model_director import ShapeModel, build_model, fit_coefficients, reconstruct
from .morph_director import MorphMethod, MorphSpec, depth_average, coefficient_average
from .likelihood_director import (
    LikelihoodMatcherConfig,
    LikelihoodMatcherModel,
    train_likelihood_matcher,
    extract_features,
    score_feature_pairs,
    MATCHER_ID as LIKELIHOOD_ID,
)
from .distance_director import (
    DistanceMatcherConfig,
    distance_descriptor,
    score_descriptor_pairs,
)
from .score_director import (
    Polarity,
    ScoreRecord,
    as_polarity,
    calibrate_threshold,
    require_scores,
    read_scores_csv,
    write_scores_csv,
)
from .metrics_director import HistogramConfig, MetricsReport, MorphTrial, TrialSet, evaluate_trials
from .config_director import (
    ExperimentConfig,
    PairSelectionConfig,
    PopulationConfig,
    load_experiment_config,
    parse_experiment_config,
    read_config_file,
)
from .template_director import render_histogram_svg
from .file_director import write_json_file, write_text_file
from .yaml_director import read_package_yaml
from .thread_director import map_ordered

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidConfig
from .mesh_io_director import MalformedFile

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, experiment_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


class NoEligiblePairs(Exception):
    """Exception raised when the pair selection leaves no subject pair."""

    __module__ = "builtins"
    pass


class ExperimentStageFailure(Exception):
    """
    Exception raised when an experiment stage fails.

    Attributes:
        stage (str):
        \t\\- The failing stage.
        error_class (str):
        \t\\- Class name of the original error.
    """

    __module__ = "builtins"
    stage: str = "experiment"
    error_class: str = "Exception"


@dataclass(frozen=True, eq=False)
class RegisteredPopulation:
    """Registered depth maps of a population, in population order."""

    keys: Tuple[str, ...]
    subjects: Tuple[str, ...]
    sample_ids: Tuple[int, ...]
    depth_maps: Tuple[DepthMap, ...]

    def subject_ids(self) -> List[str]:
        return sorted(set(self.subjects), key=id_sort_key)

    def index_of(self, subject_id: str, sample_id: int) -> int:
        for index, (subject, sample) in enumerate(zip(self.subjects, self.sample_ids)):
            if subject == subject_id and sample == sample_id:
                return index
        raise KeyError(f"{subject_id}_{sample_id}")

    def mated_indices(self, subject_id: str) -> List[int]:
        """Indices of the subject's samples other than the neutral sample 0."""
        return [i for i, (s, n) in enumerate(zip(self.subjects, self.sample_ids)) if s == subject_id and n != 0]


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Outcome of run_experiment."""

    config: ExperimentConfig
    reports: Dict[str, MetricsReport]
    thresholds: Dict[str, float]
    pairs: List[Tuple[str, str]]
    report: Dict[str, Any]
    output_dir: Optional[str]


@contextmanager
def _stage(stage: str, timings: Dict[str, float]) -> Iterator[None]:
    """Times a stage and wraps its errors in ExperimentStageFailure naming the stage."""
    logger = logging.getLogger(__name__)
    logger.info(f"Stage '{stage}' started")
    start = time.perf_counter()
    try:
        yield
    except ExperimentStageFailure:
        raise
    except Exception as exc:
        exc_args = {
            "main_message": f"The experiment stage '{stage}' failed with {type(exc).__name__}.",
            "custom_type": ExperimentStageFailure,
            "original_exception": exc,
        }
        failure = ExperimentStageFailure(FCustomException(message_args=exc_args, tb_remove_name="_stage"))
        failure.stage = stage
        failure.error_class = type(exc).__name__
        raise failure from exc
    finally:
        timings[stage] = round(timings.get(stage, 0.0) + time.perf_counter() - start, 6)


@functools.lru_cache(maxsize=8)
def _population(seed: int, population: PopulationConfig) -> SyntheticPopulation:
    return generate_population(
        seed + population.seed_offset,
        population.n_subjects,
        population.samples_per_subject,
        population.sample_noise,
        population.id_prefix,
    )


@functools.lru_cache(maxsize=8)
def _registered(
    seed: int, population: PopulationConfig, registration: RegistrationConfig, grid: GridSpec, workers: int
) -> RegisteredPopulation:
    generated = _population(seed, population)
    samples = list(generated)
    results = register_batch([s.mesh for s in samples], registration, grid, workers)
    return RegisteredPopulation(
        keys=tuple(s.key for s in samples),
        subjects=tuple(s.subject_id for s in samples),
        sample_ids=tuple(s.sample_id for s in samples),
        depth_maps=tuple(depth_map for _, depth_map in results),
    )


def build_population_model(population: RegisteredPopulation, k: int) -> ShapeModel:
    """
    Builds the shape model the morphs are generated with.

    The model spans the neutral sample of every evaluation subject, the faces
    the morphs are blended from, so each of them is reproduced on the model
    support. k is capped at the subject count - 1.

    Args:
        population (RegisteredPopulation):
        \t\\- Registered evaluation population.
        k (int):
        \t\\- Requested component count.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{population}' is not an instance of the required class(es) or subclass(es).
        InsufficientData:
        \t\\- The training faces do not vary along the requested components.

    Returns:
        ShapeModel:
        \t\\- The model.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=population, required_type=RegisteredPopulation, tb_remove_name="build_population_model")
    type_check(value=k, required_type=int, tb_remove_name="build_population_model")

    logger.debug(
        "Passing parameters:\n"
        f"  - population (RegisteredPopulation):\n        - {len(population.keys)} samples\n"
        f"  - k (int):\n        - {k}\n"
    )

    neutral = [population.depth_maps[population.index_of(s, 0)] for s in population.subject_ids()]
    usable_k = max(1, min(k, len(neutral) - 1))
    if usable_k != k:
        logger.warning(f"Shape model component count capped from {k} to {usable_k} by the subject count")
    model = build_model(neutral, usable_k)
    logger.debug(f"Returning value(s):\n  - Return = ShapeModel with k={model.k} over {model.n_training} faces")
    return model


@functools.lru_cache(maxsize=8)
def _shape_model(
    seed: int, population: PopulationConfig, registration: RegistrationConfig, grid: GridSpec, workers: int, k: int
) -> ShapeModel:
    return build_population_model(_registered(seed, population, registration, grid, workers), k)


@functools.lru_cache(maxsize=8)
def _likelihood_model(
    seed: int,
    population: PopulationConfig,
    registration: RegistrationConfig,
    grid: GridSpec,
    workers: int,
    matcher_config: LikelihoodMatcherConfig,
) -> LikelihoodMatcherModel:
    training = _registered(seed, population, registration, grid, workers)
    return train_likelihood_matcher(list(zip(training.subjects, training.depth_maps)), matcher_config, workers)


def clear_preparation_cache() -> None:
    """Drops memoized populations, registrations and trained models."""
    for cached in (_population, _registered, _shape_model, _likelihood_model):
        cached.cache_clear()


class _MatcherScorer:
    """Feature extraction once per face, then vectorized pair scoring."""

    def __init__(
        self,
        matcher_id: str,
        likelihood_model: Optional[LikelihoodMatcherModel],
        distance_config: DistanceMatcherConfig,
        workers: int,
    ) -> None:
        self.matcher_id = matcher_id
        self.likelihood_model = likelihood_model
        self.distance_config = distance_config
        self.workers = workers
        if matcher_id == LIKELIHOOD_ID:
            self.polarity = Polarity.SIMILARITY
            self.score_range = (0.0, float(likelihood_model.n_regions))
        else:
            self.polarity = Polarity.DISTANCE
            self.score_range = (0.0, 2.0)

    def features(self, depth_maps: Sequence[DepthMap]) -> np.ndarray:
        if self.matcher_id == LIKELIHOOD_ID:
            return extract_features(self.likelihood_model, list(depth_maps))
        descriptors = map_ordered(lambda d: distance_descriptor(d, self.distance_config), list(depth_maps), self.workers)
        return np.stack(descriptors)

    def score(self, features_a: np.ndarray, features_b: np.ndarray) -> np.ndarray:
        if len(features_a) == 0:
            return np.zeros(0)
        if self.matcher_id == LIKELIHOOD_ID:
            return score_feature_pairs(self.likelihood_model, features_a, features_b)
        return score_descriptor_pairs(features_a, features_b)


def lookalike_band(tau: float, selection: PairSelectionConfig, polarity: Polarity) -> Tuple[float, float]:
    """
    The look-alike band of a selection matcher.

    An absolute band in the configuration wins. Otherwise SIMILARITY uses
    (lo * tau, hi * tau) with the configured fractions; DISTANCE mirrors it
    above tau as (tau * (2 - hi), tau * (2 - lo)).
    """
    if selection.band is not None:
        return selection.band
    lo, hi = selection.band_fractions
    if as_polarity(polarity) is Polarity.SIMILARITY:
        return (lo * tau, hi * tau)
    return (tau * (2.0 - hi), tau * (2.0 - lo))


def select_pairs(
    subject_ids: Sequence[str],
    selection: PairSelectionConfig,
    seed: int,
    pair_scores: Optional[Dict[Tuple[str, str], float]] = None,
    band: Optional[Tuple[float, float]] = None,
    polarity: Polarity = Polarity.SIMILARITY,
) -> List[Tuple[str, str]]:
    """
    Chooses the subject pairs to morph.

    Pairs are (a, b) with a before b in id order and are returned in that order.

    Args:
        subject_ids (Sequence[str]):
        \t\\- The candidate subjects.
        selection (PairSelectionConfig):
        \t\\- The selection mode and its parameters.
        seed (int):
        \t\\- Seed of the random mode.
        pair_scores (Dict[Tuple[str, str], float], optional):
        \t\\- Lookalike mode: the selection score of every pair.
        band (Tuple[float, float], optional):
        \t\\- Lookalike mode: pairs strictly inside (lo, hi) are selected.
        polarity (Polarity, optional):
        \t\\- Lookalike mode: polarity of the selection scores, used to rank pairs when max_pairs caps them.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{selection}' is not an instance of the required class(es) or subclass(es).
        InvalidConfig:
        \t\\- Lookalike selection needs pair scores and a band.
        NoEligiblePairs:
        \t\\- No subject pair is eligible.

    Returns:
        List[Tuple[str, str]]:
        \t\\- The selected pairs.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=selection, required_type=PairSelectionConfig, tb_remove_name="select_pairs")
    type_check(value=seed, required_type=int, tb_remove_name="select_pairs")

    logger.debug(
        "Passing parameters:\n"
        f"  - subject_ids (Sequence[str]):\n        - {len(subject_ids)} subjects\n"
        f"  - selection (PairSelectionConfig):\n        - {selection}\n"
        f"  - seed (int):\n        - {seed}\n"
        f"  - band (tuple):\n        - {band}\n"
    )

    ordered = sorted(set(subject_ids), key=id_sort_key)
    candidates = list(itertools.combinations(ordered, 2))
    if selection.mode == "all":
        pairs = candidates
    elif selection.mode == "random":
        count = min(selection.n_pairs, len(candidates))
        if count < selection.n_pairs:
            logger.warning(f"Random pair count capped from {selection.n_pairs} to the {count} available pairs")
        rng = np.random.default_rng([seed, len(ordered)])
        chosen = np.sort(rng.choice(len(candidates), size=count, replace=False)) if count else []
        pairs = [candidates[int(i)] for i in chosen]
    else:
        if pair_scores is None or band is None:
            exc_args = {
                "main_message": "Lookalike selection needs pair scores and a band.",
                "custom_type": InvalidConfig,
                "expected_result": "pair_scores and band",
                "returned_result": f"pair_scores={'set' if pair_scores else None}, band={band}",
            }
            raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="select_pairs"))
        lo, hi = band
        pairs = [pair for pair in candidates if pair in pair_scores and lo < pair_scores[pair] < hi]
        if selection.max_pairs is not None and len(pairs) > selection.max_pairs:
            logger.warning(f"Lookalike pair count capped from {len(pairs)} to {selection.max_pairs}")
            sign = -1.0 if as_polarity(polarity) is Polarity.SIMILARITY else 1.0
            ranked = sorted(range(len(pairs)), key=lambda i: (sign * pair_scores[pairs[i]], i))
            keep = sorted(ranked[: selection.max_pairs])
            pairs = [pairs[i] for i in keep]

    if not pairs:
        exc_args = {
            "main_message": "No subject pair is eligible.",
            "custom_type": NoEligiblePairs,
            "expected_result": f"at least one pair ({selection.mode} mode)",
            "returned_result": f"{len(candidates)} candidate pairs, band={band}",
            "suggested_resolution": "Widen the look-alike band or enlarge the population.",
        }
        raise NoEligiblePairs(FCustomException(message_args=exc_args, tb_remove_name="select_pairs"))

    logger.debug(f"Returning value(s):\n  - Return = {len(pairs)} pairs")
    return pairs


def _trial_indices(subjects: Sequence[str]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All sample pairs i < j and whether they share a subject."""
    first, second = np.triu_indices(len(subjects), k=1)
    labels = np.array(subjects)
    return first, second, labels[first] == labels[second]


def _reference_entry(name: str) -> Optional[dict]:
    table = read_package_yaml("reference_results.yaml")
    return table.get("experiments", {}).get(name)


def _versions() -> Dict[str, str]:
    try:
        package_version = metadata.version("morph3dkit")
    except metadata.PackageNotFoundError:
        package_version = "unknown"
    return {
        "morph3dkit": package_version,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def run_experiment(
    config: ExperimentConfig, output_dir: Optional[str] = None, write_artifacts: bool = True
) -> ExperimentResult:
    """
    Runs one experiment end to end.

    Stages: generate, register, model, train, features, calibrate, select,
    morph, score, metrics and write. Identical configurations give identical
    report.json bytes; wall-clock data goes to run-sidecar.json only.

    Args:
        config (ExperimentConfig):
        \t\\- The experiment.
        output_dir (str, optional):
        \t\\- Parent folder of the run folder. Defaults to config.output_dir.
        write_artifacts (bool, optional):
        \t\\- Writes scores.csv, manifest.json, report.json, histograms and the sidecar. Defaults to True.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{config}' is not an instance of the required class(es) or subclass(es).
        ExperimentStageFailure:
        \t\\- A stage failed. The stage and the original error class are attached.

    Returns:
        ExperimentResult:
        \t\\- Reports, thresholds, pairs and the report dictionary.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=config, required_type=ExperimentConfig, tb_remove_name="run_experiment")
    type_check(value=write_artifacts, required_type=bool, tb_remove_name="run_experiment")

    logger.debug(
        "Passing parameters:\n"
        f"  - config (ExperimentConfig):\n        - {config.name}\n"
        f"  - output_dir (str):\n        - {output_dir}\n"
        f"  - write_artifacts (bool):\n        - {write_artifacts}\n"
    )

    timings: Dict[str, float] = {}
    started = datetime.now().isoformat(timespec="seconds")
    seed, workers = config.seed, config.workers
    selection = config.pairs
    scorer_ids = list(config.matchers)
    if selection.mode == "lookalike" and selection.selection_matcher not in scorer_ids:
        scorer_ids.append(selection.selection_matcher)
    needs_training = LIKELIHOOD_ID in scorer_ids
    common = (config.registration, config.grid, workers)

    with _stage("generate", timings):
        _population(seed, config.population)
        if needs_training:
            _population(seed, config.training_population)
    with _stage("register", timings):
        population = _registered(seed, config.population, *common)
        if needs_training:
            _registered(seed, config.training_population, *common)

    shape_model = None
    if config.needs_model:
        with _stage("model", timings):
            shape_model = _shape_model(seed, config.population, *common, config.model.k)

    likelihood_model = None
    if LIKELIHOOD_ID in scorer_ids:
        with _stage("train", timings):
            likelihood_model = _likelihood_model(seed, config.training_population, *common, config.likelihood_matcher)

    bonafide = list(population.depth_maps)
    if config.model.reconstruct_bonafide:
        with _stage("model", timings):
            bonafide = [reconstruct(shape_model, fit_coefficients(shape_model, d)) for d in bonafide]

    scorers: Dict[str, _MatcherScorer] = {}
    features: Dict[str, np.ndarray] = {}
    with _stage("features", timings):
        for matcher_id in scorer_ids:
            scorers[matcher_id] = _MatcherScorer(matcher_id, likelihood_model, config.distance_matcher, workers)
            features[matcher_id] = scorers[matcher_id].features(bonafide)

    first, second, same_subject = _trial_indices(population.subjects)
    genuine: Dict[str, np.ndarray] = {}
    impostor: Dict[str, np.ndarray] = {}
    bonafide_scores: Dict[str, np.ndarray] = {}
    thresholds: Dict[str, float] = {}
    with _stage("calibrate", timings):
        for matcher_id, scorer in scorers.items():
            scores = scorer.score(features[matcher_id][first], features[matcher_id][second])
            bonafide_scores[matcher_id] = scores
            genuine[matcher_id] = scores[same_subject]
            impostor[matcher_id] = scores[~same_subject]
            thresholds[matcher_id] = calibrate_threshold(
                genuine[matcher_id], impostor[matcher_id], config.fmr_target, scorer.polarity
            )

    band = None
    pair_scores: Dict[Tuple[str, str], float] = {}
    with _stage("select", timings):
        subject_ids = population.subject_ids()
        if selection.mode == "lookalike":
            scorer = scorers[selection.selection_matcher]
            neutral = {s: population.index_of(s, 0) for s in subject_ids}
            candidates = list(itertools.combinations(subject_ids, 2))
            selection_features = features[selection.selection_matcher]
            values = scorer.score(
                selection_features[[neutral[a] for a, _ in candidates]],
                selection_features[[neutral[b] for _, b in candidates]],
            )
            pair_scores = {pair: float(v) for pair, v in zip(candidates, values)}
            band = lookalike_band(thresholds[selection.selection_matcher], selection, scorer.polarity)
            logger.info(f"Look-alike band ({band[0]:.6g}, {band[1]:.6g}) on {selection.selection_matcher} scores")
        selection_polarity = Polarity.SIMILARITY
        if selection.mode == "lookalike":
            selection_polarity = scorers[selection.selection_matcher].polarity
        pairs = select_pairs(subject_ids, selection, seed, pair_scores or None, band, selection_polarity)
        logger.info(f"Selected {len(pairs)} subject pairs ({selection.mode})")

    morph_ids = [f"m{index:04d}" for index in range(len(pairs))]
    with _stage("morph", timings):
        method = MorphMethod(config.morph.method)

        def make_morph(pair: Tuple[str, str]) -> DepthMap:
            a, b = pair
            spec: MorphSpec = config.morph.spec(a, b)
            face_a = population.depth_maps[population.index_of(a, 0)]
            face_b = population.depth_maps[population.index_of(b, 0)]
            if method is MorphMethod.DEPTH_AVERAGE:
                return depth_average(face_a, face_b, spec)
            return coefficient_average(shape_model, face_a, face_b, spec)[0]

        morphs = map_ordered(make_morph, pairs, workers)

    mated = {s: population.mated_indices(s) for s in population.subject_ids()}
    morph_rows: List[Tuple[int, str, int]] = [
        (m, subject, sample) for m, pair in enumerate(pairs) for subject in pair for sample in mated[subject]
    ]
    morph_index = np.array([row[0] for row in morph_rows], dtype=np.int64)
    sample_index = np.array([row[2] for row in morph_rows], dtype=np.int64)

    records: List[ScoreRecord] = []
    reports: Dict[str, MetricsReport] = {}
    with _stage("score", timings):
        trial_sets: Dict[str, TrialSet] = {}
        for matcher_id in config.matchers:
            scorer = scorers[matcher_id]
            morph_features = scorer.features(morphs)
            morph_scores = scorer.score(morph_features[morph_index], features[matcher_id][sample_index])
            per_morph: List[Dict[str, List[float]]] = [{a: [], b: []} for a, b in pairs]
            for (m, subject, _), score in zip(morph_rows, morph_scores):
                per_morph[m][subject].append(float(score))
            trial_sets[matcher_id] = TrialSet(
                matcher=matcher_id,
                polarity=scorer.polarity,
                genuine=genuine[matcher_id],
                impostor=impostor[matcher_id],
                morphs=[MorphTrial(morph_ids[m], scores) for m, scores in enumerate(per_morph)],
                score_range=scorer.score_range,
            )
            for i, j, score in zip(first, second, bonafide_scores[matcher_id]):
                records.append(
                    ScoreRecord(population.keys[i], population.keys[j], float(score), scorer.polarity, matcher_id)
                )
            for (m, _, sample), score in zip(morph_rows, morph_scores):
                records.append(
                    ScoreRecord(morph_ids[m], population.keys[sample], float(score), scorer.polarity, matcher_id)
                )

    with _stage("metrics", timings):
        for matcher_id, trials in trial_sets.items():
            reports[matcher_id] = evaluate_trials(trials, thresholds[matcher_id], config.histogram, config.fmr_target)

    report = {
        "experiment": config.name,
        "description": config.description,
        "seed": seed,
        "fmr_target": config.fmr_target,
        "morph": {"method": config.morph.method, "alpha": config.morph.alpha, "hole_policy": config.morph.hole_policy},
        "pairs": {"mode": selection.mode, "count": len(pairs), "band": list(band) if band is not None else None},
        "matchers": {matcher_id: reports[matcher_id].to_dict() for matcher_id in config.matchers},
        "reference": _reference_entry(config.name),
    }

    run_dir = None
    if write_artifacts:
        run_dir = os.path.join(output_dir or config.output_dir, config.name)
        with _stage("write", timings):
            write_scores_csv(records, os.path.join(run_dir, "scores.csv"))
            manifest = {
                "experiment": config.name,
                "config": config.to_dict(),
                "samples": {
                    key: {"subject_id": subject, "sample_id": sample}
                    for key, subject, sample in zip(population.keys, population.subjects, population.sample_ids)
                },
                "morphs": {
                    morph_ids[m]: {
                        "subjects": [a, b],
                        "source_samples": [
                            population.keys[population.index_of(a, 0)],
                            population.keys[population.index_of(b, 0)],
                        ],
                        "mated_samples": {s: [population.keys[i] for i in mated[s]] for s in (a, b)},
                        "selection_score": pair_scores.get((a, b)),
                    }
                    for m, (a, b) in enumerate(pairs)
                },
                "matchers": {
                    matcher_id: {
                        "polarity": scorers[matcher_id].polarity.value,
                        "threshold": thresholds[matcher_id],
                        "score_range": list(scorers[matcher_id].score_range),
                    }
                    for matcher_id in config.matchers
                },
            }
            write_json_file(os.path.join(run_dir, "manifest.json"), manifest)
            write_json_file(os.path.join(run_dir, "report.json"), report)
            for matcher_id, matcher_report in reports.items():
                write_text_file(
                    os.path.join(run_dir, "histograms", f"{matcher_id}.svg"), render_histogram_svg(matcher_report)
                )
        write_json_file(
            os.path.join(run_dir, "run-sidecar.json"),
            {"started": started, "stage_seconds": timings, "versions": _versions(), "workers": workers},
        )
        logger.info(f"Experiment '{config.name}' written to {run_dir}")

    result = ExperimentResult(config, reports, thresholds, pairs, report, run_dir)
    logger.debug(f"Returning value(s):\n  - Return = {json.dumps(report['matchers'], sort_keys=True)[:2000]}")
    return result


def evaluate_scores(
    scores_path: str,
    manifest_path: str,
    fmr_target: Optional[float] = None,
    tau: Optional[Dict[str, float]] = None,
    histogram_config: HistogramConfig = HistogramConfig(),
) -> Dict[str, MetricsReport]:
    """
    Rebuilds the trial sets of a score CSV from its manifest and evaluates them.

    Rows between two manifest samples are genuine or impostor trials; rows
    whose probe is a manifest morph are mated morph trials of the gallery
    sample's subject.

    Args:
        scores_path (str):
        \t\\- A scores.csv file.
        manifest_path (str):
        \t\\- The matching manifest.json.
        fmr_target (float, optional):
        \t\\- Calibration target. Defaults to the manifest configuration's target.
        tau (Dict[str, float], optional):
        \t\\- Fixed thresholds per matcher. Skips calibration for those matchers.
        histogram_config (HistogramConfig, optional):
        \t\\- Histogram binning.

    Raises:
        EmptyScoreSet:
        \t\\- The score file holds no score.
        MalformedFile:
        \t\\- A score row is not covered by the manifest.
        MissingMatedSamples:
        \t\\- A morph has no mated score for a contributing subject.

    Returns:
        Dict[str, MetricsReport]:
        \t\\- One report per matcher in the score file.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=scores_path, required_type=str, tb_remove_name="evaluate_scores")
    type_check(value=manifest_path, required_type=str, tb_remove_name="evaluate_scores")

    logger.debug(
        "Passing parameters:\n"
        f"  - scores_path (str):\n        - {scores_path}\n"
        f"  - manifest_path (str):\n        - {manifest_path}\n"
        f"  - fmr_target (float):\n        - {fmr_target}\n"
        f"  - tau (dict):\n        - {tau}\n"
    )

    records = read_scores_csv(scores_path)
    require_scores([r.score for r in records], "score file", "evaluate_scores")
    manifest = read_config_file(manifest_path)
    samples: Dict[str, dict] = manifest.get("samples", {})
    morphs: Dict[str, dict] = manifest.get("morphs", {})
    matcher_info: Dict[str, dict] = manifest.get("matchers", {})
    if fmr_target is None:
        fmr_target = float(manifest.get("config", {}).get("fmr_target", 0.001))

    by_matcher: Dict[str, dict] = {}
    for line_number, record in enumerate(records, start=2):
        entry = by_matcher.setdefault(
            record.matcher,
            {"polarity": as_polarity(record.polarity), "genuine": [], "impostor": [], "morphs": {}},
        )
        if record.probe_id in morphs and record.gallery_id in samples:
            subject = samples[record.gallery_id]["subject_id"]
            mated = morphs[record.probe_id]["mated_samples"].get(subject, [])
            if record.gallery_id in mated:
                entry["morphs"].setdefault(record.probe_id, {}).setdefault(subject, []).append(record.score)
                continue
        elif record.probe_id in samples and record.gallery_id in samples:
            same = samples[record.probe_id]["subject_id"] == samples[record.gallery_id]["subject_id"]
            entry["genuine" if same else "impostor"].append(record.score)
            continue
        exc_args = {
            "main_message": "A score row is not covered by the manifest.",
            "custom_type": MalformedFile,
            "expected_result": "manifest samples, or a manifest morph against one of its mated samples",
            "returned_result": f"line {line_number}: {record.probe_id}, {record.gallery_id}",
        }
        raise MalformedFile(FCustomException(message_args=exc_args, tb_remove_name="evaluate_scores"))

    reports: Dict[str, MetricsReport] = {}
    for matcher_id in sorted(by_matcher):
        entry = by_matcher[matcher_id]
        trials = []
        for morph_id in sorted(entry["morphs"], key=id_sort_key):
            scores = {subject: [] for subject in morphs[morph_id]["subjects"]}
            scores.update(entry["morphs"][morph_id])
            trials.append(MorphTrial(morph_id, scores))
        score_range = matcher_info.get(matcher_id, {}).get("score_range")
        trial_set = TrialSet(
            matcher=matcher_id,
            polarity=entry["polarity"],
            genuine=entry["genuine"],
            impostor=entry["impostor"],
            morphs=trials,
            score_range=tuple(score_range) if score_range else None,
        )
        if tau and matcher_id in tau:
            threshold = float(tau[matcher_id])
        else:
            threshold = calibrate_threshold(trial_set.genuine, trial_set.impostor, fmr_target, trial_set.polarity)
        reports[matcher_id] = evaluate_trials(trial_set, threshold, histogram_config, fmr_target)

    logger.debug(f"Returning value(s):\n  - Return = {sorted(reports)}")
    return reports


def list_presets() -> Dict[str, str]:
    """Returns the built-in preset names and their descriptions, in name order."""
    presets: Dict[str, str] = {}
    for entry in sorted(resources.files("morph3dkit").joinpath("presets").iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            presets[entry.name[: -len(".json")]] = json.loads(entry.read_text(encoding="utf-8")).get("description", "")
    return presets


def load_preset(name: str) -> ExperimentConfig:
    """
    Loads a built-in preset by name.

    Raises:
        InvalidConfig:
        \t\\- The preset does not exist.
    """
    type_check(value=name, required_type=str, tb_remove_name="load_preset")
    resource = resources.files("morph3dkit").joinpath("presets").joinpath(f"{name}.json")
    if not resource.is_file():
        exc_args = {
            "main_message": "The preset does not exist.",
            "custom_type": InvalidConfig,
            "expected_result": sorted(list_presets()),
            "returned_result": name,
        }
        raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="load_preset"))
    return parse_experiment_config(json.loads(resource.read_text(encoding="utf-8")))


def resolve_experiment(preset_or_path: str) -> ExperimentConfig:
    """A configuration file path when the file exists, otherwise a preset name."""
    if os.path.isfile(preset_or_path):
        return load_experiment_config(preset_or_path)
    return load_preset(preset_or_path)
