"""
This module is designed to train and run the region-vote likelihood ratio face matcher.

Every region of the depth map is its own classifier: PCA then LDA features,
and a log-likelihood ratio of the feature difference under a same-subject
Gaussian against a different-subject Gaussian. A region votes when its ratio
is above its calibrated threshold. The comparison score is the vote count.
"""
# Built-in/Generic Imports
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

# Libraries
import numpy as np
import scipy.linalg
from fchecker.type import type_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..helpers.sort_helper import id_sort_key
from ..geometry.depth_map import DepthMap, GridSpec, require_same_grid
from .yaml_director import read_package_yaml
from .file_director import write_model_file, read_model_file
from .thread_director import map_ordered
from .score_director import Polarity, ScoreRecord

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidConfig, ModelFormatFailure

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, likelihood_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.4"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

MATCHER_ID = "likelihood"
MODEL_KIND = "likelihood_matcher"
MODEL_FORMAT_VERSION = 1


class InsufficientTraining(Exception):
    """Exception raised when the training set cannot define the classifiers."""

    __module__ = "builtins"
    pass


@dataclass(frozen=True)
class LikelihoodMatcherConfig:
    """
    Likelihood matcher training parameters.

    Attributes:
        pca_dim (int):
        \t\\- PCA dimension per region (capped by the sample count).
        lda_dim (int):
        \t\\- LDA dimension per region (capped by the class count - 1).
        region_fmr_target (float):
        \t\\- Standalone false match rate of every region vote on held-out impostor pairs.
        holdout_fraction (float):
        \t\\- Share of training subjects held out for the vote threshold calibration.
        split_seed (int):
        \t\\- Seed of the subject split.
        regions (tuple, optional):
        \t\\- [x_min, y_min, x_max, y_max] rectangles. Defaults to the packaged 60-region table.
    """

    pca_dim: int = 30
    lda_dim: int = 5
    region_fmr_target: float = 0.25
    holdout_fraction: float = 0.25
    split_seed: int = 0
    regions: Optional[Tuple[Tuple[float, float, float, float], ...]] = None

    def __post_init__(self) -> None:
        if self.pca_dim < 1 or self.lda_dim < 1 or not (0.0 < self.region_fmr_target < 1.0) or not (0.0 <= self.holdout_fraction < 1.0):
            exc_args = {
                "main_message": "The likelihood matcher configuration is invalid.",
                "custom_type": InvalidConfig,
                "expected_result": "pca_dim >= 1, lda_dim >= 1, 0 < region_fmr_target < 1, 0 <= holdout_fraction < 1",
                "returned_result": self,
            }
            raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="__post_init__"))
        if self.regions is not None:
            object.__setattr__(self, "regions", tuple(tuple(float(v) for v in rect) for rect in self.regions))


def load_regions(config: Optional[LikelihoodMatcherConfig] = None) -> np.ndarray:
    """Returns the (R, 4) region rectangles from the config or the packaged table, in table order."""
    if config is not None and config.regions is not None:
        regions = np.array(config.regions, dtype=np.float64)
    else:
        table = read_package_yaml("likelihood_regions.yaml")
        regions = np.array([rect for group in table["groups"].values() for rect in group], dtype=np.float64)
    if regions.ndim != 2 or regions.shape[1] != 4 or len(regions) == 0:
        exc_args = {
            "main_message": "The region table is malformed.",
            "custom_type": InvalidConfig,
            "expected_result": "(R, 4) rectangles with R >= 1",
            "returned_result": regions.shape,
        }
        raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="load_regions"))
    return regions


def region_masks(regions: np.ndarray, grid: GridSpec) -> np.ndarray:
    """
    Cell masks of the region rectangles: cells whose center lies in the closed rectangle.

    Raises:
        InvalidConfig:
        \t\\- A region lies outside the grid or covers no cell.
    """
    x, y = np.meshgrid(grid.x_centers(), grid.y_centers())
    x_lo, x_hi = grid.origin_x, grid.origin_x + grid.width * grid.spacing_x
    y_lo, y_hi = grid.origin_y, grid.origin_y + grid.height * grid.spacing_y
    masks = []
    for index, (x_min, y_min, x_max, y_max) in enumerate(regions):
        mask = (x >= x_min) & (x <= x_max) & (y >= y_min) & (y <= y_max)
        inside = x_min >= x_lo and x_max <= x_hi and y_min >= y_lo and y_max <= y_hi and x_min < x_max and y_min < y_max
        if not inside or not np.any(mask):
            exc_args = {
                "main_message": "A region lies outside the grid or covers no cell.",
                "custom_type": InvalidConfig,
                "expected_result": f"x in [{x_lo}, {x_hi}], y in [{y_lo}, {y_hi}]",
                "returned_result": f"region {index}: {[x_min, y_min, x_max, y_max]}",
            }
            raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="region_masks"))
        masks.append(mask)
    return np.stack(masks)


@dataclass(frozen=True, eq=False)
class LikelihoodMatcherModel:
    """
    Trained region classifiers.

    Attributes:
        grid (GridSpec):
        \t\\- The depth grid.
        regions (np.ndarray):
        \t\\- (R, 4) rectangles.
        masks (np.ndarray):
        \t\\- (R, height, width) region cell masks.
        means (List[np.ndarray]):
        \t\\- Per region, the training mean of the region vector.
        projections (List[np.ndarray]):
        \t\\- Per region, (cells, L) PCA-then-LDA projection. Unused columns are zero.
        metrics (np.ndarray):
        \t\\- (R, L, L) quadratic form M = G^-1 - I^-1 of the ratio.
        constants (np.ndarray):
        \t\\- (R,) ratio constant 0.5 * (logdet I - logdet G).
        thresholds (np.ndarray):
        \t\\- (R,) vote thresholds.
    """

    grid: GridSpec
    regions: np.ndarray
    masks: np.ndarray
    means: List[np.ndarray]
    projections: List[np.ndarray]
    metrics: np.ndarray
    constants: np.ndarray
    thresholds: np.ndarray

    @property
    def n_regions(self) -> int:
        return int(len(self.regions))

    @property
    def feature_dim(self) -> int:
        return int(self.metrics.shape[1])


def _region_vectors(depth_maps: Sequence[DepthMap], mask: np.ndarray, fallback: Optional[np.ndarray] = None) -> np.ndarray:
    """Stacks region cells per face. HOLE cells take the mean of the face's valid region cells."""
    vectors = np.stack([depth_map.cells[mask] for depth_map in depth_maps])
    holes = np.isnan(vectors)
    if np.any(holes):
        valid_count = np.sum(~holes, axis=1)
        with np.errstate(invalid="ignore"):
            row_mean = np.nansum(vectors, axis=1) / np.maximum(valid_count, 1)
        vectors = np.where(holes, row_mean[:, None], vectors)
        empty = valid_count == 0
        if np.any(empty):
            vectors[empty] = fallback if fallback is not None else 0.0
    return vectors


def _sign_fix_columns(matrix: np.ndarray) -> np.ndarray:
    """Flips each column so its first element above 1e-8 of the column maximum is positive."""
    for column in matrix.T:
        magnitude = np.abs(column)
        if magnitude.max() == 0.0:
            continue
        first = int(np.argmax(magnitude > 1e-8 * magnitude.max()))
        if column[first] < 0:
            column *= -1.0
    return matrix


def _class_scatter(features: np.ndarray, labels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Within-class and between-class scatter matrices of features with integer labels."""
    dim = features.shape[1]
    overall = features.mean(axis=0)
    within = np.zeros((dim, dim))
    between = np.zeros((dim, dim))
    for label in np.unique(labels):
        members = features[labels == label]
        center = members.mean(axis=0)
        centered = members - center
        within += centered.T @ centered
        offset = (center - overall)[:, None]
        between += len(members) * (offset @ offset.T)
    return within, between


def _regularized(matrix: np.ndarray) -> np.ndarray:
    dim = len(matrix)
    return matrix + (1e-6 * np.trace(matrix) / dim + 1e-12) * np.eye(dim)


def _fit_region(vectors: np.ndarray, labels: np.ndarray, config: LikelihoodMatcherConfig, feature_dim: int):
    """PCA then LDA on one region, then the same/different-subject Gaussians of feature differences."""
    n, cells = vectors.shape
    n_classes = len(np.unique(labels))
    mean = vectors.mean(axis=0)
    centered = vectors - mean

    pca_dim = max(1, min(config.pca_dim, n - n_classes, cells))
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    pca = _sign_fix_columns(vt[:pca_dim].T.copy())
    reduced = centered @ pca

    within, between = _class_scatter(reduced, labels)
    regularization = 1e-6 * np.trace(within) / pca_dim + 1e-12
    eigenvalues, eigenvectors = scipy.linalg.eigh(between, within + regularization * np.eye(pca_dim))
    lda_dim = min(feature_dim, pca_dim)
    lda = _sign_fix_columns(eigenvectors[:, ::-1][:, :lda_dim].copy())

    projection = np.zeros((cells, feature_dim))
    projection[:, :lda_dim] = pca @ lda
    features = centered @ projection[:, :lda_dim]

    within_f, between_f = _class_scatter(features, labels)
    sigma_within = _regularized(within_f / max(n - n_classes, 1))
    sigma_between = _regularized(between_f / n)
    genuine_cov = 2.0 * sigma_within
    impostor_cov = 2.0 * (sigma_within + sigma_between)
    metric = np.zeros((feature_dim, feature_dim))
    metric[:lda_dim, :lda_dim] = np.linalg.inv(genuine_cov) - np.linalg.inv(impostor_cov)
    metric = 0.5 * (metric + metric.T)
    constant = 0.5 * (np.linalg.slogdet(impostor_cov)[1] - np.linalg.slogdet(genuine_cov)[1])
    return mean, projection, metric, float(constant)


def _ratio(differences: np.ndarray, metrics: np.ndarray, constants: np.ndarray) -> np.ndarray:
    """(P, R, L) feature differences -> (P, R) log-likelihood ratios."""
    quadratic = np.einsum("prl,rlm,prm->pr", differences, metrics, differences)
    return -0.5 * quadratic + constants[None, :]


def _impostor_pairs(labels: Sequence[str]) -> Tuple[np.ndarray, np.ndarray]:
    first, second = np.triu_indices(len(labels), k=1)
    labels = np.asarray(labels)
    keep = labels[first] != labels[second]
    return first[keep], second[keep]


def train_likelihood_matcher(
    training: Sequence[Tuple[str, DepthMap]],
    config: LikelihoodMatcherConfig = LikelihoodMatcherConfig(),
    workers: int = 1,
) -> LikelihoodMatcherModel:
    """
    Trains the region classifiers and calibrates their vote thresholds.

    Subjects with at least two samples are split by a seeded permutation into
    a fit set and a held-out set (a quarter, at least 2 subjects, when there
    are at least 4 subjects; otherwise the fit set is reused). Each region's
    vote threshold is the LLR that held-out impostor pairs exceed at the
    region_fmr_target rate.

    Args:
        training (Sequence[Tuple[str, DepthMap]]):
        \t\\- (subject id, registered depth map) pairs.
        config (LikelihoodMatcherConfig, optional):
        \t\\- Training parameters.
        workers (int, optional):
        \t\\- Worker threads across regions. Defaults to 1.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{config}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- The depth maps do not share one grid specification.
        InsufficientTraining:
        \t\\- Fewer than 2 subjects have 2 or more samples.

    Returns:
        LikelihoodMatcherModel:
        \t\\- The trained matcher.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=training, required_type=(list, tuple), tb_remove_name="train_likelihood_matcher")
    type_check(value=config, required_type=LikelihoodMatcherConfig, tb_remove_name="train_likelihood_matcher")

    logger.debug(
        "Passing parameters:\n"
        f"  - training (list):\n        - {len(training)} samples\n"
        f"  - config (LikelihoodMatcherConfig):\n        - {config}\n"
    )

    by_subject: Dict[str, List[DepthMap]] = {}
    for subject_id, depth_map in training:
        by_subject.setdefault(str(subject_id), []).append(depth_map)
    subjects = sorted((s for s, maps in by_subject.items() if len(maps) >= 2), key=id_sort_key)
    if len(subjects) < 2:
        exc_args = {
            "main_message": "Fewer than 2 subjects have 2 or more samples.",
            "custom_type": InsufficientTraining,
            "expected_result": ">= 2 subjects with >= 2 samples each",
            "returned_result": f"{len(subjects)} eligible subject(s) of {len(by_subject)}",
        }
        raise InsufficientTraining(FCustomException(message_args=exc_args, tb_remove_name="train_likelihood_matcher"))
    grid = require_same_grid("train_likelihood_matcher", *(m for s in subjects for m in by_subject[s]))

    order = np.random.default_rng(config.split_seed).permutation(len(subjects))
    n_holdout = 0
    if len(subjects) >= 4:
        n_holdout = min(max(2, int(round(config.holdout_fraction * len(subjects)))), len(subjects) - 2)
    holdout = sorted((subjects[i] for i in order[:n_holdout]), key=id_sort_key)
    fit = sorted((subjects[i] for i in order[n_holdout:]), key=id_sort_key)
    calibration = holdout if holdout else fit

    fit_maps = [m for s in fit for m in by_subject[s]]
    fit_labels = np.array([index for index, s in enumerate(fit) for _ in by_subject[s]])
    calibration_maps = [m for s in calibration for m in by_subject[s]]
    calibration_labels = [s for s in calibration for _ in by_subject[s]]
    feature_dim = max(1, min(config.lda_dim, len(fit) - 1))

    regions = load_regions(config)
    masks = region_masks(regions, grid)
    logger.info(
        f"Training {len(regions)} region classifiers on {len(fit)} subjects, "
        f"calibrating on {len(calibration)} {'held-out' if holdout else 'fit'} subjects"
    )

    def fit_one(mask: np.ndarray):
        return _fit_region(_region_vectors(fit_maps, mask), fit_labels, config, feature_dim)

    fitted = map_ordered(fit_one, list(masks), workers)
    means = [f[0] for f in fitted]
    projections = [f[1] for f in fitted]
    metrics = np.stack([f[2] for f in fitted])
    constants = np.array([f[3] for f in fitted])

    untuned = LikelihoodMatcherModel(grid, regions, masks, means, projections, metrics, constants, np.zeros(len(regions)))
    features = extract_features(untuned, calibration_maps)
    first, second = _impostor_pairs(calibration_labels)
    ratios = _ratio(features[first] - features[second], metrics, constants)
    thresholds = np.quantile(ratios, 1.0 - config.region_fmr_target, axis=0, method="higher")

    model = LikelihoodMatcherModel(grid, regions, masks, means, projections, metrics, constants, thresholds)
    logger.debug(f"Returning value(s):\n  - Return = {model.n_regions} regions, feature dimension {model.feature_dim}")
    return model


def extract_features(model: LikelihoodMatcherModel, depth_maps: Sequence[DepthMap]) -> np.ndarray:
    """
    Projects faces into every region's feature space.

    Raises:
        GridMismatch:
        \t\\- A face is not on the model grid.

    Returns:
        np.ndarray:
        \t\\- (faces, R, L) features.
    """
    require_same_grid("extract_features", model.grid, *depth_maps)
    features = np.zeros((len(depth_maps), model.n_regions, model.feature_dim))
    if not depth_maps:
        return features
    for index, (mask, mean, projection) in enumerate(zip(model.masks, model.means, model.projections)):
        vectors = _region_vectors(depth_maps, mask, fallback=mean)
        features[:, index, :] = (vectors - mean) @ projection
    return features


def score_feature_pairs(
    model: LikelihoodMatcherModel, features_a: np.ndarray, features_b: np.ndarray
) -> np.ndarray:
    """Vote counts of aligned feature rows: score of features_a[i] against features_b[i]."""
    ratios = _ratio(features_a - features_b, model.metrics, model.constants)
    return np.count_nonzero(ratios > model.thresholds[None, :], axis=1).astype(np.float64)


def score_likelihood(
    model: LikelihoodMatcherModel,
    probe: DepthMap,
    gallery: DepthMap,
    probe_id: str = "probe",
    gallery_id: str = "gallery",
) -> ScoreRecord:
    """
    Compares two faces: the number of regions whose likelihood ratio is above its threshold.

    The score lies in [0, R] and is symmetric in its arguments.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{model}' is not an instance of the required class(es) or subclass(es).
        GridMismatch:
        \t\\- A face is not on the model grid.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=model, required_type=LikelihoodMatcherModel, tb_remove_name="score_likelihood")
    type_check(value=probe, required_type=DepthMap, tb_remove_name="score_likelihood")
    type_check(value=gallery, required_type=DepthMap, tb_remove_name="score_likelihood")

    logger.debug(
        "Passing parameters:\n"
        f"  - probe_id (str):\n        - {probe_id}\n"
        f"  - gallery_id (str):\n        - {gallery_id}\n"
    )

    features = extract_features(model, [probe, gallery])
    score = float(score_feature_pairs(model, features[:1], features[1:])[0])
    record = ScoreRecord(probe_id, gallery_id, score, Polarity.SIMILARITY, MATCHER_ID)
    logger.debug(f"Returning value(s):\n  - Return = {record}")
    return record


def save_likelihood_model(model: LikelihoodMatcherModel, path: str) -> None:
    """Saves a likelihood matcher to a versioned .npz container."""
    type_check(value=model, required_type=LikelihoodMatcherModel, tb_remove_name="save_likelihood_model")
    grid = model.grid
    write_model_file(
        path,
        MODEL_KIND,
        MODEL_FORMAT_VERSION,
        {
            "grid": np.array(
                [grid.width, grid.height, grid.origin_x, grid.origin_y, grid.spacing_x, grid.spacing_y], dtype=np.float64
            ),
            "regions": model.regions,
            "masks": model.masks,
            "means": np.concatenate(model.means),
            "projections": np.concatenate(model.projections, axis=0),
            "metrics": model.metrics,
            "constants": model.constants,
            "thresholds": model.thresholds,
        },
    )


def load_likelihood_model(path: str) -> LikelihoodMatcherModel:
    """
    Loads a likelihood matcher saved by save_likelihood_model.

    Raises:
        ModelFormatFailure:
        \t\\- The container is unreadable, of another kind or version, or inconsistent.
    """
    arrays = read_model_file(
        path,
        MODEL_KIND,
        MODEL_FORMAT_VERSION,
        ("grid", "regions", "masks", "means", "projections", "metrics", "constants", "thresholds"),
    )
    width, height, origin_x, origin_y, spacing_x, spacing_y = arrays["grid"].tolist()
    grid = GridSpec(int(width), int(height), origin_x, origin_y, spacing_x, spacing_y)
    masks = arrays["masks"].astype(bool)
    sizes = masks.reshape(len(masks), -1).sum(axis=1)
    n_cells = int(sizes.sum())
    if (
        masks.shape[1:] != grid.shape
        or len(arrays["means"]) != n_cells
        or arrays["projections"].shape[0] != n_cells
        or len(arrays["regions"]) != len(masks)
    ):
        exc_args = {
            "main_message": "The likelihood matcher arrays are inconsistent.",
            "custom_type": ModelFormatFailure,
            "expected_result": f"{n_cells} region cells over grid {grid.shape}",
            "returned_result": f"masks {masks.shape}, means {arrays['means'].shape}, projections {arrays['projections'].shape}",
        }
        raise ModelFormatFailure(FCustomException(message_args=exc_args, tb_remove_name="load_likelihood_model"))
    splits = np.cumsum(sizes)[:-1]
    return LikelihoodMatcherModel(
        grid,
        arrays["regions"],
        masks,
        np.split(arrays["means"], splits),
        np.split(arrays["projections"], splits, axis=0),
        arrays["metrics"],
        arrays["constants"],
        arrays["thresholds"],
    )
