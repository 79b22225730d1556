"""
This module is designed to read and validate experiment configurations.

Configurations are JSON (or YAML with the same schema) documents with
schema_version 1. Every section maps to a frozen dataclass. Unknown keys at
any level are errors.
"""
# Built-in/Generic Imports
import os
import json
import logging
from dataclasses import dataclass, field, fields, asdict, is_dataclass
from typing import Any, Dict, Optional, Tuple, Union

# Libraries
from fchecker.type import type_check
from fchecker.file import file_check

# Local Functions
from ..helpers.py_helper import get_function_name
from ..geometry.depth_map import GridSpec
from .synth_director import SampleNoise, noise_profile
from .registration_director import RegistrationConfig
from .likelihood_director import LikelihoodMatcherConfig, MATCHER_ID as LIKELIHOOD_ID
from .distance_director import DistanceMatcherConfig, MATCHER_ID as DISTANCE_ID
from .morph_director import MorphSpec
from .metrics_director import HistogramConfig
from .yaml_director import read_yaml_config

# Exceptions
from fexception import FCustomException
from .exceptions import InvalidConfig

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, config_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.0"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

SCHEMA_VERSION = 1
MATCHER_IDS = (LIKELIHOOD_ID, DISTANCE_ID)
PAIR_MODES = ("random", "all", "lookalike")


class ConfigReadFailure(Exception):
    """Exception raised when a configuration file cannot be parsed."""

    __module__ = "builtins"
    pass


def _invalid(main_message: str, expected_result: Any, returned_result: Any, tb_remove_name: str = "__post_init__"):
    exc_args = {
        "main_message": main_message,
        "custom_type": InvalidConfig,
        "expected_result": expected_result,
        "returned_result": returned_result,
    }
    raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name=tb_remove_name))


@dataclass(frozen=True)
class PopulationConfig:
    """
    Synthetic population size and acquisition noise.

    Attributes:
        n_subjects (int):
        \t\\- Subject count.
        samples_per_subject (int):
        \t\\- Samples per subject. Sample 0 is the neutral sample morphs are built from.
        noise (Union[str, SampleNoise]):
        \t\\- A profile name (zero, controlled, uncontrolled) or SampleNoise fields.
        id_prefix (str):
        \t\\- Subject id prefix.
        seed_offset (int):
        \t\\- Added to the experiment seed.
    """

    n_subjects: int = 40
    samples_per_subject: int = 3
    noise: Union[str, SampleNoise] = "uncontrolled"
    id_prefix: str = "s"
    seed_offset: int = 0

    def __post_init__(self) -> None:
        # Resolves early so a bad profile fails at load time.
        resolved = noise_profile(self.noise)
        if isinstance(self.noise, dict):
            object.__setattr__(self, "noise", resolved)
        if self.n_subjects < 2 or self.samples_per_subject < 1:
            _invalid(
                "The population size is invalid.",
                "n_subjects >= 2 and samples_per_subject >= 1",
                f"n_subjects={self.n_subjects}, samples_per_subject={self.samples_per_subject}",
            )

    @property
    def sample_noise(self) -> SampleNoise:
        return noise_profile(self.noise)


def _default_training() -> PopulationConfig:
    return PopulationConfig(n_subjects=30, samples_per_subject=3, id_prefix="t", seed_offset=1)


@dataclass(frozen=True)
class MorphConfig:
    """Morph method, weight and hole policy. Converted to a MorphSpec per pair."""

    method: str = "depth_average"
    alpha: float = 0.5
    hole_policy: str = "union"

    def __post_init__(self) -> None:
        spec = self.spec()
        object.__setattr__(self, "method", spec.method.value)
        object.__setattr__(self, "hole_policy", spec.hole_policy.value)

    def spec(self, subject_a: Optional[str] = None, subject_b: Optional[str] = None) -> MorphSpec:
        return MorphSpec(self.method, self.alpha, self.hole_policy, subject_a, subject_b)


@dataclass(frozen=True)
class PairSelectionConfig:
    """
    Which subject pairs are morphed.

    Attributes:
        mode (str):
        \t\\- random: n_pairs distinct pairs sampled with the experiment seed.\\
        \t\\- all: every subject pair.\\
        \t\\- lookalike: pairs whose selection score lies strictly inside the band.
        n_pairs (int):
        \t\\- Pair count of the random mode.
        selection_matcher (str):
        \t\\- Matcher scoring the neutral samples in lookalike mode.
        band (Tuple[float, float], optional):
        \t\\- Absolute (lo, hi) band. Overrides band_fractions.
        band_fractions (Tuple[float, float]):
        \t\\- Band relative to the calibrated threshold of the selection matcher.
        max_pairs (int, optional):
        \t\\- Caps the lookalike pair count.
    """

    mode: str = "random"
    n_pairs: int = 60
    selection_matcher: str = LIKELIHOOD_ID
    band: Optional[Tuple[float, float]] = None
    band_fractions: Tuple[float, float] = (0.375, 0.875)
    max_pairs: Optional[int] = None

    def __post_init__(self) -> None:
        if self.mode not in PAIR_MODES:
            _invalid("The pair selection mode is not recognized.", list(PAIR_MODES), self.mode)
        if self.n_pairs < 1 or (self.max_pairs is not None and self.max_pairs < 1):
            _invalid("The pair count must be positive.", "n_pairs >= 1, max_pairs >= 1", f"{self.n_pairs}, {self.max_pairs}")
        if self.selection_matcher not in MATCHER_IDS:
            _invalid("The selection matcher is not recognized.", list(MATCHER_IDS), self.selection_matcher)
        if self.band is not None:
            band = tuple(float(v) for v in self.band)
            if len(band) != 2 or not band[0] < band[1]:
                _invalid("The look-alike band needs lo < hi.", "[lo, hi] with lo < hi", self.band)
            object.__setattr__(self, "band", band)
        fractions = tuple(float(v) for v in self.band_fractions)
        # hi below 1 keeps already matching pairs out of the band.
        if len(fractions) != 2 or not (0.0 <= fractions[0] < fractions[1] < 1.0):
            _invalid("The look-alike band fractions are invalid.", "0 <= lo < hi < 1", self.band_fractions)
        object.__setattr__(self, "band_fractions", fractions)


@dataclass(frozen=True)
class ModelConfig:
    """
    Shape model settings.

    The model is built over the neutral samples of the evaluation population;
    k is capped at the subject count - 1.

    reconstruct_bonafide replaces every bona fide face by its model
    reconstruction, so bona fide and morph faces are both model generated.
    """

    k: int = 20
    reconstruct_bonafide: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            _invalid("The shape model needs at least one component.", "k >= 1", self.k)


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One end-to-end experiment.

    Attributes:
        name (str):
        \t\\- Experiment name, used for the output folder.
        description (str):
        \t\\- Free text documenting what the experiment mirrors.
        seed (int):
        \t\\- Seed of the population, the training population and the random pair choice.
        fmr_target (float):
        \t\\- Target false match rate of the threshold calibration.
        matchers (Tuple[str, ...]):
        \t\\- Evaluated matchers.
        output_dir (str):
        \t\\- Parent folder of the run output.
        workers (int):
        \t\\- Worker threads for registration and region training.
    """

    name: str = "experiment"
    description: str = ""
    schema_version: int = SCHEMA_VERSION
    seed: int = 7
    population: PopulationConfig = field(default_factory=PopulationConfig)
    training_population: PopulationConfig = field(default_factory=_default_training)
    morph: MorphConfig = field(default_factory=MorphConfig)
    pairs: PairSelectionConfig = field(default_factory=PairSelectionConfig)
    matchers: Tuple[str, ...] = MATCHER_IDS
    fmr_target: float = 0.001
    model: ModelConfig = field(default_factory=ModelConfig)
    registration: RegistrationConfig = field(default_factory=RegistrationConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    likelihood_matcher: LikelihoodMatcherConfig = field(default_factory=LikelihoodMatcherConfig)
    distance_matcher: DistanceMatcherConfig = field(default_factory=DistanceMatcherConfig)
    histogram: HistogramConfig = field(default_factory=HistogramConfig)
    output_dir: str = "runs"
    workers: int = 1

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            _invalid("The configuration schema version is not supported.", SCHEMA_VERSION, self.schema_version)
        matchers = tuple(self.matchers)
        if not matchers or any(m not in MATCHER_IDS for m in matchers) or len(set(matchers)) != len(matchers):
            _invalid("The matcher list is invalid.", f"distinct values from {list(MATCHER_IDS)}", list(matchers))
        object.__setattr__(self, "matchers", matchers)
        if isinstance(self.fmr_target, bool) or not (0.0 <= float(self.fmr_target) <= 1.0):
            _invalid("The FMR target is outside [0, 1].", "0 <= fmr_target <= 1", self.fmr_target)
        if self.workers < 1:
            _invalid("The worker count must be positive.", "workers >= 1", self.workers)
        if self.population.samples_per_subject < 2:
            _invalid(
                "Morph trials need mated samples beyond the neutral sample.",
                "population.samples_per_subject >= 2",
                self.population.samples_per_subject,
            )
        if self.population.id_prefix == self.training_population.id_prefix:
            _invalid(
                "Training subjects must be disjoint from evaluation subjects.",
                "different id prefixes",
                self.population.id_prefix,
            )

    @property
    def needs_model(self) -> bool:
        return self.morph.method == "coefficient_average" or self.model.reconstruct_bonafide

    def to_dict(self) -> dict:
        return _plain(asdict(self))


# Section key -> dataclass of ExperimentConfig.
SECTION_TYPES = {
    "population": PopulationConfig,
    "training_population": PopulationConfig,
    "morph": MorphConfig,
    "pairs": PairSelectionConfig,
    "model": ModelConfig,
    "registration": RegistrationConfig,
    "grid": GridSpec,
    "likelihood_matcher": LikelihoodMatcherConfig,
    "distance_matcher": DistanceMatcherConfig,
    "histogram": HistogramConfig,
}


def _plain(value: Any) -> Any:
    """Tuples to lists, recursively, for JSON output."""
    if isinstance(value, dict):
        return {key: _plain(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(val) for val in value]
    return value


def _frozen(value: Any) -> Any:
    """Lists to tuples, recursively, so sections stay hashable."""
    if isinstance(value, list):
        return tuple(_frozen(val) for val in value)
    return value


def _build_section(section_type: type, section_name: str, values: Any):
    """
    Creates a section dataclass from a dictionary.

    Keys are compared against the dataclass fields the same way the dynamic
    dataclass builder compares required keys.
    """
    if is_dataclass(values) and isinstance(values, section_type):
        return values
    if not isinstance(values, dict):
        _invalid(f"The {section_name} section must be a mapping.", "dict", type(values).__name__, "_build_section")
    field_names = {f.name for f in fields(section_type)}
    unknown = set(values) - field_names
    if unknown:
        _invalid(
            f"{section_name} got an unexpected keyword argument.",
            str(sorted(field_names)).replace("[", "").replace("]", ""),
            str(sorted(unknown)).replace("[", "").replace("]", ""),
            "_build_section",
        )
    # The population noise may be a nested mapping of SampleNoise fields.
    arguments = {key: value if isinstance(value, dict) else _frozen(value) for key, value in values.items()}
    try:
        return section_type(**arguments)
    except (TypeError, ValueError) as exc:
        exc_args = {
            "main_message": f"The {section_name} section has an invalid value.",
            "custom_type": InvalidConfig,
            "original_exception": exc,
        }
        raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="_build_section"))


def parse_experiment_config(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Validates a configuration dictionary and builds the ExperimentConfig.

    Missing sections take their defaults.

    Args:
        data (Dict[str, Any]):
        \t\\- The decoded configuration document.

    Raises:
        FTypeError (fexception):
        \t\\- The object value '{data}' is not an instance of the required class(es) or subclass(es).
        InvalidConfig:
        \t\\- ExperimentConfig got an unexpected keyword argument.
        InvalidConfig:
        \t\\- A section is invalid.

    Returns:
        ExperimentConfig:
        \t\\- The validated configuration.
    """
    logger = logging.getLogger(__name__)
    logger.debug(f"=" * 20 + get_function_name() + "=" * 20)
    # Custom flowchart tracking. This is ideal for large projects that move a lot.
    # For any third-party modules, set the flow before making the function call.
    logger_flowchart = logging.getLogger("flowchart")
    logger_flowchart.debug(f"Flowchart --> Function: {get_function_name()}")

    type_check(value=data, required_type=dict, tb_remove_name="parse_experiment_config")

    formatted_data = "  - data (dict):\n        - " + "\n        - ".join(
        ": ".join((str(key), str(val))) for (key, val) in data.items()
    )
    logger.debug("Passing parameters:\n" f"{formatted_data}\n")

    if "schema_version" not in data:
        _invalid(
            "The configuration does not declare a schema version.",
            f"schema_version: {SCHEMA_VERSION}",
            sorted(data),
            "parse_experiment_config",
        )
    field_names = {f.name for f in fields(ExperimentConfig)}
    unknown = set(data) - field_names
    if unknown:
        _invalid(
            "ExperimentConfig got an unexpected keyword argument.",
            str(sorted(field_names)).replace("[", "").replace("]", ""),
            str(sorted(unknown)).replace("[", "").replace("]", ""),
            "parse_experiment_config",
        )

    arguments: Dict[str, Any] = {}
    for key, value in data.items():
        if key in SECTION_TYPES:
            arguments[key] = _build_section(SECTION_TYPES[key], key, value)
        else:
            arguments[key] = _frozen(value)
    try:
        config = ExperimentConfig(**arguments)
    except (TypeError, ValueError) as exc:
        exc_args = {
            "main_message": "The experiment configuration has an invalid value.",
            "custom_type": InvalidConfig,
            "original_exception": exc,
        }
        raise InvalidConfig(FCustomException(message_args=exc_args, tb_remove_name="parse_experiment_config"))

    logger.debug(f"Returning value(s):\n  - Return = {config}")
    return config


def read_config_file(config_path: str) -> Dict[str, Any]:
    """
    Reads a JSON, .yaml or .yml configuration document.

    Raises:
        FFileNotFoundError (fexception):
        \t\\- The configuration file does not exist.
        ConfigReadFailure:
        \t\\- The configuration file is not valid JSON.
        ConfigReadFailure:
        \t\\- The configuration document is not a mapping.
        YamlReadFailure:
        \t\\- The YAML punctuation or indentation is invalid.
    """
    type_check(value=config_path, required_type=str, tb_remove_name="read_config_file")
    file_check(config_path)
    if os.path.splitext(config_path)[1].lower() in (".yaml", ".yml"):
        data = read_yaml_config(config_path, "SafeLoader")
    else:
        try:
            with open(config_path, "r", encoding="utf-8") as file:
                data = json.load(file)
        except json.JSONDecodeError as exc:
            exc_args = {
                "main_message": "The configuration file is not valid JSON.",
                "custom_type": ConfigReadFailure,
                "original_exception": exc,
                "returned_result": config_path,
            }
            raise ConfigReadFailure(FCustomException(message_args=exc_args, tb_remove_name="read_config_file"))
    if not isinstance(data, dict):
        exc_args = {
            "main_message": "The configuration document is not a mapping.",
            "custom_type": ConfigReadFailure,
            "expected_result": "dict",
            "returned_result": type(data).__name__,
        }
        raise ConfigReadFailure(FCustomException(message_args=exc_args, tb_remove_name="read_config_file"))
    return data


def load_experiment_config(config_path: str) -> ExperimentConfig:
    """Reads and validates a configuration file."""
    return parse_experiment_config(read_config_file(config_path))
