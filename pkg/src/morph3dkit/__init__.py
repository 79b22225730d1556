__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, morph3dkit"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.0"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

import logging

# Logging configuration
log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

# Function & Methods
from .helpers.py_helper import get_function_name, summarize_value
from .helpers.sort_helper import id_sort_key
from .geometry.transform import compose
from .geometry.mesh import apply_transform, grid_triangulation
from .geometry.depth_map import depth_rms, require_same_grid
from .directors.mesh_io_director import read_mesh, write_mesh, read_depth_csv, write_depth_csv
from .directors.synth_director import (
    generate_population,
    ground_truth,
    export_population,
    subject_params,
    face_surface,
    canonical_mesh,
    nose_apex,
    noise_profile,
    sample_key,
)
from .directors.registration_director import (
    extract_roi,
    find_symmetry_plane,
    detect_nose_features,
    register,
    rasterize,
    register_and_rasterize,
    register_batch,
)
from .directors.shape_model_director import (
    build_model,
    fit_coefficients,
    reconstruct,
    explained_variance,
    reconstruction_rms,
    save_model,
    load_model,
)
from .directors.morph_director import depth_average, coefficient_average, morph_to_mesh, boundary_discontinuity
from .directors.likelihood_director import (
    train_likelihood_matcher,
    extract_features,
    score_feature_pairs,
    score_likelihood,
    save_likelihood_model,
    load_likelihood_model,
    load_regions,
    region_masks,
)
from .directors.distance_director import distance_descriptor, cosine_distance, score_distance, score_descriptor_pairs
from .directors.score_director import (
    as_polarity,
    is_match,
    calibrate_threshold,
    write_scores_csv,
    read_scores_csv,
)
from .directors.metrics_director import fmr, fnmr, mmpmr, rmmr, histogram, evaluate_trials, build_report
from .directors.config_director import parse_experiment_config, load_experiment_config, read_config_file
from .directors.experiment_director import (
    select_pairs,
    lookalike_band,
    run_experiment,
    evaluate_scores,
    build_population_model,
    list_presets,
    load_preset,
    resolve_experiment,
    clear_preparation_cache,
)
from .directors.template_director import render_template, render_histogram_svg
from .directors.file_director import write_text_file, write_json_file, write_model_file, read_model_file
from .directors.log_director import create_logger, setup_logger_yaml
from .directors.thread_director import map_ordered
from .directors.yaml_director import read_yaml_config, read_package_yaml

# Dataclasses & NamedTuples
from .geometry.transform import RigidTransform
from .geometry.mesh import TriMesh
from .geometry.depth_map import HOLE, GridSpec, DepthMap, DEFAULT_GRID
from .directors.synth_director import SubjectParams, SampleNoise, SyntheticSample, SyntheticPopulation, NOISE_PROFILES
from .directors.registration_director import RegistrationConfig, SymmetryPlane, IntrinsicRegistration
from .directors.shape_model_director import ShapeModel, CoefficientVector
from .directors.morph_director import MorphMethod, HolePolicy, MorphSpec
from .directors.likelihood_director import LikelihoodMatcherConfig, LikelihoodMatcherModel
from .directors.distance_director import DistanceMatcherConfig
from .directors.score_director import Polarity, ScoreRecord
from .directors.metrics_director import MorphTrial, TrialSet, HistogramConfig, HistogramCounts, MetricsReport
from .directors.config_director import (
    ExperimentConfig,
    PopulationConfig,
    MorphConfig,
    PairSelectionConfig,
    ModelConfig,
)
from .directors.experiment_director import ExperimentResult, RegisteredPopulation

# Exceptions
from .geometry.exceptions import InvalidGeometry, GridMismatch
from .directors.exceptions import InvalidConfig, UsageError, ModelFormatFailure
from .directors.mesh_io_director import MalformedFile, UnsupportedFormat, EmptyMesh, IoFailure
from .directors.synth_director import UnknownId
from .directors.registration_director import EmptyRoi, NoConvergence, NoNoseFound, EmptyProjection
from .directors.shape_model_director import InsufficientData, LengthMismatch
from .directors.morph_director import InvalidMorphSpec, DegenerateSurface
from .directors.likelihood_director import InsufficientTraining
from .directors.distance_director import DegenerateDescriptor
from .directors.score_director import EmptyScoreSet
from .directors.metrics_director import MissingMatedSamples, InvalidRange
from .directors.config_director import ConfigReadFailure
from .directors.experiment_director import NoEligiblePairs, ExperimentStageFailure
from .directors.template_director import TemplateRenderFailure
from .directors.file_director import FileWriteFailure
from .directors.log_director import LoggerSetupFailure
from .directors.thread_director import ParallelTaskFailure
from .directors.yaml_director import YamlReadFailure
