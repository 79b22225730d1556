"""
Command line front end of morph3dkit.

Exit codes: 0 on success, 2 for usage errors and 1 for any stage failure.
Failures print "<stage>: <ErrorClass>: <message>" on stderr.
"""
# Built-in/Generic Imports
import os
import sys
import json
import logging
import argparse
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

# Local Functions
from .geometry.depth_map import DepthMap
from .geometry.mesh import apply_transform
from .directors.log_director import create_logger, setup_logger_yaml
from .directors.mesh_io_director import read_mesh, write_mesh, read_depth_csv, write_depth_csv
from .directors.synth_director import NOISE_PROFILES, export_population, generate_population, noise_profile
from .directors.registration_director import register, rasterize, register_and_rasterize
from .directors.shape_model_director import build_model, load_model, save_model, explained_variance
from .directors.morph_director import MorphMethod, MorphSpec, depth_average, coefficient_average, morph_to_mesh
from .directors.likelihood_director import (
    LikelihoodMatcherConfig,
    load_likelihood_model,
    save_likelihood_model,
    score_likelihood,
    train_likelihood_matcher,
)
from .directors.distance_director import score_distance
from .directors.score_director import SCORE_CSV_HEADER, write_scores_csv
from .directors.metrics_director import HistogramConfig
from .directors.experiment_director import (
    ExperimentStageFailure,
    evaluate_scores,
    list_presets,
    resolve_experiment,
    run_experiment,
)
from .directors.file_director import write_json_file

# Exceptions
from fexception import FCustomException
from .directors.exceptions import UsageError

__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, cli"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "1.0"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def _usage_error(main_message: str, returned_result) -> UsageError:
    exc_args = {
        "main_message": main_message,
        "custom_type": UsageError,
        "returned_result": returned_result,
        "suggested_resolution": "Run the subcommand with --help for its arguments.",
    }
    return UsageError(FCustomException(message_args=exc_args, tb_remove_name="_usage_error"))


def _load_face(path: str) -> DepthMap:
    """Depth CSV files load as they are; mesh files are registered and rasterized on the default grid."""
    if path.lower().endswith(".csv"):
        return read_depth_csv(path)
    return register_and_rasterize(read_mesh(path))[1]


def _subject_of(path: str) -> str:
    """Subject id of a '<subject>_<sample>.<ext>' file name."""
    stem = os.path.splitext(os.path.basename(path))[0]
    if "_" not in stem:
        raise _usage_error("Training file names must look like <subject>_<sample>.<ext>.", path)
    return stem.rsplit("_", 1)[0]


def _parse_taus(values: Optional[List[str]]) -> Optional[Dict[str, float]]:
    if not values:
        return None
    taus: Dict[str, float] = {}
    for value in values:
        matcher, _, number = value.partition("=")
        try:
            taus[matcher] = float(number)
        except ValueError:
            raise _usage_error("A threshold must look like <matcher>=<value>.", value)
    return taus


def _cmd_synth(args: argparse.Namespace) -> None:
    population = generate_population(args.seed, args.subjects, args.samples, noise_profile(args.noise), args.prefix)
    paths = export_population(population, args.out)
    print(f"wrote {len(paths)} meshes to {args.out}")


def _cmd_register(args: argparse.Namespace) -> None:
    mesh = read_mesh(args.mesh)
    registration = register(mesh)
    write_depth_csv(rasterize(mesh, registration), args.out)
    if args.mesh_out:
        write_mesh(apply_transform(mesh, registration.transform), args.mesh_out)
    print(
        json.dumps(
            {
                "nose_tip": [float(v) for v in registration.nose_tip],
                "residual": registration.residual,
                "bridge_slope": registration.bridge_slope,
                "transform": registration.transform.to_dict(),
            },
            sort_keys=True,
        )
    )


def _cmd_build_model(args: argparse.Namespace) -> None:
    model = build_model([_load_face(path) for path in args.faces], args.k)
    save_model(model, args.out)
    print(f"k={model.k} explained_variance={[round(float(v), 6) for v in explained_variance(model)]}")


def _cmd_morph(args: argparse.Namespace) -> None:
    spec = MorphSpec(args.method, args.alpha, args.hole_policy)
    face_a, face_b = _load_face(args.a), _load_face(args.b)
    if spec.method is MorphMethod.COEFFICIENT_AVERAGE:
        if not args.model:
            raise _usage_error("The coefficient method needs --model.", args.method)
        morph = coefficient_average(load_model(args.model), face_a, face_b, spec)[0]
    else:
        morph = depth_average(face_a, face_b, spec)
    if args.out.lower().endswith(".csv"):
        write_depth_csv(morph, args.out)
    else:
        write_mesh(morph_to_mesh(morph), args.out)
    print(f"wrote {args.out}")


def _cmd_train_matcher(args: argparse.Namespace) -> None:
    training = [(_subject_of(path), _load_face(path)) for path in args.faces]
    config = LikelihoodMatcherConfig(pca_dim=args.pca_dim, lda_dim=args.lda_dim, region_fmr_target=args.region_fmr)
    model = train_likelihood_matcher(training, config, args.workers)
    save_likelihood_model(model, args.out)
    print(f"trained {model.n_regions} regions, feature dimension {model.feature_dim}")


def _cmd_match(args: argparse.Namespace) -> None:
    probe, gallery = _load_face(args.probe), _load_face(args.gallery)
    probe_id = os.path.splitext(os.path.basename(args.probe))[0]
    gallery_id = os.path.splitext(os.path.basename(args.gallery))[0]
    if args.matcher == "likelihood":
        if not args.model:
            raise _usage_error("The likelihood matcher needs --model.", args.matcher)
        record = score_likelihood(load_likelihood_model(args.model), probe, gallery, probe_id, gallery_id)
    else:
        record = score_distance(probe, gallery, probe_id=probe_id, gallery_id=gallery_id)
    if args.scores_out:
        write_scores_csv([record], args.scores_out)
    print(",".join(SCORE_CSV_HEADER))
    print(f"{record.probe_id},{record.gallery_id},{record.matcher},{record.polarity.value},{record.score:.17g}")


def _cmd_evaluate(args: argparse.Namespace) -> None:
    reports = evaluate_scores(
        args.scores,
        args.manifest,
        fmr_target=args.fmr_target,
        tau=_parse_taus(args.tau),
        histogram_config=HistogramConfig(bins=args.bins),
    )
    output = {matcher: report.to_dict() for matcher, report in reports.items()}
    if args.out:
        write_json_file(args.out, output)
    for matcher, report in reports.items():
        print(
            f"{matcher}: tau={report.threshold:.6g} FMR={report.fmr * 100:.2f}% FNMR={report.fnmr * 100:.2f}% "
            f"MMPMR={report.mmpmr * 100:.2f}% RMMR={report.rmmr * 100:.2f}%"
        )


def _cmd_experiment_run(args: argparse.Namespace) -> None:
    config = resolve_experiment(args.experiment)
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    result = run_experiment(config, output_dir=args.out)
    for matcher, report in result.reports.items():
        print(
            f"{config.name} {matcher}: tau={report.threshold:.6g} FMR={report.fmr * 100:.2f}% "
            f"FNMR={report.fnmr * 100:.2f}% MMPMR={report.mmpmr * 100:.2f}% RMMR={report.rmmr * 100:.2f}%"
        )
    if result.output_dir:
        print(f"artifacts: {result.output_dir}")


def _cmd_experiment_list(args: argparse.Namespace) -> None:
    for name, description in list_presets().items():
        print(f"{name}\t{description}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morph3dkit",
        description="Generate 3D face morphs and measure how vulnerable 3D face matchers are to them.",
    )
    parser.add_argument("--log-level", default="WARNING", help="console log level (default WARNING)")
    parser.add_argument("--log-config", help="logging YAML (dictConfig) file; overrides --log-level")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    synth = commands.add_parser("synth", help="generate and export a synthetic population")
    synth.add_argument("--seed", type=int, default=7)
    synth.add_argument("--subjects", type=int, default=40)
    synth.add_argument("--samples", type=int, default=3)
    synth.add_argument("--noise", default="uncontrolled", choices=sorted(NOISE_PROFILES))
    synth.add_argument("--prefix", default="s")
    synth.add_argument("--out", required=True, help="output folder")
    synth.set_defaults(handler=_cmd_synth)

    register_cmd = commands.add_parser("register", help="register a mesh and write its depth map CSV")
    register_cmd.add_argument("mesh")
    register_cmd.add_argument("--out", required=True, help="depth map CSV")
    register_cmd.add_argument("--mesh-out", help="also write the mesh in the intrinsic frame")
    register_cmd.set_defaults(handler=_cmd_register)

    model_cmd = commands.add_parser("build-model", help="build a PCA shape model from faces")
    model_cmd.add_argument("faces", nargs="+", help="meshes or depth map CSV files")
    model_cmd.add_argument("--k", type=int, default=20)
    model_cmd.add_argument("--out", required=True, help="model .npz")
    model_cmd.set_defaults(handler=_cmd_build_model)

    morph = commands.add_parser("morph", help="morph two faces")
    morph.add_argument("a", help="subject A mesh or depth map CSV")
    morph.add_argument("b", help="subject B mesh or depth map CSV")
    morph.add_argument("--method", default="depth", help="depth, coefficient, depth_average or coefficient_average")
    morph.add_argument("--alpha", type=float, default=0.5, help="weight of subject A")
    morph.add_argument("--hole-policy", default="union", choices=["union", "intersect_fill"])
    morph.add_argument("--model", help="shape model .npz (coefficient method)")
    morph.add_argument("--out", required=True, help=".ply mesh or .csv depth map")
    morph.set_defaults(handler=_cmd_morph)

    train = commands.add_parser("train-matcher", help="train the likelihood matcher")
    train.add_argument("faces", nargs="+", help="files named <subject>_<sample>.<ext>")
    train.add_argument("--pca-dim", type=int, default=30)
    train.add_argument("--lda-dim", type=int, default=5)
    train.add_argument("--region-fmr", type=float, default=0.25)
    train.add_argument("--workers", type=int, default=1)
    train.add_argument("--out", required=True, help="matcher model .npz")
    train.set_defaults(handler=_cmd_train_matcher)

    match = commands.add_parser("match", help="compare two faces")
    match.add_argument("probe")
    match.add_argument("gallery")
    match.add_argument("--matcher", default="distance", choices=["likelihood", "distance"])
    match.add_argument("--model", help="likelihood matcher .npz")
    match.add_argument("--scores-out", help="also write the score as a score CSV")
    match.set_defaults(handler=_cmd_match)

    evaluate = commands.add_parser("evaluate", help="compute rates from a score CSV and its manifest")
    evaluate.add_argument("--scores", required=True)
    evaluate.add_argument("--manifest", required=True)
    evaluate.add_argument("--fmr-target", type=float)
    evaluate.add_argument("--tau", action="append", help="fixed threshold <matcher>=<value>, repeatable")
    evaluate.add_argument("--bins", type=int, default=30)
    evaluate.add_argument("--out", help="report JSON")
    evaluate.set_defaults(handler=_cmd_evaluate)

    experiment = commands.add_parser("experiment", help="run or list experiments")
    experiment_commands = experiment.add_subparsers(dest="experiment_command", metavar="command")
    experiment_commands.required = True
    run = experiment_commands.add_parser("run", help="run a preset or a configuration file")
    run.add_argument("experiment", help="preset name or JSON/YAML configuration path")
    run.add_argument("--out", help="output parent folder (default: the configuration's output_dir)")
    run.add_argument("--workers", type=int)
    run.set_defaults(handler=_cmd_experiment_run)
    listing = experiment_commands.add_parser("list", help="list the built-in presets")
    listing.set_defaults(handler=_cmd_experiment_list)
    return parser


def _setup_logging(args: argparse.Namespace) -> None:
    if args.log_config:
        setup_logger_yaml(args.log_config, allow_basic=False)
        return
    create_logger(
        {
            "save_path": os.getcwd(),
            "logger_name": "morph3dkit",
            "log_name": "morph3dkit.log",
            "max_bytes": 10485760,
            "file_log_level": args.log_level,
            "console_log_level": args.log_level,
            "backup_count": 2,
            "format_option": 1,
            "handler_option": 3,
        }
    )


def _stage_name(args: argparse.Namespace) -> str:
    if args.command == "experiment":
        return f"experiment {args.experiment_command}"
    return args.command


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the command line and returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help.
        return int(exc.code or 0)

    try:
        _setup_logging(args)
        args.handler(args)
    except UsageError as exc:
        print(f"{_stage_name(args)}: UsageError: {exc}", file=sys.stderr)
        return 2
    except ExperimentStageFailure as exc:
        print(f"{exc.stage}: {exc.error_class}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"{_stage_name(args)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        logging.getLogger(__name__).debug("Command failed", exc_info=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
