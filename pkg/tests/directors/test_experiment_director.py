"""
This script is used to test the experiment_director module using pytest.

Most configurations are tiny so a run stays within seconds. The preset runs take minutes.
"""
# Built-in/Generic Imports
import os
import json

# Libraries
import pytest
import numpy as np

# Local Functions
from morph3dkit import (
    PairSelectionConfig,
    RegisteredPopulation,
    Polarity,
    ScoreRecord,
    build_population_model,
    clear_preparation_cache,
    evaluate_scores,
    fit_coefficients,
    list_presets,
    load_preset,
    lookalike_band,
    parse_experiment_config,
    read_scores_csv,
    reconstruct,
    resolve_experiment,
    run_experiment,
    select_pairs,
    write_scores_csv,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_experiment_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

SUBJECTS = ["s0", "s1", "s2", "s3", "s10"]


def _distance_config(**overrides):
    data = {
        "schema_version": 1,
        "name": "tiny_depth",
        "seed": 11,
        "population": {"n_subjects": 4, "samples_per_subject": 2, "noise": "controlled"},
        "pairs": {"mode": "all"},
        "matchers": ["distance"],
        "fmr_target": 0.25,
        "histogram": {"bins": 8},
    }
    data.update(overrides)
    return parse_experiment_config(data)


def _model_config():
    return parse_experiment_config(
        {
            "schema_version": 1,
            "name": "tiny_model",
            "seed": 11,
            "population": {"n_subjects": 4, "samples_per_subject": 2, "noise": "controlled"},
            "training_population": {"n_subjects": 5, "samples_per_subject": 2, "id_prefix": "t", "noise": "controlled"},
            "morph": {"method": "coefficient_average"},
            "model": {"k": 3},
            "pairs": {"mode": "random", "n_pairs": 3},
            "matchers": ["likelihood"],
            "likelihood_matcher": {"pca_dim": 4, "lda_dim": 2},
            "fmr_target": 0.25,
        }
    )


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_select_pairs():
    """Tests the all mode returns every pair in id order."""
    pairs = select_pairs(SUBJECTS, PairSelectionConfig(mode="all"), seed=1)
    assert len(pairs) == 10
    assert pairs[0] == ("s0", "s1")
    assert pairs[-1] == ("s3", "s10")


def test_1_1_select_pairs():
    """Tests the random mode is seeded, distinct and capped by the candidates."""
    selection = PairSelectionConfig(mode="random", n_pairs=4)
    first = select_pairs(SUBJECTS, selection, seed=3)
    assert first == select_pairs(list(reversed(SUBJECTS)), selection, seed=3)
    assert len(set(first)) == 4
    assert all(a != b for a, b in first)
    capped = select_pairs(SUBJECTS, PairSelectionConfig(mode="random", n_pairs=50), seed=3)
    assert len(capped) == 10


def test_1_2_select_pairs():
    """Tests the lookalike mode keeps scores strictly inside the band."""
    scores = {("s0", "s1"): 3.0, ("s0", "s2"): 5.0, ("s1", "s2"): 7.0, ("s0", "s3"): 6.5}
    selection = PairSelectionConfig(mode="lookalike")
    pairs = select_pairs(SUBJECTS, selection, 0, pair_scores=scores, band=(3.0, 7.0))
    assert pairs == [("s0", "s2"), ("s0", "s3")]


def test_1_3_select_pairs():
    """Tests max_pairs keeps the most similar pairs for either polarity."""
    scores = {("s0", "s1"): 4.0, ("s0", "s2"): 5.0, ("s1", "s2"): 6.0}
    selection = PairSelectionConfig(mode="lookalike", max_pairs=1)
    assert select_pairs(SUBJECTS, selection, 0, scores, (0.0, 10.0), Polarity.SIMILARITY) == [("s1", "s2")]
    assert select_pairs(SUBJECTS, selection, 0, scores, (0.0, 10.0), Polarity.DISTANCE) == [("s0", "s1")]


def test_1_lookalike_band():
    """Tests the relative band of both polarities and the absolute override."""
    selection = PairSelectionConfig(mode="lookalike", band_fractions=(0.375, 0.875))
    assert lookalike_band(8.0, selection, Polarity.SIMILARITY) == pytest.approx((3.0, 7.0))
    assert lookalike_band(0.5, selection, Polarity.DISTANCE) == pytest.approx((0.5625, 0.8125))
    fixed = PairSelectionConfig(mode="lookalike", band=(1.0, 2.0))
    assert lookalike_band(8.0, fixed, Polarity.SIMILARITY) == (1.0, 2.0)


def test_1_run_experiment(tmp_path):
    """Tests a depth-average run writes every artifact and a consistent report."""
    result = run_experiment(_distance_config(), output_dir=str(tmp_path))
    run_dir = tmp_path / "tiny_depth"
    assert result.output_dir == str(run_dir)
    artifacts = ("scores.csv", "manifest.json", "report.json", "run-sidecar.json", os.path.join("histograms", "distance.svg"))
    for name in artifacts:
        assert (run_dir / name).is_file()

    assert len(result.pairs) == 6
    report = result.reports["distance"]
    assert report.polarity == Polarity.DISTANCE
    assert report.fmr <= 0.25
    assert report.rmmr == pytest.approx(report.mmpmr + report.fnmr, abs=1e-12)
    assert report.counts == {"genuine": 4, "impostor": 24, "morphs": 6, "mated_scores": 12}
    assert result.thresholds["distance"] == report.threshold

    # 28 bona fide pairs plus 2 mated rows per morph.
    records = read_scores_csv(str(run_dir / "scores.csv"))
    assert len(records) == 28 + 12
    with open(run_dir / "report.json", "r", encoding="utf-8") as f:
        written = json.load(f)
    assert written["pairs"] == {"mode": "all", "count": 6, "band": None}
    assert written["matchers"]["distance"]["rmmr"] == report.rmmr
    assert written["reference"] is None


def test_1_1_run_experiment(tmp_path):
    """Tests identical configurations give identical report bytes."""
    run_experiment(_distance_config(), output_dir=str(tmp_path / "a"))
    run_experiment(_distance_config(), output_dir=str(tmp_path / "b"))
    first = (tmp_path / "a" / "tiny_depth" / "report.json").read_bytes()
    second = (tmp_path / "b" / "tiny_depth" / "report.json").read_bytes()
    assert first == second


def test_1_2_run_experiment():
    """Tests a model-based run with the likelihood matcher and no artifacts."""
    result = run_experiment(_model_config(), write_artifacts=False)
    assert result.output_dir is None
    assert len(result.pairs) == 3
    report = result.reports["likelihood"]
    assert report.polarity == Polarity.SIMILARITY
    assert report.counts["morphs"] == 3
    assert 0.0 <= report.mmpmr <= 1.0
    assert report.rmmr == pytest.approx(report.mmpmr + report.fnmr, abs=1e-12)
    assert result.report["morph"]["method"] == "coefficient_average"


def test_1_3_run_experiment():
    """Tests lookalike selection on distance scores with an absolute band."""
    config = _distance_config(
        name="tiny_lookalike",
        pairs={"mode": "lookalike", "selection_matcher": "distance", "band": [0.0, 2.0], "max_pairs": 2},
    )
    result = run_experiment(config, write_artifacts=False)
    assert len(result.pairs) == 2
    assert result.report["pairs"]["band"] == [0.0, 2.0]


def test_1_build_population_model(population, registered_maps):
    """Tests the morph model reproduces every neutral face on its support."""
    samples = list(population)
    registered = RegisteredPopulation(
        keys=tuple(s.key for s in samples),
        subjects=tuple(s.subject_id for s in samples),
        sample_ids=tuple(s.sample_id for s in samples),
        depth_maps=tuple(registered_maps[s.key] for s in samples),
    )
    model = build_population_model(registered, 20)
    assert model.k == 5
    assert model.n_training == 6
    for subject in registered.subject_ids():
        neutral = registered_maps[f"{subject}_0"]
        rebuilt = reconstruct(model, fit_coefficients(model, neutral))
        assert np.allclose(rebuilt.cells[model.support], neutral.cells[model.support], atol=1e-6)


def test_1_4_run_experiment():
    """Tests look-alike morphs beat random morphs on the likelihood matcher."""
    clear_preparation_cache()
    lookalike = run_experiment(resolve_experiment("exp5_lookalike"), write_artifacts=False)
    random_pairs = run_experiment(resolve_experiment("exp2_random"), write_artifacts=False)
    assert lookalike.reports["likelihood"].mmpmr > 0.0
    assert lookalike.reports["likelihood"].mmpmr >= random_pairs.reports["likelihood"].mmpmr


def test_1_5_run_experiment(tmp_path):
    """Tests a built-in preset run twice writes identical report bytes."""
    config = resolve_experiment("exp5_lookalike")
    run_experiment(config, output_dir=str(tmp_path / "a"))
    clear_preparation_cache()
    run_experiment(config, output_dir=str(tmp_path / "b"))
    first = (tmp_path / "a" / "exp5_lookalike" / "report.json").read_bytes()
    second = (tmp_path / "b" / "exp5_lookalike" / "report.json").read_bytes()
    assert first == second


def test_1_evaluate_scores(tmp_path):
    """Tests the written scores and manifest rebuild the run reports."""
    result = run_experiment(_distance_config(), output_dir=str(tmp_path))
    run_dir = tmp_path / "tiny_depth"
    reports = evaluate_scores(str(run_dir / "scores.csv"), str(run_dir / "manifest.json"))
    original = result.reports["distance"]
    rebuilt = reports["distance"]
    assert rebuilt.threshold == original.threshold
    assert rebuilt.fmr == original.fmr
    assert rebuilt.fnmr == original.fnmr
    assert rebuilt.mmpmr == original.mmpmr
    assert rebuilt.rmmr == original.rmmr


def test_1_1_evaluate_scores(tmp_path):
    """Tests a fixed threshold skips calibration."""
    run_experiment(_distance_config(), output_dir=str(tmp_path))
    run_dir = tmp_path / "tiny_depth"
    reports = evaluate_scores(str(run_dir / "scores.csv"), str(run_dir / "manifest.json"), tau={"distance": 2.5})
    assert reports["distance"].threshold == 2.5
    assert reports["distance"].fmr == 1.0
    assert reports["distance"].mmpmr == 1.0


def test_1_list_presets():
    """Tests the five built-in presets load."""
    presets = list_presets()
    assert sorted(presets) == [
        "exp1_coefficient_qualitative",
        "exp2_random",
        "exp3_controlled_random",
        "exp4_depth_random",
        "exp5_lookalike",
    ]
    for name in presets:
        config = load_preset(name)
        assert config.name == name
        assert presets[name] == config.description


def test_1_resolve_experiment(tmp_path):
    """Tests a file path wins over a preset name."""
    path = tmp_path / "custom.json"
    path.write_text(json.dumps(_distance_config().to_dict()), encoding="utf-8")
    assert resolve_experiment(str(path)).name == "tiny_depth"
    assert resolve_experiment("exp4_depth_random").morph.method == "depth_average"


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_select_pairs():
    """Tests lookalike selection without scores."""
    with pytest.raises(Exception) as excinfo:
        select_pairs(SUBJECTS, PairSelectionConfig(mode="lookalike"), 0)
    assert """Lookalike selection needs pair scores and a band.""" in str(excinfo.value)


def test_2_1_select_pairs():
    """Tests an empty band."""
    with pytest.raises(Exception) as excinfo:
        select_pairs(SUBJECTS, PairSelectionConfig(mode="lookalike"), 0, {("s0", "s1"): 9.0}, (3.0, 7.0))
    assert """No subject pair is eligible.""" in str(excinfo.value)


def test_2_2_select_pairs():
    """Tests an incorrect selection type."""
    with pytest.raises(Exception) as excinfo:
        select_pairs(SUBJECTS, "all", 0)
    assert """The object value 'all' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )


def test_2_run_experiment():
    """Tests a failing stage is named with the original error class."""
    config = _distance_config(
        name="tiny_empty_band",
        pairs={"mode": "lookalike", "selection_matcher": "distance", "band": [5.0, 6.0]},
    )
    with pytest.raises(Exception) as excinfo:
        run_experiment(config, write_artifacts=False)
    assert """The experiment stage 'select' failed with NoEligiblePairs.""" in str(excinfo.value)
    assert excinfo.value.stage == "select"
    assert excinfo.value.error_class == "NoEligiblePairs"


def test_2_evaluate_scores(tmp_path):
    """Tests a score row whose ids are not in the manifest."""
    run_experiment(_distance_config(), output_dir=str(tmp_path))
    run_dir = tmp_path / "tiny_depth"
    orphan = tmp_path / "orphan.csv"
    write_scores_csv([ScoreRecord("x_0", "s000_0", 0.5, Polarity.DISTANCE, "distance")], str(orphan))
    with pytest.raises(Exception) as excinfo:
        evaluate_scores(str(orphan), str(run_dir / "manifest.json"))
    assert """A score row is not covered by the manifest.""" in str(excinfo.value)


def test_2_load_preset():
    """Tests an unknown preset name."""
    with pytest.raises(Exception) as excinfo:
        load_preset("exp9")
    assert """The preset does not exist.""" in str(excinfo.value)
