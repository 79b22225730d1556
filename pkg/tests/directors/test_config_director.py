"""
This script is used to test the config_director module using pytest.
"""
# Built-in/Generic Imports
import json

# Libraries
import pytest

# Local Functions
from morph3dkit import (
    ExperimentConfig,
    PairSelectionConfig,
    PopulationConfig,
    SampleNoise,
    load_experiment_config,
    parse_experiment_config,
    read_config_file,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_config_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


def _document(**overrides) -> dict:
    data = {
        "schema_version": 1,
        "name": "tiny",
        "population": {"n_subjects": 4, "samples_per_subject": 2, "noise": "controlled"},
        "pairs": {"mode": "all"},
        "matchers": ["distance"],
        "fmr_target": 0.05,
    }
    data.update(overrides)
    return data


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_parse_experiment_config():
    """Tests sections are built and missing sections take their defaults."""
    config = parse_experiment_config(_document())
    assert config.name == "tiny"
    assert config.population.n_subjects == 4
    assert config.population.noise == "controlled"
    assert config.pairs.mode == "all"
    assert config.matchers == ("distance",)
    assert config.morph.method == "depth_average"
    assert config.morph.alpha == 0.5
    assert config.training_population.id_prefix == "t"
    assert not config.needs_model


def test_1_1_parse_experiment_config():
    """Tests a nested noise mapping and list-valued fields."""
    noise = {"max_rotation_deg": 1.0, "max_translation_mm": 2.0, "sigma_mm": 0.1, "expression_mm": 0.0, "eye_holes": False}
    config = parse_experiment_config(
        _document(
            population={"n_subjects": 3, "samples_per_subject": 3, "noise": noise},
            pairs={"mode": "lookalike", "band": [2, 6]},
            morph={"method": "coefficient_average"},
        )
    )
    assert isinstance(config.population.noise, SampleNoise)
    assert config.population.sample_noise.max_rotation_deg == 1.0
    assert config.pairs.band == (2.0, 6.0)
    assert config.needs_model


def test_1_to_dict():
    """Tests the plain dictionary parses back to an equal config."""
    config = parse_experiment_config(_document())
    data = json.loads(json.dumps(config.to_dict()))
    assert parse_experiment_config(data) == config


def test_1_load_experiment_config(tmp_path):
    """Tests JSON and YAML files hold the same schema."""
    json_path = tmp_path / "tiny.json"
    json_path.write_text(json.dumps(_document()), encoding="utf-8")
    yaml_path = tmp_path / "tiny.yaml"
    yaml_path.write_text(
        "schema_version: 1\n"
        "name: tiny\n"
        "population:\n  n_subjects: 4\n  samples_per_subject: 2\n  noise: controlled\n"
        "pairs:\n  mode: all\n"
        "matchers: [distance]\n"
        "fmr_target: 0.05\n",
        encoding="utf-8",
    )
    assert load_experiment_config(str(json_path)) == load_experiment_config(str(yaml_path))


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_parse_experiment_config():
    """Tests a document without a schema version."""
    data = _document()
    del data["schema_version"]
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(data)
    assert """The configuration does not declare a schema version.""" in str(excinfo.value)


def test_2_1_parse_experiment_config():
    """Tests an unknown top-level key."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(colour="red"))
    assert """ExperimentConfig got an unexpected keyword argument.""" in str(excinfo.value)


def test_2_2_parse_experiment_config():
    """Tests an unknown section key."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(pairs={"mode": "all", "count": 3}))
    assert """pairs got an unexpected keyword argument.""" in str(excinfo.value)


def test_2_3_parse_experiment_config():
    """Tests an unknown pair selection mode."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(pairs={"mode": "closest"}))
    assert """The pair selection mode is not recognized.""" in str(excinfo.value)


def test_2_4_parse_experiment_config():
    """Tests a population without mated samples."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(population={"n_subjects": 4, "samples_per_subject": 1}))
    assert """Morph trials need mated samples beyond the neutral sample.""" in str(excinfo.value)


def test_2_5_parse_experiment_config():
    """Tests training subjects sharing the evaluation id prefix."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(training_population={"id_prefix": "s"}))
    assert """Training subjects must be disjoint from evaluation subjects.""" in str(excinfo.value)


def test_2_6_parse_experiment_config():
    """Tests an out-of-range FMR target."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config(_document(fmr_target=2.0))
    assert """The FMR target is outside [0, 1].""" in str(excinfo.value)


def test_2_7_parse_experiment_config():
    """Tests an unknown or repeated matcher."""
    for matchers in (["likelihood", "likelihood"], ["icp"], []):
        with pytest.raises(Exception) as excinfo:
            parse_experiment_config(_document(matchers=matchers))
        assert """The matcher list is invalid.""" in str(excinfo.value)


def test_2_8_parse_experiment_config():
    """Tests an incorrect document type."""
    with pytest.raises(Exception) as excinfo:
        parse_experiment_config("config")
    assert """The object value 'config' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )


def test_2_pair_selection_config():
    """Tests band fractions reaching the threshold."""
    with pytest.raises(Exception) as excinfo:
        PairSelectionConfig(mode="lookalike", band_fractions=(0.5, 1.0))
    assert """The look-alike band fractions are invalid.""" in str(excinfo.value)


def test_2_population_config():
    """Tests a single-subject population."""
    with pytest.raises(Exception) as excinfo:
        PopulationConfig(n_subjects=1)
    assert """The population size is invalid.""" in str(excinfo.value)


def test_2_read_config_file(tmp_path):
    """Tests a file that is not JSON."""
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        read_config_file(str(path))
    assert """The configuration file is not valid JSON.""" in str(excinfo.value)


def test_2_1_read_config_file(tmp_path):
    """Tests a document that is not a mapping."""
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(Exception) as excinfo:
        read_config_file(str(path))
    assert """The configuration document is not a mapping.""" in str(excinfo.value)


def test_2_experiment_config():
    """Tests an unsupported schema version."""
    with pytest.raises(Exception) as excinfo:
        ExperimentConfig(schema_version=2)
    assert """The configuration schema version is not supported.""" in str(excinfo.value)
