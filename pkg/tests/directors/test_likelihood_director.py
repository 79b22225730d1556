"""
This script is used to test the likelihood_director module using pytest.
"""
# Built-in/Generic Imports
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import (
    DEFAULT_GRID,
    GridSpec,
    LikelihoodMatcherConfig,
    Polarity,
    extract_features,
    load_likelihood_model,
    load_regions,
    region_masks,
    save_likelihood_model,
    score_likelihood,
    train_likelihood_matcher,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_likelihood_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.2"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_load_regions():
    """Tests the packaged region table fits the default grid."""
    regions = load_regions()
    assert regions.shape == (60, 4)
    masks = region_masks(regions, DEFAULT_GRID)
    assert masks.shape == (60, DEFAULT_GRID.height, DEFAULT_GRID.width)
    assert np.all(masks.reshape(60, -1).any(axis=1))


def test_1_1_load_regions():
    """Tests rectangles passed through the config replace the packaged table."""
    config = LikelihoodMatcherConfig(regions=((-10, -10, 10, 10), (0, 0, 20, 20)))
    assert load_regions(config).tolist() == [[-10.0, -10.0, 10.0, 10.0], [0.0, 0.0, 20.0, 20.0]]


def test_1_train_likelihood_matcher(likelihood_model):
    """Tests the trained model shape."""
    assert likelihood_model.n_regions == 60
    assert likelihood_model.feature_dim == 3
    assert likelihood_model.thresholds.shape == (60,)
    assert likelihood_model.grid == DEFAULT_GRID


def test_1_score_likelihood(likelihood_model, registered_maps):
    """Tests the vote count is symmetric and bounded by the region count."""
    keys = sorted(registered_maps)
    for first, second in zip(keys, keys[1:]):
        forward = score_likelihood(likelihood_model, registered_maps[first], registered_maps[second], first, second)
        backward = score_likelihood(likelihood_model, registered_maps[second], registered_maps[first], second, first)
        assert forward.score == backward.score
        assert 0 <= forward.score <= likelihood_model.n_regions
        assert float(forward.score).is_integer()
        assert forward.polarity == Polarity.SIMILARITY
        assert forward.matcher == "likelihood"


def test_1_1_score_likelihood(likelihood_model, registered_maps):
    """Tests a face against itself votes in every region whose ratio constant clears its threshold."""
    depth_map = next(iter(registered_maps.values()))
    record = score_likelihood(likelihood_model, depth_map, depth_map)
    expected = int(np.count_nonzero(likelihood_model.constants > likelihood_model.thresholds))
    assert record.score == expected


def test_1_save_likelihood_model(tmp_path, likelihood_model, registered_maps):
    """Tests a saved model scores exactly like the original."""
    path = str(tmp_path / "likelihood.npz")
    save_likelihood_model(likelihood_model, path)
    loaded = load_likelihood_model(path)
    assert loaded.grid == likelihood_model.grid
    assert loaded.n_regions == likelihood_model.n_regions
    maps = list(registered_maps.values())[:4]
    assert np.array_equal(extract_features(loaded, maps), extract_features(likelihood_model, maps))
    assert np.array_equal(loaded.thresholds, likelihood_model.thresholds)


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_train_likelihood_matcher(registered_maps):
    """Tests training needs two subjects with repeated samples."""
    maps = list(registered_maps.values())
    training = [("s0", maps[0]), ("s0", maps[1]), ("s1", maps[2])]
    with pytest.raises(Exception) as excinfo:
        train_likelihood_matcher(training)
    assert """Fewer than 2 subjects have 2 or more samples.""" in str(excinfo.value)


def test_2_1_train_likelihood_matcher():
    """Tests training rejects an invalid config value."""
    with pytest.raises(Exception) as excinfo:
        train_likelihood_matcher([], config="wrong")
    assert """The object value 'wrong' is not an instance of the required class(es) or subclass(es).""" in str(
        excinfo.value
    )


def test_2_likelihood_matcher_config():
    """Tests the config rejects an out-of-range region FMR target."""
    with pytest.raises(Exception) as excinfo:
        LikelihoodMatcherConfig(region_fmr_target=1.5)
    assert """The likelihood matcher configuration is invalid.""" in str(excinfo.value)


def test_2_region_masks():
    """Tests a rectangle outside the grid is rejected."""
    grid = GridSpec(width=4, height=4, origin_x=-2.0, origin_y=-2.0, spacing_x=1.0, spacing_y=1.0)
    with pytest.raises(Exception) as excinfo:
        region_masks(np.array([[-1.0, -1.0, 5.0, 1.0]]), grid)
    assert """A region lies outside the grid or covers no cell.""" in str(excinfo.value)
