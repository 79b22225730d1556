"""
Shared fixtures. The populations are small so registration and training stay quick.
"""
# Built-in/Generic Imports
from typing import Dict

# Libraries
import pytest

# Local Functions
from morph3dkit import (
    DepthMap,
    LikelihoodMatcherConfig,
    NOISE_PROFILES,
    generate_population,
    register_batch,
    build_model,
    train_likelihood_matcher,
)


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, conftest"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.1"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"

TEST_SEED = 7


@pytest.fixture(scope="session")
def population():
    return generate_population(seed=TEST_SEED, n_subjects=6, samples_per_subject=3)


@pytest.fixture(scope="session")
def zero_population():
    return generate_population(seed=TEST_SEED, n_subjects=3, samples_per_subject=2, noise=NOISE_PROFILES["zero"])


@pytest.fixture(scope="session")
def registered_maps(population) -> Dict[str, DepthMap]:
    results = register_batch([sample.mesh for sample in population], workers=2)
    return {sample.key: depth_map for sample, (_, depth_map) in zip(population, results)}


@pytest.fixture(scope="session")
def shape_model(registered_maps):
    return build_model(list(registered_maps.values()), k=5)


@pytest.fixture(scope="session")
def likelihood_model(population, registered_maps):
    training = [(sample.subject_id, registered_maps[sample.key]) for sample in population]
    return train_likelihood_matcher(training, LikelihoodMatcherConfig(pca_dim=8, lda_dim=3))
