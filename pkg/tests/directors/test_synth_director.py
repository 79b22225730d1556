"""
This script is used to test the synth_director module using pytest.
"""
# Built-in/Generic Imports
import os
import json
import pytest

# Libraries
import numpy as np

# Local Functions
from morph3dkit import (
    NOISE_PROFILES,
    SampleNoise,
    generate_population,
    ground_truth,
    export_population,
    noise_profile,
    subject_params,
    face_surface,
    nose_apex,
    read_mesh,
)
from morph3dkit.directors.synth_director import PARAM_BOUNDS


__author__ = "IncognitoCoding"
__copyright__ = "Copyright 2022, test_synth_director"
__credits__ = ["IncognitoCoding"]
__license__ = "MIT"
__version__ = "0.3"
__maintainer__ = "IncognitoCoding"
__status__ = "Production"


# ############################################################
# ######Section Test Part 1 (Successful Value Checking)#######
# ############################################################


def test_1_generate_population(population):
    """Tests the ordering and ids of a population."""
    assert len(population) == 18
    assert population.subject_ids == ["s000", "s001", "s002", "s003", "s004", "s005"]
    assert [s.key for s in population][:4] == ["s000_0", "s000_1", "s000_2", "s001_0"]


def test_1_1_generate_population():
    """Tests the same seed gives identical meshes and a different seed does not."""
    first = generate_population(seed=11, n_subjects=2, samples_per_subject=1)
    second = generate_population(seed=11, n_subjects=2, samples_per_subject=1)
    third = generate_population(seed=12, n_subjects=2, samples_per_subject=1)
    assert all(a.mesh.allclose(b.mesh, atol=0.0) for a, b in zip(first, second))
    assert not first.samples[0].mesh.allclose(third.samples[0].mesh)


def test_1_2_generate_population(population):
    """Tests every identity parameter lies within its generator bounds."""
    for params in population.params.values():
        for name, (low, high) in PARAM_BOUNDS.items():
            assert low <= getattr(params, name) <= high


def test_1_3_generate_population(population):
    """Tests sample poses respect the noise bounds."""
    noise = population.noise
    for sample in population:
        assert sample.pose.rotation_angle_deg <= noise.max_rotation_deg + 1e-9
        assert np.all(np.abs(sample.pose.translation) <= noise.max_translation_mm + 1e-9)


def test_1_4_generate_population():
    """Tests the id prefix separates populations."""
    training = generate_population(seed=8, n_subjects=2, samples_per_subject=1, id_prefix="t")
    assert training.subject_ids == ["t000", "t001"]


def test_1_ground_truth(zero_population):
    """Tests a zero-noise sample carries its analytic nose apex through the pose."""
    subject_id = zero_population.subject_ids[0]
    nose_tip, pose = ground_truth(zero_population, subject_id, 0)
    params = zero_population.params[subject_id]
    assert pose.is_identity()
    assert np.allclose(nose_tip, nose_apex(params), atol=1e-12)


def test_1_face_surface():
    """Tests the nose tip is the highest point of the ridge line."""
    params = subject_params(7, "s000")
    ys = np.linspace(-12.0, 30.0, 85)
    profile = face_surface(params, np.zeros_like(ys), ys)
    assert ys[int(np.argmax(profile))] == pytest.approx(0.0, abs=0.5)


def test_1_export_population(tmp_path):
    """Tests export writes a readable mesh per sample plus the ground truth."""
    small = generate_population(seed=3, n_subjects=2, samples_per_subject=1, noise=NOISE_PROFILES["controlled"])
    paths = export_population(small, str(tmp_path))
    assert [os.path.basename(p) for p in paths] == ["s000_0.ply", "s001_0.ply"]
    assert read_mesh(paths[0]).allclose(small.samples[0].mesh, atol=1e-6)
    with open(os.path.join(str(tmp_path), "ground_truth.json")) as file:
        truth = json.load(file)
    assert sorted(truth["samples"]) == ["s000_0", "s001_0"]


def test_1_noise_profile():
    """Tests profile names and field mappings resolve."""
    assert noise_profile("zero") == SampleNoise(0.0, 0.0, 0.0, 0.0, True)
    assert noise_profile({"sigma_mm": 0.5}).sigma_mm == 0.5


# ############################################################
# ######Section Test Part 2 (Error/Catch Value Checking)######
# ############################################################


def test_2_generate_population():
    """Tests a population with one subject."""
    with pytest.raises(Exception) as excinfo:
        generate_population(seed=7, n_subjects=1, samples_per_subject=2)
    assert """The population size is invalid.""" in str(excinfo.value)


def test_2_1_generate_population():
    """Tests sending an invalid seed type."""
    with pytest.raises(Exception) as excinfo:
        generate_population(seed="7", n_subjects=2, samples_per_subject=2)
    assert (
        """The object value '7' is not an instance of the required class(es) or subclass(es)."""
        in str(excinfo.value)
    )


def test_2_ground_truth(zero_population):
    """Tests an unknown sample id."""
    with pytest.raises(Exception) as excinfo:
        ground_truth(zero_population, "s000", 9)
    assert """The subject or sample id is not part of the population.""" in str(excinfo.value)


def test_2_sample_noise():
    """Tests a negative noise sigma."""
    with pytest.raises(Exception) as excinfo:
        SampleNoise(sigma_mm=-1.0)
    assert """The sample noise profile is invalid.""" in str(excinfo.value)


def test_2_noise_profile():
    """Tests an unknown profile name."""
    with pytest.raises(Exception) as excinfo:
        noise_profile("studio")
    assert """The noise profile is not recognized.""" in str(excinfo.value)
