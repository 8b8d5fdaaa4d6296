import numpy as np
import pytest

from imbalkit import label_encode, smote, stratified_split
from imbalkit.synth import synthetic_dataset


@pytest.fixture(scope="session")
def small_dataset():
    return synthetic_dataset(300, seed=3)


@pytest.fixture(scope="session")
def small_matrix(small_dataset):
    matrix, _ = label_encode(small_dataset)
    return matrix


@pytest.fixture(scope="session")
def small_split(small_matrix):
    return stratified_split(small_matrix, 0.2, seed=42)


@pytest.fixture(scope="session")
def small_train(small_split):
    train, _ = small_split
    return smote(train, seed=1)


@pytest.fixture(scope="session")
def small_test(small_split):
    return small_split[1]


def two_class_matrix(n0, n1, d=3, seed=0):
    """Raw Gaussian EncodedMatrix helper with shifted class means."""
    from imbalkit.data import EncodedMatrix

    rng = np.random.default_rng(seed)
    X0 = rng.normal(0.0, 1.0, size=(n0, d))
    X1 = rng.normal(1.5, 1.0, size=(n1, d))
    values = np.vstack([X0, X1])
    target = np.r_[np.zeros(n0, int), np.ones(n1, int)]
    return EncodedMatrix(values, target, tuple(f"f{j}" for j in range(d)),
                         np.arange(n0 + n1))
