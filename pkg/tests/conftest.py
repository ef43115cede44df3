"""Shared test helpers: random rational scenarios and report checks."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from privdisc import Channel, DiscreteScenario, Pmf


def random_rational_scenario(rng: np.random.Generator,
                             shape: tuple[int, ...],
                             latent_size: int) -> DiscreteScenario:
    """Full-support scenario whose dataset law has small rational entries."""
    outcomes = list(itertools.product(*(range(a) for a in shape)))
    weights = [int(rng.integers(1, 10)) for _ in outcomes]
    total = sum(weights)
    exact = [Fraction(w, total) for w in weights]
    cols = []
    for _ in outcomes:
        raw = [int(rng.integers(0, 10)) for _ in range(latent_size)]
        if sum(raw) == 0:
            raw[int(rng.integers(0, latent_size))] = 1
        s = sum(raw)
        cols.append([Fraction(v, s) for v in raw])
    matrix = np.array([[float(cols[j][w]) for j in range(len(outcomes))]
                       for w in range(latent_size)])
    return DiscreteScenario(
        sample_alphabets=shape,
        support=tuple(outcomes),
        p_dataset=Pmf([float(v) for v in exact], atol=1e-9),
        latent_channel=Channel(matrix, atol=1e-9),
        latent_alphabet=latent_size,
        exact_p_dataset=tuple(exact),
    )


def random_joint(rng: np.random.Generator, w_size: int, x_size: int,
                 force_duplicates: bool = False) -> np.ndarray:
    """Random latent/observation joint; optionally with merged-column structure."""
    p_w = rng.dirichlet(np.ones(w_size) * 2.0)
    cols = rng.dirichlet(np.ones(x_size) * 2.0, size=w_size)
    if force_duplicates and w_size >= 2:
        cols[1] = cols[0]
    return p_w[:, None] * cols


XOR_CHANNEL = Channel(np.array([[1.0, 0.0, 0.0, 1.0], [0.0, 1.0, 1.0, 0.0]]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
