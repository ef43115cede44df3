"""Latent reduction, zero-leakage limits, the bridge quantity, and scans."""

import numpy as np
import pytest

from privdisc import (Channel, Pmf, c_alpha_zero, capacity_scan, entropy, j_value,
                      private_information, solve_capacity)
from privdisc.presets import table1_observation, table1_scenario
from privdisc.probability import entropy_of_vector

from conftest import random_joint


def table1_float():
    p_w, obs = table1_observation()
    return (Pmf([float(v) for v in p_w]),
            Channel(np.array([[float(v) for v in row] for row in obs])))


def conditional_entropy(joint):
    """H(row variable | column variable) of a joint array."""
    p_col = joint.sum(axis=0)
    total = 0.0
    for c in range(joint.shape[1]):
        if p_col[c] > 0:
            total += p_col[c] * entropy_of_vector(joint[:, c] / p_col[c])
    return total


class TestPrivateInformation:
    def test_merges_identical_columns(self):
        # Three latent symbols; the first two share the observation law.
        joint = np.array([[1 / 6, 1 / 12, 1 / 12],
                          [1 / 6, 1 / 12, 1 / 12],
                          [1 / 9, 1 / 9, 1 / 9]])
        result = private_information(joint)
        assert result.w_tilde_size == 2
        assert result.grouping == {0: 0, 1: 0, 2: 1}
        assert result.c_x_w == pytest.approx(0.9182958340544896, abs=1e-12)

    def test_distinct_columns_keep_everything(self, rng):
        joint = random_joint(rng, 3, 3)
        result = private_information(joint)
        assert result.w_tilde_size == 3
        assert result.c_x_w == pytest.approx(entropy_of_vector(joint.sum(axis=1)))

    def test_grouping_idempotent(self, rng):
        joint = random_joint(rng, 4, 3, force_duplicates=True)
        first = private_information(joint)
        reduced = first.p_w_tilde.probs[:, None] * first.channel_x_given_w_tilde.matrix.T
        second = private_information(reduced)
        assert second.w_tilde_size == first.w_tilde_size
        assert second.grouping == {g: g for g in range(first.w_tilde_size)}

    def test_information_sandwich(self, rng):
        for _ in range(10):
            joint = random_joint(rng, 3, 2, force_duplicates=bool(rng.integers(2)))
            result = private_information(joint)
            mi = (entropy_of_vector(joint.sum(axis=1))
                  + entropy_of_vector(joint.sum(axis=0))
                  - entropy_of_vector(joint.ravel()))
            assert mi - 1e-9 <= result.c_x_w
            assert result.c_x_w <= entropy_of_vector(joint.sum(axis=1)) + 1e-12


class TestZeroLeakageLimits:
    def test_latent_determined_by_observation(self):
        # X = latent through a clean channel: nothing can be hidden from X.
        joint = np.diag([0.3, 0.7])
        assert c_alpha_zero(joint, "output_perturbation") == pytest.approx(0.0,
                                                                           abs=1e-9)
        assert c_alpha_zero(joint, "full_data") == pytest.approx(0.0, abs=1e-9)

    def test_shared_component_kills_disclosure(self):
        # Latent (W', V), observation (X', V): the reduced latent is V, a
        # function of the observation, so both limits vanish.
        joint = np.zeros((4, 4))  # rows (w', v), cols (x', v)
        for wp in range(2):
            for v in range(2):
                for xp in range(2):
                    joint[2 * wp + v, 2 * xp + v] += 0.25 * 0.5
        assert c_alpha_zero(joint, "full_data") == pytest.approx(0.0, abs=1e-9)

    def test_inequality_chain_random_joints(self, rng):
        for _ in range(12):
            w_size = int(rng.integers(2, 5))
            x_size = int(rng.integers(2, 4))
            joint = random_joint(rng, w_size, x_size,
                                 force_duplicates=bool(rng.integers(2)))
            result = private_information(joint)
            c1 = c_alpha_zero(joint, "output_perturbation")
            c2 = c_alpha_zero(joint, "full_data")
            reduced_joint = (result.p_w_tilde.probs[:, None]
                             * result.channel_x_given_w_tilde.matrix.T)
            h_wt_x = conditional_entropy(reduced_joint)
            h_w_x = conditional_entropy(joint)
            floor = max(0.0, result.c_x_w - np.log2(x_size))
            assert floor <= c1 + 1e-8
            assert c1 <= c2 + 1e-8
            assert c2 <= h_wt_x + 1e-8
            assert h_wt_x <= h_w_x + 1e-8

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            c_alpha_zero(np.diag([0.5, 0.5]), "nonsense")


class TestBridgeQuantity:
    def test_matches_full_data_limit_at_one_sample(self):
        p_w, obs = table1_float()
        joint = p_w.probs[:, None] * obs.matrix.T
        assert j_value(p_w, obs, 1) == pytest.approx(
            c_alpha_zero(joint, "full_data"), abs=1e-10)

    def test_nonincreasing_in_samples(self):
        p_w, obs = table1_float()
        values = [j_value(p_w, obs, n) for n in (1, 2, 3)]
        assert values[0] >= values[1] - 1e-9 >= values[2] - 2e-9

    def test_independent_latent_gives_zero(self):
        p_w = Pmf([0.4, 0.6])
        obs = Channel(np.tile(np.array([[0.3], [0.7]]), (1, 2)))
        for n in (1, 2, 3):
            assert j_value(p_w, obs, n) == pytest.approx(0.0, abs=1e-9)

    def test_dominates_disclosure_capacity(self):
        p_w, obs = table1_float()
        for n in (1, 2, 3):
            capacity = solve_capacity(table1_scenario(n)).capacity
            assert capacity <= j_value(p_w, obs, n) + 1e-9


class TestCapacityScan:
    def test_reference_values_and_nonmonotonicity(self):
        p_w, obs = table1_float()
        scan = capacity_scan(p_w, obs, 4)
        caps = {n: c for n, _, c in scan.rows}
        assert caps[2] == pytest.approx(8.34e-3, abs=5e-5)
        assert caps[3] == pytest.approx(4.88e-2, abs=5e-4)
        assert caps[4] == pytest.approx(4.47e-2, abs=5e-4)
        assert caps[3] > caps[4]

    def test_information_monotone_and_capped(self):
        p_w, obs = table1_float()
        scan = capacity_scan(p_w, obs, 4)
        infos = [info for _, info, _ in scan.rows]
        assert all(b >= a - 1e-12 for a, b in zip(infos, infos[1:]))
        assert all(info <= scan.c_x_w + 1e-9 for info in infos)
        assert scan.c_x_w == pytest.approx(entropy(p_w), abs=1e-12)

    def test_capacity_within_upper_bounds(self):
        p_w, obs = table1_float()
        scan = capacity_scan(p_w, obs, 3)
        for (n, _, capacity), bound in zip(scan.rows, scan.upper_bounds):
            assert capacity <= bound + 1e-9

    def test_truncation_marker(self):
        p_w, obs = table1_float()
        scan = capacity_scan(p_w, obs, 4, cap=50)
        assert scan.truncated_at is not None
        assert all(n < scan.truncated_at for n, _, _ in scan.rows)
