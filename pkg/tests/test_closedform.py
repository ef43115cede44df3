"""Two-binary closed forms and the modular/partition constructions."""

import numpy as np
import pytest

from privdisc import (Channel, DimensionMismatchError, DistributionError,
                      latent_output_information, modular_chain_construct,
                      modular_sum_construct, partition_construct, privacy_residuals,
                      solve_capacity, verify_mapping)
from privdisc.closedform import (NULL_DIRECTION, TwoBinaryParams, iid_uniform_scenario,
                                 two_binary_scenario, two_binary_solve)
from privdisc.presets import random_latent_channel

from conftest import XOR_CHANNEL


class TestTwoBinaryParams:
    def test_valid_vector(self):
        params = TwoBinaryParams(0.4, 0.5, 0.1)
        assert np.allclose(params.dataset_vector(), [0.3, 0.1, 0.2, 0.4])

    def test_rejects_marginals_on_boundary(self):
        with pytest.raises(DistributionError):
            TwoBinaryParams(0.0, 0.5, 0.0)

    def test_rejects_r_outside_range(self):
        with pytest.raises(DistributionError):
            TwoBinaryParams(0.3, 0.5, 0.4)

    def test_rejects_invalid_overlap(self):
        # alpha > beta needs r >= alpha - beta for a nonnegative law.
        with pytest.raises(DistributionError):
            TwoBinaryParams(0.6, 0.3, 0.1)


class TestTwoBinarySolve:
    def test_xor_fair_coins(self):
        report = two_binary_solve(TwoBinaryParams(0.5, 0.5, 0.25), XOR_CHANNEL)
        assert report.capacity == pytest.approx(1.0, abs=1e-12)
        rows = sorted(tuple(r) for r in report.mapping.cond_y_given_dataset.matrix)
        assert np.allclose(rows, [(0.0, 1.0, 1.0, 0.0), (1.0, 0.0, 0.0, 1.0)])

    def test_reference_point_vs_lp(self, rng):
        params = TwoBinaryParams(0.4, 0.5, 0.1)
        latent = random_latent_channel(rng, 2, 4)
        closed = two_binary_solve(params, latent)
        lp = solve_capacity(two_binary_scenario(params, latent))
        assert closed.capacity == pytest.approx(lp.capacity, abs=1e-8)

    def test_degenerate_returns_constant(self):
        report = two_binary_solve(TwoBinaryParams(0.5, 0.5, 0.0), XOR_CHANNEL)
        assert report.capacity == 0.0
        assert report.y_cardinality == 1
        assert not report.feasible
        assert report.nullity == 0

    def test_positivity_criterion(self, rng):
        params = TwoBinaryParams(0.35, 0.6, 0.2)
        for _ in range(10):
            latent = random_latent_channel(rng, 2, 4)
            report = two_binary_solve(params, latent)
            moved = np.abs(latent.matrix @ (NULL_DIRECTION / 2.0)).max()
            assert (report.capacity > 1e-9) == (moved > 1e-9)

    def test_latent_blind_mapping(self, rng):
        params = TwoBinaryParams(0.3, 0.55, 0.17)
        mats = []
        for _ in range(3):
            latent = random_latent_channel(rng, int(rng.integers(2, 4)), 4)
            mats.append(two_binary_solve(params, latent)
                        .mapping.cond_y_given_dataset.matrix)
        for mat in mats[1:]:
            assert np.array_equal(mat, mats[0])

    def test_small_grid_vs_lp_including_swapped_marginals(self, rng):
        worst = 0.0
        for alpha in (0.2, 0.5, 0.8):
            for beta in (0.15, 0.5, 0.85):
                lo, hi = max(0.0, alpha - beta), min(alpha, 1.0 - beta)
                for t in (0.25, 0.75):
                    params = TwoBinaryParams(alpha, beta, lo + (hi - lo) * t)
                    latent = random_latent_channel(rng, 2, 4)
                    closed = two_binary_solve(params, latent)
                    lp = solve_capacity(two_binary_scenario(params, latent))
                    worst = max(worst, abs(closed.capacity - lp.capacity))
        assert worst <= 1e-8

    def test_mapping_passes_verification(self, rng):
        params = TwoBinaryParams(0.45, 0.65, 0.2)
        latent = random_latent_channel(rng, 3, 4)
        report = two_binary_solve(params, latent)
        scenario = two_binary_scenario(params, latent)
        assert verify_mapping(scenario, report.mapping, tol=1e-9).passed


class TestModularSum:
    @pytest.mark.parametrize("modulus", [2, 3, 5])
    def test_information_and_privacy(self, modulus):
        scenario, mapping = modular_sum_construct(modulus)
        assert latent_output_information(scenario, mapping) == pytest.approx(
            np.log2(modulus), abs=1e-12)
        assert max(privacy_residuals(scenario, mapping)) <= 1e-12

    def test_wider_second_sample(self):
        scenario, mapping = modular_sum_construct(2, k_mult=2)
        assert scenario.sample_alphabets == (2, 4)
        assert latent_output_information(scenario, mapping) == pytest.approx(1.0)
        assert max(privacy_residuals(scenario, mapping)) <= 1e-12

    def test_output_uniform(self):
        _, mapping = modular_sum_construct(3)
        assert np.allclose(mapping.p_y.probs, 1 / 3)


class TestModularChain:
    def test_three_bits_full_window(self):
        mapping = modular_chain_construct(3, 1, 2)
        scenario = iid_uniform_scenario(3, 2)
        assert latent_output_information(scenario, mapping) == pytest.approx(2.0,
                                                                             abs=1e-12)
        assert max(privacy_residuals(scenario, mapping)) <= 1e-12

    def test_window_equals_dataset_is_useless(self):
        mapping = modular_chain_construct(2, 2, 2)
        scenario = iid_uniform_scenario(2, 2)
        assert latent_output_information(scenario, mapping) == pytest.approx(0.0,
                                                                             abs=1e-12)

    def test_windowed_privacy(self):
        # Output independent of every pair of adjacent samples.
        mapping = modular_chain_construct(4, 2, 2)
        scenario = iid_uniform_scenario(4, 2)
        for i in range(3):
            pair = Channel.deterministic(
                [2 * outcome[i] + outcome[i + 1] for outcome in scenario.support], 4)
            residuals = privacy_residuals(scenario, mapping, [pair])
            assert max(residuals) <= 1e-12

    def test_rejects_oversized_window(self):
        with pytest.raises(DimensionMismatchError):
            modular_chain_construct(2, 3, 2)

    def test_output_uniform_and_stochastic(self):
        mapping = modular_chain_construct(3, 2, 3)
        assert np.allclose(mapping.p_y.probs, 1 / 9)
        assert mapping.cond_y_given_dataset.matrix.max() <= 1 / 3 + 1e-12


class TestPartition:
    @pytest.mark.parametrize("cells,expected", [(2, 1.0), (5, np.log2(5)), (8, 3.0)])
    def test_information(self, cells, expected):
        mapping = partition_construct(cells)
        scenario = iid_uniform_scenario(2, cells)
        assert latent_output_information(scenario, mapping) == pytest.approx(
            expected, abs=1e-12)
        assert max(privacy_residuals(scenario, mapping)) <= 1e-12

    def test_strictly_increasing_in_cells(self):
        values = []
        for cells in (2, 3, 4, 5, 6):
            scenario = iid_uniform_scenario(2, cells)
            values.append(latent_output_information(scenario,
                                                    partition_construct(cells)))
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_output_uniform(self):
        mapping = partition_construct(5)
        assert np.allclose(mapping.p_y.probs, 0.2)
