"""Entropy, mutual information, and scenario construction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from privdisc import (Channel, DistributionError, Pmf, binary_entropy,
                      build_observation_scenario, conditional_mutual_information,
                      entropy, mutual_information)
from privdisc.probability import entropy_of_vector


def bsc(p):
    return Channel(np.array([[1 - p, p], [p, 1 - p]]))


class TestPmfChannel:
    def test_rejects_negative(self):
        with pytest.raises(DistributionError):
            Pmf([0.5, 0.6, -0.1])

    def test_rejects_bad_sum(self):
        with pytest.raises(DistributionError):
            Pmf([0.5, 0.6])

    def test_normalized_is_explicit(self):
        p = Pmf.normalized([2.0, 6.0])
        assert np.allclose(p.probs, [0.25, 0.75])

    def test_channel_columns_validated(self):
        with pytest.raises(DistributionError):
            Channel(np.array([[0.5, 0.2], [0.4, 0.8]]))

    def test_immutability(self):
        p = Pmf([0.5, 0.5])
        with pytest.raises(ValueError):
            p.probs[0] = 1.0


class TestEntropy:
    def test_fair_coin(self):
        assert entropy(Pmf([0.5, 0.5])) == 1.0

    def test_degenerate(self):
        assert entropy(Pmf([1.0, 0.0])) == 0.0

    def test_third(self):
        assert entropy(Pmf([1 / 3, 2 / 3])) == pytest.approx(0.9182958340544896,
                                                             abs=1e-12)

    def test_nats_option(self):
        assert entropy(Pmf([0.5, 0.5]), base2=False) == pytest.approx(np.log(2.0))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
           st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
           st.floats(0.0, 1.0))
    def test_concavity(self, wa, wb, lam):
        size = min(len(wa), len(wb))
        p = np.array(wa[:size]) / sum(wa[:size])
        q = np.array(wb[:size]) / sum(wb[:size])
        mix = lam * p + (1 - lam) * q
        assert entropy_of_vector(mix) >= (lam * entropy_of_vector(p)
                                          + (1 - lam) * entropy_of_vector(q) - 1e-12)


class TestMutualInformation:
    def test_product_is_zero(self, rng):
        a = rng.dirichlet(np.ones(3))
        b = rng.dirichlet(np.ones(4))
        assert mutual_information(np.outer(a, b)) == pytest.approx(0.0, abs=1e-12)

    def test_identity_coupling(self):
        assert mutual_information(np.eye(2) / 2) == pytest.approx(1.0)

    def test_xor_output_independent_of_input(self):
        # (X1 xor X2, X1) for fair independent coins.
        joint = np.zeros((2, 2))
        for x1 in (0, 1):
            for x2 in (0, 1):
                joint[x1 ^ x2, x1] += 0.25
        assert mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_invalid(self):
        with pytest.raises(DistributionError):
            mutual_information(np.array([[0.7, -0.1], [0.2, 0.2]]))
        with pytest.raises(DistributionError):
            mutual_information(np.array([[0.7, 0.1], [0.1, 0.2]]))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2 ** 31 - 1))
    def test_symmetry(self, na, nb, seed):
        joint = np.random.default_rng(seed).dirichlet(
            np.ones(na * nb)).reshape(na, nb)
        assert mutual_information(joint) == pytest.approx(
            mutual_information(joint.T), abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 2 ** 31 - 1))
    def test_zero_iff_product(self, na, nb, seed):
        gen = np.random.default_rng(seed)
        joint = gen.dirichlet(np.ones(na * nb)).reshape(na, nb)
        product = np.outer(joint.sum(axis=1), joint.sum(axis=0))
        gap = np.abs(joint - product).max()
        mi = mutual_information(joint)
        if gap <= 1e-12:
            assert mi <= 1e-9
        if mi <= 1e-12:
            assert gap <= 1e-5


class TestConditionalMutualInformation:
    def test_conditionally_independent(self, rng):
        joint = np.zeros((2, 3, 2))
        for c in range(2):
            joint[:, :, c] = 0.5 * np.outer(rng.dirichlet(np.ones(2)),
                                            rng.dirichlet(np.ones(3)))
        assert conditional_mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("modulus,expected", [(2, 1.0), (3, np.log2(3))])
    def test_modular_sum_reveals_second_sample(self, modulus, expected):
        joint = np.zeros((modulus, modulus, modulus))  # (W, X2, X1)
        for x1 in range(modulus):
            for x2 in range(modulus):
                joint[(x1 + x2) % modulus, x2, x1] = 1.0 / modulus ** 2
        assert conditional_mutual_information(joint) == pytest.approx(expected)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 31 - 1))
    def test_chain_rule(self, seed):
        gen = np.random.default_rng(seed)
        joint = gen.dirichlet(np.ones(2 * 3 * 2)).reshape(2, 3, 2)
        # I(A; B, C) = I(A; C) + I(A; B | C)
        i_abc = mutual_information(joint.reshape(2, 6))
        i_ac = mutual_information(joint.sum(axis=1))
        i_ab_given_c = conditional_mutual_information(joint)
        assert i_abc == pytest.approx(i_ac + i_ab_given_c, abs=1e-10)


class TestObservationScenario:
    def test_biased_latent_flip_noise(self):
        scenario = build_observation_scenario(Pmf([1 / 3, 2 / 3]), bsc(0.1), 2)
        idx = scenario.support.index((0, 0))
        assert scenario.p_dataset.probs[idx] == pytest.approx(0.276667, abs=5e-7)

    def test_noiseless_channel_identity_posterior(self):
        scenario = build_observation_scenario(Pmf([0.3, 0.7]), Channel.identity(2), 3)
        assert scenario.support_size == 2
        assert set(scenario.support) == {(0, 0, 0), (1, 1, 1)}
        assert np.allclose(np.sort(scenario.latent_channel.matrix, axis=0),
                           np.array([[0.0, 0.0], [1.0, 1.0]]))

    def test_erasure_channel_single_sample(self):
        erase = Channel(np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]]))
        scenario = build_observation_scenario(Pmf([0.5, 0.5]), erase, 1)
        idx = scenario.support.index((1,))
        assert scenario.p_dataset.probs[idx] == pytest.approx(0.5)

    def test_single_sample_reproduces_joint(self, rng):
        p_w = Pmf(rng.dirichlet(np.ones(3)))
        chan = Channel(rng.dirichlet(np.ones(4), size=3).T)
        scenario = build_observation_scenario(p_w, chan, 1)
        rebuilt = scenario.joint_latent_dataset()
        direct = p_w.probs[:, None] * chan.matrix.T
        direct = direct[:, direct.sum(axis=0) > 0]
        assert np.allclose(rebuilt, direct, atol=1e-12)

    def test_binary_entropy_matches_entropy(self):
        assert binary_entropy(1 / 3) == pytest.approx(entropy(Pmf([1 / 3, 2 / 3])))
