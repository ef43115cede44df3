"""Windowed partial processing and uniformizing pre-processing."""

import itertools

import numpy as np
import pytest

from privdisc import (Channel, DiscreteScenario, DistributionError,
                      NotIndependentError, Pmf, binary_entropy,
                      compose_window_mappings, iid_bernoulli_scenario,
                      mutual_information, partial_processing, preprocess_chain,
                      preprocess_composite, privacy_residuals, self_disclosure,
                      uniformize, verify_mapping)


def independent_scenario(marginals):
    """Product law over arbitrary per-sample marginals (dataset as latent)."""
    supports = [list(range(len(m))) for m in marginals]
    outcomes = list(itertools.product(*supports))
    probs = np.array([np.prod([m[s] for m, s in zip(marginals, outcome)])
                      for outcome in outcomes])
    keep = probs > 0
    support = tuple(o for o, k in zip(outcomes, keep) if k)
    return DiscreteScenario(
        sample_alphabets=tuple(len(m) for m in marginals),
        support=support,
        p_dataset=Pmf(probs[keep], atol=1e-9),
        latent_channel=Channel.identity(len(support)),
        latent_alphabet=len(support),
    )


class TestPartialProcessing:
    def test_four_fair_bits(self):
        report = partial_processing(iid_bernoulli_scenario(0.5, 4), 2)
        assert np.allclose(report.per_window_terms, 1.0, atol=1e-9)
        assert report.total_information == pytest.approx(3.0, abs=1e-9)
        assert report.efficiency == pytest.approx(0.75, abs=1e-9)
        assert report.windows == ((0, 1), (1, 2), (2, 3))

    def test_bernoulli_sweep_shape(self):
        totals = [partial_processing(iid_bernoulli_scenario(q, 4), 2).total_information
                  for q in (0.05, 0.25, 0.5)]
        assert totals[0] < 0.1
        assert totals[0] < totals[1] < totals[2]
        assert totals[2] == pytest.approx(3.0, abs=1e-9)

    def test_composite_output_private_per_sample(self):
        scenario = iid_bernoulli_scenario(0.3, 4)
        report = partial_processing(scenario, 2)
        composite = compose_window_mappings(scenario, report.mapping_family,
                                            report.windows)
        assert max(privacy_residuals(scenario, composite)) <= 1e-9
        assert verify_mapping(scenario, composite, tol=1e-9).passed

    def test_identity_matches_joint_enumeration(self):
        # Additive conditional terms equal the composite information.
        for marginals in ([[0.5, 0.5]] * 5,
                          [[0.7, 0.3], [0.4, 0.6], [0.55, 0.45], [0.2, 0.8]],
                          [[0.6, 0.4]] * 3):
            scenario = independent_scenario(marginals)
            report = partial_processing(scenario, 2)
            composite = compose_window_mappings(scenario, report.mapping_family,
                                                report.windows)
            joint = composite.joint_with_dataset(scenario.p_dataset)
            total = mutual_information(joint)
            assert total == pytest.approx(sum(report.per_window_terms), abs=1e-9)

    def test_wider_windows(self):
        scenario = iid_bernoulli_scenario(0.5, 4)
        report = partial_processing(scenario, 3)
        assert report.windows == ((0, 1, 2), (1, 2, 3))
        composite = compose_window_mappings(scenario, report.mapping_family,
                                            report.windows)
        assert max(privacy_residuals(scenario, composite)) <= 1e-9
        optimal = self_disclosure(scenario).capacity
        assert report.total_information <= optimal + 1e-9

    def test_full_window_equals_self_disclosure(self):
        scenario = iid_bernoulli_scenario(0.5, 3)
        report = partial_processing(scenario, 3)
        assert report.total_information == pytest.approx(
            self_disclosure(scenario).capacity, abs=1e-9)

    def test_rejects_dependent_samples(self):
        support = ((0, 0), (1, 1))
        scenario = DiscreteScenario(
            sample_alphabets=(2, 2), support=support,
            p_dataset=Pmf([0.5, 0.5]), latent_channel=Channel.identity(2),
            latent_alphabet=2)
        with pytest.raises(NotIndependentError):
            partial_processing(scenario, 2)

    def test_never_beats_optimal(self):
        for q in (0.2, 0.35, 0.5):
            scenario = iid_bernoulli_scenario(q, 4)
            optimal = self_disclosure(scenario).capacity
            for k in (2, 3):
                report = partial_processing(scenario, k)
                assert report.total_information <= optimal + 1e-9

    def test_iid_efficiency_formula(self):
        # (n-1) I(Y_1; X_1 | X_2) / (n H(X_1)) for identical samples.
        q, n = 0.3, 5
        report = partial_processing(iid_bernoulli_scenario(q, n), 2)
        per = report.per_window_terms[0]
        assert report.efficiency == pytest.approx(
            (n - 1) * per / (n * binary_entropy(q)), abs=1e-9)


class TestUniformize:
    def test_fair_input_identity(self):
        chan = uniformize(Pmf([0.5, 0.5]))
        assert np.allclose(chan.matrix, np.eye(2))

    def test_crossover_value(self):
        chan = uniformize(Pmf([0.7, 0.3]))
        assert chan.matrix[1, 0] == pytest.approx(2 / 7, abs=1e-12)

    def test_output_exactly_uniform(self):
        p = Pmf([0.8, 0.2])
        out = uniformize(p).apply(p)
        assert np.allclose(out.probs, 0.5, atol=1e-12)

    def test_rejects_biased_toward_one(self):
        with pytest.raises(DistributionError):
            uniformize(Pmf([0.3, 0.7]))

    def test_rejects_degenerate(self):
        with pytest.raises(DistributionError):
            uniformize(Pmf([1.0, 0.0]))


class TestPreprocessChain:
    def test_fair_bits_full_rate(self):
        report = preprocess_chain(0.5, 4)
        assert report.total_information == pytest.approx(3.0, abs=1e-12)
        assert report.efficiency == pytest.approx(0.75, abs=1e-12)

    def test_closed_form_matches_enumeration(self):
        for q in (0.1, 0.2, 0.3, 0.4, 0.5):
            for n in (2, 3, 4, 5):
                report = preprocess_chain(q, n)
                scenario, composite = preprocess_composite(q, n)
                exact = mutual_information(
                    composite.joint_with_dataset(scenario.p_dataset))
                assert exact == pytest.approx(report.total_information, abs=1e-10)

    def test_two_samples_reference(self):
        report = preprocess_chain(0.3, 2)
        scenario, composite = preprocess_composite(0.3, 2)
        exact = mutual_information(composite.joint_with_dataset(scenario.p_dataset))
        assert report.total_information == pytest.approx(exact, abs=1e-10)

    def test_composite_private_per_sample(self):
        scenario, composite = preprocess_composite(0.25, 3)
        assert max(privacy_residuals(scenario, composite)) <= 1e-12
        assert verify_mapping(scenario, composite, tol=1e-9).passed

    def test_never_beats_optimal(self):
        for q in (0.2, 0.4, 0.5):
            scenario = iid_bernoulli_scenario(q, 4)
            optimal = self_disclosure(scenario).capacity
            assert preprocess_chain(q, 4).total_information <= optimal + 1e-9

    def test_additivity_in_length(self):
        per = preprocess_chain(0.3, 2).total_information
        assert preprocess_chain(0.3, 5).total_information == pytest.approx(
            4 * per, abs=1e-12)
