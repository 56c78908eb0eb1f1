"""Unit tests for the linear-chain CRF against independent oracles."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp

from conftest import brute_force_decode, enumerate_paths, random_instance
from scholarparse.crf import (CrfError, CrfModel, LabeledSequence,
                              ModelFormatError, TrainConfig,
                              _feature_universe, forward_backward,
                              load_model, log_likelihood,
                              log_likelihood_and_gradient, pack_weights,
                              save_model, score, train, unpack_weights,
                              viterbi_decode)


def tiny_model():
    return CrfModel(
        labels=("A", "B"),
        unary_weights={("x", "A"): 1.0, ("x", "B"): -1.0, ("y", "B"): 2.0},
        transition_weights={("A", "A"): 0.5, ("A", "B"): -0.5},
    )


class TestScore:
    def test_hand_computed(self):
        model = tiny_model()
        feats = [("x",), ("x", "y")]
        # position 0 A: 1.0; position 1 B: -1.0 + 2.0; transition A->B: -0.5
        assert score(model, feats, ["A", "B"]) == pytest.approx(1.5)

    def test_unknown_feature_scores_zero(self):
        model = tiny_model()
        assert score(model, [("unseen",)], ["A"]) == 0.0

    def test_length_mismatch_raises(self):
        with pytest.raises(CrfError):
            score(tiny_model(), [("x",)], ["A", "B"])

    def test_unknown_label_raises(self):
        with pytest.raises(CrfError):
            score(tiny_model(), [("x",)], ["C"])


class TestViterbi:
    def test_matches_enumeration_random(self, rng):
        for _ in range(50):
            model, feats = random_instance(rng)
            decoded = viterbi_decode(model, feats)
            oracle, best = brute_force_decode(model, feats)
            assert score(model, feats, decoded) == pytest.approx(best)
            assert decoded == oracle

    def test_tie_break_prefers_low_index_suffix_first(self, rng):
        # Integer weights make score arithmetic exact, so ties are real.
        for _ in range(50):
            model, feats = random_instance(rng, integer_weights=True)
            decoded = viterbi_decode(model, feats)
            oracle, best = brute_force_decode(model, feats, tol=0.0)
            assert score(model, feats, decoded) == best
            assert decoded == oracle

    def test_all_zero_weights_decodes_first_label(self):
        model = CrfModel(labels=("A", "B"), unary_weights={},
                         transition_weights={})
        assert viterbi_decode(model, [("f",)] * 4) == ["A"] * 4

    def test_empty_sequence_raises(self):
        with pytest.raises(CrfError):
            viterbi_decode(tiny_model(), [])


class TestForwardBackward:
    def test_log_partition_matches_enumeration(self, rng):
        for _ in range(25):
            model, feats = random_instance(rng)
            log_z, _, _ = forward_backward(model, feats)
            expected = logsumexp([s for _, _, s in enumerate_paths(model, feats)])
            assert log_z == pytest.approx(expected, abs=1e-9)

    def test_marginals_match_enumeration(self, rng):
        model, feats = random_instance(rng, max_len=5, max_labels=3)
        log_z, marginals, pairwise = forward_backward(model, feats)
        paths = enumerate_paths(model, feats)
        probs = [math.exp(s - log_z) for _, _, s in paths]
        for t in range(len(feats)):
            for j in range(len(model.labels)):
                expected = sum(p for (idx, _, _), p in zip(paths, probs)
                               if idx[t] == j)
                assert marginals[t, j] == pytest.approx(expected, abs=1e-9)
        for t in range(len(feats) - 1):
            for a in range(len(model.labels)):
                for b in range(len(model.labels)):
                    expected = sum(p for (idx, _, _), p in zip(paths, probs)
                                   if idx[t] == a and idx[t + 1] == b)
                    assert pairwise[t, a, b] == pytest.approx(expected, abs=1e-9)

    def test_marginals_sum_to_one(self, rng):
        for _ in range(20):
            model, feats = random_instance(rng)
            _, marginals, pairwise = forward_backward(model, feats)
            assert np.allclose(marginals.sum(axis=1), 1.0)
            for t in range(len(feats) - 1):
                assert pairwise[t].sum() == pytest.approx(1.0)

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_partition_dominates_any_path(self, seed):
        rng = random.Random(seed)
        model, feats = random_instance(rng)
        log_z, _, _ = forward_backward(model, feats)
        path = [rng.choice(model.labels) for _ in feats]
        assert log_z >= score(model, feats, path) - 1e-9


class TestGradient:
    def _dataset(self, rng, k=2):
        model, feats = random_instance(rng, max_len=6, max_labels=3)
        seqs = []
        for _ in range(k):
            _, f = random_instance(rng, max_len=6, max_labels=3)
            labels = [rng.choice(model.labels) for _ in f]
            seqs.append(LabeledSequence(items=list(zip(f, labels))))
        return model, seqs

    def test_matches_finite_differences(self, rng):
        lam = 0.7
        for _ in range(5):
            model, dataset = self._dataset(rng)
            features = _feature_universe(model, dataset)
            _, grad = log_likelihood_and_gradient(model, dataset, lam)
            w = pack_weights(model, features)
            h = 1e-6
            fd = np.zeros_like(w)
            for i in range(len(w)):
                for sign, vec in ((1, w.copy()), (-1, w.copy())):
                    vec[i] += sign * h
                    m = unpack_weights(model, features, vec)
                    ll, _ = log_likelihood_and_gradient(m, dataset, lam)
                    fd[i] += sign * ll
                fd[i] /= 2 * h
            rel = np.linalg.norm(fd - grad) / max(1.0, np.linalg.norm(grad))
            assert rel < 1e-4

    def test_likelihood_only_agrees_with_gradient_version(self, rng):
        model, dataset = self._dataset(rng)
        ll_full, _ = log_likelihood_and_gradient(model, dataset, 1.0)
        assert log_likelihood(model, dataset, 1.0) == pytest.approx(ll_full)

    def test_empty_dataset_raises(self):
        with pytest.raises(CrfError):
            log_likelihood_and_gradient(tiny_model(), [], 1.0)


class TestPackUnpack:
    def test_round_trip(self, rng):
        model, _ = random_instance(rng)
        features = sorted({f for f, _ in model.unary_weights})
        vec = pack_weights(model, features)
        back = unpack_weights(model, features, vec)
        assert back.unary_weights == {k: v for k, v in model.unary_weights.items()
                                      if v != 0.0}
        assert back.transition_weights == {
            k: v for k, v in model.transition_weights.items() if v != 0.0}


class TestTrain:
    def _separable(self):
        # Feature "a" always carries label "X", feature "b" label "Y".
        seqs = [LabeledSequence(items=[(("a",), "X"), (("b",), "Y"),
                                       (("a",), "X")])] * 3
        return seqs

    def test_learns_separable_data(self):
        model = train(self._separable(), ("X", "Y"), (),
                      TrainConfig(l2_lambda=0.1, max_iterations=50))
        decoded = viterbi_decode(model, [("a",), ("b",), ("a",), ("b",)])
        assert decoded == ["X", "Y", "X", "Y"]

    def test_zero_iterations_gives_zero_weights(self):
        model = train(self._separable(), ("X", "Y"), (),
                      TrainConfig(max_iterations=0))
        assert model.unary_weights == {}
        assert model.transition_weights == {}

    def test_deterministic(self):
        cfg = TrainConfig(max_iterations=15)
        a = train(self._separable(), ("X", "Y"), (), cfg)
        b = train(self._separable(), ("X", "Y"), (), cfg)
        assert save_model(a) == save_model(b)

    def test_label_outside_set_raises(self):
        with pytest.raises(CrfError):
            train([LabeledSequence(items=[(("a",), "Z")])], ("X", "Y"), ())

    def test_empty_dataset_raises(self):
        with pytest.raises(CrfError):
            train([], ("X", "Y"), ())

    def test_invalid_lambda_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(l2_lambda=0.0)


class TestSerialization:
    def test_round_trip_field_for_field(self, rng):
        model, _ = random_instance(rng)
        model = CrfModel(labels=model.labels,
                         unary_weights=model.unary_weights,
                         transition_weights=model.transition_weights,
                         task_name="demo")
        back = load_model(save_model(model))
        assert back.labels == model.labels
        assert back.unary_weights == model.unary_weights
        assert back.transition_weights == model.transition_weights
        assert back.task_name == "demo"

    def test_payload_is_deterministic(self, rng):
        model, _ = random_instance(rng)
        assert save_model(model) == save_model(model)

    def test_magic_header_present(self):
        payload = save_model(tiny_model())
        assert payload.startswith(b"OCRPP-CRF 1\n")

    def test_bad_magic_rejected(self):
        with pytest.raises(ModelFormatError):
            load_model(b"NOT-A-MODEL 1\nend\n")

    def test_bad_version_rejected(self):
        with pytest.raises(ModelFormatError):
            load_model(b"OCRPP-CRF 99\nend\n")

    def test_truncation_rejected(self):
        payload = save_model(tiny_model())
        with pytest.raises(ModelFormatError):
            load_model(payload[: len(payload) // 2])

    def test_undecodable_rejected(self):
        with pytest.raises(ModelFormatError):
            load_model(b"\xff\xfe\x00")

    def test_empty_rejected(self):
        with pytest.raises(ModelFormatError):
            load_model(b"")
