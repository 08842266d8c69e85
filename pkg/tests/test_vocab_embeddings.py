"""Vocabulary and embedding-layer behavior."""
from __future__ import annotations

import numpy as np
import numpy.testing as npt
import pytest

from sentiscore.embeddings import (
    embed_sequence,
    init_embeddings,
    load_embeddings_text,
    save_embeddings_text,
    sequence_indices,
    train_embeddings,
)
from sentiscore.vocab import PAD, PAD_INDEX, UNK, UNK_INDEX, Vocab, build_vocab


def small_vocab() -> Vocab:
    return Vocab((PAD, UNK, "camera", "is", "great"))


class TestVocab:
    def test_reserved_entries_come_first(self):
        vocab = small_vocab()
        assert vocab.lookup(PAD) == PAD_INDEX
        assert vocab.lookup(UNK) == UNK_INDEX

    def test_lookup_round_trip(self):
        vocab = small_vocab()
        for i, term in enumerate(vocab.terms):
            assert vocab.lookup(term) == i
            assert vocab.term(i) == term

    def test_unknown_maps_to_unk(self):
        assert small_vocab().lookup("zebra") == UNK_INDEX

    def test_encode(self):
        vocab = small_vocab()
        assert vocab.encode(["camera", "zebra", "is"]) == [2, UNK_INDEX, 3]

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            Vocab((PAD, UNK, "a", "a"))

    def test_missing_reserved_rejected(self):
        with pytest.raises(ValueError):
            Vocab(("a", "b"))

    def test_build_ranks_by_frequency_then_term(self):
        corpus = [["b", "a", "a"], ["b", "c"]]
        vocab = build_vocab(corpus, max_size=10)
        # a and b both occur twice; the tie breaks alphabetically.
        assert vocab.terms == (PAD, UNK, "a", "b", "c")

    def test_build_truncates_to_max_size(self):
        corpus = [["a", "a", "b", "b", "c"]]
        vocab = build_vocab(corpus, max_size=2)
        assert vocab.terms == (PAD, UNK, "a", "b")

    def test_build_accepts_objects_with_tokens(self):
        class Holder:
            def __init__(self, tokens):
                self.tokens = tokens

        vocab = build_vocab([Holder(["x", "y"])], max_size=5)
        assert "x" in vocab and "y" in vocab

    def test_build_rejects_empty_corpus(self):
        with pytest.raises(ValueError):
            build_vocab([], max_size=5)


class TestSequenceEncoding:
    def test_padding_and_truncation(self):
        vocab = small_vocab()
        idx = sequence_indices(["camera", "is"], vocab, length=4)
        npt.assert_array_equal(idx, [2, 3, PAD_INDEX, PAD_INDEX])
        idx = sequence_indices(["camera", "is", "great"], vocab, length=2)
        npt.assert_array_equal(idx, [2, 3])

    def test_embed_matches_row_gather(self):
        vocab = small_vocab()
        matrix = init_embeddings(len(vocab), dim=4, seed=0)
        embedded = embed_sequence(["great", "zebra"], vocab, matrix, length=3)
        npt.assert_array_equal(embedded[0], matrix[vocab.lookup("great")])
        npt.assert_array_equal(embedded[1], matrix[UNK_INDEX])
        npt.assert_array_equal(embedded[2], np.zeros(4))

    def test_embed_equals_one_hot_product(self):
        vocab = small_vocab()
        matrix = init_embeddings(len(vocab), dim=3, seed=1)
        tokens = ["is", "great", "camera"]
        idx = sequence_indices(tokens, vocab, length=3)
        one_hot = np.eye(len(vocab))[idx]
        npt.assert_allclose(
            embed_sequence(tokens, vocab, matrix, length=3),
            one_hot @ matrix,
            atol=1e-15,
        )


class TestInitEmbeddings:
    def test_pad_row_is_zero(self):
        matrix = init_embeddings(10, dim=8, seed=3)
        npt.assert_array_equal(matrix[PAD_INDEX], np.zeros(8))

    def test_range_scales_with_dim(self):
        matrix = init_embeddings(200, dim=8, seed=3)
        assert np.abs(matrix).max() <= 0.5 / 8

    def test_seed_determinism(self):
        npt.assert_array_equal(
            init_embeddings(20, dim=5, seed=7), init_embeddings(20, dim=5, seed=7)
        )
        assert not np.array_equal(
            init_embeddings(20, dim=5, seed=7), init_embeddings(20, dim=5, seed=8)
        )

    def test_bad_dim_rejected(self):
        with pytest.raises(ValueError):
            init_embeddings(10, dim=0, seed=0)


class TestTrainEmbeddings:
    def corpus(self):
        rng = np.random.default_rng(0)
        docs = []
        for _ in range(60):
            if rng.random() < 0.5:
                docs.append(["sun", "bright", "warm", "day"])
            else:
                docs.append(["rain", "cold", "wet", "night"])
        return docs

    def test_zero_epochs_returns_init(self):
        docs = self.corpus()
        vocab = build_vocab(docs, max_size=20)
        trained = train_embeddings(docs, vocab, dim=6, epochs=0, seed=4)
        npt.assert_array_equal(trained, init_embeddings(len(vocab), 6, seed=4))

    def test_training_moves_weights_deterministically(self):
        docs = self.corpus()
        vocab = build_vocab(docs, max_size=20)
        a = train_embeddings(docs, vocab, dim=6, epochs=2, seed=4)
        b = train_embeddings(docs, vocab, dim=6, epochs=2, seed=4)
        npt.assert_array_equal(a, b)
        assert not np.array_equal(a, init_embeddings(len(vocab), 6, seed=4))
        assert np.all(np.isfinite(a))

    def test_cooccurring_terms_end_up_closer(self):
        docs = self.corpus()
        vocab = build_vocab(docs, max_size=20)
        matrix = train_embeddings(docs, vocab, dim=8, epochs=8, seed=4)

        def cosine(u, v):
            return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))

        within = cosine(matrix[vocab.lookup("sun")], matrix[vocab.lookup("warm")])
        across = cosine(matrix[vocab.lookup("sun")], matrix[vocab.lookup("cold")])
        assert within > across


class TestTextFormat:
    def test_round_trip(self, tmp_path):
        vocab = small_vocab()
        matrix = init_embeddings(len(vocab), dim=3, seed=9)
        path = tmp_path / "vectors.txt"
        save_embeddings_text(path, vocab, matrix)
        terms, loaded = load_embeddings_text(path)
        assert terms == list(vocab.terms)
        npt.assert_array_equal(loaded, matrix)

    def test_malformed_line_reports_location(self, tmp_path):
        path = tmp_path / "vectors.txt"
        path.write_text("term-without-values\n", encoding="utf-8")
        with pytest.raises(ValueError, match="1"):
            load_embeddings_text(path)
