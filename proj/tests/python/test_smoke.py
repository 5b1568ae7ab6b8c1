import math
import os
import pathlib

import numpy as np
import pytest

import flexlex

DATA = pathlib.Path(os.environ.get("FLEXLEX_TEST_DATA", pathlib.Path(__file__).parent.parent / "data"))


def test_parse_and_census():
    corpus = flexlex.load_corpus([DATA / "french_voyage.conllu"], "fr")
    assert corpus.token_count == 17
    assert len(corpus.sentences) == 2
    clusters = flexlex.build_clusters(corpus)
    assert clusters.resolve("Voyager") == "voyage"
    summary, records = flexlex.census(corpus, flexlex.FlexibilityThresholds(min_total=5))
    voyage = next(r for r in records if r.cluster == "voyage")
    assert (voyage.noun_count, voyage.verb_count) == (3, 2)
    assert voyage.flexible and voyage.dominant == "noun"
    assert not summary.included


def test_malformed_conllu_raises():
    with pytest.raises(flexlex.MalformedRecordError):
        flexlex.parse_conllu("1\tonly\tthree\n")


def test_store_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    rec = flexlex.EmbeddingRecord("voyage", rng.normal(size=(4, 3)), rng.normal(size=(2, 3)))
    store = flexlex.EmbeddingStore(3, "layer4", [rec])
    path = tmp_path / "s.wcf"
    flexlex.write_store(store, path)
    back = flexlex.read_store(path)
    assert back == store
    np.testing.assert_array_equal(back.records[0].noun_vectors, rec.noun_vectors)
    raw = flexlex.encode_store(store)
    assert raw[:4] == b"WCF1"
    with pytest.raises(flexlex.CorruptionError):
        flexlex.decode_store(raw[:-3])
    with pytest.raises(flexlex.UnrecognizedFormatError):
        flexlex.decode_store(b"XXXX" + raw[4:])


def test_metrics_against_numpy():
    store = flexlex.synth_store(lemmas=6, nouns=35, verbs=35, dimension=5, offset=1.0, seed=2)
    rec = store.records[0]
    sem = flexlex.lemma_semantics(rec)
    n, v = rec.noun_vectors.astype(float), rec.verb_vectors.astype(float)
    pn, pv = n.mean(axis=0), v.mean(axis=0)
    shift = 1 - pn @ pv / (np.linalg.norm(pn) * np.linalg.norm(pv))
    assert math.isclose(sem.shift, shift, rel_tol=1e-9)
    assert math.isclose(sem.noun_variation, np.linalg.norm(n - pn, axis=1).mean(), rel_tol=1e-9)
    row = flexlex.language_metrics(store, seed=1)
    assert row["lemmas"] == 6 and row["ties"] == 6
    assert row["nvs"] is None


def test_stats_and_probe():
    assert flexlex.stats.spearman([1, 2, 3], [10, 20, 30])["statistic"] == 1.0
    assert flexlex.stats.paired_t([1, 2, 3], [1, 2, 3])["p_value"] == 1.0
    ratings = flexlex.load_ratings(DATA.parent.parent / "data" / "english_ratings.tsv")
    assert len(ratings) == 138
    pca = flexlex.stats.pca2([[0, 0], [1, 0], [2, 0.1], [3, 0]])
    assert pca["explained_variance"][0] > pca["explained_variance"][1]
