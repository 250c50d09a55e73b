import math
import os
from pathlib import Path

import pytest

import lexforge

TOY = Path(os.environ.get("LEXFORGE_TOY_DIR", Path(__file__).resolve().parents[2] / "data" / "toy"))


def test_version():
    assert lexforge.__version__ == "0.1.0"


def test_pmi():
    # p(a)=p(b)=0.1, p(ab)=0.2 -> log2 20
    uni = {"a": 10, "b": 10}
    bi = {("a", "b"): 20}
    assert lexforge.pmi("a", "b", uni, bi, total=100) == pytest.approx(math.log2(20))
    assert lexforge.pmi("a", "b", uni, bi, total=100, base="e") == pytest.approx(math.log(20))


def test_scc():
    comps = lexforge.strongly_connected_components(["A", "B", "C"], [("A", "B"), ("B", "A"), ("B", "C")])
    assert comps == [["A", "B"], ["C"]]
    assert lexforge.select_seeds(comps) == ["A"]


def test_kappa_hand_fixture():
    r1 = {"i1": "positive", "i2": "negative", "i3": "positive", "i4": "neutral"}
    r2 = {"i1": "positive", "i2": "negative", "i3": "negative", "i4": "neutral"}
    assert abs(lexforge.fleiss_kappa([r1, r2]) - 13 / 21) < 1e-9
    assert lexforge.fleiss_kappa([r1, r1]) == 1.0


def test_text_and_vectors():
    assert lexforge.tokenize("Good, not bad. Fine!") == [["Good", "not", "bad"], ["Fine"]]
    vocab = lexforge.Vocabulary([["good", "fine"], ["bad"]])
    assert len(vocab) == 3
    v = vocab.vectorize(["good", "good", "bad"])
    assert sum(w * w for w in v.values()) == pytest.approx(1.0)


def test_classifiers_and_scores():
    vectors = [{0: 1.0}, {1: 1.0}, {2: 1.0}]
    labels = ["positive", "negative", "neutral"]
    assert lexforge.predict_knn(vectors, labels, {1: 0.5}, k=1) == "negative"
    assert lexforge.predict_centroid(vectors, labels, {0: 2.0}) == "positive"
    r = lexforge.score_labels(["positive", "positive", "neutral", "neutral", "negative", "negative"], ["neutral"] * 6)
    assert r["accuracy"] == pytest.approx(1 / 3)
    assert r["macro_f"] == pytest.approx(1 / 6)
    with pytest.raises(lexforge.LexforgeError):
        lexforge.score_labels(["positive"], [])


def test_toy_pipeline(tmp_path):
    onto = lexforge.Ontology.load(TOY / "ontology.jsonl")
    assert "adj.good" in onto
    assert lexforge.validate_config(TOY / "project.toml")["ok"]

    r = lexforge.run_pipeline(TOY / "project.toml", output_dir=tmp_path)
    assert r["status"] == 0, r["message"]
    assert all(not skipped for _, skipped in r["stages"])
    lex = lexforge.read_lexicon(tmp_path / "lexicon.tsv")
    assert len(lex) == len(onto)
    assert lex["adj.good"][1] == "positive"

    again = lexforge.run_pipeline(TOY / "project.toml", output_dir=tmp_path)
    assert again["status"] == 0
    assert all(skipped for _, skipped in again["stages"])
