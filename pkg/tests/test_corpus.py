import pytest

from hoopkit.corpus import CorpusError, chain_products, dedupe, load_corpus, parse_range
from hoopkit.parsing import format_algebra
from hoopkit.search import is_isomorphic
from hoopkit.theories import lukasiewicz_chain


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("2..5") == [2, 3, 4, 5]
    assert parse_range("1-3") == [1, 2, 3]


def test_luk_flag_adds_chains():
    corpus, failures = load_corpus(luk=["3"])
    assert list(corpus) == ["L3"] and not failures
    assert list(load_corpus(luk=["2..4"])[0]) == ["L2", "L3", "L4"]


def test_models_flag():
    corpus, _ = load_corpus(model_specs=["mv:3"])
    (m,) = corpus.values()
    assert is_isomorphic(m, lukasiewicz_chain(3))
    with pytest.raises(CorpusError):
        load_corpus(model_specs=["mv"])


def test_duplicate_names_raise(tmp_path):
    f = tmp_path / "l3.alg"
    f.write_text(format_algebra(lukasiewicz_chain(3), theory="mv"))
    with pytest.raises(CorpusError):
        load_corpus([f], luk=["3"])


def test_file_theory_failures_are_reported(tmp_path):
    bad = lukasiewicz_chain(3).relabel([0, 1, 2])
    text = format_algebra(bad, name="Bad", theory="mv").replace("[2, 1, 0]", "[2, 0, 1]")
    f = tmp_path / "bad.alg"
    f.write_text(text)
    corpus, failures = load_corpus([f])
    assert "Bad" in corpus and len(failures) == 1 and failures[0].startswith("Bad:")
    assert load_corpus([f], check=False)[1] == []


def test_chain_products_are_distinct():
    algs = chain_products(8)
    # factorisations of 2..8 into factors >= 2
    assert len(algs) == 1 + 1 + 2 + 1 + 2 + 1 + 3
    assert len(dedupe(algs)) == len(algs)
    assert dedupe(algs + [lukasiewicz_chain(4)]) == algs
