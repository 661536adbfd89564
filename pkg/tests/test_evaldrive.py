import json
import random
import shutil
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from edstop.corpus import RawRecord
from edstop.datasets import data_path, synthetic_records, write_synthetic_corpus
from edstop.evaldrive import (ConfusionMatrix, EvalError, GridConfig, GridReport, ReportRow,
                              SplitSpec, accuracy, f_measure, format_table, make_folds,
                              precision_recall, read_report, run_cell, run_grid,
                              split_train_test)
from edstop.classify import nb_classify, nb_train
from edstop.features import extract_features
from edstop.stoplist import StopwordList
from edstop.textnorm import tokenize


def recs(n_pos, n_neg):
    return ([RawRecord(f"p{i}", "facebook", "حلو", label="positive") for i in range(n_pos)]
            + [RawRecord(f"n{i}", "facebook", "وحش", label="negative") for i in range(n_neg)])


# -- split / folds --------------------------------------------------------------

def test_split_sizes():
    train, test = split_train_test(recs(50, 50))
    assert (len(train), len(test)) == (75, 25)


def test_split_stratified():
    train, test = split_train_test(recs(40, 20), SplitSpec(seed=5))
    assert Counter(r.label for r in test) == {"positive": 10, "negative": 5}
    assert Counter(r.label for r in train) == {"positive": 30, "negative": 15}


def test_split_deterministic_and_disjoint():
    data = recs(33, 21)
    a = split_train_test(data, SplitSpec(seed=9))
    assert a == split_train_test(data, SplitSpec(seed=9))
    assert a != split_train_test(data, SplitSpec(seed=10))
    train, test = a
    assert {r.id for r in train}.isdisjoint(r.id for r in test)
    assert len(train) + len(test) == len(data)


@given(st.integers(2, 60), st.integers(2, 60), st.integers(0, 2**63 - 1))
def test_split_proportions(n_pos, n_neg, seed):
    try:
        train, test = split_train_test(recs(n_pos, n_neg), SplitSpec(seed=seed))
    except EvalError:
        return
    counts = Counter(r.label for r in test)
    assert abs(counts["positive"] - 0.25 * n_pos) < 1 + 1e-9
    assert abs(counts["negative"] - 0.25 * n_neg) < 1 + 1e-9
    assert 0 < counts["positive"] < n_pos and 0 < counts["negative"] < n_neg


def test_split_errors():
    with pytest.raises(EvalError):
        split_train_test(recs(10, 0))
    with pytest.raises(EvalError):
        split_train_test(recs(2, 1))
    with pytest.raises(EvalError, match="missing"):
        split_train_test(recs(30, 1))
    with pytest.raises(EvalError):
        SplitSpec(test_fraction=1.0)
    with pytest.raises(EvalError):
        SplitSpec(fold_count=0)


def test_fold_sizes():
    assert [len(f) for f in make_folds(recs(40, 35), 3)] == [25, 25, 25]
    assert [len(f) for f in make_folds(recs(4, 3), 3)] == [3, 2, 2]
    with pytest.raises(EvalError):
        make_folds(recs(1, 1), 3)


@given(st.integers(0, 30), st.integers(0, 30), st.integers(1, 5))
def test_folds_partition(n_pos, n_neg, k):
    data = recs(n_pos, n_neg)
    if len(data) < k:
        return
    folds = make_folds(data, k)
    ids = [r.id for f in folds for r in f]
    assert sorted(ids) == sorted(r.id for r in data)
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1


# -- metrics ------------------------------------------------------------------

def test_accuracy_examples():
    cm = ConfusionMatrix(Counter({("p", "p"): 3, ("p", "n"): 1, ("n", "n"): 2, ("n", "p"): 2}))
    assert accuracy(cm) == 5 / 8
    assert accuracy(ConfusionMatrix.from_pairs("ab", "ab")) == 1.0
    assert accuracy(ConfusionMatrix.from_pairs("ab", "ba")) == 0.0
    with pytest.raises(EvalError):
        accuracy(ConfusionMatrix())


def test_precision_recall_examples():
    cm = ConfusionMatrix(Counter({("c", "c"): 3, ("o", "c"): 1, ("c", "o"): 2, ("o", "o"): 4}))
    assert precision_recall(cm, "c") == (0.75, 0.6)
    assert precision_recall(cm, "absent") == (0.0, 0.0)
    assert precision_recall(ConfusionMatrix.from_pairs("cco", "cco"), "c") == (1.0, 1.0)


def test_f_measure_examples():
    assert f_measure(1.0, 1.0) == 1.0
    assert f_measure(0.75, 0.6) == pytest.approx(0.6667, abs=1e-4)
    assert f_measure(0.0, 0.0) == 0.0


@given(st.lists(st.tuples(st.sampled_from("pn"), st.sampled_from("pn")), min_size=1))
def test_metric_bounds(pairs):
    cm = ConfusionMatrix.from_pairs(*zip(*pairs))
    assert cm.total == len(pairs)
    assert 0.0 <= accuracy(cm) <= 1.0
    for cls in "pn":
        p, r = precision_recall(cm, cls)
        f = f_measure(p, r)
        assert 0.0 <= f <= 1.0
        if p and r:
            assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


# -- run_cell -------------------------------------------------------------------

def test_run_cell_single_fold_equals_single_run():
    data = synthetic_records(80, seed=3)
    spec = SplitSpec(fold_count=1, seed=1)
    row = run_cell(data, None, "NB", "unigram", spec)
    train, test = split_train_test(data, spec)
    model = nb_train([(extract_features(tokenize(r.text), "unigram"), r.label) for r in train])
    pred = [nb_classify(model, extract_features(tokenize(r.text), "unigram"))[0] for r in test]
    cm = ConfusionMatrix.from_pairs([r.label for r in test], pred)
    assert row.accuracy == accuracy(cm)
    assert row.f_positive == f_measure(*precision_recall(cm, "positive"))
    assert row.stoplist == "NONE" and row.train_seconds is None


def test_run_cell_ed_not_worse_on_synthetic():
    data = synthetic_records()
    ed = StopwordList("ED", "ED", {"بس", "لازم", "ده", "دي", "اللي", "عشان", "يعني", "كده",
                                   "اوي", "جدا", "وده", "وبس", "فده", "بتاعه", "بتاعهم"})
    spec = SplitSpec(seed=2014)
    assert run_cell(data, ed, "NB", "unigram", spec).accuracy >= \
        run_cell(data, None, "NB", "unigram", spec).accuracy


def test_run_cell_rejects_unknown_choices():
    with pytest.raises(EvalError):
        run_cell(recs(10, 10), None, "SVM", "unigram")
    with pytest.raises(EvalError):
        run_cell(recs(10, 10), None, "NB", "trigram")


# -- grid ---------------------------------------------------------------------

def grid_dir(tmp_path, n_corpora=1):
    corpora = []
    for i in range(n_corpora):
        write_synthetic_corpus(tmp_path / f"c{i}.jsonl", n=90, seed=i)
        corpora.append({"name": f"C{i}", "path": f"c{i}.jsonl", "source": "facebook"})
    shutil.copy(data_path("msa"), tmp_path / "msa.txt")
    shutil.copy(data_path("synthetic_ed.txt"), tmp_path / "ed.txt")
    return {"corpora": corpora, "lists": {"MSA": "msa.txt", "ED": "ed.txt"}, "seed": 4}


def test_grid_one_corpus_sixteen_rows(tmp_path):
    cfg = GridConfig.from_dict(grid_dir(tmp_path), tmp_path)
    report = run_grid(cfg)
    assert len(report.rows) == 16 and not report.failures
    keys = [(r.stoplist, r.classifier, r.feature_kind) for r in report.rows]
    assert keys[:4] == [("NONE", "NB", "unigram"), ("NONE", "NB", "bigram"),
                        ("NONE", "DT", "unigram"), ("NONE", "DT", "bigram")]
    assert keys[-1] == ("MSA+ED", "DT", "bigram")


def test_grid_three_corpora_without_baseline(tmp_path):
    d = grid_dir(tmp_path, 3)
    d["stoplists"] = ["MSA", "ED", "MSA+ED"]
    report = run_grid(GridConfig.from_dict(d, tmp_path))
    assert len(report.rows) == 36
    assert [r.corpus for r in report.rows[::12]] == ["C0", "C1", "C2"]


def test_grid_shares_test_set_and_is_deterministic(tmp_path):
    cfg = GridConfig.from_dict(grid_dir(tmp_path), tmp_path)
    assert run_grid(cfg).to_csv_text() == run_grid(cfg).to_csv_text()


def test_grid_failed_corpus_becomes_error_rows(tmp_path):
    d = grid_dir(tmp_path, 2)
    (tmp_path / "c1.jsonl").write_text(
        "\n".join(json.dumps({"id": str(i), "source": "facebook", "text": "حلو",
                              "label": "positive"}) for i in range(10)) + "\n", encoding="utf-8")
    report = run_grid(GridConfig.from_dict(d, tmp_path))
    assert len(report.rows) == 32
    assert len(report.failures) == 16 and {r.corpus for r in report.failures} == {"C1"}
    assert sum(line.endswith(",,,,") for line in report.to_csv_text().splitlines()) == 16


def test_grid_config_errors(tmp_path):
    d = grid_dir(tmp_path)
    with pytest.raises(EvalError, match="unknown config keys"):
        GridConfig.from_dict({**d, "bogus": 1}, tmp_path)
    with pytest.raises(EvalError, match="no corpora"):
        GridConfig.from_dict({**d, "corpora": []}, tmp_path)
    with pytest.raises(EvalError, match="missing files"):
        run_grid(GridConfig.from_dict({**d, "lists": {"MSA": "nope.txt", "ED": "ed.txt"}}, tmp_path))
    with pytest.raises(EvalError, match="not configured"):
        run_grid(GridConfig.from_dict({**d, "lists": {"MSA": "msa.txt"}}, tmp_path))
    with pytest.raises(EvalError, match="classifier"):
        run_grid(GridConfig.from_dict({**d, "classifiers": ["SVM"]}, tmp_path))
    (tmp_path / "bad.json").write_text("{", encoding="utf-8")
    with pytest.raises(EvalError, match="invalid JSON"):
        GridConfig.load(tmp_path / "bad.json")


def test_report_round_trip_and_table(tmp_path):
    rows = [ReportRow("Reviews", "NB", "unigram", s, a, 0.5, 0.25)
            for s, a in (("MSA", 0.9), ("ED", 0.91))]
    rows.append(ReportRow("Reviews", "DT", "bigram", "MSA", error="boom"))
    GridReport(rows).to_csv(tmp_path / "r.csv")
    back = read_report(tmp_path / "r.csv")
    assert [r.accuracy for r in back] == [0.9, 0.91, None]
    table = format_table(back)
    lines = table.splitlines()
    assert lines[0].split()[:2] == ["Data", "Classifier"]
    assert "Naive Bayes + Unigram" in lines[2] and "90.00" in lines[2]
    assert lines[3].split() == ["ED", "91.00", "0.50", "0.25"]
    assert "failed" in lines[4]
    (tmp_path / "x.csv").write_text("a,b\n", encoding="utf-8")
    with pytest.raises(EvalError):
        read_report(tmp_path / "x.csv")
