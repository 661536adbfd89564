"""Evaluation: the fold protocol with its metrics, and the experiment grid runner.

Protocol: a stratified, seeded 75/25 train/test split; the training part is
cut into three folds; one model is trained on each fold alone and scored on
the shared test set; a grid row reports the mean over folds.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .classify import DTConfig, dt_classify, dt_train, nb_classify, nb_train
from .corpus import clean_corpus, load_corpus
from .features import FEATURE_KINDS, extract_features, remove_stopwords
from .stoplist import ListTag, StopwordList, load_list, merge_lists
from .textnorm import load_mapping, tokenize

log = logging.getLogger(__name__)

POSITIVE, NEGATIVE = "positive", "negative"
CLASSIFIERS = ("NB", "DT")
STOPLISTS = ("NONE", "MSA", "ED", "MSA+ED")
REPORT_HEADER = ["corpus", "classifier", "features", "stoplist",
                 "accuracy", "f_pos", "f_neg", "train_seconds"]


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.25
    fold_count: int = 3
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise EvalError("test_fraction must be strictly between 0 and 1")
        if self.fold_count < 1:
            raise EvalError("fold_count must be at least 1")


# -- splitting ----------------------------------------------------------------

def _allocate(sizes: dict, total: int) -> dict:
    """Largest-remainder apportionment of `total` across label groups."""
    n = sum(sizes.values())
    quotas = {l: sizes[l] * total / n for l in sizes}
    alloc = {l: math.floor(q) for l, q in quotas.items()}
    rest = total - sum(alloc.values())
    for l in sorted(sizes, key=lambda l: (-(quotas[l] - alloc[l]), l))[:rest]:
        alloc[l] += 1
    return alloc


def split_train_test(records: Sequence, spec: SplitSpec = SplitSpec()):
    """Seeded stratified split into ``(train, test)``.

    The records are shuffled once with `spec.seed`. For every label, the first
    records in shuffled order go to train and the rest to test; the per-label
    test counts are apportioned from round(N * test_fraction) so each label's
    share is within one record of its exact proportion. Both lists keep the
    shuffled order.
    """
    records = list(records)
    if len(records) < spec.fold_count + 1:
        raise EvalError(f"need at least {spec.fold_count + 1} records, got {len(records)}")
    order = records[:]
    random.Random(spec.seed).shuffle(order)
    sizes = Counter(r.label for r in order)
    if len(sizes) < 2:
        raise EvalError(f"need both labels present, got {sorted(sizes)}")
    n_test = math.floor(len(order) * spec.test_fraction + 0.5)
    test_quota = _allocate(sizes, n_test)
    for label, q in test_quota.items():
        if q == 0 or q == sizes[label]:
            raise EvalError(f"label {label!r} ({sizes[label]} records) would be missing "
                            f"from the {'test' if q == 0 else 'train'} set")
    train_quota = {l: sizes[l] - test_quota[l] for l in sizes}
    seen = Counter()
    train, test = [], []
    for rec in order:
        seen[rec.label] += 1
        (train if seen[rec.label] <= train_quota[rec.label] else test).append(rec)
    return train, test


def make_folds(train: Sequence, fold_count: int) -> list[list]:
    """Deal `train` round-robin into `fold_count` folds, label group by label group.

    Records of each label (in label order, keeping their relative order) are
    dealt with one running counter, so fold sizes differ by at most one and
    every label with at least `fold_count` records reaches every fold.
    """
    if fold_count < 1:
        raise EvalError("fold_count must be at least 1")
    if len(train) < fold_count:
        raise EvalError(f"cannot make {fold_count} folds from {len(train)} records")
    folds = [[] for _ in range(fold_count)]
    labels = sorted({r.label for r in train})
    i = 0
    for label in labels:
        for rec in train:
            if rec.label == label:
                folds[i % fold_count].append(rec)
                i += 1
    return folds


# -- metrics ------------------------------------------------------------------

@dataclass
class ConfusionMatrix:
    counts: Counter = field(default_factory=Counter)  # (true, predicted) -> n

    @classmethod
    def from_pairs(cls, truth, predicted) -> "ConfusionMatrix":
        return cls(Counter(zip(truth, predicted)))

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise EvalError("accuracy of an empty confusion matrix")
    return sum(n for (t, p), n in cm.counts.items() if t == p) / cm.total


def precision_recall(cm: ConfusionMatrix, cls: str) -> tuple[float, float]:
    """Per-class precision and recall; a zero denominator gives 0."""
    tp = cm.counts[(cls, cls)]
    fp = sum(n for (t, p), n in cm.counts.items() if p == cls and t != cls)
    fn = sum(n for (t, p), n in cm.counts.items() if t == cls and p != cls)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return precision, recall


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


# -- grid ---------------------------------------------------------------------

@dataclass
class ReportRow:
    corpus: str
    classifier: str
    feature_kind: str
    stoplist: str
    accuracy: float | None = None
    f_positive: float | None = None
    f_negative: float | None = None
    train_seconds: float | None = None
    error: str | None = None

    def csv_fields(self) -> list[str]:
        num = lambda x: "" if x is None else f"{x:.6f}"
        return [self.corpus, self.classifier, self.feature_kind, self.stoplist,
                num(self.accuracy), num(self.f_positive), num(self.f_negative),
                num(self.train_seconds)]


@dataclass(frozen=True)
class CellSettings:
    dt_config: DTConfig = DTConfig()
    alpha: float = 1.0
    fold_variants: bool = False
    record_timing: bool = False


def _train(classifier: str, examples, settings: CellSettings):
    if classifier == "NB":
        return nb_train(examples, settings.alpha)
    if classifier == "DT":
        return dt_train(examples, settings.dt_config)
    raise EvalError(f"unknown classifier {classifier!r}")


def _predict(classifier: str, model, features):
    if classifier == "NB":
        return nb_classify(model, features)[0]
    return dt_classify(model, features)


@dataclass
class _Doc:
    label: str
    tokens: list


def _docs(records, mapping=None) -> list[_Doc]:
    return [r if isinstance(r, _Doc) else _Doc(r.label, tokenize(r.text, mapping))
            for r in records]


def run_cell(corpus, stoplist, classifier: str, feature_kind: str,
             spec: SplitSpec = SplitSpec(), settings: CellSettings = CellSettings(),
             split=None, corpus_name: str = "corpus", stoplist_name: str | None = None,
             mapping=None) -> ReportRow:
    """Evaluate one grid cell and return its fold-averaged row.

    `corpus` is a sequence of labeled records (or a CleanCorpus). `stoplist`
    may be None for the no-removal baseline. `split` lets callers pin the
    ``(train, test)`` pair so every cell of a corpus shares one test set.
    """
    if feature_kind not in FEATURE_KINDS:
        raise EvalError(f"unknown feature kind {feature_kind!r}")
    if classifier not in CLASSIFIERS:
        raise EvalError(f"unknown classifier {classifier!r}")
    records = list(getattr(corpus, "records", corpus))
    train, test = split if split is not None else split_train_test(records, spec)
    folds = make_folds(_docs(train, mapping), spec.fold_count)
    test_docs = _docs(test, mapping)

    def featurize(doc):
        tokens = doc.tokens if stoplist is None else remove_stopwords(
            doc.tokens, stoplist, fold=settings.fold_variants)
        return extract_features(tokens, feature_kind)

    test_x = [featurize(d) for d in test_docs]
    truth = [d.label for d in test_docs]
    accs, fps, fns, secs = [], [], [], []
    for fold in folds:
        examples = [(featurize(d), d.label) for d in fold]
        t0 = time.perf_counter()
        model = _train(classifier, examples, settings)
        secs.append(time.perf_counter() - t0)
        cm = ConfusionMatrix.from_pairs(truth, [_predict(classifier, model, x) for x in test_x])
        accs.append(accuracy(cm))
        fps.append(f_measure(*precision_recall(cm, POSITIVE)))
        fns.append(f_measure(*precision_recall(cm, NEGATIVE)))
    mean = lambda xs: math.fsum(xs) / len(xs)
    name = stoplist_name or ("NONE" if stoplist is None else getattr(stoplist, "name", "custom"))
    return ReportRow(corpus_name, classifier, feature_kind, name, mean(accs), mean(fps),
                     mean(fns), mean(secs) if settings.record_timing else None)


@dataclass
class CorpusSpec:
    name: str
    path: str
    source: str


@dataclass
class GridConfig:
    corpora: list[CorpusSpec]
    msa_list: str | None = None
    ed_list: str | None = None
    merged_list: str | None = None
    split: SplitSpec = SplitSpec()
    settings: CellSettings = CellSettings()
    arabic_threshold: float = 0.5
    mapping: str | None = None
    stoplists: tuple = STOPLISTS
    classifiers: tuple = CLASSIFIERS
    feature_kinds: tuple = FEATURE_KINDS

    @classmethod
    def from_dict(cls, d: dict, base_dir: str | Path = ".") -> "GridConfig":
        """Build a config from a parsed JSON document; relative paths resolve against `base_dir`."""
        base = Path(base_dir)
        resolve = lambda p: None if p is None else str((base / p) if not Path(p).is_absolute() else p)
        known = {"corpora", "lists", "seed", "split", "decision_tree", "naive_bayes",
                 "fold_variants", "record_timing", "arabic_threshold", "mapping",
                 "stoplists", "classifiers", "features"}
        unknown = set(d) - known
        if unknown:
            raise EvalError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if not d.get("corpora"):
            raise EvalError("config lists no corpora")
        corpora = [CorpusSpec(c["name"], resolve(c["path"]), c["source"]) for c in d["corpora"]]
        lists = d.get("lists", {})
        split = d.get("split", {})
        dt = d.get("decision_tree", {})
        nb = d.get("naive_bayes", {})
        return cls(
            corpora=corpora,
            msa_list=resolve(lists.get("MSA")),
            ed_list=resolve(lists.get("ED")),
            merged_list=resolve(lists.get("MSA+ED")),
            split=SplitSpec(split.get("test_fraction", 0.25), split.get("fold_count", 3),
                            d.get("seed", 0)),
            settings=CellSettings(
                DTConfig(dt.get("entropy_cutoff", 0.8), dt.get("depth_cutoff", 5),
                         dt.get("support_cutoff", 30)),
                nb.get("alpha", 1.0), d.get("fold_variants", False),
                d.get("record_timing", False)),
            arabic_threshold=d.get("arabic_threshold", 0.5),
            mapping=resolve(d.get("mapping")),
            stoplists=tuple(d.get("stoplists", STOPLISTS)),
            classifiers=tuple(d.get("classifiers", CLASSIFIERS)),
            feature_kinds=tuple(d.get("features", FEATURE_KINDS)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "GridConfig":
        path = Path(path)
        try:
            d = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise EvalError(f"{path}: invalid JSON ({exc.msg})") from None
        return cls.from_dict(d, path.parent)

    def validate(self) -> None:
        for name in self.stoplists:
            if name not in STOPLISTS:
                raise EvalError(f"unknown stoplist condition {name!r}")
        for name in self.classifiers:
            if name not in CLASSIFIERS:
                raise EvalError(f"unknown classifier {name!r}")
        for name in self.feature_kinds:
            if name not in FEATURE_KINDS:
                raise EvalError(f"unknown feature kind {name!r}")
        needed = {"MSA": [self.msa_list], "ED": [self.ed_list],
                  "MSA+ED": [self.merged_list] if self.merged_list else [self.msa_list, self.ed_list]}
        paths = [c.path for c in self.corpora] + ([self.mapping] if self.mapping else [])
        for name in self.stoplists:
            if name == "NONE":
                continue
            if None in needed[name]:
                raise EvalError(f"stoplist condition {name} requested but its list file is not configured")
            paths += needed[name]
        missing = [p for p in paths if not Path(p).is_file()]
        if missing:
            raise EvalError(f"missing files: {', '.join(missing)}")


@dataclass
class GridReport:
    rows: list[ReportRow]

    @property
    def failures(self) -> list[ReportRow]:
        return [r for r in self.rows if r.error is not None]

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        return buf.getvalue()

    def to_csv(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_csv_text().encode("utf-8"))


def _load_stoplists(config: GridConfig) -> dict:
    lists = {"NONE": None}
    wanted = set(config.stoplists)
    if wanted & {"MSA", "MSA+ED"} and config.msa_list:
        lists["MSA"] = load_list(config.msa_list, name="MSA", tag=ListTag.MSA)
    if wanted & {"ED", "MSA+ED"} and config.ed_list:
        lists["ED"] = load_list(config.ed_list, name="ED", tag=ListTag.ED)
    if "MSA+ED" in wanted:
        if config.merged_list:
            lists["MSA+ED"] = load_list(config.merged_list, name="MSA+ED", tag=ListTag.MERGED)
        else:
            lists["MSA+ED"] = merge_lists(lists["MSA"], lists["ED"], name="MSA+ED")
    for name, sl in lists.items():
        if sl is not None and not sl.entries:
            raise EvalError(f"stoplist {name} is empty")
    return lists


def run_grid(config: GridConfig) -> GridReport:
    """Run every configured cell: corpus x stoplist x classifier x features.

    Rows come out in that nesting order. A failing cell is logged and kept as a
    row with empty metrics and its `error` set; the rest of the grid still runs.
    """
    config.validate()
    lists = _load_stoplists(config)
    mapping = load_mapping(config.mapping) if config.mapping else None
    rows = []
    for cspec in config.corpora:
        cells = [(s, c, k) for s in config.stoplists for c in config.classifiers
                 for k in config.feature_kinds]
        try:
            records = load_corpus(cspec.path, cspec.source)
            corpus = clean_corpus(records, cspec.source, config.arabic_threshold)
            train, test = split_train_test(corpus.records, config.split)
            split = (_docs(train, mapping), _docs(test, mapping))
        except Exception as exc:  # noqa: BLE001 - reported per cell
            log.error("corpus %s failed: %s", cspec.name, exc)
            rows += [ReportRow(cspec.name, c, k, s, error=str(exc)) for s, c, k in cells]
            continue
        for s, c, k in cells:
            try:
                row = run_cell(corpus, lists[s], c, k, config.split, config.settings,
                               split=split, corpus_name=cspec.name, stoplist_name=s)
            except Exception as exc:  # noqa: BLE001 - reported per cell
                log.error("cell %s/%s/%s/%s failed: %s", cspec.name, c, k, s, exc)
                row = ReportRow(cspec.name, c, k, s, error=str(exc))
            rows.append(row)
    return GridReport(rows)


# -- text rendering -------------------------------------------------------------

def read_report(path: str | Path) -> list[ReportRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REPORT_HEADER:
            raise EvalError(f"{path}: unexpected header {reader.fieldnames}")
        num = lambda s: float(s) if s else None
        return [ReportRow(r["corpus"], r["classifier"], r["features"], r["stoplist"],
                          num(r["accuracy"]), num(r["f_pos"]), num(r["f_neg"]),
                          num(r["train_seconds"])) for r in reader]


_CLASSIFIER_NAMES = {"NB": "Naive Bayes", "DT": "Decision Tree"}


def format_table(rows: Sequence[ReportRow]) -> str:
    """Render rows as an aligned text table grouped by corpus and classifier + features."""
    header = ["Data", "Classifier + Feature Selection", "Removing Stopwords",
              "Accuracy (%)", "F-P", "F-N"]
    first_seen = {}
    for i, r in enumerate(rows):
        first_seen.setdefault(r.corpus, i)
        first_seen.setdefault((r.corpus, r.classifier, r.feature_kind), i)
    # group rows of one corpus / classifier / features together, keeping report order
    ordered = sorted(rows, key=lambda r: (first_seen[r.corpus],
                                          first_seen[(r.corpus, r.classifier, r.feature_kind)]))
    body = []
    last_corpus = last_group = None
    for r in ordered:
        group = f"{_CLASSIFIER_NAMES.get(r.classifier, r.classifier)} + {r.feature_kind.capitalize()}"
        body.append([
            r.corpus if r.corpus != last_corpus else "",
            group if (r.corpus, group) != last_group else "",
            r.stoplist,
            "failed" if r.accuracy is None else f"{100 * r.accuracy:.2f}",
            "" if r.f_positive is None else f"{r.f_positive:.2f}",
            "" if r.f_negative is None else f"{r.f_negative:.2f}",
        ])
        last_corpus, last_group = r.corpus, (r.corpus, group)
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
             for row in [header] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
