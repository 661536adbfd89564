"""Bernoulli Naive Bayes and an entropy-cutoff decision tree over presence features.

Both classifiers take training examples as ``(features, label)`` pairs where
`features` is a FeatureSet or any set of hashable feature ids.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

from .features import feature_sort_key

SCHEMA_VERSION = 1


class ClassifierError(ValueError):
    pass


def _feats(x):
    return getattr(x, "features", x)


def entropy(counts: Iterable[int]) -> float:
    """Shannon entropy in bits of a label-count distribution."""
    counts = [c for c in counts]
    total = sum(counts)
    if total <= 0:
        raise ClassifierError("entropy of an empty distribution")
    return -sum((c / total) * math.log2(c / total) for c in counts if c)


# -- Naive Bayes -----------------------------------------------------------------

@dataclass
class NBModel:
    labels: list
    log_prior: dict
    log_likelihood: dict  # (feature, label) -> log P(feature present | label)
    vocabulary: frozenset
    smoothing_alpha: float = 1.0
    # per label: log P(feature absent | label) summed over the vocabulary
    _absent_total: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._absent_total:
            self._absent_total = {
                l: math.fsum(_log1mexp(self.log_likelihood[(f, l)]) for f in self.vocabulary)
                for l in self.labels
            }

    def likelihood(self, feature, label) -> float:
        return math.exp(self.log_likelihood[(feature, label)])

    def to_dict(self) -> dict:
        fmt = lambda x: format(x, ".17g")
        vocab = sorted(self.vocabulary, key=feature_sort_key)
        return {
            "schema_version": SCHEMA_VERSION,
            "type": "naive_bayes",
            "labels": list(self.labels),
            "smoothing_alpha": fmt(self.smoothing_alpha),
            "log_prior": {l: fmt(v) for l, v in self.log_prior.items()},
            "log_likelihood": [[_fid_out(f), l, fmt(self.log_likelihood[(f, l)])]
                               for f in vocab for l in self.labels],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NBModel":
        _check_schema(d, "naive_bayes")
        ll = {(_fid_in(f), l): float(v) for f, l, v in d["log_likelihood"]}
        return cls(labels=list(d["labels"]),
                   log_prior={l: float(v) for l, v in d["log_prior"].items()},
                   log_likelihood=ll,
                   vocabulary=frozenset(f for f, _ in ll),
                   smoothing_alpha=float(d["smoothing_alpha"]))


def _log1mexp(logp: float) -> float:
    """log(1 - exp(logp)) for logp < 0."""
    return math.log1p(-math.exp(logp))


def nb_train(examples: Sequence, alpha: float = 1.0) -> NBModel:
    """Fit a Bernoulli presence model with symmetric add-`alpha` smoothing.

    P(f present | l) = (docs of l containing f + alpha) / (docs of l + 2 alpha)
    """
    if alpha <= 0:
        raise ClassifierError("smoothing alpha must be positive")
    label_counts = Counter(label for _, label in examples)
    if len(label_counts) < 2:
        raise ClassifierError(f"need at least two labels to train, got {sorted(label_counts)}")
    labels = sorted(label_counts)
    n = len(examples)
    present = Counter()
    for x, label in examples:
        for f in _feats(x):
            present[(f, label)] += 1
    vocabulary = frozenset(f for f, _ in present)
    log_prior = {l: math.log(label_counts[l] / n) for l in labels}
    log_likelihood = {}
    for f in vocabulary:
        for l in labels:
            log_likelihood[(f, l)] = math.log((present[(f, l)] + alpha) / (label_counts[l] + 2 * alpha))
    return NBModel(labels, log_prior, log_likelihood, vocabulary, alpha)


def nb_scores(model: NBModel, features) -> dict:
    """Per-label log joint score; features outside the vocabulary are ignored."""
    seen = [f for f in _feats(features) if f in model.vocabulary]
    scores = {}
    for l in model.labels:
        terms = [model.log_prior[l], model._absent_total[l]]
        for f in seen:
            lp = model.log_likelihood[(f, l)]
            terms.append(lp)
            terms.append(-_log1mexp(lp))
        scores[l] = math.fsum(terms)
    return scores


# log scores this close are treated as tied: exact ties in probability can
# differ by a few ulps once summed as logs
TIE_REL_TOL = 1e-12


def _argmax(scores: dict):
    top = max(scores.values())
    return min(l for l, s in scores.items()
               if math.isclose(s, top, rel_tol=TIE_REL_TOL, abs_tol=TIE_REL_TOL))


def nb_classify(model: NBModel, features) -> tuple:
    """Return ``(label, scores)``; ties go to the alphabetically first label.

    Scores within `TIE_REL_TOL` (relative) of the best count as ties.
    """
    scores = nb_scores(model, features)
    return _argmax(scores), scores


def nb_posterior(model: NBModel, features) -> dict:
    scores = nb_scores(model, features)
    top = max(scores.values())
    z = math.fsum(math.exp(s - top) for s in scores.values())
    return {l: math.exp(s - top) / z for l, s in scores.items()}


# -- decision tree ----------------------------------------------------------------

@dataclass(frozen=True)
class DTConfig:
    entropy_cutoff: float = 0.8
    depth_cutoff: int = 5
    support_cutoff: int = 30

    def __post_init__(self):
        if not 0.0 <= self.entropy_cutoff <= 1.0:
            raise ClassifierError("entropy_cutoff must lie in [0, 1]")
        if self.depth_cutoff < 0 or self.support_cutoff < 0:
            raise ClassifierError("depth_cutoff and support_cutoff must be non-negative")


@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True, eq=False)
class Split:
    feature: object
    present: "Node"
    absent: "Node"


Node = Union[Leaf, Split]


@dataclass
class DTModel:
    root: Node
    config: DTConfig
    labels: list

    def depth(self) -> int:
        return _depth(self.root)

    def node_count(self) -> int:
        return _count(self.root)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "type": "decision_tree",
                "labels": list(self.labels),
                "config": {"entropy_cutoff": format(self.config.entropy_cutoff, ".17g"),
                           "depth_cutoff": self.config.depth_cutoff,
                           "support_cutoff": self.config.support_cutoff},
                "root": _node_out(self.root)}

    @classmethod
    def from_dict(cls, d: dict) -> "DTModel":
        _check_schema(d, "decision_tree")
        c = d["config"]
        config = DTConfig(float(c["entropy_cutoff"]), int(c["depth_cutoff"]), int(c["support_cutoff"]))
        return cls(_node_in(d["root"]), config, list(d["labels"]))


def _depth(node) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(_depth(node.present), _depth(node.absent))


def _count(node) -> int:
    if isinstance(node, Leaf):
        return 1
    return 1 + _count(node.present) + _count(node.absent)


def _majority(counts: Counter) -> str:
    return min(counts, key=lambda l: (-counts[l], l))


def _best_split(examples, counts: Counter):
    n = len(examples)
    parent = entropy(counts.values())
    present = {}
    for x, label in examples:
        for f in x:
            present.setdefault(f, Counter())[label] += 1
    best, best_gain = None, -math.inf
    for f in sorted(present, key=feature_sort_key):
        pc = present[f]
        n_p = sum(pc.values())
        if n_p == n:
            continue
        ac = counts - pc
        gain = parent - (n_p / n) * entropy(pc.values()) - ((n - n_p) / n) * entropy(ac.values())
        if gain > best_gain:
            best, best_gain = f, gain
    return best


def _grow(examples, depth: int, config: DTConfig):
    counts = Counter(label for _, label in examples)
    if (entropy(counts.values()) <= config.entropy_cutoff
            or depth >= config.depth_cutoff
            or len(examples) <= config.support_cutoff):
        return Leaf(_majority(counts))
    f = _best_split(examples, counts)
    if f is None:
        return Leaf(_majority(counts))
    yes = [e for e in examples if f in e[0]]
    no = [e for e in examples if f not in e[0]]
    return Split(f, _grow(yes, depth + 1, config), _grow(no, depth + 1, config))


def dt_train(examples: Sequence, config: DTConfig = DTConfig()) -> DTModel:
    """Grow a tree on boolean presence features by information gain.

    A node becomes a majority-label leaf when its label entropy is at or below
    `entropy_cutoff`, it sits at `depth_cutoff`, it holds no more than
    `support_cutoff` examples, or no feature separates its examples. Otherwise
    it splits on the separating feature with the highest gain (lowest feature
    id on ties), even when that gain is zero, so XOR-like patterns still get
    refined.
    """
    if not examples:
        raise ClassifierError("cannot train a tree on zero examples")
    data = [(frozenset(_feats(x)), label) for x, label in examples]
    labels = sorted({label for _, label in data})
    return DTModel(_grow(data, 0, config), config, labels)


def dt_classify(model: DTModel, features) -> str:
    feats = _feats(features)
    node = model.root
    while isinstance(node, Split):
        node = node.present if node.feature in feats else node.absent
    return node.label


# -- serialization ------------------------------------------------------------

def _fid_out(f):
    return f if isinstance(f, str) else list(f)


def _fid_in(f):
    return f if isinstance(f, str) else tuple(f)


def _node_out(node):
    if isinstance(node, Leaf):
        return {"label": node.label}
    return {"feature": _fid_out(node.feature),
            "present": _node_out(node.present), "absent": _node_out(node.absent)}


def _node_in(d):
    if "label" in d:
        return Leaf(d["label"])
    return Split(_fid_in(d["feature"]), _node_in(d["present"]), _node_in(d["absent"]))


def _check_schema(d: dict, kind: str) -> None:
    if d.get("schema_version") != SCHEMA_VERSION or d.get("type") != kind:
        raise ClassifierError(f"expected a {kind} model with schema version {SCHEMA_VERSION}")


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), ensure_ascii=False, indent=1) + "\n",
                          encoding="utf-8")


def load_model(path: str | Path):
    d = json.loads(Path(path).read_text(encoding="utf-8"))
    return NBModel.from_dict(d) if d.get("type") == "naive_bayes" else DTModel.from_dict(d)
