"""Stopword removal and presence-based unigram/bigram features."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .textnorm import fold_variants

UNIGRAM = "unigram"
BIGRAM = "bigram"
FEATURE_KINDS = (UNIGRAM, BIGRAM)


@dataclass(frozen=True)
class FeatureSet:
    kind: str
    features: frozenset

    def __contains__(self, f):
        return f in self.features

    def __iter__(self):
        return iter(self.features)

    def __len__(self):
        return len(self.features)


def remove_stopwords(tokens: Sequence[str], stoplist, fold: bool = False) -> list[str]:
    """Drop tokens found in `stoplist`, keeping the order of the rest.

    `stoplist` is a StopwordList or any collection of words. With ``fold=True``
    tokens and entries are compared after letter-variant folding.
    """
    if fold:
        folded = getattr(stoplist, "folded", None)
        if folded is None:
            folded = {fold_variants(w) for w in stoplist}
        return [t for t in tokens if fold_variants(t) not in folded]
    return [t for t in tokens if t not in stoplist]


def unigram_features(tokens: Sequence[str]) -> FeatureSet:
    return FeatureSet(UNIGRAM, frozenset(tokens))


def bigram_features(tokens: Sequence[str]) -> FeatureSet:
    """Distinct adjacent (left, right) pairs."""
    return FeatureSet(BIGRAM, frozenset(zip(tokens, tokens[1:])))


def extract_features(tokens: Sequence[str], kind: str) -> FeatureSet:
    if kind == UNIGRAM:
        return unigram_features(tokens)
    if kind == BIGRAM:
        return bigram_features(tokens)
    raise ValueError(f"unknown feature kind {kind!r}")


def feature_sort_key(f):
    return (f,) if isinstance(f, str) else tuple(f)


def dump_feature_sets(docs: Iterable[tuple[str, FeatureSet]], path: str | Path) -> None:
    """Debug dump: one JSON object per document with its sorted feature ids."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc_id, fs in docs:
            feats = sorted(fs.features, key=feature_sort_key)
            row = {"id": doc_id, "kind": fs.kind,
                   "features": [f if isinstance(f, str) else list(f) for f in feats]}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
