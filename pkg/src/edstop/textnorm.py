"""Arabic tokenization and normalization, with word-frequency tables."""
from __future__ import annotations

import csv
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

TATWEEL = "ـ"
# harakat U+064B..U+0652 plus the superscript alef U+0670
DIACRITICS = frozenset([chr(c) for c in range(0x064B, 0x0653)] + ["ٰ"])

_VARIANT_FOLD = str.maketrans({
    "ى": "ي",  # alef maksura -> yeh
    "ة": "ه",  # teh marbuta -> heh
    "أ": "ا",  # alef with hamza above
    "إ": "ا",  # alef with hamza below
    "آ": "ا",  # alef with madda
})

_WS = re.compile(r"\s+")


def strip_diacritics(word: str) -> str:
    """Remove Arabic short-vowel marks (and superscript alef) from `word`."""
    return "".join(ch for ch in word if ch not in DIACRITICS)


def fold_variants(word: str) -> str:
    """Map letter-form variants onto one canonical letter.

    >>> fold_variants("أنا")
    'انا'
    """
    return word.translate(_VARIANT_FOLD)


def _is_edge_junk(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat[0] in "PS"


def _clean_token(raw: str) -> str:
    tok = strip_diacritics(raw).replace(TATWEEL, "")
    start, end = 0, len(tok)
    while start < end and _is_edge_junk(tok[start]):
        start += 1
    while end > start and _is_edge_junk(tok[end - 1]):
        end -= 1
    return tok[start:end]


def apply_mapping(text: str, mapping: Mapping[str, str]) -> str:
    """Replace whitespace-delimited tokens that exactly match a mapping key."""
    if not mapping:
        return text
    return " ".join(mapping.get(tok, tok) for tok in _WS.split(text) if tok)


def tokenize(text: str, mapping: Mapping[str, str] | None = None) -> list[str]:
    """Split `text` into normalized word tokens.

    Tokens are whitespace-delimited with punctuation and symbols trimmed from
    both ends. Diacritics and tatweel are then removed; empty tokens are dropped.
    Letter-form variants are left alone. If `mapping` is given (abbreviation /
    emoticon glosses), it is applied to the raw whitespace tokens first.
    """
    if mapping:
        text = apply_mapping(text, mapping)
    tokens = []
    for raw in _WS.split(text):
        tok = _clean_token(raw)
        if tok:
            tokens.append(tok)
    return tokens


def load_mapping(path: str | Path) -> dict[str, str]:
    """Read a `surface<TAB>replacement` mapping file; `#` lines are comments."""
    mapping = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                raise ValueError(f"{path}:{lineno}: expected 'surface<TAB>replacement'")
            mapping[parts[0]] = parts[1]
    return mapping


@dataclass
class FrequencyTable:
    """Token counts over one or more corpora."""

    counts: Counter = field(default_factory=Counter)

    @property
    def total_tokens(self) -> int:
        return sum(self.counts.values())

    @property
    def unique_words(self) -> int:
        return len(self.counts)

    def __len__(self):
        return len(self.counts)

    def merge(self, other: "FrequencyTable") -> "FrequencyTable":
        return FrequencyTable(self.counts + other.counts)

    __add__ = merge

    def ranked(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["word", "count"])
            writer.writerows(self.ranked())

    @classmethod
    def from_csv(cls, path: str | Path) -> "FrequencyTable":
        counts = Counter()
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                counts[row["word"]] += int(row["count"])
        return cls(counts)


def _texts(corpus) -> Iterable[str]:
    records = getattr(corpus, "records", corpus)
    for rec in records:
        yield rec if isinstance(rec, str) else rec.text


def build_frequency_table(corpora, mapping: Mapping[str, str] | None = None) -> FrequencyTable:
    """Count every token occurrence across all `corpora` combined.

    Each corpus may be a `CleanCorpus`, a sequence of records, or a sequence
    of plain strings.
    """
    counts = Counter()
    for corpus in corpora:
        for text in _texts(corpus):
            counts.update(tokenize(text, mapping))
    return FrequencyTable(counts)


def top_k(table: FrequencyTable, k: int) -> list[str]:
    """The `k` most frequent words; ties go to the lower codepoint string."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return [w for w, _ in table.ranked()[:k]]
