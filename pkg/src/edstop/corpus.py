"""Loading labeled social-network records and the cleaning cascade.

The cascade runs four filters in a fixed order (URL-only, media-only,
mention-only, non-Arabic), then rating-based annotation and neutral removal.
Filters only ever drop records; text is never modified.
"""
from __future__ import annotations

import csv
import json
import unicodedata
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

SOURCES = ("reviews", "facebook", "twitter")
LABELS = ("positive", "negative", "neutral")
URL_PREFIXES = ("http://", "https://", "www.")
ARABIC_RANGES = ((0x0600, 0x06FF), (0x0750, 0x077F))


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class RawRecord:
    id: str
    source: str
    text: str
    attachment_count: int = 0
    rating: int | None = None
    label: str | None = None

    def to_json(self) -> dict:
        out = {"id": self.id, "source": self.source, "text": self.text,
               "attachments": self.attachment_count}
        if self.rating is not None:
            out["rating"] = self.rating
        if self.label is not None:
            out["label"] = self.label
        return out


@dataclass(frozen=True)
class FilterStage:
    name: str
    before: int
    after: int

    @property
    def dropped(self) -> int:
        return self.before - self.after


@dataclass
class FilterReport:
    stages: list[FilterStage] = field(default_factory=list)

    def add(self, stage: FilterStage) -> None:
        if self.stages and self.stages[-1].after != stage.before:
            raise ValueError(f"stage {stage.name!r} does not chain onto {self.stages[-1].name!r}")
        self.stages.append(stage)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["stage", "before", "after"])
            for s in self.stages:
                writer.writerow([s.name, s.before, s.after])

    @classmethod
    def from_csv(cls, path: str | Path) -> "FilterReport":
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        report = cls()
        for row in rows:
            report.add(FilterStage(row["stage"], int(row["before"]), int(row["after"])))
        return report


@dataclass
class CleanCorpus:
    records: list[RawRecord]
    source_tag: str
    filter_report: FilterReport

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


# -- I/O ---------------------------------------------------------------------

def _parse_record(obj, source: str | None, lineno: int) -> RawRecord:
    if not isinstance(obj, dict):
        raise CorpusError(f"line {lineno}: expected a JSON object")
    for key in ("id", "text"):
        if key not in obj:
            raise CorpusError(f"line {lineno}: missing field {key!r}")
    if not isinstance(obj["id"], str) or not isinstance(obj["text"], str):
        raise CorpusError(f"line {lineno}: 'id' and 'text' must be strings")
    rec_source = obj.get("source", source)
    if rec_source not in SOURCES:
        raise CorpusError(f"line {lineno}: unknown or missing source {rec_source!r}")
    if source is not None and rec_source != source:
        raise CorpusError(f"line {lineno}: source {rec_source!r} does not match {source!r}")
    source = rec_source
    attachments = obj.get("attachments", 0)
    if not isinstance(attachments, int) or isinstance(attachments, bool) or attachments < 0:
        raise CorpusError(f"line {lineno}: 'attachments' must be a non-negative integer")
    rating = obj.get("rating")
    if rating is not None:
        if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 10:
            raise CorpusError(f"line {lineno}: 'rating' must be an integer in 1..10")
        if source != "reviews":
            raise CorpusError(f"line {lineno}: 'rating' is only allowed for reviews")
    label = obj.get("label")
    if label is not None and label not in LABELS:
        raise CorpusError(f"line {lineno}: unknown label {label!r}")
    return RawRecord(obj["id"], source, obj["text"], attachments, rating, label)


def load_corpus(path: str | Path, source: str | None = None) -> list[RawRecord]:
    """Read a JSON Lines corpus file; blank lines are skipped.

    With `source` given, every record must belong to it (records may omit the
    field); otherwise each record's own `source` field is used.
    """
    if source is not None and source not in SOURCES:
        raise CorpusError(f"unknown source {source!r}; expected one of {SOURCES}")
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            rec = _parse_record(obj, source, lineno)
            if rec.id in seen:
                raise CorpusError(f"line {lineno}: duplicate id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records


def save_corpus(records: Sequence[RawRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")


# -- predicates ---------------------------------------------------------------

def is_arabic_char(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in ARABIC_RANGES)


def _letters(text: str) -> list[str]:
    return [ch for ch in text if unicodedata.category(ch).startswith("L")]


def arabic_ratio(text: str) -> float | None:
    """Fraction of letters that are Arabic-script; None if there are no letters."""
    letters = _letters(text)
    if not letters:
        return None
    return sum(map(is_arabic_char, letters)) / len(letters)


def is_url_only(text: str) -> bool:
    """True if `text` has a URL token and no Arabic letter outside URL tokens."""
    tokens = text.split()
    is_url = [t.lower().startswith(URL_PREFIXES) for t in tokens]
    if not any(is_url):
        return False
    rest = "".join(t for t, u in zip(tokens, is_url) if not u)
    return not any(is_arabic_char(ch) for ch in _letters(rest))


def is_media_only(rec: RawRecord) -> bool:
    return rec.attachment_count > 0 and not _letters(rec.text)


def is_mention_only(text: str) -> bool:
    tokens = text.split()
    return bool(tokens) and all(t.startswith("@") for t in tokens)


def _language_text(text: str) -> str:
    # URLs and @handles say nothing about the language of the post
    return " ".join(t for t in text.split()
                    if not t.startswith("@") and not t.lower().startswith(URL_PREFIXES))


def is_non_arabic(text: str, threshold: float = 0.5) -> bool:
    """True if the Arabic share of letters is below `threshold`, or there are no letters.

    URL and @mention tokens are left out of the count.
    """
    ratio = arabic_ratio(_language_text(text))
    return ratio is None or ratio < threshold


# -- filters --------------------------------------------------------------------

def _apply(name, records, drop):
    kept = [r for r in records if not drop(r)]
    return kept, FilterStage(name, len(records), len(kept))


def filter_url_only(records):
    return _apply("url_only", records, lambda r: is_url_only(r.text))


def filter_media_only(records):
    return _apply("media_only", records, is_media_only)


def filter_mention_only(records):
    return _apply("mention_only", records, lambda r: is_mention_only(r.text))


def filter_non_arabic(records, threshold: float = 0.5):
    return _apply("non_arabic", records, lambda r: is_non_arabic(r.text, threshold))


def run_cascade(records, threshold: float = 0.5, report: FilterReport | None = None):
    """Apply the four cleaning filters in order, recording each stage."""
    report = FilterReport() if report is None else report
    records = list(records)
    for step in (filter_url_only, filter_media_only, filter_mention_only):
        records, stage = step(records)
        report.add(stage)
    records, stage = filter_non_arabic(records, threshold)
    report.add(stage)
    return records, report


def label_for_rating(rating: int) -> str:
    if rating > 5:
        return "positive"
    if rating < 5:
        return "negative"
    return "neutral"


def annotate_from_rating(records):
    """Label unlabeled records from their 1-10 rating.

    Records that already carry a label are left alone. Raises CorpusError
    listing the ids of records with neither rating nor label.
    """
    missing = [r.id for r in records if r.label is None and r.rating is None]
    if missing:
        raise CorpusError(f"records with neither rating nor label: {', '.join(missing)}")
    return [r if r.label is not None else replace(r, label=label_for_rating(r.rating))
            for r in records]


def drop_neutral(records):
    unlabeled = [r.id for r in records if r.label is None]
    if unlabeled:
        raise CorpusError(f"unlabeled records: {', '.join(unlabeled)}")
    kept, stage = _apply("neutral", records, lambda r: r.label == "neutral")
    if records and not kept:
        warnings.warn("every record was neutral; corpus is empty", stacklevel=2)
    return kept, stage


def clean_corpus(records, source: str, threshold: float = 0.5) -> CleanCorpus:
    """Full preparation: cleaning cascade, rating annotation, neutral removal."""
    records, report = run_cascade(records, threshold)
    records = annotate_from_rating(records)
    records, stage = drop_neutral(records)
    report.add(stage)
    return CleanCorpus(records, source, report)
