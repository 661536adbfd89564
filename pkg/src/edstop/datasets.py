"""Bundled fixture files and a synthetic labeled corpus generator.

The reference lists shipped here are small stand-ins, not the published
MSA/English stopword lists; point the tools at the real files for real work.
"""
from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from .corpus import RawRecord, save_corpus

_FILES = {
    "msa": "msa_stopwords.txt",
    "english": "english_stopwords.txt",
    "lexicon": "lexicon.tsv",
    "decisions": "decisions.tsv",
    "cleaning": "cleaning_fixture.jsonl",
    "synthetic": "synthetic_corpus.jsonl",
}


def data_path(name: str) -> Path:
    """Path of a bundled data file, by short name (see ``_FILES``) or file name."""
    fname = _FILES.get(name, name)
    return Path(str(resources.files("edstop") / "data" / fname))


POSITIVE_WORDS = ("رائع", "جميل", "حلو", "ممتاز", "تحفة", "عظيم", "روعة", "هايل", "ممتع", "يجنن")
NEGATIVE_WORDS = ("وحش", "سيء", "ممل", "فاشل", "زفت", "بايخ", "ضعيف", "تافه", "مقرف", "خسارة")
TOPIC_WORDS = ("الفيلم", "المشاهد", "الممثل", "القصة", "الاخراج", "السينما", "النهاية",
               "البطل", "التذكرة", "الموسيقى", "الحوار", "الجمهور")
# frequent function words; prefixed forms exercise list expansion
STOPWORDS = ("بس", "لازم", "ده", "دي", "اللي", "عشان", "يعني", "كده", "اوي", "جدا",
             "من", "في", "على", "مع", "وده", "وبس", "فده", "بتاعه", "بتاعهم")


def synthetic_records(n: int = 200, positive_share: float = 0.6, seed: int = 2014,
                      noise: float = 0.2) -> list[RawRecord]:
    """Labeled facebook-style posts with planted sentiment words and stopwords.

    Every post gets two sentiment words of its own class (and, with
    probability `noise`, one of the other class), one to three topic words,
    and four to eight stopwords drawn independently of the label.
    """
    rng = random.Random(seed)
    n_pos = round(n * positive_share)
    labels = ["positive"] * n_pos + ["negative"] * (n - n_pos)
    rng.shuffle(labels)
    records = []
    for i, label in enumerate(labels):
        own, other = ((POSITIVE_WORDS, NEGATIVE_WORDS) if label == "positive"
                      else (NEGATIVE_WORDS, POSITIVE_WORDS))
        words = rng.sample(own, 2)
        if rng.random() < noise:
            words.append(rng.choice(other))
        words += rng.sample(TOPIC_WORDS, rng.randint(1, 3))
        words += rng.choices(STOPWORDS, k=rng.randint(4, 8))
        rng.shuffle(words)
        records.append(RawRecord(f"s{i:03d}", "facebook", " ".join(words), label=label))
    return records


def write_synthetic_corpus(path: str | Path, **kwargs) -> None:
    save_corpus(synthetic_records(**kwargs), path)
