"""Building Egyptian dialect (ED) stopword lists, plus list file handling.

Generation has three phases:

1. rank the combined corpus vocabulary by frequency and keep the top K words
   as candidates (:func:`extract_candidates`);
2. decide which candidates are stopwords, first automatically against MSA and
   English reference lists through an ED->MSA/English lexicon
   (:func:`auto_validate`), then from a manual decision log
   (:func:`review_candidates`);
3. grow the accepted base list with affixed forms and letter-form variants
   (:func:`expand_list`).
"""
from __future__ import annotations

import enum
import itertools
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .textnorm import (FrequencyTable, build_frequency_table, fold_variants, strip_diacritics,
                       top_k)


class StoplistError(ValueError):
    pass


class ListTag(str, enum.Enum):
    MSA = "MSA"
    ED = "ED"
    MERGED = "MERGED"


class Status(str, enum.Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


class Reason(str, enum.Enum):
    IN_MSA_LIST = "in_msa_list"
    MSA_VIA_LEXICON = "msa_via_lexicon"
    ENGLISH_VIA_LEXICON = "english_via_lexicon"
    MANUAL_ACCEPT = "manual_accept"
    MANUAL_REJECT = "manual_reject"
    CONTENT_WORD = "content_word"
    PENDING = "pending"


@dataclass(frozen=True)
class StopwordList:
    name: str
    tag: ListTag
    entries: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "tag", ListTag(self.tag))
        object.__setattr__(self, "entries", frozenset(self.entries))

    def __contains__(self, word):
        return word in self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(sorted(self.entries))

    @cached_property
    def folded(self) -> frozenset:
        return frozenset(fold_variants(w) for w in self.entries)


@dataclass(frozen=True)
class CandidateWord:
    surface: str
    frequency: int
    status: Status = Status.PENDING
    reason: Reason = Reason.PENDING

    def __post_init__(self):
        object.__setattr__(self, "status", Status(self.status))
        object.__setattr__(self, "reason", Reason(self.reason))
        if (self.status is Status.PENDING) != (self.reason is Reason.PENDING):
            raise StoplistError(f"{self.surface}: status {self.status.value} "
                                f"inconsistent with reason {self.reason.value}")


@dataclass(frozen=True)
class LexiconEntry:
    ed_word: str
    msa_equivalents: tuple = ()
    english_glosses: tuple = ()

    def __post_init__(self):
        if not self.ed_word:
            raise StoplistError("lexicon entry with empty word")
        if not self.msa_equivalents and not self.english_glosses:
            raise StoplistError(f"lexicon entry {self.ed_word!r} has no equivalent or gloss")


DEFAULT_PREFIXES = ("و", "ف", "ب", "ك", "ل", "ال")
DEFAULT_COMPOUND_PREFIXES = ("وال", "فال", "بال", "كال", "لل")
DEFAULT_PRONOUN_SUFFIXES = ("ي", "ك", "ه", "ها", "نا", "كم", "هم")
# gender and number forms of the ED possessive particle
DEFAULT_POSSESSION_MARKERS = frozenset({"بتاع", "بتاعة", "بتوع"})
DEFAULT_VARIANT_GROUPS = (("ي", "ى"), ("ة", "ه"), ("أ", "إ", "آ", "ا"))


@dataclass(frozen=True)
class ExpansionRules:
    prefixes: tuple = DEFAULT_PREFIXES
    compound_prefixes: tuple = DEFAULT_COMPOUND_PREFIXES
    pronoun_suffixes: tuple = DEFAULT_PRONOUN_SUFFIXES
    possession_markers: frozenset = DEFAULT_POSSESSION_MARKERS
    variant_groups: tuple = DEFAULT_VARIANT_GROUPS

    def __post_init__(self):
        object.__setattr__(self, "possession_markers", frozenset(self.possession_markers))
        strings = [*self.prefixes, *self.compound_prefixes, *self.pronoun_suffixes,
                   *itertools.chain.from_iterable(self.variant_groups)]
        if not all(strings):
            raise StoplistError("expansion rule strings must be non-empty")
        all_prefixes = [*self.prefixes, *self.compound_prefixes]
        if len(set(all_prefixes)) != len(all_prefixes):
            raise StoplistError("duplicate prefix in expansion rules")
        letters = list(itertools.chain.from_iterable(self.variant_groups))
        if len(set(letters)) != len(letters):
            raise StoplistError("a letter appears in more than one variant group")

    @cached_property
    def _group_of(self) -> dict:
        return {ch: g for g in self.variant_groups for ch in g}


# -- phase 1 -----------------------------------------------------------------

def extract_candidates(table: FrequencyTable, k: int = 200) -> list[CandidateWord]:
    """Wrap the `k` most frequent words as pending candidates."""
    if not table.counts:
        raise StoplistError("frequency table is empty")
    return [CandidateWord(w, table.counts[w]) for w in top_k(table, k)]


# -- phase 2 -----------------------------------------------------------------

def auto_validate(candidate: CandidateWord, msa_list, english_list,
                  lexicon: Mapping[str, LexiconEntry]) -> CandidateWord:
    """Try to decide a candidate from the reference assets alone.

    The checks run in a fixed order and the first hit wins: the word itself is
    an MSA stopword; its lexicon MSA equivalent is; its lexicon English gloss
    is an English stopword. Otherwise the candidate stays pending.
    """
    word = candidate.surface
    if word in msa_list:
        return replace(candidate, status=Status.ACCEPTED, reason=Reason.IN_MSA_LIST)
    entry = lexicon.get(word)
    if entry is not None:
        if any(m in msa_list for m in entry.msa_equivalents):
            return replace(candidate, status=Status.ACCEPTED, reason=Reason.MSA_VIA_LEXICON)
        if any(g in english_list for g in entry.english_glosses):
            return replace(candidate, status=Status.ACCEPTED, reason=Reason.ENGLISH_VIA_LEXICON)
    return replace(candidate, status=Status.PENDING, reason=Reason.PENDING)


def read_decision_log(path: str | Path) -> list[tuple[str, str, str]]:
    """Parse `word<TAB>accept|reject<TAB>note` lines, in file order."""
    entries = []
    p = Path(path)
    if not p.exists():
        return entries
    with open(p, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2 or parts[1] not in ("accept", "reject"):
                raise StoplistError(f"{path}:{lineno}: expected 'word<TAB>accept|reject<TAB>note'")
            note = parts[2] if len(parts) > 2 else ""
            entries.append((strip_diacritics(parts[0]), parts[1], note))
    return entries


def append_decision(path: str | Path, word: str, decision: str, note: str = "") -> None:
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{word}\t{decision}\t{note}\n")


def _ask(word: str, frequency: int, prompt: Callable[[str], str]) -> str:
    while True:
        answer = prompt(f"{word} ({frequency}) stopword? [y/n] ").strip().lower()
        if answer in ("y", "yes", "a", "accept"):
            return "accept"
        if answer in ("n", "no", "r", "reject"):
            return "reject"


def resolve_candidates(candidates: Sequence[CandidateWord], decisions=(),
                       interactive: bool = False, log_path: str | Path | None = None,
                       prompt: Callable[[str], str] | None = None) -> list[CandidateWord]:
    """Settle every pending candidate; returns candidates in input order.

    `decisions` is an iterable of (word, "accept"|"reject", note) tuples, or a
    path to a decision log. Later log entries for a word override earlier
    ones. Log entries only settle pending candidates. In interactive mode the
    remaining pending words are asked about through `prompt`, and answers are
    appended to `log_path`. Whatever is still pending is rejected as a
    content word.
    """
    if isinstance(decisions, (str, Path)):
        log_path = log_path or decisions
        decisions = read_decision_log(decisions)
    known = {c.surface for c in candidates}
    verdicts = {}
    for word, decision, _note in decisions:
        if word not in known:
            warnings.warn(f"decision log entry for unknown word {word!r} ignored", stacklevel=2)
            continue
        verdicts[word] = decision

    out = []
    leftover = []
    for cand in candidates:
        if cand.status is Status.PENDING and cand.surface in verdicts:
            cand = _manual(cand, verdicts[cand.surface])
        elif cand.status is Status.PENDING and interactive:
            decision = _ask(cand.surface, cand.frequency, prompt or input)
            if log_path is not None:
                append_decision(log_path, cand.surface, decision, "interactive")
            cand = _manual(cand, decision)
        if cand.status is Status.PENDING:
            leftover.append(cand.surface)
            cand = replace(cand, status=Status.REJECTED, reason=Reason.CONTENT_WORD)
        out.append(cand)
    if leftover:
        warnings.warn(f"{len(leftover)} unreviewed candidates rejected as content words",
                      stacklevel=2)
    return out


def _manual(cand: CandidateWord, decision: str) -> CandidateWord:
    if decision == "accept":
        return replace(cand, status=Status.ACCEPTED, reason=Reason.MANUAL_ACCEPT)
    return replace(cand, status=Status.REJECTED, reason=Reason.MANUAL_REJECT)


def review_candidates(candidates, decisions=(), interactive: bool = False,
                      log_path=None, prompt=None) -> frozenset:
    """Resolve candidates (see :func:`resolve_candidates`) and return the base list."""
    resolved = resolve_candidates(candidates, decisions, interactive, log_path, prompt)
    return frozenset(c.surface for c in resolved if c.status is Status.ACCEPTED)


def save_candidates(candidates: Iterable[CandidateWord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# word\tfrequency\tstatus\treason\n")
        for c in candidates:
            fh.write(f"{c.surface}\t{c.frequency}\t{c.status.value}\t{c.reason.value}\n")


def load_candidates(path: str | Path) -> list[CandidateWord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise StoplistError(f"{path}:{lineno}: expected 4 tab-separated fields")
            out.append(CandidateWord(parts[0], int(parts[1]), parts[2], parts[3]))
    return out


# -- phase 3 -----------------------------------------------------------------

def _suffix_stem(word: str) -> str:
    # teh marbuta is written as teh before a pronoun suffix (بتاعة -> بتاعتي)
    return word[:-1] + "ت" if word.endswith("ة") else word


def _affix(word: str, rules: ExpansionRules, possessive: bool) -> set:
    forms = {word}
    forms.update(p + word for p in rules.prefixes)
    forms.update(p + word for p in rules.compound_prefixes)
    if possessive:
        stem = _suffix_stem(word)
        forms.update(stem + s for s in rules.pronoun_suffixes)
    return forms


def expand_word(word: str, rules: ExpansionRules = ExpansionRules()) -> set:
    """The bare word plus its prefixed forms; possessives also get suffixed forms.

    Suffixes attach to the bare word only; prefix+suffix combinations are not
    generated.
    """
    if not word:
        raise StoplistError("cannot expand an empty word")
    return _affix(word, rules, word in rules.possession_markers)


def generate_variants(word: str, rules: ExpansionRules = ExpansionRules()) -> set:
    """Every spelling obtained by swapping letters within their variant group."""
    groups = rules._group_of
    choices = [groups.get(ch, (ch,)) for ch in word]
    return {"".join(p) for p in itertools.product(*choices)}


def expand_list(base: Iterable[str], rules: ExpansionRules = ExpansionRules(),
                name: str = "ED") -> StopwordList:
    """Grow a base list with variants and affixes.

    Letter variants are generated on the base word, and each variant is then
    affixed; the affixes themselves are not respelled. A variant of a
    possession marker keeps its possessive status.
    """
    base = list(base)
    if not base:
        raise StoplistError("base list is empty")
    entries = set()
    for word in base:
        possessive = word in rules.possession_markers
        for variant in generate_variants(word, rules):
            entries |= _affix(variant, rules, possessive)
    return StopwordList(name, ListTag.ED, frozenset(entries))


def generate_ed_list(corpora, msa_list, english_list, lexicon, decisions=(), k: int = 200,
                     rules: ExpansionRules = ExpansionRules(), interactive: bool = False,
                     log_path=None, name: str = "ED"):
    """Run all three phases; returns ``(expanded list, resolved candidates)``."""
    table = build_frequency_table(corpora)
    candidates = [auto_validate(c, msa_list, english_list, lexicon)
                  for c in extract_candidates(table, k)]
    resolved = resolve_candidates(candidates, decisions, interactive, log_path)
    base = [c.surface for c in resolved if c.status is Status.ACCEPTED]
    return expand_list(base, rules, name), resolved


def merge_lists(a: StopwordList, b: StopwordList, name: str | None = None) -> StopwordList:
    return StopwordList(name or f"{a.name}+{b.name}", ListTag.MERGED, a.entries | b.entries)


# -- list and lexicon files ---------------------------------------------------

def save_list(stoplist: StopwordList, path: str | Path) -> None:
    """Write entries one per line in codepoint order, with name/tag header comments."""
    lines = [f"# name: {stoplist.name}", f"# tag: {stoplist.tag.value}", *sorted(stoplist.entries)]
    Path(path).write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def load_list(path: str | Path, name: str | None = None,
              tag: ListTag | str | None = None) -> StopwordList:
    """Read a one-word-per-line list file.

    Entries are diacritic-stripped (with a warning when that changes anything)
    and deduplicated (with a warning). `name` / `tag` default to the header
    comments written by :func:`save_list`, then to the file stem and MSA.
    """
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise StoplistError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    if text.startswith("﻿"):
        text = text[1:]
    header = {}
    entries = []
    changed = 0
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep and key.strip() in ("name", "tag"):
                header[key.strip()] = value.strip()
            continue
        word = strip_diacritics(line)
        if word != line:
            changed += 1
        if word:
            entries.append(word)
    if changed:
        warnings.warn(f"{path}: stripped diacritics from {changed} entries", stacklevel=2)
    if len(set(entries)) != len(entries):
        warnings.warn(f"{path}: {len(entries) - len(set(entries))} duplicate entries dropped",
                      stacklevel=2)
    name = name or header.get("name") or Path(path).stem
    tag = tag or header.get("tag") or ListTag.MSA
    return StopwordList(name, ListTag(tag), frozenset(entries))


def load_wordset(path: str | Path) -> frozenset:
    """A plain word set (e.g. the English stopword list), lower-cased."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().lower() for line in fh
                         if line.strip() and not line.startswith("#"))


def load_lexicon(path: str | Path) -> dict[str, LexiconEntry]:
    """Read `ed_word<TAB>msa1;msa2<TAB>gloss1;gloss2` lines."""
    lexicon = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise StoplistError(f"{path}:{lineno}: expected 3 tab-separated fields")
            word = strip_diacritics(parts[0].strip())
            msa = tuple(strip_diacritics(m.strip()) for m in parts[1].split(";") if m.strip())
            glosses = tuple(g.strip().lower() for g in parts[2].split(";") if g.strip())
            try:
                lexicon[word] = LexiconEntry(word, msa, glosses)
            except StoplistError as exc:
                raise StoplistError(f"{path}:{lineno}: {exc}") from None
    return lexicon
