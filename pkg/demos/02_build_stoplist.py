"""Build a dialect stopword list from the synthetic corpus.

Frequent words become candidates. The reference lists and lexicon settle
most of them; a decision log settles the rest. Accepted words are then
expanded with affixes and spelling variants.
"""
import tempfile
import warnings
from pathlib import Path

from edstop import stoplist as sl
from edstop.corpus import load_corpus
from edstop.datasets import data_path
from edstop.textnorm import build_frequency_table

corpus = load_corpus(data_path("synthetic"))
table = build_frequency_table([corpus])
print(f"{table.total_tokens} tokens, {table.unique_words} distinct words")

msa = sl.load_list(data_path("msa"))
english = sl.load_wordset(data_path("english"))
lexicon = sl.load_lexicon(data_path("lexicon"))

candidates = [sl.auto_validate(c, msa, english, lexicon)
              for c in sl.extract_candidates(table, k=25)]
print("\ntop candidates after automatic checks:")
for c in candidates[:12]:
    print(f"  {c.surface:<10}{c.frequency:>5}  {c.reason.value}")

# the decision log answers some pending words; anything left is rejected
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    resolved = sl.resolve_candidates(candidates, data_path("decisions"))
for w in caught:
    print(f"note: {w.message}")

base = sorted(c.surface for c in resolved if c.status is sl.Status.ACCEPTED)
print(f"\nbase list ({len(base)} words): {' '.join(base)}")

print(f"\nexpand_word('بس') gives {len(sl.expand_word('بس'))} forms")
print(f"expand_word('بتاع') gives {len(sl.expand_word('بتاع'))} forms "
      "(possession markers take pronoun suffixes)")
print(f"spelling variants of 'على': {sorted(sl.generate_variants('على'))}")

ed = sl.expand_list(base)
out = Path(tempfile.mkdtemp()) / "ed.txt"
sl.save_list(ed, out)
print(f"\nexpanded list: {len(ed)} entries written to {out}")
