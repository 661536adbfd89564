"""Walk the bundled 30-post fixture through the cleaning cascade.

Each stage only drops records, so the report reads as a funnel. Run with
``python demos/01_clean_corpus.py``.
"""
from edstop import corpus as cp
from edstop.datasets import data_path

records = cp.load_corpus(data_path("cleaning"), "facebook")
print(f"loaded {len(records)} raw posts\n")

# look at a few posts from each stage before running anything
for rid in ("f01", "f05", "f08", "f11", "f16"):
    rec = next(r for r in records if r.id == rid)
    flags = {
        "url_only": cp.is_url_only(rec.text),
        "media_only": cp.is_media_only(rec),
        "mention_only": cp.is_mention_only(rec.text),
        "non_arabic": cp.is_non_arabic(rec.text),
    }
    hit = [k for k, v in flags.items() if v] or ["kept"]
    print(f"{rid}: {rec.text[:40]!r:<45} -> {hit[0]}")

clean = cp.clean_corpus(records, "facebook")
print("\nstage          before  after")
for s in clean.filter_report.stages:
    print(f"{s.name:<14}{s.before:>6}{s.after:>7}")

labels = sorted(r.label for r in clean.records)
print(f"\n{len(clean)} labeled posts survive: "
      f"{labels.count('positive')} positive, {labels.count('negative')} negative")
