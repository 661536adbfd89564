import json

import pytest
from hypothesis import given, strategies as st

from edstop.corpus import (CorpusError, FilterReport, RawRecord, annotate_from_rating,
                           arabic_ratio, clean_corpus, drop_neutral, filter_media_only,
                           filter_mention_only, filter_non_arabic, filter_url_only, load_corpus,
                           run_cascade, save_corpus)


def rec(text, attachments=0, label=None, rating=None, id=None, source="facebook"):
    return RawRecord(id or text or "x", source, text, attachments, rating, label)


def write_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows),
                    encoding="utf-8")
    return path


# -- loading -----------------------------------------------------------------------

def test_load_empty_file(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("", encoding="utf-8")
    assert load_corpus(p, "facebook") == []


def test_load_preserves_order(tmp_path):
    p = write_jsonl(tmp_path / "c.jsonl", [
        {"id": "b", "source": "reviews", "text": "حلو", "rating": 7},
        {"id": "a", "source": "reviews", "text": "وحش", "attachments": 2, "label": "negative"},
    ])
    recs = load_corpus(p, "reviews")
    assert [r.id for r in recs] == ["b", "a"]
    assert recs[0].rating == 7 and recs[0].attachment_count == 0
    assert recs[1].label == "negative" and recs[1].attachment_count == 2


def test_load_missing_text_names_line(tmp_path):
    p = write_jsonl(tmp_path / "c.jsonl", [{"id": "a", "source": "facebook"}])
    with pytest.raises(CorpusError, match="line 1"):
        load_corpus(p, "facebook")


@pytest.mark.parametrize("bad_line, msg", [
    ('{"id": "a", "text": "x"', "malformed"),
    ('{"id": "a", "text": "x", "rating": 7}', "reviews"),
    ('{"id": "a", "text": "x", "label": "great"}', "label"),
    ('{"id": "a", "text": "x", "attachments": -1}', "attachments"),
    ('{"id": "a", "text": "x", "source": "twitter"}', "match"),
    ('["a", "x"]', "object"),
])
def test_load_rejects_malformed(tmp_path, bad_line, msg):
    p = tmp_path / "c.jsonl"
    p.write_text('{"id": "ok", "text": "حلو"}\n' + bad_line + "\n", encoding="utf-8")
    with pytest.raises(CorpusError, match=f"line 2.*{msg}|{msg}.*line 2|line 2"):
        load_corpus(p, "facebook")


def test_load_duplicate_id(tmp_path):
    p = write_jsonl(tmp_path / "c.jsonl", [{"id": "a", "text": "x"}, {"id": "a", "text": "y"}])
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(p, "facebook")


def test_load_rating_out_of_range(tmp_path):
    p = write_jsonl(tmp_path / "c.jsonl", [{"id": "a", "text": "x", "rating": 11}])
    with pytest.raises(CorpusError, match="1..10"):
        load_corpus(p, "reviews")


def test_save_load_round_trip(tmp_path):
    recs = [rec("فيلم حلو", label="positive", id="1"),
            RawRecord("2", "reviews", "ممل", 0, 3, None)]
    save_corpus(recs[:1], tmp_path / "a.jsonl")
    save_corpus(recs[1:], tmp_path / "b.jsonl")
    assert load_corpus(tmp_path / "a.jsonl") == recs[:1]
    assert load_corpus(tmp_path / "b.jsonl", "reviews") == recs[1:]


# -- filters -----------------------------------------------------------------------

def test_url_only():
    kept, stage = filter_url_only([rec("http://x.example"), rec("فيلم رائع http://x.example"),
                                   rec("https://a.b www.c.d"), rec("Watch https://x.y")])
    assert [r.text for r in kept] == ["فيلم رائع http://x.example"]
    assert (stage.before, stage.after) == (4, 1)


def test_url_only_ten_record_fixture():
    texts = ["http://a.b", "www.ads.eg", "https://t.co/x watch",
             "فيلم حلو", "ممل", "جميل http://x", "@ali", "", "great", "شوف www.x.eg"]
    kept, stage = filter_url_only([rec(t, id=str(i)) for i, t in enumerate(texts)])
    assert (stage.before, stage.after) == (10, 7)


def test_media_only():
    recs = [rec("", 1, id="a"), rec("جميل", 1, id="b"), rec("", 0, id="c"), rec("😍!!", 3, id="d")]
    kept, stage = filter_media_only(recs)
    assert [r.id for r in kept] == ["b", "c"]


def test_empty_text_without_attachment_dropped_by_non_arabic_stage():
    r = rec("", 0, id="e", label="positive")
    records, report = run_cascade([r])
    assert records == []
    assert [(s.name, s.after) for s in report.stages] == [
        ("url_only", 1), ("media_only", 1), ("mention_only", 1), ("non_arabic", 0)]


def test_mention_only():
    texts = ["@ahmed @sara", "@ahmed شوف الفيلم", "@mona", "حلو", ""]
    kept, stage = filter_mention_only([rec(t, id=str(i)) for i, t in enumerate(texts)])
    assert [r.text for r in kept] == ["@ahmed شوف الفيلم", "حلو", ""]
    assert (stage.before, stage.after) == (5, 3)


def test_non_arabic():
    kept, _ = filter_non_arabic([rec("great movie!!"), rec("فيلم جميل"), rec("فيلم nice"),
                                 rec("فيلم nicer"), rec("123")])
    assert [r.text for r in kept] == ["فيلم جميل", "فيلم nice"]


def test_non_arabic_threshold_configurable():
    kept, _ = filter_non_arabic([rec("فيلم nice")], threshold=0.6)
    assert kept == []


def test_non_arabic_ignores_urls_and_mentions():
    kept, _ = filter_non_arabic([rec("فيلم رائع http://example.com/watch"),
                                 rec("@somebody_long_name حلو")])
    assert len(kept) == 2


def test_arabic_ratio_blocks():
    assert arabic_ratio("فيلم nice") == 0.5
    assert arabic_ratio("ݐ") == 1.0  # Arabic Supplement block
    assert arabic_ratio("!!") is None


# -- annotation ---------------------------------------------------------------------

@pytest.mark.parametrize("rating, label", [
    (7, "positive"), (5, "neutral"), (1, "negative"), (6, "positive"), (4, "negative"), (10, "positive"),
])
def test_annotate_from_rating(rating, label):
    [out] = annotate_from_rating([rec("x", rating=rating, source="reviews")])
    assert out.label == label


def test_annotate_keeps_explicit_label():
    [out] = annotate_from_rating([rec("x", rating=9, label="negative", source="reviews")])
    assert out.label == "negative"


def test_annotate_missing_everything_lists_ids():
    with pytest.raises(CorpusError, match="r1.*r3"):
        annotate_from_rating([rec("x", id="r1"), rec("y", id="r2", label="positive"),
                              rec("z", id="r3")])


def test_drop_neutral():
    recs = [rec("a", label="positive"), rec("b", label="neutral"), rec("c", label="negative")]
    kept, stage = drop_neutral(recs)
    assert [r.label for r in kept] == ["positive", "negative"]
    assert stage.dropped == 1


def test_drop_neutral_all_neutral_warns():
    with pytest.warns(UserWarning, match="neutral"):
        kept, _ = drop_neutral([rec("a", label="neutral")])
    assert kept == []


def test_table_one_shaped_reviews():
    # 25 positive, 6 negative, 1 neutral
    ratings = [8] * 25 + [2] * 6 + [5]
    recs = [RawRecord(f"r{i}", "reviews", "فيلم", 0, r) for i, r in enumerate(ratings)]
    clean = clean_corpus(recs, "reviews")
    assert len(clean) == 31
    assert clean.filter_report.stages[-1].dropped == 1


# -- cascade properties -----------------------------------------------------------

record_text = st.lists(st.sampled_from(["فيلم", "حلو", "abc", "@x", "@علي", "http://u.v", "!", "😍", ""]),
                       max_size=6).map(" ".join)
records_st = st.lists(st.tuples(record_text, st.integers(0, 2)), max_size=20).map(
    lambda rows: [RawRecord(str(i), "twitter", t, a, None, "positive") for i, (t, a) in enumerate(rows)])


@given(records_st)
def test_cascade_idempotent_and_chained(records):
    once, report = run_cascade(records)
    twice, report2 = run_cascade(once)
    assert twice == once
    for a, b in zip(report.stages, report.stages[1:]):
        assert a.after == b.before
    assert all(s.after <= s.before for s in report.stages)
    assert sum(s.dropped for s in report.stages) == len(records) - len(once)
    # survivors are untouched originals, in input order
    ids = [r.id for r in records]
    assert [ids.index(r.id) for r in once] == sorted(ids.index(r.id) for r in once)
    assert all(r in records for r in once)


def test_filter_report_csv_round_trip(tmp_path):
    _, report = run_cascade([rec("حلو", id="1"), rec("http://x", id="2")])
    report.to_csv(tmp_path / "r.csv")
    text = (tmp_path / "r.csv").read_text(encoding="utf-8")
    assert text.splitlines()[:2] == ["stage,before,after", "url_only,2,1"]
    assert FilterReport.from_csv(tmp_path / "r.csv") == report
