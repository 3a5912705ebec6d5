import json

import pytest
from hypothesis import given, strategies as st

from intentminer.corpus import (
    DEFAULT_SEEDS, NO, YES, Corpus, Document, PreprocessConfig, SeedVector, contains_phrase,
    filter_language, has_intention, ingest, ingest_csv, ingest_jsonl, label_by_seeds,
    match_tokens, preprocess, preprocess_text, strip_punct, tokenize, write_jsonl,
)
from intentminer.errors import CorpusError
from intentminer.stopwords import STOPWORD_LISTS, get_stopwords
from intentminer.tagger import CONTENT_TAGS, HeuristicTagger

from conftest import write_jsonl as dump


def corpus_of(*texts, langs=None):
    langs = langs or ["en"] * len(texts)
    return Corpus(tuple(Document(str(i), t, l) for i, (t, l) in enumerate(zip(texts, langs))))


class TestIngest:
    def test_minimal_record_is_unlabeled(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id":"1","text":"I want tea","lang":"en"}\n')
        c = ingest_jsonl(p)
        assert c.n == 1
        assert c.docs[0] == Document("1", "I want tea", "en", (), None)
        assert not c.is_labeled

    def test_duplicate_id_names_the_id(self, tmp_path):
        p = dump(tmp_path / "c.jsonl", [{"id": "1", "text": "a"}, {"id": "1", "text": "b"}])
        with pytest.raises(CorpusError, match="duplicate id '1'"):
            ingest_jsonl(p)

    def test_malformed_line_names_line_number(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id":"1","text":"a"}\n{"id": 2,\n')
        with pytest.raises(CorpusError, match="c.jsonl:2"):
            ingest_jsonl(p)

    def test_missing_text(self, tmp_path):
        p = dump(tmp_path / "c.jsonl", [{"id": "1"}])
        with pytest.raises(CorpusError, match="missing 'text'"):
            ingest_jsonl(p)

    def test_bad_label(self, tmp_path):
        p = dump(tmp_path / "c.jsonl", [{"id": "1", "text": "a", "label": "maybe"}])
        with pytest.raises(CorpusError, match="label must be Yes or No"):
            ingest_jsonl(p)

    def test_optional_fields(self, tmp_path):
        p = dump(tmp_path / "c.jsonl", [
            {"id": "a", "text": "x", "label": "Yes", "created_at": "2020-01-01"},
            {"id": "b", "text": "y", "label": ""},
            {"id": "c", "text": "z", "label": None, "lang": "fr"},
        ])
        c = ingest_jsonl(p)
        assert c.labels == [YES, None, None]
        assert [d.lang for d in c] == ["unknown", "unknown", "fr"]

    def test_blank_lines_skipped_and_order_kept(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id":"b","text":"1"}\n\n{"id":"a","text":"2"}\n')
        assert [d.id for d in ingest_jsonl(p)] == ["b", "a"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorpusError, match="not found"):
            ingest(tmp_path / "nope.jsonl")

    def test_csv_matches_jsonl(self, tmp_path):
        recs = [{"id": "1", "text": 'I "want", tea', "lang": "en", "label": "Yes"},
                {"id": "2", "text": "line\nbreak", "lang": "en", "label": ""}]
        j = dump(tmp_path / "c.jsonl", recs)
        import csv

        with (tmp_path / "c.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["id", "text", "lang", "label"])
            w.writeheader()
            w.writerows(recs)
        assert ingest(tmp_path / "c.csv") == ingest(j)

    def test_csv_header_required(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("ident,body\n1,a\n")
        with pytest.raises(CorpusError, match="header"):
            ingest_csv(p)

    def test_write_jsonl_adds_tokens_and_round_trips(self, tmp_path):
        c = preprocess(corpus_of("I want a new phone", "hello"))
        c = label_by_seeds(c)
        write_jsonl(c, tmp_path / "o.jsonl")
        lines = [json.loads(l) for l in (tmp_path / "o.jsonl").read_text().splitlines()]
        assert lines[0]["tokens"] == ["want", "new", "phone"]
        assert lines[1]["label"] == NO
        assert ingest_jsonl(tmp_path / "o.jsonl") == c


class TestCorpusTypes:
    def test_empty_id_rejected(self):
        with pytest.raises(CorpusError):
            Document("", "x")

    def test_label_space(self):
        c = corpus_of("a", "b")
        assert c.label_space == (YES, NO)
        assert c.n == len(c.docs) == 2

    def test_seed_vector_default_and_validation(self):
        assert SeedVector().phrases == DEFAULT_SEEDS
        with pytest.raises(CorpusError):
            SeedVector(())
        with pytest.raises(CorpusError):
            SeedVector(("want", "want"))
        with pytest.raises(CorpusError):
            SeedVector(("Want",))


class TestFilterLanguage:
    def test_keeps_matching_in_order(self):
        c = corpus_of("a", "b", "c", langs=["en", "fr", "en"])
        assert [d.id for d in filter_language(c, "en")] == ["0", "2"]

    def test_identity_when_all_match(self):
        c = corpus_of("a", "b")
        assert filter_language(c, "en") == c

    def test_no_match_is_empty(self):
        assert filter_language(corpus_of("a"), "xx").n == 0


class TestLabelBySeeds:
    @pytest.mark.parametrize("text,label", [
        ("I want a new phone", YES),
        ("hello world", NO),
        ("look for the stars", YES),
        ("looking forward", NO),
        ("I look at the stars", NO),
        ("WANT!!! pizza", YES),
        ("wanton soup", NO),
        ("#want", YES),
        ("need, badly", YES),
    ])
    def test_examples(self, text, label):
        assert label_by_seeds(corpus_of(text)).docs[0].label == label

    def test_phrase_must_be_contiguous(self):
        assert not contains_phrase(["look", "up", "for"], ("look", "for"))
        assert contains_phrase(["i", "look", "for", "it"], ("look", "for"))
        assert not contains_phrase(["look"], ("look", "for"))

    def test_idempotent_and_partitions(self):
        c = corpus_of("I want it", "no", "desire", "like that")
        once = label_by_seeds(c)
        assert label_by_seeds(once) == once
        counts = once.class_counts()
        assert counts[YES] + counts[NO] == once.n

    def test_raw_text_unchanged(self):
        c = corpus_of("I WANT http://x.co")
        assert label_by_seeds(c).docs[0].raw_text == "I WANT http://x.co"

    def test_custom_seeds(self):
        assert has_intention("buy now", SeedVector(("buy",)))
        assert not has_intention("I want", SeedVector(("buy",)))

    def test_match_tokens_strips_and_lowers(self):
        assert match_tokens("Look, FOR it!") == ["look", "for", "it"]


class TestPreprocess:
    def test_example_phone(self):
        assert preprocess_text("I want a new phone http://t.co/abc") == ["want", "new", "phone"]

    def test_empty(self):
        assert preprocess_text("") == []

    def test_check_url(self):
        assert "check" not in get_stopwords()
        assert preprocess_text("CHECK!!! http://x.co") == ["check"]

    def test_www_urls_and_case(self):
        assert preprocess_text("see WWW.example.com Https://A.b/c now") == ["see", "now"]

    def test_url_prefix_inside_word_is_not_a_url(self):
        assert preprocess_text("aahttp://x") == ["aahttp://x"]
        assert preprocess_text("(http://x.co)") == []

    def test_hashtags_and_mentions_keep_word(self):
        assert preprocess_text("@alice #pizza") == ["alice", "pizza"]

    def test_pure_punctuation_dropped(self):
        assert preprocess_text("... !!! :) wow") == ["wow"]

    def test_all_flags_off_is_bare_tokenization(self):
        off = PreprocessConfig(False, False, False, False, False)
        text = "I Want, a http://x.co"
        assert preprocess_text(text, off) == tokenize(text)

    def test_preprocess_rejects_all_flags_off(self):
        with pytest.raises(CorpusError, match="at least one"):
            preprocess(corpus_of("x"), PreprocessConfig(False, False, False, False, False))

    def test_unknown_stopword_list(self):
        with pytest.raises(CorpusError):
            preprocess(corpus_of("x"), PreprocessConfig(stopword_list_id="nope"))

    def test_keeps_empty_documents(self):
        c = preprocess(corpus_of("the a of", "want"))
        assert c.n == 2
        assert c.docs[0].tokens == ()

    def test_pos_filter_drops_function_words(self):
        cfg = PreprocessConfig(remove_stopwords=False, pos_filter=True)
        toks = preprocess_text("I really want the new phone quickly", cfg)
        assert "the" not in toks and "i" not in toks
        assert {"want", "phone", "quickly"} <= set(toks)

    def test_seed_words_not_stopwords(self):
        stop = get_stopwords()
        for phrase in DEFAULT_SEEDS:
            assert phrase.split()[0] not in stop
        assert set(STOPWORD_LISTS) == {"en-basic-v1"}

    def test_config_round_trip(self):
        cfg = PreprocessConfig(strip_urls=False, pos_filter=True)
        assert PreprocessConfig.from_dict(cfg.to_dict()) == cfg
        with pytest.raises(CorpusError):
            PreprocessConfig.from_dict({"bogus": True})


class TestTagger:
    @pytest.mark.parametrize("token,tag", [
        ("quickly", "ADV"), ("running", "VERB"), ("the", "DET"), ("phone", "NOUN"),
        ("beautiful", "ADJ"), ("and", "CONJ"),
    ])
    def test_tags(self, token, tag):
        assert HeuristicTagger().tag_one(token) == tag

    def test_content_tags(self):
        assert CONTENT_TAGS == {"NOUN", "VERB", "ADJ", "ADV"}


texts = st.lists(st.sampled_from(list("abcWXY #@!.,:/") + ["http://", "www.", " want "]),
                max_size=30).map("".join)


class TestPreprocessProperties:
    @given(texts)
    def test_no_token_invented(self, text):
        bare = [t.lower() for t in tokenize(text)]
        for tok in preprocess_text(text):
            assert any(tok in b for b in bare)
        if "http" not in text.lower() and "www." not in text.lower():
            pieces = {strip_punct(t) for t in bare}
            assert set(preprocess_text(text)) <= pieces

    @given(texts)
    def test_default_invariants(self, text):
        for tok in preprocess_text(text):
            assert tok == tok.lower()
            assert tok and strip_punct(tok) == tok
            assert not tok.startswith(("http", "www."))

    @given(st.lists(texts, min_size=1, max_size=5))
    def test_labelling_deterministic(self, ts):
        c = corpus_of(*ts)
        assert label_by_seeds(c) == label_by_seeds(c)
