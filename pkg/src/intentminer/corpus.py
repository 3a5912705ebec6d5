"""Short-text records, seed-phrase labelling and token preprocessing."""
from __future__ import annotations

import csv
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CorpusError
from .stopwords import DEFAULT_STOPWORD_LIST, get_stopwords
from .tagger import CONTENT_TAGS, HeuristicTagger, Tagger

YES = "Yes"
NO = "No"
LABEL_SPACE = (YES, NO)

DEFAULT_SEEDS = ("wish", "want", "need", "look for", "request", "like", "desire")

# a URL starts at a token start or after punctuation, never inside a word
_URL_RE = re.compile(r"(?<![^\W_])(?:https?://|www\.)\S*", re.IGNORECASE)


@dataclass(frozen=True)
class Document:
    id: str
    raw_text: str
    lang: str = "unknown"
    tokens: tuple[str, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be nonempty")
        if self.label is not None and self.label not in LABEL_SPACE:
            raise CorpusError(f"document {self.id!r}: label must be Yes or No, got {self.label!r}")


@dataclass(frozen=True)
class Corpus:
    docs: tuple[Document, ...] = ()
    label_space: tuple[str, str] = LABEL_SPACE

    def __post_init__(self):
        object.__setattr__(self, "docs", tuple(self.docs))
        seen: set[str] = set()
        for doc in self.docs:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
        if len(self.label_space) != 2:
            raise CorpusError("label space must have exactly two classes")

    @property
    def n(self) -> int:
        return len(self.docs)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.docs)

    @property
    def labels(self) -> list[str | None]:
        return [d.label for d in self.docs]

    @property
    def is_labeled(self) -> bool:
        return all(d.label is not None for d in self.docs)

    def class_counts(self) -> dict[str, int]:
        counts = Counter(d.label for d in self.docs if d.label is not None)
        return {c: counts.get(c, 0) for c in self.label_space}


@dataclass(frozen=True)
class SeedVector:
    phrases: tuple[str, ...] = DEFAULT_SEEDS

    def __post_init__(self):
        phrases = tuple(" ".join(p.split()) for p in self.phrases)
        if not phrases or any(not p for p in phrases):
            raise CorpusError("seed vector needs at least one nonempty phrase")
        if any(p != p.lower() for p in phrases):
            raise CorpusError("seed phrases must be lowercase")
        if len(set(phrases)) != len(phrases):
            raise CorpusError("seed phrases must be unique")
        object.__setattr__(self, "phrases", phrases)

    def token_phrases(self) -> list[tuple[str, ...]]:
        return [tuple(p.split()) for p in self.phrases]


@dataclass(frozen=True)
class PreprocessConfig:
    strip_urls: bool = True
    lowercase: bool = True
    remove_punct: bool = True
    remove_stopwords: bool = True
    pos_filter: bool = False
    stopword_list_id: str = DEFAULT_STOPWORD_LIST

    def to_dict(self) -> dict:
        return {
            "strip_urls": self.strip_urls,
            "lowercase": self.lowercase,
            "remove_punct": self.remove_punct,
            "remove_stopwords": self.remove_stopwords,
            "pos_filter": self.pos_filter,
            "stopword_list_id": self.stopword_list_id,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PreprocessConfig":
        unknown = set(data) - set(cls().to_dict())
        if unknown:
            raise CorpusError(f"unknown preprocess options: {sorted(unknown)}")
        return cls(**data)


# --------------------------------------------------------------------------
# ingestion
# --------------------------------------------------------------------------

def _record_to_document(rec: dict, where: str) -> Document:
    if not isinstance(rec, dict):
        raise CorpusError(f"{where}: expected a JSON object")
    if "id" not in rec or rec["id"] is None or str(rec["id"]) == "":
        raise CorpusError(f"{where}: missing 'id'")
    if "text" not in rec or rec["text"] is None:
        raise CorpusError(f"{where}: missing 'text'")
    if not isinstance(rec["text"], str):
        raise CorpusError(f"{where}: 'text' must be a string")
    label = rec.get("label")
    if label in ("", None):
        label = None
    elif label not in LABEL_SPACE:
        raise CorpusError(f"{where}: label must be Yes or No, got {label!r}")
    lang = rec.get("lang") or "unknown"
    tokens = rec.get("tokens") or ()
    return Document(id=str(rec["id"]), raw_text=rec["text"], lang=str(lang),
                    tokens=tuple(tokens), label=label)


def _build(docs: Iterable[tuple[Document, str]]) -> Corpus:
    seen: dict[str, str] = {}
    out = []
    for doc, where in docs:
        if doc.id in seen:
            raise CorpusError(f"{where}: duplicate id {doc.id!r} (first seen at {seen[doc.id]})")
        seen[doc.id] = where
        out.append(doc)
    return Corpus(tuple(out))


def ingest_jsonl(path: str | Path) -> Corpus:
    """Read one record per line; blank lines are skipped."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus file not found: {path}")

    def gen():
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                where = f"{path.name}:{lineno}"
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{where}: malformed JSON ({exc.msg})") from None
                yield _record_to_document(rec, where), where

    return _build(gen())


def ingest_csv(path: str | Path) -> Corpus:
    """Read a CSV with header ``id,text,lang,label`` (lang and label optional)."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus file not found: {path}")

    def gen():
        with path.open(encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"id", "text"} <= set(reader.fieldnames):
                raise CorpusError(f"{path.name}: CSV header must contain id and text")
            for rec in reader:
                where = f"{path.name}:{reader.line_num}"
                if None in rec:
                    raise CorpusError(f"{where}: too many fields")
                yield _record_to_document(rec, where), where

    return _build(gen())


def ingest(path: str | Path) -> Corpus:
    """Dispatch on file extension (``.csv`` or JSONL)."""
    if str(path).lower().endswith(".csv"):
        return ingest_csv(path)
    return ingest_jsonl(path)


def document_to_record(doc: Document, with_tokens: bool = True) -> dict:
    rec = {"id": doc.id, "text": doc.raw_text, "lang": doc.lang}
    if doc.label is not None:
        rec["label"] = doc.label
    if with_tokens:
        rec["tokens"] = list(doc.tokens)
    return rec


def write_jsonl(corpus: Corpus, path: str | Path, with_tokens: bool = True) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus:
            fh.write(json.dumps(document_to_record(doc, with_tokens), ensure_ascii=False))
            fh.write("\n")


# --------------------------------------------------------------------------
# filtering and labelling
# --------------------------------------------------------------------------

def filter_language(corpus: Corpus, lang: str) -> Corpus:
    if not lang:
        raise CorpusError("language code must be nonempty")
    return replace(corpus, docs=tuple(d for d in corpus if d.lang == lang))


def _is_punct(ch: str) -> bool:
    cat = unicodedata.category(ch)
    return cat[0] in "PS"


def strip_punct(token: str) -> str:
    """Strip punctuation and symbol characters from both ends of ``token``."""
    start, end = 0, len(token)
    while start < end and _is_punct(token[start]):
        start += 1
    while end > start and _is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Bare tokenisation: split on Unicode whitespace."""
    return text.split()


def match_tokens(text: str) -> list[str]:
    """Lowercased, punctuation-stripped token stream used for seed matching."""
    out = []
    for tok in tokenize(text.lower()):
        tok = strip_punct(tok)
        if tok:
            out.append(tok)
    return out


def contains_phrase(tokens: Sequence[str], phrase: Sequence[str]) -> bool:
    k = len(phrase)
    if k == 0 or k > len(tokens):
        return False
    first = phrase[0]
    for i in range(len(tokens) - k + 1):
        if tokens[i] == first and tuple(tokens[i:i + k]) == tuple(phrase):
            return True
    return False


def has_intention(text: str, seeds: SeedVector) -> bool:
    toks = match_tokens(text)
    return any(contains_phrase(toks, p) for p in seeds.token_phrases())


def label_by_seeds(corpus: Corpus, seeds: SeedVector = SeedVector()) -> Corpus:
    """Label Yes iff some seed phrase occurs as a contiguous whole-token run."""
    docs = tuple(
        replace(d, label=YES if has_intention(d.raw_text, seeds) else NO) for d in corpus
    )
    return replace(corpus, docs=docs)


# --------------------------------------------------------------------------
# preprocessing
# --------------------------------------------------------------------------

def preprocess_text(text: str, config: PreprocessConfig = PreprocessConfig(),
                    tagger: Tagger | None = None) -> list[str]:
    if config.strip_urls:
        text = _URL_RE.sub(" ", text)
    tokens = tokenize(text)
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    if config.remove_punct:
        tokens = [s for s in (strip_punct(t) for t in tokens) if s]
    if config.remove_stopwords:
        stop = get_stopwords(config.stopword_list_id)
        tokens = [t for t in tokens if t.lower() not in stop]
    if config.pos_filter:
        tags = (tagger or HeuristicTagger()).tag(tokens)
        tokens = [t for t, tag in zip(tokens, tags) if tag in CONTENT_TAGS]
    return tokens


def preprocess(corpus: Corpus, config: PreprocessConfig = PreprocessConfig(),
               tagger: Tagger | None = None) -> Corpus:
    """Populate ``tokens`` for every document; ``raw_text`` is untouched.

    Documents left with no tokens are kept so rows stay aligned with labels.
    """
    flags = (config.strip_urls, config.lowercase, config.remove_punct,
             config.remove_stopwords, config.pos_filter)
    if not any(flags):
        raise CorpusError("preprocess needs at least one enabled step")
    get_stopwords(config.stopword_list_id)
    docs = tuple(
        replace(d, tokens=tuple(preprocess_text(d.raw_text, config, tagger))) for d in corpus
    )
    return replace(corpus, docs=docs)
