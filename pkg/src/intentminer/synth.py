"""Synthetic tweet-like corpus with planted intention phrases.

Yes documents contain one seed phrase; No documents contain none (but may
contain near-miss forms such as "looking" or "wanted").  Topic words lean
towards Yes documents, filler words are drawn independently of the class.
Labels come from :func:`corpus.label_by_seeds`, after which an equal
number of Yes and No labels are flipped to inject noise without changing
the class balance.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import DEFAULT_SEEDS, NO, YES, Corpus, Document, SeedVector, label_by_seeds
from .errors import ConfigError
from .stopwords import get_stopwords

SEED_WEIGHTS = {"want": 0.40, "need": 0.20, "like": 0.12, "wish": 0.09,
                "look for": 0.09, "desire": 0.05, "request": 0.05}

SUBJECTS = ["I", "i", "I really", "we", "we all", "my sister", "my mom", "honestly I", "i just",
            "So I", "everyone", "they"]
INTENT_TAILS = ["a", "the", "some", "my", "a new", "to get a", "to find a", "your", "more"]
TOPIC_WORDS = ["phone", "coffee", "pizza", "job", "vacation", "ticket", "shoes", "laptop",
               "car", "house", "advice", "money", "holiday", "puppy", "burger", "dress",
               "tattoo", "guitar", "apartment", "concert", "sleep", "hug", "beach", "weekend"]
NEUTRAL_VERBS = ["watched", "played", "saw", "went", "ate", "finished", "read", "made",
                 "posted", "shared", "heard", "met", "visited", "cooked", "tried", "found",
                 "painted", "cleaned", "fixed", "won", "lost", "missed", "drove", "walked",
                 "opened", "closed", "sold", "bought", "built", "wrote", "sang", "danced",
                 "called", "texted", "hosted", "joined", "left", "started", "loved", "hated"]
NEUTRAL_TAILS = ["the", "a", "my", "this", "that", "our", "their"]
DECOYS = ["looking", "wanted", "needed", "wishes", "liked", "likes", "requested", "desired",
          "wishing", "needing", "wants", "needs"]
PUNCT = ["", "", "", "!", "!!!", "...", "?", ".", " :)", " lol"]
_SYLLABLES = ["ka", "lo", "mi", "re", "su", "ta", "ne", "vo", "pi", "da", "zu", "bel", "cor",
              "fin", "gar", "hol", "jen", "kip", "lum", "mor", "nix", "pol", "quin", "rus",
              "sam", "tor", "ul", "ven", "wes", "yar"]


@dataclass(frozen=True)
class SynthConfig:
    n_yes: int = 3452
    n_no: int = 2444
    noise: float = 0.10
    seed: int = 0
    filler_vocab: int = 3000
    topic_rate_yes: float = 0.55
    topic_rate_no: float = 0.2
    decoy_rate: float = 0.04
    url_rate: float = 0.3
    non_english: int = 0

    def __post_init__(self):
        if self.n_yes < 1 or self.n_no < 1:
            raise ConfigError("need at least one document per class")
        if not 0 <= self.noise < 1:
            raise ConfigError("noise must be in [0, 1)")
        if self.filler_vocab < 10:
            raise ConfigError("filler_vocab must be >= 10")


def _filler_words(n: int, rng: np.random.Generator) -> list[str]:
    banned = set(get_stopwords()) | set(TOPIC_WORDS) | set(NEUTRAL_VERBS) | set(DECOYS)
    banned |= {w for p in DEFAULT_SEEDS for w in p.split()}
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < n:
        k = int(rng.integers(2, 4))
        w = "".join(_SYLLABLES[i] for i in rng.integers(0, len(_SYLLABLES), size=k))
        if w not in seen and w not in banned:
            seen.add(w)
            words.append(w)
    return words


class _Generator:
    def __init__(self, cfg: SynthConfig):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.filler = _filler_words(cfg.filler_vocab, self.rng)
        ranks = np.arange(1, cfg.filler_vocab + 1, dtype=np.float64)
        p = 1.0 / ranks ** 0.8
        self.filler_p = p / p.sum()
        self.handles = [f"@{self.filler[i]}{i % 97}" for i in range(0, min(150, cfg.filler_vocab))]
        seeds = list(SEED_WEIGHTS)
        w = np.array([SEED_WEIGHTS[s] for s in seeds])
        self.seed_phrases, self.seed_p = seeds, w / w.sum()

    def pick(self, items):
        return items[int(self.rng.integers(0, len(items)))]

    def fillers(self, lo: int, hi: int) -> list[str]:
        k = int(self.rng.integers(lo, hi + 1))
        idx = self.rng.choice(len(self.filler), size=k, p=self.filler_p)
        return [self.filler[i] for i in idx]

    def decorate(self, words: list[str]) -> str:
        rng = self.rng
        if rng.random() < 0.15:
            words.insert(0, self.pick(self.handles))
        if rng.random() < 0.2:
            words.append("#" + self.pick(self.filler[:300]))
        if rng.random() < 0.1:
            i = int(rng.integers(0, len(words)))
            words[i] = words[i].upper()
        text = " ".join(words) + self.pick(PUNCT)
        if rng.random() < self.cfg.url_rate:
            text += f" http://t.co/{''.join(self.pick('abcdefghijk0123456789') for _ in range(8))}"
        return text

    def yes_text(self) -> str:
        rng = self.rng
        phrase = self.seed_phrases[int(rng.choice(len(self.seed_phrases), p=self.seed_p))]
        words = [self.pick(SUBJECTS), phrase, self.pick(INTENT_TAILS)]
        if rng.random() < self.cfg.topic_rate_yes:
            words.append(self.pick(TOPIC_WORDS))
        words += self.fillers(2, 7)
        return self.decorate(words)

    def no_text(self) -> str:
        rng = self.rng
        words = [self.pick(SUBJECTS), self.pick(NEUTRAL_VERBS), self.pick(NEUTRAL_TAILS)]
        if rng.random() < self.cfg.topic_rate_no:
            words.append(self.pick(TOPIC_WORDS))
        if rng.random() < self.cfg.decoy_rate:
            words.insert(1, self.pick(DECOYS))
        words += self.fillers(3, 8)
        return self.decorate(words)

    def foreign_text(self) -> str:
        return " ".join(["je", "veux", "un"] + self.fillers(2, 6))


def synth_corpus(cfg: SynthConfig = SynthConfig()) -> Corpus:
    """Labelled corpus of ``n_yes + n_no`` English docs (plus optional non-English ones)."""
    gen = _Generator(cfg)
    seeds = SeedVector()
    kinds = np.array([1] * cfg.n_yes + [0] * cfg.n_no)
    gen.rng.shuffle(kinds)
    docs = []
    for i, k in enumerate(kinds):
        text = gen.yes_text() if k else gen.no_text()
        docs.append(Document(id=f"s{i:06d}", raw_text=text, lang="en"))
    corpus = label_by_seeds(Corpus(tuple(docs)), seeds)
    labels = np.array([d.label == YES for d in corpus])
    if not np.array_equal(labels, kinds.astype(bool)):
        raise AssertionError("generator produced text whose seed label disagrees with its class")
    n_flip = int(round(cfg.noise * (cfg.n_yes + cfg.n_no) / 2))
    n_flip = min(n_flip, cfg.n_yes, cfg.n_no)
    flip = np.concatenate([
        gen.rng.choice(np.flatnonzero(labels), size=n_flip, replace=False),
        gen.rng.choice(np.flatnonzero(~labels), size=n_flip, replace=False),
    ])
    final = labels.copy()
    final[flip] = ~final[flip]
    out = [Document(d.id, d.raw_text, d.lang, (), YES if f else NO) for d, f in zip(corpus, final)]
    for j in range(cfg.non_english):
        out.append(Document(id=f"x{j:06d}", raw_text=gen.foreign_text(), lang="fr", label=NO))
    return Corpus(tuple(out))


def signal_terms(seeds=DEFAULT_SEEDS) -> list[str]:
    """Seed tokens that survive default preprocessing (the planted signal)."""
    stop = get_stopwords()
    return sorted({w for p in seeds for w in p.split() if w not in stop})


def write_synth(path: str | Path, cfg: SynthConfig = SynthConfig()) -> Corpus:
    corpus = synth_corpus(cfg)
    with Path(path).open("w", encoding="utf-8") as fh:
        for d in corpus:
            fh.write(json.dumps({"id": d.id, "text": d.raw_text, "lang": d.lang, "label": d.label},
                                ensure_ascii=False) + "\n")
    return corpus
