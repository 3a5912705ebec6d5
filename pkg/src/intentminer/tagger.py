"""A small rule-based part-of-speech tagger.

Closed-class words come from a lexicon; open-class words are guessed from a
handful of common verbs/adjectives and from suffixes.  Anything unresolved is
tagged as a noun.  Any object with a ``tag(tokens) -> list[str]`` method can
stand in for :class:`HeuristicTagger`.
"""
from __future__ import annotations

from typing import Protocol, Sequence

NOUN, VERB, ADJ, ADV = "NOUN", "VERB", "ADJ", "ADV"
DET, PRON, ADP, CONJ, NUM, PRT, X = "DET", "PRON", "ADP", "CONJ", "NUM", "PRT", "X"

CONTENT_TAGS = frozenset({NOUN, VERB, ADJ, ADV})

_CLOSED = {
    DET: "a an the this that these those every each some any no all both either neither",
    PRON: (
        "i me my mine myself you your yours yourself we us our ours ourselves he him his "
        "himself she her hers herself it its itself they them their theirs themselves "
        "who whom whose what which u ur im"
    ),
    ADP: (
        "in on at by for with about against between into through during before after "
        "above below to from up down of off over under around among without within via"
    ),
    CONJ: "and or but nor yet so because although though while if unless whereas",
    PRT: "not n't 's to",
    VERB: (
        "is am are was were be been being do does did have has had will would shall should "
        "can could may might must want wants need needs wish wishes like likes desire "
        "request look go going get got make take see know think come give find tell "
        "buy try help love hate hope"
    ),
    ADJ: "new good great best better bad worse worst big small little old young happy sad",
    ADV: "very too also just really now then here there never always often soon again",
}

_LEXICON: dict[str, str] = {}
for _tag, _words in _CLOSED.items():
    for _w in _words.split():
        _LEXICON.setdefault(_w, _tag)

_SUFFIXES = (
    ("ly", ADV),
    ("ing", VERB),
    ("ed", VERB),
    ("ize", VERB),
    ("ise", VERB),
    ("ous", ADJ),
    ("ful", ADJ),
    ("able", ADJ),
    ("ible", ADJ),
    ("ive", ADJ),
    ("less", ADJ),
    ("ic", ADJ),
    ("al", ADJ),
    ("est", ADJ),
    ("tion", NOUN),
    ("ness", NOUN),
    ("ment", NOUN),
    ("ity", NOUN),
)


class Tagger(Protocol):
    def tag(self, tokens: Sequence[str]) -> list[str]: ...


class HeuristicTagger:
    """Lexicon + suffix tagger over the universal coarse tag set."""

    def tag_one(self, token: str) -> str:
        t = token.lower()
        if t in _LEXICON:
            return _LEXICON[t]
        if t.replace(".", "", 1).replace(",", "").isdigit():
            return NUM
        if not any(ch.isalpha() for ch in t):
            return X
        for suffix, tag in _SUFFIXES:
            if len(t) > len(suffix) + 2 and t.endswith(suffix):
                return tag
        return NOUN

    def tag(self, tokens: Sequence[str]) -> list[str]:
        return [self.tag_one(t) for t in tokens]
