"""Sentiment lexicon, mention parsing, and mention scoring.

A lexicon holds two disjoint term maps: sentiment words carry a signed
score (positive words strictly above zero, negative words strictly
below), and modifiers ("adverbs") carry a non-negative multiplicative
score. A mention is a tokenized, labeled piece of text with its
(modifier, word) occurrences extracted; its lexicon score is the sum of
``modifier_score * word_score`` over those occurrences, with a modifier
score of 1 for unmodified words.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"

#: Global label order used for one-hot vectors and probability outputs.
LABELS = (POSITIVE, NEGATIVE, NEUTRAL)
LABEL_INDEX = {label: i for i, label in enumerate(LABELS)}

#: Supervision score assigned to a mention when only a class label exists.
LABEL_SCORES = {POSITIVE: 1.0, NEGATIVE: -1.0, NEUTRAL: 0.0}

#: Literal token substituted for the entity under analysis.
TARGET_TOKEN = "TARGET"

_TOKEN_RE = re.compile(r"[a-z0-9']+")


class LexiconError(ValueError):
    """Raised on malformed lexicons, unknown terms, or bad records."""


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and split into alphanumeric tokens.

    Punctuation is discarded; apostrophes inside words are kept. Empty
    input yields an empty list.
    """
    return [tok for tok, _, _ in tokenize_with_spans(text)]


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokenize, returning ``(token, start, end)`` character spans.

    Spans index into the original (non-lowercased) text so callers can
    splice replacements back in.
    """
    lowered = text.lower()
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(lowered)]


def mask_target(text: str, entity: str) -> str:
    """Replace every case-insensitive occurrence of ``entity`` with TARGET.

    Occurrences are matched as contiguous substrings of the raw text, so
    multi-word entities work. Existing literal TARGET tokens are left
    alone, which makes the operation idempotent even when ``entity`` is
    a substring of the mask token itself.
    """
    if not entity:
        raise LexiconError("entity must be non-empty")
    pattern = re.compile(re.escape(entity), re.IGNORECASE)
    segments = text.split(TARGET_TOKEN)
    return TARGET_TOKEN.join(pattern.sub(TARGET_TOKEN, seg) for seg in segments)


@dataclass(frozen=True)
class WordEntry:
    """A sentiment word's signed score and its declared polarity."""

    score: float
    polarity: str


class Lexicon:
    """Immutable sentiment dictionary of words and modifiers.

    ``words`` maps term to :class:`WordEntry`; ``adverbs`` maps term to a
    non-negative score. Construction validates that scores match their
    polarity, modifier scores are non-negative, and the two maps are
    disjoint.
    """

    def __init__(
        self,
        words: Mapping[str, WordEntry],
        adverbs: Mapping[str, float],
    ) -> None:
        words = dict(words)
        adverbs = {term: float(score) for term, score in adverbs.items()}
        for term, entry in words.items():
            if entry.polarity not in (POSITIVE, NEGATIVE):
                raise LexiconError(f"word {term!r}: polarity must be positive or negative")
            if entry.polarity == POSITIVE and not entry.score > 0:
                raise LexiconError(f"positive word {term!r} must have score > 0")
            if entry.polarity == NEGATIVE and not entry.score < 0:
                raise LexiconError(f"negative word {term!r} must have score < 0")
        for term, score in adverbs.items():
            if not score >= 0:
                raise LexiconError(f"adverb {term!r} must have score >= 0")
        overlap = set(words) & set(adverbs)
        if overlap:
            raise LexiconError(f"terms in both maps: {sorted(overlap)}")
        self._words = words
        self._adverbs = adverbs

    @classmethod
    def from_scores(
        cls,
        word_scores: Mapping[str, float],
        adverb_scores: Mapping[str, float] | None = None,
    ) -> "Lexicon":
        """Build a lexicon inferring polarity from each score's sign."""
        words = {
            term: WordEntry(float(s), POSITIVE if s > 0 else NEGATIVE)
            for term, s in word_scores.items()
        }
        return cls(words, adverb_scores or {})

    @property
    def words(self) -> Mapping[str, WordEntry]:
        return dict(self._words)

    @property
    def adverbs(self) -> Mapping[str, float]:
        return dict(self._adverbs)

    def word_terms(self) -> list[str]:
        return sorted(self._words)

    def adverb_terms(self) -> list[str]:
        return sorted(self._adverbs)

    def has_word(self, term: str) -> bool:
        return term in self._words

    def has_adverb(self, term: str) -> bool:
        return term in self._adverbs

    def word_score(self, term: str) -> float:
        try:
            return self._words[term].score
        except KeyError:
            raise LexiconError(f"unknown sentiment word: {term!r}") from None

    def polarity(self, term: str) -> str:
        try:
            return self._words[term].polarity
        except KeyError:
            raise LexiconError(f"unknown sentiment word: {term!r}") from None

    def adverb_score(self, term: str) -> float:
        try:
            return self._adverbs[term]
        except KeyError:
            raise LexiconError(f"unknown adverb: {term!r}") from None

    def replace_scores(
        self,
        word_scores: Mapping[str, float] | None = None,
        adverb_scores: Mapping[str, float] | None = None,
    ) -> "Lexicon":
        """Return a new lexicon with the given scores substituted in.

        Polarities are preserved; terms absent from the update keep
        their current score. Updated scores must still satisfy the
        polarity invariants.
        """
        words = dict(self._words)
        for term, score in (word_scores or {}).items():
            if term not in words:
                raise LexiconError(f"unknown sentiment word: {term!r}")
            words[term] = WordEntry(float(score), words[term].polarity)
        adverbs = dict(self._adverbs)
        for term, score in (adverb_scores or {}).items():
            if term not in adverbs:
                raise LexiconError(f"unknown adverb: {term!r}")
            adverbs[term] = float(score)
        return Lexicon(words, adverbs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self._words == other._words and self._adverbs == other._adverbs

    def __repr__(self) -> str:
        return f"Lexicon(words={len(self._words)}, adverbs={len(self._adverbs)})"


Pair = tuple  # (adverb term or None, word term)


def extract_pairs(tokens: Sequence[str], lexicon: Lexicon) -> list[tuple[str | None, str]]:
    """Extract (modifier, word) occurrences from a token sequence.

    Every token present in the lexicon's word map yields one pair, in
    token order. The modifier slot is filled iff the immediately
    preceding token is in the modifier map; each modifier token attaches
    to at most the one word it directly precedes.
    """
    return [
        (None if adv_i is None else tokens[adv_i], tokens[word_i])
        for adv_i, word_i in extract_pair_indices(tokens, lexicon)
    ]


def extract_pair_indices(
    tokens: Sequence[str], lexicon: Lexicon
) -> list[tuple[int | None, int]]:
    """Like :func:`extract_pairs` but returns token indices.

    Used by the augmenter, which needs occurrence positions to splice
    replacements into the raw text.
    """
    pairs: list[tuple[int | None, int]] = []
    for i, tok in enumerate(tokens):
        if not lexicon.has_word(tok):
            continue
        if i > 0 and lexicon.has_adverb(tokens[i - 1]):
            pairs.append((i - 1, i))
        else:
            pairs.append((None, i))
    return pairs


def score_mention(pairs: Iterable[tuple[str | None, str]], lexicon: Lexicon) -> float:
    """Sum ``modifier_score * word_score`` over extracted pairs.

    Unmodified words contribute their score unscaled. Unknown terms
    raise :class:`LexiconError` naming the term.
    """
    total = 0.0
    for adverb, word in pairs:
        scale = 1.0 if adverb is None else lexicon.adverb_score(adverb)
        total += scale * lexicon.word_score(word)
    return total


@dataclass(frozen=True)
class Mention:
    """A tokenized, labeled text with its sentiment occurrences extracted.

    ``target_score`` is the supervision value used when learning scores;
    it defaults to +1 / 0 / -1 for positive / neutral / negative labels
    when no explicit score is available.
    """

    raw_text: str
    tokens: tuple[str, ...]
    pairs: tuple[tuple[str | None, str], ...]
    label: str
    target_score: float

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise LexiconError(f"unknown label: {self.label!r}")

    def score(self, lexicon: Lexicon) -> float:
        return score_mention(self.pairs, lexicon)


def make_mention(
    text: str,
    label: str,
    lexicon: Lexicon,
    target_score: float | None = None,
    entity: str | None = None,
) -> Mention:
    """Build a :class:`Mention`: mask, tokenize, and extract pairs.

    When ``entity`` is given the text is target-masked first, so
    downstream consumers always see the masked form.
    """
    if label not in LABELS:
        raise LexiconError(f"unknown label: {label!r}")
    if entity:
        text = mask_target(text, entity)
    tokens = tuple(tokenize(text))
    pairs = tuple(extract_pairs(tokens, lexicon))
    if target_score is None:
        target_score = LABEL_SCORES[label]
    return Mention(text, tokens, pairs, label, float(target_score))


# ----------------------------------------------------------------------
# File formats
#
# Lexicon file: one tab-separated record per line,
#   term<TAB>kind<TAB>polarity<TAB>score
# with kind in {word, adverb} and polarity in {positive, negative, n/a}.
#
# Mention file: one tab-separated record per line,
#   text<TAB>label[<TAB>target_score[<TAB>entity]]
# where the two trailing fields may be empty or absent. Extra fields
# (e.g. augmentation provenance) are ignored on read.


@dataclass(frozen=True)
class MentionRecord:
    """One line of a mention file, before lexicon-aware preparation."""

    text: str
    label: str
    target_score: float | None = None
    entity: str | None = None


def save_lexicon(lexicon: Lexicon, path) -> None:
    lines = []
    for term in lexicon.word_terms():
        entry = lexicon.words[term]
        lines.append(f"{term}\tword\t{entry.polarity}\t{entry.score!r}")
    for term in lexicon.adverb_terms():
        lines.append(f"{term}\tadverb\tn/a\t{lexicon.adverbs[term]!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def load_lexicon(path) -> Lexicon:
    words: dict[str, WordEntry] = {}
    adverbs: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise LexiconError(f"{path}:{lineno}: expected 4 fields, got {len(fields)}")
            term, kind, polarity, score_text = fields
            try:
                score = float(score_text)
            except ValueError:
                raise LexiconError(f"{path}:{lineno}: bad score {score_text!r}") from None
            if kind == "word":
                words[term] = WordEntry(score, polarity)
            elif kind == "adverb":
                adverbs[term] = score
            else:
                raise LexiconError(f"{path}:{lineno}: unknown kind {kind!r}")
    return Lexicon(words, adverbs)


def save_mention_records(records: Iterable[MentionRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            score = "" if rec.target_score is None else repr(rec.target_score)
            entity = rec.entity or ""
            fh.write(f"{rec.text}\t{rec.label}\t{score}\t{entity}\n")


def load_mention_records(path) -> list[MentionRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) < 2:
                raise LexiconError(f"{path}:{lineno}: expected at least text and label")
            text, label = fields[0], fields[1]
            if label not in LABELS:
                raise LexiconError(f"{path}:{lineno}: unknown label {label!r}")
            score: float | None = None
            if len(fields) > 2 and fields[2]:
                try:
                    score = float(fields[2])
                except ValueError:
                    raise LexiconError(f"{path}:{lineno}: bad target score {fields[2]!r}") from None
            entity = fields[3] if len(fields) > 3 and fields[3] else None
            records.append(MentionRecord(text, label, score, entity))
    return records


def prepare_mentions(records: Iterable[MentionRecord], lexicon: Lexicon) -> list[Mention]:
    """Turn raw records into mentions against ``lexicon``."""
    return [
        make_mention(rec.text, rec.label, lexicon, rec.target_score, rec.entity)
        for rec in records
    ]
