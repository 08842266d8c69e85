"""Token vocabulary with reserved padding and unknown entries."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

PAD = "<pad>"
UNK = "<unk>"
PAD_INDEX = 0
UNK_INDEX = 1


@dataclass(frozen=True)
class Vocab:
    """Bijective term/index map with dense indices starting at 0."""

    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        if self.terms[:2] != (PAD, UNK):
            raise ValueError("vocabulary must start with the PAD and UNK entries")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def lookup(self, term: str) -> int:
        """Index of ``term``, or the UNK index when absent."""
        return self._index.get(term, UNK_INDEX)

    def term(self, index: int) -> str:
        return self.terms[index]

    def encode(self, tokens: Sequence[str]) -> list[int]:
        return [self.lookup(tok) for tok in tokens]


def _token_lists(corpus: Iterable) -> list[Sequence[str]]:
    out = []
    for item in corpus:
        tokens = getattr(item, "tokens", item)
        out.append(tokens)
    return out


def build_vocab(corpus: Iterable, max_size: int) -> Vocab:
    """Vocabulary of the ``max_size`` most frequent terms plus PAD and UNK.

    ``corpus`` is an iterable of mentions or plain token sequences.
    Frequency ties break lexicographically, so the result is
    deterministic. An empty corpus is an error.
    """
    token_lists = _token_lists(corpus)
    if not token_lists:
        raise ValueError("corpus is empty")
    counts: Counter[str] = Counter()
    for tokens in token_lists:
        counts.update(tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    kept = [term for term, _ in ranked[:max_size]]
    return Vocab(tuple([PAD, UNK] + kept))
