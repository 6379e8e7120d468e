"""Label transcript pipeline: OCR fragments -> normalized text -> ingredient tokens.

The pipeline is deliberately simple: fragments are joined with commas, the
joined string is lowercased, and tokens are produced by splitting on commas.
Tokens are additionally whitespace-trimmed and empty segments are dropped;
substring matching downstream is invariant under both normalizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import EmptyTranscript


@dataclass(frozen=True)
class TextFragment:
    """One snippet of text as returned by a text detector, verbatim."""

    text: str


@dataclass(frozen=True)
class Transcript:
    """The joined label text: ``raw`` as captured, ``normalized`` lowercased."""

    raw: str
    normalized: str

    @classmethod
    def from_raw(cls, raw: str) -> "Transcript":
        return cls(raw=raw, normalized=raw.lower())


@dataclass(frozen=True)
class IngredientToken:
    """One comma-delimited label entry: 0-based index plus normalized text."""

    index: int
    text: str


FragmentLike = Union[str, TextFragment]


def _fragment_text(fragment: FragmentLike) -> str:
    if isinstance(fragment, TextFragment):
        return fragment.text
    return fragment


def join_fragments(fragments: Sequence[FragmentLike]) -> Transcript:
    """Join detector fragments into a single transcript.

    Each fragment's text is appended followed by a comma, in input order;
    the normalized form is the full-Unicode lowercase of the joined string.
    Empty fragment texts pass through and yield empty segments.
    """
    if not fragments:
        raise ValueError("fragments must be non-empty; an empty capture is NoTextFound")
    raw = "".join(_fragment_text(f) + "," for f in fragments)
    return Transcript(raw=raw, normalized=raw.lower())


def tokenize(transcript: Transcript | str) -> list[IngredientToken]:
    """Split a transcript into ingredient tokens.

    Splits the normalized text on commas, trims surrounding whitespace from
    each segment, drops empty segments, and assigns 0-based indices in order
    of appearance.

    Raises:
        EmptyTranscript: no non-empty token results; callers map this to the
            retake-photo path.
    """
    if isinstance(transcript, str):
        transcript = Transcript.from_raw(transcript)
    segments = (piece.strip() for piece in transcript.normalized.split(","))
    tokens = [
        IngredientToken(index=i, text=text)
        for i, text in enumerate(text for text in segments if text)
    ]
    if not tokens:
        raise EmptyTranscript("label text contains no ingredient tokens")
    return tokens


def normalize_term(text: str) -> str:
    """Normalize an ingredient term the same way tokens are normalized."""
    return text.strip().lower()


def occurrence_spans(text: str, needles: Iterable[str]) -> list[tuple[int, int]]:
    """Merged [start, end) spans of every occurrence of every needle in text.

    Display helper: marks where matched needles sit inside a token. Empty
    needles are ignored; overlapping and adjacent spans are merged.
    """
    spans: list[tuple[int, int]] = []
    for needle in needles:
        if not needle:
            continue
        start = text.find(needle)
        while start != -1:
            spans.append((start, start + len(needle)))
            start = text.find(needle, start + 1)
    spans.sort()
    merged: list[tuple[int, int]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged
