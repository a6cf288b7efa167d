"""Shared text normalization for the lexicon index and the extractor.

A token is a maximal run of letters, digits, or hyphens.  Everything else
(punctuation, whitespace) acts as a separator, so "state-of-the-art" stays
one token while "brain fog, again" splits into three.
"""

from __future__ import annotations

import unicodedata


def nfc_lower(text: str) -> str:
    """Unicode NFC + casefold to lowercase; offsets index this string."""
    return unicodedata.normalize("NFC", text).lower()


def _is_token_char(ch: str) -> bool:
    return ch == "-" or ch.isalnum()


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokens with [start, end) character offsets into ``text``."""
    spans: list[tuple[str, int, int]] = []
    start = None
    for i, ch in enumerate(text):
        if _is_token_char(ch):
            if start is None:
                start = i
        elif start is not None:
            spans.append((text[start:i], start, i))
            start = None
    if start is not None:
        spans.append((text[start:], start, len(text)))
    return spans


def normalize_term(term: str) -> str:
    """Canonical form of a lexicon term: NFC, lowercase, punctuation
    stripped (hyphens kept), internal whitespace collapsed to single spaces.

    Idempotent, and consistent with :func:`token_spans` so that a term's
    normal form equals the space-join of the tokens of any text spelling it.
    """
    return " ".join(tok for tok, _, _ in token_spans(nfc_lower(term)))
