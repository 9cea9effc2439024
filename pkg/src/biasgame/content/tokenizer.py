"""Sentence tokenization for word-level annotation.

Tokens are maximal runs of Unicode letters/digits, with apostrophes kept
when they sit between two such runs ("Trump's" stays one token). Punctuation
runs are discarded. Indices are 0-based and dense, and they stay stable for
the sentence's lifetime: retokenizing the same text always yields the same
tokens.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import EmptyText
from .stopwords import DEFAULT_STOPWORDS

# letters/digits (\w minus underscore), with internal straight or curly
# apostrophes allowed
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    is_stopword: bool


def tokenize(text: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> list[Token]:
    """Split a sentence into annotation tokens.

    Raises EmptyText when the input is empty or whitespace-only.
    """
    if not text or not text.strip():
        raise EmptyText("sentence text is empty or whitespace-only")
    return [
        Token(index=i, surface=m, is_stopword=m.lower() in stopwords)
        for i, m in enumerate(_TOKEN_RE.findall(text))
    ]
