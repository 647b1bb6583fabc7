"""The canonical word tokenization rule for word_index bookkeeping.

The downstream pipeline defines word_index against this rule: a token is a
maximal run of letters/digits/apostrophes/hyphens, with apostrophes and
hyphens stripped at the edges (they are punctuation there, content inside),
curly apostrophes normalized to straight ones, and everything lowercased.
Re-implemented here so the converter and validator stay importable on their
own; the layout of the emitted files is the only coupling to the consumer.
"""

from __future__ import annotations

import re

_TOKEN_RUN = re.compile(r"(?:[^\W_]|['’-])+", re.UNICODE)
_EDGE_CHARS = "'’-"


def tokenize(text: str) -> list[str]:
    """Split text into lowercase word tokens, preserving order."""
    tokens = []
    for run in _TOKEN_RUN.findall(text):
        token = run.strip(_EDGE_CHARS).replace("’", "'").lower()
        if token:
            tokens.append(token)
    return tokens
