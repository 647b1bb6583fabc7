"""Word tokenization and edit distance for comparing graph content with sentences."""

from __future__ import annotations

import re

# A token is a maximal run of letters/digits/apostrophes/hyphens. Leading and
# trailing apostrophes/hyphens are punctuation, not token content.
_TOKEN_RUN = re.compile(r"(?:[^\W_]|['’-])+", re.UNICODE)
_EDGE_CHARS = "'’-"


def tokenize(text: str) -> list[str]:
    """Split text into lowercase word tokens, preserving order.

    Hyphens and apostrophes are kept when internal ("metro-goldwyn-mayer",
    "don't") and stripped at token edges. Curly apostrophes are normalized
    to straight ones. Tokens that reduce to nothing are dropped.
    """
    tokens = []
    for run in _TOKEN_RUN.findall(text):
        token = run.strip(_EDGE_CHARS).replace("’", "'").lower()
        if token:
            tokens.append(token)
    return tokens


def tokenize_with_spans(text: str) -> list[tuple[str, int, int]]:
    """Like tokenize() but each token carries its (start, end) span in text.

    The span covers the stripped token, excluding edge apostrophes/hyphens,
    so text[start:end] is the original (un-lowercased) form of the token.
    """
    out = []
    for m in _TOKEN_RUN.finditer(text):
        run = m.group()
        start, end = m.start(), m.end()
        lead = len(run) - len(run.lstrip(_EDGE_CHARS))
        trail = len(run) - len(run.rstrip(_EDGE_CHARS))
        token = run[lead : len(run) - trail].replace("’", "'").lower()
        if token:
            out.append((token, start + lead, end - trail))
    return out


def levenshtein(a: str, b: str) -> int:
    """Case-insensitive Levenshtein edit distance between two strings."""
    a = a.lower()
    b = b.lower()
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]
