"""Text normalization and token-overlap scoring used for sentence matching.

Normalization is deliberately resource-free (lowercase, drop ASCII
punctuation, collapse whitespace) so matching is reproducible anywhere.
"""

from __future__ import annotations

import re
import string
from collections import Counter

_WS = re.compile(r"\s+")
# Deleting (not space-replacing) punctuation keeps contractions and slot
# names as single tokens: "mom's" -> "moms", "Someone_A" -> "someonea".
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def collapse_whitespace(text: str) -> str:
    return _WS.sub(" ", text).strip()


def normalize(text: str) -> str:
    """Lowercase, strip ASCII punctuation, collapse whitespace."""
    return collapse_whitespace(text.lower().translate(_PUNCT_TABLE))


def match_tokens(text: str) -> list[str]:
    """Unigrams of the normalized text."""
    return normalize(text).split()


def token_f1(a: str, b: str) -> float:
    """Unigram F1 over normalized tokens, with multiset counts.

    Returns 1.0 when both sides normalize to the same (possibly empty) token
    bag and 0.0 when exactly one side is empty.
    """
    ta = Counter(match_tokens(a))
    tb = Counter(match_tokens(b))
    na = sum(ta.values())
    nb = sum(tb.values())
    if na == 0 or nb == 0:
        return 1.0 if ta == tb else 0.0
    overlap = sum((ta & tb).values())
    if overlap == 0:
        return 0.0
    precision = overlap / na
    recall = overlap / nb
    return 2 * precision * recall / (precision + recall)
