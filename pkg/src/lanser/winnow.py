"""Winnowed k-gram fingerprinting for content-anchor matching.

Character k-grams are hashed with a 64-bit polynomial rolling hash using
the pinned constants below, then thinned by selecting the minimum hash in
each sliding window of w consecutive k-grams (rightmost wins ties). The
constants are part of the reproducibility contract and are echoed into
resolution metadata.
"""

from __future__ import annotations

HASH_BASE = 257
HASH_MODULUS = (1 << 61) - 1

HASH_SPEC = f"poly64(base={HASH_BASE},mod=2^61-1)"


def kgram_hashes(text: str, k: int) -> list[tuple[int, int]]:
    """(offset, hash) for every k-gram of *text*, in offset order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(text)
    if n < k:
        return []
    out = []
    value = 0
    for ch in text[:k]:
        value = (value * HASH_BASE + ord(ch)) % HASH_MODULUS
    out.append((0, value))
    lead = pow(HASH_BASE, k - 1, HASH_MODULUS)
    for i in range(1, n - k + 1):
        value = (
            (value - ord(text[i - 1]) * lead) * HASH_BASE + ord(text[i + k - 1])
        ) % HASH_MODULUS
        out.append((i, value))
    return out


def winnow(hashes: list[tuple[int, int]], w: int) -> list[tuple[int, int]]:
    """Select the window minima of a k-gram hash sequence.

    In each window of w consecutive hashes the minimum is kept, breaking
    ties toward the rightmost occurrence; a selection is recorded once per
    position. With fewer than w hashes the global minimum is kept.
    """
    if w < 1:
        raise ValueError("w must be >= 1")
    if not hashes:
        return []
    selected: list[tuple[int, int]] = []
    if len(hashes) <= w:
        best = min(range(len(hashes)), key=lambda i: (hashes[i][1], -i))
        return [hashes[best]]
    last_pos = -1
    for start in range(len(hashes) - w + 1):
        window = hashes[start : start + w]
        best = min(range(w), key=lambda i: (window[i][1], -i))
        pos, value = window[best]
        if pos != last_pos:
            selected.append((pos, value))
            last_pos = pos
    return selected


def fingerprint(text: str, k: int, w: int) -> list[tuple[int, int]]:
    """Winnowed fingerprints of *text* as (offset, hash) pairs."""
    return winnow(kgram_hashes(text, k), w)
