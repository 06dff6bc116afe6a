"""Counter-based SplitMix64 streams.

Every random word is a pure function of ``(key, counter)``::

    word(key, c) = mix64(key + (c + 1) * GOLDEN)   (mod 2**64)

which is exactly the ``c``-th output of a SplitMix64 generator whose state
starts at ``key``.  Because a word never depends on the words drawn before
it, Monte Carlo work can be split into chunks in any way (or vectorised
across replicates) and still reproduce the same sequence on every platform.

Bounded integers use Lemire's multiply-shift on the upper 32 bits with
rejection, so the shuffle built on top is exactly uniform.  A rejected draw
at counter ``c`` is retried with the same counter under the derived key
``retry_key(key, attempt)``.

Counter layout for permutation replicate ``m`` of size ``n``: the draw that
picks the partner of position ``i`` (``i = n-1 .. 1``) uses counter
``m * (n - 1) + (n - 1 - i)``.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB
RETRY = 0xD1B54A32D192ED03
MASK32 = 0xFFFFFFFF


def mix64(z: int) -> int:
    """SplitMix64 finaliser on a Python int (result in ``[0, 2**64)``)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, *labels: int) -> int:
    """Stream key for a non-negative seed and optional integer labels.

    Labels let independent work items (dataset index, cell, ...) own
    disjoint streams derived from one user seed.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    key = mix64(seed + GOLDEN)
    for label in labels:
        key = mix64((key ^ (int(label) & MASK64)) + GOLDEN)
    return key


def retry_key(key: int, attempt: int) -> int:
    return mix64(key ^ ((attempt * RETRY) & MASK64))


def word(key: int, counter: int) -> int:
    return mix64(key + (counter + 1) * GOLDEN)


def bounded(key: int, counter: int, bound: int) -> int:
    """Uniform integer in ``[0, bound)``; scalar reference implementation."""
    if not 0 < bound <= MASK32:
        raise ValueError("bound must be in [1, 2**32)")
    m = (word(key, counter) >> 32) * bound
    low = m & MASK32
    if low < bound:
        threshold = (1 << 32) % bound
        attempt = 1
        while low < threshold:
            m = (word(retry_key(key, attempt), counter) >> 32) * bound
            low = m & MASK32
            attempt += 1
    return m >> 32


# -- vectorised versions (uint64 arithmetic wraps modulo 2**64) --------------

def mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(MIX_1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(MIX_2)
    z ^= z >> np.uint64(31)
    return z


def word_array(key: int, counters: np.ndarray) -> np.ndarray:
    c = counters.astype(np.uint64) + np.uint64(1)
    return mix64_array(np.uint64(key) + c * np.uint64(GOLDEN))


def bounded_array(key: int, counters: np.ndarray, bound: int) -> np.ndarray:
    """Vectorised :func:`bounded` for one bound and many counters."""
    b = np.uint64(bound)
    m = (word_array(key, counters) >> np.uint64(32)) * b
    low = m & np.uint64(MASK32)
    threshold = np.uint64((1 << 32) % bound)
    reject = low < threshold
    attempt = 1
    while reject.any():
        idx = np.flatnonzero(reject)
        m_new = (word_array(retry_key(key, attempt), counters[idx]) >> np.uint64(32)) * b
        m[idx] = m_new
        reject[idx] = (m_new & np.uint64(MASK32)) < threshold
        attempt += 1
    return (m >> np.uint64(32)).astype(np.int64)
