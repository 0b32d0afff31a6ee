"""Deterministic random streams.

All randomness in the package flows through Philox counter-based generators
keyed by a BLAKE2 hash of a 64-bit master seed plus a tuple of labels, so a
(seed, labels) pair names the same stream on every run.
"""

import hashlib

import numpy as np


def derive_key(seed, *labels):
    """128-bit Philox key derived from a master seed and a label tuple."""
    h = hashlib.blake2b(digest_size=16)
    h.update((int(seed) & (2**64 - 1)).to_bytes(8, "little"))
    for label in labels:
        if isinstance(label, bytes):
            h.update(b"b")
            h.update(label)
        elif isinstance(label, str):
            h.update(b"s")
            h.update(label.encode("utf-8"))
        elif isinstance(label, (bool, int, np.integer)):
            h.update(b"i")
            h.update(int(label).to_bytes(16, "little", signed=True))
        elif isinstance(label, (float, np.floating)):
            h.update(b"f")
            h.update(np.float64(label).tobytes())
        else:
            raise TypeError(f"cannot derive a stream from label type {type(label)!r}")
        h.update(b"\x00")
    return int.from_bytes(h.digest(), "little")


def stream(seed, *labels):
    """NumPy Generator on its own Philox stream for (seed, *labels)."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *labels)))


def sub_seed(seed, *labels):
    """63-bit integer seed for handing to code that wants a plain seed."""
    return derive_key(seed, *labels) & (2**63 - 1)
