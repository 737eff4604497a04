"""Frequency-analysis key recovery and trailer detection.

A shift cipher rotates the byte histogram, so the most frequent
ciphertext byte minus the expected most frequent plaintext byte
(ASCII space for ordinary English) gives the key.
"""
from dataclasses import dataclass, field

import numpy as np

from .container import FormatKind, analyze
from .errors import EmptyInput
from .iqm import histogram

DEFAULT_MODAL_BYTE = 0x20
DEFAULT_TOP = 5


@dataclass(frozen=True)
class KeyGuess:
    key: int
    score: float
    rank: int


def recover_key(ciphertext: bytes, modal_byte: int = DEFAULT_MODAL_BYTE, top: int = None) -> list:
    """Rank every key by the frequency of the ciphertext byte it implies.

    Returns all 256 candidates (or the first ``top``) sorted by descending
    score, ties broken by ascending key.
    """
    ciphertext = bytes(ciphertext)
    if not ciphertext:
        raise EmptyInput("cannot analyse an empty ciphertext")
    if not 0 <= modal_byte <= 255:
        raise ValueError(f"modal byte must be in [0, 255], got {modal_byte}")
    scores = histogram(ciphertext) / len(ciphertext)
    # score of key k is the frequency of ciphertext byte (modal + k) % 256
    by_key = np.roll(scores, -modal_byte)
    order = np.lexsort((np.arange(256), -by_key))
    if top is not None:
        order = order[:max(top, DEFAULT_TOP)]
    return [KeyGuess(int(k), float(by_key[k]), rank) for rank, k in enumerate(order, 1)]


def byte_entropy(data: bytes) -> float:
    """Shannon entropy of the byte histogram in bits per byte."""
    counts = histogram(data)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


@dataclass
class DetectionReport:
    format: FormatKind
    image_end: int
    trailer_length: int
    entropy: float = None
    candidates: list = field(default_factory=list)

    @property
    def trailer_present(self) -> bool:
        return self.trailer_length > 0

    def items(self):
        rows = [
            ("format", self.format.value),
            ("image_end", self.image_end),
            ("trailer_length", self.trailer_length),
            ("trailer_present", self.trailer_present),
        ]
        if self.trailer_present:
            rows.append(("entropy_bits_per_byte", round(self.entropy, 6)))
            for g in self.candidates:
                rows.append((f"key_guess_{g.rank}", f"{g.key} score={g.score:.6f}"))
        return rows


def detect_trailer_payload(data: bytes, modal_byte: int = DEFAULT_MODAL_BYTE, top: int = DEFAULT_TOP) -> DetectionReport:
    """What an observer without the original image can learn from a file."""
    data = bytes(data)
    info = analyze(data)
    report = DetectionReport(info.format, info.image_end, info.trailer_length)
    if info.trailer_length:
        trailer = data[info.image_end:]
        report.entropy = byte_entropy(trailer)
        report.candidates = recover_key(trailer, modal_byte, top)
    return report
