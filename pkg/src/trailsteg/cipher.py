"""Byte-wise shift (Caesar) cipher.

Every byte is rotated modulo 256, so letters behave as the classic
letter shift as long as no wraparound occurs, and arbitrary binary
payloads are supported.
"""
from dataclasses import dataclass

from .errors import KeyOutOfRange

MIN_EMBED_KEY = 26
MAX_KEY = 255


@dataclass(frozen=True)
class StegoKey:
    value: int

    def __post_init__(self):
        if not isinstance(self.value, int) or not 0 <= self.value <= MAX_KEY:
            raise KeyOutOfRange(f"key must be an integer in [0, {MAX_KEY}], got {self.value!r}")

    @property
    def embedding_grade(self) -> bool:
        return self.value >= MIN_EMBED_KEY

    def __int__(self):
        return self.value


def validate_key(raw: int) -> StegoKey:
    """Return an embedding-grade key or raise :class:`KeyOutOfRange`.

    Keys below 26 leave some letters inside the alphabet band after
    shifting; keys above 255 have no distinct meaning mod 256.
    """
    if isinstance(raw, StegoKey):
        raw = raw.value
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise KeyOutOfRange(f"key must be an integer, got {raw!r}")
    if not MIN_EMBED_KEY <= raw <= MAX_KEY:
        raise KeyOutOfRange(
            f"key must be between {MIN_EMBED_KEY} and {MAX_KEY} for embedding, got {raw}"
        )
    return StegoKey(raw)


def key_value(key) -> int:
    """Coerce a StegoKey or int to a shift amount in [0, 255]."""
    if isinstance(key, StegoKey):
        return key.value
    return StegoKey(key).value


_TABLES = {}


def _table(shift: int) -> bytes:
    table = _TABLES.get(shift)
    if table is None:
        table = bytes((b + shift) & 0xFF for b in range(256))
        _TABLES[shift] = table
    return table


def shift_encrypt(plain: bytes, key) -> bytes:
    """Map every byte ``b`` to ``(b + key) % 256``."""
    return bytes(plain).translate(_table(key_value(key)))


def shift_decrypt(cipher: bytes, key) -> bytes:
    """Inverse of :func:`shift_encrypt`."""
    return bytes(cipher).translate(_table(-key_value(key) & 0xFF))
