"""Marker-delimited payload records appended after the image.

Two wire layouts are supported::

    PAPER_COMPAT     marker | ciphertext ...to EOF
    LENGTH_PREFIXED  marker | 0x01 | u64 big-endian length | ciphertext

Records concatenate, so several payloads can share one cover as long as
their markers differ.
"""
import enum
import struct
from dataclasses import dataclass

from .cipher import key_value, shift_decrypt, shift_encrypt, validate_key
from .container import analyze, scan_origin
from .errors import (
    InvalidMarker,
    MarkerCollision,
    NoDataPresent,
    TruncatedRecord,
    UnsupportedRecordVersion,
)

MAX_MARKER_LENGTH = 64
RECORD_VERSION = 0x01
_LENGTH = struct.Struct(">Q")
HEADER_LENGTH = 1 + _LENGTH.size


class FramingMode(enum.Enum):
    PAPER_COMPAT = "paper"
    LENGTH_PREFIXED = "length"


class ScanScope(enum.Enum):
    TRAILER = "trailer"
    FULL = "full"


def check_marker(marker) -> bytes:
    if isinstance(marker, str):
        marker = marker.encode("utf-8")
    marker = bytes(marker)
    if not 1 <= len(marker) <= MAX_MARKER_LENGTH:
        raise InvalidMarker(f"marker must be 1-{MAX_MARKER_LENGTH} bytes, got {len(marker)}")
    return marker


@dataclass(frozen=True)
class PayloadRecord:
    marker: bytes
    mode: FramingMode
    ciphertext: bytes

    def to_bytes(self) -> bytes:
        if self.mode is FramingMode.PAPER_COMPAT:
            return self.marker + self.ciphertext
        return (
            self.marker
            + bytes([RECORD_VERSION])
            + _LENGTH.pack(len(self.ciphertext))
            + self.ciphertext
        )

    def __len__(self):
        return len(self.to_bytes())


def embed(cover: bytes, payload: bytes, key, marker, mode=FramingMode.LENGTH_PREFIXED) -> bytes:
    """Append an encrypted payload record to ``cover``.

    The cover bytes are never touched; the output is ``cover`` followed by
    the record.  The marker must not already be findable in the scanned
    region, including a match that would straddle the old end of file.
    """
    cover = bytes(cover)
    k = validate_key(key)
    marker = check_marker(marker)
    mode = FramingMode(mode)
    origin = scan_origin(analyze(cover))
    hit = (cover + marker).find(marker, origin)
    if hit < len(cover):
        raise MarkerCollision(f"marker already occurs at offset {hit}; extraction would be ambiguous")
    record = PayloadRecord(marker, mode, shift_encrypt(payload, k))
    return cover + record.to_bytes()


def _ciphertext_after(data: bytes, body: int, mode: FramingMode) -> bytes:
    if mode is FramingMode.PAPER_COMPAT:
        return data[body:]
    if body >= len(data):
        raise TruncatedRecord("record ends before its version byte")
    if data[body] != RECORD_VERSION:
        raise UnsupportedRecordVersion(f"unsupported record version 0x{data[body]:02x}")
    if body + HEADER_LENGTH > len(data):
        raise TruncatedRecord("record ends inside its length field")
    (length,) = _LENGTH.unpack_from(data, body + 1)
    start = body + HEADER_LENGTH
    if length > len(data) - start:
        raise TruncatedRecord(
            f"record declares {length} bytes but only {len(data) - start} remain"
        )
    return data[start:start + length]


def extract(stego: bytes, key, marker, mode=FramingMode.LENGTH_PREFIXED, scan=ScanScope.TRAILER) -> bytes:
    """Find the first record tagged with ``marker`` and decrypt it.

    With ``scan=TRAILER`` the search starts at the logical image end
    (RAW files are searched whole); ``FULL`` searches from byte 0.
    """
    stego = bytes(stego)
    k = key_value(key)
    marker = check_marker(marker)
    mode = FramingMode(mode)
    origin = 0 if ScanScope(scan) is ScanScope.FULL else scan_origin(analyze(stego))
    hit = stego.find(marker, origin)
    if hit < 0:
        raise NoDataPresent()
    return shift_decrypt(_ciphertext_after(stego, hit + len(marker), mode), k)


def _chunks(stream):
    read = getattr(stream, "read", None)
    if read is None:
        yield from stream
        return
    while True:
        chunk = read(65536)
        if not chunk:
            return
        yield chunk


def stream_extract(stream, key, marker, mode=FramingMode.LENGTH_PREFIXED) -> bytes:
    """One forward pass over a byte stream, equivalent to a full-scan extract.

    ``stream`` is a binary file object or any iterable of byte chunks.
    Only the last ``len(marker) - 1`` bytes are retained while searching;
    once the marker matches, the remaining bytes are decrypted as they
    arrive.
    """
    k = key_value(key)
    marker = check_marker(marker)
    mode = FramingMode(mode)
    chunks = _chunks(stream)
    keep = len(marker) - 1
    window = b""
    rest = None
    for chunk in chunks:
        window += bytes(chunk)
        hit = window.find(marker)
        if hit >= 0:
            rest = window[hit + len(marker):]
            break
        window = window[-keep:] if keep else b""
    if rest is None:
        raise NoDataPresent()

    if mode is FramingMode.PAPER_COMPAT:
        out = [shift_decrypt(rest, k)]
        out.extend(shift_decrypt(bytes(c), k) for c in chunks)
        return b"".join(out)

    header = bytearray(rest)
    while len(header) < HEADER_LENGTH:
        chunk = next(chunks, None)
        if chunk is None:
            break
        header += chunk
    body = bytes(header[HEADER_LENGTH:])
    header = bytes(header[:HEADER_LENGTH])
    if not header:
        raise TruncatedRecord("record ends before its version byte")
    if header[0] != RECORD_VERSION:
        raise UnsupportedRecordVersion(f"unsupported record version 0x{header[0]:02x}")
    if len(header) < HEADER_LENGTH:
        raise TruncatedRecord("record ends inside its length field")
    (length,) = _LENGTH.unpack_from(header, 1)
    parts = [body[:length]]
    have = len(parts[0])
    while have < length:
        chunk = next(chunks, None)
        if chunk is None:
            raise TruncatedRecord(f"record declares {length} bytes but only {have} remain")
        piece = bytes(chunk[:length - have])
        parts.append(piece)
        have += len(piece)
    return shift_decrypt(b"".join(parts), k)


def list_trailer(stego: bytes):
    """Return ``(ContainerInfo, trailer_bytes)`` for a file."""
    stego = bytes(stego)
    info = analyze(stego)
    return info, stego[info.image_end:]

