"""Sequential LSB-replacement baseline for uncompressed BMP files.

Layout: a 32-bit big-endian payload length followed by the payload,
each bit (MSB first) written into the least significant bit of one
pixel byte, walking upward from the pixel array offset.  Row padding
bytes are used like any other pixel byte.
"""
import struct
from dataclasses import dataclass

import numpy as np

from .container import FormatKind, analyze
from .errors import CapacityExceeded, MalformedContainer, NotABmp, TruncatedRecord

BMP_MIN_HEADER = 54
LENGTH_BITS = 32


@dataclass(frozen=True)
class BmpPixelRegion:
    data_offset: int
    pixel_byte_count: int

    @property
    def end(self) -> int:
        return self.data_offset + self.pixel_byte_count

    @property
    def capacity_bits(self) -> int:
        return self.pixel_byte_count


def pixel_region(bmp: bytes) -> BmpPixelRegion:
    info = analyze(bmp)
    if info.format is not FormatKind.BMP:
        raise NotABmp(f"expected a BMP file, got {info.format.value}")
    if info.image_end < BMP_MIN_HEADER:
        raise MalformedContainer(f"BMP shorter than its {BMP_MIN_HEADER}-byte headers")
    (offset,) = struct.unpack_from("<I", bmp, 10)
    if not BMP_MIN_HEADER <= offset <= info.image_end:
        raise MalformedContainer(f"BMP pixel offset {offset} outside [{BMP_MIN_HEADER}, {info.image_end}]")
    return BmpPixelRegion(offset, info.image_end - offset)


def capacity(bmp: bytes) -> int:
    """Largest payload, in bytes, that :func:`lsb_embed` accepts."""
    return max(0, (pixel_region(bmp).pixel_byte_count - LENGTH_BITS) // 8)


def lsb_embed(cover: bytes, payload: bytes) -> bytes:
    cover = bytes(cover)
    payload = bytes(payload)
    region = pixel_region(cover)
    needed = LENGTH_BITS + 8 * len(payload)
    if needed > region.pixel_byte_count:
        raise CapacityExceeded(
            f"payload needs {needed} pixel bytes, cover has {region.pixel_byte_count}"
        )
    bits = np.unpackbits(np.frombuffer(struct.pack(">I", len(payload)) + payload, dtype=np.uint8))
    out = np.frombuffer(cover, dtype=np.uint8).copy()
    lo = region.data_offset
    out[lo:lo + needed] = (out[lo:lo + needed] & 0xFE) | bits
    return out.tobytes()


def lsb_extract(stego: bytes) -> bytes:
    stego = bytes(stego)
    region = pixel_region(stego)
    if region.pixel_byte_count < LENGTH_BITS:
        raise TruncatedRecord(f"BMP has {region.pixel_byte_count} pixel bytes, need {LENGTH_BITS} for the length")
    lsbs = np.frombuffer(stego, dtype=np.uint8, count=region.pixel_byte_count, offset=region.data_offset) & 1
    (length,) = struct.unpack(">I", np.packbits(lsbs[:LENGTH_BITS]).tobytes())
    needed = LENGTH_BITS + 8 * length
    if needed > region.pixel_byte_count:
        raise TruncatedRecord(f"declared length {length} exceeds LSB capacity")
    return np.packbits(lsbs[LENGTH_BITS:needed]).tobytes()


@dataclass(frozen=True)
class OverwriteReport:
    first: bytes
    second: bytes
    extracted: bytes

    @property
    def second_recovered(self) -> bool:
        return self.extracted == self.second

    @property
    def first_recovered(self) -> bool:
        return self.extracted == self.first


def lsb_overwrite_demo(cover: bytes, first: bytes, second: bytes) -> OverwriteReport:
    """Hide ``first``, then ``second`` in the same cover, and read back.

    Unlike appended records, the second LSB embed destroys the first.
    """
    stego = lsb_embed(lsb_embed(cover, first), second)
    return OverwriteReport(bytes(first), bytes(second), lsb_extract(stego))
