"""Format sniffing and logical end-of-image detection.

Appended data lives after the point where the image format's own
structure terminates: the IEND chunk for PNG, the EOI marker for JPEG,
the trailer byte for GIF, and the header's size field for BMP.  Files
with no recognised magic are treated as RAW, whose image end is simply
the file length.
"""
import enum
import struct
from dataclasses import dataclass

from .errors import MalformedContainer

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
JPEG_MAGIC = b"\xff\xd8\xff"
GIF_MAGICS = (b"GIF87a", b"GIF89a")
BMP_MAGIC = b"BM"


class FormatKind(enum.Enum):
    PNG = "png"
    JPEG = "jpeg"
    GIF = "gif"
    BMP = "bmp"
    RAW = "raw"


@dataclass(frozen=True)
class ContainerInfo:
    format: FormatKind
    image_end: int
    trailer_length: int

    @property
    def file_length(self) -> int:
        return self.image_end + self.trailer_length


def sniff_format(data: bytes) -> FormatKind:
    head = bytes(data[:8])
    if head.startswith(PNG_SIGNATURE):
        return FormatKind.PNG
    if head.startswith(JPEG_MAGIC):
        return FormatKind.JPEG
    if head[:6] in GIF_MAGICS:
        return FormatKind.GIF
    if head.startswith(BMP_MAGIC):
        return FormatKind.BMP
    return FormatKind.RAW


def _png_end(data: bytes) -> int:
    pos = len(PNG_SIGNATURE)
    n = len(data)
    while True:
        if pos + 8 > n:
            raise MalformedContainer(f"PNG chunk header truncated at offset {pos}")
        length, ctype = struct.unpack_from(">I4s", data, pos)
        end = pos + 12 + length
        if end > n:
            raise MalformedContainer(f"PNG chunk {ctype!r} at offset {pos} runs past end of file")
        if ctype == b"IEND":
            return end
        pos = end


# markers with no length field
_JPEG_STANDALONE = frozenset([0x01, *range(0xD0, 0xD8)])


def _jpeg_skip_scan(data: bytes, pos: int) -> int:
    """Return the offset of the first real marker in entropy-coded data."""
    n = len(data)
    while True:
        pos = data.find(b"\xff", pos)
        if pos < 0 or pos + 1 >= n:
            raise MalformedContainer("JPEG scan data ends without a marker")
        nxt = data[pos + 1]
        if nxt == 0x00 or 0xD0 <= nxt <= 0xD7:
            pos += 2
        elif nxt == 0xFF:
            # fill byte; the marker starts at the next 0xFF
            pos += 1
        else:
            return pos


def _jpeg_end(data: bytes) -> int:
    n = len(data)
    pos = 2
    while True:
        if pos >= n:
            raise MalformedContainer("JPEG ends without an EOI marker")
        if data[pos] != 0xFF:
            raise MalformedContainer(f"expected JPEG marker at offset {pos}, found 0x{data[pos]:02x}")
        while pos < n and data[pos] == 0xFF:
            pos += 1
        if pos >= n:
            raise MalformedContainer("JPEG ends inside a marker")
        marker = data[pos]
        pos += 1
        if marker == 0xD9:
            return pos
        if marker == 0x00:
            raise MalformedContainer(f"stuffed byte outside scan data at offset {pos - 2}")
        if marker in _JPEG_STANDALONE:
            continue
        if pos + 2 > n:
            raise MalformedContainer(f"JPEG segment 0xFF{marker:02X} length truncated")
        (seglen,) = struct.unpack_from(">H", data, pos)
        if seglen < 2 or pos + seglen > n:
            raise MalformedContainer(f"JPEG segment 0xFF{marker:02X} at offset {pos - 2} runs past end of file")
        pos += seglen
        if marker == 0xDA:
            pos = _jpeg_skip_scan(data, pos)


def _gif_skip_subblocks(data: bytes, pos: int) -> int:
    n = len(data)
    while True:
        if pos >= n:
            raise MalformedContainer("GIF sub-block chain truncated")
        size = data[pos]
        pos += 1
        if size == 0:
            return pos
        pos += size
        if pos > n:
            raise MalformedContainer("GIF sub-block runs past end of file")


def _gif_end(data: bytes) -> int:
    n = len(data)
    if n < 13:
        raise MalformedContainer("GIF logical screen descriptor truncated")
    packed = data[10]
    pos = 13
    if packed & 0x80:
        pos += 3 * (1 << ((packed & 0x07) + 1))
    while True:
        if pos >= n:
            raise MalformedContainer("GIF ends without a trailer byte")
        block = data[pos]
        if block == 0x3B:
            return pos + 1
        if block == 0x21:
            if pos + 2 > n:
                raise MalformedContainer("GIF extension label truncated")
            pos = _gif_skip_subblocks(data, pos + 2)
        elif block == 0x2C:
            if pos + 10 > n:
                raise MalformedContainer("GIF image descriptor truncated")
            local = data[pos + 9]
            pos += 10
            if local & 0x80:
                pos += 3 * (1 << ((local & 0x07) + 1))
            # LZW minimum code size byte, then the data sub-blocks
            pos = _gif_skip_subblocks(data, pos + 1)
        else:
            raise MalformedContainer(f"unknown GIF block 0x{block:02x} at offset {pos}")


def _bmp_end(data: bytes) -> int:
    if len(data) < 6:
        raise MalformedContainer("BMP header truncated")
    (size,) = struct.unpack_from("<I", data, 2)
    if size < 14:
        raise MalformedContainer(f"BMP size field {size} is smaller than the file header")
    if size > len(data):
        raise MalformedContainer(f"BMP size field {size} exceeds file length {len(data)}")
    return size


_END_FINDERS = {
    FormatKind.PNG: _png_end,
    FormatKind.JPEG: _jpeg_end,
    FormatKind.GIF: _gif_end,
    FormatKind.BMP: _bmp_end,
    FormatKind.RAW: len,
}


def logical_image_end(data: bytes, format: FormatKind = None) -> int:
    """Byte offset just past the image's own structure.

    Raises :class:`MalformedContainer` if the structure walk runs off the
    buffer or the terminator is missing.
    """
    data = bytes(data)
    if format is None:
        format = sniff_format(data)
    return _END_FINDERS[format](data)


def analyze(data: bytes) -> ContainerInfo:
    data = bytes(data)
    fmt = sniff_format(data)
    end = logical_image_end(data, fmt)
    return ContainerInfo(fmt, end, len(data) - end)


def scan_origin(info: ContainerInfo) -> int:
    """Where marker scanning starts by default.

    RAW has no structural end, so its whole body is searched.
    """
    return 0 if info.format is FormatKind.RAW else info.image_end
