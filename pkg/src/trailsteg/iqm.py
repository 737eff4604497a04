"""Image quality measures for cover/stego pairs."""
import math
from dataclasses import dataclass, field

import numpy as np

from .container import FormatKind, analyze
from .errors import EmptyInput, FormatMismatch, LengthMismatch
from . import lsb

MAX_SAMPLE = 255


def _as_array(data) -> np.ndarray:
    if isinstance(data, np.ndarray):
        return data.astype(np.uint8, copy=False).ravel()
    return np.frombuffer(bytes(data), dtype=np.uint8)


def histogram(pixels) -> np.ndarray:
    """256-bin count of byte values."""
    return np.bincount(_as_array(pixels), minlength=256).astype(np.int64)


def _pair(a, b):
    a, b = _as_array(a), _as_array(b)
    if a.size != b.size:
        raise LengthMismatch(f"length mismatch: {a.size} vs {b.size}")
    return a, b


def error_histogram(a, b) -> np.ndarray:
    """Histogram of absolute per-position differences."""
    a, b = _pair(a, b)
    diff = np.abs(a.astype(np.int16) - b.astype(np.int16))
    return np.bincount(diff.ravel(), minlength=256).astype(np.int64)


def mse(a, b) -> float:
    a, b = _pair(a, b)
    if a.size == 0:
        raise EmptyInput("MSE of empty inputs is undefined")
    diff = a.astype(np.int64) - b.astype(np.int64)
    return float(np.dot(diff, diff)) / a.size


def psnr_from_mse(value: float) -> float:
    if value == 0:
        return math.inf
    return 10.0 * math.log10(MAX_SAMPLE ** 2 / value)


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical inputs."""
    return psnr_from_mse(mse(a, b))


@dataclass
class IQMReport:
    format: FormatKind
    region_start: int
    region_end: int
    cover_hist: np.ndarray = field(repr=False)
    stego_hist: np.ndarray = field(repr=False)
    error_hist: np.ndarray = field(repr=False)
    mse: float
    psnr: float
    byte_region_identical: bool

    @property
    def histograms_identical(self) -> bool:
        return bool(np.array_equal(self.cover_hist, self.stego_hist))

    def items(self):
        """Scalar metrics as ``(name, value)`` pairs."""
        return [
            ("format", self.format.value),
            ("region_start", self.region_start),
            ("region_end", self.region_end),
            ("mse", self.mse),
            ("psnr", self.psnr),
            ("byte_region_identical", self.byte_region_identical),
            ("histograms_identical", self.histograms_identical),
            ("error_bin0", int(self.error_hist[0])),
        ]


def _region(data: bytes, info, cover_end: int):
    if info.format is FormatKind.BMP:
        region = lsb.pixel_region(data)
        return region.data_offset, region.end
    if info.format is FormatKind.RAW:
        # no structural end; the cover's length delimits the image
        return 0, cover_end
    return 0, info.image_end


def compare_report(cover: bytes, stego: bytes) -> IQMReport:
    """Compare the image regions of a cover and a stego file.

    BMP compares pixel arrays; RAW compares the cover's full length
    against the same prefix of the stego file; PNG, JPEG and GIF compare
    the bytes up to the logical image end, whose identity certifies
    identical decoded pixels.
    """
    cover, stego = bytes(cover), bytes(stego)
    cinfo, sinfo = analyze(cover), analyze(stego)
    if cinfo.format is not sinfo.format:
        raise FormatMismatch(f"cover is {cinfo.format.value}, stego is {sinfo.format.value}")
    c0, c1 = _region(cover, cinfo, cinfo.image_end)
    s0, s1 = _region(stego, sinfo, cinfo.image_end)
    if s1 > len(stego):
        raise LengthMismatch(f"stego file is shorter than the cover image ({len(stego)} < {s1})")
    a, b = _pair(cover[c0:c1], stego[s0:s1])
    err = error_histogram(a, b)
    value = mse(a, b) if a.size else 0.0
    return IQMReport(
        format=cinfo.format,
        region_start=c0,
        region_end=c1,
        cover_hist=histogram(a),
        stego_hist=histogram(b),
        error_hist=err,
        mse=value,
        psnr=psnr_from_mse(value),
        byte_region_identical=bool(np.array_equal(a, b)),
    )


def histogram_csv(hist) -> str:
    return ",".join(str(int(c)) for c in hist)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def render(items, style="text") -> str:
    """Render ``(name, value)`` pairs as ``name: value`` or ``name=value`` lines."""
    sep = "=" if style == "kv" else ": "
    return "".join(f"{name}{sep}{_fmt(value)}\n" for name, value in items)


def render_report(report: IQMReport, style="text", histograms=False) -> str:
    items = list(report.items())
    if histograms:
        items += [
            ("cover_hist", histogram_csv(report.cover_hist)),
            ("stego_hist", histogram_csv(report.stego_hist)),
            ("error_hist", histogram_csv(report.error_hist)),
        ]
    return render(items, style)
