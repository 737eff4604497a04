"""Append-after-marker image steganography.

Payloads are shift-encrypted and appended after the logical end of an
image file behind a user-chosen marker, leaving every image byte intact.
"""
from .analysis import DetectionReport, KeyGuess, byte_entropy, detect_trailer_payload, recover_key
from .cipher import StegoKey, shift_decrypt, shift_encrypt, validate_key
from .container import ContainerInfo, FormatKind, analyze, logical_image_end, sniff_format
from .errors import *  # noqa: F401,F403
from .framing import (
    FramingMode,
    PayloadRecord,
    ScanScope,
    embed,
    extract,
    list_trailer,
    stream_extract,
)
from .iqm import IQMReport, compare_report, error_histogram, histogram, mse, psnr
from .lsb import BmpPixelRegion, lsb_embed, lsb_extract, lsb_overwrite_demo

__version__ = "0.1.0"
