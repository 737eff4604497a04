"""Command line interface.

Exit codes: 0 success, 1 no data present, 2 invalid input,
3 capacity or truncation errors.  Diagnostics go to stderr.
"""
import argparse
import os
import re
import sys

from . import analysis, framing, iqm, lsb
from .errors import InvalidInput, KeyOutOfRange, StegError

_ESCAPE = re.compile(rb"\\(x[0-9a-fA-F]{2}|\\)")


def parse_marker(text: str) -> bytes:
    r"""Turn ``SECRET`` or ``\x00\xffMK`` into marker bytes.

    ``\xNN`` inserts a raw byte and ``\\`` a literal backslash; any other
    text is UTF-8 encoded.
    """
    raw = text.encode("utf-8") if isinstance(text, str) else bytes(text)

    def sub(m):
        tok = m.group(1)
        return b"\\" if tok == b"\\" else bytes([int(tok[1:], 16)])

    return framing.check_marker(_ESCAPE.sub(sub, raw))


def parse_key(text: str) -> int:
    try:
        return int(text, 10)
    except (TypeError, ValueError):
        raise KeyOutOfRange(f"key must be a decimal integer, got {text!r}") from None


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except FileNotFoundError:
        raise InvalidInput(f"invalid: file not found: {path}") from None
    except IsADirectoryError:
        raise InvalidInput(f"invalid: is a directory: {path}") from None


def _write(path, data: bytes, inputs=()):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    for src in inputs:
        if os.path.exists(path) and os.path.exists(src) and os.path.samefile(path, src):
            raise InvalidInput(f"invalid: output path {path} is the same file as input {src}")
    with open(path, "wb") as fh:
        fh.write(data)


def _write_text(path, text: str, inputs=()):
    _write(path, text.encode("utf-8"), inputs)


def cmd_hide(args):
    cover = _read(args.cover)
    data = _read(args.data)
    key = parse_key(args.key)
    stego = framing.embed(cover, data, key, parse_marker(args.marker), framing.FramingMode(args.mode))
    _write(args.out, stego, (args.cover, args.data))


def cmd_extract(args):
    stego = _read(args.stego)
    key = parse_key(args.key)
    plain = framing.extract(
        stego, key, parse_marker(args.marker),
        framing.FramingMode(args.mode), framing.ScanScope(args.scan),
    )
    _write(args.out, plain, (args.stego,))


def cmd_inspect(args):
    data = _read(args.stego)
    report = analysis.detect_trailer_payload(data, args.modal_byte, args.top)
    _, trailer = framing.list_trailer(data)
    sys.stdout.write(iqm.render(report.items(), args.format))
    if args.out:
        _write(args.out, trailer, (args.stego,))


def cmd_compare(args):
    report = iqm.compare_report(_read(args.cover), _read(args.stego))
    text = iqm.render_report(report, args.format, args.histograms)
    if args.out:
        _write_text(args.out, text, (args.cover, args.stego))
    else:
        sys.stdout.write(text)


def cmd_lsb_hide(args):
    cover = _read(args.cover)
    stego = lsb.lsb_embed(cover, _read(args.data))
    _write(args.out, stego, (args.cover, args.data))


def cmd_lsb_extract(args):
    _write(args.out, lsb.lsb_extract(_read(args.stego)), (args.stego,))


def cmd_crack(args):
    if args.stego:
        report = analysis.detect_trailer_payload(_read(args.stego), args.modal_byte, args.top)
        guesses = report.candidates
        if not guesses:
            sys.stderr.write("no trailer data to analyse\n")
    else:
        guesses = analysis.recover_key(_read(args.data), args.modal_byte, args.top)
    items = [(f"key_guess_{g.rank}", f"{g.key} score={g.score:.6f}") for g in guesses]
    sys.stdout.write(iqm.render(items, args.format))


def _byte(text):
    value = int(text, 0)
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError(f"must be in [0, 255], got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trailsteg",
        description="Hide encrypted data after the end of an image file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    def marker_opts(p):
        p.add_argument("--key", required=True, help="shift key, decimal (26-255 for hiding)")
        p.add_argument("--marker", required=True, help=r"marker text; \xNN for raw bytes")
        p.add_argument("--mode", choices=[m.value for m in framing.FramingMode], default="length")

    p = add("hide", cmd_hide, "append an encrypted payload after the image")
    p.add_argument("--cover", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    marker_opts(p)

    p = add("extract", cmd_extract, "recover a payload by marker and key")
    p.add_argument("--stego", required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--scan", choices=[s.value for s in framing.ScanScope], default="trailer")
    marker_opts(p)

    p = add("inspect", cmd_inspect, "report format, image end and trailer statistics")
    p.add_argument("--stego", "--cover", dest="stego", required=True)
    p.add_argument("--out", help="write the raw trailer bytes here")
    p.add_argument("--modal-byte", type=_byte, default=analysis.DEFAULT_MODAL_BYTE)
    p.add_argument("--top", type=int, default=analysis.DEFAULT_TOP)
    p.add_argument("--format", choices=["text", "kv"], default="text")

    p = add("compare", cmd_compare, "image quality measures for a cover/stego pair")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=["text", "kv"], default="text")
    p.add_argument("--histograms", action="store_true", help="include 256-bin histograms")

    p = add("lsb-hide", cmd_lsb_hide, "LSB-replacement baseline embed (BMP only)")
    p.add_argument("--cover", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)

    p = add("lsb-extract", cmd_lsb_extract, "LSB-replacement baseline extract (BMP only)")
    p.add_argument("--stego", required=True)
    p.add_argument("--out")

    p = add("crack", cmd_crack, "rank candidate shift keys by frequency analysis")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--stego", help="analyse the trailer of this image")
    src.add_argument("--data", help="analyse this whole file as ciphertext")
    p.add_argument("--modal-byte", type=_byte, default=analysis.DEFAULT_MODAL_BYTE)
    p.add_argument("--top", type=int, default=analysis.DEFAULT_TOP)
    p.add_argument("--format", choices=["text", "kv"], default="text")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StegError as exc:
        sys.stderr.write(f"trailsteg: {exc}\n")
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
