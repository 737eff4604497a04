import hashlib
import os
import subprocess
import sys

import pytest

import imagegen
from corpus import english_text
from trailsteg.cli import main, parse_marker
from trailsteg.errors import InvalidMarker


@pytest.fixture
def files(tmp_path, covers):
    paths = {}
    for name, data in covers.items():
        p = tmp_path / f"cover_{name}"
        p.write_bytes(data)
        paths[name] = p
    msg = tmp_path / "m.txt"
    msg.write_bytes(english_text(3000, 4))
    paths["msg"] = msg
    return paths


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_parse_marker():
    assert parse_marker("SECRET") == b"SECRET"
    assert parse_marker(r"\x00\xffMK") == b"\x00\xffMK"
    assert parse_marker(r"a\\x41") == b"a\\x41"
    assert parse_marker("ü") == "ü".encode()
    with pytest.raises(InvalidMarker):
        parse_marker("")


@pytest.mark.parametrize("mode", ["length", "paper"])
def test_hide_extract_round_trip(files, tmp_path, mode):
    before = digest(files["png"])
    out = tmp_path / "s.png"
    rec = tmp_path / "r.txt"
    assert main(["hide", "--cover", str(files["png"]), "--data", str(files["msg"]), "--key", "30",
                 "--marker", "SECRET", "--out", str(out), "--mode", mode]) == 0
    assert main(["extract", "--stego", str(out), "--key", "30", "--marker", "SECRET",
                 "--out", str(rec), "--mode", mode]) == 0
    assert rec.read_bytes() == files["msg"].read_bytes()
    assert digest(files["png"]) == before


def test_determinism(files, tmp_path):
    for i in range(2):
        assert main(["hide", "--cover", str(files["gif"]), "--data", str(files["msg"]), "--key", "31",
                     "--marker", r"\x01\x02", "--out", str(tmp_path / f"o{i}")]) == 0
    assert (tmp_path / "o0").read_bytes() == (tmp_path / "o1").read_bytes()


@pytest.mark.parametrize("name", sorted(imagegen.fixtures()))
def test_no_data_exit_1(files, capsys, name):
    assert main(["extract", "--stego", str(files[name]), "--key", "30", "--marker", "SECRET"]) == 1
    assert "no data present" in capsys.readouterr().err


def test_bad_key_exit_2(files, tmp_path, capsys):
    args = ["hide", "--cover", str(files["png"]), "--data", str(files["msg"]), "--marker", "MK",
            "--out", str(tmp_path / "o")]
    assert main(args + ["--key", "6"]) == 2
    assert "key must be between 26 and 255" in capsys.readouterr().err
    assert main(args + ["--key", "thirty"]) == 2
    assert not (tmp_path / "o").exists()


def test_missing_file_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.png"
    assert main(["inspect", "--stego", str(missing)]) == 2
    err = capsys.readouterr().err
    assert "invalid" in err and str(missing) in err


def test_malformed_exit_2(tmp_path, covers):
    bad = tmp_path / "bad.png"
    bad.write_bytes(covers["png"][:-5])
    assert main(["extract", "--stego", str(bad), "--key", "30", "--marker", "MK"]) == 2


def test_collision_exit_2(files, tmp_path):
    out = tmp_path / "s"
    common = ["--data", str(files["msg"]), "--key", "30", "--marker", "MK"]
    assert main(["hide", "--cover", str(files["png"]), "--out", str(out)] + common) == 0
    assert main(["hide", "--cover", str(out), "--out", str(tmp_path / "t")] + common) == 2


def test_out_equal_to_input_rejected(files):
    before = digest(files["png"])
    assert main(["hide", "--cover", str(files["png"]), "--data", str(files["msg"]), "--key", "30",
                 "--marker", "MK", "--out", str(files["png"])]) == 2
    assert digest(files["png"]) == before


def test_truncation_exit_3(tmp_path, covers):
    p = tmp_path / "t.png"
    p.write_bytes(covers["png"] + b"MK\x01" + (100).to_bytes(8, "big") + b"short")
    assert main(["extract", "--stego", str(p), "--key", "30", "--marker", "MK"]) == 3


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["hide", "--cover", "x"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["extract", "--stego", "x", "--key", "30", "--marker", "M", "--mode", "bogus"])
    assert exc.value.code == 2


def test_extract_to_stdout(files, tmp_path, capsysbinary):
    out = tmp_path / "s"
    main(["hide", "--cover", str(files["bmp"]), "--data", str(files["msg"]), "--key", "44",
          "--marker", "MK", "--out", str(out)])
    capsysbinary.readouterr()
    assert main(["extract", "--stego", str(out), "--key", "44", "--marker", "MK"]) == 0
    assert capsysbinary.readouterr().out == files["msg"].read_bytes()


def test_full_scan_flag(files, tmp_path):
    out = tmp_path / "s"
    main(["hide", "--cover", str(files["jpeg"]), "--data", str(files["msg"]), "--key", "50",
          "--marker", "ZQZQ", "--out", str(out)])
    rec = tmp_path / "r"
    assert main(["extract", "--stego", str(out), "--key", "50", "--marker", "ZQZQ",
                 "--scan", "full", "--out", str(rec)]) == 0
    assert rec.read_bytes() == files["msg"].read_bytes()


def test_inspect(files, tmp_path, capsys):
    assert main(["inspect", "--stego", str(files["png"]), "--format", "kv"]) == 0
    assert "trailer_length=0" in capsys.readouterr().out
    out = tmp_path / "s"
    main(["hide", "--cover", str(files["png"]), "--data", str(files["msg"]), "--key", "30",
          "--marker", "MK", "--out", str(out)])
    dump = tmp_path / "trailer"
    assert main(["inspect", "--stego", str(out), "--out", str(dump)]) == 0
    text = capsys.readouterr().out
    assert f"trailer_length: {2 + 9 + 3000}" in text
    assert "key_guess_1: 30 " in text
    assert dump.read_bytes() == out.read_bytes()[len(files["png"].read_bytes()):]


def test_compare(files, tmp_path, capsys):
    out = tmp_path / "s"
    main(["hide", "--cover", str(files["bmp"]), "--data", str(files["msg"]), "--key", "30",
          "--marker", "MK", "--out", str(out)])
    capsys.readouterr()
    assert main(["compare", "--cover", str(files["bmp"]), "--stego", str(out), "--format", "kv",
                 "--histograms"]) == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["mse"] == "0.0" and kv["psnr"] == "inf"
    assert len(kv["cover_hist"].split(",")) == 256
    assert main(["compare", "--cover", str(files["bmp"]), "--stego", str(files["png"])]) == 2


def test_lsb_commands(files, tmp_path, capsys):
    small = tmp_path / "small.txt"
    small.write_bytes(b"lsb baseline payload")
    s = tmp_path / "lsb.bmp"
    r = tmp_path / "r"
    assert main(["lsb-hide", "--cover", str(files["bmp"]), "--data", str(small), "--out", str(s)]) == 0
    assert main(["lsb-extract", "--stego", str(s), "--out", str(r)]) == 0
    assert r.read_bytes() == small.read_bytes()
    assert main(["lsb-hide", "--cover", str(files["bmp"]), "--data", str(files["msg"]), "--out", str(s)]) == 3
    assert main(["lsb-hide", "--cover", str(files["png"]), "--data", str(small), "--out", str(s)]) == 2
    capsys.readouterr()
    assert main(["compare", "--cover", str(files["bmp"]), "--stego", str(s)]) == 0
    assert "byte_region_identical: false" in capsys.readouterr().out


def test_crack(files, tmp_path, capsys):
    out = tmp_path / "s"
    main(["hide", "--cover", str(files["gif"]), "--data", str(files["msg"]), "--key", "123",
          "--marker", "MK", "--out", str(out)])
    capsys.readouterr()
    assert main(["crack", "--stego", str(out)]) == 0
    assert capsys.readouterr().out.startswith("key_guess_1: 123 ")
    ct = tmp_path / "ct"
    ct.write_bytes(bytes((b + 60) % 256 for b in files["msg"].read_bytes()))
    assert main(["crack", "--data", str(ct), "--format", "kv", "--modal-byte", "0x20"]) == 0
    assert capsys.readouterr().out.startswith("key_guess_1=60 ")


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "trailsteg", "extract", "--stego", str(files["png"]),
                           "--key", "30", "--marker", "MK"], capture_output=True, text=True,
                          env={**os.environ})
    assert proc.returncode == 1
    assert "no data present" in proc.stderr
