import pytest

from groupshift.cli import main
from groupshift.specfmt import (SpecParseError, format_spec, parse_message,
                                parse_spec)
from groupshift.groups import FiniteAbelianGroup


FULL_Z4 = "group: Z4\ngen @0: 1\n"
DELAY_REP = "group: Z2 x Z2\ngen @0: (1,0) (0,1)\n"


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


# -- parsing -------------------------------------------------------------------


def test_parse_simple_spec():
    spec = parse_spec("group: Z2\ngen @0: 1 1\n")
    assert spec.shift.alphabet.orders == (2,)
    assert [w.format() for w in spec.shift.generators] == ["@0: 1 1"]


def test_parse_two_factor_negative_start():
    spec = parse_spec("group: Z4 x Z2\ngen @-1: (1,0) (2,1)\n")
    w = spec.shift.generators[0]
    assert (w.first, w.last) == (-1, 0)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(SpecParseError) as err:
        parse_spec("group: Z4\ngen @0: 7\n")
    assert err.value.line_no == 2
    with pytest.raises(SpecParseError):
        parse_spec("group: Z0\n")
    with pytest.raises(SpecParseError):
        parse_spec("group: Z4\ngen @0:\n")
    with pytest.raises(SpecParseError):
        parse_spec("gen @0: 1\n")
    with pytest.raises(SpecParseError):
        parse_spec("group: Z4\nmemory: 0\n")


def test_spec_roundtrip():
    text = "group: Z4 x Z2\nmemory: 2\ngen @-1: (1,0) (2,1)\ngen @0: (0,1)\n"
    spec = parse_spec(text)
    assert parse_spec(format_spec(spec)) == spec


def test_parse_message_roundtrip():
    src = FiniteAbelianGroup.parse("Z4")
    msg = parse_message("0: 1\n2: 3\n", src)
    assert msg.value_at(0) == (1,) and msg.value_at(2) == (3,)
    with pytest.raises(SpecParseError):
        parse_message("0: 9\n", src)
    with pytest.raises(SpecParseError):
        parse_message("0: 1\n0: 2\n", src)


# -- commands ------------------------------------------------------------------


def test_certify_full_shift_exit_zero(tmp_path, capsys):
    path = tmp_path / "full-z4.spec"
    path.write_text(FULL_Z4)
    code, out = run_cli(["certify", str(path)], capsys)
    assert code == 0
    assert "certificate: complete" in out
    assert "verdict: pass" in out
    assert "encoder.tap.1: @0: 1" in out


def test_analyze_delay_rep(tmp_path, capsys):
    path = tmp_path / "delay.spec"
    path.write_text(DELAY_REP)
    code, out = run_cli(["analyze", str(path)], capsys)
    assert code == 0
    assert "controllability_index: 1" in out
    assert "order_controllability_index: 1" in out
    assert "finite_type_memory: 1" in out


def test_analyze_negative_verdict_with_tight_cap(tmp_path, capsys):
    path = tmp_path / "delay.spec"
    path.write_text(DELAY_REP)
    code, out = run_cli(["analyze", str(path), "--n-cap", "0"], capsys)
    assert code == 1
    assert "controllability_index: not-found<=0" in out
    assert "controllability.witness:" in out
    assert "verdict: negative" in out


def test_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.spec"
    path.write_text("group: Z0\n")
    code, out = run_cli(["analyze", str(path)], capsys)
    assert code == 2
    assert "error:" in out


def test_encode_roundtrip(tmp_path, capsys):
    spec = tmp_path / "full-z4.spec"
    spec.write_text(FULL_Z4)
    msg = tmp_path / "msg.txt"
    msg.write_text("0: 1\n1: 3\n3: 2\n")
    code, out = run_cli(["encode", str(spec), str(msg)], capsys)
    assert code == 0
    assert "word: @0: 1 3 0 2" in out


def test_encode_out_of_range_exit_two(tmp_path, capsys):
    spec = tmp_path / "full-z4.spec"
    spec.write_text(FULL_Z4)
    msg = tmp_path / "msg.txt"
    msg.write_text("0: 9\n")
    code, out = run_cli(["encode", str(spec), str(msg)], capsys)
    assert code == 2


def test_oracle_matches_certify_window_image(tmp_path, capsys):
    path = tmp_path / "delay.spec"
    path.write_text(DELAY_REP)
    code1, out1 = run_cli(["certify", str(path), "--window", "0:2"], capsys)
    code2, out2 = run_cli(["oracle", str(path), "--window", "0:2"], capsys)
    assert code1 == 0 and code2 == 0
    image1 = [l for l in out1.splitlines() if l.startswith("window_image")]
    image2 = [l for l in out2.splitlines() if l.startswith("window_image")]
    assert image1 == image2 and image1


def test_reports_byte_identical(tmp_path, capsys):
    path = tmp_path / "delay.spec"
    path.write_text(DELAY_REP)
    _, out1 = run_cli(["certify", str(path)], capsys)
    _, out2 = run_cli(["certify", str(path)], capsys)
    assert out1 == out2


def test_generators_command(tmp_path, capsys):
    path = tmp_path / "full-z8.spec"
    path.write_text("group: Z8\ngen @0: 1\n")
    code, out = run_cli(["generators", str(path)], capsys)
    assert code == 0
    assert "prime.2.entry.1.height: 2" in out
    assert "prime.2.entry.1.tap: @0: 1" in out


def test_usage_error_exit_two(capsys):
    assert main(["certify"]) == 2


def test_missing_file_exit_two(capsys):
    assert main(["certify", "/nonexistent/file.spec"]) == 2
