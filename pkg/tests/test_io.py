import pytest

from segalign.io import (
    InputError,
    MissingColumn,
    NonNumericTimestamp,
    ParseError,
    format_sequence,
    infer_format,
    parse_sequence_file,
    parse_sequence_text,
)
from segalign.model import NL, InvalidInterval, Segment, validate_sequence

from conftest import EXAMPLE_GT, EXAMPLE_PRED, segs


@pytest.mark.parametrize("name,rows", [("gt", EXAMPLE_GT), ("pred", EXAMPLE_PRED)])
def test_example_csv_and_jsonl_agree(data_dir, name, rows):
    from_csv = parse_sequence_file(data_dir / f"example_{name}.csv")
    from_jsonl = parse_sequence_file(data_dir / f"example_{name}.jsonl")
    assert from_csv == from_jsonl == segs(rows)


def test_header_only_is_empty():
    assert parse_sequence_text("label,t_begin,t_end\n", "csv") == []
    assert parse_sequence_text("", "jsonl") == []


def test_inverted_interval_passes_parse_and_fails_validation():
    raw = parse_sequence_text("label,t_begin,t_end\nA,5,1\n", "csv")
    assert raw == [Segment("A", 5.0, 1.0)]
    with pytest.raises(InvalidInterval) as exc:
        validate_sequence(raw)
    assert exc.value.violations[0].indices == (0,)


def test_custom_sentinel():
    raw = parse_sequence_text("label,t_begin,t_end\n-,0,3\nNL,4,5\n", "csv", nl_sentinel="-")
    assert raw == [Segment(NL, 0.0, 3.0), Segment("NL", 4.0, 5.0)]


def test_csv_errors_carry_line_numbers():
    with pytest.raises(MissingColumn):
        parse_sequence_text("label,t_begin\nA,1\n", "csv")
    with pytest.raises(ParseError):
        parse_sequence_text("label,t_end,t_begin\nA,1,2\n", "csv")
    with pytest.raises(NonNumericTimestamp) as exc:
        parse_sequence_text("label,t_begin,t_end\nA,1,2\nB,x,4\n", "csv", path="f.csv")
    assert exc.value.line == 3
    assert str(exc.value).startswith("f.csv:3:")
    with pytest.raises(ParseError) as exc:
        parse_sequence_text("label,t_begin,t_end\nA,1\n", "csv")
    assert exc.value.line == 2
    with pytest.raises(NonNumericTimestamp):
        parse_sequence_text("label,t_begin,t_end\nA,nan,2\n", "csv")


def test_jsonl_errors():
    with pytest.raises(MissingColumn) as exc:
        parse_sequence_text('{"label": "A", "t_begin": 1, "t_end": 2}\n{"label": "A", "t_begin": 1}\n', "jsonl")
    assert exc.value.line == 2
    with pytest.raises(NonNumericTimestamp):
        parse_sequence_text('{"label": "A", "t_begin": true, "t_end": 2}\n', "jsonl")
    with pytest.raises(ParseError):
        parse_sequence_text("{not json}\n", "jsonl")
    with pytest.raises(ParseError):
        parse_sequence_text("[1, 2, 3]\n", "jsonl")


def test_missing_file_and_unknown_suffix(tmp_path):
    with pytest.raises(InputError):
        parse_sequence_file(tmp_path / "nope.csv")
    with pytest.raises(InputError):
        infer_format("x.txt")


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_format_round_trip(fmt):
    seq = segs(EXAMPLE_PRED) + [Segment("a,b", 300.5, 301.25)]
    text = format_sequence(seq, fmt)
    assert parse_sequence_text(text, fmt) == seq
