import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plotwire.csvio import infer_kind, load_csv
from plotwire.errors import ParseError, SchemaError


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_minimal_int_parse(tmp_path):
    t = load_csv(write(tmp_path, "x,y\n1,2\n3,4\n"))
    assert t.row_count == 2
    assert [c.kind for c in t.columns] == ["int64", "int64"]
    assert t.column("x").values.tolist() == [1, 3]


def test_widening_and_null(tmp_path):
    t = load_csv(write(tmp_path, "a\n1\n\n2.5\n"))
    col = t.column("a")
    assert col.kind == "float64"
    assert col.nulls.tolist() == [False, True, False]
    assert col.values[0] == 1.0 and col.values[2] == 2.5
    assert np.isnan(col.values[1])


def test_bool_only_for_literal_true_false(tmp_path):
    t = load_csv(write(tmp_path, "f,g,h\ntrue,True,1\nfalse,false,0\n"))
    assert t.column("f").kind == "bool"
    assert t.column("g").kind == "text"  # "True" is not the literal
    assert t.column("h").kind == "int64"  # 0/1 stay numeric


def test_ragged_row_reports_line_number(tmp_path):
    with pytest.raises(ParseError) as err:
        load_csv(write(tmp_path, "a,b\n1,2\n3\n"))
    assert err.value.offset == 3


def test_duplicate_header_rejected(tmp_path):
    with pytest.raises(SchemaError, match="duplicate"):
        load_csv(write(tmp_path, "a,a\n1,2\n"))


def test_rfc4180_quoting(tmp_path):
    t = load_csv(write(tmp_path, 'name,v\n"a,b",1\n"say ""hi""",2\n"two\nlines",3\n'))
    assert t.column("name").values.tolist() == ["a,b", 'say "hi"', "two\nlines"]
    assert t.row_count == 3


def test_int64_overflow_becomes_float(tmp_path):
    t = load_csv(write(tmp_path, "v\n9223372036854775807\n9223372036854775808\n"))
    assert t.column("v").kind == "float64"


def test_nan_and_inf_literals_parse_as_float(tmp_path):
    t = load_csv(write(tmp_path, "v\nnan\ninf\n-inf\n1.5\n"))
    col = t.column("v")
    assert col.kind == "float64"
    assert np.isnan(col.values[0])
    assert col.values[1] == np.inf and col.values[2] == -np.inf
    assert not col.nulls.any()


def test_whitespace_is_not_numeric(tmp_path):
    t = load_csv(write(tmp_path, "v\n 1\n2\n"))
    assert t.column("v").kind == "text"


_CELL_POOLS = {
    "int64": ["1", "-3", "42"],
    "float64": ["1.5", "-2.25", "3e4"],
    "bool": ["true", "false"],
    "text": ["spam", "x y", "z"],
}


@settings(max_examples=60, deadline=None)
@given(
    kind=st.sampled_from(sorted(_CELL_POOLS)),
    data=st.data(),
)
def test_inference_is_row_order_independent(kind, data):
    cells = data.draw(
        st.lists(st.sampled_from(_CELL_POOLS[kind] + [""]), min_size=1, max_size=30)
    )
    baseline = infer_kind(cells)
    shuffled = data.draw(st.permutations(cells))
    assert infer_kind(list(shuffled)) == baseline
