import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plotwire.errors import ParseError, UnknownNameError
from plotwire.exprs import (
    BUILTINS, Binary, BoolLit, Call, ColumnRef, NumberLit, TextLit, Unary,
    columns_in, parse, to_source,
)


def test_simple_subtraction_tree():
    assert parse("b - r") == Binary("-", ColumnRef("b"), ColumnRef("r"))


def test_call_tree():
    e = parse("sqrt(x*x + y*y)")
    assert e == Call("sqrt", (Binary(
        "+",
        Binary("*", ColumnRef("x"), ColumnRef("x")),
        Binary("*", ColumnRef("y"), ColumnRef("y")),
    ),))


def test_error_offset():
    with pytest.raises(ParseError) as err:
        parse("1 + ")
    assert err.value.offset == 4
    assert "expected" in str(err.value)


def test_unknown_function():
    with pytest.raises(UnknownNameError, match="frobnicate"):
        parse("frobnicate(x)")


def test_precedence():
    # unary > muldiv > addsub > order cmp > equality > && > ||
    e = parse("a + b * c < d == e && f || g")
    assert e == Binary(
        "||",
        Binary(
            "&&",
            Binary(
                "==",
                Binary("<",
                       Binary("+", ColumnRef("a"),
                              Binary("*", ColumnRef("b"), ColumnRef("c"))),
                       ColumnRef("d")),
                ColumnRef("e"),
            ),
            ColumnRef("f"),
        ),
        ColumnRef("g"),
    )


def test_left_associativity():
    assert parse("a - b - c") == Binary(
        "-", Binary("-", ColumnRef("a"), ColumnRef("b")), ColumnRef("c")
    )


def test_unary_binds_tighter_than_mul():
    assert parse("-a * b") == Binary("*", Unary("-", ColumnRef("a")), ColumnRef("b"))


def test_parens_override():
    assert parse("(a + b) * c") == Binary(
        "*", Binary("+", ColumnRef("a"), ColumnRef("b")), ColumnRef("c")
    )


def test_number_forms():
    for src, val in [("42", 42.0), ("2.5", 2.5), ("1e3", 1000.0),
                     ("1.5e-3", 0.0015), (".5", 0.5)]:
        assert parse(src) == NumberLit(val)


def test_text_literal_escapes():
    assert parse(r'"say \"hi\" \\"') == TextLit('say "hi" \\')
    with pytest.raises(ParseError, match="unterminated"):
        parse('"oops')


def test_bool_keywords():
    assert parse("true") == BoolLit(True)
    assert parse("false") == BoolLit(False)


def test_arity_checked_at_parse():
    with pytest.raises(ParseError, match="sqrt expects 1"):
        parse("sqrt(x, y)")
    with pytest.raises(ParseError, match="atan2 expects 2"):
        parse("atan2(x)")


def test_trailing_garbage():
    with pytest.raises(ParseError, match="trailing"):
        parse("a + b )")


def test_columns_in():
    assert columns_in(parse("sqrt(a*b) + c < 2 && d == d")) == {"a", "b", "c", "d"}


def test_offset_is_bytes_not_chars():
    # two-byte UTF-8 char before the error position
    with pytest.raises(ParseError) as err:
        parse('"é" == ')
    assert err.value.offset == len('"é" == '.encode("utf-8"))


# structural round-trip over generated trees

_ident = st.from_regex(r"[a-z_][a-z0-9_]{0,6}", fullmatch=True).filter(
    lambda s: s not in BUILTINS and s not in ("true", "false")
)
_number = st.floats(min_value=0.0, allow_nan=False, allow_infinity=False)
_text = st.text(max_size=8)


def _exprs(depth: int):
    leaf = st.one_of(
        st.builds(NumberLit, _number),
        st.builds(BoolLit, st.booleans()),
        st.builds(TextLit, _text),
        st.builds(ColumnRef, _ident),
    )
    if depth == 0:
        return leaf
    sub = _exprs(depth - 1)
    return st.one_of(
        leaf,
        st.builds(Unary, st.sampled_from(["-", "!"]), sub),
        st.builds(Binary, st.sampled_from(list("+-*/%") + ["<", "<=", ">", ">=", "==", "!=", "&&", "||"]), sub, sub),
        st.builds(
            lambda f, args: Call(f, tuple(args[: BUILTINS[f]])),
            st.sampled_from(sorted(BUILTINS)),
            st.lists(sub, min_size=2, max_size=2),
        ),
    )


@settings(max_examples=300, deadline=None)
@given(_exprs(4))
def test_parse_print_roundtrip(tree):
    assert parse(to_source(tree)) == tree
