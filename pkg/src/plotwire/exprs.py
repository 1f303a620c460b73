"""Expression language used for plot coordinates and row filters.

Grammar, loosest to tightest binding, all left-associative:

    ||  <  &&  <  == !=  <  < <= > >=  <  + -  <  * / %  <  unary - !

Primaries: numeric literals (1, 2.5, 1e-3), ``true``/``false``, double-quoted
text literals, column references (identifiers), builtin calls, parentheses.
No variables, no assignment, no side effects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, UnknownNameError

# builtin name -> arity; all take and return numerics
BUILTINS = {
    "sqrt": 1, "log10": 1, "ln": 1, "exp": 1, "abs": 1,
    "sin": 1, "cos": 1,
    "atan2": 2, "pow": 2, "min": 2, "max": 2,
}


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class TextLit:
    value: str


@dataclass(frozen=True)
class ColumnRef:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "!"
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Expr", ...]


Expr = NumberLit | BoolLit | TextLit | ColumnRef | Unary | Binary | Call

# binary precedence levels, higher binds tighter
_PRECEDENCE = {
    "||": 1,
    "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY_PRECEDENCE = 7


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "text", "op", "eof"
    text: str
    pos: int  # char offset into source


_PUNCT = ("||", "&&", "==", "!=", "<=", ">=", "<", ">", "+", "-", "*", "/",
          "%", "!", "(", ")", ",")


def _byte_offset(source: str, char_pos: int) -> int:
    return len(source[:char_pos].encode("utf-8"))


class _Lexer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        p = self.pos if pos is None else pos
        return ParseError(message, offset=_byte_offset(self.source, p))

    def _lex_string(self) -> _Token:
        start = self.pos
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.source):
                raise self.error("unterminated text literal", start)
            c = self.source[self.pos]
            if c == '"':
                self.pos += 1
                return _Token("text", "".join(out), start)
            if c == "\\":
                if self.pos + 1 >= len(self.source):
                    raise self.error("unterminated escape", self.pos)
                nxt = self.source[self.pos + 1]
                if nxt not in ('"', "\\"):
                    raise self.error(f"unknown escape \\{nxt}", self.pos)
                out.append(nxt)
                self.pos += 2
            else:
                out.append(c)
                self.pos += 1

    def _lex_number(self) -> _Token:
        start = self.pos
        src = self.source
        n = len(src)
        while self.pos < n and src[self.pos].isdigit():
            self.pos += 1
        if self.pos < n and src[self.pos] == ".":
            self.pos += 1
            while self.pos < n and src[self.pos].isdigit():
                self.pos += 1
        if self.pos < n and src[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < n and src[self.pos] in "+-":
                self.pos += 1
            if self.pos < n and src[self.pos].isdigit():
                while self.pos < n and src[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark  # "1e" was really number then identifier-ish junk
        return _Token("num", src[start:self.pos], start)

    def tokens(self) -> list[_Token]:
        out = []
        src = self.source
        n = len(src)
        while self.pos < n:
            c = src[self.pos]
            if c in " \t\r\n":
                self.pos += 1
                continue
            if c == '"':
                out.append(self._lex_string())
                continue
            if c.isdigit() or (c == "." and self.pos + 1 < n and src[self.pos + 1].isdigit()):
                out.append(self._lex_number())
                continue
            if c.isalpha() or c == "_":
                start = self.pos
                while self.pos < n and (src[self.pos].isalnum() or src[self.pos] == "_"):
                    self.pos += 1
                out.append(_Token("ident", src[start:self.pos], start))
                continue
            for p in _PUNCT:
                if src.startswith(p, self.pos):
                    out.append(_Token("op", p, self.pos))
                    self.pos += len(p)
                    break
            else:
                raise self.error(f"unexpected character {c!r}")
        out.append(_Token("eof", "", n))
        return out


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.toks = _Lexer(source).tokens()
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.toks[self.i]

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        t = tok if tok is not None else self.cur
        return ParseError(message, offset=_byte_offset(self.source, t.pos))

    def _advance(self) -> _Token:
        t = self.cur
        self.i += 1
        return t

    def _expect_op(self, op: str):
        if self.cur.kind == "op" and self.cur.text == op:
            return self._advance()
        raise self.error(f"expected {op!r}")

    def parse(self) -> Expr:
        e = self.parse_binary(1)
        if self.cur.kind != "eof":
            raise self.error(f"unexpected trailing input {self.cur.text!r}")
        return e

    def parse_binary(self, min_prec: int) -> Expr:
        left = self.parse_unary()
        while (
            self.cur.kind == "op"
            and self.cur.text in _PRECEDENCE
            and _PRECEDENCE[self.cur.text] >= min_prec
        ):
            op = self._advance().text
            right = self.parse_binary(_PRECEDENCE[op] + 1)  # left-assoc
            left = Binary(op, left, right)
        return left

    def parse_unary(self) -> Expr:
        if self.cur.kind == "op" and self.cur.text in ("-", "!"):
            op = self._advance().text
            return Unary(op, self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self._advance()
            return NumberLit(float(tok.text))
        if tok.kind == "text":
            self._advance()
            return TextLit(tok.text)
        if tok.kind == "ident":
            self._advance()
            if tok.text == "true":
                return BoolLit(True)
            if tok.text == "false":
                return BoolLit(False)
            if self.cur.kind == "op" and self.cur.text == "(":
                return self._parse_call(tok)
            return ColumnRef(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self._advance()
            e = self.parse_binary(1)
            self._expect_op(")")
            return e
        if tok.kind == "eof":
            raise self.error("unexpected end of input, expected an expression")
        raise self.error(f"unexpected {tok.text!r}, expected an expression")

    def _parse_call(self, name_tok: _Token) -> Expr:
        if name_tok.text not in BUILTINS:
            raise UnknownNameError(f"unknown function {name_tok.text!r}")
        self._expect_op("(")
        args = [self.parse_binary(1)]
        while self.cur.kind == "op" and self.cur.text == ",":
            self._advance()
            args.append(self.parse_binary(1))
        self._expect_op(")")
        arity = BUILTINS[name_tok.text]
        if len(args) != arity:
            raise self.error(
                f"{name_tok.text} expects {arity} argument(s), got {len(args)}",
                name_tok,
            )
        return Call(name_tok.text, tuple(args))


def parse(source: str) -> Expr:
    """Parse source text into an expression tree.

    Raises ParseError (with byte offset) for syntax errors, UnknownNameError
    for calls to functions outside the builtin set.
    """
    return _Parser(source).parse()


def _quote_text(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_source(expr: Expr) -> str:
    """Render a tree back to source; parse(to_source(e)) is structurally e."""
    return _print(expr, 0)


def _print(e: Expr, parent_prec: int) -> str:
    if isinstance(e, NumberLit):
        return repr(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, TextLit):
        return _quote_text(e.value)
    if isinstance(e, ColumnRef):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({', '.join(_print(a, 0) for a in e.args)})"
    if isinstance(e, Unary):
        inner = _print(e.operand, _UNARY_PRECEDENCE)
        text = f"{e.op}{inner}"
        return f"({text})" if parent_prec > _UNARY_PRECEDENCE else text
    assert isinstance(e, Binary)
    prec = _PRECEDENCE[e.op]
    # left child may share our level (left-assoc); right child must bind tighter
    text = f"{_print(e.left, prec)} {e.op} {_print(e.right, prec + 1)}"
    return f"({text})" if parent_prec > prec else text


def columns_in(expr: Expr) -> set[str]:
    """All column names referenced anywhere in the tree."""
    if isinstance(expr, ColumnRef):
        return {expr.name}
    if isinstance(expr, Unary):
        return columns_in(expr.operand)
    if isinstance(expr, Binary):
        return columns_in(expr.left) | columns_in(expr.right)
    if isinstance(expr, Call):
        out: set[str] = set()
        for a in expr.args:
            out |= columns_in(a)
        return out
    return set()
