"""Type checking and vectorized evaluation of expressions over a table.

Missing semantics are strict: a row is missing in the result whenever any
cell referenced anywhere in the expression is null (or NaN, for float64
columns), or a sqrt/ln/log10 argument falls outside its domain. There is no
short-circuit evaluation to observe, so && and || run vectorized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvalTypeError
from .exprs import (
    Binary, BoolLit, Call, ColumnRef, Expr, NumberLit, TextLit, Unary,
    to_source,
)
from .table import ColumnTable

_COLUMN_TYPES = {"float64": "numeric", "int64": "numeric", "bool": "bool", "text": "text"}

_ARITH = ("+", "-", "*", "/", "%")
_ORDER_CMP = ("<", "<=", ">", ">=")
_EQ_CMP = ("==", "!=")
_LOGIC = ("&&", "||")


def infer_type(expr: Expr, table: ColumnTable) -> str:
    """Static type of the expression: 'numeric', 'bool', or 'text'.

    Raises EvalTypeError naming the offending subexpression, UnknownNameError
    for column references the table does not have.
    """
    if isinstance(expr, NumberLit):
        return "numeric"
    if isinstance(expr, BoolLit):
        return "bool"
    if isinstance(expr, TextLit):
        return "text"
    if isinstance(expr, ColumnRef):
        return _COLUMN_TYPES[table.column(expr.name).kind]
    if isinstance(expr, Unary):
        need = "numeric" if expr.op == "-" else "bool"
        got = infer_type(expr.operand, table)
        if got != need:
            raise EvalTypeError(
                f"operator {expr.op!r} needs a {need} operand, got {got} "
                f"in {to_source(expr)!r}"
            )
        return need
    if isinstance(expr, Call):
        for arg in expr.args:
            got = infer_type(arg, table)
            if got != "numeric":
                raise EvalTypeError(
                    f"{expr.func} needs numeric arguments, got {got} "
                    f"in {to_source(arg)!r}"
                )
        return "numeric"
    assert isinstance(expr, Binary)
    lt = infer_type(expr.left, table)
    rt = infer_type(expr.right, table)
    if expr.op in _ARITH:
        if lt != "numeric" or rt != "numeric":
            raise EvalTypeError(
                f"operator {expr.op!r} needs numeric operands, got {lt} and {rt} "
                f"in {to_source(expr)!r}"
            )
        return "numeric"
    if expr.op in _ORDER_CMP:
        if lt != "numeric" or rt != "numeric":
            raise EvalTypeError(
                f"comparison {expr.op!r} needs numeric operands, got {lt} and {rt} "
                f"in {to_source(expr)!r}"
            )
        return "bool"
    if expr.op in _EQ_CMP:
        if lt != rt:
            raise EvalTypeError(
                f"cannot compare {lt} with {rt} in {to_source(expr)!r}"
            )
        return "bool"
    assert expr.op in _LOGIC
    if lt != "bool" or rt != "bool":
        raise EvalTypeError(
            f"operator {expr.op!r} needs bool operands, got {lt} and {rt} "
            f"in {to_source(expr)!r}"
        )
    return "bool"


@dataclass(frozen=True)
class EvalResult:
    """Vector of per-row results plus the rows that must be ignored."""

    kind: str  # "float64" or "bool"
    values: np.ndarray
    missing: np.ndarray


_UNARY_FUNCS = {
    "sqrt": np.sqrt, "log10": np.log10, "ln": np.log, "exp": np.exp,
    "abs": np.abs, "sin": np.sin, "cos": np.cos,
}
_BINARY_FUNCS = {
    "atan2": np.arctan2, "pow": np.power, "min": np.minimum, "max": np.maximum,
}


def _eval(expr: Expr, table: ColumnTable, n: int):
    """Returns (values, missing); scalars broadcast lazily as 0-d arrays."""
    if isinstance(expr, NumberLit):
        return np.float64(expr.value), np.False_
    if isinstance(expr, BoolLit):
        return np.bool_(expr.value), np.False_
    if isinstance(expr, TextLit):
        return expr.value, np.False_
    if isinstance(expr, ColumnRef):
        col = table.column(expr.name)
        if col.kind == "int64":
            return col.values.astype(np.float64), col.missing_mask()
        return col.values, col.missing_mask()
    if isinstance(expr, Unary):
        v, m = _eval(expr.operand, table, n)
        return (-v if expr.op == "-" else np.logical_not(v)), m
    if isinstance(expr, Call):
        vs, ms = zip(*(_eval(a, table, n) for a in expr.args))
        missing = ms[0]
        for m in ms[1:]:
            missing = np.logical_or(missing, m)
        with np.errstate(all="ignore"):
            if expr.func in _UNARY_FUNCS:
                (v,) = vs
                if expr.func == "sqrt":
                    missing = missing | (v < 0)
                elif expr.func in ("log10", "ln"):
                    missing = missing | (v <= 0)
                out = _UNARY_FUNCS[expr.func](v)
            else:
                out = _BINARY_FUNCS[expr.func](*vs)
        return out, missing
    assert isinstance(expr, Binary)
    lv, lm = _eval(expr.left, table, n)
    rv, rm = _eval(expr.right, table, n)
    missing = np.logical_or(lm, rm)
    op = expr.op
    with np.errstate(all="ignore"):
        if op == "+":
            out = lv + rv
        elif op == "-":
            out = lv - rv
        elif op == "*":
            out = lv * rv
        elif op == "/":
            out = lv / rv
        elif op == "%":
            out = np.fmod(lv, rv)
        elif op == "<":
            out = lv < rv
        elif op == "<=":
            out = lv <= rv
        elif op == ">":
            out = lv > rv
        elif op == ">=":
            out = lv >= rv
        elif op == "==":
            out = lv == rv
        elif op == "!=":
            out = lv != rv
        elif op == "&&":
            out = np.logical_and(lv, rv)
        else:
            out = np.logical_or(lv, rv)
    return out, missing


def _broadcast(values, missing, n: int, dtype) -> EvalResult:
    values = np.asarray(values, dtype=dtype)
    if values.ndim == 0:
        values = np.full(n, values, dtype=dtype)
    missing = np.asarray(missing, dtype=np.bool_)
    if missing.ndim == 0:
        missing = np.full(n, missing, dtype=np.bool_)
    kind = "float64" if dtype is np.float64 else "bool"
    return EvalResult(kind, values, missing)


def eval_numeric(expr: Expr, table: ColumnTable) -> EvalResult:
    """Evaluate a numeric expression over all rows (float64 result).

    Division by zero keeps its IEEE ±inf/NaN value; such rows stay valid
    here and are dropped by consumers that need finite coordinates.
    """
    got = infer_type(expr, table)
    if got != "numeric":
        raise EvalTypeError(f"expected a numeric expression, got {got}")
    values, missing = _eval(expr, table, table.row_count)
    return _broadcast(values, missing, table.row_count, np.float64)


def eval_filter(expr: Expr, table: ColumnTable) -> EvalResult:
    """Evaluate a boolean row filter; rows with missing inputs come out False."""
    got = infer_type(expr, table)
    if got != "bool":
        raise EvalTypeError(f"expected a bool expression, got {got}")
    values, missing = _eval(expr, table, table.row_count)
    res = _broadcast(values, missing, table.row_count, np.bool_)
    return EvalResult("bool", res.values & ~res.missing, res.missing)
