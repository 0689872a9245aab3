"""Parsing of rational-function expressions such as ``"(x^2 - 1)/(2*x)"``.

Uses the :mod:`ast` module on a restricted grammar: integers, the variables
x, u, z, t, the operators ``+ - * /`` and integer powers (``^`` or ``**``).
"""

import ast

from ._scalar import Q
from .errors import SchemaError
from .exact import VARIABLES, RatFunc, as_ratfunc

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _int_value(node):
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _int_value(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    raise SchemaError("exponents must be integer literals")


def _eval(node, symbols):
    if isinstance(node, ast.Expression):
        return _eval(node.body, symbols)
    if isinstance(node, ast.Constant):
        if type(node.value) is int:
            return as_ratfunc(node.value)
        raise SchemaError("unsupported literal %r (use integers and '/')" % (node.value,))
    if isinstance(node, ast.Name):
        if node.id in symbols:
            return symbols[node.id]
        raise SchemaError("unknown symbol %r" % node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, symbols)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return _eval(node.left, symbols) ** _int_value(node.right)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise SchemaError("unsupported operator %s" % type(node.op).__name__)
        return op(_eval(node.left, symbols), _eval(node.right, symbols))
    raise SchemaError("unsupported expression element %s" % type(node).__name__)


def parse_expr(text, symbols=None):
    """Parse ``text`` into a :class:`RatFunc`.

    ``symbols`` may bind extra names (for example a parameter ``a``) to
    rational values.
    """
    if not isinstance(text, str):
        raise SchemaError("expected an expression string, got %r" % (text,))
    table = {name: RatFunc.var(name) for name in VARIABLES}
    for k, v in (symbols or {}).items():
        table[k] = as_ratfunc(Q(v) if isinstance(v, (int, str)) else v)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise SchemaError("cannot parse expression %r: %s" % (text, exc.msg)) from None
    try:
        return _eval(tree, table)
    except ZeroDivisionError:
        raise SchemaError("division by zero in %r" % text) from None
