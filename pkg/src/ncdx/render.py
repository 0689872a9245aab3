"""Plain-text rendering of matrices and operators (used by reprs and the CLI)."""

from .exact import ratfunc_text


def mat_text(m):
    return "[" + ", ".join("[" + ", ".join(ratfunc_text(v) for v in r) + "]"
                           for r in m.to_rows()) + "]"


def _scalar_identity(m):
    """The scalar ``c`` when ``m == c*I``, else None."""
    if not m.is_square():
        return None
    c = m[0, 0]
    for i in range(m.rows):
        for j in range(m.cols):
            if m[i, j] != (c if i == j else 0):
                return None
    return c


def _d_text(var, k):
    if k == 0:
        return ""
    d = "D" + var
    return d if k == 1 else "%s^%d" % (d, k)


def op_text(op):
    """Coefficient form, highest order first: ``Dx^2 + [[...]]*Dx + ...``."""
    if op.is_zero():
        return "0"
    parts = []
    for k in range(op.order, -1, -1):
        c = op.coeffs[k]
        if c.is_zero():
            continue
        d = _d_text(op.var, k)
        s = _scalar_identity(c)
        if s is not None and op.n > 1:
            coef = "(%s)*I" % ratfunc_text(s) if not s.is_one() else ("I" if not d else "")
        elif s is not None:
            coef = ratfunc_text(s) if not s.is_one() or not d else ""
            if coef and d and " " in coef:
                coef = "(" + coef + ")"
        else:
            coef = mat_text(c)
        if coef and d:
            parts.append(coef + "*" + d)
        else:
            parts.append(coef or d)
    return " + ".join(parts)
