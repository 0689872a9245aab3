"""LaTeX rendering of rational functions, matrices, operators and reports."""

from .exact import VARIABLES, as_ratfunc
from .linalg import Mat
from .ore import OreOp
from .report import VerificationReport

_TEX_ESCAPES = {"\\": r"\textbackslash{}", "^": r"\^{}", "_": r"\_", "&": r"\&",
                "%": r"\%", "$": r"\$", "#": r"\#", "{": r"\{", "}": r"\}", "~": r"\~{}"}


def _text(s):
    return "".join(_TEX_ESCAPES.get(c, c) for c in s)


def _rat(c):
    c = abs(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return r"\tfrac{%d}{%d}" % (int(c.numerator), int(c.denominator))


def _monomial(e):
    parts = []
    for i, name in enumerate(VARIABLES):
        if e[i] == 1:
            parts.append(name)
        elif e[i]:
            parts.append("%s^{%d}" % (name, e[i]))
    return " ".join(parts)


def poly_latex(p):
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _monomial(e)
        if not mono:
            body = _rat(c)
        elif abs(c) == 1:
            body = mono
        else:
            body = _rat(c) + " " + mono
        if not out:
            out.append("-" + body if c < 0 else body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def ratfunc_latex(f):
    f = as_ratfunc(f)
    if f.den.is_one():
        return poly_latex(f.num)
    num = f.num
    lead = num.leading_coeff()
    if lead < 0:
        return r"-\frac{%s}{%s}" % (poly_latex(-num), poly_latex(f.den))
    return r"\frac{%s}{%s}" % (poly_latex(num), poly_latex(f.den))


def mat_latex(m):
    rows = [" & ".join(ratfunc_latex(v) for v in r) for r in m.to_rows()]
    return r"\begin{pmatrix} " + r" \\ ".join(rows) + r" \end{pmatrix}"


def _scalar_multiple(m):
    if not m.is_square():
        return None
    c = m[0, 0]
    for i in range(m.rows):
        for j in range(m.cols):
            if m[i, j] != (c if i == j else 0):
                return None
    return c


def _coef_latex(c, n):
    s = _scalar_multiple(c)
    if s is None:
        return mat_latex(c)
    ident = "I_{%d}" % n if n > 1 else ""
    if s.is_one():
        return ident or "1"
    text = ratfunc_latex(s)
    if s.den.is_one() and len(s.num.items()) > 1:
        text = r"\left(%s\right)" % text
    return (text + " " + ident).strip()


def op_latex(op):
    if op.is_zero():
        return "0"
    parts = []
    for k in range(op.order, -1, -1):
        c = op.coeffs[k]
        if c.is_zero():
            continue
        d = ""
        if k:
            d = r"\partial_{%s}" % op.var + ("^{%d}" % k if k > 1 else "")
        coef = _coef_latex(c, op.n)
        if coef == "1" and d:
            coef = ""
        parts.append((coef + " " + d).strip())
    return " + ".join(parts).replace("+ -", "- ")


def report_latex(rep):
    lines = [r"\begin{tabular}{lll}", r"check & identity & result \\ \hline"]
    for c in rep.checks:
        lines.append(r"\texttt{%s} & \texttt{%s} & %s \\" % (
            _text(c.name), _text(c.identity), "pass" if c.passed else "FAIL"))
    lines.append(r"\hline")
    lines.append(r"\multicolumn{3}{l}{all checks: %s} \\" % ("pass" if rep.passed else "FAIL"))
    lines.append(r"\end{tabular}")
    return "\n".join(lines)


def emit_latex(obj):
    """Math markup for an operator, matrix, rational function or report."""
    if isinstance(obj, OreOp):
        return op_latex(obj)
    if isinstance(obj, Mat):
        return mat_latex(obj)
    if isinstance(obj, VerificationReport):
        return report_latex(obj)
    return ratfunc_latex(obj)


def latex_document(sections):
    """A standalone document from ``[(label, obj)]``; reports become tables."""
    out = [r"\documentclass{article}", r"\usepackage{amsmath}", r"\begin{document}"]
    for label, obj in sections:
        if isinstance(obj, VerificationReport):
            out.append(r"\subsection*{%s}" % _text(label))
            out.append(report_latex(obj))
        else:
            out.append(r"\[ %s = %s \]" % (label, emit_latex(obj)))
    out.append(r"\end{document}")
    return "\n".join(out) + "\n"
