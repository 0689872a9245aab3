"""JSON encoding of the exact types.

Input entries may be expression strings (``"1/x"``, ``"x^2 - 1"``), integers,
term lists ``[{"coeff": "p/q", "exponents": {"x": 2}}]`` or
``{"num": entry, "den": entry}``.  Output entries are always strings in the
expanded sparse text form, so result documents diff cleanly.
"""

import json

from ._scalar import Q, rat_text
from .airy import AiryContext, AiryOrbitSpec
from .errors import SchemaError
from .exact import VARIABLES, MPoly, as_ratfunc, ratfunc_text
from .linalg import BlockMat, Mat
from .matpoly import MatPolynomial
from .ore import ExpWave, OreOp
from .parse import parse_expr
from .rank1 import KernelEntry, QuasiKernelSpec
from .render import op_text


# -- decoding ---------------------------------------------------------------

def decode_rat(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError("expected a rational (integer or \"p/q\" string), got %r" % (v,))
    try:
        return Q(v)
    except (ValueError, ZeroDivisionError):
        raise SchemaError("malformed rational %r" % (v,)) from None


def _decode_terms(terms):
    out = MPoly()
    for term in terms:
        exps = term.get("exponents", {})
        if isinstance(exps, list):
            if len(exps) != len(VARIABLES):
                raise SchemaError("exponent lists are ordered (x, u, z, t)")
            exps = dict(zip(VARIABLES, exps))
        e = [0, 0, 0, 0]
        for name, k in exps.items():
            if name not in VARIABLES:
                raise SchemaError("unknown variable %r" % name)
            e[VARIABLES.index(name)] = int(k)
        out = out + MPoly({tuple(e): decode_rat(term["coeff"])})
    return out


def decode_entry(v, params=None):
    if isinstance(v, str):
        return parse_expr(v, params)
    if isinstance(v, int) and not isinstance(v, bool):
        return as_ratfunc(Q(v))
    if isinstance(v, list):
        return as_ratfunc(_decode_terms(v))
    if isinstance(v, dict) and "num" in v:
        den = decode_entry(v.get("den", 1), params)
        if den.is_zero():
            raise SchemaError("zero denominator")
        return decode_entry(v["num"], params) / den
    raise SchemaError("cannot read matrix entry %r" % (v,))


def decode_matrix(rows, params=None):
    if not rows or not all(isinstance(r, list) for r in rows):
        raise SchemaError("matrices are non-empty lists of rows")
    if len({len(r) for r in rows}) != 1 or not rows[0]:
        raise SchemaError("matrix rows must have equal nonzero length")
    return Mat.from_rows([[decode_entry(v, params) for v in r] for r in rows])


def decode_column(values, params=None):
    return Mat.column([decode_entry(v, params) for v in values])


def decode_operator(doc, params=None):
    coeffs = [decode_matrix(c, params) for c in doc["coeffs"]]
    n = coeffs[0].rows
    for c in coeffs:
        if c.shape != (n, n):
            raise SchemaError("operator coefficients must all be %dx%d" % (n, n))
    return OreOp(n, coeffs, doc.get("var", "x"))


def decode_matpoly(coeffs, params=None):
    return MatPolynomial([decode_matrix(c, params) for c in coeffs])


def decode_params(doc):
    return {k: decode_rat(v) for k, v in doc.get("parameters", {}).items()}


def decode_rank1_spec(doc, params=None):
    entries = [KernelEntry(decode_rat(e.get("alpha", 0)),
                           tuple(decode_entry(v, params) for v in e["p"]))
               for e in doc["kernel"]]
    return QuasiKernelSpec(int(doc["n"]), tuple(entries))


def decode_context(doc, alpha0=None):
    doc = doc or {}
    a0 = alpha0 if alpha0 is not None else decode_rat(doc.get("alpha0", -1))
    N = int(doc.get("N", 2))
    return AiryContext(N, tuple(decode_rat(a) for a in doc.get("alphas", [])), a0)


def decode_orbits(items, params=None):
    return [AiryOrbitSpec(decode_rat(o["lambda"]),
                          tuple(decode_column(p, params) for p in o["ps"])) for o in items]


def decode_blockmat(rows, params=None):
    try:
        return BlockMat([[decode_matrix(b, params) for b in r] for r in rows])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def decode_wave(doc):
    if "matrix" in doc:
        return ExpWave(decode_matrix(doc["matrix"]))
    raise SchemaError("only exponential waves can be decoded directly")


# -- encoding ---------------------------------------------------------------

def encode_entry(f):
    return ratfunc_text(as_ratfunc(f))


def encode_matrix(m):
    return [[encode_entry(v) for v in r] for r in m.to_rows()]


def encode_column(m):
    return [encode_entry(m[i, 0]) for i in range(m.rows)]


def encode_operator(op):
    return {"var": op.var, "order": op.order,
            "coeffs": [encode_matrix(c) for c in op.coeffs], "text": op_text(op)}


def encode_wave(w):
    if isinstance(w, ExpWave):
        return {"factor": "exp(x*z)", "matrix": encode_matrix(w.matrix)}
    return {"basis": "phi^(j)(%s)" % encode_entry(w.y),
            "blocks": [encode_matrix(b) for b in w.blocks]}


def encode_report(rep):
    return {"passed": rep.passed,
            "checks": [{"name": c.name, "identity": c.identity, "passed": c.passed,
                        "residual": [encode_matrix(m) for m in c.residual]}
                       for c in rep.checks]}


def encode_rank1_spec(spec):
    return {"n": spec.n,
            "kernel": [{"alpha": rat_text(e.alpha), "p": [encode_entry(v) for v in e.p]}
                       for e in spec.entries]}


def encode_context(ctx):
    return {"N": ctx.N, "alphas": [rat_text(a) for a in ctx.alphas],
            "alpha0": rat_text(ctx.alpha0)}


def encode_orbit(spec):
    return {"lambda": rat_text(spec.lam), "ps": [encode_column(p) for p in spec.ps]}


def encode_matpoly(q):
    return [encode_matrix(a) for a in q.coeffs]


def _flat(v):
    return not isinstance(v, (list, dict))


def _format(v, indent):
    pad = "  " * (indent + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = ["%s%s: %s" % (pad, json.dumps(k), _format(x, indent + 1)) for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(v, list):
        if all(_flat(x) for x in v):
            return "[" + ", ".join(json.dumps(x) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _format(x, indent + 1) for x in v) + "\n" + "  " * indent + "]"
    return json.dumps(v)


def dumps(doc):
    """Canonical text of a result document: insertion key order, one matrix row per line."""
    return _format(doc, 0) + "\n"
