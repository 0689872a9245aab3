"""Command-line front end.

``ncdx <mode> --input FILE [--latex FILE] [--alpha0 RAT] [--check-only]``

The result document goes to stdout.  Exit status: 0 every check passed,
1 a check failed, 2 malformed input, 3 a mathematical precondition failed.
"""

import argparse
import json
import sys
from importlib import resources

import jsonschema

from . import codec
from ._scalar import rat_text
from .airy import AiryBundle, AiryWave, airy_kernel_basis, darboux_airy, verify_airy
from .errors import InputError, NcdxError, SchemaError
from .exact import RatFunc
from .latex import latex_document
from .linalg import Mat, det, hstack, inverse, nullspace, quasideterminant, rank
from .matpoly import (_deflate, _dense_t, all_jordan_chains, chain_residuals, char_det,
                      jordan_chains)
from .ore import ExpWave, OreOp, compose_all, op_apply_left
from .rank1 import Rank1Bundle, darboux_rank1, verify_rank1
from .report import VerificationReport, wave_residual

MODES = ("rank1", "airy", "jordan", "quasidet", "verify")


def load_schema():
    text = resources.files("ncdx").joinpath("schemas/input.json").read_text()
    return json.loads(text)


def validate(mode, doc):
    schema = dict(load_schema())
    schema["$ref"] = "#/$defs/%s" % mode
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError("%s: %s" % (where, e.message))


def _entry_or_none(doc, key, params):
    return codec.decode_entry(doc[key], params) if key in doc else None


# -- modes ------------------------------------------------------------------

def _rank1(doc, opts):
    params = codec.decode_params(doc)
    spec = codec.decode_rank1_spec(doc, params)
    L = codec.decode_operator(doc["L"], params) if "L" in doc else None
    b = darboux_rank1(spec, L=L, multiplier=_entry_or_none(doc, "multiplier", params))
    out = {"mode": "rank1", "spec": codec.encode_rank1_spec(b.spec)}
    out.update(_bundle_fields(b))
    out["bL"] = codec.encode_matrix(b.bL)
    out["dual"] = codec.encode_operator(b.dual)
    out["Phi"] = codec.encode_wave(b.Phi)
    out["Phi_prime"] = codec.encode_wave(b.Phi_prime)
    sections = [("P", b.P), ("Q", b.Q), ("PQ", b.Ltilde), ("b(P')", b.bP),
                ("b(Q')", b.bQ), ("g", b.g), ("report", b.report)]
    return out, b.report, sections


def _bundle_fields(b):
    return {"P": codec.encode_operator(b.P), "Q": codec.encode_operator(b.Q),
            "L": codec.encode_operator(b.L), "PQ": codec.encode_operator(b.Ltilde),
            "P_prime": codec.encode_operator(b.P_prime),
            "Q_prime": codec.encode_operator(b.Q_prime),
            "g": codec.encode_matrix(b.g), "d": codec.encode_entry(b.d),
            "bP": codec.encode_operator(b.bP), "bQ": codec.encode_operator(b.bQ)}


def _airy(doc, opts):
    params = codec.decode_params(doc)
    ctx = codec.decode_context(doc.get("context"), opts.get("alpha0"))
    q = codec.decode_matpoly(doc["q"], params)
    if "orbits" in doc:
        specs = codec.decode_orbits(doc["orbits"], params)
    else:
        specs = airy_kernel_basis(q, ctx)
    b = darboux_airy(q, specs, ctx, multiplier=_entry_or_none(doc, "multiplier", params))
    out = {"mode": "airy", "context": codec.encode_context(ctx),
           "q": codec.encode_matpoly(q),
           "orbits": [codec.encode_orbit(s.reduced(ctx)) for s in b.specs]}
    out.update(_bundle_fields(b))
    out["qw"] = codec.encode_matrix(b.qw)
    out["dual"] = codec.encode_operator(b.dual)
    out["Phi"] = codec.encode_wave(b.Phi)
    out["Phi_prime"] = codec.encode_wave(b.Phi_prime)
    sections = [("P", b.P), ("Q", b.Q), ("PQ", b.Ltilde), ("b(P')", b.bP),
                ("b(Q')", b.bQ), ("g", b.g), ("report", b.report)]
    return out, b.report, sections


def _multiplicity(chi, lam):
    coeffs = _dense_t(chi)
    k = 0
    while len(coeffs) > 1:
        quo, rem = _deflate(coeffs, lam)
        if rem:
            break
        coeffs, k = quo, k + 1
    return k


def _jordan(doc, opts):
    params = codec.decode_params(doc)
    q = codec.decode_matpoly(doc["q"], params)
    chi = char_det(q)
    if "lambda" in doc:
        sets = [jordan_chains(q, codec.decode_rat(doc["lambda"]))]
    else:
        sets = all_jordan_chains(q)
    rep = VerificationReport()
    eig = []
    for s in sets:
        lam = rat_text(s.lam)
        for c, chain in enumerate(s.chains):
            rep.add("chain[%s][%d]" % (lam, c), "sum_r q^(r)(lam) v_(j-r) / r! = 0",
                    chain_residuals(q, s.lam, chain))
        mult = _multiplicity(chi, s.lam)
        rep.add("multiplicity[%s]" % lam, "total chain length = multiplicity of lam in det q",
                Mat.from_rows([[sum(s.lengths) - mult]]))
        leads = hstack([Mat.column(list(v)) for v in s.leading_vectors()])
        r = rank(leads)
        kernel_dim = len(nullspace(q.at(s.lam)))
        rep.add("leading_basis[%s]" % lam, "leading vectors form a basis of ker q(lam)",
                Mat.from_rows([[kernel_dim - r], [leads.cols - r]]))
        eig.append({"lambda": lam, "multiplicity": mult, "lengths": s.lengths,
                    "chains": [[[rat_text(a) for a in v] for v in chain] for chain in s.chains]})
    out = {"mode": "jordan", "q": codec.encode_matpoly(q), "char_det": str(chi),
           "eigenvalues": eig}
    return out, rep, [("\\det q(t)", RatFunc(chi)), ("report", rep)]


def _quasidet(doc, opts):
    params = codec.decode_params(doc)
    x = codec.decode_blockmat(doc["blocks"], params)
    i, j = doc["i"] - 1, doc["j"] - 1
    if x.block_rows != x.block_cols:
        raise SchemaError("block matrix must be square")
    if not (i < x.block_rows and j < x.block_cols):
        raise SchemaError("block index (%d, %d) out of range" % (doc["i"], doc["j"]))
    value = quasideterminant(x, i, j)
    rep = VerificationReport()
    flat = x.flatten()
    if not det(flat).is_zero():
        inv = inverse(flat)
        n = x.n
        block = inv.submatrix(range(j * n, (j + 1) * n), range(i * n, (i + 1) * n))
        if not det(block).is_zero():
            rep.add("inverse_block", "|X|_ij (X^-1)_ji = I", value * block - Mat.identity(n))
    if x.n == 1 and x.block_rows > 1:
        others_r = [a for a in range(x.block_rows) if a != i]
        others_c = [b for b in range(x.block_cols) if b != j]
        minor = flat.submatrix(others_r, others_c)
        sign = 1 if (i + j) % 2 == 0 else -1
        ratio = det(flat) * sign / det(minor)
        rep.add("determinant_ratio", "|X|_ij = (-1)^(i+j) det X / det X^ij",
                value - Mat.from_rows([[ratio]]))
    out = {"mode": "quasidet", "i": doc["i"], "j": doc["j"],
           "quasideterminant": codec.encode_matrix(value)}
    return out, rep, [("|X|_{%d%d}" % (doc["i"], doc["j"]), value), ("report", rep)]


def _verify(doc, opts):
    ops = {k: codec.decode_operator(doc[k]) for k in ("P", "Q", "L", "P_prime", "Q_prime", "bP", "bQ")}
    g = codec.decode_matrix(doc["g"])
    d = codec.decode_entry(doc["d"])
    n = ops["P"].n
    if doc["mode"] == "rank1":
        if "spec" not in doc or "bL" not in doc:
            raise SchemaError("rank1 documents need spec and bL")
        spec = codec.decode_rank1_spec(doc["spec"])
        bl = codec.decode_matrix(doc["bL"])
        psi = ExpWave.identity(n)
        b = Rank1Bundle(spec=spec, P=ops["P"], Q=ops["Q"], L=ops["L"], Ltilde=None,
                        P_prime=ops["P_prime"], Q_prime=ops["Q_prime"], g=g, d=d,
                        bP=ops["bP"], bQ=ops["bQ"], bL=bl, dual=None,
                        Phi=op_apply_left(ops["P"], psi),
                        Phi_prime=op_apply_left(ops["P_prime"], psi))
        rep = verify_rank1(b)
        weight = bl
    else:
        if "q" not in doc or "orbits" not in doc:
            raise SchemaError("airy documents need q and orbits")
        ctx = codec.decode_context(doc.get("context"), opts.get("alpha0"))
        q = codec.decode_matpoly(doc["q"])
        qw = q.at(ctx.w())
        psi = AiryWave.identity(ctx, n)
        b = AiryBundle(ctx=ctx, q=q, specs=codec.decode_orbits(doc["orbits"]), P=ops["P"],
                       Q=ops["Q"], L=ops["L"], Ltilde=None, P_prime=ops["P_prime"],
                       Q_prime=ops["Q_prime"], g=g, d=d, bP=ops["bP"], bQ=ops["bQ"],
                       qw=qw, dual=None, Phi=op_apply_left(ops["P"], psi),
                       Phi_prime=op_apply_left(ops["P_prime"], psi))
        rep = verify_airy(b)
        weight = qw
        if "L" in doc:
            rep.add("weight", "L = q(M)", (ops["L"] - q.of_operator(ctx.operator(n))).coeffs)
    if "dual" in doc:
        dual = codec.decode_operator(doc["dual"])
        expected = compose_all([OreOp.multiplication(inverse(weight), "z"), ops["bQ"], ops["bP"]])
        rep.add("dual", "dual = weight^-1 b(Q') b(P')", (dual - expected).coeffs)
    if "Phi" in doc:
        rep.add("Phi", "Phi = P Psi", wave_residual(_decode_wave(doc["Phi"], b), b.Phi))
    out = {"mode": "verify", "kind": doc["mode"]}
    return out, rep, [("report", rep)]


def _decode_wave(w, bundle):
    if isinstance(bundle, Rank1Bundle):
        return codec.decode_wave(w)
    if "blocks" not in w:
        raise SchemaError("Airy waves are stored as blocks")
    blocks = [codec.decode_matrix(m) for m in w["blocks"]]
    return AiryWave(bundle.ctx, blocks, RatFunc.var("x") + RatFunc.var("z"))


_HANDLERS = {"rank1": _rank1, "airy": _airy, "jordan": _jordan,
             "quasidet": _quasidet, "verify": _verify}


def run_job(mode, doc, alpha0=None, check_only=False):
    """Run one job; returns ``(exit_status, result_document, latex_sections)``."""
    if mode not in _HANDLERS:
        raise SchemaError("unknown mode %r" % mode)
    validate(mode, doc)
    if alpha0 is not None and not (mode == "airy" or (mode == "verify" and doc.get("mode") == "airy")):
        raise SchemaError("--alpha0 applies to Airy jobs only")
    out, rep, sections = _HANDLERS[mode](doc, {"alpha0": alpha0})
    out["report"] = codec.encode_report(rep)
    if check_only:
        out = {"mode": out["mode"], "report": out["report"]}
        sections = [s for s in sections if s[0] == "report"]
    return (0 if rep.passed else 1), out, sections


def error_document(mode, exc):
    return {"mode": mode, "error": {"type": type(exc).__name__, "message": str(exc),
                                    "exit": exc.exit_code}}


def build_parser():
    p = argparse.ArgumentParser(prog="ncdx", description="Exact matrix Darboux transformations.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--input", required=True, help="JSON job document")
    p.add_argument("--latex", help="write a LaTeX sidecar to this file")
    p.add_argument("--alpha0", help="override alpha_0 of the Airy operator (rational)")
    p.add_argument("--check-only", action="store_true", help="emit only the verification report")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise InputError("cannot read %s: %s" % (args.input, exc.strerror)) from None
        except json.JSONDecodeError as exc:
            raise SchemaError("invalid JSON in %s: %s" % (args.input, exc)) from None
        alpha0 = codec.decode_rat(args.alpha0) if args.alpha0 is not None else None
        status, out, sections = run_job(args.mode, doc, alpha0, args.check_only)
    except NcdxError as exc:
        sys.stdout.write(codec.dumps(error_document(args.mode, exc)))
        sys.stderr.write("ncdx: %s: %s\n" % (type(exc).__name__, exc))
        return exc.exit_code
    sys.stdout.write(codec.dumps(out))
    if args.latex:
        with open(args.latex, "w", encoding="utf-8") as fh:
            fh.write(latex_document(sections))
    if status:
        sys.stderr.write("ncdx: verification failed: %s\n"
                         % ", ".join(c["name"] for c in out["report"]["checks"] if not c["passed"]))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
