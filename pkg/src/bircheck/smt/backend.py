"""SMTLIB2 encoding of verification obligations and solver subprocess driving.

Obligations are checked one-shot: a QF_ABV script is written to the solver's
stdin and the sat/unsat/unknown verdict (plus a model, when sat) is read back.
The bundled `bircheck-smt` solver is used when no external solver is
configured; any SMTLIB2 solver supporting QF_ABV (e.g. z3) works via
`SolverConfig(argv=["z3", "-in"])` or the BIRCHECK_SOLVER environment variable.

Every sat model is re-evaluated through the concrete expression evaluator
before being trusted; a model that does not satisfy the asserted terms is a
hard error.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import bir
from .minismt import read_sexprs


class SmtError(Exception):
    pass


class UnsupportedTerm(SmtError):
    pass


class SolverCrash(SmtError):
    pass


class ModelParseError(SmtError):
    pass


class SolverModelUnsound(SmtError):
    """A sat model did not satisfy the asserted terms under concrete
    re-evaluation (zero tolerance; this is a soundness bug somewhere)."""


OBLIGATION_KINDS = ("feasibility", "simplification", "entailment")

_stats = {"checks": 0, "sat_models_checked": 0, "sat_model_failures": 0}


def model_check_stats():
    return dict(_stats)


@dataclass(frozen=True)
class Obligation:
    kind: str
    hypotheses: tuple      # of Imm1 SymExpr
    goal: object           # Imm1 SymExpr
    origin: str = ""
    defs: tuple = ()       # ((Sym, SymExpr), ...) abbreviation definitions, in order

    def __post_init__(self):
        if self.kind not in OBLIGATION_KINDS:
            raise ValueError(f"unknown obligation kind {self.kind!r}")


@dataclass(frozen=True)
class SolverVerdict:
    status: str            # "sat" | "unsat" | "unknown"
    model: dict | None = None  # symbol name -> int or {addr: byte}
    reason: str = ""

    @property
    def is_sat(self):
        return self.status == "sat"

    @property
    def is_unsat(self):
        return self.status == "unsat"


def default_solver_argv():
    env = os.environ.get("BIRCHECK_SOLVER")
    if env:
        return shlex.split(env)
    return [sys.executable, "-m", "bircheck.smt.minismt"]


@dataclass
class SolverConfig:
    argv: list = field(default_factory=default_solver_argv)
    timeout: float = 30.0
    dump_dir: str | None = None
    pool: int = 4
    _dump_counter: int = 0


# ---------------------------------------------------------------------------
# Encoding

def _sort_of(ty):
    if ty is bir.Mem:
        return "(Array (_ BitVec 64) (_ BitVec 8))"
    return f"(_ BitVec {ty.width})"


def _terms_of(obl):
    """The terms asserted for this obligation, in assertion order."""
    if obl.kind == "feasibility":
        return list(obl.hypotheses) + [obl.goal]
    # entailment / simplification: hypotheses AND NOT goal; unsat => entailed
    return list(obl.hypotheses) + [bir.unop("not", obl.goal)]


def encode(obl: Obligation) -> str:
    """Render an obligation as an SMTLIB2 QF_ABV script ending in
    (check-sat)(get-model)."""
    asserted = _terms_of(obl)
    def_names = {s.name for s, _ in obl.defs}

    syms = {}
    for _, d in obl.defs:
        bir.collect_syms(d, syms)
    for t in asserted:
        bir.collect_syms(t, syms)
    declared = [s for name, s in syms.items() if name not in def_names]

    # share interior nodes referenced more than once via define-funs
    refs = {}

    def count(e):
        refs[id(e)] = refs.get(id(e), 0) + 1
        if refs[id(e)] > 1:
            return
        if isinstance(e, bir.UnOp):
            count(e.a)
        elif isinstance(e, (bir.BinOp, bir.BinPred)):
            count(e.a), count(e.b)
        elif isinstance(e, bir.Ite):
            count(e.cond), count(e.then), count(e.els)
        elif isinstance(e, bir.Cast):
            count(e.a)
        elif isinstance(e, bir.Load):
            count(e.mem), count(e.addr)
        elif isinstance(e, bir.Store):
            count(e.mem), count(e.addr), count(e.value)

    for _, d in obl.defs:
        count(d)
    for t in asserted:
        count(t)

    emit = []          # define-fun lines, in dependency order
    shared_count = [0]
    rendered = {}

    def render(e):
        got = rendered.get(id(e))
        if got is not None:
            return got
        text = _render(e)
        if refs.get(id(e), 0) > 1 and not isinstance(e, (bir.Const, bir.Sym)):
            name = f".t{shared_count[0]}"
            shared_count[0] += 1
            emit.append(f"(define-fun {name} () {_sort_of(e.ty)} {text})")
            text = name
        rendered[id(e)] = text
        return text

    def render_bool(e):
        return f"(= {render(e)} #b1)"

    def _render(e):
        if isinstance(e, bir.Const):
            return f"(_ bv{e.val} {e.ty.width})"
        if isinstance(e, bir.Sym):
            return e.name
        if isinstance(e, bir.Den):
            raise UnsupportedTerm(f"free program variable {e.var.name} in obligation")
        if isinstance(e, bir.UnOp):
            op = "bvnot" if e.op == "not" else "bvneg"
            return f"({op} {render(e.a)})"
        if isinstance(e, bir.BinOp):
            op = {"plus": "bvadd", "minus": "bvsub", "mult": "bvmul",
                  "udiv": "bvudiv", "and": "bvand", "or": "bvor", "xor": "bvxor",
                  "shl": "bvshl", "lshr": "bvlshr", "ashr": "bvashr"}[e.op]
            return f"({op} {render(e.a)} {render(e.b)})"
        if isinstance(e, bir.BinPred):
            a, b = render(e.a), render(e.b)
            pred = {"eq": f"(= {a} {b})", "ne": f"(distinct {a} {b})",
                    "ult": f"(bvult {a} {b})", "ule": f"(bvule {a} {b})",
                    "slt": f"(bvslt {a} {b})"}[e.op]
            return f"(ite {pred} #b1 #b0)"
        if isinstance(e, bir.Ite):
            return f"(ite (= {render(e.cond)} #b1) {render(e.then)} {render(e.els)})"
        if isinstance(e, bir.Cast):
            w0, w1 = e.a.ty.width, e.ty.width
            a = render(e.a)
            if w0 == w1:
                return a
            if e.kind == "low":
                return f"((_ extract {w1 - 1} 0) {a})"
            ext = "zero_extend" if e.kind == "zext" else "sign_extend"
            return f"((_ {ext} {w1 - w0}) {a})"
        if isinstance(e, bir.Load):
            m, a = render(e.mem), render(e.addr)
            nbytes = e.width // 8
            sel = [f"(select {m} {_offset(a, k)})" for k in range(nbytes)]
            if nbytes == 1:
                return sel[0]
            return "(concat " + " ".join(reversed(sel)) + ")"
        if isinstance(e, bir.Store):
            m, a, v = render(e.mem), render(e.addr), render(e.value)
            nbytes = e.value.ty.width // 8
            out = m
            for k in range(nbytes):
                byte = f"((_ extract {8 * k + 7} {8 * k}) {v})" if nbytes > 1 else v
                out = f"(store {out} {_offset(a, k)} {byte})"
            return out
        raise UnsupportedTerm(repr(e))

    lines = ["(set-logic QF_ABV)"]
    for s in declared:
        lines.append(f"(declare-const {s.name} {_sort_of(s.ty)})")

    for s, d in obl.defs:
        body = render(d)
        emit.append(f"(define-fun {s.name} () {_sort_of(s.ty)} {body})")
    for t in asserted:
        emit.append(f"(assert {render_bool(t)})")
    lines.extend(emit)
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def _offset(addr_text, k):
    if k == 0:
        return addr_text
    return f"(bvadd {addr_text} (_ bv{k} 64))"


# ---------------------------------------------------------------------------
# Model parsing

def _parse_value(form):
    if isinstance(form, str):
        if form.startswith("#x"):
            return int(form[2:], 16)
        if form.startswith("#b"):
            return int(form[2:], 2)
        if form == "true":
            return 1
        if form == "false":
            return 0
        raise ModelParseError(f"unparsable value {form!r}")
    if form and form[0] == "_" and form[1].startswith("bv"):
        return int(form[1][2:])
    if form and form[0] == "store":
        arr = _parse_value(form[1])
        if not isinstance(arr, dict):
            raise ModelParseError("store over non-array model value")
        arr = dict(arr)
        arr[_parse_value(form[2])] = _parse_value(form[3])
        return arr
    if form and isinstance(form[0], list) and form[0][:2] == ["as", "const"]:
        default = _parse_value(form[1])
        if default != 0:
            raise ModelParseError("constant arrays with nonzero default unsupported")
        return {}
    raise ModelParseError(f"unparsable model value {form!r}")


def parse_model(text: str) -> dict:
    """Extract name -> value from solver get-model output."""
    forms = read_sexprs(text)
    entries = {}
    for form in forms:
        if not isinstance(form, list):
            continue
        items = form[1:] if form and form[0] == "model" else form
        for item in items:
            if isinstance(item, list) and item and item[0] == "define-fun":
                name = item[1]
                entries[name] = _parse_value(item[4])
    return entries


# ---------------------------------------------------------------------------
# Checking

def _extend_model(obl, model):
    """Interpretation for all symbols: declared values from the model
    (defaults for omitted ones) plus abbreviation values by evaluation."""
    interp = {}
    syms = {}
    for _, d in obl.defs:
        bir.collect_syms(d, syms)
    for t in _terms_of(obl):
        bir.collect_syms(t, syms)
    def_names = {s.name for s, _ in obl.defs}
    for name, s in syms.items():
        if name in def_names:
            continue
        if name in model:
            interp[name] = model[name]
        else:
            interp[name] = {} if s.ty is bir.Mem else 0
    for s, d in obl.defs:
        interp[s.name] = bir.eval_exp(d, {}, interp)
    return interp


def _verify_model(obl, interp):
    for t in _terms_of(obl):
        if bir.eval_exp(t, {}, interp) != 1:
            raise SolverModelUnsound(
                f"model does not satisfy asserted term for {obl.origin or obl.kind}: "
                f"{bir.print_exp(t)}")


def check(obl: Obligation, cfg: SolverConfig | None = None) -> SolverVerdict:
    """Run the obligation through the configured solver subprocess."""
    cfg = cfg or SolverConfig()
    _stats["checks"] += 1
    text = encode(obl)
    if cfg.dump_dir:
        os.makedirs(cfg.dump_dir, exist_ok=True)
        cfg._dump_counter += 1
        tag = "".join(ch if ch.isalnum() else "_" for ch in (obl.origin or "obl"))[:60]
        path = os.path.join(cfg.dump_dir, f"{cfg._dump_counter:04d}_{obl.kind}_{tag}.smt2")
        with open(path, "w") as f:
            f.write(text)
    if cfg.timeout is not None and cfg.timeout <= 0:
        return SolverVerdict("unknown", reason="timeout")
    try:
        proc = subprocess.run(cfg.argv, input=text, capture_output=True,
                              text=True, timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        return SolverVerdict("unknown", reason="timeout")
    except OSError as e:
        raise SolverCrash(f"cannot run solver {cfg.argv!r}: {e}") from e
    out = proc.stdout
    first, _, rest = out.partition("\n")
    first = first.strip()
    if first == "unsat":
        return SolverVerdict("unsat")
    if first == "unknown":
        return SolverVerdict("unknown", reason=(proc.stderr.strip() or "solver returned unknown"))
    if first != "sat":
        raise SolverCrash(f"solver produced no verdict (stdout={out[:200]!r}, "
                          f"stderr={proc.stderr[:200]!r})")
    model = parse_model(rest)
    interp = _extend_model(obl, model)
    _stats["sat_models_checked"] += 1
    try:
        _verify_model(obl, interp)
    except SolverModelUnsound:
        _stats["sat_model_failures"] += 1
        raise
    return SolverVerdict("sat", model=interp)


def check_many(obligations, cfg: SolverConfig | None = None):
    """Check independent obligations on a bounded subprocess pool, preserving
    input order in the result list."""
    cfg = cfg or SolverConfig()
    obls = list(obligations)
    if len(obls) <= 1 or cfg.pool <= 1:
        return [check(o, cfg) for o in obls]
    with ThreadPoolExecutor(max_workers=cfg.pool) as ex:
        return list(ex.map(lambda o: check(o, cfg), obls))
