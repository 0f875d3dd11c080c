"""ISA-level and BIR-level binary contracts.

A contract names an entry address, a set of endpoint addresses, parameters,
a precondition and one postcondition per endpoint.  ISA-level predicates are
conjunctions of comparisons over registers, CSRs, 64-bit little-endian memory
loads, parameters and 64-bit word arithmetic.  They translate mechanically to
IR expressions over the lifter's variable convention; the translation is
validated by evaluation equivalence on random states.

Verification runs the symbolic engine with the translated precondition as the
initial path condition and discharges one entailment obligation per leaf; a
sat counter-model refutes the contract and replays concretely.

Contract file grammar (line oriented, '#' comments)::

    program <name>
    entry <addr>
    endpoints <addr> [<addr> ...]
    forbidden [<addr> ...]
    params <name> [<name> ...]
    pre:
      <comparison>            ; one conjunct per line
      ...
    post <addr>:
      <comparison>
      ...

    comparison ::= expr (== | <u | <=u) expr
    expr       ::= sums and masks over: INT, 0xHEX, param, gpr[i], csr[name],
                   mem_load_dword(expr), sext32(expr), (expr),
                   with operators  * ; + - ; << >> >>s ; & ; ^ ; |
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field

from . import bir, isa, lifter, symexec
from .bir import binop, binpred, cast, const, den, load, sym
from .smt import Obligation, SolverConfig, check


class ContractError(Exception):
    pass


class UntranslatableAtom(ContractError):
    pass


class EvidenceMissing(ContractError):
    pass


# ---------------------------------------------------------------------------
# Predicate expressions

@dataclass(frozen=True)
class RConst:
    val: int


@dataclass(frozen=True)
class RParam:
    name: str


@dataclass(frozen=True)
class RGpr:
    idx: int


@dataclass(frozen=True)
class RCsr:
    name: str


@dataclass(frozen=True)
class RMemLoad:
    addr: object


@dataclass(frozen=True)
class RUn:
    op: str  # sext32
    a: object


@dataclass(frozen=True)
class RBin:
    op: str  # add sub mul and or xor shl lshr ashr
    a: object
    b: object


@dataclass(frozen=True)
class RCmp:
    op: str  # eq ult ule
    a: object
    b: object


# a predicate is a conjunction of comparisons; () is true
Predicate = tuple

M64 = (1 << 64) - 1


def eval_rexp(e, m: isa.MachineState, params: dict) -> int:
    if isinstance(e, RConst):
        return e.val & M64
    if isinstance(e, RParam):
        try:
            return params[e.name] & M64
        except KeyError:
            raise ContractError(f"parameter {e.name} has no value") from None
    if isinstance(e, RGpr):
        return m.read_gpr(e.idx)
    if isinstance(e, RCsr):
        return m.csr[e.name]
    if isinstance(e, RMemLoad):
        return isa.mem_load_dword(m.mem, eval_rexp(e.addr, m, params))
    if isinstance(e, RUn):
        return isa.u64(isa.sext(eval_rexp(e.a, m, params) & 0xFFFFFFFF, 32))
    a = eval_rexp(e.a, m, params)
    b = eval_rexp(e.b, m, params)
    if e.op == "add":
        return (a + b) & M64
    if e.op == "sub":
        return (a - b) & M64
    if e.op == "mul":
        return (a * b) & M64
    if e.op == "and":
        return a & b
    if e.op == "or":
        return a | b
    if e.op == "xor":
        return a ^ b
    if e.op == "shl":
        return (a << b) & M64 if b < 64 else 0
    if e.op == "lshr":
        return a >> b if b < 64 else 0
    if e.op == "ashr":
        s = isa.to_signed(a)
        return (s >> b) & M64 if b < 64 else (M64 if s < 0 else 0)
    raise ContractError(f"unknown operator {e.op}")


def eval_pred(pred: Predicate, m: isa.MachineState, params: dict) -> bool:
    for c in pred:
        a = eval_rexp(c.a, m, params)
        b = eval_rexp(c.b, m, params)
        ok = a == b if c.op == "eq" else (a < b if c.op == "ult" else a <= b)
        if not ok:
            return False
    return True


def translate_exp(e):
    """ISA predicate expression -> IR expression over the lift convention."""
    if isinstance(e, RConst):
        return const(64, e.val)
    if isinstance(e, RParam):
        return sym(e.name, bir.Imm64)
    if isinstance(e, RGpr):
        if e.idx == 0:
            return const(64, 0)
        return den(lifter.xvar(e.idx))
    if isinstance(e, RCsr):
        return den(lifter.csrvar(e.name))
    if isinstance(e, RMemLoad):
        return load(den(lifter.MEM8), translate_exp(e.addr), 64)
    if isinstance(e, RUn):
        return cast("sext", 64, cast("low", 32, translate_exp(e.a)))
    if isinstance(e, RBin):
        op = {"add": "plus", "sub": "minus", "mul": "mult", "and": "and",
              "or": "or", "xor": "xor", "shl": "shl", "lshr": "lshr",
              "ashr": "ashr"}[e.op]
        return binop(op, translate_exp(e.a), translate_exp(e.b))
    raise UntranslatableAtom(repr(e))


def translate(pred: Predicate):
    """Conjunction of translated comparisons as an imm1 expression."""
    out = bir.true_exp
    for c in pred:
        atom = binpred(c.op, translate_exp(c.a), translate_exp(c.b))
        out = atom if out is bir.true_exp else binop("and", out, atom)
    return out


def pred_params(pred: Predicate):
    names = []

    def walk(e):
        if isinstance(e, RParam):
            if e.name not in names:
                names.append(e.name)
        elif isinstance(e, RMemLoad):
            walk(e.addr)
        elif isinstance(e, RUn):
            walk(e.a)
        elif isinstance(e, (RBin, RCmp)):
            walk(e.a)
            walk(e.b)

    for c in pred:
        walk(c)
    return names


# ---------------------------------------------------------------------------
# Contracts

@dataclass(frozen=True)
class Param:
    name: str
    ty: object = bir.Imm64


@dataclass
class RiscvContract:
    name: str
    entry: int
    endpoints: frozenset
    pre: Predicate
    post: dict            # endpoint -> Predicate
    params: tuple         # of Param
    forbidden: frozenset = frozenset()

    def __post_init__(self):
        for ep in self.endpoints:
            if ep not in self.post:
                raise ContractError(f"endpoint 0x{ep:x} has no postcondition")


@dataclass
class BirContract:
    program: bir.BirProgram
    entry: int
    endpoints: frozenset
    forbidden: frozenset
    pre: object            # imm1 SymExpr over program variables + params
    post: dict             # label -> imm1 SymExpr (others implicitly false)
    invariant: object = bir.true_exp  # carried but fixed to true


def to_bir(rc: RiscvContract, program: bir.BirProgram) -> BirContract:
    return BirContract(program=program, entry=rc.entry, endpoints=rc.endpoints,
                       forbidden=rc.forbidden, pre=translate(rc.pre),
                       post={ep: translate(p) for ep, p in rc.post.items()})


# ---------------------------------------------------------------------------
# Contract text format

_TOKEN_RE = re.compile(r"""
    (?P<hex>0x[0-9a-fA-F]+) | (?P<int>\d+) |
    (?P<name>[A-Za-z_][A-Za-z_0-9.]*) |
    (?P<op><=u|<u|==|>>s|<<|>>|[-+*&^|()\[\],])
""", re.X)


def _tokenize_expr(text, where):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ContractError(f"{where}: cannot tokenize {text[pos:]!r}")
        out.append(m.group(0))
        pos = m.end()
    return out


class _ExprParser:
    # precedence, loosest first
    LEVELS = [("|",), ("^",), ("&",), ("<<", ">>", ">>s"), ("+", "-"), ("*",)]
    OPS = {"|": "or", "^": "xor", "&": "and", "<<": "shl", ">>": "lshr",
           ">>s": "ashr", "+": "add", "-": "sub", "*": "mul"}

    def __init__(self, tokens, params, where):
        self.toks = tokens
        self.i = 0
        self.params = params
        self.where = where

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, what=None):
        t = self.peek()
        if t is None or (what is not None and t != what):
            raise ContractError(f"{self.where}: expected {what!r}, got {t!r}")
        self.i += 1
        return t

    def parse_cmp(self):
        a = self.parse_expr()
        op = self.take()
        if op not in ("==", "<u", "<=u"):
            raise ContractError(f"{self.where}: expected comparison, got {op!r}")
        b = self.parse_expr()
        if self.peek() is not None:
            raise ContractError(f"{self.where}: trailing tokens {self.toks[self.i:]}")
        kind = {"==": "eq", "<u": "ult", "<=u": "ule"}[op]
        return RCmp(kind, a, b)

    def parse_expr(self, level=0):
        if level == len(self.LEVELS):
            return self.parse_unary()
        ops = self.LEVELS[level]
        e = self.parse_expr(level + 1)
        while self.peek() in ops:
            op = self.take()
            rhs = self.parse_expr(level + 1)
            e = RBin(self.OPS[op], e, rhs)
        return e

    def parse_unary(self):
        t = self.peek()
        if t == "-":
            self.take()
            return RBin("sub", RConst(0), self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        t = self.take()
        if t == "(":
            e = self.parse_expr()
            self.take(")")
            return e
        if t.startswith("0x"):
            return RConst(int(t, 16))
        if t.isdigit():
            return RConst(int(t))
        if t == "gpr":
            self.take("[")
            idx = int(self.take())
            self.take("]")
            if not 0 <= idx < 32:
                raise ContractError(f"{self.where}: bad register index {idx}")
            return RGpr(idx)
        if t == "csr":
            self.take("[")
            name = self.take()
            self.take("]")
            if name not in isa.CSR_LIST:
                raise ContractError(f"{self.where}: unsupported csr {name!r}")
            return RCsr(name)
        if t == "mem_load_dword":
            self.take("(")
            e = self.parse_expr()
            self.take(")")
            return RMemLoad(e)
        if t == "sext32":
            self.take("(")
            e = self.parse_expr()
            self.take(")")
            return RUn("sext32", e)
        if t in self.params:
            return RParam(t)
        raise ContractError(f"{self.where}: unknown symbol {t!r} "
                            f"(parameters must be declared)")


def parse_comparison(text, params, where="predicate"):
    return _ExprParser(_tokenize_expr(text, where), params, where).parse_cmp()


def parse_contract(text: str) -> RiscvContract:
    name = None
    entry = None
    endpoints = []
    forbidden = []
    params = []
    pre = []
    post = {}
    section = None  # None | ("pre",) | ("post", addr)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {line_no}"
        head, _, rest = line.partition(" ")
        if head == "program":
            name = rest.strip()
            section = None
        elif head == "entry":
            entry = int(rest.strip(), 0)
            section = None
        elif head in ("endpoint", "endpoints"):
            endpoints += [int(x, 0) for x in rest.split()]
            section = None
        elif head == "forbidden":
            forbidden += [int(x, 0) for x in rest.split()]
            section = None
        elif head in ("param", "params"):
            for p in rest.split():
                if p.startswith("s_") or p.startswith("ab"):
                    raise ContractError(f"{where}: parameter name {p!r} collides "
                                        f"with engine symbol namespaces")
                params.append(p)
            section = None
        elif line in ("pre:", "pre"):
            section = ("pre",)
        elif head == "post":
            addr = rest.strip().rstrip(":").strip()
            section = ("post", int(addr, 0))
        elif section is not None:
            cmpv = parse_comparison(line, set(params), where)
            if section[0] == "pre":
                pre.append(cmpv)
            else:
                post.setdefault(section[1], []).append(cmpv)
        else:
            raise ContractError(f"{where}: unexpected line {line!r}")
    if name is None or entry is None or not endpoints:
        raise ContractError("contract needs program, entry and endpoints")
    for ep in endpoints:
        post.setdefault(ep, [])
    return RiscvContract(name=name, entry=entry, endpoints=frozenset(endpoints),
                         pre=tuple(pre), post={a: tuple(p) for a, p in post.items()},
                         params=tuple(Param(p) for p in params),
                         forbidden=frozenset(forbidden))


def print_rexp(e) -> str:
    if isinstance(e, RConst):
        return str(e.val) if e.val < 1024 else f"0x{e.val:x}"
    if isinstance(e, RParam):
        return e.name
    if isinstance(e, RGpr):
        return f"gpr[{e.idx}]"
    if isinstance(e, RCsr):
        return f"csr[{e.name}]"
    if isinstance(e, RMemLoad):
        return f"mem_load_dword({print_rexp(e.addr)})"
    if isinstance(e, RUn):
        return f"sext32({print_rexp(e.a)})"
    ops = {"add": "+", "sub": "-", "mul": "*", "and": "&", "or": "|",
           "xor": "^", "shl": "<<", "lshr": ">>", "ashr": ">>s"}
    return f"({print_rexp(e.a)} {ops[e.op]} {print_rexp(e.b)})"


def print_contract(rc: RiscvContract) -> str:
    out = [f"program {rc.name}", f"entry 0x{rc.entry:x}",
           "endpoints " + " ".join(f"0x{a:x}" for a in sorted(rc.endpoints))]
    if rc.forbidden:
        out.append("forbidden " + " ".join(f"0x{a:x}" for a in sorted(rc.forbidden)))
    if rc.params:
        out.append("params " + " ".join(p.name for p in rc.params))
    out.append("pre:")
    cmps = {"eq": "==", "ult": "<u", "ule": "<=u"}
    for c in rc.pre:
        out.append(f"  {print_rexp(c.a)} {cmps[c.op]} {print_rexp(c.b)}")
    for ep in sorted(rc.post):
        out.append(f"post 0x{ep:x}:")
        for c in rc.post[ep]:
            out.append(f"  {print_rexp(c.a)} {cmps[c.op]} {print_rexp(c.b)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Verification

@dataclass
class VerificationResult:
    verdict: str                   # "verified" | "refuted" | "unknown"
    endpoint: int | None = None    # refuting leaf location
    counterexample: dict | None = None
    reason: str = ""
    leaf_count: int = 0
    obligations: list = field(default_factory=list)  # {origin, kind, status, seconds}
    times: dict = field(default_factory=dict)
    structure: object = None

    def to_json_dict(self):
        cex = None
        if self.counterexample is not None:
            cex = {k: (v if isinstance(v, int) else
                       {f"0x{a:x}": b for a, b in sorted(v.items())})
                   for k, v in sorted(self.counterexample.items())}
        return {
            "schema": "bircheck-report/1",
            "verdict": self.verdict,
            "endpoint": f"0x{self.endpoint:x}" if self.endpoint is not None else None,
            "counterexample": cex,
            "reason": self.reason,
            "leaves": self.leaf_count,
            "obligations": self.obligations,
            "times": {k: round(v, 6) for k, v in self.times.items()},
        }


def _collect_extra_vars(*exprs):
    seen = {}
    for e in exprs:
        bir._collect_vars(e, seen)
    return list(seen.values())


def verify(bc: BirContract, config: symexec.EngineConfig | None = None,
           solver: SolverConfig | None = None) -> VerificationResult:
    """Symbolically execute under the contract precondition and discharge the
    postcondition entailment for every leaf."""
    config = config or symexec.EngineConfig()
    solver = solver or SolverConfig()
    t_start = time.perf_counter()
    extra = _collect_extra_vars(bc.pre, *bc.post.values())
    log = []
    try:
        t0 = time.perf_counter()
        structure = symexec.execute(bc.program, bc.entry, bc.endpoints,
                                    bc.forbidden, bc.pre, config, solver,
                                    extra_vars=extra)
        t_symex = time.perf_counter() - t0
    except symexec.BudgetExhausted as e:
        return VerificationResult("unknown", reason=f"budget exhausted: {e}",
                                  times={"total": time.perf_counter() - t_start})
    except symexec.IndirectTargetUnbounded as e:
        return VerificationResult("unknown", reason=str(e),
                                  times={"total": time.perf_counter() - t_start})
    except symexec.ForbiddenLabelReached as e:
        cex, status = _model_of_state(e.state, solver, log)
        verdict = "refuted" if status == "sat" else "unknown"
        return VerificationResult(verdict, endpoint=e.label, counterexample=cex,
                                  reason="forbidden label reached",
                                  obligations=log,
                                  times={"total": time.perf_counter() - t_start})

    result = VerificationResult("verified", leaf_count=len(structure.leaves),
                                structure=structure, obligations=log)
    t_solver = 0.0
    unknown_reason = ""
    for leaf in structure.leaves:
        if leaf.halted or leaf.at not in bc.endpoints:
            cex, status = _model_of_state(leaf, solver, log)
            if status == "unsat":
                continue  # kept pessimistically by pruning, not a real path
            if status == "sat":
                result.verdict = "refuted"
                result.endpoint = leaf.at
                result.counterexample = cex
                result.reason = ("halted off-program" if leaf.halted else
                                 f"leaf at non-endpoint 0x{leaf.at:x}")
                break
            unknown_reason = f"feasibility unknown at 0x{leaf.at:x}"
            continue
        goal = bir.subst(bc.post[leaf.at], var_map=leaf.env)
        goal = symexec.simplify_exp(goal, path=leaf.path, abbrevs=leaf.abbrevs,
                                    solver=solver, passes=config.simplify_passes,
                                    use_solver=config.use_solver_mem_rules)
        obl = Obligation("entailment", (leaf.path,), goal,
                         origin=f"post@0x{leaf.at:x}", defs=leaf.abbrevs)
        t0 = time.perf_counter()
        v = check(obl, solver)
        dt = time.perf_counter() - t0
        t_solver += dt
        log.append({"origin": obl.origin, "kind": obl.kind, "status": v.status,
                    "seconds": round(dt, 6)})
        if v.is_sat:
            result.verdict = "refuted"
            result.endpoint = leaf.at
            result.counterexample = v.model
            result.reason = f"postcondition violated at 0x{leaf.at:x}"
            break
        if not v.is_unsat:
            unknown_reason = f"solver returned {v.status} for post@0x{leaf.at:x}"
    if result.verdict == "verified" and unknown_reason:
        result.verdict = "unknown"
        result.reason = unknown_reason
    result.times = {"total": time.perf_counter() - t_start,
                    "symex": t_symex, "solver": t_solver}
    return result


def _model_of_state(state, solver, log):
    obl = Obligation("feasibility", (), state.path,
                     origin=f"leaf@0x{state.at:x}", defs=state.abbrevs)
    t0 = time.perf_counter()
    v = check(obl, solver)
    log.append({"origin": obl.origin, "kind": obl.kind, "status": v.status,
                "seconds": round(time.perf_counter() - t0, 6)})
    return (v.model, v.status)


# ---------------------------------------------------------------------------
# Concrete replay and sampling

def env_from_model(program, model, extra_vars=()):
    """Initial concrete environment named by the model's s_<var> symbols."""
    env = {}
    for v in list(program.variables()) + list(extra_vars):
        if v in env:
            continue
        got = model.get(f"s_{v.name}")
        if got is None:
            got = {} if v.ty is bir.Mem else 0
        env[v] = dict(got) if isinstance(got, dict) else got
    return env


def machine_from_model(model) -> isa.MachineState:
    m = isa.MachineState()
    for i in range(1, 32):
        m.gpr[i] = model.get(f"s_x{i}", 0)
    for name in isa.CSR_LIST:
        m.csr[name] = model.get(f"s_{name}", 0)
    mem = model.get("s_MEM8", {})
    m.mem = dict(mem) if isinstance(mem, dict) else {}
    return m


def params_from_model(rc: RiscvContract, model) -> dict:
    return {p.name: model.get(p.name, 0) for p in rc.params}


def replay_counterexample(rc: RiscvContract, prog_slice, model, fuel=100_000):
    """Run the ISA interpreter from the counter-model's initial state and
    report (stop address, post holds?)."""
    m = machine_from_model(model)
    m.pc = rc.entry
    params = params_from_model(rc, model)
    final, _ = isa.run(m, prog_slice, fuel)
    post = rc.post.get(final.pc)
    holds = post is not None and eval_pred(post, final, params)
    return final.pc, holds


def sample_prestate(rc: RiscvContract, rng: random.Random):
    """A random (MachineState, params) satisfying the precondition.  Handles
    the common atom shapes directly (range constraints on parameters,
    equalities pinning registers/CSRs/memory to parameter expressions) and
    falls back to rejection sampling."""
    for _ in range(200):
        m = isa.MachineState(pc=rc.entry)
        for i in range(1, 32):
            m.gpr[i] = rng.getrandbits(64)
        for name in isa.CSR_LIST:
            m.csr[name] = rng.getrandbits(64)
        params = {p.name: rng.getrandbits(64) for p in rc.params}
        for c in rc.pre:  # clamp parameter ranges first
            if c.op in ("ult", "ule") and isinstance(c.a, RParam) and \
                    isinstance(c.b, RConst):
                bound = c.b.val + (1 if c.op == "ule" else 0)
                if bound:
                    params[c.a.name] %= bound
        ok = True
        for c in rc.pre:
            if c.op != "eq":
                continue
            lhs, rhs = c.a, c.b
            if not isinstance(lhs, (RGpr, RCsr, RMemLoad)):
                lhs, rhs = rhs, lhs
            try:
                val = eval_rexp(rhs, m, params)
            except ContractError:
                ok = False
                break
            if isinstance(lhs, RGpr) and lhs.idx != 0:
                m.gpr[lhs.idx] = val
            elif isinstance(lhs, RCsr):
                m.csr[lhs.name] = val
            elif isinstance(lhs, RMemLoad):
                addr = eval_rexp(lhs.addr, m, params)
                isa.mem_store(m.mem, addr, val, 8)
        if ok and eval_pred(rc.pre, m, params):
            return m, params
    raise ContractError(f"could not sample a state satisfying the precondition "
                        f"of {rc.name}")


# ---------------------------------------------------------------------------
# Translation equivalence (ISA predicate vs translated IR predicate)

def translation_check(pred: Predicate, trials: int, seed: int):
    """Evaluate the ISA predicate and its translation on random states and
    parameter valuations; exact agreement required."""
    rng = random.Random(seed)
    exp = translate(pred)
    params = pred_params(pred)
    mismatches = []
    for t in range(trials):
        m = lifter.random_machine_state(rng, 0)
        vals = {p: rng.getrandbits(64) for p in params}
        # make memory atoms read seeded bytes sometimes
        for c in pred:
            for e in _memloads(c):
                try:
                    addr = eval_rexp(e.addr, m, vals)
                except ContractError:
                    continue
                if rng.random() < 0.8:
                    for k in range(8):
                        m.mem[(addr + k) & M64] = rng.getrandbits(8)
        want = eval_pred(pred, m, vals)
        env = lifter.machine_to_env(m)
        got = bir.eval_exp(exp, env, vals) == 1
        if want != got:
            mismatches.append({"trial": t, "want": want, "got": got})
            if len(mismatches) >= 3:
                break
    return mismatches


def _memloads(c):
    out = []

    def walk(e):
        if isinstance(e, RMemLoad):
            out.append(e)
            walk(e.addr)
        elif isinstance(e, RUn):
            walk(e.a)
        elif isinstance(e, (RBin, RCmp)):
            walk(e.a)
            walk(e.b)

    walk(c)
    return out


# ---------------------------------------------------------------------------
# Backlifting

@dataclass
class RiscvReport:
    program: str
    status: str            # "holds (tested)" | "unknown" | "invalid"
    evidence: list         # {name, passed, detail}
    cause: str = ""

    def to_text(self):
        out = [f"riscv contract report for {self.program}: {self.status}"]
        if self.cause:
            out.append(f"  cause: {self.cause}")
        for ev in self.evidence:
            mark = "pass" if ev["passed"] else "FAIL"
            detail = f" ({ev['detail']})" if ev.get("detail") else ""
            out.append(f"  [{mark}] {ev['name']}{detail}")
        return "\n".join(out)

    def to_json_dict(self):
        return {"schema": "bircheck-backlift/1", "program": self.program,
                "status": self.status, "cause": self.cause,
                "evidence": self.evidence}


def backlift(rc: RiscvContract, result: VerificationResult, lm: lifter.LiftMap,
             sim_reports: dict) -> RiscvReport:
    """Assemble the ISA-level report: the contract holds (tested) when the IR
    verdict is verified, every per-instruction simulation report passed, and
    the predicate translation equivalence checks passed."""
    evidence = []
    cause = ""

    ok = result.verdict == "verified"
    evidence.append({"name": "bir-contract-verdict", "passed": ok,
                     "detail": result.verdict +
                               (f": {result.reason}" if result.reason else "")})

    sim_ok = True
    for addr in sorted(lm.instr_at):
        rep = sim_reports.get(addr)
        if rep is None:
            raise EvidenceMissing(f"no simulation report for instruction at 0x{addr:x}")
        evidence.append({"name": f"simulation@0x{addr:x}", "passed": rep.passed,
                         "detail": f"{rep.kind}, {rep.trials} trials"})
        if not rep.passed:
            sim_ok = False
            cause = cause or f"lifting of {rep.kind} at 0x{addr:x} failed simulation"

    trans_ok = True
    preds = [("pre", rc.pre)] + [(f"post@0x{a:x}", p) for a, p in sorted(rc.post.items())]
    for label, pred in preds:
        mism = translation_check(pred, trials=200, seed=0xC0FFEE)
        evidence.append({"name": f"translation-equivalence:{label}",
                         "passed": not mism,
                         "detail": f"{len(mism)} mismatches" if mism else "200 trials"})
        if mism:
            trans_ok = False
            cause = cause or f"translation of {label} differs from ISA evaluation"

    if not sim_ok or not trans_ok:
        status = "invalid"
    elif result.verdict == "refuted":
        status = "invalid"
        cause = cause or result.reason or "contract refuted"
    elif result.verdict != "verified":
        status = "unknown"
        cause = cause or result.reason
    else:
        status = "holds (tested)"
    return RiscvReport(program=rc.name, status=status, evidence=evidence,
                       cause=cause)
