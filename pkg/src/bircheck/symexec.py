"""Forward symbolic execution of BIR programs.

A symbolic state is a path condition plus a mapping from program variables to
symbolic expressions over symbols; an interpretation H maps symbols to values
and matches a symbolic state against a concrete state when the path condition
evaluates to true and every variable agrees.  Executing a program produces a
symbolic structure: the judgment that every concrete execution starting from
a matched initial state and staying within the visited label set ends in a
state matched by one of the leaves under the same interpretation.

The engine applies, under a worklist driver, the rule repertoire:
block stepping with case analysis on conditional and computed jumps,
solver-backed pruning of infeasible states, expression simplification with
load-over-store resolution, abbreviation of oversized expressions, symbol
renaming, and strengthening/weakening of path conditions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from . import bir
from .bir import (BinOp, BinPred, Cast, Const, Den, Ite, Load, Store, Sym,
                  UnOp, binop, binpred, cast, const, ite, load, store, sym,
                  unop)
from .smt import Obligation, SolverConfig, check, check_many


class EngineError(Exception):
    pass


class BudgetExhausted(EngineError):
    def __init__(self, why, frontier=()):
        super().__init__(why)
        self.frontier = tuple(frontier)


class ForbiddenLabelReached(EngineError):
    def __init__(self, label, state):
        super().__init__(f"execution reached forbidden label 0x{label:x}")
        self.label = label
        self.state = state


class IndirectTargetUnbounded(EngineError):
    def __init__(self, msg):
        super().__init__(msg)


class WeakenNotEntailed(EngineError):
    pass


class SymbolGen:
    """Deterministic fresh-symbol source."""

    def __init__(self):
        self.used = set()
        self.abbrev_count = 0

    def fresh(self, hint, ty):
        name = hint
        k = 0
        while name in self.used:
            k += 1
            name = f"{hint}_{k}"
        self.used.add(name)
        return sym(name, ty)

    def fresh_abbrev(self, ty):
        name = f"ab{self.abbrev_count}"
        self.abbrev_count += 1
        self.used.add(name)
        return sym(name, ty)


@dataclass(frozen=True)
class SymbolicState:
    path: object                 # Imm1 SymExpr
    env: dict                    # BirVar -> SymExpr
    at: int
    halted: bool = False
    abbrevs: tuple = ()          # ((Sym, SymExpr), ...) in introduction order

    def with_(self, **kw):
        return replace(self, **kw)

    def abbrev_defs(self):
        return self.abbrevs


@dataclass(frozen=True)
class SymbolicStructure:
    initial: SymbolicState
    labels: frozenset
    leaves: tuple
    endpoints: frozenset = frozenset()


@dataclass
class EngineConfig:
    unroll: int = 0
    max_steps: int = 20_000
    max_states: int = 4_096
    abbrev_threshold: int = 64
    max_indirect_targets: int = 16
    simplify_passes: int = 3
    use_solver_mem_rules: bool = True
    do_simplify: bool = True
    do_abbreviate: bool = True


# ---------------------------------------------------------------------------
# Matching

def extend_interp(H, abbrevs):
    """Extend an interpretation over abbreviation definitions, in order."""
    out = dict(H)
    for s, d in abbrevs:
        out[s.name] = bir.eval_exp(d, {}, out)
    return out


def matches(H, sbar: SymbolicState, concrete_env, at_label, halted=False) -> bool:
    """H(sbar) = s: path condition true, every mapped variable equal, and the
    control location equal."""
    Hx = extend_interp(H, sbar.abbrevs)
    if sbar.at != at_label or sbar.halted != halted:
        return False
    if bir.eval_exp(sbar.path, {}, Hx) != 1:
        return False
    for var, e in sbar.env.items():
        want = concrete_env.get(var)
        if want is None:
            continue
        got = bir.eval_exp(e, {}, Hx)
        if var.ty is bir.Mem:
            if not bir.mem_equal(got, want):
                return False
        elif got != want:
            return False
    return True


# ---------------------------------------------------------------------------
# Initial states

def init_state(program, entry, precond, gen: SymbolGen | None = None,
               extra_vars=()) -> tuple[SymbolicState, SymbolGen]:
    """Map every program variable to a fresh symbol and install the
    precondition (over those variables) as the path condition."""
    if precond.ty is not bir.Imm1:
        raise bir.TypeMismatch("precondition must be imm1")
    gen = gen or SymbolGen()
    variables = list(program.variables())
    names = {v.name for v in variables}
    for v in extra_vars:
        if v.name not in names:
            variables.append(v)
            names.add(v.name)
    env = {v: gen.fresh(f"s_{v.name}", v.ty) for v in variables}
    path = bir.subst(precond, var_map={v: env[v] for v in env})
    leftover = [v.var.name for v in _dens_of(path)]
    if leftover:
        raise EngineError(f"precondition mentions variables outside the program: {leftover}")
    return SymbolicState(path=path, env=env, at=entry), gen


def _dens_of(e):
    seen = {}
    bir._collect_vars(e, seen)
    return [bir.den(v) for v in seen.values()]


# ---------------------------------------------------------------------------
# Expression simplification

def _split_base(e):
    """Decompose into (base expression or None, constant offset).  A None base
    means the whole expression is the constant."""
    off = 0
    w = e.ty.width
    while isinstance(e, BinOp) and e.op in ("plus", "minus") and isinstance(e.b, Const):
        off = off + e.b.val if e.op == "plus" else off - e.b.val
        e = e.a
    if isinstance(e, Const):
        return None, (e.val + off) & bir.mask(w)
    return e, off & bir.mask(w)


def _is_ground(e):
    return not bir.collect_syms(e) and not _dens_of(e)


class Simplifier:
    """Fixed rewrite rules applied to fixpoint with a pass budget; the
    solver-backed rules fire only on load-over-store address comparisons."""

    def __init__(self, path=None, abbrevs=(), solver: SolverConfig | None = None,
                 passes=3, use_solver=True):
        self.path = path
        self.abbrevs = dict(abbrevs)
        self.solver = solver
        self.passes = passes
        self.use_solver = use_solver and solver is not None

    def simplify(self, e):
        for _ in range(self.passes):
            memo = {}
            out = self._walk(e, memo)
            if out is e:
                break
            e = out
        return e

    def _walk(self, e, memo):
        got = memo.get(id(e))
        if got is not None:
            return got
        if isinstance(e, (Const, Den, Sym)):
            memo[id(e)] = e
            return e
        if isinstance(e, UnOp):
            out = self._rule_unop(e.op, self._walk(e.a, memo))
        elif isinstance(e, BinOp):
            out = self._rule_binop(e.op, self._walk(e.a, memo), self._walk(e.b, memo))
        elif isinstance(e, BinPred):
            out = self._rule_pred(e.op, self._walk(e.a, memo), self._walk(e.b, memo))
        elif isinstance(e, Ite):
            out = self._rule_ite(self._walk(e.cond, memo), self._walk(e.then, memo),
                                 self._walk(e.els, memo))
        elif isinstance(e, Cast):
            out = self._rule_cast(e.kind, e.ty.width, self._walk(e.a, memo))
        elif isinstance(e, Load):
            out = self._rule_load(self._walk(e.mem, memo), self._walk(e.addr, memo),
                                  e.width)
        else:
            out = self._rule_store(self._walk(e.mem, memo), self._walk(e.addr, memo),
                                   self._walk(e.value, memo))
        memo[id(e)] = out
        return out

    # -- local rules ---------------------------------------------------------

    def _rule_unop(self, op, a):
        if isinstance(a, Const):
            return const(a.ty.width, bir.eval_exp(unop(op, a), {}))
        if isinstance(a, UnOp) and a.op == op and op in ("not", "chsign", "neg"):
            return a.a
        return unop(op, a)

    def _rule_binop(self, op, a, b):
        w = a.ty.width
        if isinstance(a, Const) and isinstance(b, Const):
            return const(w, bir._binop_val(op, a.val, b.val, w))
        zero = const(w, 0)
        ones = const(w, bir.mask(w))
        if op in ("plus", "mult", "and", "or", "xor") and isinstance(a, Const):
            a, b = b, a  # constants to the right
        if op == "plus":
            if b is zero:
                return a
            if isinstance(b, Const) and isinstance(a, BinOp) and isinstance(a.b, Const):
                if a.op == "plus":
                    return self._rule_binop("plus", a.a, const(w, a.b.val + b.val))
                if a.op == "minus":
                    return self._rule_binop("plus", a.a, const(w, b.val - a.b.val))
        elif op == "minus":
            if b is zero:
                return a
            if a is b:
                return zero
            if isinstance(b, Const):
                return self._rule_binop("plus", a, const(w, -b.val))
        elif op == "xor":
            if a is b:
                return zero
            if b is zero:
                return a
        elif op == "and":
            if a is b or b is ones:
                return a
            if b is zero:
                return zero
        elif op == "or":
            if a is b or b is zero:
                return a
            if b is ones:
                return ones
        elif op == "mult":
            if b is zero:
                return zero
            if isinstance(b, Const) and b.val == 1:
                return a
        elif op == "udiv":
            if isinstance(b, Const) and b.val == 1:
                return a
        elif op in ("shl", "lshr", "ashr"):
            if b is zero:
                return a
            if isinstance(b, Const) and b.val >= w and op in ("shl", "lshr"):
                return zero
        return binop(op, a, b)

    def _rule_pred(self, op, a, b):
        if isinstance(a, Const) and isinstance(b, Const):
            return const(1, bir.eval_exp(binpred(op, a, b), {}))
        if a is b:
            return bir.true_exp if op in ("eq", "ule") else bir.false_exp
        if a.ty is not bir.Mem and op in ("eq", "ne"):
            ba, oa = _split_base(a)
            bb, ob = _split_base(b)
            if ba is bb and ba is not None:
                same = oa == ob
                return bir.true_exp if same == (op == "eq") else bir.false_exp
        return binpred(op, a, b)

    def _rule_ite(self, c, t, f):
        if isinstance(c, Const):
            return t if c.val == 1 else f
        if t is f:
            return t
        return ite(c, t, f)

    def _rule_cast(self, kind, width, a):
        if a.ty.width == width:
            return a
        if isinstance(a, Const):
            return const(width, bir.eval_exp(cast(kind, width, a), {}))
        if isinstance(a, Cast):
            if kind == "low" and a.kind == "low":
                return self._rule_cast("low", width, a.a)
            if kind == a.kind and kind in ("zext", "sext"):
                return self._rule_cast(kind, width, a.a)
            if kind == "low" and a.kind in ("zext", "sext") and width <= a.a.ty.width:
                return self._rule_cast("low", width, a.a)
        return cast(kind, width, a)

    # -- memory rules ----------------------------------------------------------

    def _lookup_abbrev(self, e):
        if isinstance(e, Sym):
            return self.abbrevs.get(e)
        return None

    def _rule_load(self, mem, addr, width):
        nbytes = width // 8
        bb, ob = _split_base(addr)
        node = mem       # walk position (may descend into abbreviation defs)
        anchor = mem     # node a non-forwarding rewrite is allowed to expose
        crossed = False  # whether the walk entered an abbreviation definition
        while True:
            if isinstance(node, Sym):
                d = self.abbrevs.get(node)
                if d is not None:
                    if not crossed:
                        anchor = node  # keep the abbreviation opaque
                        crossed = True
                    node = d
                    continue
            if not isinstance(node, Store):
                # reached the chain's base
                if not crossed or isinstance(node, (Den, Sym)):
                    return load(node, addr, width)
                return load(anchor, addr, width)
            sa, sv = node.addr, node.value
            sbytes = sv.ty.width // 8
            ba, oa = _split_base(sa)
            rel = None  # "same" | "contains" | "disjoint" | None
            if ba is bb:
                delta = (ob - oa) & bir.mask(64)
                if delta == 0 and sbytes == nbytes:
                    rel = "same"
                elif delta < sbytes and delta + nbytes <= sbytes:
                    rel = "contains"
                elif delta >= sbytes and ((oa - ob) & bir.mask(64)) >= nbytes:
                    rel = "disjoint"
            elif self.use_solver:
                rel = self._solver_relation(sa, addr, sbytes, nbytes)
            if rel == "same":
                return sv
            if rel == "contains":
                delta = (ob - oa) & bir.mask(64)
                v = sv
                if delta:
                    v = self._rule_binop("lshr", v, const(sv.ty.width, 8 * delta))
                return self._rule_cast("low", width, v)
            if rel == "disjoint":
                node = node.mem
                if not crossed:
                    anchor = node
                continue
            # unresolved aliasing: keep the load over the remaining chain
            return load(node if not crossed else anchor, addr, width)

    def _solver_relation(self, store_addr, load_addr, sbytes, nbytes):
        """Ask the solver whether the accesses are provably equal or provably
        disjoint under the path condition; None when neither is provable."""
        if self.path is None or self.solver is None:
            return None
        defs = tuple(self.abbrevs.items())
        same = binpred("eq", store_addr, load_addr)
        v = check(Obligation("simplification", (self.path,), same,
                             origin="load-over-store=", defs=defs), self.solver)
        if v.is_unsat and sbytes == nbytes:
            return "same"
        dis = binop("and",
                    binpred("ule", const(64, nbytes),
                            binop("minus", store_addr, load_addr)),
                    binpred("ule", const(64, sbytes),
                            binop("minus", load_addr, store_addr)))
        v = check(Obligation("simplification", (self.path,), dis,
                             origin="load-over-store#", defs=defs), self.solver)
        if v.is_unsat:
            return "disjoint"
        return None

    def _rule_store(self, mem, addr, value):
        if isinstance(mem, Store) and mem.addr is addr and \
                mem.value.ty.width == value.ty.width:
            return store(mem.mem, addr, value)
        return store(mem, addr, value)


def simplify_exp(e, path=None, abbrevs=(), solver=None, passes=3, use_solver=True):
    return Simplifier(path, abbrevs, solver, passes, use_solver).simplify(e)


def simplify(sbar: SymbolicState, solver: SolverConfig | None = None,
             config: EngineConfig | None = None) -> SymbolicState:
    """Rewrite all state expressions; meaning is preserved for every
    interpretation satisfying the path condition."""
    config = config or EngineConfig()
    sim = Simplifier(sbar.path, sbar.abbrevs, solver, config.simplify_passes,
                     config.use_solver_mem_rules)
    new_env = {v: sim.simplify(e) for v, e in sbar.env.items()}
    new_path = sim.simplify(sbar.path)
    return sbar.with_(path=new_path, env=new_env)


# ---------------------------------------------------------------------------
# Abbreviation

def abbreviate(sbar: SymbolicState, gen: SymbolGen, select=None,
               threshold: int = 64) -> SymbolicState:
    """Introduce fresh definition symbols for selected expressions (default:
    anything above the node-count threshold); expanding the definitions
    restores the original state."""
    if select is None:
        select = lambda e: bir.node_count(e) > threshold
    abbrevs = list(sbar.abbrevs)
    env = dict(sbar.env)
    changed = False
    for v in env:
        e = env[v]
        if not isinstance(e, Sym) and select(e):
            a = gen.fresh_abbrev(e.ty)
            abbrevs.append((a, e))
            env[v] = a
            changed = True
    path = sbar.path
    if not isinstance(path, (Sym, Const)) and select(path):
        a = gen.fresh_abbrev(bir.Imm1)
        abbrevs.append((a, path))
        path = a
        changed = True
    if not changed:
        return sbar
    return sbar.with_(env=env, path=path, abbrevs=tuple(abbrevs))


def expand_abbrevs(sbar: SymbolicState) -> SymbolicState:
    """Substitute all abbreviation definitions back into the state."""
    # later definitions may reference earlier symbols: expand in reverse
    sym_map = {}
    for s, d in sbar.abbrevs:
        sym_map[s.name] = bir.subst(d, sym_map=sym_map)
    env = {v: bir.subst(e, sym_map=sym_map) for v, e in sbar.env.items()}
    path = bir.subst(sbar.path, sym_map=sym_map)
    return sbar.with_(env=env, path=path, abbrevs=())


# ---------------------------------------------------------------------------
# Renaming / strengthening / weakening

def rename_symbols(sbar: SymbolicState, mapping: dict) -> SymbolicState:
    """Apply a bijective renaming (old name -> new name) across the state."""
    if len(set(mapping.values())) != len(mapping):
        raise EngineError("symbol renaming must be a bijection")
    syms = {}
    bir.collect_syms(sbar.path, syms)
    for e in sbar.env.values():
        bir.collect_syms(e, syms)
    for s, d in sbar.abbrevs:
        syms.setdefault(s.name, s)
        bir.collect_syms(d, syms)
    sym_map = {}
    for old, new in mapping.items():
        if old in syms:
            sym_map[old] = sym(new, syms[old].ty)
    env = {v: bir.subst(e, sym_map=sym_map) for v, e in sbar.env.items()}
    path = bir.subst(sbar.path, sym_map=sym_map)
    abbrevs = tuple((bir.subst(s, sym_map=sym_map), bir.subst(d, sym_map=sym_map))
                    for s, d in sbar.abbrevs)
    return sbar.with_(env=env, path=path, abbrevs=abbrevs)


def strengthen_initial(sbar: SymbolicState, extra) -> SymbolicState:
    """Conjoin an extra constraint to the initial path condition (restricts
    the described language of initial states)."""
    if extra.ty is not bir.Imm1:
        raise bir.TypeMismatch("strengthening constraint must be imm1")
    return sbar.with_(path=binop("and", sbar.path, extra))


def weaken_leaf(leaf: SymbolicState, weaker, solver: SolverConfig) -> SymbolicState:
    """Replace a leaf's path condition by a solver-proved weaker one."""
    v = check(Obligation("entailment", (leaf.path,), weaker, origin="weaken",
                         defs=leaf.abbrevs), solver)
    if not v.is_unsat:
        raise WeakenNotEntailed(f"solver verdict {v.status}")
    return leaf.with_(path=weaker)


# ---------------------------------------------------------------------------
# Stepping

def _subst_env(e, env):
    return bir.subst(e, var_map=env)


def step_block(program, sbar: SymbolicState, solver: SolverConfig | None = None,
               max_targets: int = 16) -> list:
    """Symbolically execute the block at sbar.at.  Conditional jumps split the
    state; computed jumps are resolved by case analysis over solver-enumerated
    feasible constant targets."""
    block = program.block(sbar.at)
    if block is None:
        raise EngineError(f"no block at 0x{sbar.at:x}")
    env = dict(sbar.env)
    path = sbar.path
    for st in block.statements:
        if isinstance(st, bir.Assign):
            env = dict(env)
            env[st.var] = _subst_env(st.exp, env)
        else:
            # assert is treated as an assumption on this path (the lifter
            # never emits it; the concrete interpreter checks it)
            path = binop("and", path, _subst_env(st.exp, env))
    base = sbar.with_(env=env, path=path)
    end = block.end

    if isinstance(end, bir.Halt):
        return [base.with_(halted=True)]
    if isinstance(end, bir.Jmp):
        return _goto(program, base, end.target, solver, max_targets)
    cond = simplify_exp(_subst_env(end.cond, env), passes=2, use_solver=False)
    if isinstance(cond, Const):
        target = end.target_true if cond.val == 1 else end.target_false
        return _goto(program, base, target, solver, max_targets)
    out = []
    out += _goto(program, base.with_(path=binop("and", path, cond)),
                 end.target_true, solver, max_targets)
    out += _goto(program, base.with_(path=binop("and", path, unop("not", cond))),
                 end.target_false, solver, max_targets)
    return out


def _goto(program, state, target, solver, max_targets):
    if not isinstance(target, bir.BirExp):
        return [state.with_(at=target)]
    t_exp = simplify_exp(_subst_env(target, state.env), passes=2, use_solver=False)
    if isinstance(t_exp, Const):
        return [state.with_(at=t_exp.val)]
    if solver is None:
        raise IndirectTargetUnbounded("computed jump needs a solver to enumerate targets")
    found = []
    out = []
    defs = state.abbrevs
    while len(found) <= max_targets:
        hyps = [state.path] + [binpred("ne", t_exp, const(64, c)) for c in found]
        v = check(Obligation("feasibility", tuple(hyps), bir.true_exp,
                             origin=f"indirect@0x{state.at:x}", defs=defs), solver)
        if v.is_unsat:
            return out
        if not v.is_sat:
            raise IndirectTargetUnbounded(
                f"solver could not bound computed jump at 0x{state.at:x}: {v.reason}")
        Hx = dict(v.model)
        for name, s in bir.collect_syms(t_exp).items():
            # symbols unconstrained by the path may be absent from the model
            Hx.setdefault(name, {} if s.ty is bir.Mem else 0)
        Hx = extend_interp(Hx, defs)
        c = bir.eval_exp(t_exp, {}, Hx)
        found.append(c)
        out.append(state.with_(path=binop("and", state.path,
                                          binpred("eq", t_exp, const(64, c))),
                               at=c))
    raise IndirectTargetUnbounded(
        f"computed jump at 0x{state.at:x} has more than {max_targets} feasible targets")


# ---------------------------------------------------------------------------
# Pruning

def prune_infeasible(states, solver: SolverConfig | None):
    """Drop states whose path condition is unsat; unknown verdicts are kept
    (sound over-approximation)."""
    states = list(states)
    if solver is None or not states:
        return states
    obls = [Obligation("feasibility", (), s.path, origin=f"prune@0x{s.at:x}",
                       defs=s.abbrevs) for s in states]
    verdicts = check_many(obls, solver)
    return [s for s, v in zip(states, verdicts) if not v.is_unsat]


# ---------------------------------------------------------------------------
# The driver

def execute(program, entry, endpoints, forbidden, precond,
            config: EngineConfig | None = None,
            solver: SolverConfig | None = None,
            gen: SymbolGen | None = None,
            extra_vars=()) -> SymbolicStructure:
    """Worklist-driven symbolic execution from `entry` until every frontier
    state sits at an endpoint (or has halted / left the program)."""
    config = config or EngineConfig()
    endpoints = frozenset(endpoints)
    forbidden = frozenset(forbidden)
    initial, gen = init_state(program, entry, precond, gen, extra_vars)
    labels = {entry}
    leaves = []
    # stack entries: (state, per-path visit counts)
    stack = [(initial, {})]
    steps = 0
    while stack:
        state, visits = stack.pop()
        if state.at in forbidden:
            raise ForbiddenLabelReached(state.at, state)
        if state.halted or state.at in endpoints or program.block(state.at) is None:
            labels.add(state.at)
            leaves.append(state)
            continue
        seen = visits.get(state.at, 0)
        if seen > config.unroll:
            raise BudgetExhausted(
                f"label 0x{state.at:x} revisited beyond unroll bound {config.unroll}",
                frontier=[state] + [s for s, _ in stack])
        steps += 1
        if steps > config.max_steps:
            raise BudgetExhausted(f"step budget {config.max_steps} exceeded",
                                  frontier=[state] + [s for s, _ in stack])
        labels.add(state.at)
        children = step_block(program, state, solver, config.max_indirect_targets)
        if len(children) > 1:
            children = prune_infeasible(children, solver)
        if config.do_simplify:
            children = [simplify(c, solver, config) for c in children]
        if config.do_abbreviate:
            children = [abbreviate(c, gen, threshold=config.abbrev_threshold)
                        for c in children]
        if len(stack) + len(children) + len(leaves) > config.max_states:
            raise BudgetExhausted(f"state budget {config.max_states} exceeded",
                                  frontier=[s for s, _ in stack])
        nvisits = dict(visits)
        nvisits[state.at] = seen + 1
        for child in sorted(children, key=lambda s: s.at, reverse=True):
            stack.append((child, nvisits))
    order = {}
    for i, leaf in enumerate(leaves):
        order[id(leaf)] = i
    leaves.sort(key=lambda s: (s.at, order[id(s)]))
    return SymbolicStructure(initial=initial, labels=frozenset(labels),
                             leaves=tuple(leaves), endpoints=endpoints)


# ---------------------------------------------------------------------------
# Rendering

def state_to_text(s: SymbolicState) -> str:
    out = [f"at 0x{s.at:x}{' (halted)' if s.halted else ''}"]
    out.append(f"  path {bir.print_exp(s.path)}")
    for v in s.env:
        out.append(f"  {v.name} = {bir.print_exp(s.env[v])}")
    for a, d in s.abbrevs:
        out.append(f"  def {a.name} = {bir.print_exp(d)}")
    return "\n".join(out)


def structure_to_text(st: SymbolicStructure) -> str:
    out = ["initial:", state_to_text(st.initial)]
    out.append("labels: " + " ".join(f"0x{l:x}" for l in sorted(st.labels)))
    out.append(f"leaves: {len(st.leaves)}")
    for i, leaf in enumerate(st.leaves):
        out.append(f"leaf {i}:")
        out.append(state_to_text(leaf))
    return "\n".join(out)


def _state_json(s):
    return {
        "at": f"0x{s.at:x}",
        "halted": s.halted,
        "path": bir.print_exp(s.path),
        "env": {v.name: bir.print_exp(e) for v, e in s.env.items()},
        "abbrevs": [{"name": a.name, "def": bir.print_exp(d)} for a, d in s.abbrevs],
    }


def structure_to_json(st: SymbolicStructure) -> str:
    doc = {
        "schema": "bircheck-structure/1",
        "initial": _state_json(st.initial),
        "labels": [f"0x{l:x}" for l in sorted(st.labels)],
        "leaves": [_state_json(s) for s in st.leaves],
    }
    return json.dumps(doc, indent=2)
