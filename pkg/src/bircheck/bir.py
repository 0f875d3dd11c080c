"""Typed block-structured intermediate language for lifted RV64 code.

A program is an ordered list of labeled blocks; each block is a list of
assignments (plus optional asserts) ending in a jump, a conditional jump,
or a halt.  Expressions are fixed-width words (1/8/16/32/64 bit) and a
byte-granular little-endian memory (64-bit addresses, 8-bit cells).

Expression nodes are interned: building the same node twice yields the
same object, so structural equality is identity, trees share structure as
DAGs, and per-call memo tables can key on ``id()``.  Do not mutate nodes.

Text serialization grammar (one ``(block ...)`` form per block)::

    program  ::= (program (vars (NAME TYPE)*) block*)
    TYPE     ::= imm1 | imm8 | imm16 | imm32 | imm64 | mem
    block    ::= (block ADDR "comment" stmt* end)
    stmt     ::= (assign NAME exp) | (assert exp)
    end      ::= (jmp ADDR) | (jmp-ind exp) | (cjmp exp ADDR ADDR) | (halt)
    exp      ::= (constN VALUE)            ; N in 1,8,16,32,64
               | (den NAME) | (sym NAME TYPE)
               | (OP exp exp)              ; + - * udiv & | ^ << >>u >>s
               | (PRED exp exp)            ; == != <u <=u <s
               | (not exp) | (chsign exp) | (neg exp)
               | (ite exp exp exp)
               | (low N exp) | (sext N exp) | (zext N exp)
               | (load exp exp N) | (store exp exp exp)
    ADDR     ::= 0xHEX
"""

from __future__ import annotations

from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# Types

class BirType:
    __slots__ = ("width",)

    def __init__(self, width):
        self.width = width  # bits for Imm; None for Mem

    def __repr__(self):
        return "mem" if self.width is None else f"imm{self.width}"


Imm1 = BirType(1)
Imm8 = BirType(8)
Imm16 = BirType(16)
Imm32 = BirType(32)
Imm64 = BirType(64)
Mem = BirType(None)  # 64-bit addresses, 8-bit cells

IMM_TYPES = {1: Imm1, 8: Imm8, 16: Imm16, 32: Imm32, 64: Imm64}
ACCESS_WIDTHS = (8, 16, 32, 64)


def imm_type(width):
    try:
        return IMM_TYPES[width]
    except KeyError:
        raise TypeMismatch(f"no {width}-bit immediate type") from None


def mask(width):
    return (1 << width) - 1


@dataclass(frozen=True)
class BirVar:
    name: str
    ty: BirType

    def __repr__(self):
        return f"{self.name}:{self.ty}"


# ---------------------------------------------------------------------------
# Errors

class BirError(Exception):
    pass


class TypeMismatch(BirError):
    """An expression subterm is ill-typed."""


class UnboundVar(BirError):
    pass


class UnboundSymbol(BirError):
    pass


class AssertFailed(BirError):
    def __init__(self, label, index):
        super().__init__(f"assert failed in block 0x{label:x}, statement {index}")
        self.label = label
        self.index = index


class IndirectTargetUnresolved(BirError):
    def __init__(self, value):
        super().__init__(f"computed jump target 0x{value:x} is not a block or exit label")
        self.value = value


# ---------------------------------------------------------------------------
# Expressions (interned)

BIN_OPS = ("plus", "minus", "mult", "udiv", "and", "or", "xor", "shl", "lshr", "ashr")
PRED_OPS = ("eq", "ne", "ult", "ule", "slt")
UN_OPS = ("not", "neg", "chsign")  # neg is an accepted alias of chsign
CAST_KINDS = ("low", "sext", "zext")

_interned: dict = {}


def _intern(cls, key, *args):
    node = _interned.get(key)
    if node is None:
        node = object.__new__(cls)
        node._init(*args)
        _interned[key] = node
    return node


class BirExp:
    """Base of all expression nodes.  Equality is identity (nodes interned)."""

    __slots__ = ("ty",)

    def __repr__(self):
        return print_exp(self)


class Const(BirExp):
    __slots__ = ("val",)

    def _init(self, ty, val):
        self.ty = ty
        self.val = val


class Den(BirExp):
    __slots__ = ("var",)

    def _init(self, var):
        self.ty = var.ty
        self.var = var


class Sym(BirExp):
    """A symbolic-engine symbol; concrete evaluation needs an interpretation."""

    __slots__ = ("name",)

    def _init(self, name, ty):
        self.ty = ty
        self.name = name


class UnOp(BirExp):
    __slots__ = ("op", "a")

    def _init(self, op, a):
        self.ty = a.ty
        self.op = op
        self.a = a


class BinOp(BirExp):
    __slots__ = ("op", "a", "b")

    def _init(self, op, a, b):
        self.ty = a.ty
        self.op = op
        self.a = a
        self.b = b


class BinPred(BirExp):
    __slots__ = ("op", "a", "b")

    def _init(self, op, a, b):
        self.ty = Imm1
        self.op = op
        self.a = a
        self.b = b


class Ite(BirExp):
    __slots__ = ("cond", "then", "els")

    def _init(self, cond, then, els):
        self.ty = then.ty
        self.cond = cond
        self.then = then
        self.els = els


class Cast(BirExp):
    __slots__ = ("kind", "a")

    def _init(self, kind, width, a):
        self.ty = imm_type(width)
        self.kind = kind
        self.a = a


class Load(BirExp):
    __slots__ = ("mem", "addr", "width")

    def _init(self, mem, addr, width):
        self.ty = imm_type(width)
        self.mem = mem
        self.addr = addr
        self.width = width


class Store(BirExp):
    __slots__ = ("mem", "addr", "value")

    def _init(self, mem, addr, value):
        self.ty = Mem
        self.mem = mem
        self.addr = addr
        self.value = value


def const(width, val):
    ty = imm_type(width)
    if not 0 <= val <= mask(width):
        val &= mask(width)
    return _intern(Const, ("c", ty, val), ty, val)


def const_of(ty, val):
    return const(ty.width, val)


def den(var):
    return _intern(Den, ("d", var.name, var.ty), var)


def sym(name, ty):
    return _intern(Sym, ("s", name, ty), name, ty)


def unop(op, a):
    if op not in UN_OPS:
        raise TypeMismatch(f"unknown unary op {op!r}")
    if a.ty is Mem:
        raise TypeMismatch(f"{op} applied to memory")
    return _intern(UnOp, ("u", op, a), op, a)


def binop(op, a, b):
    if op not in BIN_OPS:
        raise TypeMismatch(f"unknown binary op {op!r}")
    if a.ty is Mem or b.ty is Mem or a.ty is not b.ty:
        raise TypeMismatch(f"{op} operand widths differ: {a.ty} vs {b.ty}")
    return _intern(BinOp, ("b", op, a, b), op, a, b)


def binpred(op, a, b):
    if op not in PRED_OPS:
        raise TypeMismatch(f"unknown predicate {op!r}")
    if a.ty is not b.ty:
        raise TypeMismatch(f"{op} operand types differ: {a.ty} vs {b.ty}")
    if a.ty is Mem and op not in ("eq", "ne"):
        raise TypeMismatch(f"{op} not defined on memory")
    return _intern(BinPred, ("p", op, a, b), op, a, b)


def ite(cond, then, els):
    if cond.ty is not Imm1:
        raise TypeMismatch("ite condition must be imm1")
    if then.ty is not els.ty:
        raise TypeMismatch(f"ite arms differ: {then.ty} vs {els.ty}")
    return _intern(Ite, ("i", cond, then, els), cond, then, els)


def cast(kind, width, a):
    if kind not in CAST_KINDS:
        raise TypeMismatch(f"unknown cast {kind!r}")
    if a.ty is Mem:
        raise TypeMismatch("cast applied to memory")
    if kind == "low" and width > a.ty.width:
        raise TypeMismatch(f"low cast widens {a.ty} to {width}")
    if kind in ("sext", "zext") and width < a.ty.width:
        raise TypeMismatch(f"{kind} cast narrows {a.ty} to {width}")
    return _intern(Cast, ("t", kind, width, a), kind, width, a)


def load(mem_exp, addr, width):
    if mem_exp.ty is not Mem:
        raise TypeMismatch("load from a non-memory expression")
    if addr.ty is not Imm64:
        raise TypeMismatch("load address must be imm64")
    if width not in ACCESS_WIDTHS:
        raise TypeMismatch(f"load width {width} not in {ACCESS_WIDTHS}")
    return _intern(Load, ("l", mem_exp, addr, width), mem_exp, addr, width)


def store(mem_exp, addr, value):
    if mem_exp.ty is not Mem:
        raise TypeMismatch("store to a non-memory expression")
    if addr.ty is not Imm64:
        raise TypeMismatch("store address must be imm64")
    if value.ty is Mem or value.ty.width not in ACCESS_WIDTHS:
        raise TypeMismatch("store value must be 8/16/32/64-bit")
    return _intern(Store, ("w", mem_exp, addr, value), mem_exp, addr, value)


true_exp = const(1, 1)
false_exp = const(1, 0)


# ---------------------------------------------------------------------------
# Statements, blocks, programs

@dataclass(frozen=True)
class Assign:
    var: BirVar
    exp: BirExp

    def __post_init__(self):
        if self.var.ty is not self.exp.ty:
            raise TypeMismatch(f"assign {self.var}: exp has type {self.exp.ty}")


@dataclass(frozen=True)
class Assert:
    exp: BirExp

    def __post_init__(self):
        if self.exp.ty is not Imm1:
            raise TypeMismatch("assert condition must be imm1")


@dataclass(frozen=True)
class Jmp:
    """Direct jump when `target` is an int label, computed jump when a BirExp."""
    target: object

    @property
    def computed(self):
        return isinstance(self.target, BirExp)


@dataclass(frozen=True)
class CJmp:
    cond: BirExp
    target_true: object
    target_false: object

    def __post_init__(self):
        if self.cond.ty is not Imm1:
            raise TypeMismatch("cjmp condition must be imm1")


@dataclass(frozen=True)
class Halt:
    pass


@dataclass(frozen=True)
class BirBlock:
    label: int
    comment: str
    statements: tuple
    end: object  # Jmp | CJmp | Halt


@dataclass
class BirProgram:
    blocks: list
    by_label: dict = field(init=False)

    def __post_init__(self):
        self.by_label = {}
        for b in self.blocks:
            if b.label in self.by_label:
                raise BirError(f"duplicate block label 0x{b.label:x}")
            self.by_label[b.label] = b

    def block(self, label):
        return self.by_label.get(label)

    def variables(self):
        """All variables read or written anywhere in the program, in first-use order."""
        seen = {}
        for b in self.blocks:
            for st in b.statements:
                if isinstance(st, Assign):
                    seen.setdefault(st.var.name, st.var)
                    _collect_vars(st.exp, seen)
                else:
                    _collect_vars(st.exp, seen)
            e = b.end
            if isinstance(e, Jmp) and e.computed:
                _collect_vars(e.target, seen)
            elif isinstance(e, CJmp):
                _collect_vars(e.cond, seen)
                for t in (e.target_true, e.target_false):
                    if isinstance(t, BirExp):
                        _collect_vars(t, seen)
        return list(seen.values())


def _collect_vars(exp, seen, _memo=None):
    if _memo is None:
        _memo = set()
    if id(exp) in _memo:
        return
    _memo.add(id(exp))
    if isinstance(exp, Den):
        seen.setdefault(exp.var.name, exp.var)
    elif isinstance(exp, UnOp):
        _collect_vars(exp.a, seen, _memo)
    elif isinstance(exp, (BinOp, BinPred)):
        _collect_vars(exp.a, seen, _memo)
        _collect_vars(exp.b, seen, _memo)
    elif isinstance(exp, Ite):
        _collect_vars(exp.cond, seen, _memo)
        _collect_vars(exp.then, seen, _memo)
        _collect_vars(exp.els, seen, _memo)
    elif isinstance(exp, Cast):
        _collect_vars(exp.a, seen, _memo)
    elif isinstance(exp, Load):
        _collect_vars(exp.mem, seen, _memo)
        _collect_vars(exp.addr, seen, _memo)
    elif isinstance(exp, Store):
        _collect_vars(exp.mem, seen, _memo)
        _collect_vars(exp.addr, seen, _memo)
        _collect_vars(exp.value, seen, _memo)


def collect_syms(exp, out=None, _memo=None):
    """All Sym leaves of `exp`, keyed by name, in first-use order."""
    if out is None:
        out = {}
    if _memo is None:
        _memo = set()
    stack = [exp]
    while stack:
        e = stack.pop()
        if id(e) in _memo:
            continue
        _memo.add(id(e))
        if isinstance(e, Sym):
            out.setdefault(e.name, e)
        elif isinstance(e, UnOp):
            stack.append(e.a)
        elif isinstance(e, (BinOp, BinPred)):
            stack += (e.a, e.b)
        elif isinstance(e, Ite):
            stack += (e.cond, e.then, e.els)
        elif isinstance(e, Cast):
            stack.append(e.a)
        elif isinstance(e, Load):
            stack += (e.mem, e.addr)
        elif isinstance(e, Store):
            stack += (e.mem, e.addr, e.value)
    return out


# ---------------------------------------------------------------------------
# Well-typedness

def type_of(exp, var_types=None):
    """Type of `exp`; checks Den occurrences against `var_types` (name -> BirType)
    and that each name is used at one type throughout."""
    seen = {} if var_types is None else dict(var_types)
    memo = set()

    def walk(e):
        if id(e) in memo:
            return
        memo.add(id(e))
        if isinstance(e, Den):
            prior = seen.get(e.var.name)
            if prior is not None and prior is not e.var.ty:
                raise TypeMismatch(f"variable {e.var.name} used at {e.var.ty} and {prior}")
            seen[e.var.name] = e.var.ty
        elif isinstance(e, UnOp):
            walk(e.a)
        elif isinstance(e, (BinOp, BinPred)):
            walk(e.a)
            walk(e.b)
        elif isinstance(e, Ite):
            walk(e.cond)
            walk(e.then)
            walk(e.els)
        elif isinstance(e, Cast):
            walk(e.a)
        elif isinstance(e, Load):
            walk(e.mem)
            walk(e.addr)
        elif isinstance(e, Store):
            walk(e.mem)
            walk(e.addr)
            walk(e.value)

    walk(exp)
    return exp.ty


# ---------------------------------------------------------------------------
# Concrete evaluation

def to_signed(val, width):
    return val - (1 << width) if val & (1 << (width - 1)) else val


def eval_exp(exp, env, interp=None):
    """Evaluate under a concrete environment (BirVar -> value) and an optional
    interpretation (symbol name -> value).  Imm values are unsigned ints,
    memory values are {address: byte} dicts with absent bytes reading 0."""
    memo = {}

    def ev(e):
        k = id(e)
        if k in memo:
            return memo[k]
        v = _ev(e)
        memo[k] = v
        return v

    def _ev(e):
        if isinstance(e, Const):
            return e.val
        if isinstance(e, Den):
            try:
                return env[e.var]
            except KeyError:
                raise UnboundVar(e.var.name) from None
        if isinstance(e, Sym):
            if interp is None or e.name not in interp:
                raise UnboundSymbol(e.name)
            return interp[e.name]
        if isinstance(e, UnOp):
            w = e.ty.width
            a = ev(e.a)
            if e.op == "not":
                return a ^ mask(w)
            return (-a) & mask(w)  # neg / chsign
        if isinstance(e, BinOp):
            return _binop_val(e.op, ev(e.a), ev(e.b), e.ty.width)
        if isinstance(e, BinPred):
            a, b = ev(e.a), ev(e.b)
            if e.a.ty is Mem:
                a, b = _norm_mem(a), _norm_mem(b)
                return int(a == b) if e.op == "eq" else int(a != b)
            w = e.a.ty.width
            if e.op == "eq":
                return int(a == b)
            if e.op == "ne":
                return int(a != b)
            if e.op == "ult":
                return int(a < b)
            if e.op == "ule":
                return int(a <= b)
            return int(to_signed(a, w) < to_signed(b, w))
        if isinstance(e, Ite):
            return ev(e.then) if ev(e.cond) == 1 else ev(e.els)
        if isinstance(e, Cast):
            a = ev(e.a)
            w0, w1 = e.a.ty.width, e.ty.width
            if e.kind == "low":
                return a & mask(w1)
            if e.kind == "zext":
                return a
            return to_signed(a, w0) & mask(w1)
        if isinstance(e, Load):
            m, a = ev(e.mem), ev(e.addr)
            return load_bytes(m, a, e.width // 8)
        if isinstance(e, Store):
            m = dict(ev(e.mem))
            a, v = ev(e.addr), ev(e.value)
            store_bytes(m, a, v, e.value.ty.width // 8)
            return m
        raise BirError(f"cannot evaluate {e!r}")

    return ev(exp)


def _binop_val(op, a, b, w):
    m = mask(w)
    if op == "plus":
        return (a + b) & m
    if op == "minus":
        return (a - b) & m
    if op == "mult":
        return (a * b) & m
    if op == "udiv":
        return m if b == 0 else a // b
    if op == "and":
        return a & b
    if op == "or":
        return a | b
    if op == "xor":
        return a ^ b
    if op == "shl":
        return (a << b) & m if b < w else 0
    if op == "lshr":
        return a >> b if b < w else 0
    # ashr: shift in sign bits; amounts >= width saturate to sign fill
    s = to_signed(a, w)
    return (s >> b) & m if b < w else (m if s < 0 else 0)


def load_bytes(mem, addr, nbytes):
    v = 0
    for k in range(nbytes):
        v |= mem.get((addr + k) & mask(64), 0) << (8 * k)
    return v


def store_bytes(mem, addr, val, nbytes):
    for k in range(nbytes):
        mem[(addr + k) & mask(64)] = (val >> (8 * k)) & 0xFF


def _norm_mem(m):
    return frozenset((a, b) for a, b in m.items() if b != 0)


def mem_equal(m1, m2):
    return _norm_mem(m1) == _norm_mem(m2)


# ---------------------------------------------------------------------------
# Block / program execution

HALTED = object()


def exec_block(program, block, env):
    """Run one block concretely.  Returns (new env, next label) where the label
    is an int address or HALTED.  Computed jump targets are evaluated and must
    land on a block label or one of `program`'s declared exits (the caller
    checks exits; here any int is returned as-is)."""
    env = dict(env)
    for i, st in enumerate(block.statements):
        if isinstance(st, Assign):
            env[st.var] = eval_exp(st.exp, env)
        else:
            if eval_exp(st.exp, env) != 1:
                raise AssertFailed(block.label, i)
    e = block.end
    if isinstance(e, Halt):
        return env, HALTED
    if isinstance(e, Jmp):
        t = e.target
        return env, (eval_exp(t, env) if isinstance(t, BirExp) else t)
    cond = eval_exp(e.cond, env)
    t = e.target_true if cond == 1 else e.target_false
    return env, (eval_exp(t, env) if isinstance(t, BirExp) else t)


def run_program(program, env, entry, exits=(), fuel=10_000):
    """Concrete interpreter driver: execute from `entry` until a label in
    `exits`, a Halt, or fuel runs out.  Returns (env, stop_label, steps);
    stop_label is HALTED for Halt ends."""
    exits = set(exits)
    at = entry
    steps = 0
    while True:
        if at in exits:
            return env, at, steps
        blk = program.block(at)
        if blk is None:
            raise IndirectTargetUnresolved(at)
        if steps >= fuel:
            raise BirError(f"fuel exhausted at 0x{at:x} after {steps} blocks")
        env, at = exec_block(program, blk, env)
        steps += 1
        if at is HALTED:
            return env, HALTED, steps


def validate_program(program, exits=()):
    """Check the label discipline: every constant jump target resolves to a
    block label or a declared exit label."""
    ok = set(program.by_label) | set(exits)
    for b in program.blocks:
        targets = []
        if isinstance(b.end, Jmp) and not b.end.computed:
            targets.append(b.end.target)
        elif isinstance(b.end, CJmp):
            targets += [t for t in (b.end.target_true, b.end.target_false)
                        if not isinstance(t, BirExp)]
        for t in targets:
            if t not in ok:
                raise BirError(f"block 0x{b.label:x} jumps to undeclared label 0x{t:x}")


# ---------------------------------------------------------------------------
# Node counting (tree size, computed on the DAG)

def node_count(exp):
    """Number of nodes of the expression seen as a tree (shared subterms are
    counted once per occurrence)."""
    memo = {}

    def cnt(e):
        n = memo.get(id(e))
        if n is not None:
            return n
        if isinstance(e, (Const, Den, Sym)):
            n = 1
        elif isinstance(e, (UnOp, Cast)):
            n = 1 + cnt(e.a)
        elif isinstance(e, (BinOp, BinPred)):
            n = 1 + cnt(e.a) + cnt(e.b)
        elif isinstance(e, Ite):
            n = 1 + cnt(e.cond) + cnt(e.then) + cnt(e.els)
        elif isinstance(e, Load):
            n = 1 + cnt(e.mem) + cnt(e.addr)
        else:
            n = 1 + cnt(e.mem) + cnt(e.addr) + cnt(e.value)
        memo[id(e)] = n
        return n

    return cnt(exp)


# ---------------------------------------------------------------------------
# Substitution

def subst(exp, var_map=None, sym_map=None):
    """Replace Den leaves via var_map (BirVar -> BirExp) and Sym leaves via
    sym_map (name -> BirExp).  DAG structure is preserved."""
    memo = {}

    def go(e):
        r = memo.get(id(e))
        if r is not None:
            return r
        r = _go(e)
        memo[id(e)] = r
        return r

    def _go(e):
        if isinstance(e, Den):
            if var_map is not None and e.var in var_map:
                return var_map[e.var]
            return e
        if isinstance(e, Sym):
            if sym_map is not None and e.name in sym_map:
                return sym_map[e.name]
            return e
        if isinstance(e, Const):
            return e
        if isinstance(e, UnOp):
            return unop(e.op, go(e.a))
        if isinstance(e, BinOp):
            return binop(e.op, go(e.a), go(e.b))
        if isinstance(e, BinPred):
            return binpred(e.op, go(e.a), go(e.b))
        if isinstance(e, Ite):
            return ite(go(e.cond), go(e.then), go(e.els))
        if isinstance(e, Cast):
            return cast(e.kind, e.ty.width, go(e.a))
        if isinstance(e, Load):
            return load(go(e.mem), go(e.addr), e.width)
        return store(go(e.mem), go(e.addr), go(e.value))

    return go(exp)


# ---------------------------------------------------------------------------
# Printing

_BINOP_SYM = {"plus": "+", "minus": "-", "mult": "*", "udiv": "udiv", "and": "&",
              "or": "|", "xor": "^", "shl": "<<", "lshr": ">>u", "ashr": ">>s"}
_PRED_SYM = {"eq": "==", "ne": "!=", "ult": "<u", "ule": "<=u", "slt": "<s"}


def print_exp(e):
    memo = {}

    def p(e):
        s = memo.get(id(e))
        if s is not None:
            return s
        s = _p(e)
        memo[id(e)] = s
        return s

    def _p(e):
        if isinstance(e, Const):
            return f"(const{e.ty.width} 0x{e.val:x})"
        if isinstance(e, Den):
            return f"(den {e.var.name})"
        if isinstance(e, Sym):
            return f"(sym {e.name} {e.ty})"
        if isinstance(e, UnOp):
            return f"({e.op} {p(e.a)})"
        if isinstance(e, BinOp):
            return f"({_BINOP_SYM[e.op]} {p(e.a)} {p(e.b)})"
        if isinstance(e, BinPred):
            return f"({_PRED_SYM[e.op]} {p(e.a)} {p(e.b)})"
        if isinstance(e, Ite):
            return f"(ite {p(e.cond)} {p(e.then)} {p(e.els)})"
        if isinstance(e, Cast):
            return f"({e.kind} {e.ty.width} {p(e.a)})"
        if isinstance(e, Load):
            return f"(load {p(e.mem)} {p(e.addr)} {e.width})"
        return f"(store {p(e.mem)} {p(e.addr)} {p(e.value)})"

    return p(e)


def print_block(b):
    out = [f'(block 0x{b.label:x} "{b.comment}"']
    for st in b.statements:
        if isinstance(st, Assign):
            out.append(f"  (assign {st.var.name} {print_exp(st.exp)})")
        else:
            out.append(f"  (assert {print_exp(st.exp)})")
    e = b.end
    if isinstance(e, Halt):
        out.append("  (halt))")
    elif isinstance(e, Jmp):
        if e.computed:
            out.append(f"  (jmp-ind {print_exp(e.target)}))")
        else:
            out.append(f"  (jmp 0x{e.target:x}))")
    else:
        tt = print_exp(e.target_true) if isinstance(e.target_true, BirExp) else f"0x{e.target_true:x}"
        tf = print_exp(e.target_false) if isinstance(e.target_false, BirExp) else f"0x{e.target_false:x}"
        out.append(f"  (cjmp {print_exp(e.cond)} {tt} {tf}))")
    return "\n".join(out)


def print_program(p):
    vars_ = " ".join(f"({v.name} {v.ty})" for v in p.variables())
    body = "\n".join(print_block(b) for b in p.blocks)
    if body:
        return f"(program\n(vars {vars_})\n{body})"
    return f"(program\n(vars {vars_}))"
