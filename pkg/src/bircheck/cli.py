"""Command-line front end for the lift / symex / verify pipeline.

Exit codes: 0 verified (or success), 1 refuted (or simulation failure),
2 input/usage error, 3 unknown (budget or solver limits).
"""

from __future__ import annotations

import argparse
import csv
import json
import shlex
import shutil
import sys
import time
from dataclasses import dataclass, field

from . import bir, disasm, isa, lifter, symexec, contracts
from .corpus import fixture, fixture_names, fixture_config
from .lifter import LiftError
from .smt import SolverConfig, default_solver_argv
from .symexec import EngineConfig

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2
EXIT_UNKNOWN = 3


@dataclass
class RunConfig:
    solver_argv: list = field(default_factory=default_solver_argv)
    timeout: float = 30.0
    unroll: int = 0
    max_states: int = 4096
    max_steps: int = 20000
    abbrev_threshold: int = 64
    pool: int = 4
    fmt: str = "text"
    smt_dump: str | None = None

    def __post_init__(self):
        if self.timeout < 0 or self.unroll < 0 or self.max_states <= 0 or \
                self.max_steps <= 0 or self.abbrev_threshold <= 0 or self.pool <= 0:
            raise ValueError("budgets must be positive")
        head = self.solver_argv[0]
        if shutil.which(head) is None:
            raise ValueError(f"solver executable {head!r} not found")

    def solver(self):
        return SolverConfig(argv=list(self.solver_argv), timeout=self.timeout,
                            dump_dir=self.smt_dump, pool=self.pool)

    def engine(self, **overrides):
        kw = dict(unroll=self.unroll, max_states=self.max_states,
                  max_steps=self.max_steps, abbrev_threshold=self.abbrev_threshold)
        kw.update(overrides)
        return EngineConfig(**kw)


def add_engine_flags(p):
    p.add_argument("--solver", help="solver command line (default: bundled bircheck-smt; "
                                    "also via BIRCHECK_SOLVER)")
    p.add_argument("--timeout", type=float, default=30.0,
                   help="per-obligation solver timeout in seconds")
    p.add_argument("--unroll", type=int, default=0, help="loop unroll bound")
    p.add_argument("--max-states", type=int, default=4096)
    p.add_argument("--max-steps", type=int, default=20000)
    p.add_argument("--abbrev-threshold", type=int, default=64)
    p.add_argument("--pool", type=int, default=4, help="solver subprocess pool size")
    p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    p.add_argument("--dump-smt", dest="smt_dump", metavar="DIR",
                   help="dump every obligation as a .smt2 file")


def run_config(args) -> RunConfig:
    kw = {}
    if getattr(args, "solver", None):
        kw["solver_argv"] = shlex.split(args.solver)
    for name in ("timeout", "unroll", "max_states", "max_steps",
                 "abbrev_threshold", "pool", "fmt", "smt_dump"):
        if hasattr(args, name):
            kw[name] = getattr(args, name)
    return RunConfig(**kw)


def _load_slice(path, entry, ends):
    with open(path) as f:
        text = f.read()
    unit = disasm.parse_objdump(text)
    return disasm.make_slice(unit, entry, ends)


def _parse_addr(s):
    return int(s, 0)


def cmd_lift(args):
    sl = _load_slice(args.disasm, _parse_addr(args.entry),
                     {_parse_addr(e) for e in args.end})
    prog, _ = lifter.lift_slice(sl)
    print(bir.print_program(prog))
    return EXIT_OK


def cmd_verify(args):
    cfg = run_config(args)
    with open(args.contract) as f:
        rc = contracts.parse_contract(f.read())
    sl = _load_slice(args.disasm, rc.entry, rc.endpoints)
    prog, lm = lifter.lift_slice(sl)
    bc = contracts.to_bir(rc, prog)
    res = contracts.verify(bc, cfg.engine(), cfg.solver())
    if cfg.fmt == "json":
        print(json.dumps(res.to_json_dict(), indent=2))
    else:
        print(f"{rc.name}: {res.verdict}")
        if res.reason:
            print(f"  reason: {res.reason}")
        if res.counterexample:
            items = ", ".join(f"{k}=0x{v:x}" if isinstance(v, int) else f"{k}=<mem>"
                              for k, v in sorted(res.counterexample.items()))
            print(f"  counterexample: {items}")
            stop, holds = contracts.replay_counterexample(rc, sl, res.counterexample)
            print(f"  replay: stops at 0x{stop:x}, post holds: {holds}")
        print(f"  leaves: {res.leaf_count}, obligations: {len(res.obligations)}, "
              f"wall: {res.times.get('total', 0):.3f}s "
              f"(symex {res.times.get('symex', 0):.3f}s, "
              f"solver {res.times.get('solver', 0):.3f}s)")
    return {"verified": EXIT_OK, "refuted": EXIT_REFUTED,
            "unknown": EXIT_UNKNOWN}[res.verdict]


def cmd_symex(args):
    cfg = run_config(args)
    if args.contract:
        with open(args.contract) as f:
            rc = contracts.parse_contract(f.read())
        entry = rc.entry
        ends = rc.endpoints
        pre = contracts.translate(rc.pre)
        forbidden = rc.forbidden
        extra = contracts._collect_extra_vars(pre)
    else:
        if not (args.entry and args.end):
            print("symex needs --entry/--end or --contract", file=sys.stderr)
            return EXIT_INPUT
        entry = _parse_addr(args.entry)
        ends = {_parse_addr(e) for e in args.end}
        pre = bir.true_exp
        forbidden = set()
        extra = []
    sl = _load_slice(args.disasm, entry, ends)
    prog, _ = lifter.lift_slice(sl)
    try:
        st = symexec.execute(prog, entry, ends, forbidden, pre, cfg.engine(),
                             cfg.solver(), extra_vars=extra)
    except symexec.EngineError as e:
        print(f"symbolic execution failed: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    print(symexec.structure_to_json(st) if cfg.fmt == "json"
          else symexec.structure_to_text(st))
    return EXIT_OK


def cmd_check_sim(args):
    if args.trials < 1:
        print("--trials must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    reports = lifter.simulation_sweep(args.trials, args.seed)
    by_kind = {}
    for r in reports:
        by_kind.setdefault(r.kind, []).append(r)
    failed = 0
    for kind in isa.ALL_KINDS:
        reps = by_kind.get(kind, [])
        trials = sum(r.trials for r in reps)
        bad = [r for r in reps if not r.passed]
        status = "pass" if not bad else "FAIL"
        failed += len(bad)
        print(f"{kind:8s} {trials:6d} trials  {status}")
        for r in bad:
            f = r.failures[0]
            print(f"  counterexample (trial {f['trial']}): {sorted(f['fields'])}")
    print(f"{len(isa.ALL_KINDS)} instruction kinds, "
          f"{'all pass' if not failed else f'{failed} FAILING reports'}")
    return EXIT_OK if not failed else EXIT_REFUTED


def _bench_targets(args):
    if args.corpus_dir:
        import os
        names = sorted(n[:-4] for n in os.listdir(args.corpus_dir)
                       if n.endswith(".dis"))
        for name in names:
            with open(os.path.join(args.corpus_dir, name + ".dis")) as f:
                dis = f.read()
            ctr_path = os.path.join(args.corpus_dir, name + ".ctr")
            rc = None
            if os.path.exists(ctr_path):
                with open(ctr_path) as f:
                    rc = contracts.parse_contract(f.read())
            yield name, dis, rc
    else:
        for name in fixture_names():
            if name == "loopy":
                continue
            dis, rc = fixture(name)
            yield name, dis, rc


def cmd_bench(args):
    cfg = run_config(args)
    rows = []
    for name, dis, rc in _bench_targets(args):
        unit = disasm.parse_objdump(dis)
        n_instr = sum(len(instrs) for _, instrs in unit.sections)
        if rc is not None:
            entry, ends, forbidden = rc.entry, rc.endpoints, rc.forbidden
            pre = contracts.translate(rc.pre)
            extra = contracts._collect_extra_vars(pre)
        else:
            instrs = list(unit.all_instrs())
            entry, ends = instrs[0].address, {instrs[-1].address}
            pre, forbidden, extra = bir.true_exp, set(), []
        sl = disasm.make_slice(unit, entry, ends)
        prog, _ = lifter.lift_slice(sl)
        config = fixture_config(name) if not args.corpus_dir else cfg.engine()
        t0 = time.perf_counter()
        try:
            st = symexec.execute(prog, entry, ends, forbidden, pre, config,
                                 cfg.solver(), extra_vars=extra)
            dt = time.perf_counter() - t0
            rows.append({"name": name, "instrs": n_instr, "leaves": len(st.leaves),
                         "seconds": round(dt, 4)})
        except symexec.EngineError as e:
            rows.append({"name": name, "instrs": n_instr, "leaves": 0,
                         "seconds": float("nan"), "error": str(e)})
    rows.sort(key=lambda r: r["instrs"])
    print(f"{'program':18s} {'#instr':>7s} {'leaves':>7s} {'time':>9s}")
    for r in rows:
        print(f"{r['name']:18s} {r['instrs']:7d} {r['leaves']:7d} {r['seconds']:8.3f}s")
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.DictWriter(f, fieldnames=["name", "instrs", "leaves", "seconds"],
                               extrasaction="ignore")
            w.writeheader()
            w.writerows(rows)
        print(f"csv written to {args.csv}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="bircheck",
                                description="Lift RV64 disassembly to an IR and "
                                            "check binary contracts symbolically.")
    sub = p.add_subparsers(dest="cmd", required=True)

    lp = sub.add_parser("lift", help="lift a disassembly slice and print the IR")
    lp.add_argument("disasm")
    lp.add_argument("--entry", required=True)
    lp.add_argument("--end", action="append", required=True)
    lp.set_defaults(fn=cmd_lift)

    vp = sub.add_parser("verify", help="verify a contract against a disassembly")
    vp.add_argument("disasm")
    vp.add_argument("contract")
    add_engine_flags(vp)
    vp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("symex", help="symbolically execute and dump the structure")
    sp.add_argument("disasm")
    sp.add_argument("--entry")
    sp.add_argument("--end", action="append")
    sp.add_argument("--contract", help="take entry/endpoints/pre from a contract file")
    add_engine_flags(sp)
    sp.set_defaults(fn=cmd_symex)

    cp = sub.add_parser("check-sim", help="differential lifting test over all "
                                          "supported instruction kinds")
    cp.add_argument("--trials", type=int, default=1000, help="trials per kind")
    cp.add_argument("--seed", type=int, default=20240901)
    cp.set_defaults(fn=cmd_check_sim)

    bp = sub.add_parser("bench", help="symbolic-execution timing table over the corpus")
    bp.add_argument("corpus_dir", nargs="?", help="directory of .dis/.ctr pairs "
                                                  "(default: built-in corpus)")
    bp.add_argument("--csv", help="also write the table as CSV")
    add_engine_flags(bp)
    bp.set_defaults(fn=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (disasm.DisasmError, LiftError, contracts.ContractError,
            isa.UnsupportedInstr, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
