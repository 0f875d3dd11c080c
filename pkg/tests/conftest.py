import random

import pytest

from bircheck import disasm, lifter
from bircheck.corpus import asm, fixture, fixture_config
from bircheck.smt import SolverConfig


@pytest.fixture(scope="session")
def solver():
    return SolverConfig()


def random_instrs(rng, n, base):
    """n random supported instructions (branch/jump offsets kept inside the
    listing so operand rendering stays sane)."""
    from bircheck import isa
    out = []
    for k in range(n):
        kind = rng.choice(isa.ALL_KINDS)
        i = lifter.sample_instr(kind, rng)
        out.append(i)
    return out


def render_listing(rng, n=20, base=0x10000, name="synth"):
    instrs = random_instrs(rng, n, base)
    return asm.listing(name, base, instrs, pseudo=rng.random() < 0.5), instrs


def load_fixture(name):
    """(slice, program, liftmap, contract) for a corpus fixture."""
    dis, rc = fixture(name)
    unit = disasm.parse_objdump(dis)
    if rc is None:
        instrs = list(unit.all_instrs())
        sl = disasm.make_slice(unit, instrs[0].address, {instrs[-1].address})
        prog, lm = lifter.lift_slice(sl)
        return sl, prog, lm, None
    sl = disasm.make_slice(unit, rc.entry, rc.endpoints)
    prog, lm = lifter.lift_slice(sl)
    return sl, prog, lm, rc


def seeded(name, salt=0):
    return random.Random(hash((name, salt)) & 0xFFFFFFFF)


def compute_structure(name, solver=None):
    from bircheck import contracts, symexec
    solver = solver or SolverConfig()
    sl, prog, lm, rc = load_fixture(name)
    bc = contracts.to_bir(rc, prog)
    extra = contracts._collect_extra_vars(bc.pre, *bc.post.values())
    structure = symexec.execute(prog, bc.entry, bc.endpoints, bc.forbidden,
                                bc.pre, fixture_config(name), solver,
                                extra_vars=extra)
    return sl, prog, lm, rc, bc, structure


def soundness_sample(name, trials, seed, solver=None):
    """Run `trials` random pre-satisfying concrete executions and check each
    final state is matched by at least one leaf under the interpretation built
    from the initial state and parameters."""
    from bircheck import bir, contracts, symexec
    sl, prog, lm, rc, bc, structure = compute_structure(name, solver)
    exits = set(bc.endpoints) | set(lm.exits)
    rng = random.Random(seed)
    for t in range(trials):
        m, params = contracts.sample_prestate(rc, rng)
        env0 = lifter.machine_to_env(m)
        H = dict(params)
        for var, s in structure.initial.env.items():
            v = env0.get(var)
            if v is None:
                v = {} if var.ty.width is None else 0
            H[s.name] = v
        assert symexec.matches(H, structure.initial, env0, bc.entry), \
            f"{name} trial {t}: initial state not matched"
        envf, stop, _ = bir.run_program(prog, env0, bc.entry, exits=exits,
                                        fuel=100_000)
        assert stop is not bir.HALTED, f"{name}: lifted code never halts"
        hits = [leaf for leaf in structure.leaves
                if symexec.matches(H, leaf, envf, stop)]
        assert hits, f"{name} trial {t}: final state at 0x{stop:x} matched no leaf"
    return len(structure.leaves)
