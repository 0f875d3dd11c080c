import random

import pytest

from bircheck import bir, contracts, disasm, isa, lifter
from bircheck.bir import binop, binpred, const, den, load, sym
from bircheck.contracts import (ContractError, RBin, RCmp, RConst,
                                RGpr, RMemLoad, RParam, RiscvContract,
                                backlift, parse_contract, print_contract,
                                replay_counterexample, sample_prestate, to_bir,
                                translate, translation_check, verify)
from bircheck.corpus import fixture, fixture_config
from bircheck.lifter import MEM8, xvar

from conftest import load_fixture


def test_translate_gpr_equality_matches_ir_shape():
    # gpr[10] == pre_x10 becomes the equality over the x10 variable
    pred = (RCmp("eq", RGpr(10), RParam("pre_x10")),)
    exp = translate(pred)
    assert exp == binpred("eq", den(xvar(10)), sym("pre_x10", bir.Imm64))


def test_translate_literal_true():
    assert translate(()) is bir.true_exp


def test_translate_saved_register_atom_shape():
    # mem_load_dword(pre_mscratch+8) == pre_mepc
    pred = (RCmp("eq", RMemLoad(RBin("add", RParam("pre_mscratch"), RConst(8))),
                 RParam("pre_mepc")),)
    exp = translate(pred)
    want = binpred("eq",
                   load(den(MEM8), binop("plus", sym("pre_mscratch", bir.Imm64),
                                         const(64, 8)), 64),
                   sym("pre_mepc", bir.Imm64))
    assert exp == want


def test_translate_gpr0_is_constant_zero():
    pred = (RCmp("eq", RGpr(0), RConst(0)),)
    assert translate(pred) == binpred("eq", const(64, 0), const(64, 0))


def test_translation_equivalence_on_corpus_contracts():
    # ISA-level evaluation equals IR-level evaluation of the translation;
    # at least 1000 trials per contract (pre plus posts)
    for name in ("incr", "mod2", "swap", "isqrt", "motor", "chacha_qr",
                 "trap_entry_mini"):
        _, rc = fixture(name)
        preds = [("pre", rc.pre)] + [(hex(a), p) for a, p in rc.post.items()]
        per_pred = max(1000 // len(preds) + 1, 550)
        for label, pred in preds:
            mism = translation_check(pred, trials=per_pred,
                                     seed=hash((name, label)) & 0xFFFF)
            assert not mism, (name, label, mism)


def test_contract_parse_print_roundtrip():
    _, rc = fixture("trap_entry_mini")
    text = print_contract(rc)
    rc2 = parse_contract(text)
    assert rc2 == rc


def test_contract_parser_errors():
    with pytest.raises(ContractError):
        parse_contract("entry 0x10\nendpoints 0x14\npre:\n")  # no program name
    with pytest.raises(ContractError):
        parse_contract("program p\nentry 0x10\nendpoints 0x14\npre:\n"
                       "  gpr[10] == undeclared\n")
    with pytest.raises(ContractError):
        parse_contract("program p\nentry 0x10\nendpoints 0x14\n"
                       "params s_evil\npre:\n")
    with pytest.raises(ContractError):
        parse_contract("program p\nentry 0x10\nendpoints 0x14\npre:\n"
                       "  gpr[99] == 0\n")


def test_verify_incr_fig_contract(solver):
    sl, prog, lm, rc = load_fixture("incr")
    res = verify(to_bir(rc, prog), solver=solver)
    assert res.verdict == "verified"
    assert res.leaf_count == 1


def test_verify_off_by_one_mutant_refuted_and_replays(solver):
    sl, prog, lm, rc = load_fixture("incr")
    mutant = RiscvContract(
        name="incr", entry=rc.entry, endpoints=rc.endpoints, pre=rc.pre,
        post={rc.entry + 4: (RCmp("eq", RGpr(10),
                                  RBin("add", RParam("pre_x10"), RConst(2))),)},
        params=rc.params)
    res = verify(to_bir(mutant, prog), solver=solver)
    assert res.verdict == "refuted"
    assert res.endpoint == 0x1048C
    assert res.counterexample is not None
    stop, holds = replay_counterexample(mutant, sl, res.counterexample)
    assert stop == 0x1048C and not holds
    # the true contract does hold on the same state
    stop2, holds2 = replay_counterexample(rc, sl, res.counterexample)
    assert holds2


def test_verify_swap_with_concrete_corroboration(solver):
    sl, prog, lm, rc = load_fixture("swap")
    res = verify(to_bir(rc, prog), solver=solver)
    assert res.verdict == "verified"
    rng = random.Random(77)
    for _ in range(100):
        m, params = sample_prestate(rc, rng)
        final, _ = isa.run(m, sl, fuel=1000)
        assert final.pc in rc.endpoints
        assert contracts.eval_pred(rc.post[final.pc], final, params)


def test_verify_unknown_on_budget(solver):
    sl, prog, lm, rc = load_fixture("loopy")
    res = verify(to_bir(rc, prog), fixture_config("loopy"), solver)
    assert res.verdict == "unknown"
    assert "budget" in res.reason


def test_verify_refutes_reachable_non_endpoint(solver):
    # declaring a label past the real exit as the endpoint leaves the actual
    # stop address as a non-endpoint leaf, which refutes the contract
    sl, prog, lm, rc = load_fixture("incr")
    bad = RiscvContract(name="incr", entry=rc.entry,
                        endpoints=frozenset({rc.entry + 8}),
                        pre=rc.pre, post={rc.entry + 8: ()}, params=rc.params)
    bc = to_bir(bad, prog)
    res = verify(bc, solver=solver)
    assert res.verdict == "refuted"
    assert res.endpoint == rc.entry + 4  # stops at the exit label instead


def test_verify_forbidden_label(solver):
    sl, prog, lm, rc = load_fixture("incr4")
    bad = RiscvContract(name="incr4", entry=rc.entry, endpoints=rc.endpoints,
                        pre=rc.pre, post=rc.post, params=rc.params,
                        forbidden=frozenset({rc.entry + 4}))
    res = verify(to_bir(bad, prog), solver=solver)
    assert res.verdict == "refuted"
    assert "forbidden" in res.reason


def test_verify_call_and_return_with_propagated_address(solver):
    # caller jal + callee ret: the return address is written concretely by
    # jal, so the computed jump resolves to a single target by constant
    # propagation (no solver case analysis needed)
    from bircheck.corpus import asm
    from bircheck.isa import Instr

    base = 0x30000
    instrs = [
        Instr("jal", rd=1, imm=8),        # call the callee at base+8
        asm.nop(),                        # return lands here (endpoint)
        asm.addi(10, 10, 1),              # callee body
        asm.ret(),
    ]
    text = asm.listing("callret", base, instrs)
    unit = disasm.parse_objdump(text)
    # endpoints: the return site plus the lift bound (unreachable)
    endpoints = frozenset({base + 4, base + 16})
    sl = disasm.make_slice(unit, base, endpoints)
    prog, lm = lifter.lift_slice(sl)
    rc = RiscvContract(
        name="callret", entry=base, endpoints=endpoints,
        pre=(RCmp("eq", RGpr(10), RParam("pre_x10")),),
        post={base + 4: (RCmp("eq", RGpr(10),
                              RBin("add", RParam("pre_x10"), RConst(1))),),
              base + 16: ()},
        params=(contracts.Param("pre_x10"),))
    res = verify(to_bir(rc, prog), solver=solver)
    assert res.verdict == "verified"
    assert res.leaf_count == 1
    (leaf,) = res.structure.leaves
    assert leaf.at == base + 4
    # concrete corroboration through the ISA interpreter
    rng = random.Random(9)
    for _ in range(25):
        m, params = sample_prestate(rc, rng)
        final, _ = isa.run(m, sl, fuel=100)
        assert final.pc == base + 4
        assert contracts.eval_pred(rc.post[final.pc], final, params)


def test_sample_prestate_handles_corpus_preconditions():
    rng = random.Random(5)
    for name in ("incr", "mod2", "swap", "isqrt", "motor", "chacha_qr",
                 "trap_entry_mini"):
        _, rc = fixture(name)
        for _ in range(20):
            m, params = sample_prestate(rc, rng)
            assert contracts.eval_pred(rc.pre, m, params), name


def test_refuted_memory_contract_replays_through_model_bytes(solver):
    # a wrong swap post: the counter-model must carry concrete memory bytes
    # that replay to a violation through the ISA interpreter
    sl, prog, lm, rc = load_fixture("swap")
    wrong_post = {max(rc.endpoints): (RCmp("eq", RMemLoad(RParam("pre_p")),
                                           RParam("pre_v0")),)}  # unchanged, not swapped
    mutant = contracts.RiscvContract(
        name="swap", entry=rc.entry, endpoints=rc.endpoints, pre=rc.pre,
        post=wrong_post, params=rc.params)
    res = verify(to_bir(mutant, prog), solver=solver)
    assert res.verdict == "refuted"
    assert isinstance(res.counterexample.get("s_MEM8", {}), dict)
    stop, holds = replay_counterexample(mutant, sl, res.counterexample)
    assert stop in rc.endpoints and not holds
    # while the true contract holds on the very same state
    _, holds_true = replay_counterexample(rc, sl, res.counterexample)
    assert holds_true


def test_backlift_all_evidence_passes(solver):
    sl, prog, lm, rc = load_fixture("incr")
    res = verify(to_bir(rc, prog), solver=solver)
    sims = {addr: lifter.check_simulation(isa.decode(ri.word), addr, 100, 11)
            for addr, ri in lm.instr_at.items()}
    rep = backlift(rc, res, lm, sims)
    assert rep.status == "holds (tested)"
    assert all(ev["passed"] for ev in rep.evidence)
    doc = rep.to_json_dict()
    assert doc["schema"] == "bircheck-backlift/1"


def test_backlift_unknown_propagates(solver):
    sl, prog, lm, rc = load_fixture("loopy")
    res = verify(to_bir(rc, prog), fixture_config("loopy"), solver)
    sims = {addr: lifter.check_simulation(isa.decode(ri.word), addr, 50, 1)
            for addr, ri in lm.instr_at.items()}
    rep = backlift(rc, res, lm, sims)
    assert rep.status == "unknown"


def test_backlift_invalid_names_failing_instruction(solver):
    from dataclasses import replace

    sl, prog, lm, rc = load_fixture("incr")
    res = verify(to_bir(rc, prog), solver=solver)

    def corrupt(i, addr, comment=""):
        return lifter.lift_instr(replace(i, imm=i.imm + 1), addr, comment)

    sims = {addr: lifter.check_simulation(isa.decode(ri.word), addr, 50, 3,
                                          lift_fn=corrupt)
            for addr, ri in lm.instr_at.items()}
    rep = backlift(rc, res, lm, sims)
    assert rep.status == "invalid"
    assert "0x10488" in rep.cause


def test_backlift_missing_evidence(solver):
    sl, prog, lm, rc = load_fixture("incr")
    res = verify(to_bir(rc, prog), solver=solver)
    with pytest.raises(contracts.EvidenceMissing):
        backlift(rc, res, lm, {})


def test_verified_verdicts_concretely_corroborated(solver):
    # independent of the solver: >= 100 pre-satisfying concrete executions per
    # verified contract must stop at an endpoint satisfying its post
    rng = random.Random(123)
    for name in ("incr", "incr4", "mod2", "swap", "isqrt", "motor",
                 "chacha_qr", "trap_entry_mini"):
        sl, prog, lm, rc = load_fixture(name)
        res = verify(to_bir(rc, prog), fixture_config(name), solver)
        assert res.verdict == "verified", name
        for _ in range(100):
            m, params = sample_prestate(rc, rng)
            final, _ = isa.run(m, sl, fuel=100_000)
            assert final.pc in rc.endpoints, name
            assert contracts.eval_pred(rc.post[final.pc], final, params), name
