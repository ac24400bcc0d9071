import random

import pytest
from hypothesis import given, settings, strategies as st

from anfsat.anf import AnfSystem, is_model, parse_anf, to_cnf_xor
from anfsat.mvc import build_graph, min_vertex_cover
from anfsat.oracle import brute_force_models
from anfsat.solver import XG_MODES, EngineInconsistency, Solver, SolverConfig, collect_stats, parse_stats, solve
from anfsat.weil import InstanceSpec, generate_instance

from _desk import SMALL_ANF


def _solver(text, **cfg):
    s = parse_anf(text)
    return Solver(to_cnf_xor(s), s, SolverConfig(**cfg))


def test_assign_watch_extension_infers_x1():
    sv = _solver(SMALL_ANF, xg_mode="xg_ext")
    sv._push()
    assert sv.assign(2)
    assert sv.values[1] == 1
    # x' <-> x3 is known but neither side is fixed
    assert sv.values[3] == 0 and sv.values[7] == 0


def test_assign_plain_xg_leaves_x1():
    sv = _solver(SMALL_ANF, xg_mode="xg")
    sv._push()
    assert sv.assign(2)
    assert sv.values[1] == 0


def test_assign_against_unit_xor_conflicts():
    sv = _solver("p anf 2 1\n1 T 0\n")
    assert sv.assign(sv._initial_units())
    sv._push()
    assert not sv.assign(-1)


def test_trivially_unsat_has_no_nodes():
    r = solve(*(lambda s: (to_cnf_xor(s), s))(parse_anf("p anf 1 2\n1 0\n1 T 0\n")))
    assert r.status == "UNSAT" and r.nodes == 0


def test_small_model_is_a_true_model():
    s = parse_anf(SMALL_ANF)
    for mode in XG_MODES:
        r = solve(to_cnf_xor(s), s, SolverConfig(xg_mode=mode))
        assert r.status == "SAT"
        assert r.model in brute_force_models(s)


def test_find_all_small():
    s = parse_anf(SMALL_ANF)
    r = solve(to_cnf_xor(s), s, SolverConfig(find_all=True))
    assert set(r.models) == brute_force_models(s) and len(r.models) == 16


@pytest.mark.parametrize("seed", range(5))
def test_planted_instance_within_tree_bound(seed):
    inst = generate_instance(InstanceSpec(13, 2, 6, seed, "planted"))
    cover = min_vertex_cover(build_graph(inst.system))
    r = solve(to_cnf_xor(inst.system), inst.system,
              SolverConfig(xg_mode="xg_ext", branching_order=cover.order))
    assert r.status == "SAT" and is_model(inst.system, r.model)
    assert r.nodes <= 2 ** (cover.k_prime + 1)


def test_stats_block():
    s = parse_anf("p anf 1 2\n1 0\n1 T 0\n")
    r = solve(to_cnf_xor(s), s, SolverConfig(xg_mode="off"))
    text = collect_stats(r)
    assert text.splitlines()[0] == "status=UNSAT"
    assert "xg=off" in text and "order=default" in text
    assert parse_stats(text) == r
    s = parse_anf(SMALL_ANF)
    r = solve(to_cnf_xor(s), s, SolverConfig(find_all=True))
    vlines = [l for l in collect_stats(r).splitlines() if l.startswith("v ")]
    assert len(vlines) == 16 and all(len(l) == 8 for l in vlines)
    assert parse_stats(collect_stats(r)) == r


def test_deterministic_stats():
    inst = generate_instance(InstanceSpec(15, 2, 7, 3, "random"))
    f = to_cnf_xor(inst.system)
    a = solve(f, inst.system, SolverConfig(xg_mode="xg"))
    b = solve(f, inst.system, SolverConfig(xg_mode="xg"))
    assert a.stats() == b.stats() and a.models == b.models


@pytest.mark.parametrize("cfg", [
    dict(xg_mode="gauss"),
    dict(xg_mode="off", xorset_enabled=False),
    dict(branching_order=[1, 2, 3]),
    dict(branching_order=[1, 1, 2, 3, 4, 5]),
    dict(value_order="random"),
])
def test_bad_config_rejected(cfg):
    s = parse_anf(SMALL_ANF)
    with pytest.raises(ValueError):
        Solver(to_cnf_xor(s), s, SolverConfig(**cfg))


def test_value_order_picks_extreme_model():
    # depth-first over x1..xk meets models in lexicographic order
    s = parse_anf(SMALL_ANF)
    f = to_cnf_xor(s)
    models = brute_force_models(s)
    assert solve(f, s, SolverConfig(value_order="false_first")).model == min(models)
    assert solve(f, s, SolverConfig(value_order="true_first")).model == max(models)


def test_inconsistent_engine_is_caught():
    s = parse_anf(SMALL_ANF)
    wrong = AnfSystem.from_terms(6, [[(1,), ()], [(1,)]])  # UNSAT system paired with a SAT formula
    with pytest.raises(EngineInconsistency):
        solve(to_cnf_xor(s), wrong, SolverConfig())


system_st = st.integers(0, 10**6)


@settings(max_examples=120, deadline=None)
@given(system_st)
def test_random_systems_match_enumeration(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 8)
    eqs = [[tuple(rng.sample(range(1, k + 1), min(k, rng.choice((0, 1, 1, 2, 2, 3)))))
            for _ in range(rng.randint(1, 5))] for _ in range(rng.randint(1, 6))]
    s = AnfSystem.from_terms(k, eqs)
    f = to_cnf_xor(s)
    truth = brute_force_models(s)
    order = list(range(1, k + 1))
    rng.shuffle(order)
    for mode in XG_MODES:
        for xorset in (True, False):
            if mode == "off" and not xorset:
                continue
            r = solve(f, s, SolverConfig(xg_mode=mode, xorset_enabled=xorset, branching_order=order,
                                         find_all=True))
            assert set(r.models) == truth and len(r.models) == len(truth)
