import pytest

from zeromem import graph as gr
from zeromem.adversary import verify_all
from zeromem.model import STOP, Environment, Move, NoRuleApplies
from zeromem.synthesis import (
    SearchCapExceeded,
    enumerate_tables_oracle,
    format_table,
    lemma_allows,
    load_table,
    options,
    parse_table,
    reachable_environments,
    refute_with_pruning,
    synthesize,
    table_strategy,
)

E = Environment.of
P2, P3, P4, P7 = (gr.build_path(n) for n in (2, 3, 4, 7))
K3 = gr.build_complete(3)
K13 = gr.build_star(3)


def assert_sound(res, graphs):
    assert res.realizable
    strat = res.strategy()
    for g in graphs:
        assert verify_all(g, strat).all_succeed
        assert verify_all(g, strat).max_colors <= res.budget


# ------------------------------------------------------------ examples


def test_triangle_budget_one_unrealizable():
    assert synthesize([K3], 1).status == "Unrealizable"


def test_p7_budget_two_unrealizable():
    assert synthesize([P7], 2).status == "Unrealizable"


def test_p7_budget_three_realizable():
    assert_sound(synthesize([P7], 3), [P7])


def test_pruned_p7_refutation_is_cheaper():
    plain = synthesize([P7], 2)
    pruned = refute_with_pruning([P7], 2)
    assert plain.status == pruned.status == "Unrealizable"
    assert pruned.nodes < plain.nodes


def test_triangle_budget_two_realizable():
    assert_sound(synthesize([K3], 2), [K3])


def test_circumference_pair_k3_pruned():
    pair = gr.build_circumference_pair(3)
    assert refute_with_pruning(pair, 2).status == "Unrealizable"


@pytest.mark.slow
def test_circumference_pair_k3_unpruned():
    assert synthesize(gr.build_circumference_pair(3), 2).status == "Unrealizable"


def test_oracle_examples():
    assert enumerate_tables_oracle(K3, 1).status == "Unrealizable"
    assert enumerate_tables_oracle(P2, 1).status == "Realizable"
    # whatever full enumeration says about P3 at one colour is ground truth
    assert enumerate_tables_oracle(P3, 1).status == synthesize([P3], 1).status == "Unrealizable"


def test_oracle_cap():
    with pytest.raises(SearchCapExceeded):
        enumerate_tables_oracle(P4, 2)


def test_unknown_on_node_cap():
    res = synthesize([P7], 2, max_nodes=5)
    assert res.status == "Unknown" and res.table is None
    with pytest.raises(ValueError):
        res.strategy()


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        synthesize([P2], 0)


# ------------------------------------------------------------ option space


def test_options_order():
    assert options(E(0, {0: 1}), 2, False) == [Move(1, 0), Move(2, 0), Move(0, 0), STOP]
    assert options(E(1, {0: 1, 2: 1}), 3, False) == [Move(1, 0), Move(1, 2), STOP]
    assert options(E(1, {2: 1}), 2, True) == [Move(1, 2), Move(2, 2), Move(0, 2), STOP]
    assert options(E(0), 2, False) == [STOP]


def test_every_option_is_legal():
    for env in reachable_environments([P4, K3, K13], 2):
        for d in options(env, 2, False):
            assert d is STOP or env.count(d.target)
            assert d is STOP or not env.self_color or d.assign == env.self_color


def test_lemma_rules():
    assert not lemma_allows(E(1, {0: 1, 2: 1}), Move(1, 2))
    assert lemma_allows(E(1, {0: 1, 2: 1}), Move(1, 0))
    assert not lemma_allows(E(0, {1: 1, 0: 1}), Move(2, 1))
    assert not lemma_allows(E(0, {1: 1}), Move(0, 1))
    assert not lemma_allows(E(0, {1: 1}), STOP)
    assert lemma_allows(E(0, {1: 2}), Move(2, 1))
    assert lemma_allows(E(1, {2: 2}), STOP)


# ------------------------------------------------------------ tables


def test_table_round_trip(tmp_path):
    res = synthesize([P7], 3)
    text = format_table(res.table, 3, False)
    assert text.startswith("# budget=3 recoloring=0\n")
    table, budget, recoloring = parse_table(text)
    assert (table, budget, recoloring) == (res.table, 3, False)
    path = tmp_path / "p7.table"
    path.write_text(text)
    strat = load_table(path)
    assert strat.name == "p7" and verify_all(P7, strat).all_succeed


def test_table_format_lines():
    text = format_table({E(0, {0: 1}): Move(1, 0), E(1, {1: 1}): STOP}, 1, False)
    assert text.splitlines()[1:] == ["env=(0|0:1) -> assign=1 goto=0", "env=(1|1:1) -> STOP"]


def test_table_parse_errors():
    with pytest.raises(ValueError):
        parse_table("(0|0:1) -> STOP")
    with pytest.raises(ValueError):
        parse_table("env=(0|) -> STOP\nenv=(0|) -> STOP")


def test_table_strategy_missing_entry():
    strat = table_strategy({}, 1)
    with pytest.raises(NoRuleApplies):
        strat(E(0))


# ------------------------------------------------------------ invariants


ORACLE_PAIRS = [
    (name, g, b)
    for name, g in [("P2", P2), ("P3", P3), ("P4", P4), ("K3", K3), ("K13", K13)]
    for b in (1, 2, 3)
    if len(reachable_environments([g], b)) <= 12
]


def test_oracle_pairs_are_the_expected_six():
    assert [(n, b) for n, _, b in ORACLE_PAIRS] == [("P2", 1), ("P2", 2), ("P3", 1), ("P4", 1), ("K3", 1), ("K13", 1)]


@pytest.mark.parametrize("name,g,budget", ORACLE_PAIRS, ids=[f"{n}-b{b}" for n, _, b in ORACLE_PAIRS])
def test_synthesis_agrees_with_oracle(name, g, budget):
    want = enumerate_tables_oracle(g, budget)
    got = synthesize([g], budget)
    assert got.status == want.status
    if got.realizable:
        assert_sound(got, [g])
        assert_sound(want, [g])


@pytest.mark.parametrize("symmetry", [True, False])
def test_symmetry_reduction_preserves_verdicts(symmetry):
    for graphs, budget in [([P2], 1), ([P3], 1), ([K3], 2), ([P4], 2), ([K13], 2)]:
        assert synthesize(graphs, budget, symmetry=symmetry).status == synthesize(graphs, budget, symmetry=not symmetry).status


def test_multi_graph_oracle_agreement():
    for graphs in ([P2, K3], [P2, P3]):
        assert enumerate_tables_oracle(graphs, 1, max_env=14).status == synthesize(graphs, 1).status


def test_monotone_in_budget():
    for graphs in ([P2], [P3], [K3], [P4], [K13]):
        verdicts = [synthesize(graphs, b).realizable for b in (1, 2, 3)]
        assert verdicts == sorted(verdicts)


def test_monotone_in_graph_set():
    assert synthesize([K3], 1).status == "Unrealizable"
    assert synthesize([K3, P2], 1).status == "Unrealizable"
    assert synthesize([P3, P2], 1).status == "Unrealizable"
    assert synthesize([K3, P4], 2).realizable <= synthesize([K3], 2).realizable


def test_pruning_preserves_verdicts_on_lower_bound_instances():
    for graphs, budget in [([P7], 2), ([P7], 3), ([K3], 1), ([K3], 2), ([K13], 2), ([P2], 1)]:
        plain = synthesize(graphs, budget)
        pruned = refute_with_pruning(graphs, budget)
        assert plain.status == pruned.status
        if pruned.realizable:
            assert_sound(pruned, graphs)


def test_pruning_only_removes_options():
    # on a fixed set a table may exploit the instances (here: leave a vertex
    # uncoloured on purpose), which no strategy for all graphs could do
    plain = synthesize([P4, K3], 2)
    pruned = refute_with_pruning([P4, K3], 2)
    assert plain.realizable and not pruned.realizable
    assert any(not lemma_allows(env, d) for env, d in plain.table.items())
    for graphs, budget in [([P4], 2), ([P3, K3], 2), ([K13], 3)]:
        assert refute_with_pruning(graphs, budget).realizable <= synthesize(graphs, budget).realizable


def test_recoloring_synthesis_sound():
    res = synthesize([P3], 1, recoloring=True)
    if res.realizable:
        assert_sound(res, [P3])
    assert res.status == enumerate_tables_oracle(P3, 1, recoloring=True, max_env=40).status
