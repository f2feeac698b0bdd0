"""Graphviz export structure and determinism."""

from walletsift.graph import LabelSet, to_dot

from .fixture_chain import address_by_prefix, example_labels, fixture_graph, txid_by_prefix


def test_structure():
    graph = fixture_graph()
    dot = to_dot(graph)
    assert dot.startswith("digraph flow {")
    assert dot.rstrip().endswith("}")
    for tx in graph.transactions():
        assert f'"tx:{tx.txid}" [shape=box' in dot
    assert dot.count("shape=ellipse") == len(graph.addresses())


def test_change_edge_dashed():
    from datetime import datetime, timezone
    from decimal import Decimal

    from walletsift.coins import Coin
    from walletsift.graph import Transaction, TxGraph, TxInput, TxOutput

    graph = TxGraph()
    graph.add(
        Transaction(
            txid="ab" * 32,
            coin=Coin.BTC,
            timestamp=datetime(2021, 6, 14, tzinfo=timezone.utc),
            inputs=(TxInput("jim", Decimal("3.5"), None),),
            outputs=(
                TxOutput(0, "jon", Decimal("1.0")),
                TxOutput(1, "jim", Decimal("2.5")),
            ),
            fee=Decimal(0),
        )
    )
    lines = to_dot(graph).splitlines()
    change = next(l for l in lines if '"tx:' + "ab" * 32 + '" -> "addr:jim"' in l)
    payment = next(l for l in lines if '-> "addr:jon"' in l)
    assert "style=dashed" in change
    assert "style=dashed" not in payment


def test_labeled_address_filled_and_badged():
    dot = to_dot(fixture_graph(), example_labels())
    line = next(
        l
        for l in dot.splitlines()
        if f'"addr:{address_by_prefix("32ti")}"' in l and "->" not in l
    )
    assert "style=filled" in line
    assert "Coinbase" in line


def test_byte_identical_across_runs():
    assert to_dot(fixture_graph(), example_labels()) == to_dot(
        fixture_graph(), example_labels()
    )


def test_edge_labels_carry_amounts():
    dot = to_dot(fixture_graph())
    assert 'label="212.57700000"' in dot
    assert 'label="0.00254817"' in dot


def test_empty_graph():
    from walletsift.graph import TxGraph

    dot = to_dot(TxGraph(), LabelSet())
    assert dot.startswith("digraph flow {")
    assert "shape=box" not in dot
