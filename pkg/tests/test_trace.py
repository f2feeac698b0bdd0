"""Flow tracing and attribution on the demo chain and random graphs."""

import random
from datetime import datetime, timezone
from decimal import Decimal

import pytest

from walletsift.coins import Coin
from walletsift.graph import (
    ChangeReason,
    Cluster,
    Direction,
    FormationRule,
    HopRole,
    LabelSet,
    SeedNotFound,
    TraceMode,
    Transaction,
    TxGraph,
    TxInput,
    TxOutput,
    UnattributedReason,
    cluster_common_input,
    identify_change,
    trace,
)

from .fixture_chain import address_by_prefix, example_labels, fixture_graph, txid_by_prefix
from .graphgen import random_graph

T0 = datetime(2021, 6, 14, tzinfo=timezone.utc)


def tx(txid, inputs, outputs, fee="0"):
    return Transaction(
        txid=txid,
        coin=Coin.BTC,
        timestamp=T0,
        inputs=tuple(TxInput(a, Decimal(v), f) for a, v, f in inputs),
        outputs=tuple(TxOutput(i, a, Decimal(v), s) for i, (a, v, s) in enumerate(outputs)),
        fee=fee and Decimal(fee),
    )


class TestIdentifyChange:
    def test_output_back_to_sender_is_change(self):
        t = tx("aa" * 32, [("jim", "3.5", None)], [("jon", "1.0", None), ("jim", "2.5", None)])
        call = identify_change(t, {"jim"})
        assert call.index == 1
        assert call.reason is None

    def test_fresh_outputs_no_candidate(self):
        t = tx("aa" * 32, [("jim", "2", None)], [("x", "1", None), ("y", "1", None)])
        call = identify_change(t, {"jim"})
        assert call.index is None
        assert call.reason is ChangeReason.NO_CANDIDATE

    def test_two_sender_outputs_ambiguous(self):
        t = tx("aa" * 32, [("jim", "2", None)], [("jim", "1", None), ("jim", "1", None)])
        call = identify_change(t, {"jim"})
        assert call.index is None
        assert call.reason is ChangeReason.AMBIGUOUS

    def test_empty_sender_set_rejected(self):
        t = tx("aa" * 32, [("jim", "1", None)], [("x", "1", None)])
        with pytest.raises(ValueError):
            identify_change(t, set())

    def test_cluster_widens_the_wallet(self):
        t = tx("aa" * 32, [("jim", "2", None)], [("jim-2", "1", None), ("y", "1", None)])
        cluster = Cluster.of(frozenset({"jim", "jim-2"}), FormationRule.MANUAL)
        assert identify_change(t, {"jim"}).index is None
        assert identify_change(t, {"jim"}, [cluster]).index == 0


class TestFixtureTraces:
    def test_backward_from_exchange_withdrawal_depth_zero(self):
        graph = fixture_graph()
        labels = LabelSet({address_by_prefix("32ti"): "Coinbase"})
        result = trace(graph, txid_by_prefix("4af2"), Direction.BACKWARD, labels=labels)
        assert result.terminal.attributed
        assert result.terminal.entities == ("Coinbase",)
        assert result.depth == 0
        assert result.hops == ()
        assert result.visited[0] == txid_by_prefix("4af2")

    def test_depth_zero_independent_of_budget(self):
        graph = fixture_graph()
        labels = LabelSet({address_by_prefix("32ti"): "Coinbase"})
        for max_depth in (0, 1, 5):
            result = trace(
                graph, txid_by_prefix("4af2"), Direction.BACKWARD,
                labels=labels, max_depth=max_depth,
            )
            assert result.terminal.entity == "Coinbase"
            assert result.depth == 0

    def test_forward_to_labeled_destination(self):
        graph = fixture_graph()
        result = trace(
            graph, txid_by_prefix("1bfa"), Direction.FORWARD, labels=example_labels()
        )
        assert result.terminal.entity == "Coinbase"
        assert result.depth == 0

    def test_doge_backward_unlabeled_component(self):
        graph = fixture_graph()
        result = trace(graph, txid_by_prefix("e531"), Direction.BACKWARD, labels=LabelSet())
        assert not result.terminal.attributed
        assert result.terminal.reason is UnattributedReason.NO_LABELS
        assert result.depth == 1
        assert result.hops[0].txid == txid_by_prefix("738a")
        assert result.hops[0].role is HopRole.FUNDING

    def test_backward_two_hops(self):
        graph = fixture_graph()
        labels = LabelSet({address_by_prefix("32ti"): "Coinbase"})
        result = trace(graph, txid_by_prefix("d232"), Direction.BACKWARD, labels=labels)
        assert result.terminal.entity == "Coinbase"
        assert result.depth == 2
        assert [h.txid for h in result.hops] == [
            txid_by_prefix("2eeb"),
            txid_by_prefix("4af2"),
        ]

    def test_depth_budget_exhaustion(self):
        graph = fixture_graph()
        labels = LabelSet({address_by_prefix("32ti"): "Coinbase"})
        result = trace(
            graph, txid_by_prefix("d232"), Direction.BACKWARD, labels=labels, max_depth=1
        )
        assert not result.terminal.attributed
        assert result.terminal.reason is UnattributedReason.DEPTH_EXHAUSTED

    def test_seed_not_found(self):
        with pytest.raises(SeedNotFound):
            trace(fixture_graph(), "00" * 32, Direction.BACKWARD)

    def test_missing_link_when_funding_not_loaded(self):
        graph = fixture_graph()
        partial = TxGraph()
        partial.add(graph.require(txid_by_prefix("e531")))
        result = trace(partial, txid_by_prefix("e531"), Direction.BACKWARD)
        assert result.terminal.reason is UnattributedReason.MISSING_LINK
        assert result.depth == 0

    def test_missing_link_forward_via_hint(self):
        graph = fixture_graph()
        partial = TxGraph()
        partial.add(graph.require(txid_by_prefix("738a")))
        # 738a's only output carries a spent-by hint for e531, absent here.
        result = trace(partial, txid_by_prefix("738a"), Direction.FORWARD)
        assert result.terminal.reason is UnattributedReason.MISSING_LINK


class TestModes:
    def build_branching(self):
        graph = TxGraph()
        graph.add(
            tx(
                "aa" * 32,
                [("sender", "3.0", None)],
                [("payee", "1.0", None), ("sender", "1.9", None)],
                fee="0.1",
            )
        )
        graph.add(tx("bb" * 32, [("payee", "1.0", "aa" * 32)], [("p2", "1.0", None)]))
        graph.add(tx("cc" * 32, [("sender", "1.9", "aa" * 32)], [("c2", "1.9", None)]))
        return graph

    def test_utxo_forward_follows_only_change(self):
        graph = self.build_branching()
        result = trace(graph, "aa" * 32, Direction.FORWARD, mode=TraceMode.UTXO)
        assert set(result.visited) == {"aa" * 32, "cc" * 32}

    def test_wallet_mode_follows_every_edge(self):
        graph = self.build_branching()
        result = trace(graph, "aa" * 32, Direction.FORWARD, mode=TraceMode.WALLET_TO_WALLET)
        assert set(result.visited) == {"aa" * 32, "bb" * 32, "cc" * 32}

    def test_hop_through_payment_output_annotated(self):
        graph = self.build_branching()
        result = trace(graph, "aa" * 32, Direction.FORWARD, labels=LabelSet({"p2": "X"}))
        assert result.depth == 1
        hop = result.hops[0]
        assert (hop.txid, hop.role, hop.via_output_index) == ("bb" * 32, HopRole.PAYMENT, 0)

    def test_hop_through_change_output_annotated(self):
        graph = self.build_branching()
        result = trace(graph, "aa" * 32, Direction.FORWARD, labels=LabelSet({"c2": "X"}))
        assert result.depth == 1
        hop = result.hops[0]
        assert (hop.txid, hop.role, hop.via_output_index) == ("cc" * 32, HopRole.CHANGE, 1)

    def test_equal_depth_ties_report_all_entities(self):
        graph = self.build_branching()
        labels = LabelSet({"p2": "Zeta", "c2": "Alpha"})
        result = trace(graph, "aa" * 32, Direction.FORWARD, labels=labels)
        assert result.terminal.entities == ("Alpha", "Zeta")

    def test_cluster_level_label_attributes(self):
        graph = TxGraph()
        graph.add(tx("aa" * 32, [("a1", "1", None), ("a2", "1", None)], [("b", "2", None)]))
        clusters = cluster_common_input(graph)
        target = next(c for c in clusters if "a2" in c.members)
        labels = LabelSet({target.cluster_id: "Exchange"})
        result = trace(graph, "aa" * 32, Direction.BACKWARD, labels=labels)
        assert result.terminal.entity == "Exchange"
        assert result.terminal.matches[0].matched_key == target.cluster_id

    def test_wallet_mode_visits_superset_of_utxo(self):
        rng = random.Random(0x5E7)
        for size in (5, 20, 60):
            graph = random_graph(rng, size)
            txids = [t.txid for t in graph.transactions()]
            for seed in rng.sample(txids, min(8, len(txids))):
                for direction in Direction:
                    wide = trace(graph, seed, direction, mode=TraceMode.WALLET_TO_WALLET)
                    narrow = trace(graph, seed, direction, mode=TraceMode.UTXO)
                    assert set(wide.visited) >= set(narrow.visited)


class TestSerialization:
    def test_result_document_shape(self):
        graph = fixture_graph()
        labels = LabelSet({address_by_prefix("32ti"): "Coinbase"})
        doc = trace(graph, txid_by_prefix("4af2"), Direction.BACKWARD, labels=labels).to_doc()
        assert doc["terminal"]["attributed"] is True
        assert doc["terminal"]["entities"] == ["Coinbase"]
        assert doc["depth"] == 0
        assert doc["direction"] == "Backward"
        assert doc["mode"] == "WalletToWallet"
        assert doc["visited"][0] == txid_by_prefix("4af2")

    def test_labelset_round_trip(self, tmp_path):
        labels = LabelSet({"addr": {"entity": "X", "source": "test"}})
        path = tmp_path / "labels.json"
        path.write_text(__import__("json").dumps(labels.to_doc()))
        reloaded = LabelSet.from_file(path)
        assert reloaded.get("addr").entity == "X"
        assert reloaded.get("addr").source == "test"
