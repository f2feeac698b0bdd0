"""Explorer client: fixture store, normalization, hydration, rate limit."""

import json
from datetime import datetime, timezone

import pytest

from walletsift.coins import Coin
from walletsift.explorer import (
    ExplorerClient,
    ExplorerError,
    ExplorerSource,
    FixtureStore,
    HydrationReport,
    NotFound,
    RateLimited,
    RateLimiter,
    SchemaMismatch,
    SourceMode,
    bundled_fixture_dir,
    fixture_source,
    load_fixture_graph,
)
from walletsift.graph import TxGraph

from .fixture_chain import txid_by_prefix

TXID_4AF2 = txid_by_prefix("4af2")
TXID_1BFA = txid_by_prefix("1bfa")
TXID_2EEB = txid_by_prefix("2eeb")
TXID_D232 = txid_by_prefix("d232")
TXID_E531 = txid_by_prefix("e531")
TXID_9AA8 = txid_by_prefix("9aa8")
UNKNOWN = "f" * 64


def btc_client(**kwargs):
    return ExplorerClient(fixture_source(Coin.BTC), **kwargs)


def doge_client(**kwargs):
    return ExplorerClient(fixture_source(Coin.DOGE), **kwargs)


class FakeResponse:
    def __init__(self, status_code, payload=None, headers=None):
        self.status_code = status_code
        self._payload = payload
        self.headers = headers or {}
        self.content = json.dumps(payload).encode() if payload is not None else b""

    def json(self):
        if self._payload is None:
            raise ValueError("no body")
        return self._payload


class FakeSession:
    def __init__(self, responses):
        self.responses = responses
        self.requests = []

    def get(self, url, headers=None, timeout=None):
        self.requests.append(url)
        txid = url.rsplit("/", 1)[1]
        return self.responses[txid]


def remote_source(tmp_path, adapter="normalized", rate_limit=1000.0):
    return ExplorerSource(
        name="fake-explorer",
        coin=Coin.BTC,
        mode=SourceMode.REMOTE,
        base_url="https://explorer.invalid/tx",
        fixture_dir=tmp_path / "cache",
        adapter=adapter,
        rate_limit=rate_limit,
    )


def test_source_invariants():
    with pytest.raises(ValueError):
        ExplorerSource(name="x", coin=Coin.BTC, mode=SourceMode.FIXTURE)
    with pytest.raises(ValueError):
        ExplorerSource(name="x", coin=Coin.BTC, mode=SourceMode.REMOTE)
    with pytest.raises(ValueError):
        ExplorerSource(
            name="x",
            coin=Coin.BTC,
            mode=SourceMode.REMOTE,
            base_url="https://e.invalid",
            rate_limit=0,
        )


def test_fixture_fetch_btc_33_inputs():
    tx = btc_client().fetch_transaction(TXID_4AF2)
    assert len(tx.inputs) == 33
    assert tx.timestamp == datetime(2021, 6, 14, 3, 14, tzinfo=timezone.utc)
    assert tx.coin is Coin.BTC


def test_fixture_fetch_doge_single_input():
    tx = doge_client().fetch_transaction(TXID_E531)
    assert len(tx.inputs) == 1
    assert tx.timestamp == datetime(2021, 6, 14, 3, 46, tzinfo=timezone.utc)
    assert tx.coin is Coin.DOGE


def test_unknown_txid_in_fixture_mode_is_not_found():
    with pytest.raises(NotFound):
        btc_client().fetch_transaction(UNKNOWN)


def test_malformed_txid_rejected():
    with pytest.raises(ValueError):
        btc_client().fetch_transaction("4af2*****8643")


def test_uppercase_txid_normalized():
    tx = btc_client().fetch_transaction(TXID_4AF2.upper())
    assert tx.txid == TXID_4AF2


def test_provenance_recorded():
    clock = iter([datetime(2026, 8, 23, 10, 0, tzinfo=timezone.utc)])
    client = btc_client(now=lambda: next(clock))
    client.fetch_transaction(TXID_2EEB)
    record = client.provenance[TXID_2EEB]
    assert record.source_name == "fixtures:btc"
    assert record.origin == "fixture"
    assert record.retrieved_at.year == 2026
    assert record.to_doc()["origin"] == "fixture"


def test_remote_fetch_normalizes_and_caches(tmp_path):
    fixture_doc = json.loads(
        (bundled_fixture_dir() / "btc" / f"{TXID_2EEB}.json").read_text()
    )
    session = FakeSession({TXID_2EEB: FakeResponse(200, fixture_doc)})
    source = remote_source(tmp_path)
    client = ExplorerClient(source, session=session)
    tx = client.fetch_transaction(TXID_2EEB)
    assert tx.txid == TXID_2EEB
    assert client.provenance[TXID_2EEB].origin == "remote"

    store = FixtureStore(source.fixture_dir)
    assert store.load(Coin.BTC, TXID_2EEB) == tx.to_doc()
    assert store.raw_path_for(Coin.BTC, TXID_2EEB).is_file()

    # A second client over the cache directory needs no network at all.
    offline = ExplorerClient(
        ExplorerSource(
            name="cache",
            coin=Coin.BTC,
            mode=SourceMode.FIXTURE,
            fixture_dir=source.fixture_dir,
        )
    )
    assert offline.fetch_transaction(TXID_2EEB) == tx


def test_sources_serving_same_tx_agree(tmp_path):
    """A raw explorer payload and the fixture doc normalize identically."""
    fixture_tx = btc_client().fetch_transaction(TXID_2EEB)
    raw_payload = {
        "hash": TXID_2EEB,
        "time": int(fixture_tx.timestamp.timestamp()),
        "fee": 800,
        "inputs": [
            {
                "prev_out": {
                    "addr": fixture_tx.inputs[0].address,
                    "value": 254800,
                    "tx_hash": fixture_tx.inputs[0].funding_txid,
                }
            }
        ],
        "out": [
            {
                "n": 0,
                "addr": fixture_tx.outputs[0].address,
                "value": 254000,
                "spending_outpoints": [
                    {"tx_hash": fixture_tx.outputs[0].spent_by_hint}
                ],
            }
        ],
    }
    session = FakeSession({TXID_2EEB: FakeResponse(200, raw_payload)})
    client = ExplorerClient(
        remote_source(tmp_path, adapter="blockchain.com"), session=session
    )
    assert client.fetch_transaction(TXID_2EEB) == fixture_tx


def test_remote_error_mapping(tmp_path):
    session = FakeSession(
        {
            UNKNOWN: FakeResponse(404),
            TXID_2EEB: FakeResponse(429, headers={"Retry-After": "7"}),
            TXID_4AF2: FakeResponse(500),
            TXID_1BFA: FakeResponse(200, {"unexpected": "shape"}),
        }
    )
    client = ExplorerClient(remote_source(tmp_path), session=session)
    with pytest.raises(NotFound):
        client.fetch_transaction(UNKNOWN)
    with pytest.raises(RateLimited) as rate_error:
        client.fetch_transaction(TXID_2EEB)
    assert rate_error.value.retry_after == 7.0
    with pytest.raises(ExplorerError):
        client.fetch_transaction(TXID_4AF2)
    with pytest.raises(SchemaMismatch):
        client.fetch_transaction(TXID_1BFA)


def test_wrong_txid_in_record_is_schema_mismatch(tmp_path):
    fixture_doc = json.loads(
        (bundled_fixture_dir() / "btc" / f"{TXID_2EEB}.json").read_text()
    )
    session = FakeSession({UNKNOWN: FakeResponse(200, fixture_doc)})
    client = ExplorerClient(remote_source(tmp_path), session=session)
    with pytest.raises(SchemaMismatch):
        client.fetch_transaction(UNKNOWN)


def test_store_identical_write_is_noop(tmp_path):
    store = FixtureStore(tmp_path)
    doc = {"txid": UNKNOWN, "coin": "BTC"}
    assert store.save(Coin.BTC, UNKNOWN, doc) is True
    assert store.save(Coin.BTC, UNKNOWN, doc) is False
    assert store.save(Coin.BTC, UNKNOWN, {**doc, "extra": 1}) is True


def test_store_lists_only_normalized_docs(tmp_path):
    store = FixtureStore(tmp_path)
    store.save(Coin.BTC, UNKNOWN, {"txid": UNKNOWN}, raw=b"{}")
    assert store.txids(Coin.BTC) == [UNKNOWN]
    assert store.txids(Coin.DOGE) == []


def test_hydrate_depth_zero_fetches_only_seeds():
    graph = TxGraph()
    report = doge_client().hydrate(graph, [TXID_9AA8], depth=0)
    assert report.fetched == (TXID_9AA8,)
    assert len(graph) == 1
    assert report.errors == {}


def test_hydrate_depth_one_backward_reaches_funding_tx():
    graph = TxGraph()
    report = doge_client().hydrate(graph, [TXID_9AA8], depth=1, direction="backward")
    assert set(report.fetched) == {TXID_9AA8, TXID_E531}
    assert TXID_E531 in graph


def test_hydrate_walks_whole_btc_chain():
    graph = TxGraph()
    report = btc_client().hydrate(graph, [TXID_D232], depth=8, direction="backward")
    assert set(report.fetched) == {TXID_D232, TXID_2EEB, TXID_4AF2, TXID_1BFA}


def test_hydrate_forward_follows_spend_hints():
    graph = TxGraph()
    report = btc_client().hydrate(graph, [TXID_1BFA], depth=8, direction="forward")
    assert set(report.fetched) == {TXID_1BFA, TXID_4AF2, TXID_2EEB, TXID_D232}


def test_hydrate_aggregates_errors_without_aborting():
    graph = TxGraph()
    client = doge_client()
    report = client.hydrate(graph, [txid_by_prefix("bf48"), UNKNOWN], depth=1)
    assert txid_by_prefix("bf48") in graph
    assert UNKNOWN in report.errors
    assert "not found" in report.errors[UNKNOWN]


def test_hydrate_rejects_negative_depth():
    with pytest.raises(ValueError):
        btc_client().hydrate(TxGraph(), [TXID_4AF2], depth=-1)


def test_hydrate_skips_transactions_already_in_graph():
    graph = TxGraph()
    client = btc_client()
    client.hydrate(graph, [TXID_2EEB], depth=0)
    report = client.hydrate(graph, [TXID_2EEB], depth=1, direction="backward")
    assert TXID_2EEB not in report.fetched
    assert TXID_4AF2 in report.fetched


def test_rate_limit_spacing_with_mock_clock(tmp_path):
    clock_value = [0.0]
    sleeps = []

    def clock():
        return clock_value[0]

    def sleep(duration):
        sleeps.append(duration)
        clock_value[0] += duration

    fixture_doc = json.loads(
        (bundled_fixture_dir() / "btc" / f"{TXID_2EEB}.json").read_text()
    )
    session = FakeSession({TXID_2EEB: FakeResponse(200, fixture_doc)})
    source = remote_source(tmp_path, rate_limit=2.0)
    client = ExplorerClient(source, session=session, clock=clock, sleep=sleep)
    for _ in range(10):
        client.fetch_transaction(TXID_2EEB)
        # Defeat the write-through cache so every call goes remote.
        FixtureStore(source.fixture_dir).path_for(Coin.BTC, TXID_2EEB).unlink()
    assert len(session.requests) == 10
    assert sum(sleeps) >= 4.5


def test_rate_limiter_unit():
    clock_value = [0.0]
    slept = []

    def clock():
        return clock_value[0]

    def sleep(duration):
        slept.append(duration)
        clock_value[0] += duration

    limiter = RateLimiter(4.0, clock=clock, sleep=sleep)
    for _ in range(5):
        limiter.acquire()
    assert sum(slept) == pytest.approx(1.0)


def test_load_fixture_graph_has_full_chain():
    graph = load_fixture_graph()
    assert len(graph) == 8
    assert {tx.coin for tx in graph.transactions()} == {Coin.BTC, Coin.DOGE}


def test_hydration_report_doc():
    report = HydrationReport(graph=TxGraph(), fetched=("a" * 64,), errors={"b" * 64: "x"})
    doc = report.to_doc()
    assert doc == {"fetched": ["a" * 64], "errors": {"b" * 64: "x"}}
