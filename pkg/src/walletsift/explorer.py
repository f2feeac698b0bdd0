"""Blockchain explorer access with a local fixture store.

A source is either Remote (a public explorer API) or Fixture (a
directory of normalized per-txid JSON documents).  Remote responses
are normalized by a per-source adapter and written through to the
fixture store, so a case can be re-analyzed fully offline afterwards.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .codec.addresses import TxId
from .coins import Coin, format_amount
from .graph.model import Transaction, TxGraph
from .timestamps import format_utc


class ExplorerError(Exception):
    """Base class for explorer failures."""


class NotFound(ExplorerError):
    def __init__(self, txid: str, source: str):
        super().__init__(f"transaction {txid} not found in {source}")
        self.txid = txid


class RateLimited(ExplorerError):
    def __init__(self, source: str, retry_after: float | None = None):
        suffix = f"; retry after {retry_after}s" if retry_after else ""
        super().__init__(f"{source} rate limited{suffix}")
        self.retry_after = retry_after


class SchemaMismatch(ExplorerError):
    """Response payload does not fit the expected schema."""


class SourceMode(str, Enum):
    REMOTE = "Remote"
    FIXTURE = "Fixture"


@dataclass(frozen=True)
class ExplorerSource:
    name: str
    coin: Coin
    mode: SourceMode
    base_url: str | None = None
    fixture_dir: str | Path | None = None
    rate_limit: float = 2.0
    adapter: str = "normalized"
    api_key_env: str | None = None

    def __post_init__(self) -> None:
        if self.mode is SourceMode.FIXTURE and self.fixture_dir is None:
            raise ValueError(f"source {self.name}: Fixture mode needs fixture_dir")
        if self.mode is SourceMode.REMOTE and not self.base_url:
            raise ValueError(f"source {self.name}: Remote mode needs base_url")
        if self.rate_limit <= 0:
            raise ValueError("rate_limit must be positive")


@dataclass(frozen=True)
class Provenance:
    source_name: str
    origin: str
    retrieved_at: datetime

    def to_doc(self) -> dict:
        return {
            "source_name": self.source_name,
            "origin": self.origin,
            "retrieved_at": format_utc(self.retrieved_at),
        }


def bundled_fixture_dir() -> Path:
    return Path(str(resources.files("walletsift.data").joinpath("fixtures")))


class FixtureStore:
    """One normalized JSON document per txid: ``<coin>/<txid>.json``.

    Writes are atomic (temp file + rename) with last-writer-wins
    semantics; rewriting identical content is a no-op.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path_for(self, coin: Coin, txid: str) -> Path:
        return self.root / coin.value.lower() / f"{txid}.json"

    def raw_path_for(self, coin: Coin, txid: str) -> Path:
        return self.root / coin.value.lower() / f"{txid}.raw.json"

    def load(self, coin: Coin, txid: str) -> dict | None:
        path = self.path_for(coin, txid)
        if not path.is_file():
            return None
        try:
            return json.loads(path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaMismatch(f"fixture {path} unreadable: {exc}")

    def save(self, coin: Coin, txid: str, doc: dict, raw: bytes | None = None) -> bool:
        """Store a normalized doc (and optional raw payload). Returns
        False when identical content was already present."""
        target = self.path_for(coin, txid)
        payload = json.dumps(doc, indent=2).encode() + b"\n"
        changed = self._write_atomic(target, payload)
        if raw is not None:
            self._write_atomic(self.raw_path_for(coin, txid), raw)
        return changed

    @staticmethod
    def _write_atomic(target: Path, payload: bytes) -> bool:
        if target.is_file() and target.read_bytes() == payload:
            return False
        target.parent.mkdir(parents=True, exist_ok=True)
        handle = tempfile.NamedTemporaryFile(
            dir=target.parent, prefix=target.name + ".", delete=False
        )
        try:
            handle.write(payload)
            handle.close()
            os.replace(handle.name, target)
        except BaseException:
            handle.close()
            os.unlink(handle.name)
            raise
        return True

    def txids(self, coin: Coin) -> list[str]:
        directory = self.root / coin.value.lower()
        if not directory.is_dir():
            return []
        return sorted(
            path.stem
            for path in directory.glob("*.json")
            if not path.name.endswith(".raw.json")
        )


def _satoshi(value) -> str:
    return format_amount(Decimal(int(value)) / Decimal(10**8))


def _adapt_normalized(payload: dict, coin: Coin) -> dict:
    return payload


def _adapt_blockchain_info(payload: dict, coin: Coin) -> dict:
    """blockchain.com-style rawtx payload -> normalized doc."""
    inputs = []
    for item in payload["inputs"]:
        prev = item.get("prev_out") or {}
        inputs.append(
            {
                "address": prev["addr"],
                "value": _satoshi(prev["value"]),
                "funding_txid": prev.get("tx_hash"),
            }
        )
    outputs = []
    for index, item in enumerate(payload["out"]):
        spending = item.get("spending_outpoints") or []
        outputs.append(
            {
                "index": item.get("n", index),
                "address": item["addr"],
                "value": _satoshi(item["value"]),
                "spent_by_txid": spending[0]["tx_hash"] if spending else None,
            }
        )
    return {
        "txid": payload["hash"],
        "coin": coin.value,
        "timestamp": format_utc(
            datetime.fromtimestamp(int(payload["time"]), tz=timezone.utc)
        ),
        "inputs": inputs,
        "outputs": outputs,
        "fee": _satoshi(payload["fee"]),
    }


def _adapt_dogeblocks(payload: dict, coin: Coin) -> dict:
    """dogeblocks-style payload -> normalized doc (decimal amounts)."""
    return {
        "txid": payload["txid"],
        "coin": coin.value,
        "timestamp": payload["time"],
        "inputs": [
            {
                "address": item["address"],
                "value": format_amount(Decimal(str(item["value"]))),
                "funding_txid": item.get("funding_txid"),
            }
            for item in payload["inputs"]
        ],
        "outputs": [
            {
                "index": item.get("index", position),
                "address": item["address"],
                "value": format_amount(Decimal(str(item["value"]))),
                "spent_by_txid": item.get("spent_by"),
            }
            for position, item in enumerate(payload["outputs"])
        ],
        "fee": format_amount(Decimal(str(payload["fee"]))),
    }


ADAPTERS: dict[str, Callable[[dict, Coin], dict]] = {
    "normalized": _adapt_normalized,
    "blockchain.com": _adapt_blockchain_info,
    "dogeblocks": _adapt_dogeblocks,
}


class RateLimiter:
    """Spaces calls at 1/rate seconds using an injectable clock."""

    def __init__(
        self,
        rate_per_second: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.interval = 1.0 / rate_per_second
        self._clock = clock
        self._sleep = sleep
        self._next_allowed: float | None = None

    def acquire(self) -> None:
        now = self._clock()
        if self._next_allowed is not None and now < self._next_allowed:
            self._sleep(self._next_allowed - now)
            now = self._clock()
        self._next_allowed = max(now, self._next_allowed or now) + self.interval


@dataclass
class HydrationReport:
    graph: TxGraph
    fetched: tuple[str, ...]
    errors: dict[str, str] = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {"fetched": list(self.fetched), "errors": dict(self.errors)}


class ExplorerClient:
    """Fetches and normalizes transactions from one source."""

    def __init__(
        self,
        source: ExplorerSource,
        store: FixtureStore | None = None,
        session=None,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
        now: Callable[[], datetime] = lambda: datetime.now(tz=timezone.utc),
    ):
        self.source = source
        if store is None and source.fixture_dir is not None:
            store = FixtureStore(source.fixture_dir)
        self.store = store
        self._session = session
        self._limiter = RateLimiter(source.rate_limit, clock, sleep)
        self._now = now
        self.provenance: dict[str, Provenance] = {}

    def _record(self, txid: str, origin: str) -> None:
        self.provenance[txid] = Provenance(
            source_name=self.source.name, origin=origin, retrieved_at=self._now()
        )

    def _from_doc(self, doc: dict, txid: str) -> Transaction:
        try:
            tx = Transaction.from_doc(doc)
        except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
            raise SchemaMismatch(f"{self.source.name}: bad record for {txid}: {exc}")
        if tx.txid != txid:
            raise SchemaMismatch(
                f"{self.source.name}: requested {txid} but record is for {tx.txid}"
            )
        return tx

    def fetch_transaction(self, txid: str) -> Transaction:
        txid = TxId.normalize(txid).hex
        if self.store is not None:
            doc = self.store.load(self.source.coin, txid)
            if doc is not None:
                tx = self._from_doc(doc, txid)
                self._record(txid, "fixture")
                return tx
        if self.source.mode is SourceMode.FIXTURE:
            raise NotFound(txid, self.source.name)
        return self._fetch_remote(txid)

    def _fetch_remote(self, txid: str) -> Transaction:
        if self._session is None:
            import requests

            self._session = requests.Session()
        self._limiter.acquire()
        url = self.source.base_url.rstrip("/") + "/" + txid
        headers = {}
        if self.source.api_key_env and os.environ.get(self.source.api_key_env):
            headers["X-API-Key"] = os.environ[self.source.api_key_env]
        response = self._session.get(url, headers=headers, timeout=30)
        if response.status_code == 404:
            raise NotFound(txid, self.source.name)
        if response.status_code == 429:
            retry = response.headers.get("Retry-After")
            raise RateLimited(self.source.name, float(retry) if retry else None)
        if response.status_code != 200:
            raise ExplorerError(
                f"{self.source.name}: HTTP {response.status_code} for {txid}"
            )
        try:
            payload = response.json()
        except ValueError as exc:
            raise SchemaMismatch(f"{self.source.name}: non-JSON response: {exc}")
        adapter = ADAPTERS.get(self.source.adapter)
        if adapter is None:
            raise SchemaMismatch(f"unknown adapter {self.source.adapter!r}")
        try:
            doc = adapter(payload, self.source.coin)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SchemaMismatch(f"{self.source.name}: cannot normalize {txid}: {exc}")
        tx = self._from_doc(doc, txid)
        if self.store is not None:
            self.store.save(self.source.coin, txid, tx.to_doc(), raw=response.content)
        self._record(txid, "remote")
        return tx

    def hydrate(
        self,
        graph: TxGraph,
        seeds: Iterable[str],
        depth: int,
        direction: str = "both",
    ) -> HydrationReport:
        """Breadth-first fetch of funding/spending txs up to ``depth``.

        Per-fetch failures are aggregated, never raised; a failed
        funding fetch simply leaves the link dangling, which traces
        later report as a missing link.
        """
        if depth < 0:
            raise ValueError("depth must be non-negative")
        if direction not in ("backward", "forward", "both"):
            raise ValueError(f"unknown hydrate direction {direction!r}")
        fetched: list[str] = []
        errors: dict[str, str] = {}
        frontier = [TxId.normalize(seed).hex for seed in seeds]
        seen: set[str] = set()
        for _ in range(depth + 1):
            if not frontier:
                break
            next_frontier: list[str] = []
            for txid in frontier:
                if txid in seen:
                    continue
                seen.add(txid)
                existing = graph.get(txid)
                if existing is not None:
                    tx = existing
                else:
                    try:
                        tx = self.fetch_transaction(txid)
                    except ExplorerError as exc:
                        errors[txid] = str(exc)
                        continue
                    graph.add(tx)
                    fetched.append(txid)
                if direction in ("backward", "both"):
                    for entry in tx.inputs:
                        if entry.funding_txid and entry.funding_txid not in seen:
                            next_frontier.append(entry.funding_txid)
                if direction in ("forward", "both"):
                    for entry in tx.outputs:
                        if entry.spent_by_hint and entry.spent_by_hint not in seen:
                            next_frontier.append(entry.spent_by_hint)
            frontier = next_frontier
        return HydrationReport(graph=graph, fetched=tuple(fetched), errors=errors)


def fetch_transaction(source: ExplorerSource, txid: str, **kwargs) -> Transaction:
    return ExplorerClient(source, **kwargs).fetch_transaction(txid)


def fixture_source(
    coin: Coin, fixture_dir: str | Path | None = None, name: str | None = None
) -> ExplorerSource:
    directory = Path(fixture_dir) if fixture_dir is not None else bundled_fixture_dir()
    return ExplorerSource(
        name=name or f"fixtures:{coin.value.lower()}",
        coin=coin,
        mode=SourceMode.FIXTURE,
        fixture_dir=directory,
    )


def load_fixture_graph(
    fixture_dir: str | Path | None = None,
    coins: Sequence[Coin] = (Coin.BTC, Coin.DOGE),
) -> TxGraph:
    """Load every fixture transaction into one graph."""
    graph = TxGraph()
    directory = Path(fixture_dir) if fixture_dir is not None else bundled_fixture_dir()
    store = FixtureStore(directory)
    for coin in coins:
        client = ExplorerClient(fixture_source(coin, directory), store=store)
        for txid in store.txids(coin):
            graph.add(client.fetch_transaction(txid))
    return graph
