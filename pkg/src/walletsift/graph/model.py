"""Transaction records and the spend graph connecting them.

Addresses are carried as opaque strings here; validating them is the
codec's job.  Values are exact decimals: a transaction that does not
balance to the last place is refused outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from decimal import Decimal
from typing import Iterable, Iterator, NamedTuple

from ..codec import TxId
from ..coins import Coin, format_amount, parse_amount
from ..timestamps import format_utc, parse_utc


class GraphError(Exception):
    """Base class for transaction graph failures."""


class ConservationViolation(GraphError):
    """Input, output, and fee values do not balance."""


class ConflictingTxId(GraphError):
    """A txid was re-added with different content."""


class FundingMismatch(GraphError):
    """An input names a funding transaction that pays no such address."""


class SeedNotFound(GraphError):
    """Trace seed txid is not present in the graph."""


@dataclass(frozen=True)
class TxInput:
    address: str
    value: Decimal
    funding_txid: str | None = None


@dataclass(frozen=True)
class TxOutput:
    index: int
    address: str
    value: Decimal
    # Advisory only: explorer data sometimes reports the spending txid.
    # The graph derives spends from funding links, not from this.
    spent_by_hint: str | None = None


@dataclass(frozen=True)
class Transaction:
    txid: str
    coin: Coin
    timestamp: datetime
    inputs: tuple[TxInput, ...]
    outputs: tuple[TxOutput, ...]
    fee: Decimal

    def __post_init__(self) -> None:
        object.__setattr__(self, "txid", TxId.normalize(self.txid).hex)
        if self.timestamp.tzinfo is None:
            raise ValueError("transaction timestamp must be timezone-aware")
        if [out.index for out in self.outputs] != list(range(len(self.outputs))):
            raise ValueError("output indices must be 0..n-1 without gaps")
        if self.fee < 0:
            raise ConservationViolation(f"{self.txid}: negative fee {self.fee}")
        total_in = sum((i.value for i in self.inputs), Decimal(0))
        total_out = sum((o.value for o in self.outputs), Decimal(0))
        if total_in != total_out + self.fee:
            raise ConservationViolation(
                f"{self.txid}: inputs {format_amount(total_in)} != outputs "
                f"{format_amount(total_out)} + fee {format_amount(self.fee)}"
            )

    @property
    def input_addresses(self) -> set[str]:
        return {i.address for i in self.inputs}

    @property
    def output_addresses(self) -> set[str]:
        return {o.address for o in self.outputs}

    @classmethod
    def from_doc(cls, doc: dict) -> "Transaction":
        """Build from the normalized explorer/fixture document."""
        return cls(
            txid=doc["txid"],
            coin=Coin(doc["coin"]),
            timestamp=parse_utc(doc["timestamp"]),
            inputs=tuple(
                TxInput(
                    address=item["address"],
                    value=parse_amount(item["value"]),
                    funding_txid=item.get("funding_txid"),
                )
                for item in doc["inputs"]
            ),
            outputs=tuple(
                TxOutput(
                    index=item["index"],
                    address=item["address"],
                    value=parse_amount(item["value"]),
                    spent_by_hint=item.get("spent_by_txid"),
                )
                for item in doc["outputs"]
            ),
            fee=parse_amount(doc["fee"]),
        )

    def to_doc(self) -> dict:
        return {
            "txid": self.txid,
            "coin": self.coin.value,
            "timestamp": format_utc(self.timestamp),
            "inputs": [
                {
                    "address": i.address,
                    "value": format_amount(i.value),
                    "funding_txid": i.funding_txid,
                }
                for i in self.inputs
            ],
            "outputs": [
                {
                    "index": o.index,
                    "address": o.address,
                    "value": format_amount(o.value),
                    "spent_by_txid": o.spent_by_hint,
                }
                for o in self.outputs
            ],
            "fee": format_amount(self.fee),
        }


class UtxoEntry(NamedTuple):
    txid: str
    output_index: int
    address: str
    value: Decimal


@dataclass
class TxGraph:
    """Mutable while building, then treated as an immutable snapshot."""

    _txs: dict[str, Transaction] = field(default_factory=dict)
    _receiving: dict[str, set[str]] = field(default_factory=dict)
    _spending: dict[str, set[str]] = field(default_factory=dict)

    def __contains__(self, txid: str) -> bool:
        return txid in self._txs

    def __len__(self) -> int:
        return len(self._txs)

    def get(self, txid: str) -> Transaction | None:
        return self._txs.get(txid)

    def require(self, txid: str) -> Transaction:
        tx = self._txs.get(txid)
        if tx is None:
            raise SeedNotFound(txid)
        return tx

    def transactions(self) -> Iterator[Transaction]:
        """Stable iteration order: (timestamp, txid)."""
        return iter(sorted(self._txs.values(), key=lambda t: (t.timestamp, t.txid)))

    @property
    def coins(self) -> set[Coin]:
        return {tx.coin for tx in self._txs.values()}

    @property
    def coin(self) -> Coin | None:
        coins = self.coins
        return next(iter(coins)) if len(coins) == 1 else None

    def addresses(self) -> set[str]:
        return set(self._receiving) | set(self._spending)

    def receiving_txids(self, address: str) -> set[str]:
        return set(self._receiving.get(address, ()))

    def spending_txids(self, address: str) -> set[str]:
        return set(self._spending.get(address, ()))

    def add(self, tx: Transaction) -> None:
        existing = self._txs.get(tx.txid)
        if existing is not None:
            if existing == tx:
                return
            raise ConflictingTxId(f"{tx.txid} re-added with different content")
        self._check_funding_links(tx)
        self._txs[tx.txid] = tx
        for inp in tx.inputs:
            self._spending.setdefault(inp.address, set()).add(tx.txid)
        for out in tx.outputs:
            self._receiving.setdefault(out.address, set()).add(tx.txid)

    def add_all(self, txs: Iterable[Transaction]) -> None:
        for tx in txs:
            self.add(tx)

    def _check_funding_links(self, tx: Transaction) -> None:
        # Links are validated in both directions because transactions
        # arrive in arbitrary order.
        for inp in tx.inputs:
            funding = self._txs.get(inp.funding_txid) if inp.funding_txid else None
            if funding is not None and inp.address not in funding.output_addresses:
                raise FundingMismatch(
                    f"{tx.txid} input claims funding from {inp.funding_txid}, "
                    f"which pays no output to {inp.address}"
                )
        for other in self._txs.values():
            for inp in other.inputs:
                if inp.funding_txid == tx.txid and inp.address not in tx.output_addresses:
                    raise FundingMismatch(
                        f"{other.txid} input claims funding from {tx.txid}, "
                        f"which pays no output to {inp.address}"
                    )

    def spenders_of(self, txid: str, address: str) -> set[str]:
        """Txids whose inputs consume outputs of ``txid`` paying ``address``."""
        return {
            spender
            for spender in self._spending.get(address, ())
            if any(
                i.funding_txid == txid and i.address == address
                for i in self._txs[spender].inputs
            )
        }

    def utxo_set(self) -> frozenset[UtxoEntry]:
        """Outputs never referenced as any input's funding source.

        Consumption is resolved at (funding txid, address) granularity,
        matching the input schema, which carries no output index.
        """
        consumed: set[tuple[str, str]] = set()
        for tx in self._txs.values():
            for inp in tx.inputs:
                if inp.funding_txid is not None:
                    consumed.add((inp.funding_txid, inp.address))
        return frozenset(
            UtxoEntry(tx.txid, out.index, out.address, out.value)
            for tx in self._txs.values()
            for out in tx.outputs
            if (tx.txid, out.address) not in consumed
        )
