"""Merged chronology of chain activity and device artefacts."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from decimal import Decimal
from typing import TYPE_CHECKING, Iterable

from ..coins import format_amount
from ..timestamps import format_utc
from .model import TxGraph

if TYPE_CHECKING:  # pragma: no cover
    from ..scanner.hits import ArtifactHit


def _short(identifier: str) -> str:
    if len(identifier) <= 12:
        return identifier
    return f"{identifier[:4]}…{identifier[-4:]}"


@dataclass(frozen=True)
class TimelineEvent:
    timestamp: datetime
    source_kind: str
    event_id: str
    description: str

    @property
    def sort_key(self) -> tuple:
        return (self.timestamp, self.source_kind, self.event_id)

    def to_doc(self) -> dict:
        return {
            "timestamp": format_utc(self.timestamp),
            "source_kind": self.source_kind,
            "event_id": self.event_id,
            "description": self.description,
        }


def _transaction_events(graph: TxGraph) -> Iterable[TimelineEvent]:
    for tx in graph.transactions():
        moved = sum((out.value for out in tx.outputs), start=Decimal(0))
        yield TimelineEvent(
            timestamp=tx.timestamp,
            source_kind="transaction",
            event_id=tx.txid,
            description=(
                f"{tx.coin.value} transaction {_short(tx.txid)}: "
                f"{len(tx.inputs)} in, {len(tx.outputs)} out, "
                f"{format_amount(moved)} moved"
            ),
        )


def _artifact_events(artifacts: Iterable["ArtifactHit"]) -> Iterable[TimelineEvent]:
    for hit in artifacts:
        if hit.kind.value == "Cookie":
            record = hit.details
            base = f"{hit.source_path}:{record.domain}:{record.name}"
            yield TimelineEvent(
                timestamp=record.creation,
                source_kind="cookie",
                event_id=f"{base}:created",
                description=f"cookie {record.name} created for {record.domain}",
            )
            if record.expiry is not None:
                yield TimelineEvent(
                    timestamp=record.expiry,
                    source_kind="cookie",
                    event_id=f"{base}:expires",
                    description=f"cookie {record.name} expires for {record.domain}",
                )
        elif hit.observed_at is not None:
            yield TimelineEvent(
                timestamp=hit.observed_at,
                source_kind="artifact",
                event_id=f"{hit.source_path}:{hit.kind.value}",
                description=f"{hit.kind.value} observed at {hit.source_path}",
            )


def timeline(
    artifacts: Iterable["ArtifactHit"],
    graph: TxGraph | None = None,
) -> list[TimelineEvent]:
    """Merge artefact and transaction timestamps into one UTC order.

    Ties are broken by (timestamp, source kind, event id) so repeated
    runs agree byte for byte.
    """
    events = list(_artifact_events(artifacts))
    if graph is not None:
        events.extend(_transaction_events(graph))
    return sorted(events, key=lambda e: e.sort_key)
