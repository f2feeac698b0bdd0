"""Breadth-first flow tracing with entity attribution.

Two modes are supported.  WalletToWallet follows every spend edge.
UTXO follows the same funding edges backward but, going forward, only
continues through the output identified as the sender's change, since
that is the portion still controlled by the same wallet.

Attribution is decided level by level: the entity (or entities, on an
equal-depth tie) found at the shallowest labeled hop is returned.  The
frontier itself is explored to the depth limit regardless, so the
visited list reflects reachability, not where labels happened to sit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from ..codec import TxId
from .cluster import Cluster, cluster_common_input, cluster_membership
from .model import Transaction, TxGraph


class Direction(str, Enum):
    BACKWARD = "Backward"
    FORWARD = "Forward"


class TraceMode(str, Enum):
    WALLET_TO_WALLET = "WalletToWallet"
    UTXO = "UTXO"


class HopRole(str, Enum):
    FUNDING = "Funding"
    CHANGE = "Change"
    PAYMENT = "Payment"


class UnattributedReason(str, Enum):
    DEPTH_EXHAUSTED = "DepthExhausted"
    NO_LABELS = "NoLabelsOnComponent"
    MISSING_LINK = "MissingLink"


class ChangeReason(str, Enum):
    NO_CANDIDATE = "NoCandidate"
    AMBIGUOUS = "Ambiguous"


@dataclass(frozen=True)
class Label:
    entity: str
    source: str = "manual"

    def __post_init__(self) -> None:
        if not self.entity:
            raise ValueError("label entity must be non-empty")


class LabelSet:
    """Maps addresses or cluster ids to attributed entities."""

    def __init__(self, entries: Mapping[str, Label | Mapping[str, str] | str] | None = None):
        self._entries: dict[str, Label] = {}
        for key, value in (entries or {}).items():
            self.set(key, value)

    @classmethod
    def from_file(cls, path: str | Path) -> "LabelSet":
        return cls(json.loads(Path(path).read_text("utf-8")))

    def set(self, key: str, value: Label | Mapping[str, str] | str) -> None:
        if isinstance(value, str):
            label = Label(entity=value)
        elif isinstance(value, Label):
            label = value
        else:
            label = Label(entity=value["entity"], source=value.get("source", "manual"))
        self._entries[key] = label

    def remove(self, key: str) -> None:
        self._entries.pop(key, None)

    def get(self, key: str) -> Label | None:
        return self._entries.get(key)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._entries))

    def items(self) -> list[tuple[str, Label]]:
        return sorted(self._entries.items())

    def to_doc(self) -> dict:
        return {
            key: {"entity": label.entity, "source": label.source}
            for key, label in self.items()
        }


@dataclass(frozen=True)
class ChangeCall:
    index: int | None
    reason: ChangeReason | None = None


def identify_change(
    tx: Transaction,
    sender_addresses: set[str],
    clusters: Iterable[Cluster] | None = None,
) -> ChangeCall:
    """Pick the unique output returning value to the sender's wallet.

    The wallet is approximated by the given sender addresses, the
    transaction's own co-spent inputs, and any supplied clusters that
    contain an input address.
    """
    if not sender_addresses:
        raise ValueError("sender_addresses must be non-empty")
    wallet = set(sender_addresses) | tx.input_addresses
    for cluster in clusters or ():
        if cluster.members & tx.input_addresses:
            wallet |= cluster.members
    candidates = [out.index for out in tx.outputs if out.address in wallet]
    if not candidates:
        return ChangeCall(None, ChangeReason.NO_CANDIDATE)
    if len(candidates) > 1:
        return ChangeCall(None, ChangeReason.AMBIGUOUS)
    return ChangeCall(candidates[0])


@dataclass(frozen=True)
class Hop:
    txid: str
    role: HopRole
    via_input_index: int | None = None
    via_output_index: int | None = None

    def to_doc(self) -> dict:
        doc: dict = {"txid": self.txid, "role": self.role.value}
        if self.via_input_index is not None:
            doc["via_input_index"] = self.via_input_index
        if self.via_output_index is not None:
            doc["via_output_index"] = self.via_output_index
        return doc


@dataclass(frozen=True)
class AddressMatch:
    address: str
    entity: str
    matched_key: str


@dataclass(frozen=True)
class Terminal:
    entities: tuple[str, ...] = ()
    matches: tuple[AddressMatch, ...] = ()
    reason: UnattributedReason | None = None

    @property
    def attributed(self) -> bool:
        return bool(self.entities)

    @property
    def entity(self) -> str | None:
        return self.entities[0] if self.entities else None

    def to_doc(self) -> dict:
        if self.attributed:
            return {
                "attributed": True,
                "entities": list(self.entities),
                "matches": [
                    {"address": m.address, "entity": m.entity, "matched_key": m.matched_key}
                    for m in self.matches
                ],
            }
        return {"attributed": False, "reason": self.reason.value if self.reason else None}


@dataclass(frozen=True)
class AttributionResult:
    seed: str
    direction: Direction
    mode: TraceMode
    max_depth: int
    hops: tuple[Hop, ...]
    terminal: Terminal
    visited: tuple[str, ...] = field(default_factory=tuple)

    @property
    def depth(self) -> int:
        return len(self.hops)

    def to_doc(self) -> dict:
        return {
            "seed": self.seed,
            "direction": self.direction.value,
            "mode": self.mode.value,
            "max_depth": self.max_depth,
            "depth": self.depth,
            "hops": [hop.to_doc() for hop in self.hops],
            "terminal": self.terminal.to_doc(),
            "visited": list(self.visited),
        }


def _counterparts(tx: Transaction, direction: Direction) -> list[str]:
    if direction is Direction.BACKWARD:
        raw = [i.address for i in tx.inputs]
    else:
        raw = [o.address for o in tx.outputs]
    seen: set[str] = set()
    ordered = []
    for address in raw:
        if address not in seen:
            seen.add(address)
            ordered.append(address)
    return ordered


def _lookup(labels: LabelSet, address: str, membership: Mapping[str, Cluster]) -> AddressMatch | None:
    direct = labels.get(address)
    if direct is not None:
        return AddressMatch(address, direct.entity, address)
    cluster = membership.get(address)
    if cluster is not None:
        via_cluster = labels.get(cluster.cluster_id)
        if via_cluster is not None:
            return AddressMatch(address, via_cluster.entity, cluster.cluster_id)
    return None


def _edges(
    graph: TxGraph,
    tx: Transaction,
    direction: Direction,
    mode: TraceMode,
    clusters: frozenset[Cluster],
) -> tuple[list[tuple[str, Hop]], bool]:
    """Outgoing trace edges of one transaction.

    Returns (edges, crossed_missing_link).  An edge references a
    transaction present in the graph; references pointing outside it
    raise the missing-link flag instead.
    """
    edges: list[tuple[str, Hop]] = []
    missing = False
    if direction is Direction.BACKWARD:
        for position, inp in enumerate(tx.inputs):
            if inp.funding_txid is None:
                continue
            if inp.funding_txid in graph:
                hop = Hop(inp.funding_txid, HopRole.FUNDING, via_input_index=position)
                edges.append((inp.funding_txid, hop))
            else:
                missing = True
        return edges, missing
    change_index: int | None = None
    if tx.inputs:
        change_index = identify_change(tx, tx.input_addresses, clusters).index
    for out in tx.outputs:
        if mode is TraceMode.UTXO and out.index != change_index:
            continue
        role = HopRole.CHANGE if out.index == change_index else HopRole.PAYMENT
        spenders = sorted(graph.spenders_of(tx.txid, out.address))
        for spender in spenders:
            edges.append((spender, Hop(spender, role, via_output_index=out.index)))
        if not spenders and out.spent_by_hint is not None and out.spent_by_hint not in graph:
            missing = True
    return edges, missing


def trace(
    graph: TxGraph,
    seed: str | TxId,
    direction: Direction,
    mode: TraceMode = TraceMode.WALLET_TO_WALLET,
    labels: LabelSet | None = None,
    max_depth: int = 8,
) -> AttributionResult:
    """Attribute the flow seeded at one transaction to a labeled entity."""
    seed_hex = seed.hex if isinstance(seed, TxId) else TxId.normalize(seed).hex
    graph.require(seed_hex)
    labels = labels or LabelSet()
    clusters = cluster_common_input(graph)
    membership = cluster_membership(clusters)

    visited: list[str] = []
    enqueued = {seed_hex}
    level: list[tuple[str, tuple[Hop, ...]]] = [(seed_hex, ())]
    deepest_path: tuple[Hop, ...] = ()
    attribution: tuple[tuple[Hop, ...], list[AddressMatch]] | None = None
    crossed_missing = False
    truncated = False

    while level:
        level_matches: list[AddressMatch] = []
        first_matched_path: tuple[Hop, ...] | None = None
        for txid, path in level:
            visited.append(txid)
            if len(path) > len(deepest_path):
                deepest_path = path
            tx = graph.require(txid)
            if attribution is None:
                for address in _counterparts(tx, direction):
                    match = _lookup(labels, address, membership)
                    if match is not None:
                        level_matches.append(match)
                        if first_matched_path is None:
                            first_matched_path = path
        if attribution is None and level_matches:
            attribution = (first_matched_path or (), level_matches)
        next_level: list[tuple[str, tuple[Hop, ...]]] = []
        for txid, path in level:
            tx = graph.require(txid)
            edges, missing = _edges(graph, tx, direction, mode, clusters)
            crossed_missing = crossed_missing or missing
            if edges and len(path) >= max_depth:
                truncated = True
                continue
            for next_txid, hop in edges:
                if next_txid in enqueued:
                    continue
                enqueued.add(next_txid)
                next_level.append((next_txid, path + (hop,)))
        level = next_level

    if attribution is not None:
        path, matches = attribution
        unique: dict[tuple[str, str, str], AddressMatch] = {}
        for match in matches:
            unique.setdefault((match.address, match.entity, match.matched_key), match)
        terminal = Terminal(
            entities=tuple(sorted({m.entity for m in matches})),
            matches=tuple(unique.values()),
        )
        return AttributionResult(
            seed=seed_hex, direction=direction, mode=mode, max_depth=max_depth,
            hops=path, terminal=terminal, visited=tuple(visited),
        )
    if truncated:
        reason = UnattributedReason.DEPTH_EXHAUSTED
    elif crossed_missing:
        reason = UnattributedReason.MISSING_LINK
    else:
        reason = UnattributedReason.NO_LABELS
    return AttributionResult(
        seed=seed_hex, direction=direction, mode=mode, max_depth=max_depth,
        hops=deepest_path, terminal=Terminal(reason=reason), visited=tuple(visited),
    )
