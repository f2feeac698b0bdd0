"""Common-input address clustering.

Addresses spent together in one transaction are assumed to share a
controlling wallet; the relation's transitive closure partitions every
address seen by the graph.  Cluster ids are content-derived so that two
runs over the same graph, in any insertion order, agree.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

from .model import TxGraph


class FormationRule(str, Enum):
    COMMON_INPUT = "CommonInput"
    MANUAL = "Manual"


@dataclass(frozen=True)
class Cluster:
    cluster_id: str
    members: frozenset[str]
    formation_rule: FormationRule

    @staticmethod
    def derive_id(members: frozenset[str]) -> str:
        digest = hashlib.sha256("\n".join(sorted(members)).encode()).hexdigest()
        return f"cluster:{digest[:16]}"

    @classmethod
    def of(cls, members: frozenset[str], rule: FormationRule) -> "Cluster":
        return cls(cluster_id=cls.derive_id(members), members=members, formation_rule=rule)


class _UnionFind:
    def __init__(self) -> None:
        self._parent: dict[str, str] = {}

    def find(self, item: str) -> str:
        parent = self._parent.setdefault(item, item)
        if parent != item:
            parent = self.find(parent)
            self._parent[item] = parent
        return parent

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Deterministic: smaller string becomes the root.
            if rb < ra:
                ra, rb = rb, ra
            self._parent[rb] = ra


def cluster_common_input(graph: TxGraph) -> frozenset[Cluster]:
    """Partition every graph address; co-spent inputs are merged."""
    forest = _UnionFind()
    for address in graph.addresses():
        forest.find(address)
    for tx in graph.transactions():
        addresses = sorted(tx.input_addresses)
        for other in addresses[1:]:
            forest.union(addresses[0], other)
    by_root: dict[str, set[str]] = {}
    for address in graph.addresses():
        by_root.setdefault(forest.find(address), set()).add(address)
    return frozenset(
        Cluster.of(frozenset(members), FormationRule.COMMON_INPUT)
        for members in by_root.values()
    )


def cluster_membership(clusters: frozenset[Cluster]) -> dict[str, Cluster]:
    """Address → owning cluster lookup; clusters must not overlap."""
    lookup: dict[str, Cluster] = {}
    for cluster in clusters:
        for address in cluster.members:
            if address in lookup:
                raise ValueError(f"address {address} appears in two clusters")
            lookup[address] = cluster
    return lookup
