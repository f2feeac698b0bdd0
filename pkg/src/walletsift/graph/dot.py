"""Graphviz DOT export of the transaction flow.

Transactions render as boxes, addresses as ellipses.  Output edges
identified as change are dashed; addresses carrying an entity label are
filled and annotated.  Emission order is fully sorted so the same graph
always serializes to the same bytes.
"""

from __future__ import annotations

from ..coins import format_amount
from ..timestamps import format_utc
from .model import TxGraph
from .trace import LabelSet, identify_change


def _short(identifier: str) -> str:
    if len(identifier) <= 12:
        return identifier
    return f"{identifier[:4]}…{identifier[-4:]}"


def _quote(value: str) -> str:
    # Deliberately leaves backslashes alone: DOT escape sequences such
    # as \n in labels must pass through.
    return '"' + value.replace('"', '\\"') + '"'


def to_dot(graph: TxGraph, labels: LabelSet | None = None) -> str:
    labels = labels or LabelSet()
    lines = [
        "digraph flow {",
        "  rankdir=LR;",
        "  node [fontsize=10];",
    ]
    newline = "\\n"
    addresses = sorted(graph.addresses())
    for address in addresses:
        label = labels.get(address)
        text = _short(address)
        attrs = ["shape=ellipse", f"label={_quote(text)}"]
        if label is not None:
            attrs = [
                "shape=ellipse",
                f"label={_quote(text + newline + label.entity)}",
                "style=filled",
                "fillcolor=lightgoldenrod",
            ]
        lines.append(f"  {_quote('addr:' + address)} [{', '.join(attrs)}];")
    for tx in graph.transactions():
        text = f"{_short(tx.txid)}{newline}{tx.coin.value} {format_utc(tx.timestamp)}"
        lines.append(
            f"  {_quote('tx:' + tx.txid)} [shape=box, label={_quote(text)}];"
        )
    for tx in graph.transactions():
        change_index = None
        if tx.inputs:
            change_index = identify_change(tx, tx.input_addresses).index
        for inp in tx.inputs:
            lines.append(
                f"  {_quote('addr:' + inp.address)} -> {_quote('tx:' + tx.txid)}"
                f" [label={_quote(format_amount(inp.value))}];"
            )
        for out in tx.outputs:
            style = ", style=dashed" if out.index == change_index else ""
            lines.append(
                f"  {_quote('tx:' + tx.txid)} -> {_quote('addr:' + out.address)}"
                f" [label={_quote(format_amount(out.value))}{style}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
