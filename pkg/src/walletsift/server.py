"""HTTP JSON API over an analyzed case.

Serves the browser UI: case summary, artefact listings, transaction
records, traces, label management, and the merged timeline.  The case
snapshot is immutable; only labels can be changed, behind a lock.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .case import ExtractionImage
from .graph import (
    Direction,
    LabelSet,
    SeedNotFound,
    TraceMode,
    TxGraph,
    timeline,
    to_dot,
    trace,
)
from .scanner import ArtifactKind, ScanResult


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


@dataclass
class CaseState:
    case_id: str
    images: list[ExtractionImage] = field(default_factory=list)
    scan_results: list[ScanResult] = field(default_factory=list)
    graph: TxGraph = field(default_factory=TxGraph)
    labels: LabelSet = field(default_factory=LabelSet)
    label_lock: threading.Lock = field(default_factory=threading.Lock)

    def all_hits(self):
        for result in self.scan_results:
            yield from result.hits


def _case_doc(state: CaseState) -> dict:
    counts: dict[str, int] = {}
    for hit in state.all_hits():
        counts[hit.kind.value] = counts.get(hit.kind.value, 0) + 1
    return {
        "case_id": state.case_id,
        "images": [
            {
                "id": image.id,
                "kind": image.kind.value,
                "root_label": image.root_label,
                "file_count": len(image),
            }
            for image in state.images
        ],
        "artifact_counts": dict(sorted(counts.items())),
        "transaction_count": len(state.graph),
        "coins": sorted(coin.value for coin in state.graph.coins),
    }


def _artifacts_doc(state: CaseState, query: dict) -> dict:
    kinds = query.get("kind")
    wanted = None
    if kinds:
        try:
            wanted = {ArtifactKind(kind) for kind in kinds}
        except ValueError:
            raise ApiError(400, f"unknown artifact kind {kinds!r}")
    hits = [
        hit.to_doc()
        for hit in state.all_hits()
        if wanted is None or hit.kind in wanted
    ]
    return {"artifacts": hits}


def _tx_doc(state: CaseState, txid: str) -> dict:
    tx = state.graph.get(txid.lower())
    if tx is None:
        raise ApiError(404, f"transaction {txid} not in graph")
    return {"transaction": tx.to_doc()}


def _address_labels(state: CaseState) -> dict:
    return state.labels.to_doc()


def _trace_doc(state: CaseState, body: dict) -> dict:
    try:
        seed = body["seed"]
    except KeyError:
        raise ApiError(400, "trace request needs a seed txid")
    try:
        direction = Direction(body.get("direction", "Backward"))
    except ValueError:
        raise ApiError(400, f"unknown direction {body.get('direction')!r}")
    try:
        mode = TraceMode(body.get("mode", "WalletToWallet"))
    except ValueError:
        raise ApiError(400, f"unknown mode {body.get('mode')!r}")
    depth = body.get("depth", 8)
    if not isinstance(depth, int) or depth < 0:
        raise ApiError(400, "depth must be a non-negative integer")
    with state.label_lock:
        labels = LabelSet(state.labels.to_doc())
    try:
        result = trace(
            state.graph,
            str(seed).lower(),
            direction,
            mode=mode,
            labels=labels,
            max_depth=depth,
        )
    except (SeedNotFound, ValueError) as exc:
        raise ApiError(404, str(exc))
    transactions = {
        txid: state.graph.require(txid).to_doc() for txid in result.visited
    }
    return {
        "result": result.to_doc(),
        "transactions": transactions,
        "labels": labels.to_doc(),
    }


def _timeline_doc(state: CaseState) -> dict:
    events = timeline(list(state.all_hits()), graph=state.graph)
    return {"events": [event.to_doc() for event in events]}


def _graph_doc(state: CaseState) -> dict:
    return {
        "transactions": [tx.to_doc() for tx in state.graph.transactions()],
        "labels": state.labels.to_doc(),
    }


def _put_labels(state: CaseState, body) -> dict:
    if not isinstance(body, dict):
        raise ApiError(400, "labels payload must be an object")
    try:
        replacement = LabelSet(body)
    except (TypeError, ValueError) as exc:
        raise ApiError(400, f"bad labels payload: {exc}")
    with state.label_lock:
        state.labels = replacement
    return {"ok": True, "count": len(body)}


class _Handler(BaseHTTPRequestHandler):
    state: CaseState  # set by make_server

    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):
        pass

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, doc, status: int = 200) -> None:
        self._send(
            status,
            json.dumps(doc, indent=2).encode() + b"\n",
            "application/json; charset=utf-8",
        )

    def _body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"request body is not JSON: {exc}")

    def _route(self, method: str) -> None:
        parsed = urlparse(self.path)
        segments = [part for part in parsed.path.split("/") if part]
        query = parse_qs(parsed.query)
        state = self.state
        try:
            if segments[:1] != ["api"]:
                raise ApiError(404, f"no such endpoint: {parsed.path}")
            tail = segments[1:]
            if method == "GET" and tail == ["case"]:
                return self._send_json(_case_doc(state))
            if method == "GET" and tail == ["artifacts"]:
                return self._send_json(_artifacts_doc(state, query))
            if method == "GET" and len(tail) == 2 and tail[0] == "tx":
                return self._send_json(_tx_doc(state, tail[1]))
            if method == "POST" and tail == ["trace"]:
                return self._send_json(_trace_doc(state, self._body()))
            if method == "GET" and tail == ["graph"]:
                wanted = query.get("format", ["json"])[0]
                if wanted == "dot":
                    return self._send(
                        200,
                        to_dot(state.graph, state.labels).encode(),
                        "text/vnd.graphviz; charset=utf-8",
                    )
                if wanted != "json":
                    raise ApiError(400, f"unknown graph format {wanted!r}")
                return self._send_json(_graph_doc(state))
            if method == "GET" and tail == ["labels"]:
                return self._send_json(_address_labels(state))
            if method == "PUT" and tail == ["labels"]:
                return self._send_json(_put_labels(state, self._body()))
            if method == "GET" and tail == ["timeline"]:
                return self._send_json(_timeline_doc(state))
            raise ApiError(404, f"no such endpoint: {method} {parsed.path}")
        except ApiError as exc:
            self._send_json({"error": str(exc)}, status=exc.status)

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")

    def do_PUT(self):
        self._route("PUT")

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")


def make_server(state: CaseState, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(state: CaseState, host: str = "127.0.0.1", port: int = 8764) -> None:
    server = make_server(state, host, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()
