"""Command-line interface.

Exit codes: 0 success, 1 fatal error, 2 success with warnings,
64 usage error (bad flags, missing input files).
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .case import Case, ExtractionKind, IngestError, ingest_archive, ingest_directory
from .coins import Coin
from .explorer import (
    ExplorerClient,
    ExplorerError,
    FixtureStore,
    bundled_fixture_dir,
    fixture_source,
    load_fixture_graph,
)
from .graph import Direction, LabelSet, TraceMode, timeline, to_dot, trace
from .graph.model import GraphError, TxGraph
from .report import Report, scan_report, timeline_report, trace_report
from .scanner import ArtifactKind, load_signatures, scan
from .timestamps import parse_utc

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_WARNINGS = 2
EXIT_USAGE = 64

FIXTURE_DIR_ENV = "WALLETSIFT_FIXTURES"

_DIRECTIONS = {"backward": Direction.BACKWARD, "forward": Direction.FORWARD}
_MODES = {
    "wallet-to-wallet": TraceMode.WALLET_TO_WALLET,
    "utxo": TraceMode.UTXO,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse uses exit code 2; keep 2 for warnings
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="walletsift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", type=Path, help="write the report to this file")
        p.add_argument(
            "--format",
            choices=("json", "markdown"),
            default="json",
            help="report format (default json)",
        )
        p.add_argument(
            "--pinned-timestamp",
            metavar="ISO8601",
            help="fix the report generation timestamp for reproducible output",
        )

    scan_p = sub.add_parser("scan", help="ingest an extraction and scan for artefacts")
    scan_p.add_argument("extraction", type=Path, help="extraction directory or zip")
    scan_p.add_argument(
        "--kind",
        choices=[kind.value for kind in ExtractionKind],
        default=ExtractionKind.FILE_SYSTEM.value,
    )
    scan_p.add_argument("--signatures", type=Path, help="custom app signature file")
    scan_p.add_argument("--case-id", default="case")
    add_common(scan_p)

    trace_p = sub.add_parser("trace", help="trace a transaction to labeled entities")
    trace_p.add_argument("--seed", required=True, metavar="TXID")
    trace_p.add_argument(
        "--direction", choices=sorted(_DIRECTIONS), default="backward"
    )
    trace_p.add_argument(
        "--mode", choices=sorted(_MODES), default="wallet-to-wallet"
    )
    trace_p.add_argument("--labels", type=Path, help="labels JSON file")
    trace_p.add_argument("--depth", type=int, default=8)
    trace_p.add_argument(
        "--fixtures",
        type=Path,
        help=f"fixture store directory (default ${FIXTURE_DIR_ENV} or bundled)",
    )
    trace_p.add_argument("--dot", type=Path, help="also write a DOT graph here")
    add_common(trace_p)

    timeline_p = sub.add_parser(
        "timeline", help="merged chronological view of artefacts and transactions"
    )
    timeline_p.add_argument(
        "extraction", nargs="?", type=Path, help="extraction directory or zip"
    )
    timeline_p.add_argument(
        "--kind",
        choices=[kind.value for kind in ExtractionKind],
        default=ExtractionKind.FILE_SYSTEM.value,
    )
    timeline_p.add_argument("--signatures", type=Path)
    timeline_p.add_argument("--fixtures", type=Path)
    timeline_p.add_argument(
        "--no-chain",
        action="store_true",
        help="exclude fixture transactions from the timeline",
    )
    timeline_p.add_argument("--case-id", default="case")
    add_common(timeline_p)

    serve_p = sub.add_parser("serve", help="serve the HTTP API for the browser UI")
    serve_p.add_argument("--case", dest="extraction", type=Path, metavar="EXTRACTION")
    serve_p.add_argument(
        "--kind",
        choices=[kind.value for kind in ExtractionKind],
        default=ExtractionKind.FILE_SYSTEM.value,
    )
    serve_p.add_argument("--fixtures", type=Path)
    serve_p.add_argument("--labels", type=Path)
    serve_p.add_argument("--port", type=int, default=8764)
    serve_p.add_argument("--bind", default="127.0.0.1")
    serve_p.add_argument("--case-id", default="case")
    return parser


def _pinned(args) -> datetime | None:
    if args.pinned_timestamp is None:
        return None
    try:
        return parse_utc(args.pinned_timestamp)
    except ValueError as exc:
        raise UsageError(f"--pinned-timestamp: {exc}")


def _fixture_dir(args) -> Path:
    if getattr(args, "fixtures", None) is not None:
        path = Path(args.fixtures)
    elif os.environ.get(FIXTURE_DIR_ENV):
        path = Path(os.environ[FIXTURE_DIR_ENV])
    else:
        return bundled_fixture_dir()
    if not path.is_dir():
        raise UsageError(f"fixture directory {path} does not exist")
    return path


def _ingest(path: Path, kind_name: str):
    kind = ExtractionKind(kind_name)
    if path.is_dir():
        return ingest_directory(path, kind)
    if path.is_file() and path.suffix.lower() == ".zip":
        return ingest_archive(path, kind)
    raise UsageError(f"extraction {path} is neither a directory nor a zip archive")


def _emit(report: Report, args, stream) -> None:
    text = report.to_json() if args.format == "json" else report.to_markdown()
    if args.out is not None:
        args.out.write_text(text, "utf-8")
    else:
        stream.write(text)


def _load_labels(path: Path | None) -> LabelSet:
    if path is None:
        return LabelSet()
    if not path.is_file():
        raise UsageError(f"labels file {path} does not exist")
    return LabelSet.from_file(path)


def _email_corpus(image, result):
    corpus = []
    for path in sorted(
        {h.source_path for h in result.by_kind(ArtifactKind.EMAIL_SUBJECT)}
    ):
        text = image.read_bytes(path).decode("utf-8", errors="replace")
        corpus.append(({"image_id": image.id, "path": path}, text))
    return corpus


def cmd_scan(args, stream) -> int:
    pinned = _pinned(args)
    signatures = load_signatures(args.signatures)
    image = _ingest(args.extraction, args.kind)
    case = Case(
        case_id=args.case_id,
        created_at=pinned or datetime.now(tz=timezone.utc),
    )
    case.add_image(image)
    result = scan(image, signatures)
    report = scan_report(
        case,
        [result],
        generated_at=pinned,
        extra_corpus=_email_corpus(image, result),
    )
    _emit(report, args, stream)
    return EXIT_WARNINGS if report.warnings else EXIT_OK


def _hydrated_graph(
    seed: str, depth: int, fixture_dir: Path, pinned=None
) -> tuple[TxGraph, list[dict]]:
    store = FixtureStore(fixture_dir)
    graph = TxGraph()
    provenance: list[dict] = []
    extra = {}
    if pinned is not None:
        extra["now"] = lambda: pinned
    for coin in Coin:
        if store.load(coin, seed.lower()) is None:
            continue
        client = ExplorerClient(fixture_source(coin, fixture_dir), store=store, **extra)
        client.hydrate(graph, [seed], depth=depth, direction="both")
        provenance = [
            {"txid": txid, **record.to_doc()}
            for txid, record in sorted(client.provenance.items())
        ]
        return graph, provenance
    raise ExplorerError(f"seed {seed} not found in fixture store {fixture_dir}")


def cmd_trace(args, stream) -> int:
    pinned = _pinned(args)
    labels = _load_labels(args.labels)
    if args.depth < 0:
        raise UsageError("--depth must be non-negative")
    fixture_dir = _fixture_dir(args)
    graph, provenance = _hydrated_graph(args.seed, args.depth, fixture_dir, pinned)
    result = trace(
        graph,
        args.seed.lower(),
        _DIRECTIONS[args.direction],
        mode=_MODES[args.mode],
        labels=labels,
        max_depth=args.depth,
    )
    if args.dot is not None:
        args.dot.write_text(to_dot(graph, labels), "utf-8")
    report = trace_report([result], provenance=provenance, generated_at=pinned)
    _emit(report, args, stream)
    return EXIT_OK


def cmd_timeline(args, stream) -> int:
    pinned = _pinned(args)
    artifacts = []
    case = None
    if args.extraction is not None:
        signatures = load_signatures(args.signatures)
        image = _ingest(args.extraction, args.kind)
        case = Case(
            case_id=args.case_id,
            created_at=pinned or datetime.now(tz=timezone.utc),
        )
        case.add_image(image)
        artifacts = list(scan(image, signatures).hits)
    graph = None
    if not args.no_chain:
        graph = load_fixture_graph(_fixture_dir(args))
    events = timeline(artifacts, graph=graph)
    report = timeline_report(events, case=case, generated_at=pinned)
    _emit(report, args, stream)
    return EXIT_OK


def cmd_serve(args, stream) -> int:
    from .server import CaseState, serve_forever

    signatures = load_signatures()
    images = []
    results = []
    if args.extraction is not None:
        image = _ingest(args.extraction, args.kind)
        images.append(image)
        results.append(scan(image, signatures))
    state = CaseState(
        case_id=args.case_id,
        images=images,
        scan_results=results,
        graph=load_fixture_graph(_fixture_dir(args)),
        labels=_load_labels(args.labels),
    )
    stream.write(f"serving case {args.case_id} on http://{args.bind}:{args.port}\n")
    serve_forever(state, host=args.bind, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "scan": cmd_scan,
    "trace": cmd_trace,
    "timeline": cmd_timeline,
    "serve": cmd_serve,
}


def main(argv=None, stream=None) -> int:
    stream = stream if stream is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, stream)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IngestError, GraphError, ExplorerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
