/**
 * DOM rendering for the investigator console.
 *
 * Pure list/sort helpers live at the top so they can be unit tested in
 * a Node environment; everything touching `document` stays inside the
 * render functions.
 */

import { ArtifactRow, TimelineEventDoc } from "./api.js";
import { RenderModel } from "./graphState.js";

export type ArtifactSortKey =
    | "kind"
    | "source_path"
    | "value"
    | "coin"
    | "observed_at";

export function sortArtifacts(
    rows: ArtifactRow[],
    key: ArtifactSortKey,
    descending = false,
): ArtifactRow[] {
    const sorted = [...rows].sort((a, b) => {
        const left = a[key] ?? "";
        const right = b[key] ?? "";
        return left < right ? -1 : left > right ? 1 : 0;
    });
    return descending ? sorted.reverse() : sorted;
}

/** Rows a graph seed can be launched from (value is a txid). */
export function seedableRows(rows: ArtifactRow[]): ArtifactRow[] {
    return rows.filter((row) => row.kind === "CacheTxId");
}

const NODE_WIDTH = 150;
const NODE_HEIGHT = 46;
const COLUMN_GAP = 220;
const ROW_GAP = 90;
const MARGIN = 40;

export interface GraphHandlers {
    onSelect?: (txid: string) => void;
    onExpand?: (txid: string, direction: "Backward" | "Forward") => void;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
    name: K,
    attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
    const el = document.createElementNS("http://www.w3.org/2000/svg", name);
    for (const [attr, value] of Object.entries(attrs)) {
        el.setAttribute(attr, value);
    }
    return el;
}

function nodeCenter(column: number, row: number): { x: number; y: number } {
    return {
        x: MARGIN + column * COLUMN_GAP + NODE_WIDTH / 2,
        y: MARGIN + row * ROW_GAP + NODE_HEIGHT / 2,
    };
}

export function renderGraph(
    svg: SVGSVGElement,
    model: RenderModel,
    handlers: GraphHandlers = {},
): void {
    svg.replaceChildren();
    const defs = svgEl("defs", {});
    const marker = svgEl("marker", {
        id: "arrow",
        viewBox: "0 0 10 10",
        refX: "9",
        refY: "5",
        markerWidth: "7",
        markerHeight: "7",
        orient: "auto-start-reverse",
    });
    marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#555" }));
    defs.appendChild(marker);
    svg.appendChild(defs);

    const positions = new Map<string, { x: number; y: number }>();
    let maxColumn = 0;
    let maxRow = 0;
    for (const node of model.nodes) {
        positions.set(node.id, nodeCenter(node.column, node.row));
        maxColumn = Math.max(maxColumn, node.column);
        maxRow = Math.max(maxRow, node.row);
    }
    svg.setAttribute(
        "viewBox",
        `0 0 ${MARGIN * 2 + maxColumn * COLUMN_GAP + NODE_WIDTH} ${
            MARGIN * 2 + maxRow * ROW_GAP + NODE_HEIGHT
        }`,
    );

    for (const edge of model.edges) {
        const from = positions.get(edge.from);
        const to = positions.get(edge.to);
        if (!from || !to) {
            continue;
        }
        const line = svgEl("line", {
            x1: String(from.x + NODE_WIDTH / 2),
            y1: String(from.y),
            x2: String(to.x - NODE_WIDTH / 2),
            y2: String(to.y),
            stroke: "#555",
            "stroke-width": "1.5",
            "marker-end": "url(#arrow)",
        });
        if (edge.dashed) {
            line.setAttribute("stroke-dasharray", "6 4");
        }
        svg.appendChild(line);
    }

    for (const node of model.nodes) {
        const center = positions.get(node.id);
        if (!center) {
            continue;
        }
        const group = svgEl("g", { cursor: "pointer" });
        const rect = svgEl("rect", {
            x: String(center.x - NODE_WIDTH / 2),
            y: String(center.y - NODE_HEIGHT / 2),
            width: String(NODE_WIDTH),
            height: String(NODE_HEIGHT),
            rx: "6",
            fill: node.missing ? "#fff" : node.filled ? "#cfe3ff" : "#f4f4f4",
            stroke: node.selected ? "#d9480f" : node.missing ? "#c92a2a" : "#333",
            "stroke-width": node.selected ? "3" : "1.5",
        });
        if (node.missing) {
            rect.setAttribute("stroke-dasharray", "4 3");
        }
        group.appendChild(rect);
        const label = svgEl("text", {
            x: String(center.x),
            y: String(center.y + (node.missing ? 5 : -2)),
            "text-anchor": "middle",
            "font-size": "12",
            "font-family": "monospace",
        });
        label.textContent = node.missing ? "missing link" : node.shortId;
        group.appendChild(label);
        if (!node.missing && node.coin) {
            const sub = svgEl("text", {
                x: String(center.x),
                y: String(center.y + 14),
                "text-anchor": "middle",
                "font-size": "10",
                fill: "#666",
            });
            sub.textContent = node.coin;
            group.appendChild(sub);
        }
        if (node.badges.length > 0) {
            const badge = svgEl("text", {
                x: String(center.x),
                y: String(center.y - NODE_HEIGHT / 2 - 6),
                "text-anchor": "middle",
                "font-size": "11",
                "font-weight": "bold",
                fill: "#1864ab",
                "data-badge": node.badges.join("+"),
            });
            badge.textContent = node.badges.join(" + ");
            group.appendChild(badge);
        }
        if (!node.missing) {
            group.addEventListener("click", () => handlers.onSelect?.(node.id));
            group.addEventListener("dblclick", () =>
                handlers.onExpand?.(node.id, "Backward"),
            );
        }
        svg.appendChild(group);
    }
}

export interface TableHandlers {
    onRowClick?: (row: ArtifactRow) => void;
    onSort?: (key: ArtifactSortKey) => void;
}

const ARTIFACT_COLUMNS: { key: ArtifactSortKey; title: string }[] = [
    { key: "kind", title: "Kind" },
    { key: "value", title: "Value" },
    { key: "coin", title: "Coin" },
    { key: "observed_at", title: "Observed" },
    { key: "source_path", title: "Provenance" },
];

export function renderArtifactTable(
    container: HTMLElement,
    rows: ArtifactRow[],
    handlers: TableHandlers = {},
): void {
    container.replaceChildren();
    if (rows.length === 0) {
        const empty = document.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No artefacts recovered for this case.";
        container.appendChild(empty);
        return;
    }
    const table = document.createElement("table");
    const head = table.createTHead().insertRow();
    for (const column of ARTIFACT_COLUMNS) {
        const cell = document.createElement("th");
        cell.textContent = column.title;
        cell.addEventListener("click", () => handlers.onSort?.(column.key));
        head.appendChild(cell);
    }
    const body = table.createTBody();
    for (const row of rows) {
        const tr = body.insertRow();
        tr.className = row.kind === "CacheTxId" ? "seedable" : "";
        tr.insertCell().textContent = row.kind;
        const valueCell = tr.insertCell();
        valueCell.textContent =
            row.value.length > 44 ? `${row.value.slice(0, 41)}…` : row.value;
        valueCell.title = row.value;
        tr.insertCell().textContent = row.coin ?? "";
        tr.insertCell().textContent = row.observed_at ?? "";
        const provenance = tr.insertCell();
        provenance.textContent = row.source_path;
        provenance.title = `${row.image_id}: ${row.source_path}`;
        tr.addEventListener("click", () => handlers.onRowClick?.(row));
    }
    container.appendChild(table);
}

export function renderTimeline(
    container: HTMLElement,
    events: TimelineEventDoc[],
): void {
    container.replaceChildren();
    if (events.length === 0) {
        const empty = document.createElement("p");
        empty.className = "empty-state";
        empty.textContent = "No timeline events.";
        container.appendChild(empty);
        return;
    }
    const list = document.createElement("ol");
    list.className = "timeline";
    for (const event of events) {
        const item = document.createElement("li");
        item.dataset.kind = event.source_kind;
        const when = document.createElement("time");
        when.textContent = event.timestamp;
        const what = document.createElement("span");
        what.textContent = ` [${event.source_kind}] ${event.description}`;
        item.append(when, what);
        list.appendChild(item);
    }
    container.appendChild(list);
}

export function renderErrorBanner(
    container: HTMLElement,
    message: string | null,
): void {
    container.replaceChildren();
    container.hidden = message === null;
    if (message !== null) {
        const banner = document.createElement("div");
        banner.className = "error-banner";
        banner.setAttribute("role", "alert");
        banner.textContent = message;
        container.appendChild(banner);
    }
}
