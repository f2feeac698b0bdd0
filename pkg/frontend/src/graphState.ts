/**
 * Client-side graph view state.
 *
 * Holds the visible transaction neighborhood, the expansion journal,
 * and the label map last served by the API. All chain semantics (trace
 * paths, hop roles, attribution) come from trace responses; this module
 * only merges documents and lays them out.
 */

import {
    ApiClient,
    ApiError,
    HopRole,
    LabelMap,
    TraceDirection,
    TraceResponse,
    TransactionDoc,
} from "./api.js";

export type JournalEntry =
    | { op: "seed"; txid: string }
    | { op: "expand"; txid: string; direction: TraceDirection };

export type ExpandOutcome = "expanded" | "duplicate" | "pending" | "error";

export interface GraphEdge {
    from: string;
    to: string;
    role: HopRole | null;
    dashed: boolean;
}

interface MissingMarker {
    id: string;
    attachedTo: string;
    direction: TraceDirection;
}

export interface RenderNode {
    id: string;
    shortId: string;
    coin: string | null;
    timestamp: string | null;
    badges: string[];
    filled: boolean;
    missing: boolean;
    selected: boolean;
    column: number;
    row: number;
}

export interface RenderEdge {
    from: string;
    to: string;
    role: HopRole | null;
    dashed: boolean;
}

export interface RenderModel {
    nodes: RenderNode[];
    edges: RenderEdge[];
    banner: string | null;
}

function shortId(txid: string): string {
    return txid.length > 13 ? `${txid.slice(0, 8)}…${txid.slice(-4)}` : txid;
}

export class GraphViewState {
    private readonly nodes = new Map<string, TransactionDoc>();
    private readonly edges = new Map<string, GraphEdge>();
    private readonly markers = new Map<string, MissingMarker>();
    private readonly completed = new Set<string>();
    private readonly pending = new Map<string, Promise<ExpandOutcome>>();
    private readonly log: JournalEntry[] = [];
    private labels: LabelMap = {};
    selectedTxid: string | null = null;
    lastError: string | null = null;

    constructor(
        readonly caseId: string,
        private readonly api: ApiClient,
        private readonly expansionDepth: number = 1,
    ) {}

    /** Replay a journal against a fresh state; the refresh-safe path. */
    static async replay(
        caseId: string,
        api: ApiClient,
        journal: JournalEntry[],
    ): Promise<GraphViewState> {
        const state = new GraphViewState(caseId, api);
        for (const entry of journal) {
            if (entry.op === "seed") {
                await state.seed(entry.txid);
            } else {
                await state.expand(entry.txid, entry.direction);
            }
        }
        return state;
    }

    journal(): JournalEntry[] {
        return [...this.log];
    }

    has(txid: string): boolean {
        return this.nodes.has(txid);
    }

    nodeCount(): number {
        return this.nodes.size;
    }

    edgeCount(): number {
        return this.edges.size;
    }

    currentLabels(): LabelMap {
        return { ...this.labels };
    }

    select(txid: string): void {
        if (!this.nodes.has(txid)) {
            throw new Error(`cannot select ${txid}: not visible`);
        }
        this.selectedTxid = txid;
    }

    clearError(): void {
        this.lastError = null;
    }

    /** Put a transaction on the canvas without tracing (artefact row click). */
    async seed(txid: string): Promise<void> {
        if (!this.nodes.has(txid)) {
            const tx = await this.api.fetchTransaction(txid);
            this.nodes.set(tx.txid, tx);
            this.log.push({ op: "seed", txid: tx.txid });
            this.relinkEdges();
        }
        this.selectedTxid = txid;
    }

    /**
     * Request a depth-limited trace from a visible node and merge the
     * response. Idempotent per (txid, direction): a completed expansion
     * short-circuits, a concurrent one returns the in-flight promise.
     */
    expand(txid: string, direction: TraceDirection): Promise<ExpandOutcome> {
        if (!this.nodes.has(txid)) {
            throw new Error(`cannot expand ${txid}: not visible`);
        }
        const key = `${txid}:${direction}`;
        if (this.completed.has(key)) {
            return Promise.resolve("duplicate");
        }
        const inFlight = this.pending.get(key);
        if (inFlight) {
            return inFlight;
        }
        const attempt = this.api
            .requestTrace({
                seed: txid,
                direction,
                mode: "WalletToWallet",
                depth: this.expansionDepth,
            })
            .then((response): ExpandOutcome => {
                this.merge(txid, direction, response);
                this.completed.add(key);
                this.log.push({ op: "expand", txid, direction });
                return "expanded";
            })
            .catch((err: unknown): ExpandOutcome => {
                this.lastError =
                    err instanceof ApiError || err instanceof Error
                        ? err.message
                        : String(err);
                return "error";
            })
            .finally(() => {
                this.pending.delete(key);
            });
        this.pending.set(key, attempt);
        return attempt;
    }

    /** Swap in a new label map (after an edit); badges re-derive from it. */
    applyLabels(labels: LabelMap): void {
        this.labels = { ...labels };
    }

    badgesFor(txid: string): string[] {
        const tx = this.nodes.get(txid);
        if (!tx) {
            return [];
        }
        const entities = new Set<string>();
        for (const input of tx.inputs) {
            const entry = this.labels[input.address];
            if (entry) {
                entities.add(entry.entity);
            }
        }
        for (const output of tx.outputs) {
            const entry = this.labels[output.address];
            if (entry) {
                entities.add(entry.entity);
            }
        }
        return [...entities].sort();
    }

    private merge(
        seedTxid: string,
        direction: TraceDirection,
        response: TraceResponse,
    ): void {
        this.labels = { ...response.labels };
        for (const txid of response.result.visited) {
            const tx = response.transactions[txid];
            if (tx) {
                this.nodes.set(txid, tx);
            }
        }
        // path edges carry the API-assigned hop role; money flows from
        // funding txs toward the seed, so backward hops point at the seed
        let previous = seedTxid;
        for (const hop of response.result.hops) {
            const [from, to] =
                direction === "Backward" ? [hop.txid, previous] : [previous, hop.txid];
            this.putEdge(from, to, hop.role);
            previous = hop.txid;
        }
        const terminal = response.result.terminal;
        if (!terminal.attributed && terminal.reason === "MissingLink") {
            const id = `missing:${seedTxid}:${direction}`;
            this.markers.set(id, { id, attachedTo: seedTxid, direction });
        }
        this.relinkEdges();
    }

    /** Derive plain funding edges between visible nodes from the tx docs. */
    private relinkEdges(): void {
        for (const tx of this.nodes.values()) {
            for (const input of tx.inputs) {
                if (input.funding_txid && this.nodes.has(input.funding_txid)) {
                    this.putEdge(input.funding_txid, tx.txid, null);
                }
            }
            for (const output of tx.outputs) {
                if (output.spent_by_txid && this.nodes.has(output.spent_by_txid)) {
                    this.putEdge(tx.txid, output.spent_by_txid, null);
                }
            }
        }
    }

    private putEdge(from: string, to: string, role: HopRole | null): void {
        if (!this.nodes.has(from) || !this.nodes.has(to)) {
            return; // every stored edge must connect visible nodes
        }
        const key = `${from}->${to}`;
        const existing = this.edges.get(key);
        if (existing && (existing.role !== null || role === null)) {
            return;
        }
        this.edges.set(key, { from, to, role, dashed: role === "Change" });
    }

    toRenderModel(): RenderModel {
        const columns = this.layoutColumns();
        const nodes: RenderNode[] = [];
        const byColumn = new Map<number, RenderNode[]>();

        for (const tx of this.nodes.values()) {
            const badges = this.badgesFor(tx.txid);
            const node: RenderNode = {
                id: tx.txid,
                shortId: shortId(tx.txid),
                coin: tx.coin,
                timestamp: tx.timestamp,
                badges,
                filled: badges.length > 0,
                missing: false,
                selected: tx.txid === this.selectedTxid,
                column: columns.get(tx.txid) ?? 0,
                row: 0,
            };
            nodes.push(node);
        }
        const edges: RenderEdge[] = [...this.edges.values()].map((edge) => ({
            from: edge.from,
            to: edge.to,
            role: edge.role,
            dashed: edge.dashed,
        }));
        for (const marker of this.markers.values()) {
            const anchor = columns.get(marker.attachedTo) ?? 0;
            const column = marker.direction === "Backward" ? anchor - 1 : anchor + 1;
            nodes.push({
                id: marker.id,
                shortId: "?",
                coin: null,
                timestamp: null,
                badges: [],
                filled: false,
                missing: true,
                selected: false,
                column,
                row: 0,
            });
            const [from, to] =
                marker.direction === "Backward"
                    ? [marker.id, marker.attachedTo]
                    : [marker.attachedTo, marker.id];
            edges.push({ from, to, role: null, dashed: true });
        }

        // band rows within each column, oldest first for stable placement
        const minColumn = Math.min(0, ...nodes.map((n) => n.column));
        for (const node of nodes) {
            node.column -= minColumn;
            const band = byColumn.get(node.column) ?? [];
            band.push(node);
            byColumn.set(node.column, band);
        }
        for (const band of byColumn.values()) {
            band.sort((a, b) =>
                `${a.timestamp ?? ""}${a.id}`.localeCompare(`${b.timestamp ?? ""}${b.id}`),
            );
            band.forEach((node, index) => {
                node.row = index;
            });
        }
        nodes.sort((a, b) => a.column - b.column || a.row - b.row);
        return { nodes, edges, banner: this.lastError };
    }

    /** Longest-path layering: an edge always points one column rightward. */
    private layoutColumns(): Map<string, number> {
        const columns = new Map<string, number>();
        for (const txid of this.nodes.keys()) {
            columns.set(txid, 0);
        }
        const edges = [...this.edges.values()];
        for (let pass = 0; pass < this.nodes.size + 1; pass += 1) {
            let changed = false;
            for (const edge of edges) {
                const from = columns.get(edge.from);
                const to = columns.get(edge.to);
                if (from === undefined || to === undefined) {
                    continue;
                }
                if (to < from + 1) {
                    columns.set(edge.to, from + 1);
                    changed = true;
                }
            }
            if (!changed) {
                break;
            }
        }
        return columns;
    }
}
