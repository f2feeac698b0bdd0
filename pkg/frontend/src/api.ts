/**
 * Typed client for the walletsift HTTP API.
 *
 * Every document shape here mirrors what the server emits verbatim; the
 * client only unwraps envelopes and maps error statuses, it never
 * derives chain semantics of its own.
 */

export interface ImageInfo {
    id: string;
    kind: string;
    root_label: string;
    file_count: number;
}

export interface CaseSummary {
    case_id: string;
    images: ImageInfo[];
    artifact_counts: Record<string, number>;
    transaction_count: number;
    coins: string[];
}

export interface ArtifactRow {
    kind: string;
    source_path: string;
    image_id: string;
    value: string;
    coin: string | null;
    observed_at: string | null;
    details: Record<string, unknown> | null;
}

export interface TxInputDoc {
    address: string;
    value: string;
    funding_txid: string | null;
}

export interface TxOutputDoc {
    index: number;
    address: string;
    value: string;
    spent_by_txid?: string | null;
}

export interface TransactionDoc {
    txid: string;
    coin: string;
    timestamp: string;
    inputs: TxInputDoc[];
    outputs: TxOutputDoc[];
    fee: string;
}

export type HopRole = "Funding" | "Change" | "Payment";

export interface HopDoc {
    txid: string;
    role: HopRole;
    via_input_index?: number;
    via_output_index?: number;
}

export interface AddressMatchDoc {
    address: string;
    entity: string;
    matched_key: string;
}

export type TerminalDoc =
    | { attributed: true; entities: string[]; matches: AddressMatchDoc[] }
    | { attributed: false; reason: string };

export interface TraceResultDoc {
    seed: string;
    direction: string;
    mode: string;
    max_depth: number;
    depth: number;
    hops: HopDoc[];
    terminal: TerminalDoc;
    visited: string[];
}

export interface TraceResponse {
    result: TraceResultDoc;
    transactions: Record<string, TransactionDoc>;
    labels: LabelMap;
}

export type TraceDirection = "Backward" | "Forward";
export type TraceMode = "WalletToWallet" | "UTXO";

export interface TraceRequest {
    seed: string;
    direction: TraceDirection;
    mode?: TraceMode;
    depth?: number;
}

export interface LabelEntry {
    entity: string;
    source: string | null;
}

export type LabelMap = Record<string, LabelEntry>;

export interface TimelineEventDoc {
    timestamp: string;
    source_kind: string;
    event_id: string;
    description: string;
}

export class ApiError extends Error {
    constructor(public readonly status: number, message: string) {
        super(message);
        this.name = "ApiError";
    }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function errorFrom(response: Response): Promise<ApiError> {
    let message = `${response.status} ${response.statusText}`;
    try {
        const body = (await response.json()) as { error?: string };
        if (body && typeof body.error === "string") {
            message = body.error;
        }
    } catch {
        // non-JSON error body; keep the status line
    }
    return new ApiError(response.status, message);
}

export class ApiClient {
    constructor(
        private readonly baseUrl: string,
        private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await this.fetchImpl(this.baseUrl + path, init);
        if (!response.ok) {
            throw await errorFrom(response);
        }
        return (await response.json()) as T;
    }

    private send<T>(path: string, method: string, body: unknown): Promise<T> {
        return this.request<T>(path, {
            method,
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }

    fetchCase(): Promise<CaseSummary> {
        return this.request<CaseSummary>("/api/case");
    }

    async fetchArtifacts(kind?: string): Promise<ArtifactRow[]> {
        const query = kind ? `?kind=${encodeURIComponent(kind)}` : "";
        const doc = await this.request<{ artifacts: ArtifactRow[] }>(
            `/api/artifacts${query}`,
        );
        return doc.artifacts;
    }

    async fetchTransaction(txid: string): Promise<TransactionDoc> {
        const doc = await this.request<{ transaction: TransactionDoc }>(
            `/api/tx/${encodeURIComponent(txid)}`,
        );
        return doc.transaction;
    }

    requestTrace(req: TraceRequest): Promise<TraceResponse> {
        return this.send<TraceResponse>("/api/trace", "POST", req);
    }

    fetchLabels(): Promise<LabelMap> {
        return this.request<LabelMap>("/api/labels");
    }

    replaceLabels(labels: LabelMap): Promise<{ ok: boolean; count: number }> {
        return this.send<{ ok: boolean; count: number }>("/api/labels", "PUT", labels);
    }

    async fetchTimeline(): Promise<TimelineEventDoc[]> {
        const doc = await this.request<{ events: TimelineEventDoc[] }>("/api/timeline");
        return doc.events;
    }
}
