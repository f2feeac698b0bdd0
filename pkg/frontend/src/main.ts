/**
 * Page bootstrap: wires the API client, graph state, label editor, and
 * render functions to the static DOM in index.html. The expansion
 * journal is kept in sessionStorage so a refresh rebuilds the same view.
 */

import { ApiClient, ArtifactRow } from "./api.js";
import { GraphViewState, JournalEntry } from "./graphState.js";
import { LabelEditor } from "./labels.js";
import {
    ArtifactSortKey,
    renderArtifactTable,
    renderErrorBanner,
    renderGraph,
    renderTimeline,
    sortArtifacts,
} from "./render.js";

function el<T extends HTMLElement>(id: string): T {
    const found = document.getElementById(id);
    if (!found) {
        throw new Error(`missing #${id} in index.html`);
    }
    return found as T;
}

function journalKey(caseId: string): string {
    return `walletsift:journal:${caseId}`;
}

function loadJournal(caseId: string): JournalEntry[] {
    try {
        const raw = sessionStorage.getItem(journalKey(caseId));
        return raw ? (JSON.parse(raw) as JournalEntry[]) : [];
    } catch {
        return [];
    }
}

function saveJournal(caseId: string, journal: JournalEntry[]): void {
    sessionStorage.setItem(journalKey(caseId), JSON.stringify(journal));
}

async function boot(): Promise<void> {
    const api = new ApiClient(
        new URLSearchParams(location.search).get("api") ?? location.origin,
    );
    const summary = await api.fetchCase();
    el("case-title").textContent = summary.case_id;
    el("case-stats").textContent =
        `${summary.transaction_count} transactions · ` +
        `${Object.values(summary.artifact_counts).reduce((a, b) => a + b, 0)} artefacts · ` +
        summary.coins.join(", ");

    let state = await GraphViewState.replay(
        summary.case_id,
        api,
        loadJournal(summary.case_id),
    );

    const graphSvg = el<HTMLElement>("graph") as unknown as SVGSVGElement;
    const banner = el("banner");

    const redrawGraph = (): void => {
        renderGraph(graphSvg, state.toRenderModel(), {
            onSelect: (txid) => {
                state.select(txid);
                redrawGraph();
            },
            onExpand: (txid, direction) => void expand(txid, direction),
        });
        renderErrorBanner(banner, state.lastError);
        el("selected").textContent = state.selectedTxid ?? "none";
    };

    async function expand(txid: string, direction: "Backward" | "Forward") {
        state.clearError();
        await state.expand(txid, direction);
        saveJournal(state.caseId, state.journal());
        redrawGraph();
    }

    el("expand-backward").addEventListener("click", () => {
        if (state.selectedTxid) {
            void expand(state.selectedTxid, "Backward");
        }
    });
    el("expand-forward").addEventListener("click", () => {
        if (state.selectedTxid) {
            void expand(state.selectedTxid, "Forward");
        }
    });
    el("reset-graph").addEventListener("click", () => {
        sessionStorage.removeItem(journalKey(state.caseId));
        location.reload();
    });

    const labelEditor = new LabelEditor(
        api,
        (labels) => {
            state.applyLabels(labels);
            redrawGraph();
        },
        (address, existing, proposed) =>
            window.confirm(
                `${address} is already labeled ${existing.entity}; relabel as ${proposed.entity}?`,
            ),
    );
    await labelEditor.load();

    el("label-form").addEventListener("submit", (event) => {
        event.preventDefault();
        const address = el<HTMLInputElement>("label-address").value.trim();
        const entity = el<HTMLInputElement>("label-entity").value.trim();
        if (address && entity) {
            void labelEditor.apply(address, entity, "manual");
        }
    });

    let artifacts: ArtifactRow[] = await api.fetchArtifacts();
    let sortKey: ArtifactSortKey = "source_path";
    let descending = false;
    const drawTable = (): void => {
        renderArtifactTable(el("artifacts"), sortArtifacts(artifacts, sortKey, descending), {
            onSort: (key) => {
                descending = key === sortKey ? !descending : false;
                sortKey = key;
                drawTable();
            },
            onRowClick: (row) => {
                if (row.kind === "CacheTxId") {
                    void state.seed(row.value).then(() => {
                        saveJournal(state.caseId, state.journal());
                        redrawGraph();
                    });
                }
            },
        });
    };
    drawTable();

    el<HTMLSelectElement>("kind-filter").addEventListener("change", (event) => {
        const kind = (event.target as HTMLSelectElement).value;
        void api.fetchArtifacts(kind || undefined).then((rows) => {
            artifacts = rows;
            drawTable();
        });
    });

    renderTimeline(el("timeline"), await api.fetchTimeline());
    redrawGraph();
}

boot().catch((err: unknown) => {
    renderErrorBanner(
        el("banner"),
        err instanceof Error ? err.message : String(err),
    );
});
