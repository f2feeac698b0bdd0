/**
 * Label editing over PUT /api/labels.
 *
 * The server holds the authoritative label set; every edit replaces it
 * wholesale and the editor keeps the last acknowledged copy so badges
 * can re-render without a page reload.
 */

import { ApiClient, LabelEntry, LabelMap } from "./api.js";

export type ConflictPrompt = (
    address: string,
    existing: LabelEntry,
    proposed: LabelEntry,
) => boolean;

export class LabelEditor {
    private labels: LabelMap = {};

    constructor(
        private readonly api: ApiClient,
        private readonly onChange: (labels: LabelMap) => void,
        private readonly confirmConflict: ConflictPrompt = () => true,
    ) {}

    current(): LabelMap {
        return { ...this.labels };
    }

    async load(): Promise<LabelMap> {
        this.labels = await this.api.fetchLabels();
        this.onChange(this.current());
        return this.current();
    }

    /**
     * Attach an entity to an address. Relabeling an address that already
     * carries a different entity goes through the conflict prompt first.
     */
    async apply(
        address: string,
        entity: string,
        source: string | null = null,
    ): Promise<boolean> {
        const proposed: LabelEntry = { entity, source };
        const existing = this.labels[address];
        if (existing && existing.entity !== entity) {
            if (!this.confirmConflict(address, existing, proposed)) {
                return false;
            }
        }
        const next: LabelMap = { ...this.labels, [address]: proposed };
        await this.api.replaceLabels(next);
        this.labels = next;
        this.onChange(this.current());
        return true;
    }

    async remove(address: string): Promise<boolean> {
        if (!(address in this.labels)) {
            return false;
        }
        const next = { ...this.labels };
        delete next[address];
        await this.api.replaceLabels(next);
        this.labels = next;
        this.onChange(this.current());
        return true;
    }
}
