import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { ARTIFACTS, TIMELINE, TX_4AF2, createMockApi } from "./mockApi.js";

describe("request shapes", () => {
    it("filters artifacts through the kind query parameter", async () => {
        const mock = createMockApi();

        const rows = await mock.client.fetchArtifacts("Cookie");

        expect(rows).toHaveLength(1);
        expect(rows[0]?.kind).toBe("Cookie");
        expect(mock.log[0]?.path).toBe("/api/artifacts?kind=Cookie");
    });

    it("fetches all artifacts without a query", async () => {
        const mock = createMockApi();

        const rows = await mock.client.fetchArtifacts();

        expect(rows).toHaveLength(ARTIFACTS.length);
        expect(mock.log[0]?.path).toBe("/api/artifacts");
    });

    it("unwraps transaction and timeline envelopes", async () => {
        const mock = createMockApi();

        const tx = await mock.client.fetchTransaction(TX_4AF2);
        const events = await mock.client.fetchTimeline();

        expect(tx.txid).toBe(TX_4AF2);
        expect(tx.inputs.length).toBeGreaterThan(0);
        expect(events).toEqual(TIMELINE);
    });

    it("serves the timeline in the order the API returned it", async () => {
        const mock = createMockApi();

        const events = await mock.client.fetchTimeline();

        expect(events.map((e) => e.timestamp)).toEqual(
            TIMELINE.map((e) => e.timestamp),
        );
    });

    it("reports case composition", async () => {
        const mock = createMockApi();

        const summary = await mock.client.fetchCase();

        expect(summary.case_id).toBe("fixture-case");
        expect(summary.transaction_count).toBe(4);
        expect(summary.images[0]?.kind).toBe("AdvancedLogical");
    });

    it("round-trips the label set", async () => {
        const mock = createMockApi();
        const labels = await mock.client.fetchLabels();

        const ack = await mock.client.replaceLabels({
            ...labels,
            bc1qextra: { entity: "Kraken", source: null },
        });

        expect(ack.ok).toBe(true);
        expect(ack.count).toBe(Object.keys(labels).length + 1);
    });
});

describe("error mapping", () => {
    it("maps server errors to ApiError with the served message", async () => {
        const mock = createMockApi();

        await expect(mock.client.fetchTransaction("f".repeat(64))).rejects.toMatchObject({
            name: "ApiError",
            status: 404,
        });
        await expect(mock.client.fetchArtifacts("Telegram")).rejects.toThrow(
            /unknown artifact kind/,
        );
    });

    it("falls back to the status line for non-JSON error bodies", async () => {
        const client = new ApiClient("http://mock", async () => {
            return new Response("<html>gateway timeout</html>", {
                status: 504,
                statusText: "Gateway Timeout",
            });
        });

        try {
            await client.fetchCase();
            expect.unreachable("should have thrown");
        } catch (err) {
            expect(err).toBeInstanceOf(ApiError);
            expect((err as ApiError).status).toBe(504);
            expect((err as ApiError).message).toContain("504");
        }
    });
});
