/** Store behavior against a controllable fake API: placeholder lifecycle and
 * stale-reply dropping for cards deleted mid-flight. */

import { describe, expect, it } from "vitest";

import type { ApiClient, CardsReply } from "../src/api.js";
import { SessionStoreFront } from "../src/store.js";
import type { Card, SessionView } from "../src/types.js";

function fakeCard(id: string): Card {
    return {
        id,
        story: `story of ${id}`,
        image: { asset_id: `sha256:${id}`, format: "png", width: 64, height: 64 },
        objects: [],
        voice: "third",
        filter: null,
        created_at: 1,
        origin: "exact_craft",
    };
}

function emptyView(id = "fake"): SessionView {
    return {
        id,
        global_context: { theme: "", outline: "", draft_text: "" },
        cards: {},
        graph: { nodes: [], edges: [], meta: {} },
        canvas: {},
        highlights: [],
        event_count: 1,
    };
}

class FakeApi {
    view = emptyView();
    lassoResolvers: Array<(reply: CardsReply) => void> = [];

    async createSession(): Promise<SessionView> {
        return structuredClone(this.view);
    }

    async getSession(): Promise<SessionView> {
        return structuredClone(this.view);
    }

    /** Lasso replies resolve only when the test releases them. */
    lassoText(): Promise<CardsReply> {
        return new Promise((resolve) => this.lassoResolvers.push(resolve));
    }

    async deleteCard(_sid: string, cardId: string) {
        delete this.view.cards[cardId];
        this.view.graph.nodes = this.view.graph.nodes.filter((n) => n !== cardId);
        return { deleted: cardId, orphaned: [] };
    }
}

describe("placeholder lifecycle and stale replies", () => {
    it("drops a lasso reply whose source card was deleted mid-flight", async () => {
        const fake = new FakeApi();
        fake.view.cards["X"] = fakeCard("X");
        fake.view.graph.nodes = ["X"];
        const store = new SessionStoreFront(fake as unknown as ApiClient);
        await store.createSession();
        expect(store.cardIds()).toEqual(["X"]);

        // start a lasso on X; the reply is withheld
        const lassoPromise = store.lassoText("X", 0, 4);
        expect(store.pending.size).toBe(1);

        // delete X while the lasso is in flight
        await store.deleteCard("X");
        expect(store.pending.size).toBe(0); // placeholder invalidated
        expect(store.cardIds()).toEqual([]);

        // now the stale reply arrives; it must be dropped, not applied
        fake.lassoResolvers[0]({ cards: [fakeCard("stale-child")] });
        const cards = await lassoPromise;
        expect(cards).toEqual([]);
        expect(store.staleRepliesDropped).toBe(1);
        expect(store.cardIds()).toEqual([]);
    });

    it("applies replies whose placeholder is still alive", async () => {
        const fake = new FakeApi();
        fake.view.cards["X"] = fakeCard("X");
        const store = new SessionStoreFront(fake as unknown as ApiClient);
        await store.createSession();

        const lassoPromise = store.lassoText("X", 0, 4);
        // simulate the server having produced the child before replying
        fake.view.cards["X.c2"] = fakeCard("X.c2");
        fake.lassoResolvers[0]({ cards: [fakeCard("X.c2")] });
        const cards = await lassoPromise;
        expect(cards.map((c) => c.id)).toEqual(["X.c2"]);
        expect(store.pending.size).toBe(0);
        expect(store.cardIds()).toContain("X.c2");
        expect(store.staleRepliesDropped).toBe(0);
    });

    it("placeholders appear in the scene while pending", async () => {
        const { CanvasApp } = await import("../src/app.js");
        const fake = new FakeApi();
        fake.view.cards["X"] = fakeCard("X");
        const store = new SessionStoreFront(fake as unknown as ApiClient);
        await store.createSession();
        const app = new CanvasApp(store);

        const lassoPromise = store.lassoText("X", 0, 4);
        const during = app.scene();
        expect(during.placeholders).toHaveLength(1);
        expect(during.placeholders[0].pending).toBe(true);

        fake.lassoResolvers[0]({ cards: [] });
        await lassoPromise;
        expect(app.scene().placeholders).toHaveLength(0);
    });
});
