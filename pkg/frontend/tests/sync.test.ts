/** Scripted UI-sync acceptance: after every action, the store's rendered
 * card set equals a fresh GET /sessions/{id} payload. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CanvasApp } from "../src/app.js";
import { SessionStoreFront } from "../src/store.js";
import type { Point } from "../src/types.js";
import { BASE_URL } from "./global-setup.js";

async function expectMirrorsServer(store: SessionStoreFront, api: ApiClient) {
    const fresh = await api.getSession(store.sessionId);
    expect(store.view!.cards).toEqual(fresh.cards);
    expect(Object.keys(store.view!.cards).sort()).toEqual(Object.keys(fresh.cards).sort());
    expect(store.view!.graph).toEqual(fresh.graph);
    expect(store.view!.highlights).toEqual(fresh.highlights);
}

function circlePath(cx: number, cy: number, radius: number, steps = 16): Point[] {
    const points: Point[] = [];
    for (let i = 0; i <= steps; i++) {
        const t = (2 * Math.PI * i) / steps;
        points.push({ x: cx + radius * Math.cos(t), y: cy + radius * Math.sin(t) });
    }
    return points;
}

describe("UI state mirrors server state after every action", () => {
    it("create -> creative spark -> image lasso -> filter -> highlight", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);

        await app.start({ theme: "sync acceptance", outline: "A gate behind ivy." });
        await expectMirrorsServer(store, api);
        expect(store.cardIds()).toEqual([]);

        // generate via Creative Spark (toggle from the exact-craft default)
        expect(app.toggleGenerationMode()).toBe("creative_spark");
        const sparked = await app.generateFromIntent("luminescent flowers beyond the gate");
        expect(sparked).toHaveLength(3);
        await expectMirrorsServer(store, api);
        expect(store.cardIds()).toHaveLength(3);

        // lasso an image region of the first card
        const firstCard = store.cardIds()[0];
        const node = app.nodeRect(firstCard);
        const path = circlePath(node.x + node.w / 2, node.y + node.h * 0.35, node.w / 5);
        const lassoResult = await app.lassoGesture(firstCard, path);
        expect(lassoResult).not.toBe("ambiguous");
        expect(lassoResult).toHaveLength(1);
        await expectMirrorsServer(store, api);
        expect(store.cardIds()).toHaveLength(4);
        const lassoCard = (lassoResult as { id: string; origin: string }[])[0];
        expect(lassoCard.origin).toBe("lasso");

        // apply a filter from the card menu
        const filtered = await app.applyFilterMenu(lassoCard.id, "dreamy");
        expect(filtered[0].filter).toBe("dreamy");
        await expectMirrorsServer(store, api);
        expect(store.cardIds()).toHaveLength(5);

        // highlight an object on the original card
        await app.highlightObject(firstCard, 0, 6, "gate", "object", "the threshold");
        await expectMirrorsServer(store, api);
        expect(store.view!.highlights).toHaveLength(1);

        // cluster panel reflects the highlight; summarize returns 3 sections
        expect(app.clusterPanelOpen).toBe(false); // collapsed by default
        app.toggleClusterPanel();
        const clusters = await app.clusterPanel();
        expect(Object.keys(clusters.object)).toContain("gate");
        const summary = await app.summarizeButton("object", "gate");
        expect(summary.settings.length).toBeGreaterThan(0);
        expect(summary.description.length).toBeGreaterThan(0);
        expect(summary.plot.length).toBeGreaterThan(0);

        // provenance trail: the scene exposes parent links as edges
        const scene = app.scene();
        expect(scene.edges.some((e) => e.from === firstCard && e.kind === "lasso")).toBe(true);
        expect(scene.nodes).toHaveLength(5);
    });

    it("story edits and card deletion stay in lockstep too", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({ theme: "sync second pass" });
        const [card] = await app.generateFromIntent("a door in the fog");
        await expectMirrorsServer(store, api);

        await store.editStory(card.id, 0, 0, "Edited: ");
        await expectMirrorsServer(store, api);
        expect(store.card(card.id).story.startsWith("Edited: ")).toBe(true);

        await store.moveCard(card.id, { x: 400, y: 300, w: 260, h: 210 });
        await expectMirrorsServer(store, api);

        await store.deleteCard(card.id);
        await expectMirrorsServer(store, api);
        expect(store.cardIds()).toEqual([]);
    });

    it("ambiguous lasso resolves through the modality chooser", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({ theme: "modality" });
        const [card] = await app.generateFromIntent("spans both regions");
        const node = app.nodeRect(card.id);
        // rectangle straddling the image/text boundary (70% of node height)
        const boundary = node.y + node.h * 0.7;
        const path = [
            { x: node.x + 20, y: boundary - 30 },
            { x: node.x + 120, y: boundary - 30 },
            { x: node.x + 120, y: boundary + 30 },
            { x: node.x + 20, y: boundary + 30 },
            { x: node.x + 20, y: boundary - 30 },
        ];
        const outcome = await app.lassoGesture(card.id, path);
        expect(outcome).toBe("ambiguous");
        expect(app.modalityChoice?.kind).toBe("ambiguous");

        const viaText = await app.resolveModality("text");
        expect(viaText).toHaveLength(1);
        expect(viaText[0].origin).toBe("lasso");
        await expectMirrorsServer(store, api);

        // image choice works from a fresh ambiguous gesture too
        await app.lassoGesture(card.id, path);
        const viaImage = await app.resolveModality("image");
        expect(viaImage).toHaveLength(1);
        await expectMirrorsServer(store, api);
    });

    it("sketch intents upload the strokes screenshot as base64 PNG", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({ theme: "sketch upload" });
        app.addStroke([
            { x: 500, y: 500 },
            { x: 560, y: 540 },
            { x: 520, y: 580 },
        ]);
        const cards = await app.generateFromIntent("a spiral stair", undefined, true);
        expect(cards).toHaveLength(1);
        await expectMirrorsServer(store, api);
        // the mock text agent reports the strokes it received
        expect(cards[0].story).toContain("a spiral stair");
    });

    it("editor buffer binds to the session draft text", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({});
        await app.bindEditor("Claire pockets the key.");
        const fresh = await api.getSession(store.sessionId);
        expect(fresh.global_context.draft_text).toBe("Claire pockets the key.");
        expect(app.editorBuffer).toBe("Claire pockets the key.");
    });
});
