/** Raster fidelity acceptance: a solid-color card rasterizes to >= 99%
 * matching pixels within the crop bounds, via the real service's PNG assets. */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CanvasApp, EmptySelection } from "../src/app.js";
import { Raster } from "../src/raster.js";
import { SessionStoreFront } from "../src/store.js";
import { BASE_URL } from "./global-setup.js";

describe("rasterization", () => {
    it("solid-color card rasterizes >= 99% matching within crop bounds", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({ theme: "raster acceptance" });
        const [card] = await app.generateFromIntent("a single solid card");

        // ground truth color read from the server-generated PNG itself
        const asset = Raster.fromPng(await api.fetchAsset(card.image.asset_id));
        const expected = asset.getPixel(0, 0);

        // marquee exactly over the card's image area
        const node = app.nodeRect(card.id);
        const imageArea = { x: node.x, y: node.y, w: node.w, h: node.h * 0.7 };
        const png = await app.rasterizeSelection(imageArea);
        const out = Raster.fromPng(png);
        expect(out.width).toBe(Math.round(imageArea.w));
        expect(out.height).toBe(Math.round(imageArea.h));
        expect(out.matchRatio(expected)).toBeGreaterThanOrEqual(0.99);
    });

    it("marquee over part of a card crops exactly that region", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({});
        const [card] = await app.generateFromIntent("crop me");
        const asset = Raster.fromPng(await api.fetchAsset(card.image.asset_id));
        const expected = asset.getPixel(0, 0);
        const node = app.nodeRect(card.id);
        const png = await app.rasterizeSelection({ x: node.x + 10, y: node.y + 10, w: 50, h: 40 });
        const out = Raster.fromPng(png);
        expect([out.width, out.height]).toEqual([50, 40]);
        expect(out.matchRatio(expected)).toBeGreaterThanOrEqual(0.99);
    });

    it("strokes-only selection rasterizes the stroke bounding box", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({});
        const stroke = [
            { x: 600, y: 600 },
            { x: 660, y: 640 },
            { x: 620, y: 680 },
        ];
        app.addStroke(stroke);
        const png = await app.rasterizeSelection(null, []);
        const out = Raster.fromPng(png);
        // bbox 60x80 plus 8px pad each side
        expect([out.width, out.height]).toEqual([76, 96]);
        // ink appears: at least one pixel is the sketch color
        expect(out.matchRatio([20, 20, 20, 255])).toBeGreaterThan(0);
    });

    it("zero-area marquee raises EmptySelection", async () => {
        const api = new ApiClient(BASE_URL);
        const store = new SessionStoreFront(api);
        const app = new CanvasApp(store);
        await app.start({});
        await expect(app.rasterizeSelection({ x: 0, y: 0, w: 0, h: 10 })).rejects.toThrow(
            EmptySelection,
        );
        await expect(app.rasterizeSelection(null, [])).rejects.toThrow(EmptySelection);
    });

    it("png round-trips through the software raster", () => {
        const raster = new Raster(13, 9, [10, 200, 30, 255]);
        raster.fillRect(2, 2, 4, 3, [250, 5, 5, 255]);
        const decoded = Raster.fromPng(raster.toPng());
        expect(decoded.width).toBe(13);
        expect(decoded.height).toBe(9);
        expect([...decoded.data]).toEqual([...raster.data]);
    });
});
