/** Canvas application view-model.
 *
 * Holds what the writer sees and does: card nodes, sketch stroke layers,
 * the active tool, the generation-mode toggle, selection state, the collage
 * composer, the collapsible cluster panel, and the text editor buffer bound
 * to the session draft. Every mutating affordance is a thin call through the
 * store to a session-service endpoint; this model never edits cards locally.
 */

import type { PlacementBody } from "./api.js";
import { TextPane } from "./editor.js";
import { closePath, routeLasso, type LassoRouting } from "./lasso.js";
import { Raster, pngToBase64, type RGBA } from "./raster.js";
import { SessionStoreFront } from "./store.js";
import type {
    Card,
    ClustersView,
    FilterKind,
    GenerationMode,
    ObjectKind,
    Point,
    Rect,
    SummaryWire,
    Voice,
} from "./types.js";
import { rectsIntersect } from "./types.js";

export class EmptySelection extends Error {
    constructor(message = "selection is empty") {
        super(message);
        this.name = "EmptySelection";
    }
}

export type Tool = "select" | "sketch" | "lasso" | "marquee" | "collage";

export interface SceneNode {
    card: Card;
    rect: Rect;
    pending: false;
}

export interface ScenePlaceholder {
    requestId: number;
    rect: Rect;
    pending: true;
}

export interface SceneEdge {
    from: string;
    to: string;
    kind: string;
}

export interface Scene {
    nodes: SceneNode[];
    placeholders: ScenePlaceholder[];
    edges: SceneEdge[];
    strokes: Point[][];
}

const CANVAS_W = 1280;
const CANVAS_H = 960;
const SKETCH_COLOR: RGBA = [20, 20, 20, 255];

export class CanvasApp {
    tool: Tool = "select";
    generationMode: GenerationMode = "exact_craft";
    strokes: Point[][] = [];
    lassoPath: Point[] = [];
    marquee: Rect | null = null;
    /** Surfaced when a lasso spans both modalities; writer must choose. */
    modalityChoice: LassoRouting | null = null;
    clusterPanelOpen = false; // collapsed until the writer opens it
    editorBuffer = "";

    private assetCache = new Map<string, Raster>();

    constructor(readonly store: SessionStoreFront) {}

    // --- session ---

    async start(context: { theme?: string; outline?: string; draft_text?: string } = {}) {
        const view = await this.store.createSession(context);
        this.editorBuffer = view.global_context.draft_text;
        return view;
    }

    setTool(tool: Tool): void {
        this.tool = tool;
    }

    toggleGenerationMode(): GenerationMode {
        this.generationMode = this.generationMode === "exact_craft" ? "creative_spark" : "exact_craft";
        return this.generationMode;
    }

    // --- scene (what gets rendered) ---

    scene(): Scene {
        const view = this.store.view;
        if (!view) return { nodes: [], placeholders: [], edges: [], strokes: this.strokes };
        const nodes = Object.entries(view.cards).map(([cardId, card]) => {
            const layout = view.canvas[cardId] ?? { x: 0, y: 0, w: 240, h: 200 };
            return { card, rect: { x: layout.x, y: layout.y, w: layout.w, h: layout.h }, pending: false as const };
        });
        // provenance trail: parent links rendered as edges between nodes
        const edges = view.graph.edges.map((e) => ({ from: e.parent, to: e.child, kind: e.kind }));
        const placeholders = [...this.store.pending.values()].map((p, i) => ({
            requestId: p.requestId,
            rect: { x: 40 + 40 * i, y: CANVAS_H - 220, w: 240, h: 200 },
            pending: true as const,
        }));
        return { nodes, placeholders, edges, strokes: this.strokes };
    }

    nodeRect(cardId: string): Rect {
        const view = this.store.view;
        const layout = view?.canvas[cardId];
        if (!layout) throw new Error(`no layout for card ${cardId}`);
        return { x: layout.x, y: layout.y, w: layout.w, h: layout.h };
    }

    // --- sketching ---

    addStroke(points: Point[]): void {
        if (points.length > 0) this.strokes.push(points);
    }

    clearStrokes(): void {
        this.strokes = [];
    }

    // --- generation (Exact Craft / Creative Spark toggle applies) ---

    async generateFromIntent(typedText?: string, referenceCards?: string[], withSketch = false) {
        const intent: Record<string, unknown> = {};
        if (typedText) intent.typed_text = typedText;
        if (referenceCards?.length) intent.reference_cards = referenceCards;
        if (withSketch && this.strokes.length) {
            intent.sketch_strokes = this.strokes.map((s) => s.map((p) => [p.x, p.y]));
            intent.screenshot_png_b64 = pngToBase64(await this.rasterizeSelection(null, this.strokes));
        }
        return this.store.generate(this.generationMode, intent);
    }

    // --- lasso gesture ---

    /**
     * Interpret a drawn lasso path over a card and fire the matching API
     * call. Ambiguous paths (image + text) set `modalityChoice` and wait for
     * `resolveModality`.
     */
    async lassoGesture(cardId: string, path: Point[]): Promise<Card[] | "ambiguous"> {
        const card = this.store.card(cardId);
        const routing = routeLasso(path, card, this.nodeRect(cardId));
        if (routing.kind === "ambiguous") {
            this.modalityChoice = routing;
            this.lassoPath = closePath(path);
            return "ambiguous";
        }
        return this.submitRouting(routing);
    }

    async resolveModality(choice: "image" | "text"): Promise<Card[]> {
        if (!this.modalityChoice || this.modalityChoice.kind !== "ambiguous") {
            throw new Error("no modality choice pending");
        }
        const cardId = this.modalityChoice.cardId;
        const card = this.store.card(cardId);
        const node = this.nodeRect(cardId);
        const path = this.lassoPath;
        this.modalityChoice = null;
        // Re-route against only the chosen modality by clamping the path.
        const routing = routeLasso(
            path.map((p) => clampToRegion(p, node, choice)),
            card,
            node,
        );
        if (routing.kind === "ambiguous") {
            throw new Error("clamped path is still ambiguous");
        }
        return this.submitRouting(routing);
    }

    private submitRouting(routing: LassoRouting): Promise<Card[]> {
        if (routing.kind === "image") {
            return this.store.lassoImage(routing.cardId, routing.polygon);
        }
        if (routing.kind === "text") {
            return this.store.lassoText(routing.cardId, routing.start, routing.end);
        }
        throw new Error("cannot submit an ambiguous routing");
    }

    // --- menus and affordances (thin API wrappers) ---

    applyFilterMenu(cardId: string, kind: FilterKind): Promise<Card[]> {
        return this.store.applyFilter(cardId, kind);
    }

    perspectiveMenu(cardId: string, target: Voice): Promise<Card[]> {
        return this.store.shiftPerspective(cardId, target);
    }

    highlightObject(cardId: string, start: number, end: number, name: string, kind: ObjectKind, comment?: string) {
        return this.store.addHighlight({ card_id: cardId, start, end, object: { name, kind }, comment });
    }

    commentOnly(cardId: string, start: number, end: number, comment: string) {
        return this.store.addHighlight({ card_id: cardId, start, end, comment });
    }

    async bindEditor(draft: string) {
        this.editorBuffer = draft;
        const view = await this.store.setDraftText(draft);
        this.editorBuffer = view.global_context.draft_text;
        return view;
    }

    // --- collage composer (drag pieces into a frame, then submit) ---

    composer: PlacementBody[] = [];

    dragCropToComposer(cardId: string, rect: { left: number; top: number; width: number; height: number }, at: Point, size: { w: number; h: number }): void {
        this.composer.push({ source: { type: "crop", card_id: cardId, rect }, position: { x: at.x, y: at.y }, size });
    }

    dragSketchToComposer(strokes: Point[][], at: Point, size: { w: number; h: number }): void {
        this.composer.push({
            source: { type: "sketch", strokes: strokes.map((s) => s.map((p) => [p.x, p.y])) },
            position: { x: at.x, y: at.y },
            size,
        });
    }

    dragNoteToComposer(text: string, at: Point, size: { w: number; h: number }): void {
        this.composer.push({ source: { type: "note", text }, position: { x: at.x, y: at.y }, size });
    }

    async submitCollage(intentText?: string, initiatorCardId?: string): Promise<Card[]> {
        if (this.composer.length === 0) {
            throw new EmptySelection("collage frame is empty");
        }
        const placements = this.composer;
        this.composer = [];
        return this.store.collage(placements, intentText, initiatorCardId);
    }

    // --- cluster panel ---

    toggleClusterPanel(): boolean {
        this.clusterPanelOpen = !this.clusterPanelOpen;
        return this.clusterPanelOpen;
    }

    clusterPanel(): Promise<ClustersView> {
        return this.store.api.clusters(this.store.sessionId);
    }

    summarizeButton(kind: ObjectKind, name: string): Promise<SummaryWire> {
        return this.store.api.summarize(this.store.sessionId, kind, name);
    }

    // --- rasterization ---

    private async assetRaster(assetId: string): Promise<Raster> {
        let raster = this.assetCache.get(assetId);
        if (!raster) {
            raster = Raster.fromPng(await this.store.api.fetchAsset(assetId));
            this.assetCache.set(assetId, raster);
        }
        return raster;
    }

    /**
     * Pixel-faithful PNG of a canvas region (marquee) or of the sketch
     * strokes' bounding box. Card images are drawn into their image areas,
     * strokes on top; the crop covers exactly the requested region.
     */
    async rasterizeSelection(region: Rect | null, strokes: Point[][] = []): Promise<Uint8Array> {
        let crop: Rect;
        if (region) {
            if (region.w <= 0 || region.h <= 0) {
                throw new EmptySelection("zero-area marquee");
            }
            crop = region;
        } else {
            const strokeSet = strokes.length ? strokes : this.strokes;
            const points = strokeSet.flat();
            if (points.length === 0) {
                throw new EmptySelection("no strokes to rasterize");
            }
            const xs = points.map((p) => p.x);
            const ys = points.map((p) => p.y);
            const pad = 8;
            crop = {
                x: Math.min(...xs) - pad,
                y: Math.min(...ys) - pad,
                w: Math.max(...xs) - Math.min(...xs) + 2 * pad,
                h: Math.max(...ys) - Math.min(...ys) + 2 * pad,
            };
        }

        const surface = new Raster(CANVAS_W, CANVAS_H);
        const scene = this.scene();
        for (const node of scene.nodes) {
            if (!rectsIntersect(node.rect, crop)) continue;
            const imageArea = {
                x: node.rect.x,
                y: node.rect.y,
                w: node.rect.w,
                h: node.rect.h * 0.7,
            };
            const raster = await this.assetRaster(node.card.image.asset_id);
            surface.drawImage(raster, imageArea.x, imageArea.y, imageArea.w, imageArea.h);
            // story text area rendered as a light band (glyphs are host-drawn)
            surface.fillRect(
                node.rect.x,
                node.rect.y + imageArea.h,
                node.rect.w,
                node.rect.h - imageArea.h,
                [245, 245, 240, 255],
            );
        }
        for (const stroke of [...scene.strokes, ...strokes]) {
            surface.drawPolyline(stroke, SKETCH_COLOR, 3);
        }
        const clipped = surface.crop(
            Math.round(crop.x),
            Math.round(crop.y),
            Math.round(crop.w),
            Math.round(crop.h),
        );
        return clipped.toPng();
    }
}

function clampToRegion(p: Point, node: Rect, modality: "image" | "text"): Point {
    // Points exactly on the image/text boundary belong to both regions, so
    // clamp strictly inside the chosen one or the re-route stays ambiguous.
    const boundary = node.y + node.h * 0.7;
    const inset = 1;
    if (modality === "image") {
        return {
            x: Math.min(Math.max(p.x, node.x), node.x + node.w),
            y: Math.min(Math.max(p.y, node.y), boundary - inset),
        };
    }
    return {
        x: Math.min(Math.max(p.x, node.x), node.x + node.w),
        y: Math.min(Math.max(p.y, boundary + inset), node.y + node.h),
    };
}
