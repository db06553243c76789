/** Lasso gesture interpretation.
 *
 * One gesture, two modalities: a closed path over a card's image maps to an
 * image-space polygon; over its story text it maps to a character range. A
 * path touching both regions is ambiguous and the writer must choose.
 */

import { TextPane } from "./editor.js";
import type { Card, Point, Rect } from "./types.js";
import { rectContains } from "./types.js";

export class EmptySelection extends Error {
    constructor(message = "selection is empty") {
        super(message);
        this.name = "EmptySelection";
    }
}

export class OpenPath extends Error {
    constructor(message = "lasso path must be closed before submission") {
        super(message);
        this.name = "OpenPath";
    }
}

export interface CardRegions {
    /** Card node rect on the canvas. */
    node: Rect;
    /** Image area (canvas coordinates); upper part of the node. */
    image: Rect;
    /** Story text area (canvas coordinates); lower part of the node. */
    text: Rect;
}

/** Fixed card geometry: image on top (70% of height), story text below. */
export function cardRegions(node: Rect): CardRegions {
    const imageHeight = node.h * 0.7;
    return {
        node,
        image: { x: node.x, y: node.y, w: node.w, h: imageHeight },
        text: { x: node.x, y: node.y + imageHeight, w: node.w, h: node.h - imageHeight },
    };
}

export type LassoRouting =
    | { kind: "image"; cardId: string; polygon: [number, number][] }
    | { kind: "text"; cardId: string; start: number; end: number }
    | { kind: "ambiguous"; cardId: string; choices: ["image", "text"] };

export const CLOSE_EPSILON = 12;

export function isClosed(path: Point[]): boolean {
    if (path.length < 3) return false;
    const first = path[0];
    const last = path[path.length - 1];
    return Math.hypot(first.x - last.x, first.y - last.y) <= CLOSE_EPSILON;
}

/** Close an almost-closed path by appending the first point. */
export function closePath(path: Point[]): Point[] {
    if (!isClosed(path)) {
        throw new OpenPath();
    }
    const first = path[0];
    const last = path[path.length - 1];
    return first.x === last.x && first.y === last.y ? path : [...path, { x: first.x, y: first.y }];
}

/**
 * Route a closed lasso path drawn over a card to the matching API call shape.
 *
 * Image polygons are expressed in image pixel coordinates, scaled from the
 * on-canvas image rect to the card's actual image dimensions and clamped to
 * the image bounds. Text ranges come from the editor's position API.
 */
export function routeLasso(path: Point[], card: Card, node: Rect): LassoRouting {
    if (path.length === 0) {
        throw new EmptySelection();
    }
    const closed = closePath(path);
    const regions = cardRegions(node);
    const inImage = closed.some((p) => rectContains(regions.image, p));
    const inText = closed.some((p) => rectContains(regions.text, p));

    if (inImage && inText) {
        return { kind: "ambiguous", cardId: card.id, choices: ["image", "text"] };
    }
    if (inImage) {
        const polygon = closed.map<[number, number]>((p) => {
            const fx = (p.x - regions.image.x) / regions.image.w;
            const fy = (p.y - regions.image.y) / regions.image.h;
            return [
                Math.min(card.image.width, Math.max(0, fx * card.image.width)),
                Math.min(card.image.height, Math.max(0, fy * card.image.height)),
            ];
        });
        return { kind: "image", cardId: card.id, polygon };
    }
    if (inText) {
        const pane = new TextPane(card.story);
        const local = closed.map((p) => ({ x: p.x - regions.text.x, y: p.y - regions.text.y }));
        const { start, end } = pane.rangeForPoints(local);
        if (start === end) {
            throw new EmptySelection("lasso covers no characters");
        }
        return { kind: "text", cardId: card.id, start, end };
    }
    throw new EmptySelection("lasso path misses the card");
}
