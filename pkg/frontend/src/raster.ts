/** Software RGBA raster used for canvas rasterization outside the DOM.
 *
 * In a browser build the same drawing calls back onto an HTMLCanvas 2D
 * context; this buffer implementation keeps rasterization testable and
 * byte-deterministic in Node.
 */

import { PNG } from "pngjs";

export type RGBA = [number, number, number, number];

export class Raster {
    readonly width: number;
    readonly height: number;
    readonly data: Uint8Array; // RGBA, row-major

    constructor(width: number, height: number, fill: RGBA = [255, 255, 255, 255]) {
        if (width <= 0 || height <= 0) {
            throw new Error(`raster dimensions must be positive, got ${width}x${height}`);
        }
        this.width = width;
        this.height = height;
        this.data = new Uint8Array(width * height * 4);
        this.fillRect(0, 0, width, height, fill);
    }

    static fromPng(bytes: Uint8Array): Raster {
        const png = PNG.sync.read(Buffer.from(bytes));
        const raster = new Raster(png.width, png.height);
        raster.data.set(png.data);
        return raster;
    }

    toPng(): Uint8Array {
        const png = new PNG({ width: this.width, height: this.height });
        png.data = Buffer.from(this.data);
        return new Uint8Array(PNG.sync.write(png));
    }

    getPixel(x: number, y: number): RGBA {
        const i = (y * this.width + x) * 4;
        return [this.data[i], this.data[i + 1], this.data[i + 2], this.data[i + 3]];
    }

    setPixel(x: number, y: number, [r, g, b, a]: RGBA): void {
        if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
        const i = (y * this.width + x) * 4;
        this.data[i] = r;
        this.data[i + 1] = g;
        this.data[i + 2] = b;
        this.data[i + 3] = a;
    }

    fillRect(x: number, y: number, w: number, h: number, color: RGBA): void {
        const x0 = Math.max(0, Math.floor(x));
        const y0 = Math.max(0, Math.floor(y));
        const x1 = Math.min(this.width, Math.ceil(x + w));
        const y1 = Math.min(this.height, Math.ceil(y + h));
        for (let py = y0; py < y1; py++) {
            for (let px = x0; px < x1; px++) {
                this.setPixel(px, py, color);
            }
        }
    }

    /** Nearest-neighbor blit of a source raster into a destination rect. */
    drawImage(source: Raster, dx: number, dy: number, dw: number, dh: number): void {
        const x0 = Math.max(0, Math.floor(dx));
        const y0 = Math.max(0, Math.floor(dy));
        const x1 = Math.min(this.width, Math.ceil(dx + dw));
        const y1 = Math.min(this.height, Math.ceil(dy + dh));
        for (let py = y0; py < y1; py++) {
            for (let px = x0; px < x1; px++) {
                const sx = Math.min(
                    source.width - 1,
                    Math.max(0, Math.floor(((px - dx) / dw) * source.width)),
                );
                const sy = Math.min(
                    source.height - 1,
                    Math.max(0, Math.floor(((py - dy) / dh) * source.height)),
                );
                this.setPixel(px, py, source.getPixel(sx, sy));
            }
        }
    }

    /** Bresenham polyline stroke with a square brush. */
    drawPolyline(points: { x: number; y: number }[], color: RGBA, width = 2): void {
        const radius = Math.max(0, Math.floor(width / 2));
        const stamp = (cx: number, cy: number) => {
            for (let oy = -radius; oy <= radius; oy++) {
                for (let ox = -radius; ox <= radius; ox++) {
                    this.setPixel(Math.round(cx) + ox, Math.round(cy) + oy, color);
                }
            }
        };
        if (points.length === 1) {
            stamp(points[0].x, points[0].y);
            return;
        }
        for (let i = 0; i + 1 < points.length; i++) {
            let x0 = Math.round(points[i].x);
            let y0 = Math.round(points[i].y);
            const x1 = Math.round(points[i + 1].x);
            const y1 = Math.round(points[i + 1].y);
            const dx = Math.abs(x1 - x0);
            const dy = -Math.abs(y1 - y0);
            const sx = x0 < x1 ? 1 : -1;
            const sy = y0 < y1 ? 1 : -1;
            let err = dx + dy;
            for (;;) {
                stamp(x0, y0);
                if (x0 === x1 && y0 === y1) break;
                const e2 = 2 * err;
                if (e2 >= dy) {
                    err += dy;
                    x0 += sx;
                }
                if (e2 <= dx) {
                    err += dx;
                    y0 += sy;
                }
            }
        }
    }

    crop(x: number, y: number, w: number, h: number): Raster {
        const out = new Raster(w, h, [0, 0, 0, 0]);
        for (let py = 0; py < h; py++) {
            for (let px = 0; px < w; px++) {
                const sx = x + px;
                const sy = y + py;
                if (sx >= 0 && sy >= 0 && sx < this.width && sy < this.height) {
                    out.setPixel(px, py, this.getPixel(sx, sy));
                }
            }
        }
        return out;
    }

    /** Fraction of pixels exactly matching a color (alpha included). */
    matchRatio([r, g, b, a]: RGBA): number {
        let matches = 0;
        const total = this.width * this.height;
        for (let i = 0; i < total * 4; i += 4) {
            if (
                this.data[i] === r &&
                this.data[i + 1] === g &&
                this.data[i + 2] === b &&
                this.data[i + 3] === a
            ) {
                matches++;
            }
        }
        return matches / total;
    }
}

export function pngToBase64(bytes: Uint8Array): string {
    return Buffer.from(bytes).toString("base64");
}
