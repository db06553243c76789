/** Text pane model with a character-position API.
 *
 * Text lassos are resolved through this layout model rather than pixel OCR:
 * a monospace grid (fixed character cell) maps canvas-local points to
 * character offsets exactly, so selections translate to precise [start, end)
 * ranges.
 */

export interface TextLayout {
    charWidth: number;
    lineHeight: number;
    wrapColumns: number;
}

export const DEFAULT_LAYOUT: TextLayout = { charWidth: 7, lineHeight: 14, wrapColumns: 32 };

/** Greedy word wrap; returns [start, end) offsets per visual line. */
export function wrapLines(text: string, columns: number): Array<[number, number]> {
    const lines: Array<[number, number]> = [];
    let lineStart = 0;
    let cursor = 0;
    while (cursor < text.length) {
        if (text[cursor] === "\n") {
            lines.push([lineStart, cursor]);
            lineStart = cursor + 1;
        } else if (cursor - lineStart >= columns) {
            lines.push([lineStart, cursor]);
            lineStart = cursor;
        }
        cursor++;
    }
    lines.push([lineStart, text.length]);
    return lines;
}

export class TextPane {
    constructor(
        public text: string,
        public readonly layout: TextLayout = DEFAULT_LAYOUT,
    ) {}

    lines(): Array<[number, number]> {
        return wrapLines(this.text, this.layout.wrapColumns);
    }

    /** Character offset for a pane-local point, clamped into the text. */
    offsetForPoint(x: number, y: number): number {
        const lines = this.lines();
        const row = Math.min(lines.length - 1, Math.max(0, Math.floor(y / this.layout.lineHeight)));
        const [start, end] = lines[row];
        const column = Math.max(0, Math.round(x / this.layout.charWidth));
        return Math.min(start + column, end);
    }

    /** Range covered by a set of pane-local points (e.g. a lasso path). */
    rangeForPoints(points: { x: number; y: number }[]): { start: number; end: number } {
        const offsets = points.map((p) => this.offsetForPoint(p.x, p.y));
        return { start: Math.min(...offsets), end: Math.max(...offsets) };
    }
}
