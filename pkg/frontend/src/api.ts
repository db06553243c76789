/** Thin fetch client for the session-service HTTP API. */

import type {
    Card,
    ClustersView,
    FilterKind,
    GenerationMode,
    IntentBody,
    MetricsWire,
    ObjectKind,
    SessionView,
    SummaryWire,
    Voice,
} from "./types.js";

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly code: string,
        message: string,
        public readonly detail: unknown = null,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

export interface CardsReply {
    cards: Card[];
}

export interface PlacementBody {
    source:
        | { type: "crop"; card_id: string; rect: { left: number; top: number; width: number; height: number } }
        | { type: "sketch"; strokes: number[][][] }
        | { type: "note"; text: string };
    position: { x: number; y: number };
    size: { w: number; h: number };
}

export class ApiClient {
    constructor(
        private readonly baseUrl: string,
        private readonly fetchFn: typeof fetch = fetch,
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, {
            method,
            headers: body === undefined ? {} : { "content-type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        if (!response.ok) {
            let code = "http_error";
            let message = `${method} ${path} -> ${response.status}`;
            let detail: unknown = null;
            try {
                const parsed = (await response.json()) as { code?: string; message?: string; detail?: unknown };
                code = parsed.code ?? code;
                message = parsed.message ?? message;
                detail = parsed.detail ?? null;
            } catch {
                // non-JSON error body; keep defaults
            }
            throw new ApiError(response.status, code, message, detail);
        }
        if (response.status === 204) {
            return undefined as T;
        }
        return (await response.json()) as T;
    }

    createSession(context: { theme?: string; outline?: string; draft_text?: string } = {}): Promise<SessionView> {
        return this.request("POST", "/sessions", context);
    }

    getSession(sessionId: string): Promise<SessionView> {
        return this.request("GET", `/sessions/${sessionId}`);
    }

    deleteSession(sessionId: string): Promise<void> {
        return this.request("DELETE", `/sessions/${sessionId}`);
    }

    generate(sessionId: string, mode: GenerationMode, intent: IntentBody): Promise<CardsReply> {
        return this.request("POST", `/sessions/${sessionId}/generate`, { mode, intent });
    }

    lassoText(sessionId: string, cardId: string, start: number, end: number): Promise<CardsReply> {
        return this.request("POST", `/sessions/${sessionId}/cards/${cardId}/lasso`, {
            text_range: { start, end },
        });
    }

    lassoImage(sessionId: string, cardId: string, polygon: [number, number][]): Promise<CardsReply> {
        return this.request("POST", `/sessions/${sessionId}/cards/${cardId}/lasso`, { polygon });
    }

    collage(sessionId: string, placements: PlacementBody[], intentText?: string, initiatorCardId?: string): Promise<CardsReply> {
        const body = { frame: { placements }, intent_text: intentText ?? null };
        const path = initiatorCardId
            ? `/sessions/${sessionId}/cards/${initiatorCardId}/collage`
            : `/sessions/${sessionId}/collage`;
        return this.request("POST", path, body);
    }

    applyFilter(sessionId: string, cardId: string, kind: FilterKind): Promise<CardsReply> {
        return this.request("POST", `/sessions/${sessionId}/cards/${cardId}/filter`, { kind });
    }

    shiftPerspective(sessionId: string, cardId: string, target: Voice): Promise<CardsReply> {
        return this.request("POST", `/sessions/${sessionId}/cards/${cardId}/perspective`, { target });
    }

    editStory(cardId: string, position: number, deleteCount: number, insert: string) {
        return this.request<{ card: Card; rebased: string[]; invalidated: string[] }>(
            "PATCH",
            `/cards/${cardId}/story`,
            { position, delete: deleteCount, insert },
        );
    }

    addHighlight(body: {
        card_id: string;
        start: number;
        end: number;
        object?: { name: string; kind: ObjectKind };
        comment?: string;
    }) {
        return this.request<{ highlight: unknown }>("POST", "/highlights", body);
    }

    deleteCard(sessionId: string, cardId: string) {
        return this.request<{ deleted: string; orphaned: string[] }>(
            "DELETE",
            `/sessions/${sessionId}/cards/${cardId}`,
        );
    }

    setLayout(sessionId: string, cardId: string, layout: { x: number; y: number; w: number; h: number }) {
        return this.request("PATCH", `/sessions/${sessionId}/cards/${cardId}/layout`, layout);
    }

    setContext(sessionId: string, context: { theme?: string; outline?: string; draft_text?: string }) {
        return this.request("PATCH", `/sessions/${sessionId}/context`, context);
    }

    clusters(sessionId: string): Promise<ClustersView> {
        return this.request("GET", `/sessions/${sessionId}/clusters`);
    }

    summarize(sessionId: string, kind: ObjectKind, name: string): Promise<SummaryWire> {
        const key = encodeURIComponent(`${kind}:${name}`);
        return this.request("POST", `/sessions/${sessionId}/clusters/${key}/summarize`);
    }

    metrics(sessionId: string): Promise<MetricsWire> {
        return this.request("GET", `/sessions/${sessionId}/metrics`);
    }

    exportSession(sessionId: string): Promise<unknown> {
        return this.request("GET", `/sessions/${sessionId}/export`);
    }

    async fetchAsset(assetId: string): Promise<Uint8Array> {
        const response = await this.fetchFn(`${this.baseUrl}/assets/${encodeURIComponent(assetId)}`);
        if (!response.ok) {
            throw new ApiError(response.status, "unknown_asset", `asset ${assetId} -> ${response.status}`);
        }
        return new Uint8Array(await response.arrayBuffer());
    }
}
