/** Server-mirroring session store.
 *
 * The server is the single source of truth: every action is a thin API call
 * followed by a fresh GET of the session view, so local state never diverges.
 * In-flight generations render as pending placeholders keyed by request id;
 * a reply whose placeholder is gone (superseded or its target card deleted)
 * is dropped instead of applied.
 */

import { ApiClient, type CardsReply, type PlacementBody } from "./api.js";
import type {
    Card,
    FilterKind,
    GenerationMode,
    IntentBody,
    ObjectKind,
    SessionView,
    Voice,
} from "./types.js";

export interface PendingPlaceholder {
    requestId: number;
    kind: string;
    sourceCardId?: string;
}

const SESSION_KEY = "storycanvas.session";

function sessionScope(): Storage | null {
    // Browser session scope mirrors "clears on tab close"; absent in Node.
    try {
        return typeof sessionStorage === "undefined" ? null : sessionStorage;
    } catch {
        return null;
    }
}

export class SessionStoreFront {
    view: SessionView | null = null;
    pending: Map<number, PendingPlaceholder> = new Map();
    private nextRequestId = 1;
    private droppedReplies = 0;

    constructor(readonly api: ApiClient) {}

    get sessionId(): string {
        if (!this.view) throw new Error("no active session");
        return this.view.id;
    }

    cardIds(): string[] {
        return this.view ? Object.keys(this.view.cards).sort() : [];
    }

    card(cardId: string): Card {
        const card = this.view?.cards[cardId];
        if (!card) throw new Error(`unknown card in store: ${cardId}`);
        return card;
    }

    get staleRepliesDropped(): number {
        return this.droppedReplies;
    }

    async createSession(context: { theme?: string; outline?: string; draft_text?: string } = {}) {
        this.view = await this.api.createSession(context);
        sessionScope()?.setItem(SESSION_KEY, this.view.id);
        return this.view;
    }

    async attach(sessionId: string) {
        this.view = await this.api.getSession(sessionId);
        sessionScope()?.setItem(SESSION_KEY, this.view.id);
        return this.view;
    }

    /** Restore the tab-scoped session if one is stored. */
    async resume(): Promise<SessionView | null> {
        const stored = sessionScope()?.getItem(SESSION_KEY);
        if (!stored) return null;
        try {
            return await this.attach(stored);
        } catch {
            sessionScope()?.removeItem(SESSION_KEY);
            return null;
        }
    }

    async sync(): Promise<SessionView> {
        this.view = await this.api.getSession(this.sessionId);
        return this.view;
    }

    private openPlaceholder(kind: string, sourceCardId?: string): number {
        const requestId = this.nextRequestId++;
        this.pending.set(requestId, { requestId, kind, sourceCardId });
        return requestId;
    }

    /**
     * Finish a generation request: apply by re-syncing unless the placeholder
     * was invalidated while the call was in flight.
     */
    private async settle(requestId: number, reply: Promise<CardsReply>): Promise<Card[]> {
        try {
            const result = await reply;
            if (!this.pending.has(requestId)) {
                this.droppedReplies++;
                return [];
            }
            await this.sync();
            return result.cards;
        } finally {
            this.pending.delete(requestId);
        }
    }

    /** Invalidate placeholders sourced from a card that no longer exists. */
    invalidatePendingFor(cardId: string): void {
        for (const [requestId, placeholder] of [...this.pending]) {
            if (placeholder.sourceCardId === cardId) {
                this.pending.delete(requestId);
            }
        }
    }

    generate(mode: GenerationMode, intent: IntentBody): Promise<Card[]> {
        const requestId = this.openPlaceholder(mode);
        return this.settle(requestId, this.api.generate(this.sessionId, mode, intent));
    }

    lassoText(cardId: string, start: number, end: number): Promise<Card[]> {
        const requestId = this.openPlaceholder("lasso", cardId);
        return this.settle(requestId, this.api.lassoText(this.sessionId, cardId, start, end));
    }

    lassoImage(cardId: string, polygon: [number, number][]): Promise<Card[]> {
        const requestId = this.openPlaceholder("lasso", cardId);
        return this.settle(requestId, this.api.lassoImage(this.sessionId, cardId, polygon));
    }

    collage(placements: PlacementBody[], intentText?: string, initiatorCardId?: string): Promise<Card[]> {
        const requestId = this.openPlaceholder("collage", initiatorCardId);
        return this.settle(
            requestId,
            this.api.collage(this.sessionId, placements, intentText, initiatorCardId),
        );
    }

    applyFilter(cardId: string, kind: FilterKind): Promise<Card[]> {
        const requestId = this.openPlaceholder("filter", cardId);
        return this.settle(requestId, this.api.applyFilter(this.sessionId, cardId, kind));
    }

    shiftPerspective(cardId: string, target: Voice): Promise<Card[]> {
        const requestId = this.openPlaceholder("perspective_shift", cardId);
        return this.settle(requestId, this.api.shiftPerspective(this.sessionId, cardId, target));
    }

    async addHighlight(body: {
        card_id: string;
        start: number;
        end: number;
        object?: { name: string; kind: ObjectKind };
        comment?: string;
    }) {
        await this.api.addHighlight(body);
        return this.sync();
    }

    async editStory(cardId: string, position: number, deleteCount: number, insert: string) {
        const result = await this.api.editStory(cardId, position, deleteCount, insert);
        await this.sync();
        return result;
    }

    async deleteCard(cardId: string) {
        const result = await this.api.deleteCard(this.sessionId, cardId);
        this.invalidatePendingFor(cardId);
        await this.sync();
        return result;
    }

    async moveCard(cardId: string, layout: { x: number; y: number; w: number; h: number }) {
        await this.api.setLayout(this.sessionId, cardId, layout);
        return this.sync();
    }

    async setDraftText(draft: string) {
        await this.api.setContext(this.sessionId, { draft_text: draft });
        return this.sync();
    }
}
