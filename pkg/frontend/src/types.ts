/** Wire types mirrored from the session-service HTTP API. */

export type Voice = "first" | "second" | "third";
export type ObjectKind = "character" | "object" | "scene";
export type FilterKind = "warm" | "calm" | "dramatic" | "dreamy" | "monochrome";
export type InstrumentKind =
    | "exact_craft"
    | "creative_spark"
    | "lasso"
    | "collage"
    | "filter"
    | "perspective_shift";
export type GenerationMode = "exact_craft" | "creative_spark";

export interface ImageAssetRef {
    asset_id: string;
    format: string;
    width: number;
    height: number;
}

export interface NarrativeObject {
    name: string;
    kind: ObjectKind;
}

export interface Card {
    id: string;
    story: string;
    image: ImageAssetRef;
    objects: NarrativeObject[];
    voice: Voice;
    filter: FilterKind | null;
    created_at: number;
    origin: InstrumentKind;
}

export interface ProvenanceEdgeWire {
    parent: string;
    child: string;
    kind: InstrumentKind;
}

export interface GraphWire {
    nodes: string[];
    edges: ProvenanceEdgeWire[];
    meta: Record<string, Record<string, string>>;
}

export interface LayoutWire {
    x: number;
    y: number;
    w: number;
    h: number;
}

export interface AnchorWire {
    card_id: string;
    start: number;
    end: number;
    snapshot: string;
}

export interface HighlightWire {
    id: string;
    anchor: AnchorWire;
    object: NarrativeObject | null;
    comment: string | null;
}

export interface GlobalContextWire {
    theme: string;
    outline: string;
    draft_text: string;
}

export interface SessionView {
    id: string;
    global_context: GlobalContextWire;
    cards: Record<string, Card>;
    graph: GraphWire;
    canvas: Record<string, LayoutWire>;
    highlights: HighlightWire[];
    event_count: number;
}

export interface IntentBody {
    typed_text?: string;
    screenshot_png_b64?: string;
    sketch_strokes?: number[][][];
    reference_cards?: string[];
    global_theme?: string;
    prior_text?: string;
}

export interface SegmentWire {
    card_id: string;
    snapshot: string;
    highlight_id: string;
}

export interface CommentWire {
    card_id: string;
    text: string;
    highlight_id: string;
}

export interface ClusterEntryWire {
    name: string;
    kind: ObjectKind;
    card_refs: string[];
    segments: SegmentWire[];
    comments: CommentWire[];
}

export type ClustersView = Record<ObjectKind, Record<string, ClusterEntryWire>>;

export interface SummaryWire {
    settings: string;
    description: string;
    plot: string;
    object: NarrativeObject;
    source_highlight_ids: string[];
}

export interface MetricsWire {
    directions: number;
    mean_branches: number;
    mean_depth: number;
}

export interface ApiErrorBody {
    code: string;
    message: string;
    detail: unknown;
}

export interface Point {
    x: number;
    y: number;
}

export interface Rect {
    x: number;
    y: number;
    w: number;
    h: number;
}

export function rectContains(rect: Rect, p: Point): boolean {
    return p.x >= rect.x && p.x <= rect.x + rect.w && p.y >= rect.y && p.y <= rect.y + rect.h;
}

export function rectsIntersect(a: Rect, b: Rect): boolean {
    return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}
