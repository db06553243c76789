export { ApiClient, ApiError, type CardsReply, type PlacementBody } from "./api.js";
export { CanvasApp, EmptySelection as AppEmptySelection, type Scene, type Tool } from "./app.js";
export { DEFAULT_LAYOUT, TextPane, wrapLines, type TextLayout } from "./editor.js";
export {
    CLOSE_EPSILON,
    EmptySelection,
    OpenPath,
    cardRegions,
    closePath,
    isClosed,
    routeLasso,
    type LassoRouting,
} from "./lasso.js";
export { Raster, pngToBase64, type RGBA } from "./raster.js";
export { SessionStoreFront, type PendingPlaceholder } from "./store.js";
export * from "./types.js";
