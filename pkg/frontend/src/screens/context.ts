import { ApiClient, ApiError } from "../api.js";
import { banner } from "../dom.js";

export interface ScreenContext {
  api: ApiClient;
  term: string;
  hrUrl: string;
  container: HTMLElement;
  show(screenId: string): Promise<void>;
}

export type Screen = (ctx: ScreenContext) => Promise<void>;

// every error banner takes its text from the shared error-code table and
// appends the server's detail (which carries specifics like unit codes)
export function errorBanner(ctx: ScreenContext, err: unknown): HTMLElement {
  if (err instanceof ApiError) {
    const text = ctx.api.bannerText(err.code, err.detail);
    const detail = err.detail && err.detail !== text ? ` (${err.detail})` : "";
    const node = banner("error", `${text}${detail}`);
    node.dataset.code = err.code;
    return node;
  }
  return banner("error", String(err));
}
