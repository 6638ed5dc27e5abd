import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export function fixture<T>(name: string): T {
  const here = dirname(fileURLToPath(import.meta.url));
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

/** Install a fetch stub that serves the fixture set like the real API. */
export function stubFetch(routes: Record<string, unknown>): void {
  globalThis.fetch = (async (input: RequestInfo | URL) => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    if (path in routes) {
      return new Response(JSON.stringify(routes[path]), { status: 200 });
    }
    return new Response(
      JSON.stringify({ code: "unknown_tick", message: `no fixture for ${path}` }),
      { status: 404 },
    );
  }) as typeof fetch;
}
