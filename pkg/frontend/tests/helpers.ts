import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import type { ApiLogEntry } from "../src/api.js";

// Compiled tests live in dist-test/tests/; the fixture stays at the
// frontend root.
export function loadFixtureLog(): ApiLogEntry[] {
  const path = fileURLToPath(new URL("../../fixtures/recorded_log.json", import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as ApiLogEntry[];
}

// Fetch stand-in that replays recorded responses by method + path (+ body
// for POSTs, ignoring the request id which the client regenerates).
export function replayFetch(log: ApiLogEntry[]): (url: string, init?: RequestInit) => Promise<Response> {
  return async (url: string, init?: RequestInit) => {
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://localhost");
    const want = parsed.pathname;
    for (const entry of log) {
      if (entry.method !== method) continue;
      const entryPath = entry.path.split("?")[0];
      if (entryPath !== want) continue;
      if (method === "GET") {
        const logged = new URLSearchParams(entry.path.split("?")[1] ?? "");
        const asked = parsed.searchParams;
        logged.delete("id");
        const askedCopy = new URLSearchParams(asked);
        askedCopy.delete("id");
        logged.sort();
        askedCopy.sort();
        if (logged.toString() !== askedCopy.toString()) continue;
      } else {
        const loggedBody = { ...(entry.body as Record<string, unknown>) };
        const askedBody = JSON.parse(String(init?.body ?? "{}")) as Record<string, unknown>;
        delete loggedBody.id;
        delete askedBody.id;
        if (JSON.stringify(loggedBody) !== JSON.stringify(askedBody)) continue;
      }
      return jsonResponse(entry.response);
    }
    throw new Error(`no recorded exchange for ${method} ${url}`);
  };
}

export function jsonResponse(payload: unknown): Response {
  return {
    ok: true,
    status: 200,
    json: async () => payload,
  } as unknown as Response;
}

export function refusingFetch(): (url: string, init?: RequestInit) => Promise<Response> {
  return async (url: string) => {
    throw new Error(`network disabled: ${url}`);
  };
}
