// Canned-response server + page skeleton shared by the tests. The fixtures
// are generated by the Python implementation (see fixtures/regenerate.py),
// so these tests hold the client to real server output.
import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { vi } from "vitest";

import type { KnowledgeMap } from "../src/types.js";
import mapFixture from "./fixtures/map.json";
import ordersFixture from "./fixtures/orders.json";
import searchesFixture from "./fixtures/searches.json";

export const fixtureMap = mapFixture as unknown as KnowledgeMap;
export const cannedSearches = searchesFixture as Record<string, string[]>;
export const cannedOrders = ordersFixture as Record<string, string[]>;

function jsonResponse(payload: unknown, status = 200) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(JSON.stringify(payload)),
  };
}

function abortError(): Error {
  return new DOMException("aborted", "AbortError");
}

function delay(ms: number, signal?: AbortSignal): Promise<void> {
  return new Promise((resolve, reject) => {
    const timer = setTimeout(resolve, ms);
    signal?.addEventListener(
      "abort",
      () => {
        clearTimeout(timer);
        reject(abortError());
      },
      { once: true },
    );
  });
}

export interface ServerBehavior {
  // per-query artificial latency, for cancellation tests
  searchDelayMs?: Record<string, number>;
  // force every /search to fail with this HTTP status
  searchStatus?: number;
}

export function installFixtureServer(behavior: ServerBehavior = {}) {
  const requests: string[] = [];
  const impl = async (input: unknown, init?: { signal?: AbortSignal }) => {
    const url = new URL(String(input), "http://fixture.test");
    requests.push(url.pathname + url.search);
    const signal = init?.signal;
    if (signal?.aborted) throw abortError();

    if (url.pathname === "/map") return jsonResponse(fixtureMap);

    if (url.pathname === "/search") {
      const q = url.searchParams.get("q") ?? "";
      const wait = behavior.searchDelayMs?.[q] ?? 0;
      if (wait > 0) await delay(wait, signal);
      if (behavior.searchStatus) return jsonResponse({ error: "boom" }, behavior.searchStatus);
      const ids = cannedSearches[q];
      if (ids === undefined) throw new Error(`no canned response for ${JSON.stringify(q)}`);
      return jsonResponse(ids);
    }

    if (url.pathname.startsWith("/documents/")) {
      const id = decodeURIComponent(url.pathname.slice("/documents/".length));
      const doc = fixtureMap.documents.find((d) => d.doc_id === id);
      return doc ? jsonResponse(doc) : jsonResponse({ error: "unknown document" }, 404);
    }
    return jsonResponse({ error: "not found" }, 404);
  };
  const fetchStub = vi.fn(impl);
  (globalThis as Record<string, unknown>).fetch = fetchStub;
  return { requests, fetchStub };
}

/** Mount the real page skeleton so boot() finds its elements. */
export function mountApp(): void {
  // vitest runs with cwd at the frontend package root
  const html = readFileSync(resolve(process.cwd(), "index.html"), "utf-8");
  const body = /<body>([\s\S]*)<\/body>/.exec(html);
  if (!body) throw new Error("index.html has no body");
  document.body.innerHTML = body[1] ?? "";
}
