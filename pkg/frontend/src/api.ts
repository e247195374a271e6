import type { DocumentShape, KnowledgeMap } from "./types.js";

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  if (!response.ok) {
    throw new Error(`${url}: HTTP ${response.status}`);
  }
  return response.json() as Promise<T>;
}

export function fetchMap(base = ""): Promise<KnowledgeMap> {
  return getJson<KnowledgeMap>(`${base}/map`);
}

export function fetchDocument(docId: string, base = ""): Promise<DocumentShape> {
  return getJson<DocumentShape>(`${base}/documents/${encodeURIComponent(docId)}`);
}

export class SupersededError extends Error {
  constructor() {
    super("superseded by a newer search");
    this.name = "SupersededError";
  }
}

/** Issues /search requests, aborting any still-running earlier one. */
export class SearchClient {
  private controller: AbortController | null = null;

  constructor(private readonly base = "") {}

  async search(query: string): Promise<string[]> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await getJson<string[]>(
        `${this.base}/search?q=${encodeURIComponent(query)}`,
        controller.signal,
      );
    } catch (err) {
      if (controller.signal.aborted) throw new SupersededError();
      throw err;
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }
}
