async function getJson(url, signal) {
    const response = await fetch(url, { signal });
    if (!response.ok) {
        throw new Error(`${url}: HTTP ${response.status}`);
    }
    return response.json();
}
export function fetchMap(base = "") {
    return getJson(`${base}/map`);
}
export function fetchDocument(docId, base = "") {
    return getJson(`${base}/documents/${encodeURIComponent(docId)}`);
}
export class SupersededError extends Error {
    constructor() {
        super("superseded by a newer search");
        this.name = "SupersededError";
    }
}
/** Issues /search requests, aborting any still-running earlier one. */
export class SearchClient {
    constructor(base = "") {
        this.base = base;
        this.controller = null;
    }
    async search(query) {
        this.controller?.abort();
        const controller = new AbortController();
        this.controller = controller;
        try {
            return await getJson(`${this.base}/search?q=${encodeURIComponent(query)}`, controller.signal);
        }
        catch (err) {
            if (controller.signal.aborted)
                throw new SupersededError();
            throw err;
        }
        finally {
            if (this.controller === controller)
                this.controller = null;
        }
    }
}
