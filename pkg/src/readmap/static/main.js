import { fetchMap, SearchClient, SupersededError } from "./api.js";
import { initialState, reduce } from "./state.js";
import { renderPanel, renderScene } from "./render.js";
import { SORT_KEYS } from "./sort.js";
function mustGet(selector) {
    const node = document.querySelector(selector);
    if (!node)
        throw new Error(`missing element: ${selector}`);
    return node;
}
export class Explorer {
    constructor(map, svg, panel, status, base = "") {
        this.map = map;
        this.svg = svg;
        this.panel = panel;
        this.status = status;
        this.state = initialState();
        this.searches = new SearchClient(base);
    }
    dispatch(action) {
        this.state = reduce(this.state, action);
        this.render();
    }
    /** set_query plus the async round trip; superseded responses are dropped. */
    runSearch(query) {
        this.dispatch({ type: "set_query", query });
        return this.searches.search(query).then((ids) => this.dispatch({ type: "search_results", query, ids }), (err) => {
            if (err instanceof SupersededError)
                return;
            this.dispatch({ type: "search_failed", query });
        });
    }
    activate(target) {
        const docNode = target.closest("[data-doc-id]");
        if (docNode) {
            const docId = docNode instanceof HTMLElement
                ? docNode.dataset.docId
                : docNode.getAttribute("data-doc-id");
            if (docId)
                this.dispatch({ type: "open_doc", docId });
            return;
        }
        const areaNode = target.closest("[data-area-id]");
        if (areaNode) {
            const raw = areaNode.getAttribute("data-area-id");
            if (raw !== null)
                this.dispatch({ type: "zoom_area", areaId: Number(raw) });
        }
    }
    render() {
        renderScene(this.svg, this.map, this.state);
        renderPanel(this.panel, this.map, this.state);
        const { filter, mode } = this.state;
        this.status.classList.toggle("stale", filter.stale);
        this.status.textContent = filter.stale
            ? "search unavailable; showing previous results"
            : filter.pending
                ? "searching…"
                : "";
        document.body.dataset.mode = mode.kind;
    }
}
function wireEvents(explorer, root) {
    root.addEventListener("click", (event) => {
        if (event.target instanceof Element)
            explorer.activate(event.target);
    });
    root.addEventListener("keydown", (event) => {
        if (event.key !== "Enter" && event.key !== " ")
            return;
        if (event.target instanceof Element && event.target.closest("[data-doc-id], [data-area-id]")) {
            event.preventDefault();
            explorer.activate(event.target);
        }
    });
    const query = mustGet("#query");
    query.addEventListener("input", () => {
        void explorer.runSearch(query.value);
    });
    const sort = mustGet("#sort");
    sort.addEventListener("change", () => {
        const key = sort.value;
        if (SORT_KEYS.includes(key)) {
            explorer.dispatch({ type: "set_sort", key });
        }
    });
    mustGet("#back").addEventListener("click", () => {
        explorer.dispatch({ type: "back" });
    });
    document.addEventListener("keydown", (event) => {
        if (event.key === "Escape")
            explorer.dispatch({ type: "back" });
    });
}
export async function boot(base = "") {
    const svg = mustGet("#scene");
    const panel = mustGet("#panel");
    const status = mustGet("#status");
    try {
        const map = await fetchMap(base);
        const explorer = new Explorer(map, svg, panel, status, base);
        wireEvents(explorer, mustGet("#app"));
        explorer.render();
        return explorer;
    }
    catch (err) {
        status.classList.add("stale");
        status.textContent = "failed to load map";
        throw err;
    }
}
// in tests the document is bare; boot only on the real page
if (document.querySelector("#app")) {
    void boot();
}
