export function initialState() {
    return {
        mode: { kind: "overview" },
        filter: { query: "", resultIds: null, pending: false, stale: false },
        sortKey: "readers",
    };
}
function popMode(mode) {
    switch (mode.kind) {
        case "doc_detail":
            return mode.returnTo;
        case "area_zoom":
            return { kind: "overview" };
        case "overview":
            return mode;
    }
}
export function reduce(state, action) {
    switch (action.type) {
        case "zoom_area":
            // filter survives zoom transitions untouched
            return { ...state, mode: { kind: "area_zoom", areaId: action.areaId } };
        case "open_doc":
            return {
                ...state,
                mode: { kind: "doc_detail", docId: action.docId, returnTo: state.mode },
            };
        case "back":
            return { ...state, mode: popMode(state.mode) };
        case "set_query":
            return {
                ...state,
                filter: { ...state.filter, query: action.query, pending: true },
            };
        case "search_results":
            // a response for anything but the current query is superseded; drop it
            if (action.query !== state.filter.query)
                return state;
            return {
                ...state,
                filter: {
                    query: action.query,
                    resultIds: action.ids,
                    pending: false,
                    stale: false,
                },
            };
        case "search_failed":
            if (action.query !== state.filter.query)
                return state;
            // keep showing the previous result set but flag it
            return { ...state, filter: { ...state.filter, pending: false, stale: true } };
        case "set_sort":
            return { ...state, sortKey: action.key };
    }
}
export function visibleIds(state) {
    return state.filter.resultIds === null ? null : new Set(state.filter.resultIds);
}
