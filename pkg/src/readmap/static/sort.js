// Must order exactly like the server's list endpoint: plain code-point
// comparison on lowercased strings, not locale collation.
function cmp(a, b) {
    return a < b ? -1 : a > b ? 1 : 0;
}
const COMPARATORS = {
    title: (a, b) => cmp(a.title.toLowerCase(), b.title.toLowerCase()),
    area: (a, b) => cmp(a.area_id, b.area_id) || cmp(b.readers, a.readers),
    readers: (a, b) => cmp(b.readers, a.readers) || cmp(a.doc_id, b.doc_id),
};
export function sortDocuments(docs, key) {
    return [...docs].sort(COMPARATORS[key]);
}
export const SORT_KEYS = ["title", "area", "readers"];
