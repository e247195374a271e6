import type { DocumentShape, SortKey } from "./types.js";

// Must order exactly like the server's list endpoint: plain code-point
// comparison on lowercased strings, not locale collation.
function cmp<T extends string | number>(a: T, b: T): number {
  return a < b ? -1 : a > b ? 1 : 0;
}

const COMPARATORS: Record<SortKey, (a: DocumentShape, b: DocumentShape) => number> = {
  title: (a, b) => cmp(a.title.toLowerCase(), b.title.toLowerCase()),
  area: (a, b) => cmp(a.area_id, b.area_id) || cmp(b.readers, a.readers),
  readers: (a, b) => cmp(b.readers, a.readers) || cmp(a.doc_id, b.doc_id),
};

export function sortDocuments(docs: readonly DocumentShape[], key: SortKey): DocumentShape[] {
  return [...docs].sort(COMPARATORS[key]);
}

export const SORT_KEYS: readonly SortKey[] = ["title", "area", "readers"];
