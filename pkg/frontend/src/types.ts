// Shapes mirror the served map file; the client never derives geometry.

export interface ProvenanceInfo {
  snapshot_date: string | null;
  threshold: number;
  similarity: string;
  seed: number;
  k: number;
  tool_version: string;
}

export interface AreaShape {
  area_id: number;
  label: string;
  center: [number, number];
  radius: number;
  combined_readers: number;
  readership_share_percent: number;
}

export interface DocumentShape {
  doc_id: string;
  area_id: number;
  position: [number, number];
  radius: number;
  title: string;
  authors: string[];
  year: number;
  venue: string;
  pub_type: string;
  readers: number;
  abstract?: string;
  preview_ref?: string;
}

export interface KnowledgeMap {
  schema_version: number;
  provenance: ProvenanceInfo;
  canvas: [number, number];
  areas: AreaShape[];
  documents: DocumentShape[];
}

export type SortKey = "title" | "area" | "readers";

export type ViewMode =
  | { kind: "overview" }
  | { kind: "area_zoom"; areaId: number }
  | { kind: "doc_detail"; docId: string; returnTo: ViewMode };

export interface FilterState {
  query: string;
  // null until the first search response lands; empty query also resolves
  // to the full id list so "visible" always means "in the last response"
  resultIds: string[] | null;
  pending: boolean;
  stale: boolean;
}

export interface ExplorerState {
  mode: ViewMode;
  filter: FilterState;
  sortKey: SortKey;
}
