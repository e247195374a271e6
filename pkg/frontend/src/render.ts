import type {
  AreaShape,
  DocumentShape,
  ExplorerState,
  KnowledgeMap,
  ViewMode,
} from "./types.js";
import { visibleIds } from "./state.js";
import { sortDocuments } from "./sort.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const ZOOM_PAD = 1.12;
const DOC_LABEL_MAX = 24;

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) node.setAttribute(name, value);
  return node;
}

function truncate(text: string, max: number): string {
  return text.length <= max ? text : text.slice(0, max - 1) + "…";
}

/** doc_detail keeps the scene of the view it was opened from. */
function baseMode(mode: ViewMode): ViewMode {
  return mode.kind === "doc_detail" ? baseMode(mode.returnTo) : mode;
}

/** The viewport for the current mode: whole canvas, or one area padded. */
export function sceneViewBox(map: KnowledgeMap, state: ExplorerState): string {
  const mode = baseMode(state.mode);
  if (mode.kind === "area_zoom") {
    const areaId = mode.areaId;
    const area = map.areas.find((a) => a.area_id === areaId);
    if (area) {
      const r = area.radius * ZOOM_PAD;
      return `${area.center[0] - r} ${area.center[1] - r} ${2 * r} ${2 * r}`;
    }
  }
  return `0 0 ${map.canvas[0]} ${map.canvas[1]}`;
}

function docsOf(map: KnowledgeMap, areaId: number): DocumentShape[] {
  return map.documents.filter((d) => d.area_id === areaId);
}

function areaGroup(
  area: AreaShape,
  members: DocumentShape[],
  state: ExplorerState,
  visible: Set<string> | null,
  zoomed: boolean,
): SVGGElement {
  const filtering = visible !== null && state.filter.query !== "";
  const shown = filtering ? members.filter((d) => visible.has(d.doc_id)).length : members.length;

  const group = el("g", {
    class: "area" + (filtering && shown === 0 ? " dim" : ""),
    "data-area-id": String(area.area_id),
    tabindex: "0",
    role: "button",
    "aria-label": `${area.label}, ${area.combined_readers} readers, ${members.length} documents`,
  });
  group.appendChild(
    el("circle", {
      class: "area-bubble",
      cx: String(area.center[0]),
      cy: String(area.center[1]),
      r: String(area.radius),
    }),
  );

  const label = el("text", {
    class: "area-label",
    x: String(area.center[0]),
    y: String(area.center[1] - area.radius - 6),
    "text-anchor": "middle",
  });
  label.textContent = area.label;
  group.appendChild(label);

  if (filtering) {
    const count = el("text", {
      class: "area-count",
      x: String(area.center[0]),
      y: String(area.center[1] + area.radius + 16),
      "text-anchor": "middle",
    });
    count.textContent = `${shown} of ${members.length}`;
    group.appendChild(count);
  }

  for (const doc of members) {
    const hidden = filtering && !visible.has(doc.doc_id);
    const dot = el("circle", {
      class: "doc" + (hidden ? " dim" : ""),
      "data-doc-id": doc.doc_id,
      cx: String(doc.position[0]),
      cy: String(doc.position[1]),
      r: String(doc.radius),
      tabindex: "0",
      role: "button",
      "aria-label": `${doc.title} (${doc.readers} readers)`,
    });
    const hover = document.createElementNS(SVG_NS, "title");
    hover.textContent = `${doc.title} · ${doc.readers} readers`;
    dot.appendChild(hover);
    group.appendChild(dot);

    if (zoomed && !hidden) {
      const tag = el("text", {
        class: "doc-label",
        x: String(doc.position[0]),
        y: String(doc.position[1] + doc.radius + 4),
        "text-anchor": "middle",
      });
      tag.textContent = truncate(doc.title, DOC_LABEL_MAX);
      group.appendChild(tag);
    }
  }
  return group;
}

/** Rebuild the bubble scene. Geometry is taken verbatim from the map. */
export function renderScene(
  svg: SVGSVGElement,
  map: KnowledgeMap,
  state: ExplorerState,
): void {
  svg.setAttribute("viewBox", sceneViewBox(map, state));
  svg.replaceChildren();
  const visible = visibleIds(state);
  const mode = baseMode(state.mode);
  const zoomedArea = mode.kind === "area_zoom" ? mode.areaId : null;
  for (const area of map.areas) {
    svg.appendChild(
      areaGroup(area, docsOf(map, area.area_id), state, visible, area.area_id === zoomedArea),
    );
  }
}

function metaLine(doc: DocumentShape): string {
  return `${doc.authors.join(", ")} · ${doc.venue} · ${doc.year} · ${doc.readers} readers`;
}

function listItem(doc: DocumentShape, withAbstract: boolean): HTMLLIElement {
  const item = document.createElement("li");
  item.className = "doc-row";
  item.dataset.docId = doc.doc_id;
  item.tabIndex = 0;
  item.setAttribute("role", "button");

  const title = document.createElement("span");
  title.className = "doc-title";
  title.textContent = doc.title;
  const meta = document.createElement("span");
  meta.className = "doc-meta";
  meta.textContent = metaLine(doc);
  item.append(title, meta);

  if (withAbstract && doc.abstract) {
    const abstract = document.createElement("p");
    abstract.className = "doc-abstract";
    abstract.textContent = doc.abstract;
    item.appendChild(abstract);
  }
  return item;
}

function detailPanel(doc: DocumentShape): HTMLElement {
  const panel = document.createElement("article");
  panel.className = "doc-detail";

  const preview = document.createElement("div");
  preview.className = "doc-preview";
  if (doc.preview_ref) {
    const img = document.createElement("img");
    img.src = doc.preview_ref;
    img.alt = `Preview of ${doc.title}`;
    preview.appendChild(img);
  } else {
    preview.classList.add("placeholder");
    preview.textContent = "no preview";
  }
  panel.appendChild(preview);

  const heading = document.createElement("h2");
  heading.textContent = doc.title;
  panel.appendChild(heading);

  const rows: [string, string][] = [
    ["Authors", doc.authors.join(", ")],
    ["Year", String(doc.year)],
    ["Venue", doc.venue],
    ["Type", doc.pub_type],
    ["Readers", String(doc.readers)],
  ];
  const table = document.createElement("dl");
  for (const [term, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = term;
    const dd = document.createElement("dd");
    dd.textContent = value;
    table.append(dt, dd);
  }
  panel.appendChild(table);

  if (doc.abstract) {
    const abstract = document.createElement("p");
    abstract.className = "doc-abstract";
    abstract.textContent = doc.abstract;
    panel.appendChild(abstract);
  }
  return panel;
}

/**
 * Side panel: global list in overview, area-scoped list with abstracts in
 * zoom, full metadata in detail. The list is the accessible twin of the
 * canvas, so it applies the same filter and sort.
 */
export function renderPanel(
  container: HTMLElement,
  map: KnowledgeMap,
  state: ExplorerState,
): void {
  container.replaceChildren();

  if (state.mode.kind === "doc_detail") {
    const docId = state.mode.docId;
    const doc = map.documents.find((d) => d.doc_id === docId);
    if (doc) container.appendChild(detailPanel(doc));
    return;
  }

  const visible = visibleIds(state);
  let docs = map.documents;
  if (state.mode.kind === "area_zoom") {
    const areaId = state.mode.areaId;
    docs = docs.filter((d) => d.area_id === areaId);
  }
  if (visible !== null && state.filter.query !== "") {
    docs = docs.filter((d) => visible.has(d.doc_id));
  }

  const list = document.createElement("ul");
  list.className = "doc-list";
  const withAbstract = state.mode.kind === "area_zoom";
  for (const doc of sortDocuments(docs, state.sortKey)) {
    list.appendChild(listItem(doc, withAbstract));
  }
  container.appendChild(list);

  if (docs.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-note";
    empty.textContent = "no matching documents";
    container.appendChild(empty);
  }
}

/** Doc ids currently presented in the list, in display order. */
export function displayedIds(container: HTMLElement): string[] {
  return Array.from(container.querySelectorAll<HTMLElement>("[data-doc-id]")).map(
    (node) => node.dataset.docId ?? "",
  );
}
