/**
 * Interactive layer over annotated policy pages.
 *
 * The static HTML is complete on its own; this script only adds behavior:
 * a key-panel toggle, per-category filtering (click a key-panel row, click
 * again to clear) and click-to-pin comments on highlighted statements.
 *
 * Contract with the page generator:
 *   - annotation JSON inline in <script type="application/json" id="nfr-data">
 *   - policy text inside <main id="nfr-policy">
 *   - one <span class="nfr-<category>"> per classified statement
 *   - key panel <details id="nfr-key"> with <li data-label="<category>"> rows
 *
 * The viewer never touches text content, only presentation attributes
 * (class lists, `hidden`, `open`).
 */

export interface AnnotationEntry {
  statement_id: string;
  start: number;
  end: number;
  labels: string[];
  primary: string | null;
  scores: Record<string, number>;
  comment: string;
}

export interface AnnotationPayload {
  doc_id: string;
  app_name: string;
  model_descriptor: string;
  palette: Record<string, string>;
  annotations: AnnotationEntry[];
}

export interface ViewerState {
  keyPanelVisible: boolean;
  activeFilter: string | null;
}

export function initialState(): ViewerState {
  return { keyPanelVisible: false, activeFilter: null };
}

/** Invert key-panel visibility; applying twice is the identity. */
export function toggleKeyPanel(state: ViewerState): ViewerState {
  return { ...state, keyPanelVisible: !state.keyPanelVisible };
}

/**
 * Set the category filter; choosing the active category again clears it.
 * `labelId` must be one of the ids present in the loaded palette.
 */
export function filterByLabel(
  state: ViewerState,
  labelId: string,
  knownIds: readonly string[],
): ViewerState {
  if (!knownIds.includes(labelId)) {
    throw new RangeError(`unknown category id: ${labelId}`);
  }
  return {
    ...state,
    activeFilter: state.activeFilter === labelId ? null : labelId,
  };
}

function fail(message: string): never {
  throw new Error(`annotation data: ${message}`);
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/** Validate a parsed annotation payload; throws with a readable message. */
export function validateAnnotations(data: unknown): AnnotationPayload {
  if (!isRecord(data)) fail("payload is not an object");
  for (const key of ["doc_id", "app_name", "model_descriptor"]) {
    if (typeof data[key] !== "string") fail(`missing string field '${key}'`);
  }
  if (!isRecord(data.palette)) fail("missing 'palette' object");
  const palette = data.palette as Record<string, unknown>;
  const ids = Object.keys(palette);
  if (ids.length !== 11) fail(`palette must list 11 categories, got ${ids.length}`);
  for (const id of ids) {
    if (typeof palette[id] !== "string") fail(`palette color for '${id}' is not a string`);
  }
  if (!Array.isArray(data.annotations)) fail("missing 'annotations' array");
  for (const raw of data.annotations) {
    if (!isRecord(raw)) fail("annotation entry is not an object");
    if (typeof raw.statement_id !== "string") fail("entry missing 'statement_id'");
    if (!Number.isInteger(raw.start) || !Number.isInteger(raw.end)) {
      fail(`entry '${raw.statement_id}' has a non-integer span`);
    }
    if (!Array.isArray(raw.labels)) fail(`entry '${raw.statement_id}' missing 'labels'`);
    for (const label of raw.labels) {
      if (typeof label !== "string" || !(label in palette)) {
        fail(`entry '${raw.statement_id}' has unknown label '${String(label)}'`);
      }
    }
    if (raw.primary !== null && !(raw.labels as unknown[]).includes(raw.primary)) {
      fail(`entry '${raw.statement_id}' primary label not among its labels`);
    }
    if (!isRecord(raw.scores)) fail(`entry '${raw.statement_id}' missing 'scores'`);
    if (typeof raw.comment !== "string") fail(`entry '${raw.statement_id}' missing 'comment'`);
  }
  return data as unknown as AnnotationPayload;
}

const DIM_CLASS = "nfr-dim";

export class Viewer {
  state: ViewerState;
  readonly payload: AnnotationPayload;
  readonly labelIds: readonly string[];
  private readonly spans: { element: Element; label: string }[];
  private readonly keyPanel: Element | null;

  constructor(doc: Document, payload: AnnotationPayload) {
    this.state = initialState();
    this.payload = payload;
    this.labelIds = Object.keys(payload.palette).map((id) => id.toLowerCase());
    this.keyPanel = doc.getElementById("nfr-key");

    const policy = doc.getElementById("nfr-policy");
    this.spans = [];
    if (policy) {
      for (const label of this.labelIds) {
        for (const element of Array.from(policy.querySelectorAll(`.nfr-${label}`))) {
          this.spans.push({ element, label });
        }
      }
    }
    this.wire();
    this.apply();
  }

  get spanCount(): number {
    return this.spans.length;
  }

  private wire(): void {
    for (const { element } of this.spans) {
      element.addEventListener("click", () => {
        const note = this.findNote(element);
        if (note) {
          if (note.hasAttribute("hidden")) note.removeAttribute("hidden");
          else note.setAttribute("hidden", "");
        }
      });
      element.addEventListener("mouseenter", () => element.classList.add("nfr-hover"));
      element.addEventListener("mouseleave", () => element.classList.remove("nfr-hover"));
    }
    if (this.keyPanel) {
      this.keyPanel.addEventListener("toggle", () => {
        this.state = {
          ...this.state,
          keyPanelVisible: (this.keyPanel as HTMLDetailsElement).open,
        };
      });
      for (const row of Array.from(this.keyPanel.querySelectorAll("li[data-label]"))) {
        row.addEventListener("click", () => {
          this.filter(row.getAttribute("data-label") as string);
        });
      }
    }
  }

  private findNote(span: Element): Element | null {
    let cursor: Element | null = span.nextElementSibling;
    for (let hops = 0; cursor && hops < 3; hops++) {
      if (cursor.classList.contains("nfr-note")) return cursor;
      cursor = cursor.nextElementSibling;
    }
    return null;
  }

  /** Push the current state into the DOM (presentation attributes only). */
  apply(): void {
    if (this.keyPanel) {
      const details = this.keyPanel as HTMLDetailsElement;
      if (details.open !== this.state.keyPanelVisible) {
        details.open = this.state.keyPanelVisible;
      }
    }
    const filter = this.state.activeFilter;
    for (const { element, label } of this.spans) {
      const dim = filter !== null && label !== filter;
      element.classList.toggle(DIM_CLASS, dim);
    }
  }

  toggleKeyPanel(): void {
    this.state = toggleKeyPanel(this.state);
    this.apply();
  }

  filter(labelId: string): void {
    this.state = filterByLabel(this.state, labelId, this.labelIds);
    this.apply();
  }
}

function showError(doc: Document, message: string): void {
  const banner = doc.createElement("div");
  banner.className = "nfr-error";
  banner.setAttribute("role", "alert");
  banner.textContent = `Annotations unavailable: ${message}`;
  const policy = doc.getElementById("nfr-policy");
  if (policy && policy.parentNode) {
    policy.parentNode.insertBefore(banner, policy);
  } else if (doc.body) {
    doc.body.insertBefore(banner, doc.body.firstChild);
  }
}

/**
 * Initialize the viewer from inline annotation JSON (or an explicit JSON
 * string). Returns null and shows an error banner when the data is missing
 * or invalid; the static policy text stays untouched either way.
 */
export function init(doc: Document, jsonSource?: string): Viewer | null {
  let raw = jsonSource;
  if (raw === undefined) {
    const holder = doc.getElementById("nfr-data");
    if (!holder || !holder.textContent) {
      showError(doc, "no annotation data found in page");
      return null;
    }
    raw = holder.textContent;
  }
  let payload: AnnotationPayload;
  try {
    payload = validateAnnotations(JSON.parse(raw));
  } catch (error) {
    showError(doc, error instanceof Error ? error.message : String(error));
    return null;
  }
  return new Viewer(doc, payload);
}

/* Progressive enhancement: auto-initialize in a browser. */
if (typeof document !== "undefined" && typeof window !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", () => {
      if (document.getElementById("nfr-policy")) init(document);
    });
  } else if (document.getElementById("nfr-policy")) {
    init(document);
  }
}
