import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { beforeEach, describe, expect, it } from "vitest";

import {
  AnnotationPayload,
  Viewer,
  filterByLabel,
  init,
  initialState,
  toggleKeyPanel,
  validateAnnotations,
} from "../src/viewer";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const FIXTURE_HTML = readFileSync(join(FIXTURES, "fixture-policy.html"), "utf-8");
const FIXTURE_JSON = readFileSync(
  join(FIXTURES, "fixture-policy.annotations.json"),
  "utf-8",
);

function loadFixturePage(): Document {
  document.documentElement.innerHTML = FIXTURE_HTML;
  return document;
}

function highlightSpans(doc: Document): Element[] {
  const payload = JSON.parse(FIXTURE_JSON) as AnnotationPayload;
  const selector = Object.keys(payload.palette)
    .map((id) => `.nfr-${id.toLowerCase()}`)
    .join(", ");
  const policy = doc.getElementById("nfr-policy")!;
  return Array.from(policy.querySelectorAll(selector));
}

function click(element: Element): void {
  element.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("pure state transitions", () => {
  it("starts with the key panel hidden and no filter", () => {
    expect(initialState()).toEqual({ keyPanelVisible: false, activeFilter: null });
  });

  it("toggle inverts visibility and double-toggle is identity", () => {
    const s0 = initialState();
    const s1 = toggleKeyPanel(s0);
    expect(s1.keyPanelVisible).toBe(true);
    expect(toggleKeyPanel(s1)).toEqual(s0);
  });

  it("filtering the same category twice clears it", () => {
    const ids = ["security", "usability"];
    const s1 = filterByLabel(initialState(), "security", ids);
    expect(s1.activeFilter).toBe("security");
    expect(filterByLabel(s1, "security", ids).activeFilter).toBeNull();
    expect(filterByLabel(s1, "usability", ids).activeFilter).toBe("usability");
  });

  it("rejects category ids outside the loaded palette", () => {
    expect(() => filterByLabel(initialState(), "speed", ["security"])).toThrow(
      RangeError,
    );
  });

  it("filter survives a panel toggle", () => {
    const ids = ["security"];
    const filtered = filterByLabel(initialState(), "security", ids);
    expect(toggleKeyPanel(filtered).activeFilter).toBe("security");
  });
});

describe("schema validation", () => {
  it("accepts generated annotation JSON", () => {
    const payload = validateAnnotations(JSON.parse(FIXTURE_JSON));
    expect(payload.doc_id).toBe("fixture-policy");
    expect(Object.keys(payload.palette)).toHaveLength(11);
  });

  it("rejects a payload missing its palette", () => {
    const broken = JSON.parse(FIXTURE_JSON);
    delete broken.palette;
    expect(() => validateAnnotations(broken)).toThrow(/palette/);
  });

  it("rejects labels not in the palette", () => {
    const broken = JSON.parse(FIXTURE_JSON);
    broken.annotations[0].labels = ["Speed"];
    expect(() => validateAnnotations(broken)).toThrow(/unknown label/);
  });
});

describe("init", () => {
  let doc: Document;

  beforeEach(() => {
    doc = loadFixturePage();
  });

  it("wires every highlight span and hides the key panel initially", () => {
    const viewer = init(doc)!;
    expect(viewer).not.toBeNull();
    expect(viewer.spanCount).toBe(highlightSpans(doc).length);
    expect(viewer.spanCount).toBe(3);
    expect(viewer.state.keyPanelVisible).toBe(false);
    expect((doc.getElementById("nfr-key") as HTMLDetailsElement).open).toBe(false);
  });

  it("still works when the page has zero annotations", () => {
    const payload = JSON.parse(FIXTURE_JSON);
    payload.annotations = [];
    doc.getElementById("nfr-data")!.textContent = JSON.stringify(payload);
    const viewer = init(doc)!;
    expect(viewer).not.toBeNull();
    viewer.toggleKeyPanel();
    expect((doc.getElementById("nfr-key") as HTMLDetailsElement).open).toBe(true);
  });

  it("shows an error banner on malformed JSON but keeps the text readable", () => {
    const before = doc.getElementById("nfr-policy")!.textContent;
    doc.getElementById("nfr-data")!.textContent = "{not json";
    const viewer = init(doc);
    expect(viewer).toBeNull();
    expect(doc.querySelector(".nfr-error")).not.toBeNull();
    expect(doc.getElementById("nfr-policy")!.textContent).toBe(before);
  });

  it("accepts an explicit JSON source argument", () => {
    const viewer = init(doc, FIXTURE_JSON);
    expect(viewer).not.toBeNull();
  });
});

describe("key panel toggle", () => {
  it("inverts visibility and double-toggle is identity in the DOM", () => {
    const doc = loadFixturePage();
    const viewer = init(doc)!;
    const details = doc.getElementById("nfr-key") as HTMLDetailsElement;
    expect(details.open).toBe(false);
    viewer.toggleKeyPanel();
    expect(details.open).toBe(true);
    expect(viewer.state.keyPanelVisible).toBe(true);
    viewer.toggleKeyPanel();
    expect(details.open).toBe(false);
    expect(viewer.state.keyPanelVisible).toBe(false);
  });
});

describe("category filtering", () => {
  let doc: Document;
  let viewer: Viewer;

  beforeEach(() => {
    doc = loadFixturePage();
    viewer = init(doc)!;
  });

  const dimmed = () =>
    highlightSpans(doc).filter((s) => s.classList.contains("nfr-dim"));

  it("dims exactly the non-selected spans", () => {
    viewer.filter("security");
    const dim = dimmed();
    expect(dim).toHaveLength(2);
    for (const span of dim) {
      expect(span.className).not.toMatch(/nfr-security/);
    }
    const undimmed = highlightSpans(doc).filter(
      (s) => !s.classList.contains("nfr-dim"),
    );
    expect(undimmed).toHaveLength(1);
    expect(undimmed[0].className).toMatch(/nfr-security/);
  });

  it("re-selecting the same category clears the filter", () => {
    viewer.filter("security");
    viewer.filter("security");
    expect(dimmed()).toHaveLength(0);
    expect(viewer.state.activeFilter).toBeNull();
  });

  it("clicking a key panel row applies the filter", () => {
    const row = doc.querySelector('li[data-label="usability"]')!;
    click(row);
    expect(viewer.state.activeFilter).toBe("usability");
    expect(dimmed()).toHaveLength(2);
  });

  it("filtering then toggling the panel preserves the filter", () => {
    viewer.filter("performance");
    viewer.toggleKeyPanel();
    expect(viewer.state.activeFilter).toBe("performance");
    expect(dimmed()).toHaveLength(2);
  });
});

describe("text content integrity", () => {
  it("interactions never change the policy text", () => {
    const doc = loadFixturePage();
    const viewer = init(doc)!;
    const policy = doc.getElementById("nfr-policy")!;
    const before = policy.textContent;

    viewer.toggleKeyPanel();
    viewer.filter("security");
    for (const span of highlightSpans(doc)) {
      click(span); // pins the comment note
    }
    viewer.filter("security");
    viewer.toggleKeyPanel();

    expect(policy.textContent).toBe(before);
  });

  it("clicking a highlight span toggles its pinned note", () => {
    const doc = loadFixturePage();
    init(doc);
    const span = doc.querySelector('[class^="nfr-security"]')!;
    const note = span.parentElement!.querySelector(".nfr-note")!;
    expect(note.hasAttribute("hidden")).toBe(true);
    click(span);
    expect(note.hasAttribute("hidden")).toBe(false);
    click(span);
    expect(note.hasAttribute("hidden")).toBe(true);
  });
});
