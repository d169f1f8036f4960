/**
 * Page wiring. One session per page, kept in the URL hash so a reload
 * reattaches to it on a persistent server. All math comes from the API;
 * this file only moves payloads between widgets and the canvas painters.
 */

import { ApiClient, ApiError, Inflight, isAbort } from "./api.js";
import { FramePlayer } from "./animation.js";
import type {
  CenterDoc,
  ConsistencyDoc,
  GeodesicFrameDoc,
  SessionConfig,
  TreeDocument,
} from "./documents.js";
import { CanvasTree, fromDocument, type EditorPanel } from "./editor.js";
import {
  circleGlyph,
  edgeGlyphPC,
  edgeGlyphPL,
  sequentialColor,
  statisticalGlyph,
  variationalGlyph,
  type EdgeGlyph,
  type GlyphSpec,
} from "./glyphs.js";
import { nearestNode, placeTree, type Panel, type Placement } from "./layout.js";
import {
  clear,
  drawEdgeGlyphs,
  drawGlyphs,
  drawGrid,
  drawStar,
  drawTree,
} from "./render.js";
import { starPlot } from "./star.js";

const api = new ApiClient("");
const computeFlight = new Inflight();
const sweepFlight = new Inflight();

const EDITOR_PANEL: EditorPanel = {
  width: 560,
  height: 430,
  pad: 25,
  rootBand: 40,
  gridStep: 15,
  fMin: 0,
  fMax: 8,
};

const VIEW_PANEL: Panel = { width: 380, height: 320, pad: 30, rootBand: 34 };

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function context(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");
  return ctx;
}

const statusLine = el<HTMLSpanElement>("status");

function status(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.classList.toggle("error", isError);
}

function reportError(err: unknown): void {
  if (isAbort(err)) return;
  if (err instanceof ApiError) status(err.describe(), true);
  else status(String(err), true);
}

/** Map from label to the vertex id carrying it, for glyph anchoring. */
function labelVertices(doc: TreeDocument): Map<number, string> {
  const out = new Map<number, string>();
  for (const node of doc.nodes) {
    for (const label of node.labels ?? []) out.set(label, node.id);
  }
  return out;
}

interface PageState {
  sessionId: string | null;
  config: SessionConfig;
  members: TreeDocument[];
  center: CenterDoc | null;
  centerEmbedding: TreeDocument | null;
  consistency: ConsistencyDoc | null;
  updatedLabels: Set<number>;
  editingMember: number | null;
  player: FramePlayer | null;
}

const state: PageState = {
  sessionId: null,
  config: { delta: 0.05, lambda: 1.0, steps: 10, mode: "auto" },
  members: [],
  center: null,
  centerEmbedding: null,
  consistency: null,
  updatedLabels: new Set(),
  editingMember: null,
  player: null,
};

// ---------------------------------------------------------------- session

async function bootstrap(): Promise<void> {
  const wanted = window.location.hash.slice(1);
  if (wanted) {
    try {
      const existing = await api.getSession(wanted);
      adoptSession(existing.id, existing.config);
      state.members = existing.members;
      renderMembers();
      if (existing.has_center) await refreshCenter();
      status(`reattached to session ${existing.id}`);
      return;
    } catch {
      // fall through to a fresh session
    }
  }
  const created = await api.createSession();
  adoptSession(created.id, created.config);
  status(`session ${created.id} ready; draw a tree or upload documents`);
}

function adoptSession(id: string, config: SessionConfig): void {
  state.sessionId = id;
  state.config = config;
  window.location.hash = id;
  el<HTMLSpanElement>("session-label").textContent = `session ${id}`;
  el<HTMLInputElement>("cfg-delta").value = String(config.delta);
  el<HTMLInputElement>("cfg-lambda").value = String(config.lambda);
  el<HTMLInputElement>("cfg-steps").value = String(config.steps);
  el<HTMLSelectElement>("cfg-mode").value = config.mode;
  el<HTMLInputElement>("delta-sweep").value = String(config.delta);
  el<HTMLSpanElement>("delta-readout").textContent = String(config.delta);
}

function needSession(): string {
  if (!state.sessionId) throw new Error("no session yet");
  return state.sessionId;
}

function invalidateResults(): void {
  state.center = null;
  state.centerEmbedding = null;
  state.consistency = null;
  state.updatedLabels = new Set();
  state.player = null;
  el<HTMLButtonElement>("anim-play").disabled = true;
  el<HTMLInputElement>("anim-scrub").disabled = true;
  renderCenterPanel();
  renderStarPanel(null);
  renderGlyphPanel();
  renderAnimationFrame(null);
  renderMembers();
}

// ---------------------------------------------------------------- editor

const editorCanvas = el<HTMLCanvasElement>("editor-canvas");
const editorCtx = context(editorCanvas);
let editor = new CanvasTree(EDITOR_PANEL);
let tool: "select" | "add" | "connect" = "select";
let dragging: string | null = null;
let connectFrom: string | null = null;

function canvasPoint(canvas: HTMLCanvasElement, ev: MouseEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  return {
    x: ((ev.clientX - rect.left) / rect.width) * canvas.width,
    y: ((ev.clientY - rect.top) / rect.height) * canvas.height,
  };
}

function renderEditor(): void {
  clear(editorCtx, editorCanvas.width, editorCanvas.height);
  drawGrid(
    editorCtx,
    editorCanvas.width,
    editorCanvas.height,
    EDITOR_PANEL.pad,
    EDITOR_PANEL.gridStep,
  );
  const problems = editor.violations();
  const warned = editor.warnings();
  drawTree(editorCtx, editor.placement(), {
    selection: editor.selection,
    problems: new Set(problems.map((p) => p.node).filter((n): n is string => n !== null)),
    updatedLabels: state.updatedLabels,
    showIds: true,
  });
  const box = el<HTMLDivElement>("editor-problems");
  box.innerHTML = "";
  for (const p of problems) {
    const line = document.createElement("div");
    line.textContent = p.node ? `${p.node}: ${p.message}` : p.message;
    box.appendChild(line);
  }
  for (const w of warned) {
    const line = document.createElement("div");
    line.className = "warn";
    line.textContent = w.message;
    box.appendChild(line);
  }
  el<HTMLButtonElement>("commit-add").disabled = problems.length > 0;
  el<HTMLButtonElement>("commit-replace").disabled =
    problems.length > 0 || state.editingMember === null;
  el<HTMLSpanElement>("editing-which").textContent =
    state.editingMember === null ? "drafting a new member" : `editing member ${state.editingMember}`;
}

editorCanvas.addEventListener("mousedown", (ev) => {
  const { x, y } = canvasPoint(editorCanvas, ev);
  const hit = nearestNode(editor.placement(), x, y, 14);
  if (tool === "select") {
    editor.selection = hit ? hit.id : null;
    dragging = hit ? hit.id : null;
  } else if (tool === "add") {
    const parent = hit ? hit.id : null;
    if (!hit) {
      const node = editor.addVertex(x, y);
      editor.selection = node.id;
    } else {
      editor.selection = parent;
    }
  } else if (tool === "connect") {
    if (!hit) {
      connectFrom = null;
      status("connect: click a child vertex, then its parent");
    } else if (connectFrom === null) {
      connectFrom = hit.id;
      editor.selection = hit.id;
      status(`connect: now click the parent for ${hit.id}`);
    } else {
      editor.connect(connectFrom, hit.id);
      status(`connected ${connectFrom} under ${hit.id}`);
      connectFrom = null;
    }
  }
  renderEditor();
});

editorCanvas.addEventListener("mousemove", (ev) => {
  if (!dragging) return;
  const { x, y } = canvasPoint(editorCanvas, ev);
  editor.moveVertex(dragging, x, y);
  renderEditor();
});

window.addEventListener("mouseup", () => {
  dragging = null;
});

for (const button of document.querySelectorAll<HTMLButtonElement>("button.tool")) {
  button.addEventListener("click", () => {
    tool = button.dataset.tool as typeof tool;
    connectFrom = null;
    for (const other of document.querySelectorAll("button.tool")) {
      other.classList.toggle("active", other === button);
    }
  });
}

el<HTMLButtonElement>("add-root").addEventListener("click", () => {
  editor.addRoot(editorCanvas.width / 2);
  renderEditor();
});

el<HTMLButtonElement>("delete-node").addEventListener("click", () => {
  if (editor.selection) editor.deleteVertex(editor.selection);
  renderEditor();
});

el<HTMLButtonElement>("detach-node").addEventListener("click", () => {
  if (editor.selection) editor.detach(editor.selection);
  renderEditor();
});

el<HTMLButtonElement>("assign-label").addEventListener("click", () => {
  const raw = el<HTMLInputElement>("label-value").value;
  const label = Number(raw);
  if (editor.selection && Number.isInteger(label) && label >= 1) {
    editor.assignLabel(editor.selection, label);
  }
  renderEditor();
});

el<HTMLButtonElement>("clear-editor").addEventListener("click", () => {
  editor = new CanvasTree(EDITOR_PANEL);
  state.editingMember = null;
  renderEditor();
});

async function commit(asNew: boolean): Promise<void> {
  const sid = needSession();
  const doc = editor.toDocument();
  try {
    if (asNew || state.editingMember === null) {
      const res = await api.addTree(sid, doc);
      status(`member ${res.index} added (${res.count} total)`);
    } else {
      await api.replaceTree(sid, state.editingMember, doc);
      status(`member ${state.editingMember} replaced`);
    }
    await reloadMembers();
    invalidateResults();
  } catch (err) {
    reportError(err);
  }
}

el<HTMLButtonElement>("commit-add").addEventListener("click", () => void commit(true));
el<HTMLButtonElement>("commit-replace").addEventListener("click", () => void commit(false));

// ---------------------------------------------------------------- ensemble

async function reloadMembers(): Promise<void> {
  const sid = needSession();
  const session = await api.getSession(sid);
  state.members = session.members;
  renderMembers();
}

function renderMembers(): void {
  const list = el<HTMLUListElement>("member-list");
  list.innerHTML = "";
  state.members.forEach((doc, k) => {
    const row = document.createElement("li");
    const name = document.createElement("span");
    name.textContent = `member ${k} (${doc.nodes.length} vertices)`;
    row.appendChild(name);

    const edit = document.createElement("button");
    edit.textContent = "edit";
    edit.addEventListener("click", () => {
      editor = fromDocument(doc, EDITOR_PANEL);
      state.editingMember = k;
      renderEditor();
    });
    row.appendChild(edit);

    const animate = document.createElement("button");
    animate.textContent = "animate";
    animate.addEventListener("click", () => {
      el<HTMLInputElement>("anim-member").value = String(k);
      void loadFrames();
    });
    row.appendChild(animate);

    const dist = document.createElement("span");
    dist.className = "dist";
    const d = state.center?.member_distances[k];
    dist.textContent = d !== undefined ? `d = ${d.toPrecision(6)}` : "";
    row.appendChild(dist);

    list.appendChild(row);
  });
  el<HTMLDivElement>("center-facts").textContent = state.center
    ? `radius ${state.center.radius.toPrecision(6)}` +
      (state.center.center_matrix_ultra ? "" : " (midpoint needed closure)")
    : "";
}

el<HTMLInputElement>("upload").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  if (!input.files) return;
  const sid = needSession();
  for (const file of input.files) {
    try {
      const doc = JSON.parse(await file.text()) as TreeDocument;
      await api.addTree(sid, doc);
    } catch (err) {
      reportError(err);
      break;
    }
  }
  input.value = "";
  await reloadMembers();
  invalidateResults();
});

// ---------------------------------------------------------------- config

async function applyConfig(): Promise<void> {
  const sid = needSession();
  computeFlight.cancel(); // reconfiguring cancels any compute in flight
  const patch: Partial<SessionConfig> = {
    delta: Number(el<HTMLInputElement>("cfg-delta").value),
    lambda: Number(el<HTMLInputElement>("cfg-lambda").value),
    steps: Number(el<HTMLInputElement>("cfg-steps").value),
    mode: el<HTMLSelectElement>("cfg-mode").value as SessionConfig["mode"],
  };
  try {
    const res = await api.setConfig(sid, patch);
    state.config = res.config;
    invalidateResults();
    status("configuration applied; results cleared");
  } catch (err) {
    reportError(err);
  }
}

el<HTMLButtonElement>("apply-config").addEventListener("click", () => void applyConfig());

// ---------------------------------------------------------------- center

async function computeCenter(): Promise<void> {
  const sid = needSession();
  const signal = computeFlight.begin();
  status("computing center ...");
  try {
    const center = await api.computeCenter(sid, signal);
    state.center = center;
    state.updatedLabels = new Set();
    for (const report of center.relabel_reports ?? []) {
      for (const target of Object.values(report.renamed)) state.updatedLabels.add(target);
      for (const label of Object.keys(report.extra)) state.updatedLabels.add(Number(label));
    }
    await refreshCenter();
    status(
      `center ready: radius ${center.radius.toPrecision(6)}` +
        (center.relabel_reports?.length
          ? `, ${center.relabel_reports.length} member(s) relabeled`
          : ""),
    );
  } catch (err) {
    reportError(err);
  }
}

async function refreshCenter(): Promise<void> {
  const sid = needSession();
  const [embedding, summary, consistency] = await Promise.all([
    api.getEmbedding(sid),
    api.getSummary(sid),
    api.getConsistency(sid, { g: currentG() }),
  ]);
  state.centerEmbedding = embedding;
  state.consistency = consistency;
  if (!state.center) {
    // Reattached to a session that already had a center; rebuild the facts.
    state.center = await api.computeCenter(sid);
  }
  renderMembers();
  renderCenterPanel();
  renderStarPanel(summary);
  renderGlyphPanel();
}

el<HTMLButtonElement>("compute").addEventListener("click", () => void computeCenter());

const centerCtx = context(el<HTMLCanvasElement>("center-canvas"));

function renderCenterPanel(): void {
  const canvas = el<HTMLCanvasElement>("center-canvas");
  clear(centerCtx, canvas.width, canvas.height);
  const note = el<HTMLDivElement>("relabel-note");
  if (!state.centerEmbedding) {
    note.textContent = "no center yet";
    return;
  }
  drawTree(centerCtx, placeTree(state.centerEmbedding, VIEW_PANEL), {
    updatedLabels: state.updatedLabels,
  });
  note.textContent = state.updatedLabels.size
    ? `updated labels in green: ${[...state.updatedLabels].sort((a, b) => a - b).join(", ")}`
    : "";
}

// ---------------------------------------------------------------- star

const starCtx = context(el<HTMLCanvasElement>("star-canvas"));

function renderStarPanel(summary: Parameters<typeof starPlot>[0] | null): void {
  const canvas = el<HTMLCanvasElement>("star-canvas");
  clear(starCtx, canvas.width, canvas.height);
  const facts = el<HTMLDivElement>("star-facts");
  if (!summary) {
    facts.textContent = "";
    return;
  }
  const plot = starPlot(summary, canvas.width);
  drawStar(starCtx, plot);
  facts.textContent = `radius ${plot.radius.toPrecision(6)}; ${plot.links.length} members`;
}

// ---------------------------------------------------------------- glyphs

const glyphCtx = context(el<HTMLCanvasElement>("glyph-canvas"));

function currentG(): number {
  return Number(el<HTMLInputElement>("glyph-g").value) || 28;
}

function renderGlyphPanel(): void {
  const canvas = el<HTMLCanvasElement>("glyph-canvas");
  clear(glyphCtx, canvas.width, canvas.height);
  const report = state.consistency;
  if (!report || !state.centerEmbedding) return;

  const view = el<HTMLSelectElement>("glyph-view").value;
  const memberIndex = Number(el<HTMLInputElement>("glyph-member").value) || 0;
  const g = currentG();

  if (view === "variational" || view === "statistical") {
    const doc = state.centerEmbedding;
    const placement = placeTree(doc, VIEW_PANEL);
    const anchors = labelVertices(doc);
    const glyphs: GlyphSpec[] = [];
    if (view === "variational") {
      for (const [label, rec] of Object.entries(report.variational.per_label)) {
        glyphs.push(variationalGlyph(Number(label), rec));
      }
    } else {
      for (const [label, five] of Object.entries(report.statistical)) {
        glyphs.push(statisticalGlyph(Number(label), five, g));
      }
    }
    drawTree(glyphCtx, placement, { updatedLabels: state.updatedLabels });
    drawGlyphs(glyphCtx, placement, glyphs, anchors);
    return;
  }

  const member = state.members[memberIndex];
  if (!member) return;
  const placement = placeTree(member, VIEW_PANEL);
  if (view === "member") {
    const alphas = report.vertex[memberIndex] ?? {};
    const anchors = labelVertices(member);
    const glyphs = Object.entries(alphas).map(([label, alpha]) =>
      circleGlyph(Number(label), alpha, g),
    );
    drawTree(glyphCtx, placement, {});
    drawGlyphs(glyphCtx, placement, glyphs, anchors);
    return;
  }

  const edges: EdgeGlyph[] = [];
  if (view === "edge-pc") {
    for (const [vertex, value] of Object.entries(report.edge_pc[memberIndex] ?? {})) {
      edges.push(edgeGlyphPC(vertex, value, g));
    }
  } else {
    for (const [vertex, pair] of Object.entries(report.edge_pl[memberIndex] ?? {})) {
      edges.push(edgeGlyphPL(vertex, pair, g));
    }
  }
  drawEdgeGlyphs(glyphCtx, placement, edges);
  drawTree(glyphCtx, placement, {});
}

for (const id of ["glyph-view", "glyph-member", "glyph-g"]) {
  el<HTMLElement>(id).addEventListener("change", () => renderGlyphPanel());
}

el<HTMLInputElement>("delta-sweep").addEventListener("input", () => {
  const delta = Number(el<HTMLInputElement>("delta-sweep").value);
  el<HTMLSpanElement>("delta-readout").textContent = delta.toFixed(2);
  if (!state.center) return;
  const sid = needSession();
  const signal = sweepFlight.begin();
  api
    .getConsistency(sid, { delta, g: currentG() }, signal)
    .then((report) => {
      state.consistency = report;
      renderGlyphPanel();
    })
    .catch(reportError);
});

// ---------------------------------------------------------------- animation

const animCtx = context(el<HTMLCanvasElement>("anim-canvas"));
let rafHandle: number | null = null;
let lastTick = 0;

async function loadFrames(): Promise<void> {
  const sid = needSession();
  if (!state.center) {
    status("compute the center first; animation targets it", true);
    return;
  }
  const member = Number(el<HTMLInputElement>("anim-member").value) || 0;
  const mode = el<HTMLSelectElement>("anim-mode").value as "geodesic" | "linear";
  const withConsistency = el<HTMLInputElement>("anim-consistency").checked;
  try {
    const doc = await api.geodesic(sid, {
      member,
      steps: state.config.steps,
      mode,
      withConsistency,
    });
    state.player = new FramePlayer(doc, (_, frame) => renderAnimationFrame(frame));
    el<HTMLButtonElement>("anim-play").disabled = false;
    const scrub = el<HTMLInputElement>("anim-scrub");
    scrub.disabled = false;
    scrub.value = "0";
    state.player.show(0);
    status(`${doc.frames.length} frames loaded for member ${member}`);
  } catch (err) {
    reportError(err);
  }
}

function renderAnimationFrame(frame: GeodesicFrameDoc | null): void {
  const canvas = el<HTMLCanvasElement>("anim-canvas");
  clear(animCtx, canvas.width, canvas.height);
  const readout = el<HTMLSpanElement>("anim-readout");
  if (!frame) {
    readout.textContent = "";
    return;
  }
  const labelColors = new Map<number, string>();
  for (const [label, alpha] of Object.entries(frame.consistency ?? {})) {
    labelColors.set(Number(label), sequentialColor(alpha));
  }
  drawTree(animCtx, placeTree(frame.tree, VIEW_PANEL), {
    labelColors: labelColors.size ? labelColors : undefined,
  });
  const player = state.player;
  readout.textContent = player
    ? `frame ${player.index + 1}/${player.length}, lambda = ${frame.lambda.toFixed(4)}`
    : "";
}

function animationLoop(ts: number): void {
  if (state.player?.playing) {
    state.player.step(ts - lastTick);
    el<HTMLInputElement>("anim-scrub").value = String(
      state.player.length > 1 ? state.player.index / (state.player.length - 1) : 0,
    );
    if (!state.player.playing) {
      el<HTMLButtonElement>("anim-play").textContent = "play";
    }
  }
  lastTick = ts;
  rafHandle = requestAnimationFrame(animationLoop);
}

el<HTMLButtonElement>("anim-load").addEventListener("click", () => void loadFrames());

el<HTMLButtonElement>("anim-play").addEventListener("click", () => {
  const player = state.player;
  if (!player) return;
  player.toggle();
  el<HTMLButtonElement>("anim-play").textContent = player.playing ? "pause" : "play";
});

el<HTMLInputElement>("anim-scrub").addEventListener("input", () => {
  const player = state.player;
  if (!player) return;
  player.pause();
  el<HTMLButtonElement>("anim-play").textContent = "play";
  player.scrubTo(Number(el<HTMLInputElement>("anim-scrub").value));
});

// ---------------------------------------------------------------- boot

renderEditor();
if (rafHandle === null) rafHandle = requestAnimationFrame(animationLoop);
bootstrap().catch(reportError);
