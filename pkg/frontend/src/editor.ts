/**
 * Client-side tree editing state. The canvas carries a fixed value grid:
 * x snaps to grid columns and y snaps to grid rows, and a vertex's function
 * value is read straight off its row, so dragging a vertex up or down is
 * editing its value. Structure edits stay local until the document is
 * committed to the session, at which point the server has the final say;
 * violations() mirrors the server's checks so problems show up inline first.
 */

import type { Problem, TreeDocument, TreeNodeDoc } from "./documents.js";
import { checkDocument, unlabeledLeaves } from "./documents.js";
import type { Placement, ValueScale } from "./layout.js";
import { fForY, placeTree, snap, yForF } from "./layout.js";

export interface EditorPanel {
  width: number;
  height: number;
  pad: number;
  rootBand: number;
  gridStep: number;
  fMin: number;
  fMax: number;
}

export interface EditNode {
  id: string;
  f: number | "inf";
  parent: string | null;
  labels: number[];
  /** Canvas position in pixels. */
  x: number;
  y: number;
  /** Document coordinates: kept verbatim for loaded nodes until a move. */
  docX: number;
  docY: number;
}

export class CanvasTree {
  readonly nodes = new Map<string, EditNode>();
  selection: string | null = null;
  private seq = 0;

  constructor(readonly panel: EditorPanel) {}

  scale(): ValueScale {
    return {
      fMin: this.panel.fMin,
      fMax: this.panel.fMax,
      yTop: this.panel.pad + this.panel.rootBand,
      yBottom: this.panel.height - this.panel.pad,
      rootY: this.panel.pad,
    };
  }

  snapX(x: number): number {
    const lo = this.panel.pad;
    const hi = this.panel.width - this.panel.pad;
    return Math.min(hi, Math.max(lo, lo + snap(x - lo, this.panel.gridStep)));
  }

  snapY(y: number): number {
    const scale = this.scale();
    const clamped = Math.min(scale.yBottom, Math.max(scale.yTop, y));
    return scale.yTop + snap(clamped - scale.yTop, this.panel.gridStep);
  }

  private nextId(): string {
    let id = `v${++this.seq}`;
    while (this.nodes.has(id)) id = `v${++this.seq}`;
    return id;
  }

  root(): EditNode | null {
    for (const node of this.nodes.values()) {
      if (node.f === "inf") return node;
    }
    return null;
  }

  private gridX(px: number): number {
    return (px - this.panel.pad) / this.panel.gridStep;
  }

  /** Place the root in its reserved band; one per tree. */
  addRoot(x: number): EditNode {
    const existing = this.root();
    if (existing) return existing;
    const sx = this.snapX(x);
    const node: EditNode = {
      id: this.nextId(),
      f: "inf",
      parent: null,
      labels: [],
      x: sx,
      y: this.panel.pad,
      docX: this.gridX(sx),
      docY: this.panel.fMax + 1,
    };
    this.nodes.set(node.id, node);
    return node;
  }

  addVertex(x: number, y: number, parent: string | null = null): EditNode {
    const sx = this.snapX(x);
    const sy = this.snapY(y);
    const f = fForY(this.scale(), sy);
    const node: EditNode = {
      id: this.nextId(),
      f,
      parent,
      labels: [],
      x: sx,
      y: sy,
      docX: this.gridX(sx),
      docY: f,
    };
    this.nodes.set(node.id, node);
    return node;
  }

  moveVertex(id: string, x: number, y: number): void {
    const node = this.nodes.get(id);
    if (!node) return;
    node.x = this.snapX(x);
    node.docX = this.gridX(node.x);
    if (node.f === "inf") {
      node.y = this.panel.pad; // the root stays in its band
      return;
    }
    node.y = this.snapY(y);
    node.f = fForY(this.scale(), node.y);
    node.docY = node.f;
  }

  connect(childId: string, parentId: string): void {
    const child = this.nodes.get(childId);
    if (!child || childId === parentId || !this.nodes.has(parentId)) return;
    if (child.f === "inf") return; // the root never takes a parent
    child.parent = parentId;
  }

  detach(id: string): void {
    const node = this.nodes.get(id);
    if (node) node.parent = null;
  }

  /** Remove a vertex; its children move up to its parent, labels vanish. */
  deleteVertex(id: string): void {
    const node = this.nodes.get(id);
    if (!node) return;
    for (const other of this.nodes.values()) {
      if (other.parent === id) other.parent = node.parent;
    }
    this.nodes.delete(id);
    if (this.selection === id) this.selection = null;
  }

  /** Attach a label, unhooking it from wherever else it sits. */
  assignLabel(id: string, label: number): void {
    const node = this.nodes.get(id);
    if (!node || !Number.isInteger(label)) return;
    this.clearLabel(label);
    node.labels.push(label);
    node.labels.sort((a, b) => a - b);
  }

  clearLabel(label: number): void {
    for (const node of this.nodes.values()) {
      const at = node.labels.indexOf(label);
      if (at >= 0) node.labels.splice(at, 1);
    }
  }

  toDocument(): TreeDocument {
    const ordered = [...this.nodes.values()].sort((a, b) => {
      const ra = a.f === "inf" ? 0 : 1;
      const rb = b.f === "inf" ? 0 : 1;
      if (ra !== rb) return ra - rb;
      const fa = a.f === "inf" ? Infinity : a.f;
      const fb = b.f === "inf" ? Infinity : b.f;
      if (fa !== fb) return fa - fb;
      return a.id < b.id ? -1 : a.id > b.id ? 1 : 0;
    });
    const nodes: TreeNodeDoc[] = ordered.map((node) => {
      const out: TreeNodeDoc = {
        id: node.id,
        f: node.f,
        x: node.docX,
        y: node.docY,
      };
      if (node.parent !== null) out.parent = node.parent;
      if (node.labels.length) out.labels = [...node.labels];
      return out;
    });
    return { version: 1, nodes, metadata: {} };
  }

  /** Structure problems, server-rule mirror; empty means safe to commit. */
  violations(): Problem[] {
    return checkDocument(this.toDocument());
  }

  /** Non-blocking notices, currently just leaves missing a label. */
  warnings(): Problem[] {
    return unlabeledLeaves(this.toDocument()).map((id) => ({
      node: id,
      message: `leaf "${id}" has no label yet`,
    }));
  }

  placement(): Placement {
    const nodes = new Map(
      [...this.nodes.values()].map((node) => [
        node.id,
        {
          id: node.id,
          x: node.x,
          y: node.y,
          f: node.f,
          labels: [...node.labels],
          parent: node.parent,
        },
      ]),
    );
    return { nodes, scale: this.scale(), order: [...this.nodes.keys()] };
  }

  clear(): void {
    this.nodes.clear();
    this.selection = null;
  }
}

/**
 * Load an existing document for editing, for example a session member.
 * Values and positions are taken as they are; the grid only kicks in when
 * a vertex is actually moved, so an untouched member round trips exactly.
 */
export function fromDocument(doc: TreeDocument, panel: EditorPanel): CanvasTree {
  const tree = new CanvasTree(panel);
  const placed = placeTree(doc, panel);
  const scale = tree.scale();
  for (const node of doc.nodes) {
    const spot = placed.nodes.get(node.id);
    const finite = node.f !== "inf";
    const px = spot ? spot.x : panel.width / 2;
    const edit: EditNode = {
      id: node.id,
      f: node.f,
      parent: node.parent ?? null,
      labels: [...(node.labels ?? [])],
      x: px,
      y: finite ? yForF(scale, node.f as number) : panel.pad,
      docX: node.x ?? (px - panel.pad) / panel.gridStep,
      docY: node.y ?? (finite ? (node.f as number) : panel.fMax + 1),
    };
    tree.nodes.set(node.id, edit);
  }
  return tree;
}
