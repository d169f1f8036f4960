/**
 * Node placement for drawing tree documents on a panel. The vertical axis
 * encodes the function value: larger values sit higher, and the root's
 * "inf" gets a reserved band above every finite value. Horizontal
 * positions come from the document when present, otherwise leaves are
 * spread evenly and internal vertices take the mean of their children.
 */

import type { TreeDocument } from "./documents.js";
import { fValue } from "./documents.js";

export interface Panel {
  width: number;
  height: number;
  pad: number;
  /** Vertical room reserved for the root above the finite value range. */
  rootBand: number;
}

export interface ValueScale {
  fMin: number;
  fMax: number;
  yTop: number;
  yBottom: number;
  rootY: number;
}

export interface PlacedNode {
  id: string;
  x: number;
  y: number;
  f: number | "inf";
  labels: number[];
  parent: string | null;
}

export interface Placement {
  nodes: Map<string, PlacedNode>;
  scale: ValueScale;
  order: string[];
}

export function snap(value: number, step: number): number {
  if (step <= 0) return value;
  return Math.round(value / step) * step;
}

/** Pixel y for a finite value; lower values sit lower on the panel. */
export function yForF(scale: ValueScale, f: number): number {
  const span = scale.fMax - scale.fMin;
  if (span <= 0) return (scale.yTop + scale.yBottom) / 2;
  const t = (f - scale.fMin) / span;
  return scale.yBottom - t * (scale.yBottom - scale.yTop);
}

/** Inverse of yForF, used by the editor to read a value off the grid. */
export function fForY(scale: ValueScale, y: number): number {
  const pixels = scale.yBottom - scale.yTop;
  if (pixels <= 0) return scale.fMin;
  const t = (scale.yBottom - y) / pixels;
  return scale.fMin + t * (scale.fMax - scale.fMin);
}

export function valueScale(doc: TreeDocument, panel: Panel): ValueScale {
  const finite = doc.nodes.map(fValue).filter((f) => Number.isFinite(f));
  let fMin = finite.length ? Math.min(...finite) : 0;
  let fMax = finite.length ? Math.max(...finite) : 1;
  if (fMax - fMin <= 0) {
    // A flat range still needs a usable scale, pad it by one unit.
    fMin -= 0.5;
    fMax += 0.5;
  }
  return {
    fMin,
    fMax,
    yTop: panel.pad + panel.rootBand,
    yBottom: panel.height - panel.pad,
    rootY: panel.pad,
  };
}

export function placeTree(doc: TreeDocument, panel: Panel): Placement {
  const scale = valueScale(doc, panel);
  const nodes = new Map<string, PlacedNode>();
  const order = doc.nodes.map((n) => n.id);

  const hasOwnX = doc.nodes.length > 0 && doc.nodes.every((n) => typeof n.x === "number");
  const xs = new Map<string, number>();

  if (hasOwnX) {
    const raw = doc.nodes.map((n) => n.x as number);
    const xMin = Math.min(...raw);
    const xMax = Math.max(...raw);
    const span = xMax - xMin;
    for (const node of doc.nodes) {
      const t = span > 0 ? ((node.x as number) - xMin) / span : 0.5;
      xs.set(node.id, panel.pad + t * (panel.width - 2 * panel.pad));
    }
  } else {
    // Leaves in document order, then parents as the mean of their children.
    const children = new Map<string, string[]>();
    for (const node of doc.nodes) {
      if (node.parent !== undefined) {
        const list = children.get(node.parent) ?? [];
        list.push(node.id);
        children.set(node.parent, list);
      }
    }
    const leaves = doc.nodes.filter((n) => !children.has(n.id));
    const room = panel.width - 2 * panel.pad;
    leaves.forEach((leaf, i) => {
      const t = leaves.length > 1 ? i / (leaves.length - 1) : 0.5;
      xs.set(leaf.id, panel.pad + t * room);
    });
    // Ascending by value so every child is placed before its parent.
    const internal = doc.nodes
      .filter((n) => children.has(n.id))
      .sort((a, b) => fValue(a) - fValue(b));
    for (const node of internal) {
      const kids = children.get(node.id) ?? [];
      const known = kids.map((k) => xs.get(k)).filter((v): v is number => v !== undefined);
      xs.set(
        node.id,
        known.length ? known.reduce((s, v) => s + v, 0) / known.length : panel.width / 2,
      );
    }
  }

  for (const node of doc.nodes) {
    const f = fValue(node);
    nodes.set(node.id, {
      id: node.id,
      x: xs.get(node.id) ?? panel.width / 2,
      y: Number.isFinite(f) ? yForF(scale, f) : scale.rootY,
      f: node.f,
      labels: node.labels ?? [],
      parent: node.parent ?? null,
    });
  }
  return { nodes, scale, order };
}

/** Closest placed node within tolerance, or null when nothing is near. */
export function nearestNode(
  placement: Placement,
  x: number,
  y: number,
  tolerance: number,
): PlacedNode | null {
  let best: PlacedNode | null = null;
  let bestDist = Infinity;
  for (const node of placement.nodes.values()) {
    const d = Math.hypot(node.x - x, node.y - y);
    if (d < bestDist) {
      best = node;
      bestDist = d;
    }
  }
  return bestDist <= tolerance ? best : null;
}
