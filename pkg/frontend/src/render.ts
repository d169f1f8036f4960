/**
 * Canvas 2D painters. Pure drawing, no state: callers hand over placed
 * nodes and prebuilt glyph specs and this module puts pixels on screen.
 */

import type { EdgeGlyph, GlyphSpec } from "./glyphs.js";
import type { Placement } from "./layout.js";

export const COLORS = {
  edge: "#5b6470",
  vertex: "#2b3440",
  root: "#97a1ad",
  label: "#1e66c7",
  updated: "#1d9a48",
  selected: "#d97706",
  problem: "#d03232",
  grid: "rgba(110, 120, 135, 0.16)",
  star: "#2b3440",
};

export interface TreeDrawOptions {
  /** Color per label, for consistency-colored animation frames. */
  labelColors?: Map<number, string>;
  /** Labels to paint green, for example freshly updated ones. */
  updatedLabels?: Set<number>;
  selection?: string | null;
  /** Vertex ids with a structure problem, painted red. */
  problems?: Set<string>;
  showIds?: boolean;
}

export function clear(ctx: CanvasRenderingContext2D, width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
}

export function drawGrid(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  pad: number,
  step: number,
): void {
  ctx.save();
  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  for (let x = pad; x <= width - pad + 0.5; x += step) {
    ctx.beginPath();
    ctx.moveTo(x, pad);
    ctx.lineTo(x, height - pad);
    ctx.stroke();
  }
  for (let y = pad; y <= height - pad + 0.5; y += step) {
    ctx.beginPath();
    ctx.moveTo(pad, y);
    ctx.lineTo(width - pad, y);
    ctx.stroke();
  }
  ctx.restore();
}

export function drawTree(
  ctx: CanvasRenderingContext2D,
  placement: Placement,
  options: TreeDrawOptions = {},
): void {
  ctx.save();
  ctx.strokeStyle = COLORS.edge;
  ctx.lineWidth = 1.5;
  for (const node of placement.nodes.values()) {
    if (!node.parent) continue;
    const parent = placement.nodes.get(node.parent);
    if (!parent) continue;
    ctx.beginPath();
    ctx.moveTo(node.x, node.y);
    ctx.lineTo(parent.x, parent.y);
    ctx.stroke();
  }

  ctx.font = "11px system-ui, sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "middle";
  for (const node of placement.nodes.values()) {
    const isRoot = node.f === "inf";
    const problem = options.problems?.has(node.id);
    const selected = options.selection === node.id;
    ctx.beginPath();
    ctx.arc(node.x, node.y, isRoot ? 3 : 4, 0, Math.PI * 2);
    ctx.fillStyle = problem
      ? COLORS.problem
      : selected
        ? COLORS.selected
        : isRoot
          ? COLORS.root
          : COLORS.vertex;
    ctx.fill();
    if (selected) {
      ctx.beginPath();
      ctx.arc(node.x, node.y, 7, 0, Math.PI * 2);
      ctx.strokeStyle = COLORS.selected;
      ctx.lineWidth = 1.5;
      ctx.stroke();
      ctx.strokeStyle = COLORS.edge;
    }
    if (options.showIds && !isRoot) {
      ctx.fillStyle = "#9aa4b0";
      ctx.fillText(node.id, node.x + 8, node.y - 10);
    }
    if (node.labels.length) {
      const text = node.labels.join(",");
      const updated = node.labels.some((l) => options.updatedLabels?.has(l));
      const custom = options.labelColors
        ? node.labels.map((l) => options.labelColors?.get(l)).find((c) => c)
        : undefined;
      ctx.fillStyle = updated ? COLORS.updated : (custom ?? COLORS.label);
      ctx.font = updated ? "bold 12px system-ui, sans-serif" : "12px system-ui, sans-serif";
      ctx.fillText(text, node.x + 7, node.y + 9);
      ctx.font = "11px system-ui, sans-serif";
    }
  }
  ctx.restore();
}

/** Stroke glyph rings centered on the vertex that carries each label. */
export function drawGlyphs(
  ctx: CanvasRenderingContext2D,
  placement: Placement,
  glyphs: GlyphSpec[],
  labelVertex: Map<number, string>,
): void {
  ctx.save();
  for (const glyph of glyphs) {
    const vid = labelVertex.get(glyph.label);
    const node = vid ? placement.nodes.get(vid) : undefined;
    if (!node) continue;
    for (const ring of glyph.rings) {
      if (ring.radius <= 0) continue;
      ctx.beginPath();
      ctx.arc(node.x, node.y, ring.radius, 0, Math.PI * 2);
      ctx.strokeStyle = ring.color;
      ctx.lineWidth = 1.6;
      ctx.stroke();
    }
  }
  ctx.restore();
}

/** Paint edge glyphs: plain weighted lines or two-width ribbons. */
export function drawEdgeGlyphs(
  ctx: CanvasRenderingContext2D,
  placement: Placement,
  glyphs: EdgeGlyph[],
): void {
  ctx.save();
  for (const glyph of glyphs) {
    const lower = placement.nodes.get(glyph.vertex);
    const upper = lower?.parent ? placement.nodes.get(lower.parent) : undefined;
    if (!lower || !upper) continue;
    if (glyph.kind === "ribbon" || glyph.kind === "graduated-ribbon") {
      const [a, b] = glyph.pair ?? [glyph.width, glyph.width];
      const wLow = Math.max(1, (a * glyph.width) / Math.max(a, b, 1e-9));
      const wUp = Math.max(1, (b * glyph.width) / Math.max(a, b, 1e-9));
      const dx = upper.x - lower.x;
      const dy = upper.y - lower.y;
      const len = Math.hypot(dx, dy) || 1;
      const nx = -dy / len;
      const ny = dx / len;
      ctx.beginPath();
      ctx.moveTo(lower.x + nx * wLow, lower.y + ny * wLow);
      ctx.lineTo(upper.x + nx * wUp, upper.y + ny * wUp);
      ctx.lineTo(upper.x - nx * wUp, upper.y - ny * wUp);
      ctx.lineTo(lower.x - nx * wLow, lower.y - ny * wLow);
      ctx.closePath();
      ctx.fillStyle = glyph.color;
      ctx.globalAlpha = 0.7;
      ctx.fill();
      ctx.globalAlpha = 1;
    } else {
      ctx.beginPath();
      ctx.moveTo(lower.x, lower.y);
      ctx.lineTo(upper.x, upper.y);
      ctx.strokeStyle = glyph.color;
      ctx.lineWidth = glyph.width;
      ctx.stroke();
    }
  }
  ctx.restore();
}

export interface StarDrawable {
  cx: number;
  cy: number;
  links: { member: number; x2: number; y2: number; color: string }[];
}

export function drawStar(ctx: CanvasRenderingContext2D, star: StarDrawable): void {
  ctx.save();
  ctx.font = "11px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const link of star.links) {
    ctx.beginPath();
    ctx.moveTo(star.cx, star.cy);
    ctx.lineTo(link.x2, link.y2);
    ctx.strokeStyle = link.color;
    ctx.lineWidth = 2;
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(link.x2, link.y2, 5, 0, Math.PI * 2);
    ctx.fillStyle = link.color;
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.fillText(String(link.member), link.x2, link.y2);
  }
  ctx.beginPath();
  ctx.arc(star.cx, star.cy, 6, 0, Math.PI * 2);
  ctx.fillStyle = COLORS.star;
  ctx.fill();
  ctx.restore();
}
