/**
 * Star summary layout: one link per member radiating from the center,
 * length and color proportional to the member's distance as reported by
 * the service. An ensemble of identical trees collapses to a point.
 */

import type { SummaryDoc } from "./documents.js";
import { sequentialColor } from "./glyphs.js";

export interface StarLink {
  member: number;
  x2: number;
  y2: number;
  length: number;
  color: string;
  distance: number;
  normalized: number;
}

export interface StarPlot {
  cx: number;
  cy: number;
  links: StarLink[];
  radius: number;
}

export function starPlot(summary: SummaryDoc, size: number, pad = 24): StarPlot {
  const cx = size / 2;
  const cy = size / 2;
  const room = size / 2 - pad;
  const maxDistance = Math.max(0, ...summary.links.map((l) => l.distance));
  const count = summary.links.length;

  const links = summary.links.map((link, k) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * k) / Math.max(1, count);
    const length = maxDistance > 0 ? (link.distance / maxDistance) * room : 0;
    return {
      member: link.member,
      x2: cx + length * Math.cos(angle),
      y2: cy + length * Math.sin(angle),
      length,
      color: sequentialColor(link.normalized),
      distance: link.distance,
      normalized: link.normalized,
    };
  });
  return { cx, cy, links, radius: summary.radius };
}
