/**
 * Glyph construction for the uncertainty views. Radii arrive precomputed
 * from the service (the graduated rule is r_i = g * deviation_i divided by
 * twice the largest deviation anywhere, so the widest ring spans half the
 * glyph spacing); this module only pairs them with colors and paint order
 * and never rescales a payload number.
 */

import type { FiveNumberDoc, LabelVariationDoc } from "./documents.js";

export type GlyphKind =
  | "circle"
  | "graduated-circle"
  | "line"
  | "graduated-line"
  | "ribbon"
  | "graduated-ribbon";

export interface Ring {
  radius: number;
  color: string;
  /** Member index for variational rings, null for summary rings. */
  member: number | null;
  name?: string;
}

export interface GlyphSpec {
  kind: GlyphKind;
  label: number;
  rings: Ring[];
}

export interface EdgeGlyph {
  kind: GlyphKind;
  /** Lower endpoint vertex id; the edge runs from it to its parent. */
  vertex: string;
  width: number;
  color: string;
  /** (lower, upper) endpoint values for ribbon interpolation. */
  pair?: [number, number];
}

/** Sequential single-hue ramp, light for 0 and saturated dark for 1. */
export function sequentialColor(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const light = 92 - clamped * 62;
  return `hsl(211, 65%, ${light.toFixed(1)}%)`;
}

/** Distinct hues for the five summary rings, darkest inside. */
export const FIVE_NUMBER_COLORS: Record<keyof FiveNumberDoc, string> = {
  min: "hsl(32, 85%, 55%)",
  q1: "hsl(280, 45%, 60%)",
  median: "hsl(0, 65%, 50%)",
  q3: "hsl(145, 45%, 42%)",
  max: "hsl(211, 65%, 45%)",
};

/** Plain circle whose radius is proportional to the consistency value. */
export function circleGlyph(label: number, alpha: number, g: number): GlyphSpec {
  return {
    kind: "circle",
    label,
    rings: [{ radius: (g * alpha) / 2, color: sequentialColor(alpha), member: null }],
  };
}

/**
 * Nested member rings for one label. Radii are the payload values, kept
 * exactly; rings are ordered wide to narrow so every ring stays visible.
 */
export function variationalGlyph(label: number, rec: LabelVariationDoc): GlyphSpec {
  const top = Math.max(...rec.deviations, 0);
  const rings = rec.radii.map((radius, member) => ({
    radius,
    member,
    color: sequentialColor(top > 0 ? rec.deviations[member] / top : 0),
  }));
  rings.sort((a, b) => b.radius - a.radius);
  return { kind: "graduated-circle", label, rings };
}

/**
 * Five nested rings for a five-number summary, radius proportional to the
 * value. Coincident values collapse into a single ring that keeps every
 * name, so an all-agreeing summary paints one circle.
 */
export function statisticalGlyph(label: number, five: FiveNumberDoc, g: number): GlyphSpec {
  const entries = (Object.keys(FIVE_NUMBER_COLORS) as (keyof FiveNumberDoc)[]).map(
    (name) => ({
      name: name as string,
      radius: (g * five[name]) / 2,
      color: FIVE_NUMBER_COLORS[name],
      member: null,
    }),
  );
  const merged: Ring[] = [];
  for (const entry of entries) {
    const twin = merged.find((r) => r.radius === entry.radius);
    if (twin) {
      twin.name = `${twin.name},${entry.name}`;
    } else {
      merged.push({ ...entry });
    }
  }
  merged.sort((a, b) => b.radius - a.radius);
  return { kind: "graduated-circle", label, rings: merged };
}

/** Edge colored and weighted by the minimum of its endpoint values. */
export function edgeGlyphPC(vertex: string, value: number, g: number): EdgeGlyph {
  return {
    kind: "line",
    vertex,
    width: Math.max(1, (g * value) / 4),
    color: sequentialColor(value),
  };
}

/** Ribbon whose two end widths follow the endpoint values. */
export function edgeGlyphPL(vertex: string, pair: [number, number], g: number): EdgeGlyph {
  const mean = (pair[0] + pair[1]) / 2;
  return {
    kind: "ribbon",
    vertex,
    width: Math.max(1, (g * mean) / 4),
    color: sequentialColor(mean),
    pair,
  };
}
