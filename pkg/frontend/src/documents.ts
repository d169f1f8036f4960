/**
 * Shapes of the JSON documents exchanged with the service, plus quick local
 * structure checks. The server stays the authority on validity; the checks
 * here exist so the editor can flag problems inline before a round trip,
 * and they mirror the server's rules (one root at "inf" with one child,
 * values strictly decreasing away from the root, no cycles, unique labels).
 */

export interface TreeNodeDoc {
  id: string;
  f: number | "inf";
  parent?: string;
  labels?: number[];
  x?: number;
  y?: number;
  z?: number;
}

export interface TreeDocument {
  version: 1;
  nodes: TreeNodeDoc[];
  metadata: Record<string, unknown>;
}

export interface RelabelReportDoc {
  member: number;
  mode: string;
  renamed: Record<string, number>;
  extra: Record<string, string>;
  cost: number;
}

export interface CenterDoc {
  center: TreeDocument;
  radius: number;
  member_distances: number[];
  normalized_distances: number[];
  center_matrix_ultra: boolean;
  relabel_reports?: RelabelReportDoc[];
}

export interface SummaryLink {
  member: number;
  distance: number;
  normalized: number;
}

export interface SummaryDoc {
  radius: number;
  links: SummaryLink[];
}

export interface LabelVariationDoc {
  mean: number;
  deviations: number[];
  radii: number[];
}

export interface FiveNumberDoc {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export interface ConsistencyDoc {
  delta: number;
  lambda: number;
  g: number;
  labels: number[];
  vertex: Record<string, number>[];
  variational: {
    max_deviation: number;
    per_label: Record<string, LabelVariationDoc>;
  };
  statistical: Record<string, FiveNumberDoc>;
  edge_pc: Record<string, number>[];
  edge_pl: Record<string, [number, number]>[];
}

export interface GeodesicFrameDoc {
  lambda: number;
  tree: TreeDocument;
  consistency?: Record<string, number>;
}

export interface GeodesicDoc {
  steps: number;
  frames: GeodesicFrameDoc[];
}

export type AgreementMode = "auto" | "full" | "partial" | "disagree";

export interface SessionConfig {
  delta: number;
  lambda: number;
  steps: number;
  mode: AgreementMode;
}

export interface SessionState {
  id: string;
  config: SessionConfig;
  members: TreeDocument[];
  has_center: boolean;
}

/** One structural problem; node is null for tree-wide issues. */
export interface Problem {
  node: string | null;
  message: string;
}

export function fValue(node: TreeNodeDoc): number {
  return node.f === "inf" ? Infinity : node.f;
}

export function emptyDocument(): TreeDocument {
  return { version: 1, nodes: [], metadata: {} };
}

/**
 * Structure checks mirroring server validation, returned as data so the
 * editor can show them inline next to the offending vertex.
 */
export function checkDocument(doc: TreeDocument): Problem[] {
  const problems: Problem[] = [];
  const byId = new Map<string, TreeNodeDoc>();
  for (const node of doc.nodes) {
    if (byId.has(node.id)) {
      problems.push({ node: node.id, message: `duplicate node id "${node.id}"` });
    }
    byId.set(node.id, node);
  }

  const roots = doc.nodes.filter((n) => n.parent === undefined);
  if (roots.length !== 1) {
    problems.push({
      node: null,
      message: `exactly one root is required, found ${roots.length}`,
    });
  }
  for (const root of roots) {
    if (root.f !== "inf") {
      problems.push({ node: root.id, message: "the root must sit at \"inf\"" });
    }
    const children = doc.nodes.filter((n) => n.parent === root.id);
    if (roots.length === 1 && children.length !== 1) {
      problems.push({
        node: root.id,
        message: `the root needs exactly one child, found ${children.length}`,
      });
    }
  }

  const seenLabels = new Map<number, string>();
  for (const node of doc.nodes) {
    if (node.f === "inf" && node.parent !== undefined) {
      problems.push({ node: node.id, message: "only the root may sit at \"inf\"" });
    }
    for (const label of node.labels ?? []) {
      const other = seenLabels.get(label);
      if (other !== undefined) {
        problems.push({
          node: node.id,
          message: `label ${label} already sits on "${other}"`,
        });
      } else {
        seenLabels.set(label, node.id);
      }
    }
  }

  for (const node of doc.nodes) {
    if (node.parent === undefined) continue;
    const parent = byId.get(node.parent);
    if (!parent) {
      problems.push({ node: node.id, message: `unknown parent "${node.parent}"` });
      continue;
    }
    const fv = fValue(node);
    const fp = fValue(parent);
    if (fv === fp) {
      problems.push({
        node: node.id,
        message: `value ties its parent "${parent.id}"; edges need strictly increasing values`,
      });
    } else if (fv > fp) {
      problems.push({
        node: node.id,
        message: `sits above its parent "${parent.id}" (${fv} > ${String(parent.f)})`,
      });
    }
  }

  // Walk each parent chain; a chain that revisits a vertex loops.
  const state = new Map<string, number>(); // 0 in progress, 1 done
  for (const node of doc.nodes) {
    const path: string[] = [];
    let current: TreeNodeDoc | undefined = node;
    while (current) {
      if (state.get(current.id) === 1) break;
      if (state.get(current.id) === 0) {
        problems.push({ node: current.id, message: "parent chain loops" });
        break;
      }
      state.set(current.id, 0);
      path.push(current.id);
      current = current.parent === undefined ? undefined : byId.get(current.parent);
    }
    for (const id of path) state.set(id, 1);
  }

  return problems;
}

/** Vertices that no other vertex names as parent. */
export function leafIds(doc: TreeDocument): string[] {
  const parents = new Set<string>();
  for (const node of doc.nodes) {
    if (node.parent !== undefined) parents.add(node.parent);
  }
  return doc.nodes.filter((n) => !parents.has(n.id)).map((n) => n.id);
}

/** Leaves without any label; legal, but they cannot take part in matching. */
export function unlabeledLeaves(doc: TreeDocument): string[] {
  return leafIds(doc).filter((id) => {
    const node = doc.nodes.find((n) => n.id === id);
    return !node || (node.labels ?? []).length === 0;
  });
}
