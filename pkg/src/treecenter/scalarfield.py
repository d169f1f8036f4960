"""Merge trees of gridded scalar fields.

Sweeping a grid from its lowest value upward, connected components of the
sublevel sets appear at local minima and fuse at merge saddles; recording
those events yields the field's merge tree.  Ties are broken by linear pixel
index, which acts as an infinitesimal symbolic perturbation and makes every
sweep deterministic.  Pixels with equal values that meet at their own level
collapse into a single tree vertex rather than stacking zero-length edges.

Leaves are labeled 1..L in ascending value order and every vertex remembers
its (column, row) position, so extracted trees drop straight into the
relabeling and averaging pipeline.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from .errors import InputError
from .trees import INF, LabeledMergeTree, Labeling, MergeTree


@dataclass
class ScalarGrid:
    width: int
    height: int
    values: list[float]
    connectivity: int = 4

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise InputError("grid must have positive width and height")
        if len(self.values) != self.width * self.height:
            raise InputError(
                f"expected {self.width * self.height} values, got {len(self.values)}"
            )
        if self.connectivity not in (4, 8):
            raise InputError("connectivity must be 4 or 8")
        if not all(math.isfinite(v) for v in self.values):
            raise InputError("grid values must be finite")

    def at(self, col: int, row: int) -> float:
        return self.values[row * self.width + col]


@dataclass
class CriticalRecord:
    vertex: str
    kind: str  # "minimum" or "merge-saddle"
    position: tuple[int, int]  # (col, row)
    value: float


def _neighbors(idx: int, grid: ScalarGrid) -> list[int]:
    w, h = grid.width, grid.height
    r, c = divmod(idx, w)
    steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    if grid.connectivity == 8:
        steps += [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    out = []
    for dr, dc in steps:
        rr, cc = r + dr, c + dc
        if 0 <= rr < h and 0 <= cc < w:
            out.append(rr * w + cc)
    return out


def extract_merge_tree(
    grid: ScalarGrid, augmented: bool = False
) -> tuple[LabeledMergeTree, list[CriticalRecord]]:
    """Sublevel-set merge tree of a grid, with critical-point records.

    The augmented tree keeps a vertex for every pixel (plateaus collapsed);
    the default suppresses unlabeled degree-2 vertices so only minima and
    merge points remain.  Both versions induce the same matrix on the leaf
    labels.
    """
    n = grid.width * grid.height
    vals = grid.values
    order = sorted(range(n), key=lambda i: (vals[i], i))

    uf: dict[int, int] = {}

    def find(i: int) -> int:
        r = i
        while uf[r] != r:
            r = uf[r]
        while uf[i] != r:
            uf[i], i = r, uf[i]
        return r

    f: dict[str, float] = {}
    parent: dict[str, str] = {}
    kids: dict[str, list[str]] = {}
    coords: dict[str, tuple[float, ...]] = {}
    top: dict[int, str] = {}
    alias: dict[str, str] = {}
    events: list[tuple[str, str, int]] = []  # (kind, vertex, pixel)

    def new_vertex(idx: int, value: float) -> str:
        name = f"p{idx}"
        f[name] = value
        kids[name] = []
        r, c = divmod(idx, grid.width)
        coords[name] = (float(c), float(r))
        return name

    for idx in order:
        value = vals[idx]
        roots = []
        for nb in _neighbors(idx, grid):
            if nb in uf:
                r = find(nb)
                if r not in roots:
                    roots.append(r)
        if not roots:
            u = new_vertex(idx, value)
            uf[idx] = idx
            top[idx] = u
            events.append(("minimum", u, idx))
            continue
        if len(roots) == 1:
            r = roots[0]
            t = top[r]
            if f[t] != value:
                u = new_vertex(idx, value)
                parent[t] = u
                kids[u].append(t)
                top[r] = u
            uf[idx] = r
            continue
        # idx joins two or more components: a merge saddle appears here.
        w = new_vertex(idx, value)
        for t in sorted((top[r] for r in roots), key=lambda t: (f[t], t)):
            if f[t] == value:
                for c in kids[t]:
                    parent[c] = w
                kids[w].extend(kids[t])
                alias[t] = w
                del f[t], kids[t], coords[t]
            else:
                parent[t] = w
                kids[w].append(t)
        uf[idx] = roots[0]
        for r in roots[1:]:
            uf[r] = roots[0]
        top[roots[0]] = w
        events.append(("merge-saddle", w, idx))

    def resolve(v: str) -> str:
        while v in alias:
            v = alias[v]
        return v

    apex = resolve(top[find(order[-1])])
    root = "root"
    f[root] = INF
    parent[apex] = root
    kids[root] = [apex]
    coords[root] = coords[apex]

    # Labels walk the minima in sweep order, which is ascending value.
    assign: dict[int, str] = {}
    next_label = 1
    records: list[CriticalRecord] = []
    for kind, v, idx in events:
        v = resolve(v)
        r, c = divmod(idx, grid.width)
        records.append(CriticalRecord(v, kind, (c, r), vals[idx]))
        if kind == "minimum":
            assign[next_label] = v
            next_label += 1

    if not augmented:
        labeled = set(assign.values())
        for v in sorted(kids):
            if v == root or v in labeled or v not in f or len(kids[v]) != 1:
                continue
            child = kids[v][0]
            up = parent[v]
            parent[child] = up
            kids[up][kids[up].index(v)] = child
            del f[v], kids[v], coords[v], parent[v]

    tree = MergeTree(root=root, parent=parent, f=f)
    return LabeledMergeTree(tree, Labeling(assign), coords), records


def gaussian_mixture_grid(
    spec: list[tuple[tuple[float, float], float, float]],
    width: int,
    height: int,
    sign: float = -1.0,
) -> ScalarGrid:
    """Sampled sum of Gaussians; sign=-1 turns the peaks into wells.

    Each spec entry is ((center_col, center_row), amplitude, sigma).
    """
    for (_, _), _, sigma in spec:
        if sigma <= 0:
            raise InputError("sigma must be positive")
    values = []
    for r in range(height):
        for c in range(width):
            total = 0.0
            for (cx, cy), amp, sigma in spec:
                d2 = (c - cx) ** 2 + (r - cy) ** 2
                total += amp * math.exp(-d2 / (2.0 * sigma * sigma))
            values.append(sign * total)
    return ScalarGrid(width=width, height=height, values=values)


def parse_grid(data: bytes, connectivity: int = 4) -> ScalarGrid:
    """Read a grid from CSV rows or the binary header+float64 layout.

    Binary files start with little-endian u32 width and height followed by
    exactly width*height 64-bit floats; anything else is treated as CSV with
    one grid row per line.
    """
    if len(data) >= 8:
        w, h = struct.unpack_from("<II", data)
        if w > 0 and h > 0 and len(data) == 8 + 8 * w * h:
            values = list(struct.unpack_from(f"<{w * h}d", data, 8))
            return ScalarGrid(width=w, height=h, values=values, connectivity=connectivity)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError("grid file is neither the binary layout nor text") from None
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([float(x) for x in line.split(",")])
        except ValueError:
            raise InputError(f"bad grid row: {line[:60]!r}") from None
    if not rows:
        raise InputError("grid file contains no rows")
    width = len(rows[0])
    for row in rows:
        if len(row) != width:
            raise InputError("grid rows have unequal lengths")
    values = [v for row in rows for v in row]
    return ScalarGrid(width=width, height=len(rows), values=values, connectivity=connectivity)
