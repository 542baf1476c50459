"""Seeded scene generators, geometric transforms and an independent
reference evaluation of the comparison algorithm.

The oracle here shares only the constant tables (partition knots, the two
associative tables, the matching matrices and the permutation vectors)
with the main path; all evaluation code is its own straight-line
re-implementation over dense membership vectors, which makes agreement
between the two routes a meaningful check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .comparison import (
    CompareConfig,
    PERMUTATIONS,
    build_matching_matrices,
)
from .errors import InsufficientOverlap
from .fam_reasoning import (
    D2_LOCUS_IDX,
    D2_ORIENT_IDX,
    N_D2,
    _fam1_cells,
    _fam2_grid,
)
from .fmp import Scene, SceneObject
from .membership import BoundingBox, FuzzyPartition


@dataclass(frozen=True)
class AxisAlignedTransform:
    """Positive per-axis scaling plus translation."""

    sx: float = 1.0
    sy: float = 1.0
    tx: float = 0.0
    ty: float = 0.0

    def __post_init__(self):
        if not (self.sx > 0 and self.sy > 0):
            raise ValueError("scales must be strictly positive")


def random_scene(seed, count: int, canvas=(0.0, 0.0, 100.0, 100.0)) -> Scene:
    """Deterministic scene of ``count`` boxes with varied layouts.

    Roughly a quarter of the boxes are nested strictly inside an earlier
    one, a quarter hug or overlap an earlier one, the rest land freely, so
    disjoint, crossing and containing relations all occur.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    x0, y0, x1, y1 = canvas
    width, height = x1 - x0, y1 - y0
    min_ext = min(width, height) / 100.0

    boxes = []
    for _ in range(count):
        style = rng.random()
        if style < 0.25 and boxes:
            host = boxes[rng.randrange(len(boxes))]
            wf = rng.uniform(0.15, 0.6)
            hf = rng.uniform(0.15, 0.6)
            cxf = rng.uniform(wf / 2 + 0.02, 0.98 - wf / 2)
            cyf = rng.uniform(hf / 2 + 0.02, 0.98 - hf / 2)
            hw = (host[2] - host[0]) * wf / 2
            hh = (host[3] - host[1]) * hf / 2
            cx = host[0] + (host[2] - host[0]) * cxf
            cy = host[1] + (host[3] - host[1]) * cyf
        elif style < 0.5 and boxes:
            host = boxes[rng.randrange(len(boxes))]
            hostw = host[2] - host[0]
            hosth = host[3] - host[1]
            cx = (host[0] + host[2]) / 2 + rng.uniform(-1.2, 1.2) * hostw
            cy = (host[1] + host[3]) / 2 + rng.uniform(-1.2, 1.2) * hosth
            hw = max(hostw * rng.uniform(0.2, 1.4) / 2, min_ext / 2)
            hh = max(hosth * rng.uniform(0.2, 1.4) / 2, min_ext / 2)
        else:
            hw = max(width * rng.uniform(0.02, 0.25), min_ext) / 2
            hh = max(height * rng.uniform(0.02, 0.25), min_ext) / 2
            cx = rng.uniform(x0, x1)
            cy = rng.uniform(y0, y1)
        boxes.append((cx - hw, cy - hh, cx + hw, cy + hh))

    return Scene(tuple(
        SceneObject(i + 1, f"obj{i + 1}", BoundingBox(*corners))
        for i, corners in enumerate(boxes)
    ))


def random_transform(seed, scale_range=(0.2, 5.0),
                     shift_range=(-200.0, 200.0)) -> AxisAlignedTransform:
    rng = random.Random(seed)
    return AxisAlignedTransform(
        sx=rng.uniform(*scale_range),
        sy=rng.uniform(*scale_range),
        tx=rng.uniform(*shift_range),
        ty=rng.uniform(*shift_range),
    )


def transform_scene(scene: Scene, t: AxisAlignedTransform) -> Scene:
    """Apply (x, y) -> (sx*x + tx, sy*y + ty) to every corner."""
    return Scene(tuple(
        SceneObject(obj.id, obj.label, BoundingBox(
            t.sx * obj.box.x_min + t.tx,
            t.sy * obj.box.y_min + t.ty,
            t.sx * obj.box.x_max + t.tx,
            t.sy * obj.box.y_max + t.ty,
        ))
        for obj in scene.objects
    ))


def mirror_scene(scene: Scene, axis: str = "vertical",
                 x0: float = 0.0, y0: float = 0.0) -> Scene:
    """Reflect a scene about a vertical line (x = x0), a horizontal line
    (y = y0), or the point (x0, y0) which applies both."""
    if axis not in ("vertical", "horizontal", "point"):
        raise ValueError(f"unknown mirror axis {axis!r}")
    objs = []
    for obj in scene.objects:
        bx = obj.box
        xmin, xmax = bx.x_min, bx.x_max
        ymin, ymax = bx.y_min, bx.y_max
        if axis in ("vertical", "point"):
            xmin, xmax = 2.0 * x0 - bx.x_max, 2.0 * x0 - bx.x_min
        if axis in ("horizontal", "point"):
            ymin, ymax = 2.0 * y0 - bx.y_max, 2.0 * y0 - bx.y_min
        objs.append(SceneObject(obj.id, obj.label,
                                BoundingBox(xmin, ymin, xmax, ymax)))
    return Scene(tuple(objs))


# ---------------------------------------------------------------------------
# Reference evaluation over dense vectors
# ---------------------------------------------------------------------------


def _oracle_trapezoid(u, knots):
    a, b, c, d = knots
    if b <= u <= c:
        return 1.0
    if a < u < b:
        return (u - a) / (b - a)
    if c < u < d:
        return (d - u) / (d - c)
    return 0.0


def _oracle_point_vector(u, trapezoids):
    return [_oracle_trapezoid(u, t) for t in trapezoids]


def _oracle_edge_vector(mu_low, mu_high, fam1_cells):
    out = [0.0] * 15
    for (i, j), d in fam1_cells.items():
        m = mu_low[i] if mu_low[i] < mu_high[j] else mu_high[j]
        if m > out[d]:
            out[d] = m
    return out


def _oracle_position_vector(edge_x, edge_y, fam2_grid):
    out = [0.0] * N_D2
    for yi in range(15):
        row = fam2_grid[yi]
        my = edge_y[yi]
        for xi in range(15):
            m = edge_x[xi] if edge_x[xi] < my else my
            d = row[xi]
            if m > out[d]:
                out[d] = m
    return out


def _oracle_fmp(objects, traps_x, traps_y, fam1_cells, fam2_grid):
    n = len(objects)
    matrix = []
    for c in range(n):
        row = []
        box = objects[c].box
        for r in range(n):
            ref = objects[r].box
            u = 2.0 * (box.x_min - ref.x_min) / (ref.x_max - ref.x_min) - 1.0
            u2 = 2.0 * (box.x_max - ref.x_min) / (ref.x_max - ref.x_min) - 1.0
            v = 2.0 * (box.y_min - ref.y_min) / (ref.y_max - ref.y_min) - 1.0
            v2 = 2.0 * (box.y_max - ref.y_min) / (ref.y_max - ref.y_min) - 1.0
            ex = _oracle_edge_vector(
                _oracle_point_vector(u, traps_x),
                _oracle_point_vector(u2, traps_x),
                fam1_cells,
            )
            ey = _oracle_edge_vector(
                _oracle_point_vector(v, traps_y),
                _oracle_point_vector(v2, traps_y),
                fam1_cells,
            )
            row.append(_oracle_position_vector(ex, ey, fam2_grid))
        matrix.append(row)
    return matrix


def oracle_measure(s: Scene, s_prime: Scene,
                   cfg: CompareConfig | None = None,
                   partition=None) -> float:
    """Reference result: trim by shared ids, build dense mutual-position
    matrices, then run the full double descriptor loop per object pair."""
    cfg = cfg or CompareConfig()
    if partition is None:
        part = FuzzyPartition.default()
        traps_x = traps_y = part.trapezoids
    elif isinstance(partition, FuzzyPartition):
        traps_x = traps_y = partition.trapezoids
    else:
        traps_x, traps_y = partition[0].trapezoids, partition[1].trapezoids

    ids_common = sorted(set(s.ids) & set(s_prime.ids))
    n0 = len(ids_common)
    if n0 < 2:
        raise InsufficientOverlap(n0)
    n1, n2 = len(s), len(s_prime)
    n = n1 + n2 - n0
    objs_c = [s.by_id(i) for i in ids_common]
    objs_c_prime = [s_prime.by_id(i) for i in ids_common]

    fam1_cells, _ = _fam1_cells()
    fam2_grid, _ = _fam2_grid()
    fmp1 = _oracle_fmp(objs_c, traps_x, traps_y, fam1_cells, fam2_grid)
    fmp2 = _oracle_fmp(objs_c_prime, traps_x, traps_y, fam1_cells, fam2_grid)

    mm = build_matching_matrices(cfg.mm_or_policy)
    mm_loc = mm.mm_loc
    if cfg.mode == "similarity":
        mm_or = mm.mm_or
    else:
        order = PERMUTATIONS[cfg.mode]
        mm_or = [mm.mm_or[p - 1] for p in order]

    t = cfg.threshold
    s_acc = 0.0
    for i in range(n0):
        for j in range(n0):
            best = 0.0
            va = fmp1[i][j]
            vb = fmp2[i][j]
            for d in range(N_D2):
                if va[d] > t:
                    for d2 in range(N_D2):
                        if vb[d2] > t:
                            s_loc = mm_loc[D2_LOCUS_IDX[d]][D2_LOCUS_IDX[d2]]
                            s_or = mm_or[D2_ORIENT_IDX[d]][D2_ORIENT_IDX[d2]]
                            p = s_loc * s_or
                            if p > best:
                                best = p
            s_acc += best
    return s_acc / (n * n0)
