"""Descriptor vocabularies, fuzzy associative tables and the two
inference stages that turn corner memberships into 2-D position
descriptors.

The pipeline for one (box, reference) pair is:

    corner memberships (per axis)       -- membership module
      -> edge descriptors per axis      -- FAM1, min-max inference
      -> one 2-D position descriptor    -- FAM2, min-max inference

FAM1 maps an ordered pair of point descriptors (low corner, high corner)
to an edge descriptor such as ``CR/L`` (crossing, leftward).  FAM2 maps a
(y-edge, x-edge) descriptor pair to a 2-D descriptor such as ``TO/LA``
(touching, left-above).  Both tables ship with a built-in seed of cells
that pin the semantics; the remaining cells are completed by reflection
symmetry plus two small rules, and every completion is cross-checked so a
contradiction with the seed raises ``InternalInconsistency``.

Cell provenance is recorded per cell: ``fragment`` for seed cells,
``mirror`` for reflection-derived cells, ``rule`` for cells produced (or
mirrored from cells produced) by the span/outermost-locus rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InternalInconsistency
from .membership import (
    FuzzyPartition,
    POINT_NAMES,
    POINT_INDEX,
    fuzzify_indexed,
    relativize_box,
)

# ---------------------------------------------------------------------------
# Vocabularies
# ---------------------------------------------------------------------------

# Edge (1-D) descriptors.  The leftward block mirrors the rightward block
# (index i <-> 11 - i); the last three have no direction and use H (or V on
# the vertical axis).
EDGE_ORDER_X = (
    "FA/L", "NE/L", "CL/L", "TO/L", "CR/L", "IN/L",
    "IN/R", "CR/R", "TO/R", "CL/R", "NE/R", "FA/R",
    "SH/H", "SA/H", "LO/H",
)

_DIR_TO_Y = {"L": "A", "R": "B", "H": "V"}


def edge_to_y(token: str) -> str:
    """Translate an x-axis edge descriptor to its y-axis counterpart."""
    kind, direction = token.split("/")
    return f"{kind}/{_DIR_TO_Y[direction]}"


EDGE_ORDER_Y = tuple(edge_to_y(t) for t in EDGE_ORDER_X)
EDGE_INDEX_X = {t: i for i, t in enumerate(EDGE_ORDER_X)}
EDGE_INDEX_Y = {t: i for i, t in enumerate(EDGE_ORDER_Y)}


def mirror_edge_index(i: int) -> int:
    """Edge descriptor counterpart under reflection along its own axis."""
    return 11 - i if i < 12 else i


# 2-D descriptors: a locus part (reflection invariant) and an orientation
# part.  LG/HO and LG/VE are included because the seed table emits them.
D2_LOCI = ("FA", "NE", "CL", "TO", "CR", "IN", "LG", "SP", "SA")
D2_ORIENTS = ("LE", "LA", "AB", "RA", "RI", "RB", "BE", "LB", "CE", "HO", "VE")

_PRIMARY_DIRECTIONS = D2_ORIENTS[:8]
_ALLOWED_ORIENTS = {
    "FA": _PRIMARY_DIRECTIONS,
    "NE": _PRIMARY_DIRECTIONS,
    "CL": _PRIMARY_DIRECTIONS,
    "TO": _PRIMARY_DIRECTIONS,
    "CR": _PRIMARY_DIRECTIONS,
    "IN": _PRIMARY_DIRECTIONS + ("CE",),
    "LG": ("CE", "HO", "VE"),
    "SP": ("LE", "RI", "AB", "BE", "HO", "VE"),
    "SA": ("CE",),
}

D2_ORDER = tuple(
    f"{locus}/{orient}"
    for locus in D2_LOCI
    for orient in D2_ORIENTS
    if orient in _ALLOWED_ORIENTS[locus]
)
D2_INDEX = {name: i for i, name in enumerate(D2_ORDER)}
N_D2 = len(D2_ORDER)

_LOCUS_INDEX = {name: i for i, name in enumerate(D2_LOCI)}
_ORIENT_INDEX = {name: i for i, name in enumerate(D2_ORIENTS)}
D2_LOCUS_IDX = tuple(_LOCUS_INDEX[name.split("/")[0]] for name in D2_ORDER)
D2_ORIENT_IDX = tuple(_ORIENT_INDEX[name.split("/")[1]] for name in D2_ORDER)

_H_ORIENT_SWAP = {"LE": "RI", "RI": "LE", "LA": "RA", "RA": "LA", "LB": "RB", "RB": "LB"}
_V_ORIENT_SWAP = {"AB": "BE", "BE": "AB", "LA": "LB", "LB": "LA", "RA": "RB", "RB": "RA"}


def hmirror_d2(name: str) -> str:
    """2-D descriptor counterpart under reflection about a vertical line."""
    locus, orient = name.split("/")
    return f"{locus}/{_H_ORIENT_SWAP.get(orient, orient)}"


def vmirror_d2(name: str) -> str:
    """2-D descriptor counterpart under reflection about a horizontal line."""
    locus, orient = name.split("/")
    return f"{locus}/{_V_ORIENT_SWAP.get(orient, orient)}"


HMIRROR_D2_IDX = tuple(D2_INDEX[hmirror_d2(n)] for n in D2_ORDER)
VMIRROR_D2_IDX = tuple(D2_INDEX[vmirror_d2(n)] for n in D2_ORDER)

# ---------------------------------------------------------------------------
# FAM1: (low corner, high corner) point descriptors -> edge descriptor
# ---------------------------------------------------------------------------

# Seed cells, x-axis vocabulary.  Keys are ordered pairs (row <= column in
# canonical point order), so only 55 of the 100 combinations ever exist.
FAM1_SEED = {
    ("fl", "fl"): "FA/L", ("fl", "nl"): "NE/L", ("fl", "cl"): "CL/L",
    ("fl", "el"): "TO/L", ("fl", "il"): "CR/L", ("fl", "ir"): "CR/L",
    ("fl", "er"): "CR/L", ("fl", "cr"): "LO/H",
    ("nl", "nl"): "NE/L", ("nl", "cl"): "CL/L", ("nl", "el"): "TO/L",
    ("nl", "il"): "CR/L", ("nl", "ir"): "CR/L", ("nl", "er"): "CR/L",
    ("nl", "cr"): "LO/H",
    ("cl", "cl"): "CL/L", ("cl", "el"): "TO/L", ("cl", "il"): "CR/L",
    ("cl", "ir"): "CR/L", ("cl", "er"): "CR/L", ("cl", "cr"): "LO/H",
    ("el", "el"): "TO/L", ("el", "il"): "IN/L", ("el", "ir"): "IN/L",
    ("el", "er"): "SA/H", ("el", "cr"): "CR/R",
    ("il", "il"): "IN/L", ("il", "ir"): "SH/H", ("il", "er"): "IN/R",
    ("il", "cr"): "CR/R",
    ("ir", "ir"): "IN/R", ("ir", "er"): "IN/R", ("ir", "cr"): "CR/R",
    ("er", "er"): "TO/R", ("er", "cr"): "TO/R",
}

# Corners on opposite outer sides mean the edge covers the whole reference
# span: first in {fl, nl, cl} and second in {cr, nr, fr} -> LO/H.
_SPAN_LOW = frozenset((0, 1, 2))
_SPAN_HIGH = frozenset((7, 8, 9))


@lru_cache(maxsize=1)
def _fam1_cells():
    """Complete 55-cell FAM1 on indices; returns (cells, provenance)."""
    pidx = POINT_INDEX["x"]
    cells = {}
    prov = {}
    for (p1, p2), out in FAM1_SEED.items():
        key = (pidx[p1], pidx[p2])
        cells[key] = EDGE_INDEX_X[out]
        prov[key] = "fragment"

    pending = [
        (i, j) for i in range(10) for j in range(i, 10) if (i, j) not in cells
    ]
    while pending:
        remaining = []
        progressed = False
        for i, j in pending:
            source = (9 - j, 9 - i)
            if source in cells:
                cells[(i, j)] = mirror_edge_index(cells[source])
                prov[(i, j)] = "rule" if prov[source] == "rule" else "mirror"
                progressed = True
            elif i in _SPAN_LOW and j in _SPAN_HIGH:
                cells[(i, j)] = EDGE_INDEX_X["LO/H"]
                prov[(i, j)] = "rule"
                progressed = True
            else:
                remaining.append((i, j))
        if remaining and not progressed:
            raise InternalInconsistency(
                f"FAM1 completion stalled; unresolved cells {remaining}"
            )
        pending = remaining

    # Closure check: reflection applied to the completed table must agree
    # with every existing cell, seed cells included.
    for (i, j), out in cells.items():
        mirrored = cells[(9 - j, 9 - i)]
        if mirrored != mirror_edge_index(out):
            raise InternalInconsistency(
                f"FAM1 mirror contradiction at ({i},{j}): "
                f"{EDGE_ORDER_X[out]} vs {EDGE_ORDER_X[mirrored]}"
            )
        if i in _SPAN_LOW and j in _SPAN_HIGH and EDGE_ORDER_X[out] != "LO/H":
            raise InternalInconsistency(
                f"FAM1 span contradiction at ({i},{j}): {EDGE_ORDER_X[out]}"
            )
    return cells, prov


# ---------------------------------------------------------------------------
# FAM2: (y edge, x edge) -> 2-D descriptor
# ---------------------------------------------------------------------------

# Seed cells: rows are y-axis edge descriptors, columns x-axis ones.
FAM2_SEED_COLUMNS = ("CL/L", "TO/L", "CR/L", "IN/L", "SH/H", "SA/H", "LO/H")
FAM2_SEED_ROWS = {
    "FA/A": ("FA/LA", "FA/AB", "FA/AB", "FA/AB", "FA/AB", "FA/AB", "FA/AB"),
    "NE/A": ("NE/LA", "NE/LA", "NE/AB", "NE/AB", "NE/AB", "NE/AB", "NE/AB"),
    "CL/A": ("CL/LA", "CL/LA", "CL/AB", "CL/AB", "CL/AB", "CL/AB", "CL/AB"),
    "TO/A": ("CL/LA", "TO/LA", "TO/LA", "TO/AB", "TO/AB", "TO/AB", "TO/AB"),
    "CR/A": ("CL/LE", "TO/LA", "CR/LA", "CR/AB", "CR/AB", "CR/AB", "CR/AB"),
    "IN/A": ("CL/LE", "TO/LE", "CR/LE", "IN/LA", "IN/AB", "IN/AB", "SP/AB"),
    "SH/V": ("CL/LE", "TO/LE", "CR/LE", "IN/LE", "IN/CE", "SP/HO", "SP/HO"),
    "SA/V": ("CL/LE", "TO/LE", "CR/LE", "IN/LE", "SP/VE", "SA/CE", "LG/HO"),
    "LO/V": ("CL/LE", "TO/LE", "CR/LE", "SP/LE", "SP/VE", "LG/VE", "LG/CE"),
}

# Ranking used to complete the far-left / near-left columns: the output
# locus is the outermost of the two input kinds.
_OUTERMOST_RANK = {
    "FA": 0, "NE": 1, "CL": 2, "TO": 3, "CR": 4,
    "IN": 5, "SH": 5, "SA": 5, "LO": 5,
}


def _edge_kind(idx: int) -> str:
    return EDGE_ORDER_X[idx].split("/")[0]


@lru_cache(maxsize=1)
def _fam2_grid():
    """Complete 15x15 FAM2 on indices; returns (grid, provenance)."""
    cells = {}
    prov = {}
    for row_name, outputs in FAM2_SEED_ROWS.items():
        yi = EDGE_INDEX_Y[row_name]
        for col_name, out in zip(FAM2_SEED_COLUMNS, outputs):
            key = (yi, EDGE_INDEX_X[col_name])
            cells[key] = D2_INDEX[out]
            prov[key] = "fragment"

    seed_rows = tuple(EDGE_INDEX_Y[name] for name in FAM2_SEED_ROWS)

    # Far/near leftward columns: locus is the outermost of the two input
    # kinds, orientation is copied from the close-left column of the row.
    cl_left = EDGE_INDEX_X["CL/L"]
    for yi in seed_rows:
        row_kind = EDGE_ORDER_Y[yi].split("/")[0]
        template = D2_ORDER[cells[(yi, cl_left)]]
        orient = template.split("/")[1]
        for col_name in ("FA/L", "NE/L"):
            xi = EDGE_INDEX_X[col_name]
            col_kind = col_name.split("/")[0]
            if _OUTERMOST_RANK[col_kind] <= _OUTERMOST_RANK[row_kind]:
                locus = col_kind
            else:
                locus = row_kind
            _fill(cells, prov, (yi, xi), D2_INDEX[f"{locus}/{orient}"], "rule")

    # Rightward columns from leftward ones by horizontal reflection.
    for yi in seed_rows:
        for xi in range(15):
            src = (yi, mirror_edge_index(xi))
            if src in cells and (yi, xi) not in cells:
                value = HMIRROR_D2_IDX[cells[src]]
                kind = "rule" if prov[src] == "rule" else "mirror"
                _fill(cells, prov, (yi, xi), value, kind)

    # Downward rows from upward ones by vertical reflection.
    for yi in range(15):
        src_row = mirror_edge_index(yi)
        if src_row == yi:
            continue
        for xi in range(15):
            src = (src_row, xi)
            if src in cells and (yi, xi) not in cells:
                value = VMIRROR_D2_IDX[cells[src]]
                kind = "rule" if prov[src] == "rule" else "mirror"
                _fill(cells, prov, (yi, xi), value, kind)

    missing = [(y, x) for y in range(15) for x in range(15) if (y, x) not in cells]
    if missing:
        raise InternalInconsistency(f"FAM2 incomplete; missing cells {missing}")

    # Closure check: both reflections applied to the completed table must
    # reproduce it exactly.
    for (yi, xi), out in cells.items():
        h = cells[(yi, mirror_edge_index(xi))]
        if h != HMIRROR_D2_IDX[out]:
            raise InternalInconsistency(
                f"FAM2 horizontal-mirror contradiction at row "
                f"{EDGE_ORDER_Y[yi]}, col {EDGE_ORDER_X[xi]}"
            )
        v = cells[(mirror_edge_index(yi), xi)]
        if v != VMIRROR_D2_IDX[out]:
            raise InternalInconsistency(
                f"FAM2 vertical-mirror contradiction at row "
                f"{EDGE_ORDER_Y[yi]}, col {EDGE_ORDER_X[xi]}"
            )

    grid = tuple(tuple(cells[(y, x)] for x in range(15)) for y in range(15))
    return grid, prov


def _fill(cells, prov, key, value, kind):
    if key in cells:
        if cells[key] != value:
            raise InternalInconsistency(
                f"completion wrote {value} over {cells[key]} at {key}"
            )
        return
    cells[key] = value
    prov[key] = kind


# ---------------------------------------------------------------------------
# Public table objects
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamTable:
    """One associative table with named cells and per-cell provenance."""

    stage: str  # "FAM1x" | "FAM1y" | "FAM2"
    row_labels: tuple
    col_labels: tuple
    cells: dict  # (row token, col token) -> output token
    provenance: dict  # same keys -> "fragment" | "mirror" | "rule"

    def dump_grid(self) -> str:
        """Plain-text grid; '--' marks combinations that do not exist."""
        width = max(
            [len(t) for t in self.cells.values()]
            + [len(t) for t in self.row_labels + self.col_labels]
            + [2]
        ) + 2
        lines = ["".ljust(width) + "".join(c.ljust(width) for c in self.col_labels)]
        for r in self.row_labels:
            row = [r.ljust(width)]
            for c in self.col_labels:
                row.append(self.cells.get((r, c), "--").ljust(width))
            lines.append("".join(row).rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_grid(cls, text: str, stage: str = "custom") -> "FamTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        cells = {}
        rows = []
        for ln in lines[1:]:
            parts = ln.split()
            row = parts[0]
            rows.append(row)
            if len(parts) - 1 != len(header):
                raise ValueError(f"row {row!r} has {len(parts) - 1} cells, "
                                 f"expected {len(header)}")
            for col, token in zip(header, parts[1:]):
                if token != "--":
                    cells[(row, col)] = token
        prov = {k: "fragment" for k in cells}
        return cls(stage, tuple(rows), tuple(header), cells, prov)


def build_fam1(axis: str = "x") -> FamTable:
    """Edge-descriptor table for one axis, seed cells completed by mirror
    and span rules.  The vertical variant substitutes a/b and A/B/V."""
    cells_idx, prov_idx = _fam1_cells()
    points = POINT_NAMES[axis]
    edges = EDGE_ORDER_X if axis == "x" else EDGE_ORDER_Y
    cells = {}
    prov = {}
    for (i, j), out in cells_idx.items():
        key = (points[i], points[j])
        cells[key] = edges[out]
        prov[key] = prov_idx[(i, j)]
    return FamTable("FAM1x" if axis == "x" else "FAM1y", points, points, cells, prov)


def build_fam2() -> FamTable:
    """2-D descriptor table: rows are y-axis edges, columns x-axis edges."""
    grid, prov_idx = _fam2_grid()
    cells = {}
    prov = {}
    for yi in range(15):
        for xi in range(15):
            key = (EDGE_ORDER_Y[yi], EDGE_ORDER_X[xi])
            cells[key] = D2_ORDER[grid[yi][xi]]
            prov[key] = prov_idx[(yi, xi)]
    return FamTable("FAM2", EDGE_ORDER_Y, EDGE_ORDER_X, cells, prov)


# ---------------------------------------------------------------------------
# Min-max inference
# ---------------------------------------------------------------------------


def infer_1d(mu_p: dict, mu_p2: dict, fam: FamTable) -> dict:
    """Edge-descriptor memberships from two corner membership maps.

    mu_p / mu_p2 describe the low and high corner (low <= high), so only
    ordered table cells are consulted.  For every edge descriptor d the
    result holds max over contributing cells of min of the two inputs.
    """
    out = {}
    for d1, m1 in mu_p.items():
        for d2, m2 in mu_p2.items():
            token = fam.cells.get((d1, d2))
            if token is None:
                continue
            m = m1 if m1 < m2 else m2
            if m > out.get(token, 0.0):
                out[token] = m
    return out


def infer_2d(mu_x: dict, mu_y: dict, fam2: FamTable) -> dict:
    """2-D descriptor memberships from per-axis edge membership maps."""
    out = {}
    for dy, my in mu_y.items():
        for dx, mx in mu_x.items():
            token = fam2.cells.get((dy, dx))
            if token is None:
                continue
            m = mx if mx < my else my
            if m > out.get(token, 0.0):
                out[token] = m
    return out


# ---------------------------------------------------------------------------
# Fused lookup: four point descriptors -> 2-D descriptor in one step
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FusedLookup:
    """Both tables collapsed into one 4-D structure indexed by the point
    descriptors of (x low, x high, y low, y high).

    ``flat[((x1 * 10 + x2) * 10 + y1) * 10 + y2]`` is the 2-D descriptor
    index, or -1 where either corner pair is unordered.
    """

    flat: tuple

    def lookup(self, x1: str, x2: str, y1: str, y2: str) -> str | None:
        """Crisp query by point-descriptor names; None when unordered."""
        xi = POINT_INDEX["x"]
        yi = POINT_INDEX["y"]
        d = self.flat[((xi[x1] * 10 + xi[x2]) * 10 + yi[y1]) * 10 + yi[y2]]
        return None if d < 0 else D2_ORDER[d]


def fuse_fams(fam1x: FamTable, fam1y: FamTable, fam2: FamTable) -> FusedLookup:
    """Join the three tables; equivalent to running both stages."""
    x_points = {name: i for i, name in enumerate(fam1x.row_labels)}
    y_points = {name: i for i, name in enumerate(fam1y.row_labels)}
    x_edges = EDGE_INDEX_X
    y_edges = EDGE_INDEX_Y

    d2_grid = {}
    for (dy, dx), out in fam2.cells.items():
        d2_grid[(y_edges[dy], x_edges[dx])] = D2_INDEX[out]

    flat = [-1] * 10000
    x_cells = {
        (x_points[a], x_points[b]): x_edges[out]
        for (a, b), out in fam1x.cells.items()
    }
    y_cells = {
        (y_points[a], y_points[b]): y_edges[out]
        for (a, b), out in fam1y.cells.items()
    }
    for (x1, x2), dx in x_cells.items():
        base_x = (x1 * 10 + x2) * 100
        for (y1, y2), dy in y_cells.items():
            flat[base_x + y1 * 10 + y2] = d2_grid[(dy, dx)]
    return FusedLookup(tuple(flat))


@dataclass(frozen=True)
class FamSet:
    """All tables of one inference configuration, built once and reused."""

    fam1x: FamTable
    fam1y: FamTable
    fam2: FamTable
    fused: FusedLookup


@lru_cache(maxsize=1)
def default_fams() -> FamSet:
    fam1x = build_fam1("x")
    fam1y = build_fam1("y")
    fam2 = build_fam2()
    return FamSet(fam1x, fam1y, fam2, fuse_fams(fam1x, fam1y, fam2))


# ---------------------------------------------------------------------------
# Whole pipeline for one box pair
# ---------------------------------------------------------------------------


def _partition_pair(partition):
    if partition is None:
        p = FuzzyPartition.default()
        return p, p
    if isinstance(partition, FuzzyPartition):
        return partition, partition
    px, py = partition
    return px, py


def _describe_indexed(box, ref, part_x, part_y, flat) -> dict:
    """Hot path: {2-D descriptor index: membership} via the fused lookup."""
    u, u2, v, v2 = relativize_box(box, ref)
    xs1 = fuzzify_indexed(u, part_x)
    xs2 = fuzzify_indexed(u2, part_x)
    ys1 = fuzzify_indexed(v, part_y)
    ys2 = fuzzify_indexed(v2, part_y)
    out = {}
    for i1, m1 in xs1:
        base1 = i1 * 1000
        for i2, m2 in xs2:
            m12 = m1 if m1 < m2 else m2
            base2 = base1 + i2 * 100
            for j1, m3 in ys1:
                m123 = m12 if m12 < m3 else m3
                base3 = base2 + j1 * 10
                for j2, m4 in ys2:
                    d = flat[base3 + j2]
                    if d < 0:
                        continue
                    mu = m123 if m123 < m4 else m4
                    if mu > out.get(d, 0.0):
                        out[d] = mu
    return out


def describe_pair(box, ref, partition=None, fams: FamSet | None = None) -> dict:
    """2-D fuzzy position of ``box`` relative to ``ref``.

    Returns a sparse {descriptor name: membership} map; memberships are in
    (0, 1] and the map is never empty for valid boxes.
    """
    if fams is None:
        fams = default_fams()
    part_x, part_y = _partition_pair(partition)
    indexed = _describe_indexed(box, ref, part_x, part_y, fams.fused.flat)
    return {D2_ORDER[d]: mu for d, mu in sorted(indexed.items())}


def verify_tables() -> list:
    """Self-check of the built-in tables; returns violation strings."""
    violations = []
    try:
        cells, prov = _fam1_cells()
    except InternalInconsistency as exc:
        return [f"FAM1: {exc}"]
    if len(cells) != 55:
        violations.append(f"FAM1: {len(cells)} cells, expected 55")
    pidx = POINT_INDEX["x"]
    for (p1, p2), out in FAM1_SEED.items():
        got = EDGE_ORDER_X[cells[(pidx[p1], pidx[p2])]]
        if got != out:
            violations.append(f"FAM1 seed mismatch at ({p1},{p2}): {got} != {out}")

    try:
        grid, _ = _fam2_grid()
    except InternalInconsistency as exc:
        return violations + [f"FAM2: {exc}"]
    for row_name, outputs in FAM2_SEED_ROWS.items():
        yi = EDGE_INDEX_Y[row_name]
        for col_name, out in zip(FAM2_SEED_COLUMNS, outputs):
            got = D2_ORDER[grid[yi][EDGE_INDEX_X[col_name]]]
            if got != out:
                violations.append(
                    f"FAM2 seed mismatch at ({row_name},{col_name}): {got} != {out}"
                )
    for yi in range(15):
        for xi in range(15):
            if not 0 <= grid[yi][xi] < N_D2:
                violations.append(f"FAM2 invalid output at ({yi},{xi})")
    return violations
