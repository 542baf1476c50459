"""Matching matrices, pairwise similarity and the normalized measure.

Two scenes are compared relation by relation: for every matched object
pair the best-agreeing combination of 2-D descriptors is scored as the
product of a locus weight and an orientation weight, both read from small
matching matrices with full agreement on the diagonal and graded partial
agreement (vh = 0.5, vl = 0.25) off it.  The accumulated score is then
normalized by n * n0 so unmatched objects pull the measure down.

Reflectional symmetry instead of similarity is measured by permuting the
rows of the orientation matrix so each direction best-matches its mirror
counterpart (about a vertical axis, a horizontal axis, or both).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InsufficientOverlap
from .fam_reasoning import (
    D2_LOCI,
    D2_LOCUS_IDX,
    D2_ORDER,
    D2_ORIENT_IDX,
    D2_ORIENTS,
    N_D2,
)
from .fmp import Scene, build_fmp
from .scene_io import match_objects

VH = 0.5
VL = 0.25

MODES = ("similarity", "sym_x", "sym_y", "sym_xy")
POLICIES = ("as_printed", "symmetrized")

# Locus matching weights over (FA, NE, CL, TO, CR, IN, LG, SP, SA).
_MM_LOC_TOKENS = (
    "1  vh vl 0  0  0  0  0  0",
    "vh 1  vh vl 0  0  0  0  0",
    "vl vh 1  vh vl 0  0  0  0",
    "0  vl vh 1  vh vl 0  0  0",
    "0  0  vl vh 1  vh 0  0  0",
    "0  0  0  vl vh 1  0  vl vl",
    "0  0  0  0  0  0  1  vl vl",
    "0  0  0  0  0  vl vl 1  vl",
    "0  0  0  0  0  vl vl vl 1",
)

# Orientation matching weights over (LE, LA, AB, RA, RI, RB, BE, LB, CE,
# HO, VE).  The h/hi tokens are typographic variants of vh.  Note the one
# asymmetry: (LB, BE) = vl while (BE, LB) = vh; the 'symmetrized' policy
# lifts it to vh on both sides.
_MM_OR_TOKENS = (
    "1  vh 0  0  0  0  0  h  0  vl 0",
    "hi 1  vh 0  0  0  0  0  0  vl vl",
    "0  vh 1  vh 0  0  0  0  0  0  vl",
    "0  0  vh 1  vh 0  0  0  0  vl vl",
    "0  0  0  vh 1  vh 0  0  0  vl 0",
    "0  0  0  0  vh 1  vh 0  0  vl vl",
    "0  0  0  0  0  vh 1  vh 0  0  vl",
    "hi 0  0  0  0  0  vl 1  0  vl vl",
    "0  0  0  0  0  0  0  0  1  vl vl",
    "vl vl 0  vl vl vl 0  vl vl 1  0",
    "0  vl vl vl 0  vl vl vl vl 0  1",
)

_TOKEN_VALUES = {"0": 0.0, "1": 1.0, "vh": VH, "vl": VL, "h": VH, "hi": VH}


def _parse_rows(rows):
    return tuple(
        tuple(_TOKEN_VALUES[token] for token in row.split()) for row in rows
    )


# Row-order vectors (1-based against LE..VE) selecting the orientation
# matrix variant for each reflectional symmetry; each is an involution.
PERMUTATIONS = {
    "sym_x": (5, 4, 3, 2, 1, 8, 7, 6, 9, 10, 11),
    "sym_y": (1, 8, 7, 6, 5, 4, 3, 2, 9, 10, 11),
    "sym_xy": (5, 6, 7, 8, 1, 2, 3, 4, 9, 11, 10),
}


@dataclass(frozen=True)
class MatchingMatrices:
    mm_loc: tuple  # 9x9 over D2_LOCI
    mm_or: tuple  # 11x11 over D2_ORIENTS
    vh: float = VH
    vl: float = VL

    def loc(self, a: str, b: str) -> float:
        return self.mm_loc[D2_LOCI.index(a)][D2_LOCI.index(b)]

    def orient(self, a: str, b: str) -> float:
        return self.mm_or[D2_ORIENTS.index(a)][D2_ORIENTS.index(b)]


def build_matching_matrices(policy: str = "as_printed") -> MatchingMatrices:
    if policy not in POLICIES:
        raise ValueError(f"unknown mm_or_policy {policy!r}")
    mm_loc = _parse_rows(_MM_LOC_TOKENS)
    mm_or = _parse_rows(_MM_OR_TOKENS)
    if policy == "symmetrized":
        mm_or = tuple(
            tuple(max(mm_or[i][j], mm_or[j][i]) for j in range(11))
            for i in range(11)
        )
    return MatchingMatrices(mm_loc, mm_or)


def permute_orientation(mm_or: tuple, mode: str) -> tuple:
    """Row-permuted orientation matrix for one symmetry mode."""
    if mode not in PERMUTATIONS:
        raise ValueError(f"no orientation permutation for mode {mode!r}")
    return tuple(mm_or[p - 1] for p in PERMUTATIONS[mode])


def orientation_variant(mm: MatchingMatrices, mode: str) -> tuple:
    if mode == "similarity":
        return mm.mm_or
    return permute_orientation(mm.mm_or, mode)


@dataclass(frozen=True)
class CompareConfig:
    threshold: float = 0.1
    mode: str = "similarity"
    mm_or_policy: str = "as_printed"

    def __post_init__(self):
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError(f"threshold must be in [0, 1): {self.threshold}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mm_or_policy not in POLICIES:
            raise ValueError(f"unknown mm_or_policy {self.mm_or_policy!r}")


@dataclass(frozen=True)
class PairRecord:
    """Best descriptor agreement found for one matched object pair."""

    i: int  # object id
    j: int
    d: str | None
    d_prime: str | None
    s_loc: float
    s_or: float
    s: float


@dataclass(frozen=True)
class SimilarityReport:
    measure: float
    s_acc: float
    n: int
    n0: int
    n1: int
    n2: int
    mode: str
    threshold: float
    pairs: tuple

    def to_json_dict(self) -> dict:
        return {
            "measure": self.measure,
            "s_acc": self.s_acc,
            "n": self.n,
            "n0": self.n0,
            "n1": self.n1,
            "n2": self.n2,
            "mode": self.mode,
            "threshold": self.threshold,
            "pairs": [
                {
                    "i": p.i, "j": p.j, "d": p.d, "d_prime": p.d_prime,
                    "s_loc": p.s_loc, "s_or": p.s_or, "s": p.s,
                }
                for p in self.pairs
            ],
        }


def _score_table(mm: MatchingMatrices, mode: str) -> list:
    """Combined locus x orientation products for every descriptor pair."""
    mm_or = orientation_variant(mm, mode)
    loc = mm.mm_loc
    return [
        [
            loc[D2_LOCUS_IDX[a]][D2_LOCUS_IDX[b]]
            * mm_or[D2_ORIENT_IDX[a]][D2_ORIENT_IDX[b]]
            for b in range(N_D2)
        ]
        for a in range(N_D2)
    ]


def _best_pair(cell_a: dict, cell_b: dict, score, threshold: float):
    """Max product over descriptor pairs above the threshold.

    Candidates are scanned in canonical descriptor order and only strictly
    better scores replace the incumbent, so the reported argmax is
    deterministic.
    """
    da = sorted(d for d, mu in cell_a.items() if mu > threshold)
    db = sorted(d for d, mu in cell_b.items() if mu > threshold)
    best = 0.0
    best_a = best_b = -1
    for a in da:
        row = score[a]
        for b in db:
            val = row[b]
            if val > best:
                best = val
                best_a, best_b = a, b
    return best, best_a, best_b


def pairwise_similarity(v: dict, v_prime: dict,
                        mm: MatchingMatrices | None = None,
                        cfg: CompareConfig | None = None) -> float:
    """Similarity of two named descriptor vectors in [0, 1]."""
    cfg = cfg or CompareConfig()
    mm = mm or build_matching_matrices(cfg.mm_or_policy)
    mm_or = orientation_variant(mm, cfg.mode)
    loc = mm.mm_loc
    li = {name: i for i, name in enumerate(D2_LOCI)}
    oi = {name: i for i, name in enumerate(D2_ORIENTS)}
    best = 0.0
    for d, mu in sorted(v.items()):
        if mu <= cfg.threshold:
            continue
        la, oa = d.split("/")
        for d2, mu2 in sorted(v_prime.items()):
            if mu2 <= cfg.threshold:
                continue
            lb, ob = d2.split("/")
            val = loc[li[la]][li[lb]] * mm_or[oi[oa]][oi[ob]]
            if val > best:
                best = val
    return best


def accumulated_similarity(c, c_prime, fmp, fmp_prime,
                           mm: MatchingMatrices | None = None,
                           cfg: CompareConfig | None = None) -> float:
    """Sum of best pairwise scores over all ordered index pairs (i, j),
    self-pairs included."""
    cfg = cfg or CompareConfig()
    mm = mm or build_matching_matrices(cfg.mm_or_policy)
    if len(c) != len(c_prime):
        raise ValueError("matched scenes must have equal length")
    score = _score_table(mm, cfg.mode)
    n0 = len(c)
    s_acc = 0.0
    for i in range(n0):
        for j in range(n0):
            s, _, _ = _best_pair(
                fmp.cells[i][j], fmp_prime.cells[i][j], score, cfg.threshold
            )
            s_acc += s
    return s_acc


def measure(s: Scene, s_prime: Scene,
            cfg: CompareConfig | None = None,
            partition=None, fams=None,
            mm: MatchingMatrices | None = None) -> SimilarityReport:
    """Compare two scenes; raises InsufficientOverlap when fewer than two
    ids are shared.  The result carries the scalar measure plus the full
    per-pair breakdown."""
    cfg = cfg or CompareConfig()
    mm = mm or build_matching_matrices(cfg.mm_or_policy)
    matched = match_objects(s, s_prime)
    if matched.n0 < 2:
        raise InsufficientOverlap(matched.n0)

    scene_c = Scene(matched.c)
    scene_c_prime = Scene(matched.c_prime)
    fmp = build_fmp(scene_c, partition=partition, fams=fams)
    fmp_prime = build_fmp(scene_c_prime, partition=partition, fams=fams)

    score = _score_table(mm, cfg.mode)
    mm_or = orientation_variant(mm, cfg.mode)
    ids = scene_c.ids
    records = []
    s_acc = 0.0
    for i in range(matched.n0):
        for j in range(matched.n0):
            s_best, a, b = _best_pair(
                fmp.cells[i][j], fmp_prime.cells[i][j], score, cfg.threshold
            )
            s_acc += s_best
            if a < 0:
                records.append(
                    PairRecord(ids[i], ids[j], None, None, 0.0, 0.0, 0.0)
                )
            else:
                s_loc = mm.mm_loc[D2_LOCUS_IDX[a]][D2_LOCUS_IDX[b]]
                s_or = mm_or[D2_ORIENT_IDX[a]][D2_ORIENT_IDX[b]]
                records.append(
                    PairRecord(ids[i], ids[j], D2_ORDER[a], D2_ORDER[b],
                               s_loc, s_or, s_best)
                )

    value = s_acc / (matched.n * matched.n0)
    return SimilarityReport(
        measure=value,
        s_acc=s_acc,
        n=matched.n,
        n0=matched.n0,
        n1=matched.n1,
        n2=matched.n2,
        mode=cfg.mode,
        threshold=cfg.threshold,
        pairs=tuple(records),
    )
