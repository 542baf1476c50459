"""Scenes and the mutual-position matrix over all object pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateBox, DegenerateReference, DuplicateId
from .fam_reasoning import D2_ORDER, FamSet, default_fams, _describe_indexed, _partition_pair
from .membership import BoundingBox


@dataclass(frozen=True)
class SceneObject:
    id: int
    label: str
    box: BoundingBox


@dataclass(frozen=True)
class Scene:
    """Non-empty ordered collection of labeled boxes with unique ids."""

    objects: tuple

    def __post_init__(self):
        objs = tuple(self.objects)
        object.__setattr__(self, "objects", objs)
        if not objs:
            raise ValueError("a scene needs at least one object")
        seen = {}
        for obj in objs:
            if obj.id in seen:
                raise DuplicateId(
                    f"id {obj.id} used by both {seen[obj.id]!r} and {obj.label!r}"
                )
            seen[obj.id] = obj.label

    def __len__(self):
        return len(self.objects)

    @property
    def ids(self) -> tuple:
        return tuple(obj.id for obj in self.objects)

    def by_id(self, object_id: int) -> SceneObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)


@dataclass(frozen=True)
class FmpMatrix:
    """n x n grid of sparse 2-D descriptor vectors.

    ``cells[c][r]`` describes object c relative to object r (both by scene
    position), so the matrix is generally not symmetric; the diagonal of a
    sound configuration is crisp SA/CE.
    """

    ids: tuple
    cells: tuple  # tuple of tuples of {descriptor index: membership}

    @property
    def n(self) -> int:
        return len(self.ids)

    def vector(self, c: int, r: int) -> dict:
        """Named descriptor vector of cell (c, r), positional indices."""
        return {D2_ORDER[d]: mu for d, mu in sorted(self.cells[c][r].items())}

    def dump_csv(self, top_k: int = 3) -> str:
        """Debug dump: 'c,r,LOCUS/ORIENT,mu' rows, ids as c and r."""
        lines = []
        for c in range(self.n):
            for r in range(self.n):
                cell = self.cells[c][r]
                ranked = sorted(cell.items(), key=lambda kv: (-kv[1], kv[0]))
                for d, mu in ranked[:top_k]:
                    lines.append(
                        f"{self.ids[c]},{self.ids[r]},{D2_ORDER[d]},{mu:.3f}"
                    )
        return "\n".join(lines) + ("\n" if lines else "")


def build_fmp(scene: Scene, partition=None, fams: FamSet | None = None) -> FmpMatrix:
    """Mutual-position matrix of a scene: cell (c, r) holds the descriptor
    vector of box c relative to box r, diagonal included (computed, not
    special-cased, so a broken partition shows up immediately)."""
    if fams is None:
        fams = default_fams()
    part_x, part_y = _partition_pair(partition)
    flat = fams.fused.flat
    boxes = [obj.box for obj in scene.objects]
    rows = []
    for c, box_c in enumerate(boxes):
        row = []
        for r, box_r in enumerate(boxes):
            try:
                row.append(_describe_indexed(box_c, box_r, part_x, part_y, flat))
            except (DegenerateBox, DegenerateReference) as exc:
                obj = scene.objects[r if isinstance(exc, DegenerateReference) else c]
                raise type(exc)(f"object id {obj.id} ({obj.label!r}): {exc}") from exc
        rows.append(tuple(row))
    return FmpMatrix(scene.ids, tuple(rows))
