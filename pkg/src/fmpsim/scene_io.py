"""Annotation-file parsing and the id-matching step before comparison.

Annotation format: a JSON document with an optional "image" string and an
"objects" array of ``{"id": int?, "label": str, "bbox": [x_min, y_min,
x_max, y_max]}``.  Coordinates may be in any consistent unit.  When an
object carries no id, a stable 56-bit digest of its label is used so the
same label maps to the same id in every file; two id-less objects sharing
a label are rejected as ambiguous.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

from .errors import AmbiguousLabel, DegenerateBox, DuplicateId, ParseError
from .fmp import Scene, SceneObject
from .membership import BoundingBox


def label_id(label: str) -> int:
    """Deterministic positive id derived from a label."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=7).digest()
    return int.from_bytes(digest, "big") + 1


def parse_scene(path) -> Scene:
    """Read and validate one annotation file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ParseError("no such file", path=path) from None
    except OSError as exc:
        raise ParseError(f"cannot read: {exc}", path=path) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno) from exc
    return scene_from_dict(data, source=path)


def scene_from_dict(data, source=None) -> Scene:
    """Validate a decoded annotation document into a Scene."""
    if not isinstance(data, dict):
        raise ParseError("top level must be a JSON object", path=source)
    objects = data.get("objects")
    if not isinstance(objects, list) or not objects:
        raise ParseError("'objects' must be a non-empty array",
                         path=source, field="objects")

    parsed = []
    derived_labels = {}
    for pos, raw in enumerate(objects):
        where = f"objects[{pos}]"
        if not isinstance(raw, dict):
            raise ParseError("object entry must be a JSON object",
                             path=source, field=where)
        label = raw.get("label")
        if not isinstance(label, str) or not label:
            raise ParseError("missing or invalid 'label'",
                             path=source, field=f"{where}.label")
        bbox = raw.get("bbox")
        if (not isinstance(bbox, list) or len(bbox) != 4
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for v in bbox)):
            raise ParseError("'bbox' must be [x_min, y_min, x_max, y_max]",
                             path=source, field=f"{where}.bbox")
        if any(not math.isfinite(float(v)) for v in bbox):
            raise ParseError("'bbox' coordinates must be finite",
                             path=source, field=f"{where}.bbox")
        try:
            box = BoundingBox(*[float(v) for v in bbox])
        except DegenerateBox as exc:
            raise DegenerateBox(f"object {label!r} ({where}): {exc}") from exc

        obj_id = raw.get("id")
        if obj_id is None:
            if label in derived_labels:
                raise AmbiguousLabel(
                    f"label {label!r} occurs twice without ids "
                    f"({derived_labels[label]} and {where})"
                )
            derived_labels[label] = where
            obj_id = label_id(label)
        elif isinstance(obj_id, bool) or not isinstance(obj_id, int) or obj_id < 1:
            raise ParseError("'id' must be a positive integer",
                             path=source, field=f"{where}.id")
        parsed.append(SceneObject(obj_id, label, box))

    seen = {}
    for pos, obj in enumerate(parsed):
        if obj.id in seen:
            raise DuplicateId(
                f"id {obj.id} used by objects[{seen[obj.id]}] and objects[{pos}]"
            )
        seen[obj.id] = pos
    return Scene(tuple(parsed))


def scene_to_dict(scene: Scene, image=None) -> dict:
    """Serialize a Scene; explicit ids keep round-trips exact."""
    doc = {}
    if image is not None:
        doc["image"] = image
    doc["objects"] = [
        {"id": obj.id, "label": obj.label, "bbox": list(obj.box.as_tuple())}
        for obj in scene.objects
    ]
    return doc


def save_scene(scene: Scene, path, image=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_dict(scene, image=image), fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class MatchedPair:
    """Scenes trimmed to the shared ids, index-aligned, ids ascending."""

    c: tuple  # SceneObjects of the first scene present in both
    c_prime: tuple
    n1: int
    n2: int
    n0: int
    n: int  # n1 + n2 - n0


def match_objects(s: Scene, s_prime: Scene) -> MatchedPair:
    """Trim both scenes to the objects whose ids appear in both.

    Returns n0 as-is (possibly 0); the comparison entry point is where an
    insufficient overlap becomes an error.
    """
    ids_common = sorted(set(s.ids) & set(s_prime.ids))
    c = tuple(s.by_id(i) for i in ids_common)
    c_prime = tuple(s_prime.by_id(i) for i in ids_common)
    n1, n2, n0 = len(s), len(s_prime), len(ids_common)
    return MatchedPair(c, c_prime, n1, n2, n0, n1 + n2 - n0)
