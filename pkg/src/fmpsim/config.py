"""Run configuration: compiled-in defaults, optional JSON file, flag
overrides.

The config document is a single JSON object; every key is optional:

    {
      "threshold": 0.1,
      "mode": "similarity",          // similarity | sym_x | sym_y | sym_xy
      "mm_or_policy": "as_printed",  // as_printed | symmetrized
      "format": "scalar",            // scalar | json | csv
      "partition_x": {"fl": ["-inf", "-inf", -5, -4], ...},
      "partition_y": {"fa": ["-inf", "-inf", -5, -4], ...},
      "mm_loc": [[...9 rows of 9...]],
      "mm_or": [[...11 rows of 11...]]
    }

Infinite knots are spelled "-inf" / "inf".  Flags override file values;
the FMP_CONFIG environment variable supplies the default file path.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

from . import fam_reasoning
from .comparison import MODES, POLICIES, MatchingMatrices, build_matching_matrices
from .errors import ParseError
from .membership import FuzzyPartition, POINT_NAMES, validate_partition

FORMATS = ("scalar", "json", "csv")

ENV_CONFIG = "FMP_CONFIG"


def _knot(value, where):
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "+inf", "infinity"):
            return math.inf
        if token in ("-inf", "-infinity"):
            return -math.inf
        raise ParseError(f"bad knot value {value!r}", field=where)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"bad knot value {value!r}", field=where)
    return float(value)


def partition_from_mapping(mapping, axis: str, where: str) -> FuzzyPartition:
    if not isinstance(mapping, dict):
        raise ParseError("partition override must be an object", field=where)
    names = POINT_NAMES[axis]
    missing = [n for n in names if n not in mapping]
    if missing:
        raise ParseError(f"missing descriptors {missing}", field=where)
    knots = {}
    for name in names:
        quad = mapping[name]
        if not isinstance(quad, list) or len(quad) != 4:
            raise ParseError(f"{name} needs [a, b, c, d]", field=where)
        knots[name] = tuple(_knot(v, f"{where}.{name}") for v in quad)
    return FuzzyPartition.from_named(knots, axis)


def _matrix_from_config(rows, size, where):
    if (not isinstance(rows, list) or len(rows) != size
            or any(not isinstance(r, list) or len(r) != size for r in rows)):
        raise ParseError(f"must be a {size}x{size} array", field=where)
    out = []
    for r, row in enumerate(rows):
        vals = []
        for c, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"non-numeric entry at [{r}][{c}]", field=where)
            vals.append(float(v))
        out.append(tuple(vals))
    return tuple(out)


def load_config(path) -> dict:
    """Read a raw config document; {} when path is None."""
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParseError("no such file", path=path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object", path=path)
    return data


@dataclass(frozen=True)
class RunConfig:
    threshold: float = 0.1
    mode: str = "similarity"
    mm_or_policy: str = "as_printed"
    fmt: str = "scalar"
    partition_x: FuzzyPartition | None = None
    partition_y: FuzzyPartition | None = None
    mm: MatchingMatrices | None = None

    @property
    def partition(self):
        if self.partition_x is None and self.partition_y is None:
            return None
        px = self.partition_x or FuzzyPartition.default()
        py = self.partition_y or px
        return (px, py)

    def matching(self) -> MatchingMatrices:
        return self.mm or build_matching_matrices(self.mm_or_policy)


def resolve_run_config(config_path=None, env=None, **flags) -> RunConfig:
    """Merge defaults <- config file <- non-None flag values."""
    if env is None:
        env = os.environ
    path = config_path or env.get(ENV_CONFIG) or None
    raw = load_config(path)

    merged = {
        "threshold": 0.1,
        "mode": "similarity",
        "mm_or_policy": "as_printed",
        "fmt": "scalar",
    }
    if "threshold" in raw:
        merged["threshold"] = raw["threshold"]
    if "mode" in raw:
        merged["mode"] = raw["mode"]
    if "mm_or_policy" in raw:
        merged["mm_or_policy"] = raw["mm_or_policy"]
    if "format" in raw:
        merged["fmt"] = raw["format"]
    for key in ("threshold", "mode", "mm_or_policy", "fmt"):
        if flags.get(key) is not None:
            merged[key] = flags[key]

    if (not isinstance(merged["threshold"], (int, float))
            or isinstance(merged["threshold"], bool)
            or not 0.0 <= float(merged["threshold"]) < 1.0):
        raise ParseError(f"threshold must be in [0, 1): {merged['threshold']!r}",
                         path=path, field="threshold")
    if merged["mode"] not in MODES:
        raise ParseError(f"unknown mode {merged['mode']!r}", path=path, field="mode")
    if merged["mm_or_policy"] not in POLICIES:
        raise ParseError(f"unknown mm_or_policy {merged['mm_or_policy']!r}",
                         path=path, field="mm_or_policy")
    if merged["fmt"] not in FORMATS:
        raise ParseError(f"unknown format {merged['fmt']!r}", path=path, field="format")

    partition_x = partition_y = None
    if "partition_x" in raw:
        partition_x = partition_from_mapping(raw["partition_x"], "x", "partition_x")
    if "partition_y" in raw:
        partition_y = partition_from_mapping(raw["partition_y"], "y", "partition_y")

    mm = None
    if "mm_loc" in raw or "mm_or" in raw:
        base = build_matching_matrices(merged["mm_or_policy"])
        mm_loc = base.mm_loc
        mm_or = base.mm_or
        if "mm_loc" in raw:
            mm_loc = _matrix_from_config(raw["mm_loc"], 9, "mm_loc")
        if "mm_or" in raw:
            mm_or = _matrix_from_config(raw["mm_or"], 11, "mm_or")
        mm = MatchingMatrices(mm_loc, mm_or)

    return RunConfig(
        threshold=float(merged["threshold"]),
        mode=merged["mode"],
        mm_or_policy=merged["mm_or_policy"],
        fmt=merged["fmt"],
        partition_x=partition_x,
        partition_y=partition_y,
        mm=mm,
    )


def _validate_matrix(matrix, size, name) -> list:
    violations = []
    for i in range(size):
        if matrix[i][i] != 1.0:
            violations.append(f"{name}: diagonal must be 1 at [{i}][{i}]"
                              f" (got {matrix[i][i]!r})")
    for i in range(size):
        for j in range(size):
            if not 0.0 <= matrix[i][j] <= 1.0:
                violations.append(f"{name}: entry [{i}][{j}] outside [0, 1]")
    return violations


def validate_run_config(run: RunConfig) -> list:
    """All soundness checks behind the validate command."""
    violations = []
    px = run.partition_x or FuzzyPartition.default()
    py = run.partition_y or px
    violations.extend(f"partition_x: {v}" for v in validate_partition(px))
    if run.partition_y is not None or run.partition_x is not None:
        violations.extend(f"partition_y: {v}" for v in validate_partition(py))
    violations.extend(fam_reasoning.verify_tables())
    mm = run.matching()
    violations.extend(_validate_matrix(mm.mm_loc, 9, "mm_loc"))
    violations.extend(_validate_matrix(mm.mm_or, 11, "mm_or"))
    for i in range(9):
        for j in range(9):
            if mm.mm_loc[i][j] != mm.mm_loc[j][i]:
                violations.append(f"mm_loc: must be symmetric, differs at [{i}][{j}]")
    return violations
