"""Content-based similarity and reflectional symmetry of bounding-box
scenes via fuzzy mutual-position descriptors."""

from .comparison import (
    CompareConfig,
    MatchingMatrices,
    PairRecord,
    SimilarityReport,
    accumulated_similarity,
    build_matching_matrices,
    measure,
    pairwise_similarity,
    permute_orientation,
)
from .errors import (
    AmbiguousLabel,
    DegenerateBox,
    DegenerateReference,
    DuplicateId,
    FmpError,
    InsufficientOverlap,
    InternalInconsistency,
    ParseError,
)
from .fam_reasoning import (
    D2_ORDER,
    FamSet,
    FamTable,
    FusedLookup,
    build_fam1,
    build_fam2,
    default_fams,
    describe_pair,
    fuse_fams,
    infer_1d,
    infer_2d,
)
from .fmp import FmpMatrix, Scene, SceneObject, build_fmp
from .membership import (
    DEFAULT_KNOTS,
    BoundingBox,
    FuzzyPartition,
    fuzzify_scalar,
    relative_coordinate,
    relativize_box,
    validate_partition,
)
from .scene_io import (
    MatchedPair,
    match_objects,
    parse_scene,
    save_scene,
    scene_from_dict,
    scene_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousLabel",
    "BoundingBox",
    "CompareConfig",
    "D2_ORDER",
    "DEFAULT_KNOTS",
    "DegenerateBox",
    "DegenerateReference",
    "DuplicateId",
    "FamSet",
    "FamTable",
    "FmpError",
    "FmpMatrix",
    "FusedLookup",
    "FuzzyPartition",
    "InsufficientOverlap",
    "InternalInconsistency",
    "MatchedPair",
    "MatchingMatrices",
    "PairRecord",
    "ParseError",
    "Scene",
    "SceneObject",
    "SimilarityReport",
    "accumulated_similarity",
    "build_fam1",
    "build_fam2",
    "build_fmp",
    "build_matching_matrices",
    "default_fams",
    "describe_pair",
    "fuse_fams",
    "fuzzify_scalar",
    "infer_1d",
    "infer_2d",
    "match_objects",
    "measure",
    "pairwise_similarity",
    "parse_scene",
    "permute_orientation",
    "relative_coordinate",
    "relativize_box",
    "save_scene",
    "scene_from_dict",
    "scene_to_dict",
    "validate_partition",
]
