import random

import pytest

from fmpsim.comparison import (
    PERMUTATIONS,
    CompareConfig,
    accumulated_similarity,
    build_matching_matrices,
    measure,
    pairwise_similarity,
    permute_orientation,
)
from fmpsim.errors import InsufficientOverlap
from fmpsim.fmp import Scene, SceneObject, build_fmp
from fmpsim.membership import BoundingBox
from fmpsim.scene_io import match_objects
from fmpsim.testkit import mirror_scene, oracle_measure, random_scene
from table_fragments import (
    EXPECTED_MM_LOC,
    EXPECTED_MM_OR,
    EXPECTED_PERMUTATIONS,
    ORIENTS,
    float_rows,
)


class TestMatchingMatrices:
    def test_locus_matrix_as_expected(self):
        mm = build_matching_matrices()
        assert mm.mm_loc == float_rows(EXPECTED_MM_LOC)

    def test_orientation_matrix_as_expected(self):
        mm = build_matching_matrices()
        assert mm.mm_or == float_rows(EXPECTED_MM_OR)

    def test_spot_values(self):
        mm = build_matching_matrices()
        assert mm.loc("FA", "NE") == 0.5
        assert mm.loc("IN", "FA") == 0.0
        assert mm.orient("LE", "LE") == 1.0
        assert mm.vh == 0.5 and mm.vl == 0.25

    def test_diagonals_are_one(self):
        mm = build_matching_matrices()
        assert all(mm.mm_loc[i][i] == 1.0 for i in range(9))
        assert all(mm.mm_or[i][i] == 1.0 for i in range(11))

    def test_locus_matrix_symmetric(self):
        mm = build_matching_matrices()
        for i in range(9):
            for j in range(9):
                assert mm.mm_loc[i][j] == mm.mm_loc[j][i]

    def test_orientation_single_asymmetry(self):
        mm = build_matching_matrices()
        asymmetric = [
            (ORIENTS[i], ORIENTS[j])
            for i in range(11)
            for j in range(11)
            if mm.mm_or[i][j] != mm.mm_or[j][i]
        ]
        assert sorted(asymmetric) == [("BE", "LB"), ("LB", "BE")]

    def test_symmetrized_policy_changes_only_that_cell(self):
        printed = build_matching_matrices("as_printed")
        fixed = build_matching_matrices("symmetrized")
        lb, be = ORIENTS.index("LB"), ORIENTS.index("BE")
        assert fixed.mm_or[lb][be] == 0.5
        for i in range(11):
            for j in range(11):
                if (i, j) != (lb, be):
                    assert fixed.mm_or[i][j] == printed.mm_or[i][j]

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValueError):
            build_matching_matrices("nope")


class TestPermutations:
    def test_vectors_index_by_index(self):
        assert PERMUTATIONS == EXPECTED_PERMUTATIONS

    def test_rows_are_reordered_not_copied(self):
        mm = build_matching_matrices()
        permuted = permute_orientation(mm.mm_or, "sym_x")
        for new_row, src in enumerate(PERMUTATIONS["sym_x"]):
            assert permuted[new_row] is mm.mm_or[src - 1]

    def test_sym_x_left_right_swap(self):
        mm = build_matching_matrices()
        permuted = permute_orientation(mm.mm_or, "sym_x")
        le, ri = ORIENTS.index("LE"), ORIENTS.index("RI")
        assert permuted[le][ri] == 1.0
        assert permuted[ri][le] == 1.0

    def test_sym_y_second_row_is_lb_row(self):
        mm = build_matching_matrices()
        permuted = permute_orientation(mm.mm_or, "sym_y")
        assert permuted[1] is mm.mm_or[ORIENTS.index("LB")]

    def test_each_permutation_is_an_involution(self):
        mm = build_matching_matrices()
        for mode in ("sym_x", "sym_y", "sym_xy"):
            once = permute_orientation(mm.mm_or, mode)
            twice = permute_orientation(once, mode)
            assert twice == mm.mm_or

    def test_similarity_mode_has_no_permutation(self):
        mm = build_matching_matrices()
        with pytest.raises(ValueError):
            permute_orientation(mm.mm_or, "similarity")


class TestPairwiseSimilarity:
    def test_identical_descriptors(self):
        assert pairwise_similarity({"FA/LE": 1.0}, {"FA/LE": 1.0}) == 1.0

    def test_adjacent_loci(self):
        assert pairwise_similarity({"FA/LE": 1.0}, {"NE/LE": 1.0}) == 0.5

    def test_mirror_mode_scores_swapped_sides(self):
        cfg = CompareConfig(mode="sym_x")
        assert pairwise_similarity({"CL/LE": 1.0}, {"CL/RI": 1.0}, cfg=cfg) == 1.0

    def test_threshold_drops_weak_memberships(self):
        assert pairwise_similarity({"FA/LE": 0.05}, {"FA/LE": 1.0}) == 0.0

    def test_no_agreement_scores_zero(self):
        assert pairwise_similarity({"FA/LE": 1.0}, {"SA/CE": 1.0}) == 0.0

    def test_threshold_monotonicity(self):
        rng = random.Random(3)
        names = ("FA/LE", "NE/LA", "CL/AB", "IN/CE", "SP/HO", "CR/RB", "SA/CE")
        for _ in range(300):
            v1 = {d: rng.random() for d in rng.sample(names, 3)}
            v2 = {d: rng.random() for d in rng.sample(names, 3)}
            scores = [
                pairwise_similarity(v1, v2, cfg=CompareConfig(threshold=t))
                for t in (0.0, 0.1, 0.3, 0.6)
            ]
            assert scores == sorted(scores, reverse=True)


def _grid_scene(ids_boxes):
    return Scene(tuple(
        SceneObject(i, f"obj{i}", BoundingBox(*b)) for i, b in ids_boxes
    ))


class TestAccumulated:
    def test_identical_scenes_sum_to_n0_squared(self):
        scene = random_scene(17, 3)
        matched = match_objects(scene, scene)
        fmp = build_fmp(Scene(matched.c))
        s_acc = accumulated_similarity(matched.c, matched.c_prime, fmp, fmp)
        assert s_acc == 9.0

    def test_single_locus_step_costs_half(self):
        # identical scenes except object 2 moves from far-right to
        # near-right of object 1: one relation scores vh, three score 1
        a = _grid_scene([(1, (0, 0, 10, 10)), (2, (60, 0, 70, 10))])
        b = _grid_scene([(1, (0, 0, 10, 10)), (2, (20, 0, 22, 10))])
        matched = match_objects(a, b)
        fmp_a = build_fmp(Scene(matched.c))
        fmp_b = build_fmp(Scene(matched.c_prime))
        s_acc = accumulated_similarity(matched.c, matched.c_prime, fmp_a, fmp_b)
        assert s_acc == 3.5

    def test_length_mismatch_rejected(self):
        a = _grid_scene([(1, (0, 0, 10, 10)), (2, (60, 0, 70, 10))])
        matched = match_objects(a, a)
        fmp = build_fmp(Scene(matched.c))
        with pytest.raises(ValueError):
            accumulated_similarity(matched.c, matched.c[:1], fmp, fmp)


class TestMeasure:
    def test_self_similarity_is_exactly_one(self):
        for seed in range(5):
            scene = random_scene(seed, 6)
            report = measure(scene, scene)
            assert report.measure == 1.0
            assert report.s_acc == 36.0
            assert report.n == report.n0 == 6

    def test_unmatched_objects_scale_the_measure(self):
        scene = random_scene(23, 4)
        extra = Scene(scene.objects + (
            SceneObject(90, "x90", BoundingBox(500, 500, 510, 512)),
            SceneObject(91, "x91", BoundingBox(600, 600, 611, 610)),
        ))
        report = measure(scene, extra)
        assert report.n0 == 4 and report.n == 6
        assert report.s_acc == 16.0
        assert report.measure == 16.0 / 24.0

    def test_perfect_mirror_modes(self):
        scene = random_scene(31, 6)
        cases = (
            ("sym_x", mirror_scene(scene, "vertical", x0=12.3)),
            ("sym_y", mirror_scene(scene, "horizontal", y0=-4.0)),
        )
        for mode, mirrored in cases:
            report = measure(scene, mirrored, cfg=CompareConfig(mode=mode))
            assert report.measure == 1.0

    def test_insufficient_overlap(self):
        a = _grid_scene([(1, (0, 0, 10, 10)), (2, (20, 0, 30, 10))])
        b = _grid_scene([(3, (0, 0, 10, 10)), (4, (20, 0, 30, 10))])
        with pytest.raises(InsufficientOverlap):
            measure(a, b)
        c = _grid_scene([(1, (0, 0, 10, 10)), (4, (20, 0, 30, 10))])
        with pytest.raises(InsufficientOverlap):
            measure(a, c)

    def test_measure_stays_in_unit_interval(self):
        rng = random.Random(9)
        for _ in range(20):
            a = random_scene(rng.randrange(10_000), rng.randint(2, 8))
            b = random_scene(rng.randrange(10_000), rng.randint(2, 8))
            report = measure(a, b)
            assert 0.0 <= report.measure <= 1.0
            for pair in report.pairs:
                assert 0.0 <= pair.s <= 1.0

    def test_report_breakdown_consistency(self):
        a = random_scene(41, 5)
        b = random_scene(42, 5)
        report = measure(a, b)
        assert len(report.pairs) == report.n0 * report.n0
        assert sum(p.s for p in report.pairs) == report.s_acc
        for pair in report.pairs:
            if pair.d is not None:
                assert pair.s == pair.s_loc * pair.s_or

    def test_json_round_trip(self):
        import json

        report = measure(random_scene(1, 4), random_scene(2, 4))
        doc = json.loads(json.dumps(report.to_json_dict()))
        assert doc["measure"] == report.measure
        assert len(doc["pairs"]) == report.n0 ** 2


class TestDirectionAsymmetry:
    """The one asymmetric orientation cell makes the measure direction
    sensitive under the as_printed policy; symmetrized removes that."""

    @staticmethod
    def _asymmetric_pair():
        # relation of 2 w.r.t. 1 is far left-below in scene a, far below in
        # scene b, forcing the (LB, BE) cell to decide the best pair
        a = _grid_scene([(1, (0, 0, 10, 10)), (2, (-60, 60, -50, 70))])
        b = _grid_scene([(1, (0, 0, 10, 10)), (2, (0, 60, 10, 70))])
        return a, b

    def test_direction_discrepancy_comes_from_lb_be(self):
        a, b = self._asymmetric_pair()
        forward = measure(a, b)
        backward = measure(b, a)
        assert forward.measure == 0.6875  # (1 + 1 + 0.5 + 0.25) / 4
        assert backward.measure == 0.75  # (1 + 1 + 0.5 + 0.5) / 4
        witnesses = [
            p for p in forward.pairs + backward.pairs
            if p.d is not None
            and {p.d.split("/")[1], p.d_prime.split("/")[1]} == {"LB", "BE"}
        ]
        assert witnesses

    def test_symmetrized_policy_restores_direction_symmetry(self):
        a, b = self._asymmetric_pair()
        cfg = CompareConfig(mm_or_policy="symmetrized")
        assert measure(a, b, cfg=cfg).measure == measure(b, a, cfg=cfg).measure

    def test_random_scene_discrepancies_always_have_a_witness(self):
        rng = random.Random(77)
        for _ in range(30):
            a = random_scene(rng.randrange(10_000), rng.randint(3, 7))
            b = random_scene(rng.randrange(10_000), rng.randint(3, 7))
            forward = measure(a, b)
            backward = measure(b, a)
            if forward.measure != backward.measure:
                witnesses = [
                    p for p in forward.pairs + backward.pairs
                    if p.d is not None
                    and {p.d.split("/")[1], p.d_prime.split("/")[1]} == {"LB", "BE"}
                ]
                assert witnesses, "direction discrepancy without LB/BE pair"


class TestOracleSpotChecks:
    def test_oracle_matches_measure(self):
        rng = random.Random(55)
        for _ in range(5):
            a = random_scene(rng.randrange(10_000), rng.randint(3, 6))
            b = random_scene(rng.randrange(10_000), rng.randint(3, 6))
            for mode in ("similarity", "sym_x"):
                cfg = CompareConfig(mode=mode)
                assert measure(a, b, cfg=cfg).measure == oracle_measure(a, b, cfg)


class TestConfigValidation:
    def test_threshold_range(self):
        with pytest.raises(ValueError):
            CompareConfig(threshold=1.0)
        with pytest.raises(ValueError):
            CompareConfig(threshold=-0.1)

    def test_mode_names(self):
        with pytest.raises(ValueError):
            CompareConfig(mode="diagonal")

    def test_policy_names(self):
        with pytest.raises(ValueError):
            CompareConfig(mm_or_policy="fixed")
