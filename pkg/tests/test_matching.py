import math

import numpy as np
import pytest

from patchreid.descriptor import PartSet, PatchDescriptor, PersonDescriptor
from patchreid.errors import DataError
from patchreid.matching import (
    MatchConfig,
    bhattacharyya_distance,
    kth_hausdorff,
    kth_largest,
    patch_distance,
    rank_gallery,
    sequence_distance,
)

from conftest import random_histogram, random_part_set
from oracles import bhattacharyya_oracle, kth_hausdorff_oracle


def one_d_part_set(values, bin_index):
    """Embed scalar stand-ins for the worked 1-D example.

    All elements of one set share a one-hot histogram disjoint from the
    other set's bin, making the Bhattacharyya term exactly 1 between any
    cross pair; with beta=10 and y = value/10 the patch metric becomes
    1 + |x - y|, so k-th Hausdorff values are the scalar answers plus one.
    """
    n = len(values)
    hsv = np.zeros((n, 40))
    hsv[:, bin_index] = 1.0
    return PartSet(hsv, np.asarray(values, dtype=float) / 10.0)


class TestBhattacharyya:
    def test_identical_is_exact_zero(self, rng):
        for _ in range(50):
            h = random_histogram(rng)
            assert bhattacharyya_distance(h, h) == 0.0

    def test_hand_example(self):
        p = np.zeros(40)
        p[0] = 1.0
        q = np.zeros(40)
        q[0] = 0.5
        q[1] = 0.5
        expected = math.sqrt(1.0 - math.sqrt(0.5))
        assert bhattacharyya_distance(p, q) == pytest.approx(expected, abs=1e-15)
        assert bhattacharyya_distance(p, q) == pytest.approx(0.5411961001461969, abs=1e-12)

    def test_matches_direct_summation(self, rng):
        for _ in range(200):
            p = random_histogram(rng)
            q = random_histogram(rng)
            assert abs(bhattacharyya_distance(p, q) - bhattacharyya_oracle(p, q)) <= 1e-12

    def test_symmetric(self, rng):
        for _ in range(100):
            p = random_histogram(rng)
            q = random_histogram(rng)
            assert bhattacharyya_distance(p, q) == pytest.approx(
                bhattacharyya_distance(q, p), abs=1e-15)

    def test_bounded_by_one(self, rng):
        p = np.zeros(40)
        p[0] = 1.0
        q = np.zeros(40)
        q[1] = 1.0
        assert bhattacharyya_distance(p, q) == pytest.approx(1.0, abs=1e-15)


class TestPatchDistance:
    def test_spatial_weighting(self):
        p = np.zeros(40)
        p[0] = 1.0
        q = np.zeros(40)
        q[0] = 0.5
        q[1] = 0.5
        a = PatchDescriptor(p, 0.25)
        b = PatchDescriptor(q, 0.75)
        got = patch_distance(a, b, beta=0.6)
        assert got == pytest.approx(0.5411961001461969 * 1.3, abs=1e-12)
        assert got == pytest.approx(0.703554930190056, abs=1e-12)

    def test_equal_descriptors_zero(self, rng):
        h = random_histogram(rng)
        a = PatchDescriptor(h, 0.3)
        assert patch_distance(a, a, beta=0.6) == 0.0

    def test_beta_zero_ignores_position(self, rng):
        h1 = random_histogram(rng)
        h2 = random_histogram(rng)
        a = PatchDescriptor(h1, 0.0)
        b = PatchDescriptor(h2, 1.0)
        c = PatchDescriptor(h2, 0.0)
        assert patch_distance(a, b, beta=0.0) == pytest.approx(
            patch_distance(a, c, beta=0.0), abs=1e-15)


class TestKthLargest:
    def test_small_lists(self):
        assert kth_largest(np.array([3.0, 1.0, 2.0]), 1) == 3.0
        assert kth_largest(np.array([3.0, 1.0, 2.0]), 2) == 2.0
        assert kth_largest(np.array([3.0, 1.0, 2.0]), 3) == 1.0

    def test_clamps_to_length(self):
        assert kth_largest(np.array([5.0, 7.0]), 10) == 5.0


class TestKthHausdorff:
    def test_self_distance_zero(self, rng):
        for _ in range(20):
            xs = random_part_set(rng, int(rng.integers(1, 15)))
            for k in (1, 3, 10, 50):
                assert kth_hausdorff(xs, xs, beta=0.6, k=k) == 0.0

    def test_one_dimensional_worked_example(self):
        # Scalars {0,4,10} vs {0,1} under 1 + |x-y|: directed minima from X
        # are {1,4,10} (k=2 -> 4) and from Y are {1,2} (k=2 -> 1), so the
        # symmetric distances are the scalar answers 3 and 9 shifted by one.
        xs = one_d_part_set([0.0, 4.0, 10.0], bin_index=0)
        ys = one_d_part_set([0.0, 1.0], bin_index=1)
        assert kth_hausdorff(xs, ys, beta=10.0, k=2) == pytest.approx(4.0, abs=1e-12)
        assert kth_hausdorff(xs, ys, beta=10.0, k=1) == pytest.approx(10.0, abs=1e-12)

    def test_symmetry(self, rng):
        for _ in range(50):
            xs = random_part_set(rng, int(rng.integers(1, 12)))
            ys = random_part_set(rng, int(rng.integers(1, 12)))
            k = int(rng.integers(1, 12))
            assert kth_hausdorff(xs, ys, 0.6, k) == kth_hausdorff(ys, xs, 0.6, k)

    def test_non_increasing_in_k(self, rng):
        for _ in range(50):
            xs = random_part_set(rng, int(rng.integers(2, 15)))
            ys = random_part_set(rng, int(rng.integers(2, 15)))
            values = [kth_hausdorff(xs, ys, 0.6, k) for k in range(1, 16)]
            for a, b in zip(values, values[1:]):
                assert b <= a + 1e-15

    def test_matches_brute_force(self, rng):
        for _ in range(100):
            nx = int(rng.integers(1, 20))
            ny = int(rng.integers(1, 20))
            xs = random_part_set(rng, nx)
            ys = random_part_set(rng, ny)
            k = int(rng.integers(1, 21))
            got = kth_hausdorff(xs, ys, 0.6, k)
            want = kth_hausdorff_oracle(
                list(zip(xs.hsv, xs.y_pos)), list(zip(ys.hsv, ys.y_pos)), 0.6, k)
            assert abs(got - want) <= 1e-12


def make_person(pid, parts, provenance="template"):
    return PersonDescriptor(pid, provenance, 0, tuple(parts), {})


class TestSequenceDistance:
    def test_identical_descriptors(self, rng):
        parts = [random_part_set(rng, 8), random_part_set(rng, 8)]
        t = make_person("a", parts)
        assert sequence_distance(t, t, MatchConfig()) == 0.0

    def test_uniform_weights_average(self, rng, monkeypatch):
        # Patch the set distance so the combination logic is isolated.
        import patchreid.matching as m
        parts_t = [random_part_set(rng, 4), random_part_set(rng, 4)]
        parts_q = [random_part_set(rng, 4), random_part_set(rng, 4)]
        fake = iter([0.2, 0.4])
        monkeypatch.setattr(m, "kth_hausdorff", lambda *a, **k: next(fake))
        got = m.sequence_distance(make_person("t", parts_t),
                                  make_person("q", parts_q), MatchConfig())
        assert got == pytest.approx(0.3, abs=1e-15)

    def test_degenerate_weights(self, rng, monkeypatch):
        import patchreid.matching as m
        parts_t = [random_part_set(rng, 4), random_part_set(rng, 4)]
        parts_q = [random_part_set(rng, 4), random_part_set(rng, 4)]
        fake = iter([0.2])  # second part must not be evaluated
        monkeypatch.setattr(m, "kth_hausdorff", lambda *a, **k: next(fake))
        cfg = MatchConfig(part_weights=(1.0, 0.0))
        got = m.sequence_distance(make_person("t", parts_t),
                                  make_person("q", parts_q), cfg)
        assert got == pytest.approx(0.2, abs=1e-15)

    def test_part_count_mismatch(self, rng):
        t = make_person("t", [random_part_set(rng, 4)])
        q = make_person("q", [random_part_set(rng, 4), random_part_set(rng, 4)])
        with pytest.raises(DataError):
            sequence_distance(t, q, MatchConfig())

    def test_returns_plain_float(self, rng):
        t = make_person("t", [random_part_set(rng, 4), random_part_set(rng, 4)])
        q = make_person("q", [random_part_set(rng, 4), random_part_set(rng, 4)])
        assert type(sequence_distance(t, q, MatchConfig())) is float


class TestRankGallery:
    def build_gallery(self, rng, n):
        return [make_person(f"g{i:02d}",
                            [random_part_set(rng, 6), random_part_set(rng, 6)])
                for i in range(n)]

    def test_singleton(self, rng):
        gallery = self.build_gallery(rng, 1)
        q = make_person("q", [random_part_set(rng, 6), random_part_set(rng, 6)],
                        "probe")
        ranked = rank_gallery(q, gallery, MatchConfig())
        assert ranked.ranking[0][0] == "g00"
        assert ranked.rank_of("g00") == 1

    def test_self_match_rank_one(self, rng):
        gallery = self.build_gallery(rng, 5)
        q = PersonDescriptor("probe", "probe", 0, gallery[2].parts, {})
        ranked = rank_gallery(q, gallery, MatchConfig())
        assert ranked.ranking[0] == ("g02", 0.0)

    def test_matches_brute_force_order(self, rng):
        cfg = MatchConfig()
        gallery = self.build_gallery(rng, 6)
        q = make_person("q", [random_part_set(rng, 6), random_part_set(rng, 6)],
                        "probe")
        ranked = rank_gallery(q, gallery, cfg)
        brute = sorted(
            ((sequence_distance(q, t, cfg), t.person_id) for t in gallery),
            key=lambda pair: (pair[0], pair[1]))
        assert [pid for _, pid in brute] == [pid for pid, _ in ranked.ranking]
        dists = [d for _, d in ranked.ranking]
        assert dists == sorted(dists)

    def test_contains_every_template_once(self, rng):
        gallery = self.build_gallery(rng, 8)
        q = make_person("q", [random_part_set(rng, 6), random_part_set(rng, 6)],
                        "probe")
        ranked = rank_gallery(q, gallery, MatchConfig())
        assert sorted(pid for pid, _ in ranked.ranking) == sorted(
            t.person_id for t in gallery)

    def test_scaling_invariance(self, rng):
        # Scaling beta=0 patch distances by c>0 is equivalent to scaling the
        # histograms' disagreement uniformly; check the documented property
        # directly through part_weights instead: scaling every part weight
        # by c rescales D but never reorders the gallery.
        gallery = self.build_gallery(rng, 6)
        q = make_person("q", [random_part_set(rng, 6), random_part_set(rng, 6)],
                        "probe")
        base = rank_gallery(q, gallery, MatchConfig(beta=0.6, k=3))
        scaled = rank_gallery(q, gallery, MatchConfig(beta=0.6, k=3,
                                                      part_weights=(2.5, 2.5)))
        assert [p for p, _ in base.ranking] == [p for p, _ in scaled.ranking]

    def test_empty_gallery(self, rng):
        q = make_person("q", [random_part_set(rng, 6), random_part_set(rng, 6)],
                        "probe")
        with pytest.raises(DataError):
            rank_gallery(q, [], MatchConfig())


class TestMatchConfig:
    def test_weights_normalized(self):
        cfg = MatchConfig(part_weights=(3.0, 1.0))
        assert cfg.part_weights == (0.75, 0.25)
        assert all(type(w) is float for w in cfg.part_weights)

    def test_invalid(self):
        with pytest.raises(ValueError):
            MatchConfig(k=0)
        with pytest.raises(ValueError):
            MatchConfig(beta=-0.1)
        with pytest.raises(ValueError):
            MatchConfig(part_weights=(0.0, 0.0))
