import numpy as np
import pytest

from patchreid import kernels
from patchreid.kernels import (
    HIST_BINS,
    active_backend,
    directed_min_distances,
    patch_bin_counts,
)

needs_numba = pytest.mark.skipif(
    not kernels._HAVE_NUMBA, reason="numba backend not available")


def random_sqrt_set(rng, n):
    h = rng.random((n, HIST_BINS))
    h /= h.sum(axis=1, keepdims=True)
    return np.sqrt(h), rng.random(n)


def naive_directed(sx, xy, sy, yy, beta):
    out = np.empty(len(sx))
    for i in range(len(sx)):
        best = np.inf
        for j in range(len(sy)):
            b2 = 0.5 * ((sx[i] - sy[j]) ** 2).sum()
            b2 = min(max(b2, 0.0), 1.0)
            d = np.sqrt(b2) * (1.0 + beta * abs(xy[i] - yy[j]))
            best = min(best, d)
        out[i] = best
    return out


class TestDirectedMinDistances:
    def test_matches_naive(self, rng):
        for _ in range(25):
            sx, xy = random_sqrt_set(rng, int(rng.integers(1, 30)))
            sy, yy = random_sqrt_set(rng, int(rng.integers(1, 30)))
            got = directed_min_distances(sx, xy, sy, yy, 0.6)
            want = naive_directed(sx, xy, sy, yy, 0.6)
            np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    def test_identical_sets_exact_zero(self, rng):
        sx, xy = random_sqrt_set(rng, 20)
        got = directed_min_distances(sx, xy, sx, xy, 0.6)
        assert (got == 0.0).all()

    def test_crosses_block_boundary(self, rng):
        # The numpy fallback processes X in blocks of 128 rows.
        sx, xy = random_sqrt_set(rng, 300)
        sy, yy = random_sqrt_set(rng, 7)
        got = directed_min_distances(sx, xy, sy, yy, 0.3)
        want = naive_directed(sx, xy, sy, yy, 0.3)
        np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)

    @needs_numba
    def test_backends_agree(self, rng):
        for _ in range(25):
            sx, xy = random_sqrt_set(rng, int(rng.integers(1, 40)))
            sy, yy = random_sqrt_set(rng, int(rng.integers(1, 40)))
            a = kernels._directed_min_distances_nb(sx, xy, sy, yy, 0.6)
            b = kernels._directed_min_distances_np(sx, xy, sy, yy, 0.6)
            np.testing.assert_allclose(a, b, rtol=0, atol=2e-15)

    @needs_numba
    def test_backends_agree_on_zero(self, rng):
        sx, xy = random_sqrt_set(rng, 15)
        a = kernels._directed_min_distances_nb(sx, xy, sx, xy, 0.6)
        b = kernels._directed_min_distances_np(sx, xy, sx, xy, 0.6)
        assert (a == 0.0).all() and (b == 0.0).all()


class TestPatchBinCounts:
    def make_maps(self, rng, h, w):
        hbin = rng.integers(0, 24, size=(h, w))
        sbin = rng.integers(0, 12, size=(h, w))
        vbin = rng.integers(0, 4, size=(h, w))
        fg = rng.random((h, w)) < 0.7
        return hbin, sbin, vbin, fg

    def naive_counts(self, hbin, sbin, vbin, fg, rects):
        out = np.zeros((len(rects), HIST_BINS), np.int64)
        for p, (x0, y0, w, h) in enumerate(rects):
            for y in range(y0, y0 + h):
                for x in range(x0, x0 + w):
                    if fg[y, x]:
                        out[p, hbin[y, x]] += 1
                        out[p, 24 + sbin[y, x]] += 1
                        out[p, 36 + vbin[y, x]] += 1
        return out

    def random_rects(self, rng, h, w, n):
        rects = []
        for _ in range(n):
            rw = int(rng.integers(1, w + 1))
            rh = int(rng.integers(1, h + 1))
            x0 = int(rng.integers(0, w - rw + 1))
            y0 = int(rng.integers(0, h - rh + 1))
            rects.append((x0, y0, rw, rh))
        return np.asarray(rects, dtype=np.int64)

    def test_matches_naive(self, rng):
        hbin, sbin, vbin, fg = self.make_maps(rng, 20, 15)
        rects = self.random_rects(rng, 20, 15, 12)
        got = patch_bin_counts(hbin, sbin, vbin, fg, rects)
        want = self.naive_counts(hbin, sbin, vbin, fg, rects)
        assert np.array_equal(got, want)

    def test_triplet_totals_equal(self, rng):
        # Each foreground pixel contributes one count to each of the three
        # channel blocks.
        hbin, sbin, vbin, fg = self.make_maps(rng, 16, 16)
        rects = self.random_rects(rng, 16, 16, 8)
        got = patch_bin_counts(hbin, sbin, vbin, fg, rects)
        hsum = got[:, :24].sum(axis=1)
        ssum = got[:, 24:36].sum(axis=1)
        vsum = got[:, 36:].sum(axis=1)
        assert np.array_equal(hsum, ssum)
        assert np.array_equal(hsum, vsum)

    def test_bad_rect_shape(self, rng):
        hbin, sbin, vbin, fg = self.make_maps(rng, 8, 8)
        with pytest.raises(ValueError):
            patch_bin_counts(hbin, sbin, vbin, fg, np.zeros((3, 3), np.int64))

    @needs_numba
    def test_backends_identical(self, rng):
        hbin, sbin, vbin, fg = self.make_maps(rng, 24, 18)
        rects = self.random_rects(rng, 24, 18, 20)
        args = (hbin.astype(np.int64), sbin.astype(np.int64),
                vbin.astype(np.int64), fg, rects)
        a = kernels._patch_bin_counts_nb(*args)
        b = kernels._patch_bin_counts_np(*args)
        assert np.array_equal(a, b)


def test_active_backend_reports_selection():
    assert active_backend() in ("numba", "numpy")
    assert active_backend() == kernels.BACKEND
