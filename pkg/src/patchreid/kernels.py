"""Hot numeric kernels: numba-compiled fast path with a pure-numpy fallback.

Backend selection happens once at import time via the PATCHREID_BACKEND
environment variable:

    PATCHREID_BACKEND=numba   require numba (error if not importable)
    PATCHREID_BACKEND=numpy   force the pure-numpy fallback
    unset / "auto"            numba when importable, numpy otherwise

Both backends compute bit-identical histogram counts and agree on patch
distances to ~1e-15 (summation order differs). See benchmarks/bench_backends.py
for a speed comparison.
"""

import os

import numpy as np

# 40-bin histogram layout: 24 hue + 12 saturation + 4 value bins, concatenated.
H_BINS = 24
S_BINS = 12
V_BINS = 4
HIST_BINS = H_BINS + S_BINS + V_BINS

_FLAG = os.environ.get("PATCHREID_BACKEND", "auto").strip().lower() or "auto"
if _FLAG not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"PATCHREID_BACKEND must be 'numba', 'numpy' or 'auto', got {_FLAG!r}"
    )

if _FLAG == "numpy":
    _HAVE_NUMBA = False
else:
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _FLAG == "numba":
            raise RuntimeError("PATCHREID_BACKEND=numba but numba is not installed")
        _HAVE_NUMBA = False

BACKEND = "numba" if _HAVE_NUMBA else "numpy"


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND


def _directed_min_distances_np(sx, xy, sy, yy, beta):
    n = sx.shape[0]
    out = np.empty(n)
    # Blocked so the broadcast temporary stays small (128 * |Y| * 40 floats).
    for i0 in range(0, n, 128):
        blk = sx[i0:i0 + 128]
        d2 = 0.5 * ((blk[:, None, :] - sy[None, :, :]) ** 2).sum(axis=2)
        np.clip(d2, 0.0, 1.0, out=d2)
        d = np.sqrt(d2)
        d *= 1.0 + beta * np.abs(xy[i0:i0 + 128, None] - yy[None, :])
        out[i0:i0 + 128] = d.min(axis=1)
    return out


def _patch_bin_counts_np(hbin, sbin, vbin, fg, rects):
    P = rects.shape[0]
    out = np.zeros((P, HIST_BINS), np.int64)
    for p in range(P):
        x0, y0, w, h = rects[p]
        sel = fg[y0:y0 + h, x0:x0 + w]
        if not sel.any():
            continue
        out[p, :H_BINS] = np.bincount(
            hbin[y0:y0 + h, x0:x0 + w][sel], minlength=H_BINS)
        out[p, H_BINS:H_BINS + S_BINS] = np.bincount(
            sbin[y0:y0 + h, x0:x0 + w][sel], minlength=S_BINS)
        out[p, H_BINS + S_BINS:] = np.bincount(
            vbin[y0:y0 + h, x0:x0 + w][sel], minlength=V_BINS)
    return out


if _HAVE_NUMBA:

    @njit(cache=True)
    def _directed_min_distances_nb(sx, xy, sy, yy, beta):  # pragma: no cover
        n = sx.shape[0]
        m = sy.shape[0]
        dim = sx.shape[1]
        out = np.empty(n)
        for i in range(n):
            best = np.inf
            for j in range(m):
                acc = 0.0
                for c in range(dim):
                    t = sx[i, c] - sy[j, c]
                    acc += t * t
                b2 = 0.5 * acc
                if b2 < 0.0:
                    b2 = 0.0
                elif b2 > 1.0:
                    b2 = 1.0
                dy = xy[i] - yy[j]
                if dy < 0.0:
                    dy = -dy
                d = np.sqrt(b2) * (1.0 + beta * dy)
                if d < best:
                    best = d
            out[i] = best
        return out

    @njit(cache=True)
    def _patch_bin_counts_nb(hbin, sbin, vbin, fg, rects):  # pragma: no cover
        P = rects.shape[0]
        out = np.zeros((P, 40), np.int64)
        for p in range(P):
            x0 = rects[p, 0]
            y0 = rects[p, 1]
            x1 = x0 + rects[p, 2]
            y1 = y0 + rects[p, 3]
            for y in range(y0, y1):
                for x in range(x0, x1):
                    if fg[y, x]:
                        out[p, hbin[y, x]] += 1
                        out[p, 24 + sbin[y, x]] += 1
                        out[p, 36 + vbin[y, x]] += 1
        return out

    _directed_impl = _directed_min_distances_nb
    _counts_impl = _patch_bin_counts_nb
else:
    _directed_impl = _directed_min_distances_np
    _counts_impl = _patch_bin_counts_np


def directed_min_distances(sqrt_hsv_x, y_x, sqrt_hsv_y, y_y, beta):
    """Per-element nearest-neighbour distances from set X into set Y.

    Inputs are the element-wise square roots of the 40-bin histograms,
    shape (n, 40), plus the relative vertical positions, shape (n,).
    The element metric is sqrt(0.5 * ||sx - sy||^2) * (1 + beta * |dy|),
    i.e. the Bhattacharyya distance weighted by vertical displacement.
    Returns the minimum over Y for every element of X, shape (|X|,).
    """
    sx = np.ascontiguousarray(sqrt_hsv_x, dtype=np.float64)
    sy = np.ascontiguousarray(sqrt_hsv_y, dtype=np.float64)
    xy = np.ascontiguousarray(y_x, dtype=np.float64)
    yy = np.ascontiguousarray(y_y, dtype=np.float64)
    return _directed_impl(sx, xy, sy, yy, float(beta))


def patch_bin_counts(hbin, sbin, vbin, fg, rects):
    """Raw 40-bin counts over foreground pixels of each rectangle.

    hbin/sbin/vbin are per-pixel bin index maps (int64, shape (H, W)); fg is
    the foreground mask; rects is an (P, 4) int64 array of (x, y, w, h) in
    absolute image coordinates. Counts are exact integers, so both backends
    return identical arrays.
    """
    rects = np.ascontiguousarray(rects, dtype=np.int64)
    if rects.ndim != 2 or rects.shape[1] != 4:
        raise ValueError("rects must have shape (P, 4)")
    return _counts_impl(
        np.ascontiguousarray(hbin, dtype=np.int64),
        np.ascontiguousarray(sbin, dtype=np.int64),
        np.ascontiguousarray(vbin, dtype=np.int64),
        np.ascontiguousarray(fg, dtype=np.bool_),
        rects,
    )
