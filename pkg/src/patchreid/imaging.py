"""Raster and mask I/O, HSV conversion, and brightness/contrast simulation.

Images are RGB uint8 arrays of shape (H, W, 3); masks are boolean arrays of
shape (H, W) with True marking foreground (blob) pixels. Supported image
formats are PNG and binary PPM (P6); masks are grayscale PNGs where a pixel
value above 127 means foreground.

The brightness/contrast transform multiplies every channel of every
foreground pixel by a positive coefficient and clamps back to [0, 255].
Applying a vector of coefficients to one template image yields a family of
simulated illumination variants; ``adjust_coefficients`` rescales the vector
first so that the brightest variant does not saturate the image.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DataError

CHANNEL_MAX = 255
SUPPORTED_FORMATS = {"PNG", "PPM"}

# Defaults for illumination simulation: coefficient ladder and the mean-value
# saturation threshold that caps the brightest variant.
DEFAULT_COEFFICIENTS = (1.4, 1.2, 1.0, 0.8, 0.6)
DEFAULT_SATURATION_THRESHOLD = 240.0


class HsvPixel(NamedTuple):
    h: float  # degrees in [0, 360)
    s: float  # [0, 1]
    v: float  # [0, 1]


@dataclass(frozen=True)
class SimulationConfig:
    """Illumination-variant generation settings for template descriptors."""

    coefficients: tuple = DEFAULT_COEFFICIENTS
    threshold: float = DEFAULT_SATURATION_THRESHOLD

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) < 1 or any(c <= 0 for c in coeffs):
            raise ValueError("coefficients must be a non-empty list of positive reals")
        if not 0.0 < self.threshold <= CHANNEL_MAX:
            raise ValueError(f"threshold must be in (0, {CHANNEL_MAX}]")
        object.__setattr__(self, "coefficients", coeffs)


def load_image(path) -> np.ndarray:
    """Decode a PNG or binary-PPM image into an (H, W, 3) uint8 array."""
    p = Path(path)
    if not p.is_file():
        raise DataError(f"image file not found: {p}")
    try:
        with Image.open(p) as img:
            fmt = img.format
            arr = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DataError(f"cannot decode image {p}: {exc}") from exc
    if fmt not in SUPPORTED_FORMATS:
        raise DataError(f"unsupported image format {fmt!r} for {p} (need PNG or PPM)")
    if arr.ndim != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DataError(f"zero-dimension image: {p}")
    return arr


def save_image(path, raster) -> None:
    raster = np.asarray(raster, dtype=np.uint8)
    Image.fromarray(raster, mode="RGB").save(Path(path))


def load_mask(path) -> np.ndarray:
    """Decode a grayscale PNG into a boolean mask (value > 127 = foreground)."""
    p = Path(path)
    if not p.is_file():
        raise DataError(f"mask file not found: {p}")
    try:
        with Image.open(p) as img:
            arr = np.asarray(img.convert("L"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DataError(f"cannot decode mask {p}: {exc}") from exc
    if arr.ndim != 2 or arr.size == 0:
        raise DataError(f"zero-dimension mask: {p}")
    return arr > 127


def save_mask(path, mask) -> None:
    mask = np.asarray(mask, dtype=bool)
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(Path(path))


def check_mask(raster, mask) -> None:
    """Validate that the mask annotates this raster and has foreground."""
    if mask.shape != raster.shape[:2]:
        raise DataError(
            f"mask shape {mask.shape} does not match image shape {raster.shape[:2]}"
        )
    if not mask.any():
        raise DataError("mask has no foreground pixels")


def rgb_to_hsv(pixel) -> HsvPixel:
    """Hexcone HSV of one (R, G, B) pixel with channels in [0, 255].

    Hue is in degrees [0, 360), saturation and value in [0, 1]; achromatic
    pixels (s == 0) take h = 0.
    """
    r, g, b = (float(c) for c in pixel)
    for c in (r, g, b):
        if not 0 <= c <= CHANNEL_MAX:
            raise ValueError(f"channel value {c} outside [0, {CHANNEL_MAX}]")
    arr = np.array([[[r, g, b]]], dtype=np.uint8)
    h, s, v = rgb_image_to_hsv(arr)
    return HsvPixel(float(h[0, 0]), float(s[0, 0]), float(v[0, 0]))


def rgb_image_to_hsv(raster):
    """Vectorized hexcone conversion; returns (h, s, v) float64 planes."""
    rgb = np.asarray(raster, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    cmax = rgb.max(axis=-1)
    cmin = rgb.min(axis=-1)
    delta = cmax - cmin

    v = cmax / CHANNEL_MAX
    safe_max = np.where(cmax > 0, cmax, 1.0)
    s = np.where(cmax > 0, delta / safe_max, 0.0)

    h = np.zeros_like(v)
    chromatic = delta > 0
    safe_delta = np.where(chromatic, delta, 1.0)
    rmax = chromatic & (cmax == r)
    gmax = chromatic & (cmax == g) & ~rmax
    bmax = chromatic & ~rmax & ~gmax
    h = np.where(rmax, (60.0 * ((g - b) / safe_delta)) % 360.0, h)
    h = np.where(gmax, 60.0 * ((b - r) / safe_delta + 2.0), h)
    h = np.where(bmax, 60.0 * ((r - g) / safe_delta + 4.0), h)
    return h, s, v


def hsv_to_rgb(h, s, v):
    """Inverse hexcone conversion to integer (R, G, B) in [0, 255]."""
    h = float(h) % 360.0
    s = float(s)
    v = float(v)
    c = v * s
    x = c * (1.0 - abs((h / 60.0) % 2.0 - 1.0))
    m = v - c
    sector = int(h // 60.0) % 6
    rp, gp, bp = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][sector]
    out = []
    for comp in (rp, gp, bp):
        val = int(np.floor((comp + m) * CHANNEL_MAX + 0.5))
        out.append(min(max(val, 0), CHANNEL_MAX))
    return tuple(out)


def adjust_coefficients(coefficients, raster, mask, threshold=DEFAULT_SATURATION_THRESHOLD):
    """Uniformly rescale brightness coefficients to respect the saturation cap.

    Let m be the mean of all R, G, B channel values over foreground pixels.
    If m * max(k) exceeds the threshold, the whole vector is scaled by
    threshold / (m * max(k)) so the brightest variant lands exactly on the
    cap; otherwise the vector is returned unchanged. Ratios between
    coefficients are preserved either way.
    """
    k = np.asarray(coefficients, dtype=np.float64)
    if k.ndim != 1 or k.size < 1 or np.any(k <= 0):
        raise ValueError("coefficients must be a non-empty 1-D array of positive reals")
    if not 0.0 < threshold <= CHANNEL_MAX:
        raise ValueError(f"threshold must be in (0, {CHANNEL_MAX}]")
    raster = np.asarray(raster)
    mask = np.asarray(mask, dtype=bool)
    check_mask(raster, mask)
    m = float(raster[mask].astype(np.float64).mean())
    peak = m * float(k.max())
    if peak <= threshold:
        return k.copy()
    return k * (threshold / peak)


def apply_brightness_contrast(raster, mask, coefficient):
    """Multiply foreground channel values by the coefficient, clamped to [0, 255].

    Background pixels are returned unchanged. Rounding is half-up.
    """
    coefficient = float(coefficient)
    if coefficient <= 0:
        raise ValueError("coefficient must be positive")
    raster = np.asarray(raster, dtype=np.uint8)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != raster.shape[:2]:
        raise DataError(
            f"mask shape {mask.shape} does not match image shape {raster.shape[:2]}"
        )
    out = raster.copy()
    vals = raster[mask].astype(np.float64) * coefficient
    vals = np.floor(vals + 0.5)
    np.clip(vals, 0, CHANNEL_MAX, out=vals)
    out[mask] = vals.astype(np.uint8)
    return out
