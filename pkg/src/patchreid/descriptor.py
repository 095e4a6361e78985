"""Patch sampling and person descriptors.

A person descriptor is an ordered sequence of part sets (torso, legs). Each
set holds the descriptors of rectangular patches sampled at random inside
the part band: a 40-bin HSV histogram (24 hue + 12 saturation + 4 value
bins, each sub-histogram normalized to unit sum, concatenated, and scaled
by 1/3 so the whole vector sums to 1) paired with the relative vertical
position of the patch centre within the band.

Template descriptors can be expanded with simulated illumination variants:
the patch rectangles are sampled once, and every rectangle is described on
each brightness/contrast-transformed copy of the image, multiplying the set
size by the number of coefficients.

Sampling is driven by a deterministic RNG stream derived from the config
seed and a per-image stream key, so extraction is reproducible regardless
of scheduling or call order.
"""

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import imaging, kernels
from .errors import DataError
from .kernels import H_BINS, HIST_BINS, S_BINS, V_BINS

SCHEMA_VERSION = 1
BINARY_MAGIC = b"PRDB"

PROVENANCES = ("template", "probe")
_PROVENANCE_CODE = {"template": 0, "probe": 1}


@dataclass(frozen=True)
class SamplingConfig:
    """Patch sampling parameters.

    patches: rectangles sampled per part.
    area_min/area_max: patch area as a fraction of the part band area.
    aspect_min/aspect_max: admissible width/height ratios.
    min_mask_coverage: minimum fraction of patch pixels on the foreground.
    seed: 64-bit base seed for the sampling RNG streams.
    max_attempts: rejection-sampling budget per patch.
    """

    patches: int = 80
    area_min: float = 0.125
    area_max: float = 0.25
    aspect_min: float = 0.5
    aspect_max: float = 2.0
    min_mask_coverage: float = 0.5
    seed: int = 0
    max_attempts: int = 1000

    def __post_init__(self):
        if self.patches < 1:
            raise ValueError("patches must be at least 1")
        if not 0.0 < self.area_min <= self.area_max < 1.0:
            raise ValueError("need 0 < area_min <= area_max < 1")
        if not 0.0 < self.aspect_min <= self.aspect_max:
            raise ValueError("need 0 < aspect_min <= aspect_max")
        if not 0.0 <= self.min_mask_coverage <= 1.0:
            raise ValueError("min_mask_coverage must be in [0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be at least 1")

    def echo(self) -> dict:
        return {
            "patches": self.patches,
            "area_min": self.area_min,
            "area_max": self.area_max,
            "aspect_min": self.aspect_min,
            "aspect_max": self.aspect_max,
            "min_mask_coverage": self.min_mask_coverage,
            "seed": self.seed,
            "max_attempts": self.max_attempts,
        }


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in absolute image coordinates."""

    x: int
    y: int
    w: int
    h: int

    @property
    def center_y(self) -> float:
        return self.y + self.h / 2.0


@dataclass(frozen=True)
class PatchDescriptor:
    hsv: np.ndarray  # (40,) float64, sums to 1
    y_pos: float     # relative vertical position of the patch centre in [0, 1]


class PartSet:
    """Unordered collection of patch descriptors for one body part.

    Stored as arrays (hsv: (n, 40), y_pos: (n,)) for fast set matching; the
    element-wise square roots of the histograms are cached because the patch
    metric consumes them directly.
    """

    __slots__ = ("hsv", "y_pos", "_sqrt_hsv")

    def __init__(self, hsv, y_pos):
        hsv = np.ascontiguousarray(hsv, dtype=np.float64)
        y_pos = np.ascontiguousarray(y_pos, dtype=np.float64)
        if hsv.ndim != 2 or hsv.shape[1] != HIST_BINS:
            raise ValueError(f"hsv must have shape (n, {HIST_BINS})")
        if y_pos.shape != (hsv.shape[0],):
            raise ValueError("y_pos length must match the number of patches")
        if hsv.shape[0] < 1:
            raise ValueError("a part set needs at least one patch")
        self.hsv = hsv
        self.y_pos = y_pos
        self._sqrt_hsv = None

    def __len__(self) -> int:
        return self.hsv.shape[0]

    @property
    def sqrt_hsv(self) -> np.ndarray:
        if self._sqrt_hsv is None:
            self._sqrt_hsv = np.sqrt(self.hsv)
        return self._sqrt_hsv

    @property
    def patches(self):
        return [PatchDescriptor(self.hsv[i], float(self.y_pos[i])) for i in range(len(self))]

    @classmethod
    def from_patches(cls, patches):
        return cls(
            np.stack([np.asarray(p.hsv, dtype=np.float64) for p in patches]),
            np.array([p.y_pos for p in patches], dtype=np.float64),
        )


@dataclass
class PersonDescriptor:
    person_id: str
    provenance: str          # "template" or "probe"
    seed: int                # base RNG seed used for sampling
    parts: list              # ordered list of PartSet (torso, legs)
    config: dict             # resolved sampling/simulation settings


def hsv_bin_indices(raster):
    """Per-pixel (hue, saturation, value) bin index maps for a raster."""
    h, s, v = imaging.rgb_image_to_hsv(raster)
    hbin = np.minimum((h * (H_BINS / 360.0)).astype(np.int64), H_BINS - 1)
    sbin = np.minimum((s * S_BINS).astype(np.int64), S_BINS - 1)
    vbin = np.minimum((v * V_BINS).astype(np.int64), V_BINS - 1)
    return hbin, sbin, vbin


def masked_histogram(hbin, sbin, vbin, fg) -> np.ndarray:
    """Normalized 40-bin histogram over the foreground pixels of a region."""
    fg = np.asarray(fg, dtype=bool)
    n = int(fg.sum())
    if n == 0:
        raise DataError("region has no foreground pixels to histogram")
    counts = np.concatenate([
        np.bincount(np.asarray(hbin)[fg], minlength=H_BINS),
        np.bincount(np.asarray(sbin)[fg], minlength=S_BINS),
        np.bincount(np.asarray(vbin)[fg], minlength=V_BINS),
    ])
    return counts.astype(np.float64) / (3.0 * n)


def sample_patches(region, config: SamplingConfig, rng=None):
    """Sample exactly `config.patches` admissible rectangles inside a part band.

    A rectangle is admissible when it lies fully inside the band, its area
    fraction of the band and its aspect ratio are within the configured
    bounds, and at least `min_mask_coverage` of its pixels are foreground.
    Rejection sampling retries up to `max_attempts` times per patch; a region
    that cannot host a patch within the budget raises DataError.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    band_h = region.height
    band_w = region.width
    band_area = band_h * band_w
    if band_h < 1 or band_w < 1:
        raise DataError("empty part band")

    # Summed-area table for O(1) foreground counts per candidate rectangle.
    cum = np.zeros((band_h + 1, band_w + 1), dtype=np.int64)
    cum[1:, 1:] = region.mask.astype(np.int64).cumsum(axis=0).cumsum(axis=1)

    rects = []
    for _ in range(config.patches):
        placed = False
        for _attempt in range(config.max_attempts):
            frac = rng.uniform(config.area_min, config.area_max)
            aspect = rng.uniform(config.aspect_min, config.aspect_max)
            area = frac * band_area
            w = int(math.floor(math.sqrt(area * aspect) + 0.5))
            h = int(math.floor(math.sqrt(area / aspect) + 0.5))
            w = min(max(w, 1), band_w)
            h = min(max(h, 1), band_h)
            if not config.area_min * band_area <= w * h <= config.area_max * band_area:
                continue
            if not config.aspect_min <= w / h <= config.aspect_max:
                continue
            x = int(rng.integers(0, band_w - w + 1))
            y = int(rng.integers(0, band_h - h + 1))
            fg_count = int(cum[y + h, x + w] - cum[y, x + w] - cum[y + h, x] + cum[y, x])
            if fg_count >= 1 and fg_count / (w * h) >= config.min_mask_coverage:
                rects.append(Rect(x=x, y=region.y_top + y, w=w, h=h))
                placed = True
                break
        if not placed:
            raise DataError(
                f"part band rows [{region.y_top}, {region.y_bottom}) cannot host "
                f"an admissible patch within {config.max_attempts} attempts"
            )
    return rects


def describe_patch(raster, mask, rect: Rect, band) -> PatchDescriptor:
    """Descriptor of a single rectangle: 40-bin histogram plus centre position."""
    if not (band.y_top <= rect.y and rect.y + rect.h <= band.y_bottom):
        raise ValueError("rectangle does not lie inside the part band")
    hbin, sbin, vbin = hsv_bin_indices(raster)
    fg = np.asarray(mask, dtype=bool)[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w]
    hist = masked_histogram(
        hbin[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w],
        sbin[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w],
        vbin[rect.y:rect.y + rect.h, rect.x:rect.x + rect.w],
        fg,
    )
    y_pos = (rect.center_y - band.y_top) / band.height
    return PatchDescriptor(hsv=hist, y_pos=float(y_pos))


def _stream_rngs(seed: int, stream_key: str, count: int):
    digest = hashlib.blake2b(stream_key.encode("utf-8"), digest_size=8).digest()
    root = np.random.SeedSequence([seed, int.from_bytes(digest, "little")])
    return [np.random.default_rng(child) for child in root.spawn(count)]


def _describe_rects(bin_maps, mask, rects, band):
    """Histograms and positions for a batch of rectangles on one raster."""
    hbin, sbin, vbin = bin_maps
    rect_arr = np.array([[r.x, r.y, r.w, r.h] for r in rects], dtype=np.int64)
    counts = kernels.patch_bin_counts(hbin, sbin, vbin, mask, rect_arr)
    npix = counts[:, :H_BINS].sum(axis=1)
    if np.any(npix == 0):
        raise DataError("sampled rectangle contains no foreground pixels")
    hsv = counts.astype(np.float64) / (3.0 * npix[:, None])
    y_pos = np.array(
        [(r.center_y - band.y_top) / band.height for r in rects], dtype=np.float64
    )
    return hsv, y_pos


def build_descriptor(
    raster,
    mask,
    partition,
    config: SamplingConfig,
    *,
    person_id: str,
    provenance: str = "template",
    simulation=None,
    stream_key=None,
) -> PersonDescriptor:
    """Extract the full person descriptor from one image.

    Without simulation each part set holds the `patches` real descriptors.
    With simulation the coefficient vector is first rescaled against the
    saturation threshold, then every sampled rectangle is described on each
    transformed raster, giving patches x coefficients descriptors per part
    (the 1.0 coefficient reproduces the real patches, so originals are not
    added twice). Rectangles are sampled once and shared by all variants.
    """
    if provenance not in PROVENANCES:
        raise ValueError(f"provenance must be one of {PROVENANCES}")
    raster = np.asarray(raster, dtype=np.uint8)
    mask = np.asarray(mask, dtype=bool)
    imaging.check_mask(raster, mask)

    key = stream_key if stream_key is not None else f"{person_id}|{provenance}"
    rngs = _stream_rngs(config.seed, key, len(partition.parts))
    rect_lists = [
        sample_patches(region, config, rng)
        for region, rng in zip(partition.parts, rngs)
    ]

    if simulation is None:
        variants = [raster]
    else:
        coeffs = imaging.adjust_coefficients(
            simulation.coefficients, raster, mask, simulation.threshold
        )
        variants = [
            imaging.apply_brightness_contrast(raster, mask, c) for c in coeffs
        ]
    variant_bins = [hsv_bin_indices(v) for v in variants]

    parts = []
    for region, rects in zip(partition.parts, rect_lists):
        hsv_blocks = []
        y_blocks = []
        for bins in variant_bins:
            hsv, y_pos = _describe_rects(bins, mask, rects, region)
            hsv_blocks.append(hsv)
            y_blocks.append(y_pos)
        parts.append(PartSet(np.concatenate(hsv_blocks), np.concatenate(y_blocks)))

    cfg = config.echo()
    cfg["simulation"] = (
        None
        if simulation is None
        else {
            "coefficients": list(simulation.coefficients),
            "threshold": simulation.threshold,
        }
    )
    return PersonDescriptor(
        person_id=str(person_id),
        provenance=provenance,
        seed=config.seed,
        parts=parts,
        config=cfg,
    )


def merge_descriptors(descriptors) -> PersonDescriptor:
    """Part-wise union of several descriptors of the same person.

    Supports multi-frame galleries/probes: patches accumulated over frames
    live in the same sequence of sets.
    """
    descriptors = list(descriptors)
    if not descriptors:
        raise DataError("cannot merge an empty list of descriptors")
    first = descriptors[0]
    for d in descriptors[1:]:
        if d.person_id != first.person_id:
            raise DataError(
                f"cannot merge descriptors of {first.person_id!r} and {d.person_id!r}"
            )
        if len(d.parts) != len(first.parts):
            raise DataError("cannot merge descriptors with different part counts")
    if len(descriptors) == 1:
        return first
    parts = [
        PartSet(
            np.concatenate([d.parts[j].hsv for d in descriptors]),
            np.concatenate([d.parts[j].y_pos for d in descriptors]),
        )
        for j in range(len(first.parts))
    ]
    cfg = dict(first.config)
    cfg["merged_from"] = len(descriptors)
    return PersonDescriptor(
        person_id=first.person_id,
        provenance=first.provenance,
        seed=first.seed,
        parts=parts,
        config=cfg,
    )


def descriptor_to_json(desc: PersonDescriptor) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "person_id": desc.person_id,
        "provenance": desc.provenance,
        "seed": desc.seed,
        "config": desc.config,
        "parts": [
            [
                {"hsv": part.hsv[i].tolist(), "y_pos": float(part.y_pos[i])}
                for i in range(len(part))
            ]
            for part in desc.parts
        ],
    }
    return json.dumps(doc, separators=(",", ":"))


def _descriptor_from_doc(doc, origin) -> PersonDescriptor:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DataError(
            f"{origin}: unsupported descriptor schema version {version!r} "
            f"(this build reads version {SCHEMA_VERSION})"
        )
    try:
        parts = []
        for raw in doc["parts"]:
            hsv = np.array([p["hsv"] for p in raw], dtype=np.float64)
            y_pos = np.array([p["y_pos"] for p in raw], dtype=np.float64)
            parts.append(PartSet(hsv, y_pos))
        desc = PersonDescriptor(
            person_id=str(doc["person_id"]),
            provenance=str(doc["provenance"]),
            seed=int(doc["seed"]),
            parts=parts,
            config=dict(doc.get("config") or {}),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{origin}: malformed descriptor document: {exc}") from exc
    for part in desc.parts:
        sums = part.hsv.sum(axis=1)
        if np.any(part.hsv < 0) or np.any(np.abs(sums - 1.0) > 1e-6):
            raise DataError(f"{origin}: histogram rows are not normalized")
        if np.any(part.y_pos < 0) or np.any(part.y_pos > 1):
            raise DataError(f"{origin}: y_pos outside [0, 1]")
    return desc


def descriptor_to_bytes(desc: PersonDescriptor) -> bytes:
    """Compact little-endian container; layout documented in the README."""
    pid = desc.person_id.encode("utf-8")
    cfg = json.dumps(desc.config, separators=(",", ":")).encode("utf-8")
    out = bytearray()
    out += struct.pack("<4sIQB", BINARY_MAGIC, SCHEMA_VERSION, desc.seed,
                       _PROVENANCE_CODE.get(desc.provenance, 0))
    out += struct.pack("<H", len(pid)) + pid
    out += struct.pack("<I", len(cfg)) + cfg
    out += struct.pack("<B", len(desc.parts))
    for part in desc.parts:
        out += struct.pack("<I", len(part))
        out += np.ascontiguousarray(part.hsv, dtype="<f8").tobytes()
        out += np.ascontiguousarray(part.y_pos, dtype="<f8").tobytes()
    return bytes(out)


def _descriptor_from_bytes(blob: bytes, origin) -> PersonDescriptor:
    try:
        magic, version, seed, prov_code = struct.unpack_from("<4sIQB", blob, 0)
        if magic != BINARY_MAGIC:
            raise DataError(f"{origin}: not a binary descriptor (bad magic)")
        if version != SCHEMA_VERSION:
            raise DataError(
                f"{origin}: unsupported descriptor schema version {version} "
                f"(this build reads version {SCHEMA_VERSION})"
            )
        off = struct.calcsize("<4sIQB")
        (pid_len,) = struct.unpack_from("<H", blob, off)
        off += 2
        person_id = blob[off:off + pid_len].decode("utf-8")
        off += pid_len
        (cfg_len,) = struct.unpack_from("<I", blob, off)
        off += 4
        config = json.loads(blob[off:off + cfg_len].decode("utf-8"))
        off += cfg_len
        (num_parts,) = struct.unpack_from("<B", blob, off)
        off += 1
        parts = []
        for _ in range(num_parts):
            (n,) = struct.unpack_from("<I", blob, off)
            off += 4
            hsv = np.frombuffer(blob, dtype="<f8", count=n * HIST_BINS, offset=off)
            off += n * HIST_BINS * 8
            y_pos = np.frombuffer(blob, dtype="<f8", count=n, offset=off)
            off += n * 8
            parts.append(PartSet(hsv.reshape(n, HIST_BINS).copy(), y_pos.copy()))
    except DataError:
        raise
    except (struct.error, ValueError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{origin}: malformed binary descriptor: {exc}") from exc
    provenance = "probe" if prov_code == 1 else "template"
    return PersonDescriptor(
        person_id=person_id, provenance=provenance, seed=seed,
        parts=parts, config=config,
    )


def save_descriptor(desc: PersonDescriptor, path) -> None:
    """Write a descriptor file; `.bin` selects the binary container, else JSON."""
    path = Path(path)
    if path.suffix == ".bin":
        path.write_bytes(descriptor_to_bytes(desc))
    else:
        path.write_text(descriptor_to_json(desc) + "\n", encoding="utf-8")


def load_descriptor(path) -> PersonDescriptor:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"descriptor file not found: {path}")
    blob = path.read_bytes()
    if blob[:4] == BINARY_MAGIC:
        return _descriptor_from_bytes(blob, str(path))
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: not a descriptor file: {exc}") from exc
    return _descriptor_from_doc(doc, str(path))
