"""Horizontal body partition into torso and leg bands.

Two horizontal axes split a pedestrian image: head/torso and torso/legs.
The head band carries too few stable pixels and is discarded, leaving an
ordered pair of part regions (torso, legs) that downstream sampling and
matching operate on.

`fixed` mode places the axes at constant height fractions. `search` mode
slides each axis inside a window around its fixed position and keeps the
row whose neighbouring bands differ the most, measured as the Bhattacharyya
distance between the 40-bin foreground histograms of the band just above
and the band just below the candidate row. Clothing boundaries separate
dissimilar color distributions, so maximizing the distance locks the axis
onto them.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import imaging
from .descriptor import hsv_bin_indices, masked_histogram
from .errors import DataError
from .matching import bhattacharyya_distance

NUM_PARTS = 2
PART_NAMES = ("torso", "legs")

MIN_IMAGE_HEIGHT = 8
HEAD_TORSO_FRACTION = 0.15
TORSO_LEGS_FRACTION = 0.55
HEAD_TORSO_WINDOW = (0.08, 0.25)
TORSO_LEGS_WINDOW = (0.40, 0.65)
AXIS_BAND_FRACTION = 0.15


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class PartRegion:
    """One horizontal band: rows [y_top, y_bottom) with its foreground slice."""

    y_top: int
    y_bottom: int
    mask: np.ndarray  # (height, image width) bool, band-local

    @property
    def height(self) -> int:
        return self.y_bottom - self.y_top

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def area(self) -> int:
        return self.height * self.width

    @property
    def fg_count(self) -> int:
        return int(self.mask.sum())


@dataclass(frozen=True)
class BodyPartition:
    head_torso_y: int
    torso_legs_y: int
    parts: tuple  # (torso PartRegion, legs PartRegion)

    def __len__(self) -> int:
        return len(self.parts)


def part_bounding_region(partition: BodyPartition, index: int) -> PartRegion:
    if not 0 <= index < len(partition.parts):
        raise IndexError(
            f"part index {index} out of range [0, {len(partition.parts)})"
        )
    return partition.parts[index]


def _axis_search(bin_maps, mask, lo: int, hi: int, depth: int) -> int:
    """Row in [lo, hi] maximizing the color contrast across the axis.

    The contrast at row y is the Bhattacharyya distance between the
    histograms of the bands mask[y-depth:y] and mask[y:y+depth] (clipped to
    the image). Rows whose bands have no foreground are inadmissible; ties
    keep the smallest row.
    """
    hbin, sbin, vbin = bin_maps
    height = mask.shape[0]
    best_y = -1
    best_score = -1.0
    for y in range(lo, hi + 1):
        a0 = max(0, y - depth)
        b1 = min(height, y + depth)
        fg_above = mask[a0:y]
        fg_below = mask[y:b1]
        if not fg_above.any() or not fg_below.any():
            continue
        hist_above = masked_histogram(hbin[a0:y], sbin[a0:y], vbin[a0:y], fg_above)
        hist_below = masked_histogram(hbin[y:b1], sbin[y:b1], vbin[y:b1], fg_below)
        score = bhattacharyya_distance(hist_above, hist_below)
        if score > best_score:
            best_score = score
            best_y = y
    if best_y < 0:
        raise DataError(
            f"no admissible partition axis in rows [{lo}, {hi}]: "
            "the foreground does not straddle the search window"
        )
    return best_y


def find_partition(raster, mask, mode: str = "search") -> BodyPartition:
    """Locate the two axes and return the (torso, legs) regions.

    mode="fixed" uses constant fractions of the image height; mode="search"
    refines each axis within its window by maximizing the color contrast
    between the bands above and below it.
    """
    raster = np.asarray(raster, dtype=np.uint8)
    mask = np.asarray(mask, dtype=bool)
    imaging.check_mask(raster, mask)
    height = raster.shape[0]
    if height < MIN_IMAGE_HEIGHT:
        raise DataError(
            f"image height {height} below the minimum of {MIN_IMAGE_HEIGHT} rows"
        )

    if mode == "fixed":
        head_torso = _round_half_up(HEAD_TORSO_FRACTION * height)
        torso_legs = _round_half_up(TORSO_LEGS_FRACTION * height)
    elif mode == "search":
        bin_maps = hsv_bin_indices(raster)
        depth = max(1, _round_half_up(AXIS_BAND_FRACTION * height))
        ht_lo = math.ceil(HEAD_TORSO_WINDOW[0] * height)
        ht_hi = math.floor(HEAD_TORSO_WINDOW[1] * height)
        tl_lo = math.ceil(TORSO_LEGS_WINDOW[0] * height)
        tl_hi = math.floor(TORSO_LEGS_WINDOW[1] * height)
        head_torso = _axis_search(bin_maps, mask, ht_lo, ht_hi, depth)
        torso_legs = _axis_search(bin_maps, mask, tl_lo, tl_hi, depth)
    else:
        raise ValueError(f"unknown partition mode {mode!r}")

    bounds = ((head_torso, torso_legs), (torso_legs, height))
    parts = []
    for name, (top, bottom) in zip(PART_NAMES, bounds):
        region = PartRegion(y_top=top, y_bottom=bottom, mask=mask[top:bottom])
        if region.fg_count == 0:
            raise DataError(
                f"{name} band rows [{top}, {bottom}) contains no foreground"
            )
        parts.append(region)
    return BodyPartition(
        head_torso_y=head_torso, torso_legs_y=torso_legs, parts=tuple(parts)
    )
