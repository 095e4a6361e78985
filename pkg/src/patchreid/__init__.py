"""Appearance-based person re-identification with multi-patch part descriptors.

Pipeline: partition a pedestrian image into torso and leg bands, sample
random rectangles in each band, describe every rectangle by a normalized
40-bin HSV histogram plus its relative height, optionally expand templates
with simulated illumination variants, and compare people with a k-th
ranked Hausdorff distance between the patch sets of corresponding parts.
"""

from .errors import DataError, PatchReidError
from .imaging import (
    DEFAULT_COEFFICIENTS,
    DEFAULT_SATURATION_THRESHOLD,
    SimulationConfig,
    adjust_coefficients,
    apply_brightness_contrast,
    load_image,
    load_mask,
    rgb_to_hsv,
    save_image,
    save_mask,
)
from .partition import BodyPartition, PartRegion, find_partition, part_bounding_region
from .descriptor import (
    PartSet,
    PatchDescriptor,
    PersonDescriptor,
    Rect,
    SamplingConfig,
    build_descriptor,
    describe_patch,
    load_descriptor,
    merge_descriptors,
    sample_patches,
    save_descriptor,
)
from .matching import (
    MatchConfig,
    RankedMatchList,
    bhattacharyya_distance,
    kth_hausdorff,
    patch_distance,
    rank_gallery,
    sequence_distance,
)
from .evaluation import (
    EvalResult,
    ManifestEntry,
    TimingReport,
    compute_cmc,
    evaluate_descriptors,
    generate_synthetic_dataset,
    load_manifest,
    run_benchmark,
    synth_pairs,
    write_cmc_csv,
    write_cmc_svg,
    write_timing_json,
)
from .kernels import active_backend

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "PatchReidError",
    "DEFAULT_COEFFICIENTS",
    "DEFAULT_SATURATION_THRESHOLD",
    "SimulationConfig",
    "adjust_coefficients",
    "apply_brightness_contrast",
    "load_image",
    "load_mask",
    "rgb_to_hsv",
    "save_image",
    "save_mask",
    "BodyPartition",
    "PartRegion",
    "find_partition",
    "part_bounding_region",
    "PartSet",
    "PatchDescriptor",
    "PersonDescriptor",
    "Rect",
    "SamplingConfig",
    "build_descriptor",
    "describe_patch",
    "load_descriptor",
    "merge_descriptors",
    "sample_patches",
    "save_descriptor",
    "MatchConfig",
    "RankedMatchList",
    "bhattacharyya_distance",
    "kth_hausdorff",
    "patch_distance",
    "rank_gallery",
    "sequence_distance",
    "EvalResult",
    "ManifestEntry",
    "TimingReport",
    "compute_cmc",
    "evaluate_descriptors",
    "generate_synthetic_dataset",
    "load_manifest",
    "run_benchmark",
    "synth_pairs",
    "write_cmc_csv",
    "write_cmc_svg",
    "write_timing_json",
    "active_backend",
    "__version__",
]
