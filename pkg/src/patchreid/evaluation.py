"""Gallery evaluation: manifests, trials, CMC curves, synthetic data, timing.

The evaluation protocol pairs two cameras: every person has images in both,
the lexicographically first camera provides the gallery templates and the
second the probes. A run draws `trials` random subsets of persons, ranks
each probe against the subset's gallery, and averages the per-trial
cumulative match characteristic (CMC) curves pointwise.

A synthetic dataset generator produces color-blocked pedestrian images with
a known ground truth; probe images are brightness-scaled copies of the
gallery images, so the benefit of illumination simulation can be measured
without external data.
"""

import json
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import imaging
from .descriptor import SamplingConfig, build_descriptor, merge_descriptors
from .errors import DataError
from .imaging import SimulationConfig
from .kernels import active_backend
from .matching import MatchConfig, rank_gallery
from .partition import find_partition


# --------------------------------------------------------------------------
# Manifests


@dataclass(frozen=True)
class ManifestEntry:
    person_id: str
    camera_id: str
    image: Path
    mask: Path | None = None


def load_manifest(path) -> list:
    """Read a JSONL manifest; image/mask paths are resolved against its folder.

    Each line is an object with keys person_id, camera_id, image and
    optionally mask (omitted or null means the whole frame is foreground).
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")
    base = path.parent
    entries = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            doc = json.loads(line)
            person_id = str(doc["person_id"])
            camera_id = str(doc["camera_id"])
            image = base / doc["image"]
            mask = base / doc["mask"] if doc.get("mask") else None
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DataError(f"{path}:{lineno}: bad manifest line: {exc}") from exc
        if not image.is_file():
            raise DataError(f"{path}:{lineno}: image not found: {image}")
        if mask is not None and not mask.is_file():
            raise DataError(f"{path}:{lineno}: mask not found: {mask}")
        entries.append(ManifestEntry(person_id, camera_id, image, mask))
    if not entries:
        raise DataError(f"manifest {path} has no entries")
    return entries


def split_cameras(entries):
    """Group manifest entries into (gallery camera, probe camera, per-person map).

    Exactly two cameras must be present and every person must appear in
    both; the map is {person_id: {camera_id: [entries sorted by image path]}}.
    """
    cameras = sorted({e.camera_id for e in entries})
    if len(cameras) != 2:
        raise DataError(
            f"evaluation needs exactly 2 cameras, manifest has {cameras}"
        )
    by_person: dict = {}
    for e in entries:
        by_person.setdefault(e.person_id, {}).setdefault(e.camera_id, []).append(e)
    for pid, cams in sorted(by_person.items()):
        missing = [c for c in cameras if c not in cams]
        if missing:
            raise DataError(f"person {pid} has no image in camera(s) {missing}")
        for group in cams.values():
            group.sort(key=lambda e: str(e.image))
    return cameras[0], cameras[1], by_person


# --------------------------------------------------------------------------
# Descriptor extraction for evaluation


def _load_entry(entry: ManifestEntry):
    raster = imaging.load_image(entry.image)
    if entry.mask is None:
        mask = np.ones(raster.shape[:2], dtype=bool)
    else:
        mask = imaging.load_mask(entry.mask)
    return raster, mask


def extract_descriptor(
    raster,
    mask,
    *,
    sampling: SamplingConfig,
    partition_mode: str,
    person_id: str,
    provenance: str,
    simulation=None,
    stream_key=None,
):
    """Partition an image and build its descriptor in one step."""
    part = find_partition(raster, mask, mode=partition_mode)
    desc = build_descriptor(
        raster,
        mask,
        part,
        sampling,
        person_id=person_id,
        provenance=provenance,
        simulation=simulation,
        stream_key=stream_key,
    )
    desc.config["partition"] = partition_mode
    return desc


def _run_tasks(tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _person_descriptor(
    items, *, sampling, partition_mode, provenance, simulation, timer=None
):
    """Build one descriptor per (person, camera) group, merging multi-frame input.

    items: list of (person_id, camera_id, raster, mask); one descriptor per
    frame, merged part-wise. Stream keys are derived from person, camera,
    role and frame index, so extraction does not depend on scheduling. When
    `timer` is given, the wall time of each frame's extraction is appended.
    """
    built = []
    for idx, (pid, cam, raster, mask) in enumerate(items):
        start = time.perf_counter()
        built.append(
            extract_descriptor(
                raster,
                mask,
                sampling=sampling,
                partition_mode=partition_mode,
                person_id=pid,
                provenance=provenance,
                simulation=simulation,
                stream_key=f"{pid}|{cam}|{provenance}|{idx}",
            )
        )
        if timer is not None:
            timer.append(time.perf_counter() - start)
    return merge_descriptors(built)


def descriptors_from_entries(
    entries,
    *,
    sampling: SamplingConfig,
    simulation=None,
    partition_mode: str = "search",
    jobs: int = 1,
    template_timer=None,
    probe_timer=None,
):
    """Templates and probes for a two-camera manifest.

    Gallery-camera images become templates (expanded with illumination
    variants when `simulation` is given); probe-camera images are always
    described as-is. Returns ({pid: template}, {pid: probe}).
    """
    gallery_cam, probe_cam, by_person = split_cameras(entries)
    pids = sorted(by_person)

    def make_task(pid, cam, provenance, sim, timer):
        group = by_person[pid][cam]

        def task():
            items = []
            for e in group:
                raster, mask = _load_entry(e)
                items.append((pid, cam, raster, mask))
            return pid, _person_descriptor(
                items,
                sampling=sampling,
                partition_mode=partition_mode,
                provenance=provenance,
                simulation=sim,
                timer=timer,
            )

        return task

    template_tasks = [
        make_task(p, gallery_cam, "template", simulation, template_timer)
        for p in pids
    ]
    probe_tasks = [
        make_task(p, probe_cam, "probe", None, probe_timer) for p in pids
    ]
    templates = dict(_run_tasks(template_tasks, jobs))
    probes = dict(_run_tasks(probe_tasks, jobs))
    return templates, probes


def descriptors_for_pairs(
    pairs,
    *,
    sampling: SamplingConfig,
    simulation=None,
    partition_mode: str = "search",
    jobs: int = 1,
    template_timer=None,
    probe_timer=None,
):
    """In-memory twin of descriptors_from_entries.

    pairs: list of (person_id, gallery_raster, probe_raster, mask), as
    produced by synth_pairs.
    """

    def make_task(pid, raster, mask, cam, provenance, sim, timer):
        def task():
            return pid, _person_descriptor(
                [(pid, cam, raster, mask)],
                sampling=sampling,
                partition_mode=partition_mode,
                provenance=provenance,
                simulation=sim,
                timer=timer,
            )

        return task

    template_tasks = [
        make_task(pid, img_a, mask, "a", "template", simulation, template_timer)
        for pid, img_a, _img_b, mask in pairs
    ]
    probe_tasks = [
        make_task(pid, img_b, mask, "b", "probe", None, probe_timer)
        for pid, _img_a, img_b, mask in pairs
    ]
    templates = dict(_run_tasks(template_tasks, jobs))
    probes = dict(_run_tasks(probe_tasks, jobs))
    return templates, probes


# --------------------------------------------------------------------------
# Trials and CMC


def make_trials(person_ids, trials: int, subset: int, seed: int):
    """Draw `trials` sorted subsets of `subset` persons without replacement."""
    ids = sorted(person_ids)
    if trials < 1:
        raise DataError("need at least one trial")
    if not 1 <= subset <= len(ids):
        raise DataError(
            f"subset size {subset} outside [1, {len(ids)}] for this gallery"
        )
    rng = np.random.default_rng(seed)
    return [sorted(rng.choice(ids, size=subset, replace=False)) for _ in range(trials)]


def compute_cmc(ranks, gallery_size: int) -> np.ndarray:
    """CMC curve: entry r-1 is the fraction of probes ranked at or better than r."""
    ranks = np.asarray(list(ranks), dtype=np.int64)
    if ranks.size == 0:
        raise DataError("cannot compute a CMC curve from zero probes")
    if gallery_size < 1 or ranks.min() < 1 or ranks.max() > gallery_size:
        raise DataError("ranks must lie in [1, gallery_size]")
    counts = np.bincount(ranks, minlength=gallery_size + 1)[1:]
    return np.cumsum(counts) / float(ranks.size)


def average_curves(curves) -> np.ndarray:
    curves = [np.asarray(c, dtype=np.float64) for c in curves]
    if not curves:
        raise DataError("no curves to average")
    length = curves[0].shape[0]
    if any(c.shape != (length,) for c in curves):
        raise DataError("curves must all have the same length to be averaged")
    return np.mean(np.stack(curves), axis=0)


@dataclass
class EvalResult:
    mean: np.ndarray          # averaged CMC curve, length = subset size
    trial_curves: list        # per-trial CMC curves
    trial_ids: list           # per-trial sorted person ids
    subset: int
    seed: int

    @property
    def rank1(self) -> float:
        return float(self.mean[0])


def _protocol(templates, probes, match, trial_ids, match_times=None):
    curves = []
    for chosen in trial_ids:
        gallery = [templates[pid] for pid in chosen]
        ranks = []
        for pid in chosen:
            start = time.perf_counter()
            ranked = rank_gallery(probes[pid], gallery, match)
            if match_times is not None:
                match_times.append(
                    (time.perf_counter() - start) / len(gallery)
                )
            ranks.append(ranked.rank_of(pid))
        curves.append(compute_cmc(ranks, len(chosen)))
    return curves


def evaluate_descriptors(
    templates: dict,
    probes: dict,
    match: MatchConfig,
    *,
    trials: int = 10,
    subset=None,
    seed: int = 0,
) -> EvalResult:
    """Rank every probe of each trial subset against that subset's gallery."""
    ids = sorted(templates)
    if sorted(probes) != ids:
        raise DataError("templates and probes must cover the same person ids")
    if not ids:
        raise DataError("nothing to evaluate: no persons")
    if subset is None:
        subset = len(ids)
    trial_ids = make_trials(ids, trials, subset, seed)
    curves = _protocol(templates, probes, match, trial_ids)
    return EvalResult(
        mean=average_curves(curves),
        trial_curves=curves,
        trial_ids=trial_ids,
        subset=subset,
        seed=seed,
    )


# --------------------------------------------------------------------------
# Synthetic dataset


SYNTH_WIDTH = 48
SYNTH_HEIGHT = 128
SYNTH_BLOCK = 8
SYNTH_HEAD_END = 19    # rows [0, 19): gray head band
SYNTH_TORSO_END = 70   # rows [19, 70): torso; [70, 128): legs
SYNTH_HUE_CHOICES = tuple(range(0, 24, 2))  # 24-bin hue indices, 30 degrees apart
SYNTH_SAT_BIN = 8      # all clothing shares one saturation bin
SYNTH_V_BASE = (0.40, 0.88)   # per-person/part brightness level range
SYNTH_V_JITTER = 0.06         # per-block spread around the level


def _paint_band(rng, out, y0, y1, hue_bin=0, v_base=0.0, gray=False):
    """Fill rows [y0, y1) with 8x8 blocks of jittered instances of one color.

    Hue jitter stays inside one 15-degree histogram bin, so a garment is a
    single (hue bin, brightness level) class; a global brightness change
    moves the level across the coarse value bins while leaving hue alone.
    """
    width = out.shape[1]
    for by in range(y0, y1, SYNTH_BLOCK):
        for bx in range(0, width, SYNTH_BLOCK):
            if gray:
                h, s = 0.0, 0.0
                v = rng.uniform(0.25, 0.35)
            else:
                h = hue_bin * 15.0 + rng.uniform(2.0, 13.0)
                s = (SYNTH_SAT_BIN + rng.uniform(0.15, 0.85)) / 12.0
                v = v_base + rng.uniform(-SYNTH_V_JITTER, SYNTH_V_JITTER)
            rgb = imaging.hsv_to_rgb(h, s, v)
            out[by:min(by + SYNTH_BLOCK, y1), bx:min(bx + SYNTH_BLOCK, width)] = rgb


def _synth_image(rng, torso, legs):
    img = np.zeros((SYNTH_HEIGHT, SYNTH_WIDTH, 3), dtype=np.uint8)
    _paint_band(rng, img, 0, SYNTH_HEAD_END, gray=True)
    _paint_band(rng, img, SYNTH_HEAD_END, SYNTH_TORSO_END, *torso)
    _paint_band(rng, img, SYNTH_TORSO_END, SYNTH_HEIGHT, *legs)
    return img


def synth_pairs(persons: int, seed: int = 0, probe_coeff: float = 1.0):
    """Deterministic two-camera toy dataset of color-blocked figures.

    Every person wears a (torso hue, legs hue) pair unique to them, with
    torso hue != legs hue, plus a random per-part brightness level. Hue
    pairs identify persons when brightness is trustworthy; a global
    brightness change shifts every level across the coarse value bins, and
    because individual hues repeat across persons, templates then tie with
    impostors unless the brightness sweep is simulated. The probe image is
    the gallery image with the given brightness coefficient applied to the
    (full-frame) foreground; probe_coeff=1.0 yields identical pixels.

    Returns [(person_id, gallery_image, probe_image, mask)].
    """
    if persons < 2:
        raise DataError("a synthetic dataset needs at least 2 persons")
    hues = len(SYNTH_HUE_CHOICES)
    capacity = hues * (hues - 1)
    if persons > capacity:
        raise DataError(f"at most {capacity} distinct persons available")
    rng = np.random.default_rng(seed)
    mask = np.ones((SYNTH_HEIGHT, SYNTH_WIDTH), dtype=bool)
    used = set()
    pairs = []
    for i in range(persons):
        while True:
            torso_hue = int(rng.choice(SYNTH_HUE_CHOICES))
            legs_hue = int(rng.choice(SYNTH_HUE_CHOICES))
            if torso_hue != legs_hue and (torso_hue, legs_hue) not in used:
                used.add((torso_hue, legs_hue))
                break
        torso = (torso_hue, float(rng.uniform(*SYNTH_V_BASE)))
        legs = (legs_hue, float(rng.uniform(*SYNTH_V_BASE)))
        img_a = _synth_image(rng, torso, legs)
        img_b = imaging.apply_brightness_contrast(img_a, mask, probe_coeff)
        pairs.append((f"p{i:03d}", img_a, img_b, mask.copy()))
    return pairs


def generate_synthetic_dataset(
    outdir, persons: int, seed: int = 0, probe_coeff: float = 1.0
) -> Path:
    """Write the synthetic dataset to disk and return the manifest path."""
    outdir = Path(outdir)
    (outdir / "images").mkdir(parents=True, exist_ok=True)
    (outdir / "masks").mkdir(parents=True, exist_ok=True)
    lines = []
    for pid, img_a, img_b, mask in synth_pairs(persons, seed, probe_coeff):
        imaging.save_image(outdir / "images" / f"{pid}_a.png", img_a)
        imaging.save_image(outdir / "images" / f"{pid}_b.png", img_b)
        imaging.save_mask(outdir / "masks" / f"{pid}.png", mask)
        for cam in ("a", "b"):
            lines.append(json.dumps({
                "person_id": pid,
                "camera_id": cam,
                "image": f"images/{pid}_{cam}.png",
                "mask": f"masks/{pid}.png",
            }, separators=(",", ":")))
    manifest = outdir / "manifest.jsonl"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


# --------------------------------------------------------------------------
# Timing


def cpu_model() -> str:
    try:
        with open("/proc/cpuinfo", encoding="utf-8") as f:
            for line in f:
                if line.startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine() or "unknown"


@dataclass
class TimingReport:
    probe_ms: float      # mean descriptor extraction time per probe frame
    template_ms: float   # mean extraction time per template frame
    match_ms: float      # mean wall time of one template/probe comparison
    frames: int          # template frames timed (== probe frames)
    pairs: int           # descriptor comparisons timed
    patches: int
    coefficients: int    # illumination variants per template (1 = none)
    backend: str
    cpu: str

    def to_dict(self) -> dict:
        return {
            "probe_ms": self.probe_ms,
            "template_ms": self.template_ms,
            "match_ms": self.match_ms,
            "frames": self.frames,
            "pairs": self.pairs,
            "patches": self.patches,
            "coefficients": self.coefficients,
            "backend": self.backend,
            "cpu": self.cpu,
        }


def write_timing_json(path, report: TimingReport) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


_warm = False


def _ensure_warm():
    """Run each pipeline stage once so JIT compilation never skews timings."""
    global _warm
    if _warm:
        return
    from .matching import sequence_distance

    pid, img_a, img_b, mask = synth_pairs(2, seed=0)[0]
    sampling = SamplingConfig(patches=4, seed=0)
    simulation = SimulationConfig(coefficients=(1.2, 0.8), threshold=240.0)
    tmpl = extract_descriptor(
        img_a, mask, sampling=sampling, partition_mode="fixed",
        person_id=pid, provenance="template", simulation=simulation,
    )
    probe = extract_descriptor(
        img_b, mask, sampling=sampling, partition_mode="fixed",
        person_id=pid, provenance="probe",
    )
    sequence_distance(tmpl, probe, MatchConfig())
    _warm = True


def run_benchmark(
    dataset,
    *,
    sampling: SamplingConfig | None = None,
    match: MatchConfig | None = None,
    simulation=None,
    partition_mode: str = "search",
    trials: int = 10,
    subset=None,
    seed: int = 0,
    jobs: int = 1,
):
    """Full protocol run with per-stage timing: returns (EvalResult, TimingReport).

    dataset may be a manifest path, a list of manifest entries, or a list of
    in-memory (person_id, gallery_image, probe_image, mask) tuples. Timing
    means cover every extracted frame and every ranked descriptor pair of
    the run; JIT compilation is triggered beforehand so it is not counted.
    """
    sampling = sampling if sampling is not None else SamplingConfig(seed=seed)
    match = match if match is not None else MatchConfig()
    _ensure_warm()

    template_times: list = []
    probe_times: list = []
    match_times: list = []
    kwargs = dict(
        sampling=sampling,
        simulation=simulation,
        partition_mode=partition_mode,
        jobs=jobs,
        template_timer=template_times,
        probe_timer=probe_times,
    )
    if isinstance(dataset, (str, Path)):
        dataset = load_manifest(dataset)
    if not dataset:
        raise DataError("empty dataset")
    if isinstance(dataset[0], ManifestEntry):
        templates, probes = descriptors_from_entries(dataset, **kwargs)
    else:
        templates, probes = descriptors_for_pairs(dataset, **kwargs)

    ids = sorted(templates)
    if subset is None:
        subset = len(ids)
    trial_ids = make_trials(ids, trials, subset, seed)
    curves = _protocol(templates, probes, match, trial_ids, match_times)
    result = EvalResult(
        mean=average_curves(curves),
        trial_curves=curves,
        trial_ids=trial_ids,
        subset=subset,
        seed=seed,
    )
    report = TimingReport(
        probe_ms=1000.0 * float(np.mean(probe_times)),
        template_ms=1000.0 * float(np.mean(template_times)),
        match_ms=1000.0 * float(np.mean(match_times)),
        frames=len(template_times),
        pairs=trials * subset * subset,
        patches=sampling.patches,
        coefficients=len(simulation.coefficients) if simulation else 1,
        backend=active_backend(),
        cpu=cpu_model(),
    )
    return result, report


# --------------------------------------------------------------------------
# Report writers (byte-stable for identical inputs)


def write_cmc_csv(path, curves, *, params=None) -> None:
    """curves: list of (label, array) columns sharing one rank axis."""
    curves = [(label, np.asarray(c, dtype=np.float64)) for label, c in curves]
    if not curves:
        raise DataError("no curves to write")
    length = curves[0][1].shape[0]
    if any(c.shape != (length,) for _, c in curves):
        raise DataError("curves must all have the same length")
    lines = []
    for key in sorted(params or {}):
        lines.append(f"# {key} = {params[key]}")
    lines.append("rank," + ",".join(label for label, _ in curves))
    for i in range(length):
        lines.append(f"{i + 1}," + ",".join(repr(float(c[i])) for _, c in curves))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_SVG_PALETTE = ("#1b6ca8", "#d1495b", "#2e8b57", "#8e6fb8", "#c98a2b", "#3b3b3b")


def write_cmc_svg(path, curves, *, title="Cumulative match characteristic") -> None:
    """Minimal hand-assembled SVG line plot; output is byte-stable."""
    curves = [(label, np.asarray(c, dtype=np.float64)) for label, c in curves]
    if not curves or any(c.shape[0] < 1 for _, c in curves):
        raise DataError("no curves to plot")
    width, height = 640, 480
    left, right, top, bottom = 62, 18, 34, 46
    plot_w = width - left - right
    plot_h = height - top - bottom
    n = max(c.shape[0] for _, c in curves)

    def sx(rank):
        if n == 1:
            return left + plot_w / 2.0
        return left + (rank - 1) * plot_w / (n - 1)

    def sy(rate):
        return top + (1.0 - rate) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    out.append(
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" '
        'stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
        f'y2="{top + plot_h}" stroke="black" stroke-width="1"/>'
    )
    for i in range(6):  # y ticks at 0.0 .. 1.0
        rate = i / 5.0
        y = sy(rate)
        out.append(
            f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" '
            'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{rate:.1f}</text>'
        )
    xticks = sorted({1, n} | {max(1, round(n * f / 5.0)) for f in range(1, 5)})
    for rank in xticks:
        x = sx(rank)
        out.append(
            f'<line x1="{x:.2f}" y1="{top + plot_h}" x2="{x:.2f}" '
            f'y2="{top + plot_h + 4}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{top + plot_h + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{rank}</text>'
        )
    out.append(
        f'<text x="{left + plot_w / 2:.2f}" y="{height - 8}" text-anchor="middle" '
        'font-family="sans-serif" font-size="12">rank</text>'
    )
    out.append(
        f'<text x="16" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {top + plot_h / 2:.2f})">match rate</text>'
    )
    for idx, (label, curve) in enumerate(curves):
        color = _SVG_PALETTE[idx % len(_SVG_PALETTE)]
        pts = " ".join(
            f"{sx(r + 1):.2f},{sy(float(curve[r])):.2f}" for r in range(curve.shape[0])
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = top + 14 + 16 * idx
        lx = left + plot_w - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
