"""Command-line interface.

Subcommands:
  extract   build descriptor files from images (+ optional masks)
  match     compare two descriptor files, or rank a gallery folder
  evaluate  run the two-camera CMC protocol on a manifest or synthetic data
  synth     write a synthetic dataset to disk

Settings are layered: built-in defaults, then an optional `key = value`
config file (--config), then explicit flags. Exit codes: 0 success, 1 usage
error, 2 bad input data, 3 unexpected failure.
"""

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import evaluation
from .descriptor import (
    SamplingConfig,
    load_descriptor,
    save_descriptor,
)
from .errors import DataError
from .imaging import (
    DEFAULT_COEFFICIENTS,
    DEFAULT_SATURATION_THRESHOLD,
    SimulationConfig,
    load_image,
    load_mask,
)
from .kernels import active_backend
from .matching import MatchConfig, rank_gallery, sequence_distance

import numpy as np

PARTITION_MODES = ("fixed", "search")


@dataclass
class RunConfig:
    """Resolved settings shared by all subcommands."""

    patches: int = 80
    area_min: float = 0.125
    area_max: float = 0.25
    aspect_min: float = 0.5
    aspect_max: float = 2.0
    min_mask_coverage: float = 0.5
    max_attempts: int = 1000
    seed: int = 0
    beta: float = 0.6
    k: int = 10
    part_weights: tuple = (0.5, 0.5)
    coefficients: tuple = DEFAULT_COEFFICIENTS
    saturation_threshold: float = DEFAULT_SATURATION_THRESHOLD
    partition: str = "search"
    simulate: bool = True
    jobs: int = 1

    def sampling(self) -> SamplingConfig:
        try:
            return SamplingConfig(
                patches=self.patches,
                area_min=self.area_min,
                area_max=self.area_max,
                aspect_min=self.aspect_min,
                aspect_max=self.aspect_max,
                min_mask_coverage=self.min_mask_coverage,
                seed=self.seed,
                max_attempts=self.max_attempts,
            )
        except ValueError as exc:
            raise DataError(f"invalid sampling configuration: {exc}") from exc

    def match(self) -> MatchConfig:
        try:
            return MatchConfig(beta=self.beta, k=self.k, part_weights=self.part_weights)
        except ValueError as exc:
            raise DataError(f"invalid matching configuration: {exc}") from exc

    def simulation(self):
        if not self.simulate:
            return None
        try:
            return SimulationConfig(
                coefficients=tuple(self.coefficients),
                threshold=self.saturation_threshold,
            )
        except ValueError as exc:
            raise DataError(f"invalid simulation configuration: {exc}") from exc

    def echo(self) -> dict:
        """Flat, serialization-friendly view of every resolved setting."""
        values = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(repr(v) for v in value)
            values[f.name] = value
        return values


_INT_KEYS = {"patches", "max_attempts", "seed", "k", "jobs"}
_FLOAT_KEYS = {
    "area_min", "area_max", "aspect_min", "aspect_max",
    "min_mask_coverage", "beta", "saturation_threshold",
}
_TUPLE_KEYS = {"part_weights", "coefficients"}
_BOOL_KEYS = {"simulate"}
_STR_KEYS = {"partition"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _TUPLE_KEYS | _BOOL_KEYS | _STR_KEYS


def _parse_float_tuple(raw: str) -> tuple:
    try:
        values = tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise DataError(f"expected comma-separated numbers, got {raw!r}") from exc
    if not values:
        raise DataError(f"expected comma-separated numbers, got {raw!r}")
    return values


def _parse_config_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _TUPLE_KEYS:
            return _parse_float_tuple(raw)
        if key in _BOOL_KEYS:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1", "on"):
                return True
            if lowered in ("false", "no", "0", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return raw
    except ValueError as exc:
        raise DataError(f"bad value for {key!r}: {exc}") from exc


def load_config_file(path) -> dict:
    """Parse a flat `key = value` file; '#' starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"config file not found: {path}")
    settings = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise DataError(f"{path}:{lineno}: unknown setting {key!r}")
        settings[key] = _parse_config_value(key, raw)
    return settings


# argparse dest -> RunConfig field for the shared override flags
_FLAG_FIELDS = {
    "patches": "patches",
    "area_min": "area_min",
    "area_max": "area_max",
    "aspect_min": "aspect_min",
    "aspect_max": "aspect_max",
    "min_mask_coverage": "min_mask_coverage",
    "max_attempts": "max_attempts",
    "seed": "seed",
    "beta": "beta",
    "k": "k",
    "part_weights": "part_weights",
    "coeffs": "coefficients",
    "sat_threshold": "saturation_threshold",
    "partition": "partition",
    "jobs": "jobs",
}


def resolve_config(args) -> RunConfig:
    """Apply defaults, then the config file, then command-line flags."""
    values = {f.name: f.default for f in fields(RunConfig)}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for dest, field in _FLAG_FIELDS.items():
        flag = getattr(args, dest, None)
        if flag is not None:
            values[field] = flag
    if getattr(args, "no_simulation", False):
        values["simulate"] = False
    if values["partition"] not in PARTITION_MODES:
        raise DataError(
            f"partition mode must be one of {PARTITION_MODES}, "
            f"got {values['partition']!r}"
        )
    if values["jobs"] < 1:
        raise DataError("jobs must be at least 1")
    return RunConfig(**values)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _tuple_flag(raw):
    return _parse_float_tuple(raw)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("settings")
    g.add_argument("--config", metavar="FILE", help="key = value settings file")
    g.add_argument("--patches", type=int, help="patches sampled per part (default 80)")
    g.add_argument("--area-min", type=float, dest="area_min")
    g.add_argument("--area-max", type=float, dest="area_max")
    g.add_argument("--aspect-min", type=float, dest="aspect_min")
    g.add_argument("--aspect-max", type=float, dest="aspect_max")
    g.add_argument("--min-mask-coverage", type=float, dest="min_mask_coverage")
    g.add_argument("--max-attempts", type=int, dest="max_attempts")
    g.add_argument("--seed", type=int, help="base RNG seed (default 0)")
    g.add_argument("--beta", type=float, help="position weight in the patch metric")
    g.add_argument("--k", type=int, help="order of the set distance (default 10)")
    g.add_argument("--part-weights", type=_tuple_flag, dest="part_weights",
                   metavar="W1,W2", help="relative part weights")
    g.add_argument("--coeffs", type=_tuple_flag, metavar="C1,C2,...",
                   help="illumination coefficients (default 1.4,1.2,1.0,0.8,0.6)")
    g.add_argument("--sat-threshold", type=float, dest="sat_threshold",
                   help="mean-brightness cap for the coefficient ladder")
    g.add_argument("--partition", choices=PARTITION_MODES,
                   help="axis placement mode (default search)")
    g.add_argument("--no-simulation", action="store_true", dest="no_simulation",
                   help="describe templates without illumination variants")
    g.add_argument("--jobs", type=int, help="worker threads for batch extraction")
    return common


def build_parser() -> _Parser:
    parser = _Parser(prog="patchreid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common_flags()

    p = sub.add_parser("extract", parents=[common],
                       help="build descriptor files from images")
    role = p.add_mutually_exclusive_group(required=True)
    role.add_argument("--template", action="store_const", const="template",
                      dest="role", help="gallery role: expand illumination variants")
    role.add_argument("--probe", action="store_const", const="probe",
                      dest="role", help="query role: describe the image as-is")
    p.add_argument("--image", metavar="FILE", help="input image (PNG or PPM)")
    p.add_argument("--mask", metavar="FILE",
                   help="foreground mask; omitted = whole frame")
    p.add_argument("-o", "--output", metavar="FILE",
                   help="descriptor file (.json or .bin)")
    p.add_argument("--manifest", metavar="FILE", help="batch mode: JSONL manifest")
    p.add_argument("--outdir", metavar="DIR", help="batch mode: output folder")
    p.add_argument("--format", choices=("json", "bin"), default="json",
                   help="batch mode: descriptor container (default json)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("match", parents=[common],
                       help="compare descriptors or rank a gallery")
    p.add_argument("descriptors", nargs="*", metavar="FILE",
                   help="two descriptor files: template then probe")
    p.add_argument("--probe", metavar="FILE", help="probe descriptor to rank")
    p.add_argument("--gallery", metavar="DIR",
                   help="folder of template descriptors (.json/.bin)")
    p.add_argument("--top", type=int, metavar="N", help="print only the best N rows")
    p.add_argument("-o", "--output", metavar="FILE", help="also write ranking CSV")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("evaluate", parents=[common],
                       help="two-camera CMC evaluation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", metavar="FILE", help="JSONL dataset manifest")
    src.add_argument("--synthetic", type=int, metavar="N",
                     help="evaluate an in-memory synthetic dataset of N persons")
    p.add_argument("--trials", type=int, help="random subsets to average "
                   "(default 10 for manifests, 1 for synthetic)")
    p.add_argument("--subset", type=int, help="persons per trial "
                   "(default: half the persons for manifests, all for synthetic)")
    p.add_argument("--probe-coeff", type=float, dest="probe_coeff", default=1.0,
                   help="synthetic mode: brightness factor on probe images")
    p.add_argument("--outdir", metavar="DIR",
                   help="write cmc.csv, cmc.svg and timing.json here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("synth", parents=[common],
                       help="write a synthetic dataset to disk")
    p.add_argument("--outdir", required=True, metavar="DIR")
    p.add_argument("--persons", type=int, required=True, metavar="N")
    p.add_argument("--probe-coeff", type=float, dest="probe_coeff", default=1.0,
                   help="brightness factor baked into probe images")
    p.set_defaults(func=cmd_synth)

    return parser


# --------------------------------------------------------------------------
# Subcommand bodies


def cmd_extract(args) -> int:
    cfg = resolve_config(args)
    single = args.image is not None or args.output is not None
    batch = args.manifest is not None or args.outdir is not None
    if single == batch:
        raise DataError(
            "use either --image/-o for one file or --manifest/--outdir for a batch"
        )
    simulation = cfg.simulation() if args.role == "template" else None

    if single:
        if args.image is None or args.output is None:
            raise DataError("single-image mode needs both --image and -o/--output")
        raster = load_image(args.image)
        mask = (
            load_mask(args.mask)
            if args.mask
            else np.ones(raster.shape[:2], dtype=bool)
        )
        person_id = Path(args.image).stem
        desc = evaluation.extract_descriptor(
            raster, mask,
            sampling=cfg.sampling(), partition_mode=cfg.partition,
            person_id=person_id, provenance=args.role, simulation=simulation,
        )
        save_descriptor(desc, args.output)
        print(args.output)
        return 0

    if args.manifest is None or args.outdir is None:
        raise DataError("batch mode needs both --manifest and --outdir")
    entries = evaluation.load_manifest(args.manifest)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    sampling = cfg.sampling()
    counters: dict = {}

    def make_task(entry, index):
        def task():
            raster = load_image(entry.image)
            mask = (
                load_mask(entry.mask)
                if entry.mask is not None
                else np.ones(raster.shape[:2], dtype=bool)
            )
            desc = evaluation.extract_descriptor(
                raster, mask,
                sampling=sampling, partition_mode=cfg.partition,
                person_id=entry.person_id, provenance=args.role,
                simulation=simulation,
                stream_key=f"{entry.person_id}|{entry.camera_id}|{args.role}|{index}",
            )
            out = outdir / f"{entry.person_id}_{entry.camera_id}_{index}.{args.format}"
            save_descriptor(desc, out)
            return out

        return task

    tasks = []
    for entry in entries:
        index = counters.get((entry.person_id, entry.camera_id), 0)
        counters[(entry.person_id, entry.camera_id)] = index + 1
        tasks.append(make_task(entry, index))
    for out in evaluation._run_tasks(tasks, cfg.jobs):
        print(out)
    return 0


def cmd_match(args) -> int:
    cfg = resolve_config(args)
    match = cfg.match()

    if args.descriptors:
        if len(args.descriptors) != 2 or args.probe or args.gallery:
            raise DataError(
                "positional mode takes exactly two descriptor files: template probe"
            )
        template = load_descriptor(args.descriptors[0])
        probe = load_descriptor(args.descriptors[1])
        distance = sequence_distance(template, probe, match)
        print(f"distance = {distance!r}")
        return 0

    if not args.probe or not args.gallery:
        raise DataError("gallery mode needs --probe FILE and --gallery DIR")
    gallery_dir = Path(args.gallery)
    if not gallery_dir.is_dir():
        raise DataError(f"gallery folder not found: {gallery_dir}")
    files = sorted(
        p for p in gallery_dir.iterdir() if p.suffix in (".json", ".bin")
    )
    if not files:
        raise DataError(f"no descriptor files (.json/.bin) in {gallery_dir}")
    probe = load_descriptor(args.probe)
    gallery = [load_descriptor(p) for p in files]
    ranked = rank_gallery(probe, gallery, match)
    rows = ranked.ranking[: args.top] if args.top else ranked.ranking
    for position, (person_id, distance) in enumerate(rows, 1):
        print(f"{position} {person_id} {distance!r}")
    if args.output:
        echo = cfg.echo()
        lines = [f"# {key} = {echo[key]}" for key in sorted(echo)]
        lines.append("rank,person_id,distance")
        lines += [
            f"{i + 1},{pid},{dist!r}" for i, (pid, dist) in enumerate(rows)
        ]
        Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def _print_cmc_summary(result) -> None:
    for rank in (1, 5, 10, 20):
        if rank <= result.mean.shape[0]:
            print(f"rank-{rank} rate: {result.mean[rank - 1]:.4f}")


def cmd_evaluate(args) -> int:
    cfg = resolve_config(args)

    if args.synthetic is not None:
        dataset = evaluation.synth_pairs(args.synthetic, cfg.seed, args.probe_coeff)
        persons = len(dataset)
        trials = args.trials if args.trials is not None else 1
        subset = args.subset if args.subset is not None else persons
        source = f"synthetic({args.synthetic}, probe_coeff={args.probe_coeff})"
    else:
        dataset = evaluation.load_manifest(args.manifest)
        persons = len({e.person_id for e in dataset})
        trials = args.trials if args.trials is not None else 10
        # Half the persons per trial, following the usual split for paired
        # two-camera benchmarks (316 of 632 and so on).
        subset = args.subset if args.subset is not None else max(1, persons // 2)
        source = str(args.manifest)

    result, report = evaluation.run_benchmark(
        dataset,
        sampling=cfg.sampling(),
        match=cfg.match(),
        simulation=cfg.simulation(),
        partition_mode=cfg.partition,
        trials=trials,
        subset=subset,
        seed=cfg.seed,
        jobs=cfg.jobs,
    )
    print(f"evaluated {source}: {trials} trial(s), gallery size {result.subset}")
    _print_cmc_summary(result)
    print(
        f"timing [{report.backend}]: template {report.template_ms:.2f} ms, "
        f"probe {report.probe_ms:.2f} ms, match {report.match_ms:.3f} ms"
    )

    if args.outdir:
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        curves = [("mean", result.mean)] + [
            (f"trial{i + 1:02d}", c) for i, c in enumerate(result.trial_curves)
        ]
        params = cfg.echo()
        params.update({
            "source": source,
            "trials": trials,
            "subset": result.subset,
            "backend": active_backend(),
        })
        evaluation.write_cmc_csv(outdir / "cmc.csv", curves, params=params)
        evaluation.write_cmc_svg(outdir / "cmc.svg", [("mean", result.mean)])
        evaluation.write_timing_json(outdir / "timing.json", report)
        for name in ("cmc.csv", "cmc.svg", "timing.json"):
            print(f"wrote {outdir / name}")
    return 0


def cmd_synth(args) -> int:
    cfg = resolve_config(args)
    manifest = evaluation.generate_synthetic_dataset(
        args.outdir, args.persons, seed=cfg.seed, probe_coeff=args.probe_coeff
    )
    print(manifest)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
