#!/usr/bin/env python3
"""Compare the numba and pure-numpy kernel backends on the full pipeline.

The backend is chosen once per process (PATCHREID_BACKEND is read at import
time), so the parent re-launches itself once per backend with `--single` and
merges the children's JSON reports into one table:

    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --persons 12 --reps 10 --json out.json
"""

import argparse
import json
import os
import subprocess
import sys
import time

STAGES = ("template_ms", "probe_ms", "match_ms", "kernel_ms")


def run_single(backend, persons, patches, reps, seed):
    import numpy as np

    from patchreid import kernels
    from patchreid.descriptor import SamplingConfig, build_descriptor
    from patchreid.evaluation import cpu_model, synth_pairs
    from patchreid.imaging import SimulationConfig
    from patchreid.matching import MatchConfig, sequence_distance
    from patchreid.partition import find_partition

    if kernels.active_backend() != backend:
        raise SystemExit(f"requested backend {backend!r} is unavailable")

    pairs = synth_pairs(persons, seed=seed)
    sampling = SamplingConfig(patches=patches, seed=seed)
    sim = SimulationConfig()
    match = MatchConfig()

    scenes = [(find_partition(img, mask, mode="fixed"), img, mask)
              for _, img, _, mask in pairs]

    def build(provenance, simulation):
        return [
            build_descriptor(img, mask, part, sampling, person_id=f"p{i}",
                             provenance=provenance, simulation=simulation)
            for i, (part, img, mask) in enumerate(scenes)
        ]

    build("template", sim)  # warm-up: JIT compilation / cache load

    def timed(fn, n):
        start = time.perf_counter()
        for _ in range(reps):
            fn()
        return 1000.0 * (time.perf_counter() - start) / (reps * n)

    result = {"backend": backend}
    result["template_ms"] = timed(lambda: build("template", sim), persons)
    result["probe_ms"] = timed(lambda: build("probe", None), persons)

    templates = build("template", sim)
    probes = build("probe", None)
    matches = [(q, t) for q in probes for t in templates]
    result["match_ms"] = timed(
        lambda: [sequence_distance(q, t, match) for q, t in matches],
        len(matches))

    rng = np.random.default_rng(seed)
    sx = np.sqrt(rng.dirichlet(np.ones(40), size=patches * len(sim.coefficients)))
    sy = np.sqrt(rng.dirichlet(np.ones(40), size=patches * len(sim.coefficients)))
    yx = rng.random(sx.shape[0])
    yy = rng.random(sy.shape[0])
    result["kernel_ms"] = timed(
        lambda: kernels.directed_min_distances(sx, yx, sy, yy, 0.6), 1)

    result["cpu"] = cpu_model()
    json.dump(result, sys.stdout)
    print()


def run_all(args):
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    results = {}
    for backend in backends:
        env = dict(os.environ, PATCHREID_BACKEND=backend)
        cmd = [sys.executable, os.path.abspath(__file__), "--single", backend,
               "--persons", str(args.persons), "--patches", str(args.patches),
               "--reps", str(args.reps), "--seed", str(args.seed)]
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            print(f"{backend}: skipped ({proc.stderr.strip().splitlines()[-1]})",
                  file=sys.stderr)
            continue
        results[backend] = json.loads(proc.stdout)

    if not results:
        raise SystemExit("no backend produced results")

    labels = {
        "template_ms": f"template build (P={args.patches}, S=5)",
        "probe_ms": f"probe build (P={args.patches})",
        "match_ms": "descriptor-pair match",
        "kernel_ms": "directed-minima kernel",
    }
    cols = list(results)
    width = max(len(v) for v in labels.values())
    header = "stage".ljust(width) + "".join(f"{c:>12}" for c in cols)
    if len(cols) == 2:
        header += f"{'ratio':>8}"
    print(header)
    print("-" * len(header))
    for stage in STAGES:
        row = labels[stage].ljust(width)
        for c in cols:
            row += f"{results[c][stage]:>10.3f}ms"
        if len(cols) == 2:
            a, b = (results[c][stage] for c in cols)
            row += f"{b / a:>7.1f}x"
        print(row)
    print(f"\ncpu: {results[cols[0]]['cpu']}")

    if args.json:
        payload = {
            "config": {"persons": args.persons, "patches": args.patches,
                       "reps": args.reps, "seed": args.seed},
            "results": results,
        }
        with open(args.json, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        print(f"wrote {args.json}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--backends", default="numba,numpy",
                        help="comma-separated backends to compare")
    parser.add_argument("--persons", type=int, default=8)
    parser.add_argument("--patches", type=int, default=80)
    parser.add_argument("--reps", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", metavar="PATH", help="also dump raw numbers")
    parser.add_argument("--single", metavar="BACKEND",
                        help=argparse.SUPPRESS)  # internal child mode
    args = parser.parse_args(argv)
    if args.single:
        run_single(args.single, args.persons, args.patches, args.reps, args.seed)
    else:
        run_all(args)


if __name__ == "__main__":
    main()
