"""Measure how far default defects sit above the clean-noise distance floor.

Run: python scripts/calibrate_defaults.py [n_seeds]

For each seed a default corpus is generated in memory; clean images give the
noise floor (median clean distance) and the calibrated threshold; defective
images are reported per kind as multiples of the floor.  The frozen defaults
in ``tileinspect.synth`` were chosen so the typical defect sits near 10x the
floor and the weakest one stays above the calibrated threshold.
"""

from __future__ import annotations

import sys
from collections import defaultdict

import numpy as np

from tileinspect.inspection import InspectConfig, Inspector
from tileinspect.metrics import calibrate_threshold
from tileinspect.synth import CorpusSpec, build_corpus


def main(n_seeds: int = 10) -> None:
    ratios = defaultdict(list)
    worst = np.inf
    for seed in range(1, n_seeds + 1):
        spec = CorpusSpec(seed=seed)
        reference, images = build_corpus(spec)
        inspector = Inspector(reference, InspectConfig(levels=spec.levels))
        clean = [inspector.inspect(i.image).distance for i in images if i.defect is None]
        floor = float(np.median(clean))
        threshold = calibrate_threshold(clean)
        for item in images:
            if item.defect is None:
                continue
            d = inspector.inspect(item.image).distance
            ratios[item.defect.kind].append(d / floor)
            worst = min(worst, d / threshold)
        print(f"seed {seed}: floor={floor:.1f} threshold={threshold:.1f}")
    for kind, r in sorted(ratios.items()):
        print(f"{kind:>10}: n={len(r):3d} median={np.median(r):6.2f}x min={np.min(r):6.2f}x floor")
    print(f"weakest defect / threshold = {worst:.2f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 10)
