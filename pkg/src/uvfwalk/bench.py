"""Round-trip benchmark: synthesize targets, walk them, score against the
source landmarks. Optionally scores the per-landmark heatmap baseline on the
same scenes."""

from dataclasses import dataclass

import numpy as np

from .evaluation import (DEFAULT_PROPORTIONS, ContourError, compare_methods,
                         cumulative_distribution, extract_baseline_landmarks,
                         quantile_report, rms_closest_point)
from .geometry import resample_uniform
from .synth import NoiseSpec, make_scene
from .targets import gaussian_heatmap
from .walker import WalkConfig, walk_open

BASELINE_LANDMARKS = 21


def scene_seeds(seed, count):
    """Per-scene integer seeds derived from one base seed."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count)]


@dataclass(frozen=True)
class RoundTrip:
    seed: int
    rms: float
    termination: str
    steps: int
    n_vertices: int


def round_trip(scene, cfg=None, direction="gt_to_pred"):
    """Walk the scene's (possibly noisy) prediction and score it against ``scene.gt``."""
    pred = scene.prediction()
    walked = walk_open(pred.uvf, pred.start, pred.end, cfg)
    rms = rms_closest_point(walked.to_polyline(), scene.gt, direction)
    return RoundTrip(scene.seed, rms, walked.termination, walked.steps, len(scene.gt))


def baseline_heatmaps(scene, k=BASELINE_LANDMARKS, noise=None):
    """``k`` Gaussians on the ground truth after uniform upsampling to ``k`` landmarks."""
    sigma = scene.targets.start_heatmap.sigma
    pts = resample_uniform(scene.gt, k).vertices
    if noise is not None and noise.heatmap_shift_sigma > 0:
        rng = np.random.default_rng([noise.seed, 2])
        pts = pts + rng.normal(0.0, noise.heatmap_shift_sigma, pts.shape)
    return [gaussian_heatmap(p, sigma, scene.width, scene.height) for p in pts]


def baseline_round_trip(scene, direction="gt_to_pred"):
    landmarks = extract_baseline_landmarks(baseline_heatmaps(scene, noise=scene.noise))
    return rms_closest_point(landmarks, scene.gt, direction)


def run_benchmark(count=500, seed=0, angular_sigmas=(0.0, 5.0, 15.0), shift_sigma=0.0,
                  width=224, height=224, mode="vertex", cfg=None, direction="gt_to_pred",
                  baseline=True, proportions=DEFAULT_PROPORTIONS):
    """Evaluate every noise level on the same ``count`` scenes.

    Returns a JSON-ready dict. Nothing time-dependent is recorded, so fixed
    arguments give identical output.
    """
    cfg = cfg or WalkConfig()
    seeds = scene_seeds(seed, count)
    levels = []
    for sigma in angular_sigmas:
        uvf_errors, base_errors, terminations = [], [], {}
        for s in seeds:
            noise = NoiseSpec(float(sigma), float(shift_sigma), s)
            scene = make_scene(s, width, height, "open", mode=mode, noise=noise)
            rt = round_trip(scene, cfg, direction)
            terminations[rt.termination] = terminations.get(rt.termination, 0) + 1
            uvf_errors.append(ContourError(rt.rms, str(s), "uvf"))
            if baseline:
                base_errors.append(ContourError(baseline_round_trip(scene, direction),
                                                str(s), "baseline"))
        rms = np.array([e.rms for e in uvf_errors])
        level = {
            "angular_sigma_deg": float(sigma),
            "heatmap_shift_sigma_px": float(shift_sigma),
            "mean_rms": float(rms.mean()),
            "terminations": dict(sorted(terminations.items())),
            "uvf": _report_dict(quantile_report(uvf_errors, proportions)),
            "uvf_errors": [e.rms for e in uvf_errors],
        }
        if baseline:
            cmp = compare_methods(base_errors, uvf_errors, proportions)
            level["baseline"] = _report_dict(cmp.a)
            level["baseline_minus_uvf"] = list(cmp.differences)
            level["baseline_errors"] = [e.rms for e in base_errors]
        levels.append(level)
    return {
        "count": count,
        "seed": seed,
        "width": width,
        "height": height,
        "mode": mode,
        "direction": direction,
        "walk": {"step": cfg.step, "stop_threshold": cfg.stop_threshold},
        "proportions": list(proportions),
        "levels": levels,
    }


def _report_dict(report):
    return {"proportions": list(report.proportions), "errors": list(report.errors)}


def table_rows(result):
    """``(method, proportion, error_px)`` rows in the layout of a per-proportion RMS table."""
    rows = []
    for level in result["levels"]:
        tag = f"noise{level['angular_sigma_deg']:g}"
        for method in ("baseline", "uvf"):
            if method in level:
                rep = level[method]
                rows += [(f"{method}_{tag}", q, e) for q, e in zip(rep["proportions"], rep["errors"])]
    return rows


def cumulative_rows(result):
    """``(method, error_px, proportion)`` rows tracing each cumulative error curve."""
    rows = []
    for level in result["levels"]:
        tag = f"noise{level['angular_sigma_deg']:g}"
        for method, key in (("baseline", "baseline_errors"), ("uvf", "uvf_errors")):
            if key in level:
                errs, frac = cumulative_distribution(level[key])
                rows += [(f"{method}_{tag}", float(e), float(f)) for e, f in zip(errs, frac)]
    return rows
