"""Score contours the way the benchmark does, and compare against a landmark baseline."""
from uvfwalk import (ContourError, compare_methods, make_scene, quantile_report,
                     rms_closest_point, walk_open)
from uvfwalk.bench import baseline_round_trip, scene_seeds

# published per-proportion rows, fed in directly
baseline = [0.52, 1.00, 1.41, 2.00, 3.40, 4.45]
uvf = [0.38, 0.72, 1.15, 1.76, 3.10, 4.10]
cmp = compare_methods(baseline, uvf)
print("q=0.1 difference %.2f, q=0.95 difference %.2f" % (cmp.differences[0], cmp.differences[-1]))

# the same protocol on twenty synthetic scenes
walked, base = [], []
for s in scene_seeds(1, 20):
    scene = make_scene(s)
    t = scene.targets
    pred = walk_open(t.uvf, t.start_heatmap, t.end_heatmap).to_polyline()
    walked.append(ContourError(rms_closest_point(pred, scene.gt), str(s), "uvf"))
    # 21 Gaussians on the resampled ground truth, one peak each
    base.append(ContourError(baseline_round_trip(scene), str(s), "baseline"))

print("proportion ", " ".join("%5g" % q for q in quantile_report(walked).proportions))
print("uvf        ", " ".join("%5.2f" % e for e in quantile_report(walked).errors))
print("baseline   ", " ".join("%5.2f" % e for e in quantile_report(base).errors))

# directions of the closest-point distance
scene = make_scene(3)
t = scene.targets
pred = walk_open(t.uvf, t.start_heatmap, t.end_heatmap).to_polyline()
for d in ("gt_to_pred", "pred_to_gt", "symmetric"):
    print("%-10s %.3f px" % (d, rms_closest_point(pred, scene.gt, d)))
