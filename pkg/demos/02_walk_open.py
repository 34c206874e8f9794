"""Recover an open contour from its own targets by walking the field."""
from pathlib import Path

from uvfwalk import WalkConfig, make_scene, render_overlay, rms_closest_point, walk_open

out = Path("demo_out")
out.mkdir(exist_ok=True)

scene = make_scene(seed=11)
t = scene.targets
print("ground truth:", len(scene.gt), "landmarks")

walk = walk_open(t.uvf, t.start_heatmap, t.end_heatmap)
print("termination:", walk.termination, "after", walk.steps, "steps")

# the walk stops as the end heatmap lights up; the end peak closes the gap
pred = walk.to_polyline()
print("RMS to landmarks: %.3f px" % rms_closest_point(pred, scene.gt))
print("without the end anchor: %.3f px"
      % rms_closest_point(walk.to_polyline(anchor_end=False), scene.gt))

# finer steps trace the interpolated field more closely
for step in (2.0, 1.0, 0.5, 0.25):
    w = walk_open(t.uvf, t.start_heatmap, t.end_heatmap, WalkConfig(step=step))
    print("step %.2f: %4d steps, RMS %.3f px"
          % (step, w.steps, rms_closest_point(w.to_polyline(), scene.gt)))

render_overlay(out / "walk_open.png", (224, 224), field=t.uvf,
               polylines=[(scene.gt, "gt"), (pred, "left")])
print("wrote", out / "walk_open.png")
