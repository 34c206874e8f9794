"""Build training targets for a hand-drawn contour and look at them."""
from pathlib import Path

import numpy as np

from uvfwalk import Polyline, build_targets, render_overlay

out = Path("demo_out")
out.mkdir(exist_ok=True)

# five landmarks, roughly the shape of a joint line
poly = Polyline([[60, 40], [80, 80], [95, 120], [100, 160], [110, 190]])
t = build_targets(poly, 224, 224, mode="vertex")

# every cell carries a unit vector
print("field norms:", t.uvf.norms().min(), t.uvf.norms().max())

# cells on the line run along it, cells off it point at the nearest landmark
print("on the line at (80, 80):", t.uvf.vx[80, 80], t.uvf.vy[80, 80])
print("off the line at (150, 80):", t.uvf.vx[80, 150], t.uvf.vy[80, 150])

# heatmap width scales with contour length
print("heatmap sigma: %.2f px for length %.1f px" % (t.start_heatmap.sigma, poly.length()))

# angle map with both heatmaps and the landmarks on top
render_overlay(out / "targets.png", (224, 224), field=t.uvf,
               heatmaps=[(t.start_heatmap, "start"), (t.end_heatmap, "end")],
               polylines=[(poly, "gt")])
print("wrote", out / "targets.png")

# segment mode differs only off the contour
seg = build_targets(poly, 224, 224, mode="segment").uvf
diff = np.hypot(seg.vx - t.uvf.vx, seg.vy - t.uvf.vy)
print("cells that change between modes: %.1f%%" % (100 * (diff > 1e-9).mean()))
