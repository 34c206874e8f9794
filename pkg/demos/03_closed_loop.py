"""Closed contours have no endpoints: walk until the path meets itself."""
import math
from pathlib import Path

from uvfwalk import analytic_circle_field, render_overlay, walk_closed

out = Path("demo_out")
out.mkdir(exist_ok=True)

for r in (20, 50, 80):
    field = analytic_circle_field((112, 112), r, 224, 224)
    # start well outside the circle; the approach is dropped from the result
    walk = walk_closed(field, (112, 112 - r - 10))
    length = walk.arc_length()
    print("r=%d: %s, %d points, length %.1f vs %.1f"
          % (r, walk.termination, len(walk.points), length, 2 * math.pi * r))

# the seed does not matter once the walk is on the circle
field = analytic_circle_field((112, 112), 50, 224, 224)
for seed in [(112, 20), (200, 112), (112, 112 - 50)]:
    print("seed", seed, "-> length %.1f" % walk_closed(field, seed).arc_length())

loop = walk_closed(field, (112, 20)).to_polyline()
render_overlay(out / "closed_loop.png", (224, 224), field=field, polylines=[(loop, "right")])
print("wrote", out / "closed_loop.png")
