"""Contour delineation by walking unit vector fields."""

__version__ = "0.1.0"

from .errors import (DegenerateField, FormatError, GenerationFailed, InvalidArgument,
                     NoPeak, OutOfBounds, UVFError)
from .geometry import (AffineMap2, Point2, Polyline, nearest_point_on_polyline,
                       nearest_vertex, resample_uniform, square_resize_map)
from .targets import (ContourTargets, Heatmap, UnitVectorField, build_endpoint_heatmaps,
                      build_targets, build_uvf, field_l2_loss, gaussian_heatmap,
                      heatmap_weighted_l2_loss)
from .walker import (WalkConfig, WalkedContour, localize_peak, sample_field, walk_closed,
                     walk_open)
from .evaluation import (ContourError, QuantileReport, compare_methods,
                         extract_baseline_landmarks, quantile_report, rms_closest_point)
from .synth import (NoiseSpec, SyntheticScene, analytic_circle_field, analytic_line_field,
                    gen_open_contour, make_scene, perturb_field)
from .io import (LandmarkDocument, read_field, read_grid, read_heatmap, read_landmarks,
                 write_field, write_grid, write_heatmap, write_landmarks)
from .render import render_overlay
