"""How much angular error can the field take before walks go astray?"""
import numpy as np

from uvfwalk.bench import run_benchmark

result = run_benchmark(count=40, seed=5, angular_sigmas=(0, 2, 5, 10, 15, 30), baseline=False)
for level in result["levels"]:
    errs = np.array(level["uvf_errors"])
    print("noise %4.1f deg: mean %6.2f px, median %5.2f px, %s"
          % (level["angular_sigma_deg"], errs.mean(), np.median(errs), level["terminations"]))

# heatmap shifts move the endpoints but the walk still follows the field
shifted = run_benchmark(count=40, seed=5, angular_sigmas=(0,), shift_sigma=3.0, baseline=False)
print("3 px endpoint jitter: mean %.2f px" % shifted["levels"][0]["mean_rms"])
