"""Conformal maps to Minkowski space and the flatness dichotomy.

The real-type model space maps conformally onto the Minkowski half-space
{u > 0}; the imaginary-type model only maps locally, on the strip
|t| < pi/2, and the Riccati equation y' = y^2 + 1 behind a would-be
global rescaling blows up in finite time.
"""

import numpy as np

from cwgeom import (
    Point,
    SymmetricProfile,
    flatness_blowup_demo,
    imaginary_local_map,
    minkowski_map,
    minkowski_metric,
    pullback_metric,
)
from cwgeom.curvature import metric_at
from cwgeom.flat import incomplete_geodesic_residual, minkowski_inversion

n = 2
g0 = minkowski_metric(n)
F = minkowski_map(n)
prof = SymmetricProfile(np.eye(n))
p = Point(0.3, np.array([1.0, -0.5]), 0.7)
pulled = pullback_metric(F, lambda q: g0, p).components
target = np.exp(2 * p.t) * metric_at(prof, p).components
print(f"real type: |F* g0 - e^(2t) g| = {np.max(np.abs(pulled - target)):.2e}")

G = imaginary_local_map(n)
prof_im = SymmetricProfile(-np.eye(n))
pulled = pullback_metric(G, lambda q: g0, p).components
target = metric_at(prof_im, p).components / np.cos(p.t) ** 2
print(f"imaginary type (strip): |G* g0 - g/cos^2 t| = "
      f"{np.max(np.abs(pulled - target)):.2e}")

eta = minkowski_inversion(n)
q = F(p)
pulled = pullback_metric(eta, lambda r: g0, q).components
print(f"inversion: |eta* g0 - g0/(4u^2)| = "
      f"{np.max(np.abs(pulled - g0.components / (4 * q.t ** 2))):.2e}")

out = flatness_blowup_demo(-1, y0=0.0)
print(f"\nimaginary type, y' = y^2 + 1 from 0: blow-up at t = "
      f"{out['blowup_t']:.6f} (pi/2 = {np.pi / 2:.6f})")
out = flatness_blowup_demo(1)
print(f"real type, f = t solves the flatness equation: "
      f"hessian residual {out['hessian_residual']:.1e}, "
      f"null gradient {out['null_gradient_residual']:.1e}")

res = max(incomplete_geodesic_residual(prof, s) for s in (-0.4, 0.0, 2.0, 10.0))
print(f"incomplete geodesic of e^(2t) g: max residual {res:.1e} "
      "(the curve exits at s = -1/2)")
