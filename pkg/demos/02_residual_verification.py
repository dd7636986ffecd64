"""Sampling a stream onto a boundary-fitted grid and verifying residuals.

The grid follows the free surface (one coordinate is the scaled height
between bed and surface), so the same finite-difference stencils apply to
flat and non-flat waves.  Strong residuals check the equations node by
node; the weak residual integrates against a compactly supported bump.
"""

import numpy as np

from wavecrest import field, laminar, pressure, vorticity

vfn = vorticity.poly_vorticity([-1.0], B=1.0)
ext = laminar.trivial_extreme(vfn, 1.0)
wf = field.laminar_to_field(ext, L=1.0, nx=128, ny=128)

print("== strong residuals on a 128 x 128 grid ==")
rep = field.strong_residuals(wf, vfn)
for name, entry in sorted(rep.entries.items()):
    print("%-18s sup = %.3e" % (name, entry.sup))

print()
print("== weak residual against an interior bump ==")
bump = field.Bump(center=(0.0, 0.7), radius=0.5)
print("weak residual = %.3e" % field.weak_residual(wf, bump, vfn))

print()
print("== stagnation points ==")
pts = field.stagnation_points(wf, 1e-8)
print("%d stagnation points, all on the surface Y = %.6f"
      % (len(pts), pts[0][1]))

print()
print("== pressure heads and the gradient bound near stagnation ==")
head = pressure.pressure_head(wf, vfn, "R")
print("max R = %.3e at %s (the surface, where R vanishes)"
      % (head.max_value, np.round(head.max_loc, 6)))
nqt = pressure.nqt_check(wf, vfn)
print("two-sided gradient bound holds: %s (margins %.2e, %.2e)"
      % (nqt["holds"], nqt["lower_margin"], nqt["upper_margin"]))

shifted = field.shift_datum(wf, wf.Q / 2.0)
K = pressure.sqrt_bound_fit(shifted)
print("smallest K with |grad psi|^2 <= K |Y|: %.12f (exact sqrt(2))" % K)
