"""Corner flows and the 120-degree crest singularity.

Among all wedge-shaped stagnation flows, only the symmetric corner with
half-angle 30 degrees below the horizontal satisfies the surface pressure
condition at every radius.  Rescaling a smooth field towards its
stagnation point and measuring the limiting surface slope are the two
diagnostics that detect this corner in computed waves.
"""

import numpy as np

from wavecrest import blowup, field, laminar, vorticity

print("== the Stokes corner ==")
flow = blowup.stokes_corner(1.0)
rep = blowup.verify_blow(flow)
for name, entry in sorted(rep.entries.items()):
    print("%-12s sup = %.3e" % (name, entry.sup))
gx, gy = flow.grad(1.0, -1.0 / np.sqrt(3.0))
print("|grad psi|^2 on the surface at radius 2/sqrt(3): %.12f "
      "(exact 2/sqrt(3) = %.12f)" % (gx ** 2 + gy ** 2, 2.0 / np.sqrt(3.0)))

print()
print("== scanning wedge angles ==")
passes = blowup.corner_scan(n=14)
print("flows passing all checks:")
for p in passes:
    print("  angles (%.6f, %.6f), strength %.6f"
          % (p["alpha_p"], p["alpha_m"], p["beta"]))
print("(only the zero flow and the symmetric 30-degree corner survive)")

print()
print("== rescaling towards a stagnation point ==")
for eps in (1e-1, 1e-3, 1e-6):
    frame = blowup.rescale(flow, eps)
    print("corner flow, eps = %-6g rescaled sup = %.12f" % (eps, frame.sup))
vfn = vorticity.poly_vorticity([-1.0], B=1.0)
ext = field.laminar_to_field(laminar.trivial_extreme(vfn, 1.0), 1.0, 128, 128)
shifted = field.shift_datum(ext, ext.Q / 2.0)
eps = np.geomspace(0.3, 0.003, 9)
sups = [blowup.rescale(shifted, e).sup for e in eps]
slope = np.polyfit(np.log(eps), np.log(sups), 1)[0]
print("flat extreme stream: rescaled sup scales like eps^%.3f "
      "(quadratic degeneracy)" % slope)

print()
print("== limiting surface slope at the crest ==")
res = blowup.corner_angle(flow.surface_profile(n=2001))
print("corner profile:  slopes (%.6f, %.6f) -> %s"
      % (res["q_plus"], res["q_minus"], res["classification"]))
X = np.linspace(-1.0, 1.0, 2001)
flat = field.SurfaceProfile(kind="graph", period=2.0, X=X,
                            eta=np.zeros_like(X))
res = blowup.corner_angle(flat)
print("flat profile:    slopes (%.6f, %.6f) -> %s"
      % (res["q_plus"], res["q_minus"], res["classification"]))

print()
print("== cone barrier at the crest ==")
res = blowup.oddson_cone_check(flow)
print("120-degree cone under the Stokes corner: kappa = %.6f "
      "(the corner strength)" % res["kappa"])
res = blowup.oddson_cone_check(shifted, half_aperture=np.deg2rad(85.0), r0=0.5)
print("170-degree cone under the flat extreme stream: violation = %s "
      "(the stream decays too fast for any corner)" % res["violation"])
