"""Laminar (X-independent) streams and the size checks on the vorticity.

A laminar stream solves the full system with a flat surface.  Everything
here reduces to one-dimensional quadrature in the stream variable, which
makes these flows the reference objects for the rest of the library.
"""

import numpy as np

from wavecrest import laminar, vorticity

# constant negative vorticity on a unit stream range
vfn = vorticity.poly_vorticity([-1.0], B=1.0)
g = 1.0

print("== size condition on (gamma, g, L) ==")
for L in (0.5, 1.0, 2.0):
    res = vorticity.check_jhb(vfn, g, L)
    print("L = %-4g lhs = %.6f rhs = %.6f holds = %s"
          % (L, res["lhs"], res["rhs"], res["holds"]))

print()
print("== lower bound for the Bernoulli constant ==")
res = vorticity.cs_q_bound(vfn, g)
lam0 = res["lambda0"]
f = res["f_of"]
print("critical argument  %.12f" % lam0)
print("minimum value      %.12f" % f(lam0))
print("every laminar stream satisfies Q = f(surface speed squared),")
print("so no laminar Bernoulli constant can fall below that minimum:")
for s in (0.2, 0.6, 1.0):
    print("  s = %-4g f(s^2) = %.12f" % (s, f(s * s)))

print()
print("== the extreme stream: stagnation along the whole surface ==")
ext = laminar.trivial_extreme(vfn, g)
print("depth          %.12f   (exact sqrt(2) = %.12f)"
      % (ext.depth, np.sqrt(2.0)))
print("Bernoulli Q    %.12f   (exact 2 sqrt(2))" % ext.Q)
print("surface speed  %.12f" % ext.surface_speed)

print()
print("== regular streams at a given Bernoulli constant ==")
for Q in (2.9, 3.3, 4.0):
    slow = laminar.laminar_regular(vfn, g, Q, root="largest")
    print("Q = %-4g depth = %.8f surface speed = %.8f"
          % (Q, slow.depth, slow.surface_speed))
