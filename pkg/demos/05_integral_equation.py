"""The crest angle as a fixed point of a logarithmic-kernel equation.

The tangent angle of the limiting wave near its crest satisfies a
nonlinear integral equation on the half line.  Its solution is the
constant pi/6, recovering the 120-degree interior angle, and a one-step
argument keeps every iterate above the universal constant 2/(9 pi).
"""

import numpy as np

from wavecrest import inteq

print("== quadrature sanity: a closed-form kernel integral ==")
for x in (0.1, 1.0, 10.0):
    val = inteq.log_kernel_integral(x, lambda y: 1.0 / y)
    print("x = %-4g integral = %.15f (exact pi^2/2 = %.15f)"
          % (x, val, np.pi ** 2 / 2.0))

print()
print("== pi/6 is a fixed point ==")
x = inteq.make_grid()
const = inteq.ThetaSolution(x=x, theta=np.full_like(x, np.pi / 6))
rhs = inteq.theta_rhs(const)
print("node-wise error of rhs(pi/6) vs pi/6: %.3e"
      % np.max(np.abs(rhs - np.pi / 6)))

print()
print("== damped fixed-point iteration from a non-constant start ==")
init = (np.pi / 2) * x / (1.0 + x)
sol, log = inteq.solve_theta(init, x=x)
print("converged in %d iterations, sup error %.3e"
      % (len(log), np.max(np.abs(sol.theta - np.pi / 6))))
print("minimum angle along the iteration stayed above 2/(9 pi) = %.6f:"
      % inteq.VSQ_CONSTANT)
print("  min over post-first iterates: %.6f"
      % min(rec["min_theta"] for rec in log[1:]))

print()
print("== reconstructing the crest profile ==")
rb = inteq.reconstruct_surface(const, g=1.0)
dev = np.max(np.abs(rb.V + np.abs(rb.U) / np.sqrt(3.0)))
print("deviation from the exact wedge V = -|U|/sqrt(3): %.3e" % dev)
