"""A branch of genuinely two-dimensional waves grown from a laminar stream.

The linearization about a laminar stream becomes singular at a critical
surface speed; the null direction there seeds Newton continuation in the
crest-to-trough amplitude.  Along the branch the crest slows down, which
is the route towards a wave with a stagnant crest.
"""

import numpy as np

from wavecrest import pressure, vorticity, wavegen

vfn = vorticity.poly_vorticity([-1.0], B=1.0)
g, L = 1.0, np.pi

print("== continuation in amplitude ==")
targets = list(np.linspace(0.0, 0.25, 11))
fam = wavegen.continue_family(vfn, g, L, targets)
print("%-10s %-12s %-12s %-12s" % ("amplitude", "Q", "crest speed", "trough"))
for a, d in zip(fam.amplitudes, fam.diagnostics):
    print("%-10.3f %-12.8f %-12.8f %-12.8f"
          % (a, d["Q"], d["crest_speed"], d["trough_height"]))

print()
print("== boundedness diagnostics along the branch ==")
rep = wavegen.exi_diagnostics(fam)
print("sup of Q                 %.8f" % rep["sup_Q"])
print("max |grad psi|           %.8f" % rep["max_gradient"])
print("min trough height        %.8f" % rep["min_trough_height"])
print("crest speed decay slope  %.3f (log-log in amplitude)"
      % rep["crest_speed_decay_exponent"])

print()
print("== pressure-head bound on every member ==")
worst = max(pressure.pressure_head(wf, vfn, "T").max_value
            for wf in fam.members)
print("max over the family of max T = %.3e (nonpositive up to "
      "discretization)" % worst)
