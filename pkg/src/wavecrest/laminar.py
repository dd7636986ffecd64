"""X-independent (laminar) exact solutions, including the trivial extreme wave.

Every laminar stream satisfies the first integral  psi'(Y)^2 + 2*Gamma_hat(psi)
= s^2  with s the surface speed, so the depth-to-stream map is the quadrature

    Y(surface) - Y = int_0^psi (s^2 - 2*Gamma_hat(t))^{-1/2} dt.

The trivial extreme wave is the s = 0 member, which exists when gamma(0) < 0
and gamma <= 0; its integrand has a t^{-1/2} endpoint singularity that is
removed by the substitution t = u^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import InvalidVorticity, NoRoot
from .vorticity import VorticityFn, gamma_hat_table

_GRID_N = 4097


def _depth_integral(ghat, s2, B):
    """int_0^B (s2 - 2*Gamma_hat(t))^{-1/2} dt via the t = u^2 substitution."""

    def integrand(u):
        val = s2 - 2.0 * ghat(u * u)
        if val <= 0.0:
            # removable 0/0 at u = 0 for the extreme stream
            u = max(abs(u), 1e-9 * (1.0 + np.sqrt(B)))
            val = s2 - 2.0 * ghat(u * u)
        return 2.0 * u / np.sqrt(val)

    val, _ = quad(integrand, 0.0, np.sqrt(B), epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def _depth_integral_to(ghat, s2, r):
    """int_0^r (s2 - 2*Gamma_hat(t))^{-1/2} dt, again via t = u^2."""

    def integrand(u):
        val = s2 - 2.0 * ghat(u * u)
        if val <= 0.0:
            u = max(abs(u), 1e-9 * (1.0 + np.sqrt(max(r, 1e-30))))
            val = s2 - 2.0 * ghat(u * u)
        return 2.0 * u / np.sqrt(val)

    val, _ = quad(integrand, 0.0, np.sqrt(max(r, 0.0)),
                  epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def _stream_table(ghat, s2, B):
    """Graded table of (depth-below-surface, stream value) pairs.

    Uniform in u = sqrt(t), hence denser in t near the surface where the
    inverse map has a steep derivative for near-extreme streams.
    """
    u = np.linspace(0.0, np.sqrt(B), _GRID_N)
    r = u * u
    vals = s2 - 2.0 * ghat(r)
    if np.any(vals <= 0) and not (s2 == 0.0):
        raise NoRoot("s^2 - 2*Gamma_hat vanishes inside [0, B]")
    if s2 == 0.0:
        # integrand 2u/sqrt(-2*Gamma_hat(u^2)) has a removable limit at u=0,
        # equal to 2/sqrt(-2*gamma(0)); evaluate just off the endpoint
        f = np.empty_like(u)
        f[1:] = 2.0 * u[1:] / np.sqrt(vals[1:])
        eps = u[1] * 1e-3
        f[0] = 2.0 * eps / np.sqrt(s2 - 2.0 * ghat(eps * eps))
    else:
        f = 2.0 * u / np.sqrt(vals)
        f[0] = 0.0
    T = cumulative_simpson(f, x=u, initial=0.0)
    return T, r


@dataclass(frozen=True)
class LaminarWave:
    """A laminar stream: bed at Y = F, surface at Y = F + depth."""

    vfn: VorticityFn
    g: float
    F: float
    depth: float
    Q: float
    surface_speed: float
    is_extreme: bool
    _rinv: object = field(repr=False, compare=False, default=None)
    _ghat: object = field(repr=False, compare=False, default=None)

    @property
    def B(self):
        return self.vfn.B

    @property
    def surface_y(self):
        return self.F + self.depth

    def psi(self, Y):
        """Stream function; Y may be scalar or array within [F, F + depth]."""
        Y = np.asarray(Y, dtype=float)
        d = np.clip(self.surface_y - Y, 0.0, self.depth)
        return np.clip(self._rinv(d), 0.0, self.B)

    def psi_y(self, Y):
        """dpsi/dY from the first integral (exact given psi)."""
        p = self.psi(Y)
        val = self.surface_speed ** 2 - 2.0 * self._ghat(p)
        return -np.sqrt(np.maximum(val, 0.0))

    def psi_refined(self, Y, tol=1e-13, maxit=8):
        """Stream values refined by Newton against the exact depth quadrature.

        Each interpolated value r is corrected with the residual of
        Upsilon(r) = depth-below-surface, using Upsilon'(r) =
        (s^2 - 2*Gamma_hat(r))^{-1/2}; brings psi to quadrature accuracy.
        """
        Y = np.asarray(Y, dtype=float)
        d = np.clip(self.surface_y - Y, 0.0, self.depth)
        r = np.atleast_1d(np.asarray(self.psi(Y), dtype=float)).ravel()
        dd = np.atleast_1d(d).ravel()
        s2 = self.surface_speed ** 2
        gh = self._ghat
        for k in range(r.size):
            if dd[k] <= 0.0 or dd[k] >= self.depth:
                r[k] = 0.0 if dd[k] <= 0.0 else self.B
                continue
            for _ in range(maxit):
                res = _depth_integral_to(gh, s2, r[k]) - dd[k]
                slope2 = s2 - 2.0 * gh(r[k])
                if slope2 <= 0:
                    break
                step = res * np.sqrt(slope2)
                r[k] = float(np.clip(r[k] - step, 0.0, self.B))
                if abs(step) < tol * (1.0 + self.B):
                    break
        return r.reshape(np.shape(d)) if np.ndim(d) else float(r[0])


def _build_wave(vfn, g, F, s2, Q):
    gh = gamma_hat_table(vfn)
    T, r = _stream_table(gh, s2, vfn.B)
    depth = float(T[-1])
    # strictly increasing T is guaranteed by positivity of the integrand
    rinv = PchipInterpolator(T, r)
    return LaminarWave(
        vfn=vfn,
        g=g,
        F=F,
        depth=depth,
        Q=Q,
        surface_speed=float(np.sqrt(s2)),
        is_extreme=(s2 == 0.0),
        _rinv=rinv,
        _ghat=gh,
    )


def trivial_extreme(vfn: VorticityFn, g: float, F: float = 0.0) -> LaminarWave:
    """The trivial extreme wave: flat surface made entirely of stagnation points.

    Requires gamma(0) < 0 and gamma <= 0 on [0, B]; the surface sits at
    F + Upsilon(B) and Q = 2 g (F + Upsilon(B)).
    """
    grid = np.linspace(0.0, vfn.B, 1000)
    gv = np.asarray(vfn(grid), dtype=float)
    if not (gv.flat[0] < 0 and np.all(gv <= 0)):
        raise InvalidVorticity(
            "trivial extreme wave requires gamma(0) < 0 and gamma <= 0")
    gh = gamma_hat_table(vfn)
    depth = _depth_integral(gh, 0.0, vfn.B)
    Q = 2.0 * g * (F + depth)
    wave = _build_wave(vfn, g, F, 0.0, Q)
    # replace the cumulative-Simpson depth by the adaptive-quadrature value
    object.__setattr__(wave, "depth", depth)
    return wave


def laminar_regular(vfn: VorticityFn, g: float, Q: float, F: float = 0.0,
                    root: str = "largest") -> LaminarWave:
    """Laminar stream with Bernoulli constant Q, by bracketed root-finding in h.

    The depth closure is  h = D(Q - 2g(F+h))  with D the depth integral above.
    ``root`` selects among multiple depth roots: "largest" (slow stream,
    default), "smallest", or an integer index into the ascending root list.
    """
    gh = gamma_hat_table(vfn)
    B = vfn.B
    h_max = Q / (2.0 * g) - F
    if h_max <= 0:
        raise NoRoot("Q too small: no admissible depth", interval=(0.0, h_max))

    def phi(h):
        s2 = Q - 2.0 * g * (F + h)
        if s2 < 0:
            return np.nan
        if 2.0 * gh.gamma_hat_max >= s2 and gh.gamma_hat_max > 0:
            return np.nan
        if s2 == 0.0 and not (float(vfn(0.0)) < 0.0 and gh.gamma_hat_max <= 0.0):
            # stagnant surface needs gamma(0) < 0 and Gamma_hat < 0 inside
            return np.nan
        try:
            return _depth_integral(gh, s2, B) - h
        except (ZeroDivisionError, FloatingPointError):
            return np.nan

    hs = np.linspace(1e-6 * h_max, h_max, 241)
    vals = np.array([phi(h) for h in hs])
    roots = []
    for i in range(len(hs) - 1):
        a, b = vals[i], vals[i + 1]
        if np.isnan(a) or np.isnan(b):
            continue
        if a == 0.0:
            roots.append(hs[i])
        elif a * b < 0:
            roots.append(brentq(phi, hs[i], hs[i + 1], xtol=1e-14, rtol=1e-14))
    if not np.isnan(vals[-1]) and abs(vals[-1]) < 1e-9:
        roots.append(hs[-1])
    # tangential roots: minima of |phi| where phi touches zero
    dh = hs[1] - hs[0]
    for i in range(1, len(hs) - 1):
        trio = vals[i - 1:i + 2]
        if np.any(np.isnan(trio)):
            continue
        if trio[1] < trio[0] and trio[1] < trio[2] and abs(trio[1]) < 1e-2:
            dphi = lambda h: (phi(h + 1e-7) - phi(h - 1e-7)) / 2e-7
            da, db = dphi(hs[i - 1]), dphi(hs[i + 1])
            if da * db < 0:
                h_t = brentq(dphi, hs[i - 1], hs[i + 1], xtol=1e-13)
                if abs(phi(h_t)) < 1e-9:
                    roots.append(h_t)
    if not roots:
        raise NoRoot("no depth root for Q=%g" % Q, interval=(float(hs[0]), float(hs[-1])))
    roots = sorted(set(round(r, 13) for r in roots))
    if root == "largest":
        h = roots[-1]
    elif root == "smallest":
        h = roots[0]
    else:
        h = roots[int(root)]
    s2 = max(Q - 2.0 * g * (F + h), 0.0)
    return _build_wave(vfn, g, F, s2, Q)
