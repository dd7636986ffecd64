"""Stagnation-point asymptotics: corner flows, rescaling, angles and cones.

The explicit corner flows are harmonic in a wedge of opening
pi - (alpha_plus + alpha_minus), vanish on both rays, and are homogeneous of
degree pi / (pi - alpha_plus - alpha_minus).  The Stokes corner flow is the
member with half-angles pi/6 and strength (2/3) sqrt(g); it is the only one
that also satisfies the zero-datum Bernoulli condition on its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import RectBivariateSpline, PchipInterpolator

from .errors import (ConeNotContained, InsufficientResolution,
                     NonMonotoneSurface, ValidationError, WindowOutsideDomain)
from .field import (WaveField, ResidualReport, SurfaceProfile, _entry,
                    gradient)

SQRT3 = np.sqrt(3.0)


# ---------------------------------------------------------------------------
# explicit corner flows


@dataclass(frozen=True)
class CornerFlow:
    """Explicit homogeneous harmonic flow in a wedge below two rays.

    The boundary is Y = -tan(alpha_p) X for X >= 0 and Y = tan(alpha_m) X
    for X <= 0; the stream function is
    beta * Im[ i (i e^{i (alpha_p - alpha_m)/2} Z)^m ] with exponent
    m = pi / (pi - alpha_p - alpha_m), principal branch (cut outside the
    fluid wedge).
    """

    alpha_p: float
    alpha_m: float
    beta: float
    g: float

    def __post_init__(self):
        if not (0.0 <= self.alpha_p <= np.pi / 2 and 0.0 <= self.alpha_m <= np.pi / 2):
            raise ValidationError("half-angles must lie in [0, pi/2]")
        if self.alpha_p + self.alpha_m >= np.pi:
            raise ValidationError("half-angles must sum below pi")
        if self.beta < 0:
            raise ValidationError("strength must be nonnegative")

    @property
    def exponent(self):
        return np.pi / (np.pi - self.alpha_p - self.alpha_m)

    @property
    def phase(self):
        return 0.5 * (self.alpha_p - self.alpha_m)

    def _w(self, Z):
        return 1j * np.exp(1j * self.phase) * np.asarray(Z, dtype=complex)

    def potential(self, Z):
        """Complex potential; the stream function is its imaginary part."""
        return self.beta * 1j * self._w(Z) ** self.exponent

    def psi(self, X, Y):
        Z = np.asarray(X, dtype=float) + 1j * np.asarray(Y, dtype=float)
        return np.imag(self.potential(Z))

    def grad(self, X, Y):
        """(psi_X, psi_Y) via the complex derivative of the potential."""
        Z = np.asarray(X, dtype=float) + 1j * np.asarray(Y, dtype=float)
        m = self.exponent
        fp = self.beta * 1j * m * self._w(Z) ** (m - 1.0) \
            * 1j * np.exp(1j * self.phase)
        return np.imag(fp), np.real(fp)

    def surface(self, X):
        X = np.asarray(X, dtype=float)
        return np.where(X >= 0, -np.tan(self.alpha_p) * X,
                        np.tan(self.alpha_m) * X)

    def in_fluid(self, X, Y, tol=0.0):
        return np.asarray(Y) <= self.surface(X) + tol

    def surface_profile(self, n: int = 401, half_width: float = 1.0):
        X = np.linspace(-half_width, half_width, n)
        return SurfaceProfile(kind="graph", period=np.inf, X=X,
                              eta=self.surface(X))


def stokes_corner(g: float = 1.0) -> CornerFlow:
    """The 120-degree corner flow with the Bernoulli-matched strength."""
    if g <= 0:
        raise ValidationError("g must be positive")
    return CornerFlow(alpha_p=np.pi / 6, alpha_m=np.pi / 6,
                      beta=(2.0 / 3.0) * np.sqrt(g), g=g)


def corner_family(alpha_p: float, alpha_m: float, beta: float,
                  g: float = 1.0) -> CornerFlow:
    return CornerFlow(alpha_p=alpha_p, alpha_m=alpha_m, beta=beta, g=g)


def matched_beta(alpha_p: float, alpha_m: float, g: float = 1.0) -> float:
    """Strength that satisfies the Bernoulli condition at unit radius on the
    X >= 0 ray; the scan over half-angles uses this normalization."""
    m = np.pi / (np.pi - alpha_p - alpha_m)
    return np.sqrt(2.0 * g * np.sin(alpha_p)) / m


def corner_window_field(flow: CornerFlow, half_width: float = 1.0,
                        depth: float = 1.5, nx: int = 129,
                        ny: int = 129) -> WaveField:
    """Sample a corner flow on a boundary-fitted window (no bed)."""
    X = np.linspace(-half_width, half_width, nx)
    eta = flow.surface(X)
    F = float(np.min(eta)) - depth
    sigma = np.linspace(0.0, 1.0, ny)
    Y = F + (eta - F)[:, None] * sigma[None, :]
    psi = flow.psi(np.broadcast_to(X[:, None], Y.shape), Y)
    B = float(np.max(psi))
    return WaveField(g=flow.g, B=B, L=half_width, F=F, Q=0.0, X=X, eta=eta,
                     psi=psi, xbc="none", symmetric=(flow.alpha_p == flow.alpha_m),
                     has_bed=False)


# ---------------------------------------------------------------------------
# verification of the limiting problem


def _fluid_samples(flow: CornerFlow, r_lo=1e-3, r_hi=1.0, nr=40, nt=24,
                   margin=0.02):
    """Polar sample points strictly inside the fluid wedge."""
    width = np.pi - flow.alpha_p - flow.alpha_m
    th_hi = -flow.alpha_p - margin * width
    th_lo = -(np.pi - flow.alpha_m) + margin * width
    r = np.geomspace(r_lo, r_hi, nr)
    th = np.linspace(th_lo, th_hi, nt)
    R, TH = np.meshgrid(r, th, indexing="ij")
    return R * np.cos(TH), R * np.sin(TH)


def _laplacian_probe(flow: CornerFlow, X, Y, rel=5e-3):
    """Fourth-order cross-stencil Laplacian with radius-proportional probe."""
    r = np.hypot(X, Y)
    h = rel * r
    acc = -60.0 * flow.psi(X, Y)
    for dx, dy, c in ((1, 0, 16.0), (-1, 0, 16.0), (0, 1, 16.0), (0, -1, 16.0),
                      (2, 0, -1.0), (-2, 0, -1.0), (0, 2, -1.0), (0, -2, -1.0)):
        acc = acc + c * flow.psi(X + dx * h, Y + dy * h)
    return acc / (12.0 * h ** 2)


def verify_blow(flow: CornerFlow, n_boundary: int = 200, r_lo: float = 1e-3,
                r_hi: float = 1.0, tol: float = 1e-6) -> ResidualReport:
    """Residuals of the limiting problem for an explicit corner flow.

    Checks harmonicity in the wedge, nonnegativity and monotonicity of psi,
    vanishing on both boundary rays, and the zero-datum Bernoulli condition
    along the boundary away from the origin.
    """
    X, Y = _fluid_samples(flow, r_lo=max(r_lo, 1e-3), r_hi=r_hi)
    harm = _laplacian_probe(flow, X, Y)
    psi = flow.psi(X, Y)
    _, psi_y = flow.grad(X, Y)
    neg = np.maximum(-psi, 0.0)
    mono = np.maximum(psi_y, 0.0)

    n_half = max(n_boundary // 2, 8)
    s = np.geomspace(max(r_lo, 5e-2), r_hi, n_half)
    Xp = s * np.cos(flow.alpha_p)
    Yp = -s * np.sin(flow.alpha_p)
    Xm = -s * np.cos(flow.alpha_m)
    Ym = -s * np.sin(flow.alpha_m)
    Xb = np.concatenate([Xm[::-1], Xp])
    Yb = np.concatenate([Ym[::-1], Yp])
    bpsi = flow.psi(Xb, Yb)
    gx, gy = flow.grad(Xb, Yb)
    bern = gx ** 2 + gy ** 2 + 2.0 * flow.g * Yb

    entries = {
        "harmonic": _entry(harm, X, Y),
        "nonnegative": _entry(neg, X, Y),
        "monotone": _entry(mono, X, Y),
        "boundary": _entry(bpsi, Xb, Yb),
        "bernoulli": _entry(bern, Xb, Yb),
    }
    return ResidualReport(entries=entries)


def corner_scan(n: int = 50, g: float = 1.0, tol: float = 1e-6):
    """Scan the (alpha_p, alpha_m) grid with matched strength.

    Returns the list of grid pairs whose matched-strength flow passes
    verify_blow, plus the trivial zero-strength passes.  The grid step is
    pi/(2(n+1)) so that pi/6 is a node when (n+1) is divisible by 3.
    """
    step = np.pi / (2.0 * (n + 1))
    passes = []
    for i in range(n):
        for j in range(n):
            ap, am = i * step, j * step
            beta = matched_beta(ap, am, g)
            flow = corner_family(ap, am, beta, g)
            rep = verify_blow(flow, n_boundary=60)
            if rep.max_sup() <= tol:
                passes.append({"alpha_p": float(ap), "alpha_m": float(am),
                               "beta": float(beta)})
    return passes


# ---------------------------------------------------------------------------
# rescaling around a stagnation point


@dataclass(frozen=True)
class BlowupFrame:
    """Rescaled field psi^eps(X, Y) = eps^{-3/2} psi(eps X, eps Y)."""

    eps: float
    center: tuple
    X: np.ndarray
    Y: np.ndarray  # (nx, ny) physical window coordinates
    psi: np.ndarray
    surface_X: np.ndarray
    surface_eta: np.ndarray

    @property
    def sup(self):
        return float(np.max(np.abs(self.psi)))


def rescale(source, eps: float, half_width: float = 1.0, depth: float = 1.0,
            nx: int = 65, ny: int = 65) -> BlowupFrame:
    """Blow-up frame of a corner flow (exact) or a wave field (interpolated).

    Wave-field sources must carry the zero Bernoulli datum so the stagnation
    point sits at the origin.
    """
    if eps <= 0:
        raise ValidationError("eps must be positive")
    Xw = np.linspace(-half_width, half_width, nx)

    if isinstance(source, CornerFlow):
        eta_w = source.surface(Xw)
        F_w = float(np.min(eta_w)) - depth
        sigma = np.linspace(0.0, 1.0, ny)
        Y = F_w + (eta_w - F_w)[:, None] * sigma[None, :]
        Xg = np.broadcast_to(Xw[:, None], Y.shape)
        vals = eps ** -1.5 * source.psi(eps * Xg, eps * Y)
        return BlowupFrame(eps=eps, center=(0.0, 0.0), X=Xw, Y=Y, psi=vals,
                           surface_X=Xw, surface_eta=eta_w)

    wf = source
    if abs(wf.Q) > 1e-10:
        raise ValidationError("rescale requires the Q = 0 datum; shift first")
    if eps * half_width > wf.L:
        raise WindowOutsideDomain("window exceeds the period",
                                  max_scale=wf.L / half_width)
    eta_i = PchipInterpolator(wf.X, wf.eta)
    spl = RectBivariateSpline(wf.X, wf.sigma, wf.psi, kx=3, ky=3)

    eta_w = eta_i(eps * Xw) / eps
    F_w = float(np.min(eta_w)) - depth
    if eps * F_w < wf.F - 1e-12:
        raise WindowOutsideDomain("window extends below the bed",
                                  max_scale=wf.F / F_w if F_w < 0 else np.inf)
    sigma = np.linspace(0.0, 1.0, ny)
    Y = F_w + (eta_w - F_w)[:, None] * sigma[None, :]
    Xg = np.broadcast_to(Xw[:, None], Y.shape)
    h_src = eta_i(eps * Xw) - wf.F
    sig_src = (eps * Y - wf.F) / h_src[:, None]
    vals = eps ** -1.5 * spl(np.repeat(eps * Xw, ny),
                             np.clip(sig_src, 0.0, 1.0).ravel(),
                             grid=False).reshape(nx, ny)
    return BlowupFrame(eps=eps, center=(0.0, 0.0), X=Xw, Y=Y, psi=vals,
                       surface_X=Xw, surface_eta=eta_w)


# ---------------------------------------------------------------------------
# corner-angle estimation


def _side_samples(profile: SurfaceProfile, side: int):
    """(u, v) = (|X|, -eta) samples on one side of the origin, sorted by u."""
    if profile.kind == "graph":
        X = np.asarray(profile.X, dtype=float)
        eta = np.asarray(profile.eta, dtype=float)
        mask = X > 0 if side > 0 else X < 0
        u = np.abs(X[mask])
        v = -eta[mask]
    else:
        u_all = np.asarray(profile.u, dtype=float)
        v_all = np.asarray(profile.v, dtype=float)
        mask = u_all > 0 if side > 0 else u_all < 0
        u = np.abs(u_all[mask])
        v = -v_all[mask]
    order = np.argsort(u)
    return u[order], v[order]


def _dyadic_slopes(u, v, min_samples=8):
    """Through-origin regression slopes over ranges [2^-k-3, 2^-k] * u_max."""
    if u.size == 0:
        raise InsufficientResolution("no samples on this side")
    u_max = u[-1]
    slopes = []
    k = 0
    while True:
        lo, hi = 2.0 ** (-k - 3) * u_max, 2.0 ** (-k) * u_max
        mask = (u >= lo) & (u <= hi)
        if np.sum(mask) < min_samples:
            break
        uu, vv = u[mask], v[mask]
        slopes.append(float(np.sum(uu * vv) / np.sum(uu * uu)))
        k += 1
    if len(slopes) < 2:
        raise InsufficientResolution(
            "fewer than %d samples in the smallest dyadic range" % min_samples)
    return slopes


def corner_angle(profile: SurfaceProfile, drift_tol: float = 0.01,
                 class_tol: float = 0.05) -> dict:
    """Limiting surface slope on each side of a crest at the origin.

    Fits v against u over geometrically shrinking ranges, reports the
    innermost slope, the drift across scales, and the classification into a
    120-degree corner (slope 1/sqrt(3)), a horizontal tangent (slope 0), or
    inconclusive.
    """
    out = {}
    for side, key in ((1, "plus"), (-1, "minus")):
        u, v = _side_samples(profile, side)
        if np.any(np.diff(v) < -1e-12):
            raise NonMonotoneSurface("profile is not monotone towards the crest")
        slopes = _dyadic_slopes(u, v)
        q = slopes[-1]
        drift = float(np.max(np.abs(np.diff(slopes[-3:]))))
        out["q_" + key] = q
        out["drift_" + key] = drift
        out["fit_range_" + key] = len(slopes)
    qs = [out["q_plus"], out["q_minus"]]
    drifts = [out["drift_plus"], out["drift_minus"]]
    if max(drifts) >= drift_tol:
        label = "inconclusive"
    elif all(abs(q - 1.0 / SQRT3) < class_tol for q in qs):
        label = "corner"
    elif all(abs(q) < class_tol for q in qs):
        label = "flat"
    else:
        label = "inconclusive"
    out["classification"] = label
    return out


# ---------------------------------------------------------------------------
# cone obstruction


def _cone_points(axis_angle, half_aperture, radii, nt=21, margin=0.02):
    t = np.linspace(-half_aperture * (1.0 - margin),
                    half_aperture * (1.0 - margin), nt)
    R, T = np.meshgrid(radii, t, indexing="ij")
    ang = axis_angle + T
    return R * np.cos(ang), R * np.sin(ang), R, T


def oddson_cone_check(source, axis_angle: float = -np.pi / 2,
                      half_aperture: float = np.pi / 3, r0: float = 1.0,
                      delta: float = None, n_scales: int = 12) -> dict:
    """Lower barrier kappa r^mu cos(mu t) inside a truncated cone.

    mu = pi / (2 * half_aperture).  Returns the fitted kappa when the ratio
    psi / (r^mu cos(mu t)) stays bounded below, or a violation certificate
    when the ratio decays across three consecutive dyadic scales.
    """
    if not (0 < half_aperture < np.pi):
        raise ValidationError("half-aperture must lie in (0, pi)")
    mu = np.pi / (2.0 * half_aperture)
    radii = r0 * 2.0 ** -np.arange(n_scales, dtype=float)
    X, Y, R, T = _cone_points(axis_angle, half_aperture, radii)

    if isinstance(source, CornerFlow):
        if not np.all(source.in_fluid(X, Y, tol=1e-12)):
            raise ConeNotContained("cone leaves the fluid wedge")
        psi = source.psi(X, Y)
    else:
        wf = source
        if abs(wf.Q) > 1e-10:
            raise ValidationError("cone check requires the Q = 0 datum")
        eta_i = PchipInterpolator(wf.X, wf.eta)
        if np.any(np.abs(X) > wf.L) or np.any(Y < wf.F - 1e-12) \
                or np.any(Y > eta_i(np.clip(X, wf.X[0], wf.X[-1])) + 1e-12):
            raise ConeNotContained("cone leaves the fluid region")
        spl = RectBivariateSpline(wf.X, wf.sigma, wf.psi, kx=3, ky=3)
        sig = (Y - wf.F) / (eta_i(X) - wf.F)
        psi = spl(X.ravel(), np.clip(sig, 0.0, 1.0).ravel(),
                  grid=False).reshape(X.shape)
    if delta is not None and np.any(psi >= delta):
        raise ConeNotContained("stream value exceeds delta inside the cone")

    barrier = R ** mu * np.cos(mu * T)
    ratio = psi / barrier
    per_scale = np.min(ratio, axis=1)
    decreasing = sum(1 for k in range(1, len(per_scale))
                     if per_scale[k] < per_scale[k - 1] * 0.9)
    tail = per_scale[-3:]
    if np.all(np.diff(tail) < 0) and decreasing >= 3 and tail[-1] < 0.5 * per_scale[0]:
        k = len(per_scale) - 1
        j = int(np.argmin(ratio[k]))
        return {"kappa": None, "violation": True,
                "witness": (float(radii[k]), float(T[k, j])),
                "per_scale_min": per_scale.tolist()}
    return {"kappa": float(np.min(ratio)), "violation": False,
            "per_scale_min": per_scale.tolist()}
