"""Discrete wave fields on boundary-fitted grids and their residual verifiers.

A WaveField stores psi on a tensor grid that follows the fluid domain: each
column i sits at abscissa X[i] and spans [F, eta_i] with a uniform stretched
coordinate sigma in [0, 1] (sigma = 0 bed, sigma = 1 surface).  All residuals
are evaluated in the mapped coordinates with second-order finite differences,
so that the surface is exactly a grid line and the kinematic and Bernoulli
conditions are sampled on it directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import io
import json

import numpy as np
from scipy.integrate import simpson

from .errors import DegenerateGrid, UnsupportedTestFn

# ---------------------------------------------------------------------------
# surface profiles


@dataclass(frozen=True)
class SurfaceProfile:
    """Free boundary as graph samples (X, eta) or parametric samples (s, u, v)."""

    kind: str  # "graph" or "parametric"
    period: float  # 2L
    X: np.ndarray = None
    eta: np.ndarray = None
    s: np.ndarray = None
    u: np.ndarray = None
    v: np.ndarray = None
    monotone: bool = False

    def __post_init__(self):
        if self.kind == "graph":
            if self.X is None or self.eta is None:
                raise ValueError("graph profile requires X and eta")
            if self.monotone:
                X = np.asarray(self.X)
                eta = np.asarray(self.eta)
                half = (X > 0) & (X < self.period / 2.0)
                if np.any(np.diff(eta[(X >= 0) & (X <= self.period / 2.0)]) > 1e-12):
                    raise ValueError("eta is not nonincreasing on (0, L)")
        elif self.kind == "parametric":
            if self.s is None or self.u is None or self.v is None:
                raise ValueError("parametric profile requires s, u, v")
            if np.any(np.diff(np.asarray(self.u)) < -1e-12):
                raise ValueError("u must be nondecreasing")
            pts = np.round(np.column_stack([self.u, self.v]), 12)
            if np.unique(pts, axis=0).shape[0] < pts.shape[0] - 1:
                raise ValueError("parametric profile self-intersects")
        else:
            raise ValueError("unknown profile kind %r" % (self.kind,))

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.kind == "graph":
            buf.write("X,eta\n")
            for x, e in zip(self.X, self.eta):
                buf.write("%.17g,%.17g\n" % (x, e))
        else:
            buf.write("s,u,v\n")
            for s, u, v in zip(self.s, self.u, self.v):
                buf.write("%.17g,%.17g,%.17g\n" % (s, u, v))
        return buf.getvalue()


# ---------------------------------------------------------------------------
# residual reports


@dataclass(frozen=True)
class ResidualEntry:
    sup: float
    l2: float
    argmax: tuple  # (X, Y) of the worst violation

    def as_dict(self):
        return {"sup": self.sup, "l2": self.l2,
                "argmax": [self.argmax[0], self.argmax[1]]}


@dataclass(frozen=True)
class ResidualReport:
    entries: dict

    def __getitem__(self, name) -> ResidualEntry:
        return self.entries[name]

    def max_sup(self, names=None) -> float:
        names = names or self.entries.keys()
        return max(self.entries[n].sup for n in names)

    def to_json(self) -> str:
        return json.dumps({k: v.as_dict() for k, v in self.entries.items()},
                          sort_keys=True)


def _entry(res, X, Y):
    """Build a ResidualEntry from a residual array and matching coordinates."""
    a = np.abs(res)
    if a.size == 0:
        return ResidualEntry(0.0, 0.0, (np.nan, np.nan))
    k = np.unravel_index(np.argmax(a), a.shape)
    l2 = float(np.sqrt(np.mean(res ** 2)))
    return ResidualEntry(float(a[k]), l2, (float(X[k]), float(Y[k])))


# ---------------------------------------------------------------------------
# wave fields


@dataclass(frozen=True)
class WaveField:
    """Discrete solution candidate on a boundary-fitted grid.

    psi has shape (nx, ny) with psi[:, 0] the bed row and psi[:, -1] the
    surface row.  ``xbc`` selects the lateral closure used by the finite
    difference stencils: "periodic" (full period, X[-1] - X[0] = 2L),
    "even" (half period with reflection at both ends) or "none" (plain
    window; lateral edge columns are skipped by the verifiers).
    """

    g: float
    B: float
    L: float
    F: float
    Q: float
    X: np.ndarray
    eta: np.ndarray
    psi: np.ndarray
    xbc: str = "periodic"
    symmetric: bool = True
    has_bed: bool = True

    def __post_init__(self):
        if self.psi.shape != (self.X.size, self.eta.size) and \
           self.psi.shape[0] != self.X.size:
            raise ValueError("psi shape does not match grid")

    @property
    def nx(self):
        return self.X.size

    @property
    def ny(self):
        return self.psi.shape[1]

    @property
    def dx(self):
        return float(self.X[1] - self.X[0])

    @property
    def sigma(self):
        return np.linspace(0.0, 1.0, self.ny)

    @property
    def heights(self):
        return self.eta - self.F

    def ygrid(self):
        """Physical Y of every node, shape (nx, ny)."""
        return self.F + self.heights[:, None] * self.sigma[None, :]

    def surface_profile(self) -> SurfaceProfile:
        return SurfaceProfile(kind="graph", period=2.0 * self.L,
                              X=np.array(self.X), eta=np.array(self.eta))

    # -- I/O ----------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# g,B,L,F,Q,Nx,Ny\n")
        buf.write("# %.17g,%.17g,%.17g,%.17g,%.17g,%d,%d\n"
                  % (self.g, self.B, self.L, self.F, self.Q, self.nx, self.ny))
        Y = self.ygrid()
        for i in range(self.nx):
            for j in range(self.ny):
                buf.write("%.17g,%.17g,%.17g\n" % (self.X[i], Y[i, j], self.psi[i, j]))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, xbc: str = "periodic", symmetric: bool = True):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        meta = lines[1].lstrip("# ").split(",")
        g, B, L, F, Q = (float(v) for v in meta[:5])
        nx, ny = int(meta[5]), int(meta[6])
        data = np.loadtxt(io.StringIO("\n".join(lines[2:])), delimiter=",")
        X = data[::ny, 0]
        Y = data[:, 1].reshape(nx, ny)
        psi = data[:, 2].reshape(nx, ny)
        eta = Y[:, -1]
        return cls(g=g, B=B, L=L, F=F, Q=Q, X=X, eta=eta, psi=psi,
                   xbc=xbc, symmetric=symmetric)


def _pad_x(arr, xbc):
    """Add one ghost column on each side according to the lateral closure."""
    if xbc == "periodic":
        # X[0] and X[-1] are the same physical point one period apart
        return np.concatenate([arr[-2:-1], arr, arr[1:2]], axis=0)
    if xbc == "even":
        return np.concatenate([arr[1:2], arr, arr[-2:-1]], axis=0)
    # plain window: replicate edges; edge columns are excluded from reports
    return np.concatenate([arr[0:1], arr, arr[-1:]], axis=0)


def _x_derivs(arr, dx, xbc):
    p = _pad_x(arr, xbc)
    d1 = (p[2:] - p[:-2]) / (2.0 * dx)
    d2 = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / dx ** 2
    return d1, d2


def _sigma_deriv_interior(w, dsig):
    """First/second sigma-derivatives at interior rows j = 1..ny-2."""
    d1 = (w[:, 2:] - w[:, :-2]) / (2.0 * dsig)
    d2 = (w[:, 2:] - 2.0 * w[:, 1:-1] + w[:, :-2]) / dsig ** 2
    return d1, d2


def _sigma_deriv_onesided(w, dsig, at_surface=True):
    """Second-order one-sided first derivative at the surface or bed row."""
    if at_surface:
        return (3.0 * w[:, -1] - 4.0 * w[:, -2] + w[:, -3]) / (2.0 * dsig)
    return (-3.0 * w[:, 0] + 4.0 * w[:, 1] - w[:, 2]) / (2.0 * dsig)


def gradient(wf: WaveField, w=None):
    """(f_X, f_Y) of a grid function at every node, second order.

    Defaults to the stream function; pass ``w`` to differentiate another
    field sampled on the same grid.
    """
    w = wf.psi if w is None else w
    h = wf.heights
    if np.any(h <= 0):
        raise DegenerateGrid("non-positive column height")
    dsig = 1.0 / (wf.ny - 1)
    sig = wf.sigma
    hx, _ = _x_derivs(wf.eta, wf.dx, wf.xbc)

    wsig = np.empty_like(w)
    wsig[:, 1:-1] = (w[:, 2:] - w[:, :-2]) / (2.0 * dsig)
    wsig[:, -1] = _sigma_deriv_onesided(w, dsig, at_surface=True)
    wsig[:, 0] = _sigma_deriv_onesided(w, dsig, at_surface=False)

    wx = np.empty_like(w)
    p = _pad_x(w, wf.xbc)
    wx[:, :] = (p[2:] - p[:-2]) / (2.0 * wf.dx)

    sigx = -sig[None, :] * (hx / h)[:, None]
    psi_x = wx + wsig * sigx
    psi_y = wsig / h[:, None]
    return psi_x, psi_y


def laplacian(wf: WaveField, w=None):
    """Laplacian of a grid function at interior rows j = 1..ny-2.

    Shape (nx, ny-2); for xbc="none" the lateral edge columns are dropped
    as well, giving (nx-2, ny-2).
    """
    w = wf.psi if w is None else w
    h = wf.heights
    if np.any(h <= 0):
        raise DegenerateGrid("non-positive column height")
    dx = wf.dx
    dsig = 1.0 / (wf.ny - 1)
    sig = wf.sigma[1:-1]
    hx, hxx = _x_derivs(wf.eta, dx, wf.xbc)

    p = _pad_x(w, wf.xbc)
    wx2 = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / dx ** 2
    wsig, wsig2 = _sigma_deriv_interior(w, dsig)
    # cross derivative: centered X-difference of the centered sigma-derivative
    ps = _pad_x(wsig, wf.xbc)
    wxsig = (ps[2:] - ps[:-2]) / (2.0 * dx)

    hr = (hx / h)[:, None]
    sigx = -sig[None, :] * hr
    sigxx = sig[None, :] * (2.0 * (hx / h) ** 2 - hxx / h)[:, None]
    lap = (wx2[:, 1:-1] + 2.0 * sigx * wxsig
           + (sigx ** 2 + (1.0 / h ** 2)[:, None]) * wsig2
           + sigxx * wsig)
    if wf.xbc == "none":
        lap = lap[1:-1]
    return lap


def interior_pde_residual(wf: WaveField, vfn):
    """Residual of Delta psi + gamma(psi) = 0 at interior nodes."""
    lap = laplacian(wf)
    w = wf.psi[:, 1:-1]
    if wf.xbc == "none":
        w = w[1:-1]
    return lap + vfn(np.clip(w, 0.0, vfn.B))


def surface_bernoulli_residual(wf: WaveField):
    """|grad psi|^2 + 2 g Y - Q at the surface nodes."""
    h = wf.heights
    dsig = 1.0 / (wf.ny - 1)
    hx, _ = _x_derivs(wf.eta, wf.dx, wf.xbc)
    wsig = _sigma_deriv_onesided(wf.psi, dsig, at_surface=True)
    grad2 = (1.0 + hx ** 2) * (wsig / h) ** 2
    return grad2 + 2.0 * wf.g * wf.eta - wf.Q


def strong_residuals(wf: WaveField, vfn) -> ResidualReport:
    """All pointwise residuals of the governing system on the grid."""
    if wf.ny < 8 or wf.nx < 8:
        raise ValueError("grid must be at least 8x8")
    Y = wf.ygrid()
    Xg = np.broadcast_to(wf.X[:, None], wf.psi.shape)

    res_i = interior_pde_residual(wf, vfn)
    Xi, Yi = Xg[:, 1:-1], Y[:, 1:-1]
    if wf.xbc == "none":
        Xi, Yi = Xi[1:-1], Yi[1:-1]

    bern = surface_bernoulli_residual(wf)
    kin_s = wf.psi[:, -1]

    entries = {
        "interior_pde": _entry(res_i, Xi, Yi),
        "bernoulli": _entry(bern, wf.X, wf.eta),
        "kinematic_surface": _entry(kin_s, wf.X, wf.eta),
    }
    if wf.has_bed:
        kin_b = wf.psi[:, 0] - wf.B
        over = np.maximum(wf.psi - wf.B, 0.0)
        under = np.maximum(-wf.psi, 0.0)
        rng = np.maximum(over, under)
        entries["kinematic_bed"] = _entry(kin_b, wf.X, np.full_like(wf.X, wf.F))
        entries["range"] = _entry(rng, Xg, Y)
    return ResidualReport(entries=entries)


# ---------------------------------------------------------------------------
# test functions and the weak form


@dataclass(frozen=True)
class Bump:
    """Polynomial bump (1 - rho^2/r^2)^deg inside a disc, zero outside; C^2."""

    center: tuple
    radius: float
    degree: int = 3

    def value(self, X, Y):
        r2 = ((X - self.center[0]) ** 2 + (Y - self.center[1]) ** 2) / self.radius ** 2
        inside = r2 < 1.0
        return np.where(inside, (1.0 - np.minimum(r2, 1.0)) ** self.degree, 0.0)

    def grad(self, X, Y):
        dx = X - self.center[0]
        dy = Y - self.center[1]
        r2 = (dx ** 2 + dy ** 2) / self.radius ** 2
        inside = r2 < 1.0
        common = np.where(
            inside,
            -2.0 * self.degree * (1.0 - np.minimum(r2, 1.0)) ** (self.degree - 1)
            / self.radius ** 2,
            0.0,
        )
        return common * dx, common * dy


def weak_residual(wf: WaveField, zeta: Bump, vfn) -> float:
    """Weak-form defect against a compactly supported C^1 test function.

    Returns  int_Omega grad psi . grad zeta  -  int_Omega gamma(psi) zeta
             + int_S (Q - 2 g Y)^{1/2} zeta dH^1,
    by composite Simpson quadrature on the grid and trapezoid on the surface
    polyline; a solution field yields pure quadrature error.
    """
    if zeta.center[1] - zeta.radius <= wf.F:
        raise UnsupportedTestFn("test function support touches the bed line")
    Y = wf.ygrid()
    Xg = np.broadcast_to(wf.X[:, None], wf.psi.shape)
    psi_x, psi_y = gradient(wf)
    zx, zy = zeta.grad(Xg, Y)
    zval = zeta.value(Xg, Y)
    gam = vfn(np.clip(wf.psi, 0.0, vfn.B))
    integrand = psi_x * zx + psi_y * zy - gam * zval
    # integrate each column in Y (uniform spacing per column), then in X
    cols = simpson(integrand, x=Y, axis=1)
    bulk = simpson(cols, x=wf.X)
    # surface line integral with the polyline measure
    head = np.sqrt(np.maximum(wf.Q - 2.0 * wf.g * wf.eta, 0.0))
    fsurf = head * zeta.value(wf.X, wf.eta)
    seg = np.sqrt(np.diff(wf.X) ** 2 + np.diff(wf.eta) ** 2)
    surf = float(np.sum(0.5 * (fsurf[1:] + fsurf[:-1]) * seg))
    return float(bulk + surf)


# ---------------------------------------------------------------------------
# normalization and stagnation points


def shift_datum(wf: WaveField, G: float) -> WaveField:
    """Translate the vertical datum by -G: F -> F - G, Q -> Q - 2 g G."""
    return replace(wf, F=wf.F - G, Q=wf.Q - 2.0 * wf.g * G, eta=wf.eta - G)


def stagnation_points(wf: WaveField, tol: float):
    """Surface nodes with |Q - 2 g Y| <= tol, deduplicated per period."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    mask = np.abs(wf.Q - 2.0 * wf.g * wf.eta) <= tol
    pts = [(float(x), float(e)) for x, e in zip(wf.X[mask], wf.eta[mask])]
    if wf.xbc == "periodic" and pts:
        span = wf.X[-1] - wf.X[0]
        dedup = []
        for x, e in pts:
            if any(abs((x - x0) % span) < 1e-12 or
                   abs(span - (x - x0) % span) < 1e-12 for x0, _ in dedup):
                continue
            dedup.append((x, e))
        pts = dedup
    return pts


# ---------------------------------------------------------------------------
# constructors


def laminar_to_field(lam, L: float, nx: int = 129, ny: int = 129,
                     refine: bool = True) -> WaveField:
    """Sample a laminar stream on a periodic boundary-fitted grid.

    With ``refine`` the tabulated stream values are Newton-corrected against
    the exact depth quadrature, so that residuals reflect only the finite
    difference truncation of the verifier.
    """
    X = np.linspace(-L, L, nx)
    eta = np.full(nx, lam.surface_y)
    sigma = np.linspace(0.0, 1.0, ny)
    Y = lam.F + sigma * (lam.surface_y - lam.F)
    psi_col = lam.psi_refined(Y) if refine else lam.psi(Y)
    psi = np.broadcast_to(psi_col, (nx, ny)).copy()
    return WaveField(g=lam.g, B=lam.B, L=L, F=lam.F, Q=lam.Q,
                     X=X, eta=eta, psi=psi, xbc="periodic", symmetric=True)
