"""Pressure-head functionals and the elliptic identities built on them.

The base functional is  R = |grad psi|^2/2 + g Y - Q/2 + Gamma_hat(psi);
its variants subtract a linear multiple of psi (T, with slope the positive
part of max gamma over 2) or add the antiderivative of a multiplier
(S = R + Lambda(psi)).  W = |grad psi|^2/2 + Gamma_hat(psi) + Lambda(psi)
satisfies an elliptic identity whose discrete residual certifies the
maximum-principle computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (AllNodesExcluded, StagnationInterior, Unbounded,
                     ValidationError)
from .field import WaveField, ResidualEntry, _entry, gradient, laplacian
from .vorticity import VorticityFn, gamma_hat_table


@dataclass(frozen=True)
class MultiplierFn:
    """C^1 multiplier lambda on [0, B] with its antiderivative Lambda.

    Reuses the vorticity representation; ``admissible`` reports the three
    sufficient sign conditions lambda <= 0, 2 lambda + gamma <= 0,
    lambda' >= 0 sampled on a 1000-point grid.
    """

    fn: VorticityFn

    def __call__(self, r):
        return self.fn(r)

    def derivative(self, r):
        return self.fn.derivative(r)

    def antiderivative(self):
        return self.fn.antiderivative_fn()

    def admissible(self, vfn: VorticityFn, n: int = 1000) -> dict:
        grid = np.linspace(0.0, min(self.fn.B, vfn.B), max(n, 1000))
        lam = np.asarray(self.fn(grid), dtype=float)
        gam = np.asarray(vfn(grid), dtype=float)
        dlam = np.asarray(self.fn.derivative(grid), dtype=float)
        tol = 1e-12
        return {
            "nonpositive": bool(np.all(lam <= tol)),
            "combined_nonpositive": bool(np.all(2.0 * lam + gam <= tol)),
            "nondecreasing": bool(np.all(dlam >= -tol)),
        }


def zero_multiplier(B: float) -> MultiplierFn:
    return MultiplierFn(fn=VorticityFn(kind="poly", coeffs=(0.0,), B=B))


@dataclass(frozen=True)
class PressureHeadField:
    """Values of R, T or S on a wave-field grid with their extrema."""

    kind: str
    values: np.ndarray
    varpi: float
    max_value: float
    max_loc: tuple
    min_value: float
    min_loc: tuple


def _extrema(vals, X, Y):
    kmax = np.unravel_index(np.argmax(vals), vals.shape)
    kmin = np.unravel_index(np.argmin(vals), vals.shape)
    return (float(vals[kmax]), (float(X[kmax]), float(Y[kmax])),
            float(vals[kmin]), (float(X[kmin]), float(Y[kmin])))


def pressure_head(wf: WaveField, vfn: VorticityFn, kind: str = "R",
                  lam: MultiplierFn = None) -> PressureHeadField:
    """R, T or S on the grid from centered-difference gradients."""
    if kind not in ("R", "T", "S"):
        raise ValueError("kind must be R, T or S")
    if kind == "S" and lam is None:
        raise ValueError("kind S requires a multiplier")
    psi_x, psi_y = gradient(wf)
    grad2 = psi_x ** 2 + psi_y ** 2
    Y = wf.ygrid()
    gh = gamma_hat_table(vfn)
    p = np.clip(wf.psi, 0.0, vfn.B)
    base = 0.5 * grad2 + wf.g * Y - 0.5 * wf.Q + gh(p)
    gmax = float(np.max(vfn(np.linspace(0.0, vfn.B, 2001))))
    varpi = 0.5 * max(0.0, gmax)
    if kind == "R":
        vals = base
    elif kind == "T":
        vals = base - varpi * wf.psi
    else:
        vals = base + lam.antiderivative()(p)
    Xg = np.broadcast_to(wf.X[:, None], vals.shape)
    mx, mxl, mn, mnl = _extrema(vals, Xg, Y)
    return PressureHeadField(kind=kind, values=vals, varpi=varpi,
                             max_value=mx, max_loc=mxl,
                             min_value=mn, min_loc=mnl)


def sperb_residual(wf: WaveField, vfn: VorticityFn, lam: MultiplierFn,
                   eps_cut: float = 1e-8) -> dict:
    """Discrete residual of the elliptic identity satisfied by W.

    W = |grad psi|^2/2 + Gamma_hat(psi) + Lambda(psi) obeys

        Delta W + (L1 W_X + L2 W_Y)/|grad psi|^2
            = lambda'(psi) |grad psi|^2 + (2 lambda + gamma) lambda,
        L1 = -2 [W_X - (2 lambda + gamma) psi_X],
        L2 = -2 [W_Y - (2 lambda + gamma) psi_Y].

    Nodes with |grad psi| < eps_cut are excluded (the coefficients divide by
    |grad psi|^2) and counted in the report.
    """
    psi_x, psi_y = gradient(wf)
    grad2 = psi_x ** 2 + psi_y ** 2
    gh = gamma_hat_table(vfn)
    p = np.clip(wf.psi, 0.0, vfn.B)
    W = 0.5 * grad2 + gh(p) + lam.antiderivative()(p)

    lapW = laplacian(wf, W)
    Wx, Wy = gradient(wf, W)
    jlo, jhi = 1, wf.ny - 1
    sl = slice(1, -1) if wf.xbc == "none" else slice(None)

    lam_v = np.asarray(lam(p), dtype=float)
    gam_v = np.asarray(vfn(p), dtype=float)
    dlam_v = np.asarray(lam.derivative(p), dtype=float)
    comb = 2.0 * lam_v + gam_v

    def cut(a):
        return a[sl, jlo:jhi]

    g2 = cut(grad2)
    L1 = -2.0 * (cut(Wx) - cut(comb) * cut(psi_x))
    L2 = -2.0 * (cut(Wy) - cut(comb) * cut(psi_y))
    rhs = cut(dlam_v) * g2 + cut(comb * lam_v)

    mask = g2 >= eps_cut ** 2
    n_excl = int(np.sum(~mask))
    if not np.any(mask):
        raise AllNodesExcluded("gradient cutoff removed every interior node")
    res = np.where(mask,
                   lapW + (L1 * cut(Wx) + L2 * cut(Wy)) / np.where(mask, g2, 1.0)
                   - rhs, 0.0)
    Y = wf.ygrid()
    Xg = np.broadcast_to(wf.X[:, None], wf.psi.shape)
    entry = _entry(res, cut(Xg), cut(Y))
    return {"residual": entry, "excluded_nodes": n_excl}


def nqt_check(wf: WaveField, vfn: VorticityFn, tol: float = 1e-6) -> dict:
    """Two-sided bound: min_S |grad psi|^2 <= |grad psi|^2 + 2 Gamma_hat(psi)
    <= max_S |grad psi|^2 at every node, with surface extrema as pivots."""
    psi_x, psi_y = gradient(wf)
    grad2 = psi_x ** 2 + psi_y ** 2
    interior = grad2[:, :-1]
    if np.any(interior <= 0.0):
        raise StagnationInterior("gradient vanishes away from the surface")
    gh = gamma_hat_table(vfn)
    val = grad2 + 2.0 * gh(np.clip(wf.psi, 0.0, vfn.B))
    smin = float(np.min(grad2[:, -1]))
    smax = float(np.max(grad2[:, -1]))
    lower = float(np.min(val - smin))
    upper = float(np.min(smax - val))
    return {"holds": bool(lower >= -tol and upper >= -tol),
            "lower_margin": lower, "upper_margin": upper}


def sqrt_bound_fit(wf: WaveField, ratio_cap: float = 1e6) -> float:
    """Smallest K with |grad psi|^2 <= K |Y| over the grid, Q = 0 datum.

    Nodes with |Y| below the local grid spacing are excluded; a ratio above
    ``ratio_cap`` raises Unbounded.
    """
    if abs(wf.Q) > 1e-10:
        raise ValidationError("sqrt_bound_fit requires the Q = 0 datum; "
                              "shift first")
    psi_x, psi_y = gradient(wf)
    grad2 = psi_x ** 2 + psi_y ** 2
    Y = wf.ygrid()
    dy_local = wf.heights[:, None] / (wf.ny - 1)
    mask = np.abs(Y) >= dy_local
    if not np.any(mask):
        raise AllNodesExcluded("every node is within one spacing of Y = 0")
    ratio = np.where(mask, grad2 / np.where(mask, np.abs(Y), 1.0), 0.0)
    K = float(np.max(ratio))
    if K > ratio_cap:
        raise Unbounded("gradient ratio %.3g exceeds cap" % K)
    return K
