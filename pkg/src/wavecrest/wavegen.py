"""Newton continuation of symmetric periodic wave families in amplitude.

The discrete unknowns live on a half-period grid X in [0, L] with even
reflection at both ends: interior stream values, the surface height per
column, and the Bernoulli constant.  The equations are exactly the interior
and surface stencils of the residual verifiers in the field module, plus the
amplitude constraint eta(0) - eta(L) = a, so a converged member passes
strong_residuals by construction.  Seeds come from a laminar stream at a
bifurcation point located by a determinant-sign scan over the surface speed.
"""

from __future__ import annotations

from dataclasses import dataclass

import json

import numpy as np

from .errors import NewtonDivergence, SeedFailure
from .field import (WaveField, gradient, interior_pde_residual,
                    surface_bernoulli_residual, strong_residuals)
from .laminar import LaminarWave, _build_wave, _depth_integral
from .vorticity import VorticityFn, gamma_hat_table, check_zxc_hypotheses


@dataclass(frozen=True)
class ContinuationFamily:
    """Ordered wave members with their continuation diagnostics."""

    members: tuple  # WaveField on the full period [-L, L]
    amplitudes: tuple
    diagnostics: tuple  # dict per member

    def __len__(self):
        return len(self.members)

    def manifest(self, paths=None) -> str:
        docs = []
        for k, (a, d) in enumerate(zip(self.amplitudes, self.diagnostics)):
            doc = dict(d)
            doc["amplitude"] = a
            if paths is not None:
                doc["path"] = paths[k]
            docs.append(doc)
        return json.dumps(docs, sort_keys=True)


class _HalfGrid:
    """Discrete problem on the half period with reflection closures."""

    def __init__(self, vfn, g, L, F, nx, ny):
        self.vfn = vfn
        self.g = g
        self.L = L
        self.F = F
        self.nx = nx
        self.ny = ny
        self.X = np.linspace(0.0, L, nx)
        self.n_w = nx * (ny - 2)

    def pack(self, w, eta, Q):
        return np.concatenate([w[:, 1:-1].ravel(), eta, [Q]])

    def unpack(self, u):
        nx, ny = self.nx, self.ny
        w = np.empty((nx, ny))
        w[:, 1:-1] = u[:self.n_w].reshape(nx, ny - 2)
        w[:, 0] = self.vfn.B
        w[:, -1] = 0.0
        eta = u[self.n_w:self.n_w + nx]
        Q = u[self.n_w + nx]
        return w, eta, Q

    def as_field(self, w, eta, Q):
        return WaveField(g=self.g, B=self.vfn.B, L=self.L, F=self.F, Q=Q,
                         X=self.X, eta=eta, psi=w, xbc="even", symmetric=True)

    def core_residual(self, w, eta, Q):
        wf = self.as_field(w, eta, Q)
        r_pde = interior_pde_residual(wf, self.vfn)
        r_bern = surface_bernoulli_residual(wf)
        return np.concatenate([r_pde.ravel(), r_bern])

    def full_residual(self, u, amplitude):
        w, eta, Q = self.unpack(u)
        core = self.core_residual(w, eta, Q)
        return np.concatenate([core, [eta[0] - eta[-1] - amplitude]])

    def jacobian(self, residual_fn, u, h=1e-7):
        r0 = residual_fn(u)
        J = np.empty((r0.size, u.size))
        for k in range(u.size):
            du = h * max(1.0, abs(u[k]))
            up = u.copy()
            up[k] += du
            J[:, k] = (residual_fn(up) - r0) / du
        return J, r0


def _laminar_state(vfn, g, F, s2):
    """Laminar stream with surface speed squared s2, plus its Q."""
    gh = gamma_hat_table(vfn)
    depth = _depth_integral(gh, s2, vfn.B)
    Q = s2 + 2.0 * g * (F + depth)
    return _build_wave(vfn, g, F, s2, Q), Q


def _laminar_vector(grid: _HalfGrid, lam: LaminarWave):
    eta = np.full(grid.nx, lam.surface_y)
    sigma = np.linspace(0.0, 1.0, grid.ny)
    Y = lam.F + sigma * lam.depth
    col = lam.psi_refined(Y)
    w = np.broadcast_to(col, (grid.nx, grid.ny)).copy()
    return w, eta


def _det_sign(grid: _HalfGrid, lam: LaminarWave, Q):
    """Sign of the Jacobian determinant of the Q-frozen square system."""
    w, eta = _laminar_vector(grid, lam)

    def res(v):
        wl = w.copy()
        wl[:, 1:-1] = v[:grid.n_w].reshape(grid.nx, grid.ny - 2)
        el = v[grid.n_w:]
        return grid.core_residual(wl, el, Q)

    v0 = np.concatenate([w[:, 1:-1].ravel(), eta])
    J, _ = grid.jacobian(res, v0)
    sign, _ = np.linalg.slogdet(J)
    return float(sign), J


def find_bifurcation(vfn: VorticityFn, g: float, L: float, nx: int, ny: int,
                     s_range=(0.05, 3.0), n_scan: int = 121, F: float = 0.0,
                     refine_iters: int = 12):
    """Locate a laminar surface speed where the linearization is singular.

    Scans the determinant sign of the Q-frozen system over the surface
    speed, then bisects; returns (s_bif, null_vector, laminar, Q).
    """
    grid = _HalfGrid(vfn, g, L, F, nx, ny)
    speeds = np.linspace(s_range[0], s_range[1], n_scan)
    signs = []
    for s in speeds:
        lam, Q = _laminar_state(vfn, g, F, s * s)
        sg, _ = _det_sign(grid, lam, Q)
        signs.append(sg)
    signs = np.array(signs)
    idx = np.where(signs[:-1] * signs[1:] < 0)[0]
    if idx.size == 0:
        raise SeedFailure("no determinant sign change on the scanned speeds")
    # higher transverse modes bifurcate at lower speeds, so walk the
    # crossings from the largest surface speed down; folds of the laminar
    # family itself show up with an X-independent null mode and are skipped
    for i in idx[::-1]:
        a, b = speeds[i], speeds[i + 1]
        sa = signs[i]
        for _ in range(refine_iters):
            m = 0.5 * (a + b)
            lam, Q = _laminar_state(vfn, g, F, m * m)
            sm, _ = _det_sign(grid, lam, Q)
            if sm == sa:
                a = m
            else:
                b = m
        s_bif = 0.5 * (a + b)
        lam, Q = _laminar_state(vfn, g, F, s_bif * s_bif)
        _, J = _det_sign(grid, lam, Q)
        _, sv, vt = np.linalg.svd(J)
        null = vt[-1]
        eta_null = null[grid.n_w:]
        span = np.max(eta_null) - np.min(eta_null)
        if span > 1e-4 * np.linalg.norm(eta_null):
            return s_bif, null, lam, Q
    raise SeedFailure("only X-independent singular modes on the scanned speeds")


def _newton(grid: _HalfGrid, u0, amplitude, tol=1e-10, max_iter=40,
            max_halvings=30):
    u = u0.copy()
    r = grid.full_residual(u, amplitude)
    norm = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if norm <= tol:
            return u, norm
        J, r = grid.jacobian(lambda v: grid.full_residual(v, amplitude), u)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            raise NewtonDivergence("singular Jacobian", residual=norm)
        t = 1.0
        for _ in range(max_halvings + 1):
            trial = u + t * step
            try:
                rn = float(np.max(np.abs(grid.full_residual(trial, amplitude))))
            except Exception:
                rn = np.inf
            if rn < norm:
                break
            t *= 0.5
        else:
            raise NewtonDivergence("no decrease after damping", residual=norm)
        u, norm = trial, rn
    if norm <= tol:
        return u, norm
    raise NewtonDivergence("newton iteration budget exhausted", residual=norm)


def _mirror_field(grid: _HalfGrid, w, eta, Q) -> WaveField:
    """Reflect the half-period solution to the full period [-L, L]."""
    X = np.concatenate([-grid.X[::-1], grid.X[1:]])
    w_full = np.concatenate([w[::-1], w[1:]], axis=0)
    eta_full = np.concatenate([eta[::-1], eta[1:]])
    return WaveField(g=grid.g, B=grid.vfn.B, L=grid.L, F=grid.F, Q=Q,
                     X=X, eta=eta_full, psi=w_full, xbc="periodic",
                     symmetric=True)


def _member_diagnostics(grid: _HalfGrid, w, eta, Q, res_norm):
    wf_half = grid.as_field(w, eta, Q)
    psi_x, psi_y = gradient(wf_half)
    crest2 = (psi_x[0, -1] ** 2 + psi_y[0, -1] ** 2)
    return {
        "Q": float(Q),
        "crest_speed": float(np.sqrt(max(crest2, 0.0))),
        "max_psi_y": float(np.max(psi_y[:, 1:])),
        "max_gradient": float(np.sqrt(np.max(psi_x ** 2 + psi_y ** 2))),
        "trough_height": float(eta[-1] - grid.F),
        "residual_norm": float(res_norm),
    }


def continue_family(vfn: VorticityFn, g: float, L: float, targets,
                    nx: int = 25, ny: int = 33, tol: float = 1e-10,
                    F: float = 0.0, s_range=(0.05, 3.0)) -> ContinuationFamily:
    """Amplitude continuation from the bifurcating laminar stream.

    ``targets`` are the requested amplitudes eta(0) - eta(L), strictly
    increasing; a Newton failure truncates the family at the last converged
    member.  Requires the sign hypotheses of the extreme-wave existence
    result or irrotational flow.
    """
    gamma_ok = check_zxc_hypotheses(vfn)
    irrot = bool(np.all(np.abs(vfn(np.linspace(0, vfn.B, 100))) < 1e-14))
    if not (gamma_ok or irrot):
        raise SeedFailure("vorticity fails the sign hypotheses and is not zero")
    targets = list(targets)
    if any(a < 0 for a in targets) or any(np.diff(targets) <= 0):
        raise SeedFailure("amplitude targets must be nonnegative, increasing")

    grid = _HalfGrid(vfn, g, L, F, nx, ny)
    s_bif, null, lam, Q0 = find_bifurcation(vfn, g, L, nx, ny, s_range=s_range,
                                            F=F)
    w0, eta0 = _laminar_vector(grid, lam)

    members, amps, diags = [], [], []
    if targets and targets[0] == 0.0:
        members.append(_mirror_field(grid, w0, eta0, Q0))
        rep = strong_residuals(members[-1], vfn)
        amps.append(0.0)
        diags.append(_member_diagnostics(grid, w0, eta0, Q0, rep.max_sup()))
        targets = targets[1:]

    # seed displacement along the null direction, normalized to unit
    # crest-trough amplitude of its surface component
    eta_null = null[grid.n_w:]
    span = eta_null[0] - eta_null[-1]
    if abs(span) < 1e-12:
        raise SeedFailure("null direction carries no surface amplitude")
    null = null / span

    u_prev = None
    a_prev = None
    for a in targets:
        if u_prev is None:
            u_guess = grid.pack(w0, eta0, Q0) \
                + a * np.concatenate([null, [0.0]])
        else:
            u_guess = u_prev.copy()
            wg, eg, Qg = grid.unpack(u_prev)
            mean = np.mean(eg)
            eg2 = mean + (eg - mean) * (a / a_prev)
            u_guess = grid.pack(wg, eg2, Qg)
        try:
            u, norm = _newton(grid, u_guess, a, tol=tol)
        except NewtonDivergence:
            break
        w, eta, Q = grid.unpack(u)
        members.append(_mirror_field(grid, w, eta, Q))
        amps.append(float(a))
        diags.append(_member_diagnostics(grid, w, eta, Q, norm))
        u_prev, a_prev = u, a
    if not members:
        raise SeedFailure("no member converged at the requested amplitudes")
    return ContinuationFamily(members=tuple(members), amplitudes=tuple(amps),
                              diagnostics=tuple(diags))


def exi_diagnostics(fam: ContinuationFamily) -> dict:
    """Boundedness and decay diagnostics along a family."""
    if len(fam) == 0:
        raise ValueError("family is empty")
    Qs = [d["Q"] for d in fam.diagnostics]
    speeds = [d["crest_speed"] for d in fam.diagnostics]
    grads = [d["max_gradient"] for d in fam.diagnostics]
    troughs = [d["trough_height"] for d in fam.diagnostics]
    arclens = []
    for wf in fam.members:
        half = wf.X >= 0
        Xh, eh = wf.X[half], wf.eta[half]
        arclens.append(float(np.sum(np.hypot(np.diff(Xh), np.diff(eh)))))
    decay = None
    pos = [(a, s) for a, s in zip(fam.amplitudes, speeds) if a > 0 and s > 0]
    if len(pos) >= 3:
        la = np.log([p[0] for p in pos])
        ls = np.log([p[1] for p in pos])
        decay = float(np.polyfit(la, ls, 1)[0])
    return {
        "sup_Q": float(np.max(Qs)),
        "Q_sequence": [float(q) for q in Qs],
        "crest_speeds": [float(s) for s in speeds],
        "crest_speed_decay_exponent": decay,
        "max_gradient": float(np.max(grads)),
        "min_trough_height": float(np.min(troughs)),
        "quarter_arclengths": arclens,
    }
