"""Vorticity functions gamma on [0, B] and the scalar functionals built from them.

A vorticity function is either a polynomial in the stream value r or a
strictly-ordered sample table interpolated with a monotone-preserving cubic
(PCHIP), so that sign hypotheses are not corrupted by overshoot.  From gamma
we compute its antiderivative Gamma_hat, the Constantin-Strauss size
condition on (gamma, g, L, B), the Bernoulli-constant bound function
f(lambda) with its critical point lambda0, and the sign hypotheses used by
the extreme-wave existence result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import InvalidVorticity, NoCriticalPoint, OutOfDomain

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class VorticityFn:
    """Vorticity gamma on [0, B], as polynomial coefficients or a sample table.

    ``coeffs`` are polynomial coefficients c0 + c1*r + ... when ``kind`` is
    ``"poly"``; ``r_nodes``/``gamma_nodes`` hold the table when ``kind`` is
    ``"table"``.  Evaluation outside [0, B] raises OutOfDomain -- never
    extrapolation.
    """

    kind: str
    B: float
    coeffs: tuple = ()
    r_nodes: tuple = ()
    gamma_nodes: tuple = ()
    smoothness: str = "C1"
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.B <= 0:
            raise InvalidVorticity("B must be positive, got %r" % (self.B,))
        if self.kind == "poly":
            if len(self.coeffs) == 0:
                raise InvalidVorticity("polynomial form requires coefficients")
        elif self.kind == "table":
            r = np.asarray(self.r_nodes, dtype=float)
            if r.size < 4:
                raise InvalidVorticity("table form requires >= 4 nodes")
            if np.any(np.diff(r) <= 0):
                raise InvalidVorticity("table abscissae must be strictly increasing")
            if r[0] > _DOMAIN_SLACK or r[-1] < self.B - _DOMAIN_SLACK:
                raise InvalidVorticity("table must cover [0, B]")
            if len(self.gamma_nodes) != r.size:
                raise InvalidVorticity("table r/gamma length mismatch")
            interp = PchipInterpolator(r, np.asarray(self.gamma_nodes, dtype=float))
            object.__setattr__(self, "_interp", interp)
        else:
            raise InvalidVorticity("unknown vorticity kind %r" % (self.kind,))

    # -- evaluation ---------------------------------------------------------

    def _check_domain(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < -_DOMAIN_SLACK) or np.any(r > self.B + _DOMAIN_SLACK):
            raise OutOfDomain(
                "vorticity evaluated at r outside [0, %g]" % (self.B,))
        return np.clip(r, 0.0, self.B)

    def __call__(self, r):
        r = self._check_domain(r)
        if self.kind == "poly":
            return np.polynomial.polynomial.polyval(r, self.coeffs)
        return self._interp(r)

    def derivative(self, r):
        r = self._check_domain(r)
        if self.kind == "poly":
            dc = np.polynomial.polynomial.polyder(np.asarray(self.coeffs, dtype=float))
            return np.polynomial.polynomial.polyval(r, dc)
        return self._interp.derivative()(r)

    def antiderivative_fn(self):
        """Exact antiderivative of the stored representation, vanishing at 0.

        For the polynomial form this is the polynomial antiderivative; for the
        table form it is the antiderivative of the PCHIP interpolant.  Both
        agree with adaptive quadrature of gamma to well below 1e-12.
        """
        if self.kind == "poly":
            ic = np.polynomial.polynomial.polyint(np.asarray(self.coeffs, dtype=float))

            def gh(r):
                return np.polynomial.polynomial.polyval(np.asarray(r, dtype=float), ic)

            return gh
        return self._interp.antiderivative()

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        if self.kind == "poly":
            doc = {"kind": "poly", "coeffs": list(self.coeffs), "B": self.B}
        else:
            doc = {
                "kind": "table",
                "r": list(self.r_nodes),
                "gamma": list(self.gamma_nodes),
                "B": self.B,
            }
        return json.dumps(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "VorticityFn":
        kind = doc.get("kind")
        if kind == "poly":
            return cls(kind="poly", coeffs=tuple(doc["coeffs"]), B=float(doc["B"]))
        if kind == "table":
            return cls(
                kind="table",
                r_nodes=tuple(doc["r"]),
                gamma_nodes=tuple(doc["gamma"]),
                B=float(doc["B"]),
            )
        raise InvalidVorticity("unknown vorticity kind %r" % (kind,))

    @classmethod
    def from_json(cls, text: str) -> "VorticityFn":
        return cls.from_dict(json.loads(text))


def poly_vorticity(coeffs, B=1.0) -> VorticityFn:
    return VorticityFn(kind="poly", coeffs=tuple(coeffs), B=float(B))


def table_vorticity(r, gamma, B=None) -> VorticityFn:
    r = tuple(float(v) for v in r)
    if B is None:
        B = r[-1]
    return VorticityFn(kind="table", r_nodes=r, gamma_nodes=tuple(float(v) for v in gamma), B=float(B))


@dataclass(frozen=True)
class GammaHat:
    """Antiderivative of gamma on [0, B] together with its maximum."""

    vfn: VorticityFn
    gamma_hat_max: float
    argmax: float = 0.0
    _fn: object = field(repr=False, compare=False, default=None)

    def __call__(self, r):
        self.vfn._check_domain(r)
        return self._fn(r)


def gamma_hat(vfn: VorticityFn, r) -> float:
    """Integral of gamma from 0 to r by adaptive quadrature.

    Absolute error <= 1e-12 * (1 + |result|); raises OutOfDomain for r
    outside [0, B].
    """
    r = float(np.asarray(r, dtype=float))
    vfn._check_domain(r)
    val, _ = quad(lambda t: float(vfn(t)), 0.0, r, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def gamma_hat_table(vfn: VorticityFn) -> GammaHat:
    """Gamma_hat as a fast vectorized function, with its maximum over [0, B]."""
    fn = vfn.antiderivative_fn()
    grid = np.linspace(0.0, vfn.B, 2001)
    vals = fn(grid)
    k = int(np.argmax(vals))
    gmax = float(vals[k])
    rmax = float(grid[k])
    # local refinement around the discrete maximizer
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    if hi > lo:
        fine = np.linspace(lo, hi, 513)
        fvals = fn(fine)
        j = int(np.argmax(fvals))
        if fvals[j] > gmax:
            gmax = float(fvals[j])
            rmax = float(fine[j])
    return GammaHat(vfn=vfn, gamma_hat_max=gmax, argmax=rmax, _fn=fn)


def check_jhb(vfn: VorticityFn, g: float, L: float) -> dict:
    """Constantin-Strauss size condition on (gamma, g, L).

    lhs = int_0^B [pi^2 (B-r)^2 / L^2 * (2 Ghat_max - 2 Ghat(r))^{1/2}
                   + (2 Ghat_max - 2 Ghat(r))^{3/2}] dr
    rhs = g B^2, and the condition holds iff lhs < rhs.
    """
    if g <= 0 or L <= 0:
        raise ValueError("g and L must be positive")
    gh = gamma_hat_table(vfn)
    B = vfn.B
    gmax = gh.gamma_hat_max

    def integrand(r):
        s = np.maximum(2.0 * gmax - 2.0 * gh(r), 0.0)
        return (np.pi ** 2) * (B - r) ** 2 / L ** 2 * np.sqrt(s) + s ** 1.5

    lhs, _ = quad(integrand, 0.0, B, epsabs=1e-12, epsrel=1e-12, limit=200)
    rhs = g * B ** 2
    return {"holds": bool(lhs < rhs), "lhs": float(lhs), "rhs": float(rhs)}


def cs_q_bound(vfn: VorticityFn, g: float) -> dict:
    """Bernoulli bound function f and its critical point lambda0.

    f(lam) = lam + 2 g int_0^B (lam - 2 Ghat(r))^{-1/2} dr for
    lam > 2 Ghat_max; lambda0 is the root of f' in (2 Ghat_max, inf), found by
    bracketed root-finding to relative tolerance 1e-10.
    """
    if g <= 0:
        raise ValueError("g must be positive")
    gh = gamma_hat_table(vfn)
    B = vfn.B
    floor = 2.0 * gh.gamma_hat_max

    def f(lam):
        if lam <= floor:
            raise OutOfDomain("f(lambda) requires lambda > 2*Gamma_hat_max = %g" % floor)
        val, _ = quad(lambda r: (lam - 2.0 * gh(r)) ** -0.5, 0.0, B,
                      epsabs=1e-12, epsrel=1e-12, limit=200)
        return lam + 2.0 * g * val

    brk = [gh.argmax] if 0.0 < gh.argmax < B else None

    def fprime(lam):
        val, _ = quad(lambda r: (lam - 2.0 * gh(r)) ** -1.5, 0.0, B,
                      epsabs=1e-12, epsrel=1e-12, limit=500, points=brk)
        return 1.0 - g * val

    # f' -> -inf as lambda -> 2*Ghat_max and f' -> 1 as lambda -> inf;
    # walk the endpoints until the sign change is bracketed
    scale = g * B
    lo = floor + 0.1 * scale
    hi = floor + 1e3 * scale
    for _ in range(12):
        if fprime(lo) < 0:
            break
        lo = floor + (lo - floor) / 10.0
        if lo - floor < 1e-8 * scale:
            raise NoCriticalPoint("f' has no sign change", bracket=(lo, hi))
    for _ in range(8):
        if fprime(hi) > 0:
            break
        hi = floor + (hi - floor) * 100.0
    if not (fprime(lo) < 0 < fprime(hi)):
        raise NoCriticalPoint("f' has no sign change", bracket=(lo, hi))
    lam0 = brentq(fprime, lo, hi, xtol=1e-14, rtol=1e-12)
    return {"lambda0": float(lam0), "f_of": f}


def check_zxc_hypotheses(vfn: VorticityFn, n: int = 1000) -> bool:
    """Sign hypotheses gamma(0) < 0, gamma <= 0, gamma' >= 0 on a sample grid."""
    grid = np.linspace(0.0, vfn.B, max(n, 1000))
    gvals = np.asarray(vfn(grid), dtype=float)
    if not gvals.flat[0] < 0:
        return False
    if np.any(gvals > 0):
        return False
    dvals = np.asarray(vfn.derivative(grid), dtype=float)
    return bool(np.all(dvals >= -1e-12))
