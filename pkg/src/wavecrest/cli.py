"""Command-line front end: config ingestion and subcommand dispatch.

Exit codes: 0 all requested checks pass; 1 configuration error (schema or
invariant); 2 computation error (domain errors raised by the library);
3 a requested check failed its threshold.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import blowup, inteq, laminar, pressure, vorticity, wavegen
from . import field as fieldmod
from .errors import SchemaError, ValidationError, WavecrestError

_TOP_KEYS = {"gamma", "g", "B", "L", "grid", "tol", "seed", "out", "params"}
_GAMMA_KEYS = {"poly": {"kind", "coeffs", "B"},
               "table": {"kind", "r", "gamma", "B"}}


@dataclass(frozen=True)
class RunConfig:
    vfn: object
    g: float = 1.0
    B: float = 1.0
    L: float = 1.0
    nx: int = 128
    ny: int = 128
    tol: float = 1e-8
    seed: int = 0
    out: str = "."
    params: dict = field(default_factory=dict)


def _parse_grid(value):
    try:
        if isinstance(value, str):
            nx, ny = value.lower().split("x")
            return int(nx), int(ny)
        nx, ny = value
        return int(nx), int(ny)
    except (ValueError, TypeError):
        raise SchemaError("grid must be 'NxM' or a pair", path="grid")


def parse_config(text: str) -> RunConfig:
    """Validated RunConfig from a JSON document; unknown keys rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("malformed JSON: %s" % e, path="")
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", path="")
    for key in doc:
        if key not in _TOP_KEYS:
            raise SchemaError("unknown key %r" % key, path=key)
    if "gamma" not in doc:
        raise SchemaError("missing vorticity specification", path="gamma")
    gdoc = doc["gamma"]
    if not isinstance(gdoc, dict) or "kind" not in gdoc:
        raise SchemaError("vorticity spec must be an object with 'kind'",
                          path="gamma")
    kind = gdoc["kind"]
    if kind not in _GAMMA_KEYS:
        raise SchemaError("unknown vorticity kind %r" % kind, path="gamma.kind")
    for key in gdoc:
        if key not in _GAMMA_KEYS[kind]:
            raise SchemaError("unknown key %r" % key, path="gamma." + key)
    try:
        vfn = vorticity.VorticityFn.from_dict(gdoc)
    except (KeyError, TypeError) as e:
        raise SchemaError("invalid vorticity spec: %s" % e, path="gamma")
    except WavecrestError as e:
        raise ValidationError(str(e))

    g = float(doc.get("g", 1.0))
    B = float(doc.get("B", vfn.B))
    L = float(doc.get("L", 1.0))
    tol = float(doc.get("tol", 1e-8))
    seed = int(doc.get("seed", 0))
    nx, ny = _parse_grid(doc.get("grid", "128x128"))
    if g <= 0 or B <= 0 or L <= 0:
        raise ValidationError("physical constants must be strictly positive")
    if not (0.0 < tol < 1.0):
        raise ValidationError("tol must lie in (0, 1)")
    if nx < 2 or ny < 2:
        raise ValidationError("grid sizes must be at least 2")
    if abs(B - vfn.B) > 1e-12:
        raise ValidationError("B disagrees with the vorticity domain")
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params must be an object", path="params")
    return RunConfig(vfn=vfn, g=g, B=B, L=L, nx=nx, ny=ny, tol=tol,
                     seed=seed, out=doc.get("out", "."), params=params)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _emit(pairs):
    for k, v in pairs:
        print("%s = %s" % (k, _fmt(v)))


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(repr(o))


def _write(cfg, name, text):
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _load_field(cfg, key="field"):
    path = cfg.params.get(key)
    if not path:
        raise ValidationError("params.%s (wave-field CSV path) is required" % key)
    if not os.path.exists(path):
        raise ValidationError("input file %r does not exist" % path)
    with open(path) as fh:
        return fieldmod.WaveField.from_csv(fh.read())


def _multiplier(cfg):
    spec = cfg.params.get("lambda")
    if spec is None:
        return pressure.zero_multiplier(cfg.B)
    return pressure.MultiplierFn(fn=vorticity.VorticityFn.from_dict(spec))


# ---------------------------------------------------------------------------
# subcommand implementations; each returns 0 or 3


def cmd_vort_hat(cfg):
    r = float(cfg.params.get("r", cfg.B))
    val = vorticity.gamma_hat(cfg.vfn, r)
    _emit([("gamma_hat", val)])
    return 0


def cmd_vort_jhb(cfg):
    res = vorticity.check_jhb(cfg.vfn, cfg.g, cfg.L)
    _emit(sorted(res.items()))
    return 0 if res["holds"] else 3


def cmd_vort_qbound(cfg):
    res = vorticity.cs_q_bound(cfg.vfn, cfg.g)
    lam0 = res["lambda0"]
    _emit([("lambda0", lam0), ("f_lambda0", res["f_of"](lam0))])
    return 0


def cmd_vort_zxc(cfg):
    ok = vorticity.check_zxc_hypotheses(cfg.vfn)
    _emit([("holds", ok)])
    return 0 if ok else 3


def cmd_laminar_extreme(cfg):
    lam = laminar.trivial_extreme(cfg.vfn, cfg.g)
    wf = fieldmod.laminar_to_field(lam, cfg.L, cfg.nx, cfg.ny)
    path = _write(cfg, "extreme_wave.csv", wf.to_csv())
    _emit([("depth", lam.depth), ("Q", lam.Q), ("csv", path)])
    return 0


def cmd_laminar_regular(cfg):
    Q = cfg.params.get("Q")
    if Q is None:
        raise ValidationError("params.Q is required")
    lam = laminar.laminar_regular(cfg.vfn, cfg.g, float(Q),
                                  root=cfg.params.get("root", "largest"))
    wf = fieldmod.laminar_to_field(lam, cfg.L, cfg.nx, cfg.ny)
    path = _write(cfg, "laminar_wave.csv", wf.to_csv())
    _emit([("depth", lam.depth), ("surface_speed", lam.surface_speed),
           ("csv", path)])
    return 0


def cmd_field_residuals(cfg):
    wf = _load_field(cfg)
    rep = fieldmod.strong_residuals(wf, cfg.vfn)
    _write(cfg, "residuals.json", rep.to_json())
    _emit(sorted((k, e.sup) for k, e in rep.entries.items()))
    return 0 if rep.max_sup() <= cfg.tol else 3


def cmd_field_weak(cfg):
    wf = _load_field(cfg)
    center = cfg.params.get("center")
    radius = cfg.params.get("radius")
    if center is None or radius is None:
        raise ValidationError("params.center and params.radius are required")
    bump = fieldmod.Bump(center=tuple(float(c) for c in center),
                         radius=float(radius))
    val = fieldmod.weak_residual(wf, bump, cfg.vfn)
    _emit([("weak_residual", val)])
    return 0 if abs(val) <= cfg.tol else 3


def cmd_field_shift(cfg):
    wf = _load_field(cfg)
    G = float(cfg.params.get("G", wf.Q / (2.0 * wf.g)))
    out = fieldmod.shift_datum(wf, G)
    path = _write(cfg, "shifted_wave.csv", out.to_csv())
    _emit([("G", G), ("Q", out.Q), ("csv", path)])
    return 0


def cmd_field_stagnation(cfg):
    wf = _load_field(cfg)
    pts = fieldmod.stagnation_points(wf, cfg.tol)
    _emit([("count", len(pts))])
    for x, y in pts[:20]:
        _emit([("point", [x, y])])
    return 0


def cmd_pressure_head(cfg):
    wf = _load_field(cfg)
    kind = cfg.params.get("kind", "R")
    ph = pressure.pressure_head(wf, cfg.vfn, kind, lam=_multiplier(cfg))
    _emit([("kind", kind), ("max", ph.max_value), ("max_loc", list(ph.max_loc)),
           ("min", ph.min_value), ("varpi", ph.varpi)])
    return 0


def cmd_pressure_sperb(cfg):
    wf = _load_field(cfg)
    res = pressure.sperb_residual(wf, cfg.vfn, _multiplier(cfg))
    _emit([("sup", res["residual"].sup), ("l2", res["residual"].l2),
           ("excluded_nodes", res["excluded_nodes"])])
    return 0 if res["residual"].sup <= cfg.tol else 3


def cmd_pressure_nqt(cfg):
    wf = _load_field(cfg)
    res = pressure.nqt_check(wf, cfg.vfn)
    _emit(sorted(res.items()))
    return 0 if res["holds"] else 3


def cmd_pressure_sqrtfit(cfg):
    wf = _load_field(cfg)
    K = pressure.sqrt_bound_fit(wf)
    _emit([("K", K)])
    return 0


def cmd_wavegen_continue(cfg):
    targets = cfg.params.get("targets")
    if targets is None:
        raise ValidationError("params.targets (amplitude list) is required")
    fam = wavegen.continue_family(cfg.vfn, cfg.g, cfg.L,
                                  [float(a) for a in targets],
                                  nx=cfg.params.get("nx", 17),
                                  ny=cfg.params.get("ny", 17))
    paths = []
    for k, wf in enumerate(fam.members):
        paths.append(_write(cfg, "member_%03d.csv" % k, wf.to_csv()))
    _write(cfg, "family.json", fam.manifest(paths=paths))
    _emit([("members", len(fam)),
           ("amplitudes", list(fam.amplitudes)),
           ("Q", [d["Q"] for d in fam.diagnostics])])
    return 0


def cmd_wavegen_diagnose(cfg):
    manifest = cfg.params.get("manifest")
    if not manifest or not os.path.exists(manifest):
        raise ValidationError("params.manifest (family JSON path) is required")
    with open(manifest) as fh:
        docs = json.load(fh)
    members, amps, diags = [], [], []
    for doc in docs:
        with open(doc["path"]) as fh:
            members.append(fieldmod.WaveField.from_csv(fh.read()))
        amps.append(doc["amplitude"])
        diags.append({k: v for k, v in doc.items()
                      if k not in ("path", "amplitude")})
    fam = wavegen.ContinuationFamily(members=tuple(members),
                                     amplitudes=tuple(amps),
                                     diagnostics=tuple(diags))
    rep = wavegen.exi_diagnostics(fam)
    _write(cfg, "diagnostics.json",
           json.dumps(rep, sort_keys=True, default=_json_default))
    _emit([("sup_Q", rep["sup_Q"]),
           ("min_trough_height", rep["min_trough_height"]),
           ("max_gradient", rep["max_gradient"])])
    return 0 if rep["min_trough_height"] > 0 else 3


def _flow_from_params(cfg):
    p = cfg.params
    if "alpha_p" in p or "alpha_m" in p:
        ap = float(p.get("alpha_p", 0.0))
        am = float(p.get("alpha_m", 0.0))
        beta = p.get("beta")
        beta = blowup.matched_beta(ap, am, cfg.g) if beta is None else float(beta)
        return blowup.corner_family(ap, am, beta, cfg.g)
    return blowup.stokes_corner(cfg.g)


def cmd_blowup_corner(cfg):
    flow = blowup.stokes_corner(cfg.g)
    wf = blowup.corner_window_field(flow, nx=cfg.nx, ny=cfg.ny)
    path = _write(cfg, "stokes_corner.csv", wf.to_csv())
    _emit([("beta", flow.beta), ("psi_at_0_-1", flow.psi(0.0, -1.0)),
           ("csv", path)])
    return 0


def cmd_blowup_family(cfg):
    flow = _flow_from_params(cfg)
    wf = blowup.corner_window_field(flow, nx=cfg.nx, ny=cfg.ny)
    path = _write(cfg, "corner_family.csv", wf.to_csv())
    _emit([("exponent", flow.exponent), ("beta", flow.beta), ("csv", path)])
    return 0


def cmd_blowup_verify(cfg):
    flow = _flow_from_params(cfg)
    rep = blowup.verify_blow(flow)
    _write(cfg, "verify_blow.json", rep.to_json())
    _emit(sorted((k, e.sup) for k, e in rep.entries.items()))
    return 0 if rep.max_sup() <= cfg.tol else 3


def cmd_blowup_rescale(cfg):
    eps = float(cfg.params.get("eps", 0.1))
    src = cfg.params.get("field")
    if src:
        source = _load_field(cfg)
    else:
        source = _flow_from_params(cfg)
    frame = blowup.rescale(source, eps)
    _emit([("eps", eps), ("sup", frame.sup)])
    return 0


def cmd_blowup_angle(cfg):
    src = cfg.params.get("field")
    if src:
        wf = _load_field(cfg)
        prof = wf.surface_profile()
    else:
        prof = _flow_from_params(cfg).surface_profile(n=2001)
    res = blowup.corner_angle(prof)
    _emit(sorted(res.items()))
    return 0 if res["classification"] != "inconclusive" else 3


def cmd_blowup_cone(cfg):
    p = cfg.params
    half = float(p.get("half_aperture", np.pi / 3))
    src = p.get("field")
    source = _load_field(cfg) if src else _flow_from_params(cfg)
    res = blowup.oddson_cone_check(source, half_aperture=half,
                                   r0=float(p.get("r0", 1.0)))
    _emit([("violation", res["violation"]),
           ("kappa", res["kappa"] if res["kappa"] is not None else "none")])
    return 0 if not res["violation"] else 3


def cmd_theta_quad(cfg):
    xs = cfg.params.get("x", [0.1, 1.0, 10.0])
    rows = []
    ok = True
    for x in xs:
        val = inteq.log_kernel_integral(float(x), lambda y: 1.0 / y)
        rows.append((("kernel_identity_at_%g" % x), val))
        ok = ok and abs(val - np.pi ** 2 / 2) <= cfg.tol
    _emit(rows)
    return 0 if ok else 3


def _theta_init(cfg, x):
    kind = cfg.params.get("init", "const")
    if kind == "const":
        return np.full_like(x, float(cfg.params.get("value", np.pi / 4)))
    if kind == "ramp":
        return (np.pi / 2) * x / (1.0 + x)
    if kind == "random":
        rng = np.random.default_rng(cfg.seed)
        return rng.uniform(0.05, np.pi / 2, x.size)
    raise ValidationError("unknown init kind %r" % kind)


def cmd_theta_solve(cfg):
    x = inteq.make_grid(n=int(cfg.params.get("n", 2048)))
    sol, log = inteq.solve_theta(_theta_init(cfg, x), x=x,
                                 tol=float(cfg.params.get("solve_tol", 1e-10)),
                                 omega=float(cfg.params.get("omega", 0.5)))
    _write(cfg, "theta.csv", sol.to_csv())
    _write(cfg, "theta_log.json", json.dumps(log, default=_json_default))
    err = float(np.max(np.abs(sol.theta - np.pi / 6)))
    _emit([("iterations", len(log)), ("sup_error_vs_pi_over_6", err)])
    return 0 if err <= 1e-5 else 3


def cmd_theta_vsq(cfg):
    x = inteq.make_grid(n=int(cfg.params.get("n", 2048)))
    sol = inteq.ThetaSolution(x=x, theta=_theta_init(cfg, x))
    res = inteq.vsq_bound_check(sol)
    _emit(sorted(res.items()))
    return 0 if res["one_step_holds"] else 3


def cmd_theta_reconstruct(cfg):
    x = inteq.make_grid(n=int(cfg.params.get("n", 2048)))
    theta = np.full_like(x, float(cfg.params.get("value", np.pi / 6)))
    rb = inteq.reconstruct_surface(inteq.ThetaSolution(x=x, theta=theta),
                                   g=cfg.g)
    path = _write(cfg, "boundary.csv", rb.to_csv())
    dev = float(np.max(np.abs(rb.V + np.abs(rb.U) / np.sqrt(3.0))))
    _emit([("max_dev_from_stokes_profile", dev), ("csv", path)])
    return 0


_COMMANDS = {
    ("vort", "hat"): cmd_vort_hat,
    ("vort", "jhb"): cmd_vort_jhb,
    ("vort", "qbound"): cmd_vort_qbound,
    ("vort", "zxc"): cmd_vort_zxc,
    ("laminar", "extreme"): cmd_laminar_extreme,
    ("laminar", "regular"): cmd_laminar_regular,
    ("field", "residuals"): cmd_field_residuals,
    ("field", "weak"): cmd_field_weak,
    ("field", "shift"): cmd_field_shift,
    ("field", "stagnation"): cmd_field_stagnation,
    ("pressure", "head"): cmd_pressure_head,
    ("pressure", "sperb"): cmd_pressure_sperb,
    ("pressure", "nqt"): cmd_pressure_nqt,
    ("pressure", "sqrtfit"): cmd_pressure_sqrtfit,
    ("wavegen", "continue"): cmd_wavegen_continue,
    ("wavegen", "diagnose"): cmd_wavegen_diagnose,
    ("blowup", "corner"): cmd_blowup_corner,
    ("blowup", "family"): cmd_blowup_family,
    ("blowup", "verify"): cmd_blowup_verify,
    ("blowup", "rescale"): cmd_blowup_rescale,
    ("blowup", "angle"): cmd_blowup_angle,
    ("blowup", "cone"): cmd_blowup_cone,
    ("theta", "quad"): cmd_theta_quad,
    ("theta", "solve"): cmd_theta_solve,
    ("theta", "vsq"): cmd_theta_vsq,
    ("theta", "reconstruct"): cmd_theta_reconstruct,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="wavecrest",
                                 description="steady water waves laboratory")
    ap.add_argument("--config", help="JSON configuration file")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--grid", help="grid as NxM")
    ap.add_argument("--tol", type=float, help="tolerance override")
    ap.add_argument("--seed", type=int, help="seed override")
    sub = ap.add_subparsers(dest="group", required=True)
    groups = {}
    for (group, verb) in _COMMANDS:
        if group not in groups:
            gp = sub.add_parser(group)
            groups[group] = gp.add_subparsers(dest="verb", required=True)
        groups[group].add_parser(verb)
    return ap


def main(argv=None):
    threads = os.environ.get("VWL_THREADS")
    if threads and threads != "0":
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            if not os.path.exists(args.config):
                raise ValidationError("config file %r does not exist"
                                      % args.config)
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        else:
            cfg = RunConfig(vfn=vorticity.poly_vorticity([-1.0], B=1.0))
        if args.out:
            cfg = replace(cfg, out=args.out)
        if args.grid:
            nx, ny = _parse_grid(args.grid)
            cfg = replace(cfg, nx=nx, ny=ny)
        if args.tol is not None:
            if not (0.0 < args.tol < 1.0):
                raise ValidationError("tol must lie in (0, 1)")
            cfg = replace(cfg, tol=args.tol)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        return _COMMANDS[(args.group, args.verb)](cfg)
    except (SchemaError, ValidationError) as e:
        print("configuration error: %s" % e, file=sys.stderr)
        return 1
    except WavecrestError as e:
        print("computation error: %s: %s" % (type(e).__name__, e),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
