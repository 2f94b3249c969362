"""Command line batch runner: one subcommand per checked property.

Every run writes ``<out>/<scenario>.json`` with the schema

    {scenario, params, checks: [{name, anchor, kind, value, tolerance, pass}], artifacts}

and exits 0 if every check passes, 1 if one fails and 2 on a usage error.
Reports contain no timestamps so identical ``(scenario, seed)`` runs are
byte-identical; wall time goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import config
from .cartan import BundlePoint, CartanBundle, stabilizer_basis, imaginary_stabilizer
from .errors import CartanGitError, ConfigError
from .hamiltonian import LinearAction, ProjectivePoint
from .lie_core import sl_su_pair, torus_pair

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- reports ------------------------------------------------------------------------


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


@dataclass
class Report:
    scenario: str
    params: dict
    checks: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    tol_override: float | None = None

    def check(self, name: str, anchor: str, value: float, tolerance: float, kind: str = "max"):
        """Record a check; ``kind`` is ``max`` (value <= tol), ``min`` (value >= tol) or ``eq``."""
        if kind == "max" and self.tol_override is not None:
            tolerance = self.tol_override
        value = float(value)
        if kind == "max":
            ok = value <= tolerance
        elif kind == "min":
            ok = value >= tolerance
        elif kind == "eq":
            ok = value == tolerance
        else:
            raise ValueError(kind)
        self.checks.append({"name": name, "anchor": anchor, "kind": kind, "value": value,
                            "tolerance": float(tolerance), "pass": bool(ok)})
        return ok

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> str:
        body = {"scenario": self.scenario, "params": self.params, "checks": self.checks,
                "artifacts": self.artifacts}
        if self.extra:
            body["result"] = self.extra
        return json.dumps(_clean(body), indent=2, sort_keys=True) + "\n"


# -- parsing helpers ---------------------------------------------------------------


def parse_vector(text: str) -> np.ndarray:
    try:
        v = np.array([complex(t.strip().replace("i", "j")) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc
    if np.linalg.norm(v) == 0:
        raise UsageError("vector must be nonzero")
    return v


def parse_weights(text: str) -> np.ndarray:
    """``"1,-1"`` is a rank-one torus on C^2; ``"1,1;-1,1"`` lists one row per coordinate."""
    try:
        if ";" in text:
            rows = [[int(t) for t in r.split(",")] for r in text.split(";")]
            W = np.array(rows, dtype=int)
        else:
            W = np.array([int(t) for t in text.split(",")], dtype=int)[:, None]
    except ValueError as exc:
        raise UsageError(f"cannot parse weights {text!r}") from exc
    if W.ndim != 2 or W.size == 0:
        raise UsageError("weights must form a rectangular integer matrix")
    return W


def parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse numbers {text!r}") from exc


def torus_bundle(weights: str, vector: str, shift: str | None = None) -> CartanBundle:
    W = parse_weights(weights)
    v = parse_vector(vector)
    if len(v) != W.shape[0]:
        raise UsageError(f"vector has {len(v)} entries but weights describe C^{W.shape[0]}")
    sh = parse_floats(shift) if shift else None
    if sh is not None and len(sh) != W.shape[1]:
        raise UsageError("shift length must equal the torus rank")
    act = LinearAction(torus_pair(W.shape[1]), W, sh)
    return CartanBundle(act, ProjectivePoint(v))


def sl2_bundle(vector: str) -> CartanBundle:
    v = parse_vector(vector)
    if len(v) != 2:
        raise UsageError("the sl2 example acts on C^2")
    return CartanBundle(LinearAction(sl_su_pair(2)), ProjectivePoint(v))


def build_bundle(args) -> CartanBundle:
    if args.group == "sl2":
        return sl2_bundle(args.vector or "1,0")
    return torus_bundle(args.weights, args.vector or "1,1", getattr(args, "shift", None))


def _gate(report: Report, bundle: CartanBundle, seed: int, samples: int = 100):
    cert = bundle.certify(samples, seed)
    report.check("a-equivariance certificate", "a-equivariance of the momentum map",
                 cert.max_defect, config.EQUIVARIANCE_TOL)
    return cert


def _out(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


# -- scenarios --------------------------------------------------------------------


def run_certify(args, rep: Report):
    from .hamiltonian import cocycle_sigma, momentum_defect, random_point, random_tangent
    from .lie_core import random_g, random_unitary
    b = build_bundle(args)
    rng = np.random.default_rng(args.seed)
    act = b.action
    worst_m, worst_s = 0.0, 0.0
    for _ in range(args.samples):
        m = random_point(act.dim_v, rng)
        worst_m = max(worst_m, momentum_defect(act, m, random_g(act.klein, rng), random_tangent(m, rng)))
        worst_s = max(worst_s, float(np.linalg.norm(cocycle_sigma(act, random_unitary(act.klein, rng), m))))
    rep.check("momentum defining relation", "defining relation of the momentum map",
              worst_m, config.MOMENTUM_DEFECT_TOL)
    rep.check("equivariance cocycle", "non-equivariance cocycle vanishes", worst_s, config.COCYCLE_TOL)
    _gate(rep, b, args.seed, args.samples)


def run_futaki_constancy(args, rep: Report):
    from .futaki_extremal import futaki_constancy
    b = build_bundle(args)
    _gate(rep, b, args.seed)
    zeta = np.diag(parse_floats(args.zeta)).astype(complex)
    r = futaki_constancy(b, zeta, args.samples, args.radius, args.seed)
    rep.extra.update(r.to_json())
    rep.check("relative spread", "Futaki character is locally constant", r.relative_spread(),
              config.FUTAKI_SPREAD_REL)


def run_futaki_character(args, rep: Report):
    from .futaki_extremal import character_defect, futaki_constancy
    b = sl2_bundle(args.vector or "1,0")
    _gate(rep, b, args.seed)
    H = np.diag([1.0, -1.0]).astype(complex)
    E = np.array([[0, 1], [0, 0]], complex)
    rep.check("|F(nilpotent)|", "Futaki invariant is a Lie algebra character",
              np.max(np.abs(futaki_constancy(b, E, args.samples, 1.0, args.seed).values)),
              config.CHARACTER_TOL)
    rep.check("|F([H, E])|", "Futaki invariant is a Lie algebra character",
              character_defect(b, H, E, args.samples, 1.0, args.seed), config.CHARACTER_TOL)


def run_kn_profile(args, rep: Report):
    from .kempf_ness import GeodesicRay, convexity_reference, kn_lifted, kn_profile
    b = build_bundle(args)
    _gate(rep, b, args.seed)
    d = np.diag(parse_floats(args.direction)).astype(complex)
    ts = np.linspace(0.0, args.tmax, args.points)
    ray = GeodesicRay(b, b.identity(), d, ts)
    prof = kn_profile(ray)
    closed = np.array([kn_lifted(b.action, ray.point(t).a, b.basepoint) for t in ts])
    rep.check("line integral vs closed form", "Kempf-Ness function two ways",
              np.max(np.abs(prof.psi - (closed - closed[0]))), config.KN_CLOSED_FORM_TOL)
    rep.check("min second derivative", "convexity along geodesics", np.min(prof.d2psi),
              config.CONVEXITY_FLOOR, kind="min")
    rep.check("second derivative vs |xi.m|^2", "convexity along geodesics",
              np.max(np.abs(prof.d2psi - convexity_reference(ray))), config.CONVEXITY_MATCH)
    path = _out(args, "kn_profile.csv")
    prof.to_csv(path)
    rep.artifacts.append(os.path.basename(path))


def run_slope(args, rep: Report):
    from .kempf_ness import GeodesicRay, slope
    b = build_bundle(args)
    d = np.diag(parse_floats(args.direction)).astype(complex)
    s = slope(GeodesicRay(b, b.identity(), d, [0.0]))
    rep.extra["slope"] = s
    if b.action.weights is not None:
        W = b.action.effective_weights
        supp = np.abs(b.basepoint.v) > 1e-12
        expected = float(np.max(W[supp] @ np.real(np.diag(d))))
        rep.extra["max_weight"] = expected
        rep.check("slope - max support weight", "slope of a geodesic ray", abs(s - expected),
                  config.SLOPE_TOL)


def run_stability(args, rep: Report):
    from .kempf_ness import classify_stability, hm_oracle_torus
    b = build_bundle(args)
    _gate(rep, b, args.seed)
    verdict = classify_stability(b, radius=args.radius)
    rep.extra.update(verdict.to_json())
    if b.action.weights is not None:
        oracle = hm_oracle_torus(b.action.weights, b.basepoint, b.action.shift)
        rep.extra["oracle"] = oracle.to_json()
        rep.check("label agrees with weight-polytope oracle", "stability via slopes of geodesic rays",
                  float(verdict.label == oracle.label), 1.0, kind="eq")


def run_descend(args, rep: Report):
    from .errors import NonConvergenceError
    from .kempf_ness import find_momentum_zero, momentum_residual, unique_mod_stabilizer_defect
    b = build_bundle(args)
    _gate(rep, b, args.seed)
    starts = [s for s in args.starts.split(";")] if args.starts else ["0"]
    zeros = []
    for s in starts:
        logd = parse_floats(s)
        if len(logd) == 1:
            logd = np.full(b.n, logd[0])
        if len(logd) != b.n:
            raise UsageError(f"start needs {b.n} log-moduli")
        try:
            p = find_momentum_zero(b, BundlePoint(np.diag(np.exp(logd))), args.tol_zero, args.max_iter)
        except NonConvergenceError as exc:
            rep.extra["nonconvergence"] = str(exc)
            rep.check("momentum zero found", "critical points are momentum zeros", 0.0, 1.0, kind="eq")
            return
        zeros.append(p)
        rep.check("momentum residual", "critical points are momentum zeros",
                  momentum_residual(b, p), config.MOMENTUM_ZERO_TOL)
    for p in zeros[1:]:
        rep.check("uniqueness modulo stabilizer", "momentum zeros are unique up to the stabilizer",
                  unique_mod_stabilizer_defect(b, zeros[0], p, seed=args.seed), config.UNIQUENESS_TOL)
    rep.extra["zeros"] = [{"re": np.round(p.a.real, 12), "im": np.round(p.a.imag, 12)} for p in zeros]


def run_extremal(args, rep: Report):
    from .futaki_extremal import extremal_element, extremal_residual, momentum_projection, xi_form
    b = build_bundle(args)
    _gate(rep, b, args.seed)
    basis = imaginary_stabilizer(b, stabilizer_basis(b))
    form = xi_form(b, b.identity(), basis)
    z = extremal_element(b, basis, form)
    rep.extra["extremal"] = {"re": np.round(z.real, 12), "im": np.round(z.imag, 12)}
    rep.check("extremal residual", "extremal element represents the Futaki character",
              extremal_residual(b, basis, form, z), config.EXTREMAL_RESIDUAL)
    rep.check("agrees with momentum projection", "extremal element is a projection of the momentum",
              float(np.linalg.norm(z - momentum_projection(b, basis))), config.EXTREMAL_RESIDUAL)


def run_cp1_futaki(args, rep: Report):
    from .kahler_cp1 import SymplecticPotential1D, futaki_cp1, random_perturbation, scalar_curvature
    fs = SymplecticPotential1D.fubini_study(args.n)
    rep.check("Fubini-Study |S - 2|", "scalar curvature of the round metric",
              np.max(np.abs(scalar_curvature(fs) - 2.0)), config.CP1_SCALAR_TOL)
    rng = np.random.default_rng(args.seed)
    vals = [abs(futaki_cp1(random_perturbation(rng, args.n))) for _ in range(args.samples)]
    rep.check("max |Futaki|", "Futaki invariant of CP^1 vanishes", max(vals), config.CP1_FUTAKI_TOL)


def run_cp1_kenergy(args, rep: Report):
    from .kahler_cp1 import (SymplecticPotential1D, bent_path, bump, k_energy_entropy_form, k_energy_closed_form,
                             k_energy_line_integral, linear_path, random_perturbation, reparametrized_path,
                             write_potential_csv)
    fs = SymplecticPotential1D.fubini_study(args.n)
    u1 = bump(args.n, args.amplitude)
    bend = random_perturbation(np.random.default_rng(args.seed), args.n)
    e_lin = k_energy_line_integral(linear_path(fs, u1))
    e_rep = k_energy_line_integral(reparametrized_path(fs, u1))
    e_bent = k_energy_line_integral(bent_path(fs, u1, bend))
    ct = k_energy_entropy_form(u1)
    rep.extra.update({"line_integral": e_lin, "entropy_form": ct.value, "closed_form": k_energy_closed_form(u1),
                      "entropy": ct.entropy, "s0_am": ct.s0_am, "minus_am_ric": ct.minus_am_ric})
    rep.check("path independence", "K-energy as a line integral is exact",
              max(abs(e_lin - e_rep), abs(e_lin - e_bent)), config.CP1_PATH_INDEPENDENCE)
    rep.check("line integral vs entropy formula", "explicit K-energy formula",
              abs(e_lin - ct.value) / (1 + abs(e_lin)), config.CP1_CROSS_FORMULA_REL)
    rep.check("K-energy above the round metric", "round metric minimizes the K-energy", e_lin, 0.0, kind="min")
    path = _out(args, "potential.csv")
    write_potential_csv(u1, path)
    rep.artifacts.append(os.path.basename(path))


def run_cp1_geodesic(args, rep: Report):
    from .kahler_cp1 import (bump, geodesic_equation_residual, k_energy_entropy_form, linear_path,
                             random_perturbation, reparametrized_path, toric_geodesic)
    n = args.n
    rng = np.random.default_rng(args.seed)
    u0, u1 = random_perturbation(rng, n), bump(n, args.amplitude)
    r1 = geodesic_equation_residual(linear_path(u0, u1), n)
    r2 = geodesic_equation_residual(linear_path(u0, u1), 2 * n)
    control = geodesic_equation_residual(reparametrized_path(u0, u1), n)
    rep.extra.update({"residual_n": r1, "residual_2n": r2, "control_residual": control})
    lo, hi = config.CP1_ORDER_RATIO
    rep.check("residual ratio on refinement", "metric geodesic equation", r1 / r2, lo, kind="min")
    rep.check("residual ratio upper bound", "metric geodesic equation", r1 / r2, hi)
    rep.check("reparametrized control is not a geodesic", "metric geodesic equation", control, 100 * r1,
              kind="min")
    worst = 0.0
    for _ in range(args.samples):
        a, b = random_perturbation(rng, n), random_perturbation(rng, n)
        e = [k_energy_entropy_form(toric_geodesic(a, b, t)).value for t in np.linspace(0, 1, 11)]
        worst = min(worst, float(np.min(np.diff(e, 2))))
    rep.check("min second difference of K-energy", "K-energy is convex along geodesics", worst,
              config.CP1_CONVEXITY_FLOOR, kind="min")


def run_cp1_descend(args, rep: Report):
    from .kahler_cp1 import bump, k_energy_descent
    res = k_energy_descent(bump(args.n, args.amplitude), iters=args.iters)
    path = _out(args, "cp1_descent.csv")
    res.to_csv(path)
    rep.artifacts.append(os.path.basename(path))
    es = [e for _, e, _ in res.history]
    rep.check("final sup |S - S0|", "constant scalar curvature is the momentum zero", res.sup_defect,
              config.CP1_DESCENT_TARGET)
    rep.check("iterations", "constant scalar curvature is the momentum zero", len(res.history) - 1,
              args.iters)
    rep.check("max energy increase", "descent decreases the K-energy",
              max(np.diff(es), default=0.0), 0.0)


def run_density_geodesic(args, rep: Report):
    from .wasserstein_1d import (DensityOnCircle, PotentialFunction, continuity_residual, density_trajectory,
                                 mass_drift, write_trajectory_csv)
    res = []
    for n, dt in ((args.n, args.dt), (2 * args.n, args.dt / 2)):
        rho0 = DensityOnCircle.uniform(n)
        f = PotentialFunction.from_function(np.cos, n)
        ts = np.linspace(0.0, args.horizon, int(round(args.horizon / dt)) + 1)
        traj = density_trajectory(rho0, f, ts)
        res.append((ts, traj, f))
    ts, traj, f = res[0]
    r1 = continuity_residual(ts, traj, f)
    r2 = continuity_residual(*res[1])
    rep.extra.update({"residual": r1, "residual_halved": r2})
    rep.check("mass drift", "pushforward conserves mass", max(mass_drift(traj), mass_drift(res[1][1])),
              config.MASS_DRIFT_TOL)
    rep.check("continuity residual", "continuity equation", r1, config.CONTINUITY_TOL)
    lo, hi = config.CONTINUITY_ORDER_RATIO
    rep.check("halving ratio", "continuity equation", r1 / r2, lo, kind="min")
    rep.check("halving ratio upper bound", "continuity equation", r1 / r2, hi)
    path = _out(args, "density_trajectory.csv")
    stride = max(1, (len(ts) - 1) // 10)
    write_trajectory_csv(ts[::stride], traj[::stride], path)
    rep.artifacts.append(os.path.basename(path))


# -- registry ----------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    anchor: str
    runner: object
    defaults: dict


def _group_opts(p, group="torus", weights="1,-1", vector=None, shift=None):
    p.add_argument("--group", choices=["torus", "sl2"], default=group)
    p.add_argument("--weights", default=weights, help="torus weights, rows separated by ';'")
    p.add_argument("--vector", default=vector, help="base point, comma separated (complex allowed)")
    p.add_argument("--shift", default=shift, help="torus momentum shift, one entry per generator")


SCENARIOS: dict[str, Scenario] = {}


def _register(name, description, anchor, runner, configure):
    SCENARIOS[name] = Scenario(name, description, anchor, runner, {"configure": configure})


_register("certify", "momentum relation, equivariance and a-equivariance certificate",
          "defining relation of the momentum map", run_certify,
          lambda p: (_group_opts(p, group="sl2"), p.add_argument("--samples", type=int, default=100)))
_register("futaki-constancy", "Futaki character sampled over the base", "Futaki character is locally constant",
          run_futaki_constancy,
          lambda p: (_group_opts(p, group="sl2"), p.add_argument("--samples", type=int, default=50),
                     p.add_argument("--radius", type=float, default=1.0),
                     p.add_argument("--zeta", default="1,-1", help="diagonal stabilizer element")))
_register("futaki-character", "Futaki values on brackets of the Borel stabilizer",
          "Futaki invariant is a Lie algebra character", run_futaki_character,
          lambda p: (p.add_argument("--vector", default="1,0"), p.add_argument("--samples", type=int, default=10)))
_register("kn-profile", "Kempf-Ness function along a ray, with convexity", "convexity along geodesics",
          run_kn_profile,
          lambda p: (_group_opts(p), p.add_argument("--direction", default="1"),
                     p.add_argument("--tmax", type=float, default=2.0),
                     p.add_argument("--points", type=int, default=21)))
_register("slope", "asymptotic slope of a geodesic ray", "slope of a geodesic ray", run_slope,
          lambda p: (_group_opts(p), p.add_argument("--direction", default="1")))
_register("stability", "stability from sampled slopes vs the weight polytope",
          "stability via slopes of geodesic rays", run_stability,
          lambda p: (_group_opts(p), p.add_argument("--radius", type=int, default=5)))
_register("descend", "gradient descent to a momentum zero, uniqueness modulo stabilizer",
          "momentum zeros are unique up to the stabilizer", run_descend,
          lambda p: (_group_opts(p, weights="1,1;-1,1", shift="0,1"),
                     p.add_argument("--starts", default="0.7,-1.3;-0.4,2.0",
                                    help="log-moduli of diagonal start points, ';' separated"),
                     p.add_argument("--tol-zero", type=float, default=config.MOMENTUM_ZERO_TOL),
                     p.add_argument("--max-iter", type=int, default=500)))
_register("extremal", "extremal element on the imaginary stabilizer", "extremal element", run_extremal,
          lambda p: _group_opts(p, vector="1,0"))
_register("cp1-futaki", "round scalar curvature and vanishing Futaki integral on CP^1",
          "Futaki invariant of CP^1 vanishes", run_cp1_futaki,
          lambda p: (p.add_argument("--n", type=int, default=512), p.add_argument("--samples", type=int, default=20)))
_register("cp1-kenergy", "K-energy by line integral, entropy formula and closed form",
          "explicit K-energy formula", run_cp1_kenergy,
          lambda p: (p.add_argument("--n", type=int, default=512),
                     p.add_argument("--amplitude", type=float, default=0.05)))
_register("cp1-geodesic", "geodesic equation residual and K-energy convexity", "metric geodesic equation",
          run_cp1_geodesic,
          lambda p: (p.add_argument("--n", type=int, default=256),
                     p.add_argument("--amplitude", type=float, default=0.05),
                     p.add_argument("--samples", type=int, default=20)))
_register("cp1-descend", "preconditioned K-energy descent to the round metric",
          "constant scalar curvature is the momentum zero", run_cp1_descend,
          lambda p: (p.add_argument("--n", type=int, default=256),
                     p.add_argument("--amplitude", type=float, default=0.05),
                     p.add_argument("--iters", type=int, default=config.CP1_DESCENT_MAX_ITER)))
_register("density-geodesic", "density pushforward and the continuity equation", "continuity equation",
          run_density_geodesic,
          lambda p: (p.add_argument("--n", type=int, default=256), p.add_argument("--dt", type=float, default=1e-3),
                     p.add_argument("--horizon", type=float, default=0.25)))


def list_scenarios() -> str:
    width = max(len(n) for n in SCENARIOS)
    lines = [f"{s.name:<{width}}  {s.description}  [{s.anchor}]" for s in SCENARIOS.values()]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory for reports and CSV files")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override upper-bound tolerances")
    parser = argparse.ArgumentParser(prog="cartan-git", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print the scenario registry")
    p_all = sub.add_parser("all", parents=[common], help="run every scenario with defaults")
    p_all.add_argument("--jobs", type=int, default=1)
    for s in SCENARIOS.values():
        p = sub.add_parser(s.name, parents=[common], help=s.description)
        s.defaults["configure"](p)
    return parser


def run_scenario(name: str, args) -> Report:
    if name not in SCENARIOS:
        raise UsageError(f"unknown scenario {name!r}")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out", "jobs")}
    rep = Report(name, params, tol_override=args.tol)
    SCENARIOS[name].runner(args, rep)
    with open(_out(args, f"{name}.json"), "w") as fh:
        fh.write(rep.to_json())
    return rep


def _run_default(job):
    name, out, seed, tol = job
    args = build_parser().parse_args([name, "--out", out, "--seed", str(seed)]
                                     + (["--tol", str(tol)] if tol is not None else []))
    return name, run_scenario(name, args).passed


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "list":
        sys.stdout.write(list_scenarios())
        return EXIT_OK
    t0 = time.perf_counter()
    try:
        if args.command == "all":
            if args.jobs < 1:
                raise UsageError("--jobs must be at least 1")
            jobs = [(n, args.out, args.seed, args.tol) for n in SCENARIOS]
            if args.jobs == 1:
                results = [_run_default(j) for j in jobs]
            else:
                with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                    results = list(ex.map(_run_default, jobs))
            for name, ok in results:
                sys.stdout.write(f"{name:<18} {'pass' if ok else 'FAIL'}\n")
            ok = all(r for _, r in results)
        else:
            rep = run_scenario(args.command, args)
            sys.stdout.write(rep.to_json())
            ok = rep.passed
    except (UsageError, ConfigError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except CartanGitError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    sys.stderr.write(f"wall time {time.perf_counter() - t0:.2f} s\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
