"""Command-line interface.

Exit codes: 0 success, 1 a self-check or identity check failed its
tolerance, 2 invalid input, 3 a numerical procedure did not converge.
Complex flags are written ``re,im``; JSON complex values are
``{"re": ..., "im": ...}``. See docs/schema.md for every output key.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, extcore, halfline, linrel, planar
from .errors import ConvergenceError, DomainError, ModelError, SectoriumError, SingularPointError
from .roots import Rect, find_roots_region
from .specfun import QuadratureSpec

try:  # Python >= 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_CONVERGENCE = 0, 1, 2, 3
ENV_QUAD_TOL = "SECTORIUM_QUAD_TOL"
SCHEMA_VERSION = 1

# options whose values may start with '-' (negative numbers)
_VALUE_OPTIONS = {
    "--z", "--lambda", "--region", "--x", "--y", "--y1", "--y2", "--w1", "--w2",
    "--h1", "--h2", "--re", "--im", "--r",
}


# ---------------------------------------------------------------------------
# value parsing and encoding
# ---------------------------------------------------------------------------


def parse_complex(text) -> complex:
    """``"re,im"``, ``"re"``, ``[re, im]`` or ``{"re": .., "im": ..}``."""
    if isinstance(text, dict):
        try:
            return complex(float(text["re"]), float(text.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"bad complex value {text!r}") from exc
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise DomainError(f"bad complex value {text!r}")
        return complex(float(text[0]), float(text[1]))
    if isinstance(text, (int, float)):
        return complex(float(text), 0.0)
    parts = str(text).split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"bad complex value {text!r}; expected 're,im'") from exc
    if len(vals) == 1:
        vals.append(0.0)
    if len(vals) != 2 or not all(math.isfinite(v) for v in vals):
        raise DomainError(f"bad complex value {text!r}; expected 're,im'")
    return complex(vals[0], vals[1])


def parse_point(text) -> tuple[float, float]:
    if isinstance(text, (list, tuple)):
        vals = list(text)
    else:
        try:
            vals = [float(p) for p in str(text).split(",")]
        except ValueError as exc:
            raise DomainError(f"bad point {text!r}; expected 'x,y'") from exc
    if len(vals) != 2:
        raise DomainError(f"bad point {text!r}; expected 'x,y'")
    return float(vals[0]), float(vals[1])


def parse_range(text: str) -> np.ndarray:
    """``"start:stop:count"`` (inclusive) or a single value."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            n = int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(float(parts[0]), float(parts[1]), n)
    except ValueError as exc:
        raise DomainError(f"bad range {text!r}; expected 'start:stop:count'") from exc
    raise DomainError(f"bad range {text!r}; expected 'start:stop:count'")


def parse_gaussians(text: str | None) -> planar.GaussianSum:
    """``"cx,cy,s,re,im;..."``; empty for the zero function."""
    if text is None or not str(text).strip():
        return planar.GaussianSum.zero()
    centers, widths, coeffs = [], [], []
    for item in str(text).split(";"):
        try:
            cx, cy, s, cre, cim = (float(v) for v in item.split(","))
        except ValueError as exc:
            raise DomainError(f"bad Gaussian term {item!r}; expected 'cx,cy,s,re,im'") from exc
        centers.append((cx, cy))
        widths.append(s)
        coeffs.append(complex(cre, cim))
    return planar.GaussianSum(tuple(centers), tuple(widths), tuple(coeffs))


def cjson(z: complex) -> dict:
    z = complex(z)
    return {"re": _fjson(z.real), "im": _fjson(z.imag)}


def _fjson(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def mjson(m: np.ndarray) -> list:
    return [[cjson(v) for v in row] for row in np.asarray(m)]


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    model: str = "planar"
    r: float | None = None
    y1: tuple[float, float] | None = None
    y2: tuple[float, float] | None = None
    z: complex | None = None
    g: str = "g0"
    abs_tol: float | None = None
    rel_tol: float | None = None
    mode: str = "ClosedForm"
    format: str | None = None
    output: str | None = None
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.model not in ("planar", "halfline"):
            raise DomainError(f"unknown model {self.model!r}")
        if self.model == "planar":
            has_r = self.r is not None
            has_y = self.y1 is not None or self.y2 is not None
            if has_r == has_y:
                raise DomainError("give exactly one of --r or --y1/--y2")
            if has_y and (self.y1 is None or self.y2 is None):
                raise DomainError("--y1 and --y2 must be given together")
        if self.format not in (None, "json", "csv"):
            raise DomainError("--format must be json or csv")

    def quad(self) -> QuadratureSpec:
        base = QuadratureSpec()
        abs_tol = self.abs_tol
        if abs_tol is None:
            env = os.environ.get(ENV_QUAD_TOL)
            if env:
                try:
                    abs_tol = float(env)
                except ValueError as exc:
                    raise DomainError(f"{ENV_QUAD_TOL} must be a number, got {env!r}") from exc
        return QuadratureSpec(
            abs_tol=base.abs_tol if abs_tol is None else abs_tol,
            rel_tol=base.rel_tol if self.rel_tol is None else self.rel_tol,
        )

    def planar_config(self) -> planar.PlanarConfig:
        quad = self.quad()
        if self.r is not None:
            return planar.PlanarConfig.from_r(self.r, quad=quad, oracle_mode=self.mode)
        return planar.PlanarConfig(self.y1, self.y2, quad, self.mode)

    def profile(self) -> planar.TwoCenterProfile:
        if self.g == "g0":
            return planar.g0_profile()
        return planar.TabulatedProfile.load(self.g)

    def require_z(self) -> complex:
        if self.z is None:
            raise DomainError("--z is required")
        return self.z

    def geometry(self) -> dict:
        if self.model != "planar":
            return {"model": self.model}
        cfg = self.planar_config()
        return {"model": "planar", "r": cfg.r, "y1": list(cfg.y1), "y2": list(cfg.y2)}


_CONFIG_KEYS = {"model", "r", "y1", "y2", "z", "g", "abs_tol", "rel_tol", "mode", "format", "output"}


def load_config(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise DomainError(f"invalid TOML in {path}: {exc}") from exc
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def build_run_config(args: argparse.Namespace) -> RunConfig:
    data = load_config(args.config) if getattr(args, "config", None) else {}
    for key in _CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    rc = RunConfig()
    if "model" in data:
        rc.model = str(data["model"])
    if "r" in data:
        rc.r = float(data["r"])
    if "y1" in data:
        rc.y1 = parse_point(data["y1"])
    if "y2" in data:
        rc.y2 = parse_point(data["y2"])
    if "z" in data:
        rc.z = parse_complex(data["z"])
    if "g" in data:
        rc.g = str(data["g"])
    for key in ("abs_tol", "rel_tol"):
        if key in data:
            setattr(rc, key, float(data[key]))
    if "mode" in data:
        try:
            rc.mode = planar.OracleMode(data["mode"]).value
        except ValueError as exc:
            raise DomainError(f"unknown oracle mode {data['mode']!r}") from exc
    if "format" in data:
        rc.format = str(data["format"])
    if "output" in data:
        rc.output = str(data["output"])
    rc.validate()
    return rc


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    meta: dict


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else ("-inf" if v < 0 else "nan"))
    return "" if v is None else str(v)


def render(result, fmt: str) -> str:
    if fmt == "csv":
        if not isinstance(result, Table):
            raise DomainError("this command produces JSON only")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.columns)
        for row in result.rows:
            w.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()
    if isinstance(result, Table):
        result = dict(result.meta, columns=result.columns,
                      rows=[dict(zip(result.columns, (_fjson(v) if isinstance(v, float) else v for v in row)))
                            for row in result.rows])
    return json.dumps(result, indent=2) + "\n"


def emit(result, rc: RunConfig, default_fmt: str) -> None:
    text = render(result, rc.format or default_fmt)
    if rc.output:
        Path(rc.output).write_text(text)
    else:
        sys.stdout.write(text)


def _header(command: str, rc: RunConfig) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command}
    out.update(rc.geometry())
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _thresholds_json(th: planar.PlanarThresholds) -> dict:
    return {"omega0": cjson(th.omega0), "re_threshold": th.re_threshold,
            "sa_im": th.sa_im, "g0_norm_sq": th.g0_norm_sq}


def _classification_json(c: extcore.Classification) -> dict:
    return {
        "label": c.display,
        "base_label": c.label.value,
        "quasi_selfadjoint": c.quasi_selfadjoint,
        "margin": _fjson(c.margin),
        "omega_semi_angle": _fjson(c.omega_semi_angle),
        "sector_semi_angle": _fjson(c.sector_bound()),
    }


def _halfline_qsa(z: complex) -> extcore.ExtensionPair:
    m = halfline.halfline_model()
    return extcore.qsa_pair(m, linrel.relation_from_matrix(np.array([[z]])), "quasi-selfadjoint")


def cmd_classify(args, rc: RunConfig):
    z = rc.require_z()
    out = _header("classify", rc)
    out["z"] = cjson(z)
    if rc.model == "halfline":
        m = halfline.halfline_model()
        out["g"] = {"kind": "x0"}
        out.update(_classification_json(extcore.classify_sectorial(m, _halfline_qsa(z))))
        return out
    cfg = rc.planar_config()
    prof = rc.profile()
    pair = planar.PlanarPair(z, prof)
    out["g"] = prof.describe()
    out["g_norm_sq"] = planar.profile_norm_sq(cfg, prof)
    out.update(_classification_json(planar.classify(cfg, pair)))
    out["thresholds"] = _thresholds_json(planar.thresholds(cfg))
    return out


def cmd_thresholds(args, rc: RunConfig):
    if rc.model != "planar":
        raise DomainError("thresholds is defined for the planar model only")
    out = _header("thresholds", rc)
    out.update(_thresholds_json(planar.thresholds(rc.planar_config())))
    return out


def cmd_q(args, rc: RunConfig):
    lam = parse_complex(args.lam)
    out = _header("q", rc)
    out["lambda"] = cjson(lam)
    if rc.model == "halfline":
        q = halfline.halfline_model().Q(lam)
    else:
        q = planar.q_matrix(rc.planar_config(), lam)
        out["oracle_mode"] = rc.mode
    out["q"] = mjson(q)
    return out


def cmd_identity(args, rc: RunConfig):
    if rc.model != "planar":
        raise DomainError("identity-check is defined for the planar model only")
    r = rc.planar_config().r
    lhs = planar.identity_lhs(r, rc.quad())
    rhs = planar.identity_rhs(r)
    err = abs(lhs - rhs)
    out = _header("identity-check", rc)
    out.update({"lhs": lhs, "rhs": rhs, "abs_err": err, "tolerance": args.tolerance,
                "passed": err < args.tolerance})
    return out


def _eig_roots(rc: RunConfig, region: Rect, z: complex | None):
    if rc.model == "halfline":
        if z is None:
            return []
        m = halfline.halfline_model()
        pair = _halfline_qsa(z)
        return find_roots_region(lambda lam: extcore.characteristic(m, pair, lam), region)
    cfg = rc.planar_config()
    pair = planar.PlanarPair.friedrichs() if z is None else planar.PlanarPair(z, rc.profile())
    return planar.eigenvalues(cfg, pair, region)


def cmd_eig(args, rc: RunConfig):
    region = Rect.parse(args.region)
    z = None if args.friedrichs else rc.require_z()
    roots = _eig_roots(rc, region, z)
    meta = _header("eig", rc)
    meta.update({"z": None if z is None else cjson(z), "region": [region.x0, region.x1, region.y0, region.y1]})
    rows = [[r.lam.real, r.lam.imag, r.residual, r.winding, r.winding_verified] for r in roots]
    return Table(["lambda_re", "lambda_im", "w_abs", "winding", "winding_verified"], rows, meta)


def cmd_resolvent(args, rc: RunConfig):
    if rc.model != "planar":
        raise DomainError("resolvent is defined for the planar model only")
    cfg = rc.planar_config()
    lam = parse_complex(args.lam)
    x = np.array(parse_point(args.x))
    y = np.array(parse_point(args.y))
    pair = planar.PlanarPair.friedrichs() if args.friedrichs else planar.PlanarPair(rc.require_z(), rc.profile())
    k = complex(planar.resolvent_kernel(cfg, pair, lam, x, y))
    free = complex(planar.free_kernel(lam, x, y))
    out = _header("resolvent", rc)
    out.update({
        "z": None if pair.is_friedrichs else cjson(pair.z),
        "lambda": cjson(lam), "x": list(x), "y": list(y),
        "kernel": cjson(k), "free": cjson(free), "correction": cjson(k - free),
        "w": None if pair.is_friedrichs else cjson(planar.w_scalar(cfg, pair, lam)),
    })
    return out


def cmd_kvn_form(args, rc: RunConfig):
    if rc.model != "planar":
        raise DomainError("kvn-form is defined for the planar model only")
    cfg = rc.planar_config()
    h1 = parse_gaussians(args.h1)
    w1 = parse_complex(args.w1)
    h2 = h1 if args.h2 is None else parse_gaussians(args.h2)
    w2 = w1 if args.w2 is None else parse_complex(args.w2)
    val = planar.kvn_form(cfg, (h1, w1), (h2, w2))
    out = _header("kvn-form", rc)
    out.update({"w1": cjson(w1), "w2": cjson(w2), "terms1": len(h1.coeffs), "terms2": len(h2.coeffs),
                "value": cjson(val)})
    return out


def _scan_point(task):
    rc, z, lam = task
    cfg = rc.planar_config()
    pair = planar.PlanarPair(z, rc.profile())
    c = planar.classify(cfg, pair)
    w = planar.w_scalar(cfg, pair, lam) if lam is not None else None
    return [z.real, z.imag, c.display, _fjson(c.margin), None if w is None else w.real,
            None if w is None else w.imag]


def cmd_scan(args, rc: RunConfig):
    if rc.model != "planar":
        raise DomainError("scan is defined for the planar model only")
    res = parse_range(args.re)
    ims = parse_range(args.im)
    lam = parse_complex(args.lam) if args.lam is not None else None
    if lam is not None:
        extcore.check_off_cut(lam)
    rc.planar_config()
    rc.profile()
    tasks = [(rc, complex(a, b), lam) for b in ims for a in res]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_point, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        rows = [_scan_point(t) for t in tasks]
    meta = _header("scan", rc)
    meta["lambda"] = None if lam is None else cjson(lam)
    return Table(["z_re", "z_im", "label", "margin", "w_re", "w_im"], rows, meta)


def cmd_halfline_selfcheck(args, rc: RunConfig):
    m = halfline.halfline_model()
    tol = args.tolerance
    checks = {}
    rep = extcore.check_contract(m)
    checks["q_at_i"] = rep.q_at_i
    checks["q_vs_gram"] = rep.q_vs_gram
    checks["re_omega0_vs_x0_gram"] = rep.re_omega_vs_x0
    checks["omega0_limit"] = float(np.abs(extcore.kvn_limit_check(m) - m.omega0).max())
    kvn = extcore.kvn_pair(m)
    checks["kvn_z_action"] = abs(complex(kvn.Z.matrix()[0, 0]) - halfline.OMEGA0)
    checks["kvn_label"] = 0.0 if extcore.classify_sectorial(m, kvn).label is extcore.Label.KREIN_VON_NEUMANN else 1.0
    checks["sz_admissible"] = 0.0 if all(extcore.admissible(m, extcore.sz_pair(m, z))
                                          for z in (-1.0, -1 + 1j, -1 - 1j, 1j, -1j)) else 1.0
    worst = 0.0
    for s in (complex(math.cos(0.75 * math.pi), math.sin(0.75 * math.pi)), 1.2 * complex(math.cos(0.3), math.sin(0.3)), 0.3 + 0.2j):
        z = halfline.z_for_sqrt(s)
        expected = halfline.halfline_eig(z)
        pair = _halfline_qsa(z)
        found = find_roots_region(lambda lam: extcore.characteristic(m, pair, lam), Rect(-4, 4, -4, 4))
        if expected is None or not found:
            worst = math.inf
            continue
        worst = max(worst, min(abs(f.lam - expected) for f in found))
        if extcore.spectral_point(m, pair, expected).kind is not extcore.PointKind.EIGENVALUE:
            worst = math.inf
    checks["eig_vs_root_finder"] = worst
    out = {"schema_version": SCHEMA_VERSION, "command": "model halfline selfcheck", "model": "halfline",
           "tolerance": tol, "checks": {k: _fjson(v) for k, v in checks.items()}}
    out["passed"] = all(v <= tol for v in checks.values())
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, geometry: bool = True, z: bool = False) -> None:
    p.add_argument("--config", help="TOML file with RunConfig keys; flags override it")
    p.add_argument("--model", choices=["planar", "halfline"], default=None)
    if geometry:
        p.add_argument("--r", type=float, help="distance between the centers")
        p.add_argument("--y1", help="first center 'x,y'")
        p.add_argument("--y2", help="second center 'x,y'")
        p.add_argument("--mode", choices=[m.value for m in planar.OracleMode], default=None,
                       help="closed forms, quadrature oracles, or both with a cross-check")
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    if z:
        p.add_argument("--z", help="extension parameter 're,im'")
        p.add_argument("--g", help="'g0' or a profile file path")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sectorium", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="label an extension parameter <z, g>")
    _common(p, z=True)
    p.set_defaults(func=cmd_classify, default_format="json")

    p = sub.add_parser("thresholds", help="omega0 and the classification thresholds")
    _common(p)
    p.set_defaults(func=cmd_thresholds, default_format="json")

    p = sub.add_parser("q", help="the matrix Q(lambda)")
    _common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.set_defaults(func=cmd_q, default_format="json")

    p = sub.add_parser("identity-check", help="the improper-integral identity at r")
    _common(p)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(func=cmd_identity, default_format="json")

    p = sub.add_parser("eig", help="eigenvalues in a rectangle")
    _common(p, z=True)
    p.add_argument("--region", required=True, help="'xmin,xmax,ymin,ymax'")
    p.add_argument("--friedrichs", action="store_true", help="use the Friedrichs extension")
    p.set_defaults(func=cmd_eig, default_format="csv")

    p = sub.add_parser("resolvent", help="resolvent kernel K(x, y; lambda)")
    _common(p, z=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--friedrichs", action="store_true")
    p.set_defaults(func=cmd_resolvent, default_format="json")

    p = sub.add_parser("kvn-form", help="Krein-von Neumann form on Gaussian test elements")
    _common(p)
    p.add_argument("--h1", default="", help="Gaussian terms 'cx,cy,s,re,im;...'")
    p.add_argument("--w1", default="1,0")
    p.add_argument("--h2", default=None, help="defaults to --h1")
    p.add_argument("--w2", default=None, help="defaults to --w1")
    p.set_defaults(func=cmd_kvn_form, default_format="json")

    p = sub.add_parser("scan", help="classify a grid of z values")
    _common(p, z=True)
    p.add_argument("--re", required=True, help="'start:stop:count' for Re z")
    p.add_argument("--im", required=True, help="'start:stop:count' for Im z")
    p.add_argument("--lambda", dest="lam", default=None, help="also report w at this lambda")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan, default_format="csv")

    p = sub.add_parser("model", help="model-specific commands")
    msub = p.add_subparsers(dest="model_name", required=True)
    hp = msub.add_parser("halfline")
    hsub = hp.add_subparsers(dest="action", required=True)
    sc = hsub.add_parser("selfcheck", help="engine checks against the closed-form half-line model")
    sc.add_argument("--tolerance", type=float, default=1e-8)
    sc.add_argument("--format", choices=["json"], default=None)
    sc.add_argument("--output")
    sc.set_defaults(func=cmd_halfline_selfcheck, default_format="json", forced_model="halfline")
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        if getattr(args, "forced_model", None):
            args.model = args.forced_model
        if getattr(args, "jobs", 1) < 1:
            raise DomainError("--jobs must be positive")
        rc = build_run_config(args)
        result = args.func(args, rc)
        emit(result, rc, args.default_format)
    except ConvergenceError as exc:
        print(f"sectorium: convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ModelError as exc:
        print(f"sectorium: model error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (SingularPointError, DomainError, ValueError) as exc:
        print(f"sectorium: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SectoriumError as exc:
        print(f"sectorium: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if isinstance(result, dict) and result.get("passed") is False:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
