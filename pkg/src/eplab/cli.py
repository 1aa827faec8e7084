"""Command-line entry point: ``eplab <command> [flags]``.

Values come from three layers, later ones winning: built-in defaults, an
optional JSON file passed with ``--config``, and explicit flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import crypto, dynamics, ladder, spectral
from .numerics import PrecisionContext
from .report import ReportEnvelope, svg_polyline, to_csv

COMMANDS = (
    "norm-curve",
    "tstar-scan",
    "estimate-c",
    "gram",
    "decay-fit",
    "ladder",
    "overlap",
    "moments",
    "coherent",
    "reconstruct-h",
)


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"invalid {field_name}: {message}")
        self.field_name = field_name


@dataclass
class RunConfig:
    n: Optional[list] = None
    eps: float = 0.2
    mu: Optional[float] = None
    pairs: list = field(default_factory=list)
    alpha_re: float = 0.5
    alpha_im: float = 0.0
    delta: float = 0.1
    t_max: Optional[float] = None
    dt: Optional[float] = None
    m_max: Optional[int] = None
    bits: int = 53
    k_trunc: int = 40
    j_max: int = 8
    moments: list = field(default_factory=list)
    out: Optional[str] = None
    format: str = "csv"
    svg: Optional[str] = None
    jobs: int = 1

    def dims(self, command: str) -> list:
        if self.n:
            return [int(v) for v in self.n]
        return [10] if command == "norm-curve" else [10, 20, 40, 80]

    @property
    def alpha(self) -> complex:
        return complex(self.alpha_re, self.alpha_im)

    def validate(self, command: str) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError("format", f"expected csv or json, got {self.format!r}")
        if self.jobs < 1:
            raise ConfigError("jobs", "must be >= 1")
        if command in ("norm-curve", "tstar-scan", "estimate-c"):
            if not abs(self.eps) < 1:
                raise ConfigError("eps", f"|eps| must be < 1, got {self.eps}")
            if any(v < 1 for v in self.dims(command)):
                raise ConfigError("n", "dimensions must be positive")
        if command in ("tstar-scan", "estimate-c"):
            if self.eps == 0:
                raise ConfigError("eps", "must be nonzero for a t* scan")
            if len(set(self.dims(command))) < 3:
                raise ConfigError("n", "need at least 3 distinct N values")
            if not self.delta > 0:
                raise ConfigError("delta", "must be positive")
        if command == "norm-curve":
            if len(self.dims(command)) != 1:
                raise ConfigError("n", "norm-curve takes a single N")
            if self.t_max is not None and not self.t_max > 0:
                raise ConfigError("t_max", "must be positive")
            if self.dt is not None and not self.dt > 0:
                raise ConfigError("dt", "must be positive")
        if command in ("gram", "decay-fit", "reconstruct-h"):
            if self.m_max is not None and self.m_max < 1:
                raise ConfigError("m_max", "must be >= 1")
            if self.bits < 53:
                raise ConfigError("bits", "must be >= 53")
        if command == "decay-fit" and self.m_max is not None and self.m_max < 3:
            raise ConfigError("m_max", "decay fit needs M_max >= 3")
        if command == "ladder" and self.m_max is not None and not 0 <= self.m_max <= 20:
            raise ConfigError("m_max", "must lie in [0, 20]")
        if command == "overlap":
            for e, m in self.resolved_pairs():
                if not (abs(e) < 1 and abs(m) < 1):
                    raise ConfigError("pairs", f"overlap arguments must lie in (-1, 1), got ({e}, {m})")
        if command == "moments" and not self.moments:
            raise ConfigError("moments", "need at least one moment value")
        if command == "coherent":
            if not abs(self.alpha) < 1:
                raise ConfigError("alpha", f"|alpha| must be < 1, got {abs(self.alpha)}")
            if self.k_trunc < 0:
                raise ConfigError("k_trunc", "must be >= 0")
            if self.j_max < 0:
                raise ConfigError("j_max", "must be >= 0")

    def resolved_pairs(self) -> list:
        if self.pairs:
            return [tuple(p) for p in self.pairs]
        return [(self.eps, self.mu if self.mu is not None else -self.eps)]


# ---------------------------------------------------------------------------
# commands; each returns (table header, rows, results dict, warnings)


def cmd_norm_curve(cfg: RunConfig):
    N = cfg.dims("norm-curve")[0]
    eps = cfg.eps
    scale = N / abs(eps) if eps else 1.0
    t_max = cfg.t_max if cfg.t_max is not None else 3.0 * scale
    dt = cfg.dt if cfg.dt is not None else t_max / 600
    steps = int(math.floor(t_max / dt + 1e-9))
    grid = np.arange(steps + 1) * dt
    traj = dynamics.norm_trajectory(N, eps, grid)
    rows = [(t, nv, nv * nv) for t, nv in zip(traj.times.tolist(), traj.norms.tolist())]
    if cfg.svg:
        Path(cfg.svg).write_text(svg_polyline(traj.times, traj.norms, f"N = {N}, ε = {eps:g}"))
    results = {"N": N, "eps": eps, "samples": [list(r) for r in rows]}
    return ("t", "norm", "norm_squared"), rows, results, []


def cmd_tstar_scan(cfg: RunConfig):
    warnings, keep = [], []
    for N in cfg.dims("tstar-scan"):
        try:
            dynamics.tstar_for(N, cfg.eps, cfg.delta)
            keep.append(N)
        except dynamics.ThresholdNotCrossed as exc:
            warnings.append(f"N={N} excluded from fit: {exc}")
    if len(set(keep)) < 3:
        raise dynamics.ThresholdNotCrossed("fewer than 3 N values crossed the threshold")
    scan = dynamics.tstar_scan(keep, cfg.eps, cfg.delta, jobs=cfg.jobs)
    rows = list(zip(scan.N, scan.t_star))
    results = {
        "eps": cfg.eps,
        "delta": cfg.delta,
        "t_star": [{"N": n, "t_star": t} for n, t in rows],
        "C": scan.C,
        "fit_r_squared": scan.fit.r_squared,
        "affine_intercept": scan.affine.intercept,
        "affine_slope": scan.affine.slope,
    }
    return ("N", "t_star"), rows, results, warnings


def _sweep(cfg: RunConfig):
    ctx = PrecisionContext(mantissa_bits=cfg.bits, escalation_limit=max(1024, cfg.bits))
    return crypto.gram_logdet_sweep(cfg.m_max or 8, ctx, jobs=cfg.jobs)


def _decay_block(sweep) -> dict:
    ok = [(M, r) for M, r in sweep if r.converged]
    if len(ok) < 3:
        return {}
    f = crypto.fit_decay(ok)
    f10 = crypto.fit_decay(ok, base=10.0)
    return {
        "slope": f.slope,
        "intercept": f.intercept,
        "r_squared": f.r_squared,
        "slope_log10": f10.slope,
        "intercept_log10": f10.intercept,
        "M_range": [ok[0][0], ok[-1][0]],
    }


def cmd_gram(cfg: RunConfig):
    sweep = _sweep(cfg)
    rows = [(M, math.exp(r.log_det), r.log_det, r.mantissa_bits_used, r.converged) for M, r in sweep]
    warnings = [f"M={M}: not converged (pivot {r.spd_violation_index})" for M, r in sweep if not r.converged]
    results = {
        "rows": [
            {"M": M, "delta": d, "log_delta": ld, "bits_used": b, "converged": c} for M, d, ld, b, c in rows
        ],
        "fit": _decay_block(sweep),
    }
    return ("M", "delta", "log_delta", "bits_used", "converged"), rows, results, warnings


def cmd_decay_fit(cfg: RunConfig):
    sweep = _sweep(cfg)
    bad = [M for M, r in sweep if not r.converged]
    if bad:
        raise crypto.DegenerateFamily(f"log-determinant did not converge for M={bad}")
    # sensitivity of the slope to the fit range
    rows = []
    for hi in range(3, len(sweep) + 1):
        f = crypto.fit_decay(sweep[:hi])
        f10 = crypto.fit_decay(sweep[:hi], base=10.0)
        rows.append((1, hi, f.slope, f.intercept, f.r_squared, f10.slope))
    results = {
        "fit": _decay_block(sweep),
        "range_sensitivity": [
            {"M_lo": a, "M_hi": b, "slope": s, "intercept": i, "r_squared": r, "slope_log10": s10}
            for a, b, s, i, r, s10 in rows
        ],
    }
    return ("M_lo", "M_hi", "slope", "intercept", "r_squared", "slope_log10"), rows, results, []


def cmd_ladder(cfg: RunConfig):
    m_max = 4 if cfg.m_max is None else cfg.m_max
    seq = ladder.build_ladder(m_max)
    rows = []
    for m, P in enumerate(seq.members):
        HP = ladder.apply_free_hamiltonian(P)
        expect = seq.members[m - 2].scale(ladder.I) if m >= 2 else ladder.BivariatePolynomial()
        rows.append((m, str(P), HP == expect, ladder.schrodinger_residual(P).is_zero()))
    results = {
        "members": [{"m": m, "psi": s, "ladder_identity": a, "schrodinger": b} for m, s, a, b in rows],
        "all_pass": all(a and b for _, _, a, b in rows),
    }
    return ("m", "psi", "ladder_identity", "schrodinger"), rows, results, []


def cmd_overlap(cfg: RunConfig):
    rows = []
    for e, m in cfg.resolved_pairs():
        rows.append((e, m, spectral.overlap(e, m)))
    results = {"overlaps": [{"eps": e, "mu": m, "overlap": v} for e, m, v in rows]}
    return ("eps", "mu", "overlap"), rows, results, []


def cmd_moments(cfg: RunConfig):
    f = spectral.moment_match(cfg.moments)
    got = f.moments(len(cfg.moments) - 1)
    res = np.abs(got - np.asarray(cfg.moments, dtype=float))
    rows = [(n, c, float(r)) for n, (c, r) in enumerate(zip(f.coefficients, res))]
    results = {
        "coefficients": list(f.coefficients),
        "moment_residuals": res.tolist(),
        "max_residual": float(res.max()),
    }
    return ("n", "legendre_coefficient", "moment_residual"), rows, results, []


def cmd_coherent(cfg: RunConfig):
    a = cfg.alpha
    f = spectral.coherent_weight(a, cfg.k_trunc)
    m = f.moments(cfg.j_max)
    target = a ** np.arange(cfg.j_max + 1)
    res = np.abs(m - target)
    rows = [(j, complex(mj).real, complex(mj).imag, float(r)) for j, (mj, r) in enumerate(zip(m, res))]
    results = {
        "alpha": a,
        "K": cfg.k_trunc,
        "moments": [complex(v) for v in m],
        "moment_residuals": res.tolist(),
        "max_residual": float(res.max()),
    }
    return ("j", "moment_re", "moment_im", "residual"), rows, results, []


def cmd_reconstruct_h(cfg: RunConfig):
    ctx = PrecisionContext(mantissa_bits=cfg.bits, escalation_limit=max(1024, cfg.bits))
    rows = []
    for M in range(1, (cfg.m_max or 4) + 1):
        H = crypto.reconstruct_hamiltonian(M, ctx)
        rows.append(
            (M, H.max_abs_entry, H.frobenius_norm, max(H.eigen_residuals) / H.frobenius_norm,
             H.max_abs_hermitizer_entry, H.mantissa_bits)
        )
    header = ("M", "max_abs_entry", "frobenius_norm", "max_relative_residual", "max_abs_hermitizer_entry", "bits")
    results = {"rows": [dict(zip(header, r)) for r in rows]}
    return header, rows, results, []


HANDLERS = {
    "norm-curve": cmd_norm_curve,
    "tstar-scan": cmd_tstar_scan,
    "estimate-c": cmd_tstar_scan,
    "gram": cmd_gram,
    "decay-fit": cmd_decay_fit,
    "ladder": cmd_ladder,
    "overlap": cmd_overlap,
    "moments": cmd_moments,
    "coherent": cmd_coherent,
    "reconstruct-h": cmd_reconstruct_h,
}


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with default values (flags override)")
    common.add_argument("--n", type=int, nargs="+", help="dimension(s) N")
    common.add_argument("--eps", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--pair", dest="pairs", type=float, nargs=2, action="append", metavar=("EPS", "MU"))
    common.add_argument("--alpha-re", type=float)
    common.add_argument("--alpha-im", type=float)
    common.add_argument("--delta", type=float, help="relative norm deviation threshold (default 0.1)")
    common.add_argument("--t-max", type=float)
    common.add_argument("--dt", type=float)
    common.add_argument("--m-max", type=int)
    common.add_argument("--bits", type=int, help="starting mantissa bits (default 53, auto-escalates)")
    common.add_argument("--k-trunc", type=int)
    common.add_argument("--j-max", type=int)
    common.add_argument("--moments", type=float, nargs="+")
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--svg")
    common.add_argument("--jobs", type=int)
    parser = argparse.ArgumentParser(prog="eplab", description="Exceptional-point matrix model experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    names = {f.name for f in fields(RunConfig)}
    if getattr(ns, "config", None):
        data = json.loads(Path(ns.config).read_text())
        unknown = set(data) - names
        if unknown:
            raise ConfigError("config", f"unknown keys {sorted(unknown)}")
        values.update(data)
    for k, v in vars(ns).items():
        if k in names:
            values[k] = v
    if isinstance(values.get("n"), int):
        values["n"] = [values["n"]]
    return RunConfig(**values)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ns = build_parser().parse_args(argv)
    command = ns.command
    try:
        cfg = resolve_config(ns)
        cfg.validate(command)
    except ConfigError as exc:
        print(f"eplab {command}: {exc}", file=stderr)
        return 2
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"eplab {command}: invalid config: {exc}", file=stderr)
        return 2

    start = time.perf_counter()
    try:
        header, rows, results, warnings = HANDLERS[command](cfg)
    except (dynamics.ThresholdNotCrossed, crypto.DegenerateFamily) as exc:
        print(f"eplab {command}: {exc}", file=stderr)
        return 3
    except ValueError as exc:
        print(f"eplab {command}: {exc}", file=stderr)
        return 2
    env = ReportEnvelope(command, asdict(cfg), results, time.perf_counter() - start, warnings=warnings)
    for w in warnings:
        print(f"warning: {w}", file=stderr)

    text = to_csv(header, rows) if cfg.format == "csv" else env.to_json()
    if cfg.out:
        Path(cfg.out).write_text(text)
        if cfg.format == "csv":
            Path(cfg.out).with_suffix(".json").write_text(env.to_json())
    else:
        stdout.write(text)
    if command == "ladder" and not results["all_pass"]:
        return 1
    if command == "gram" and not all(r["converged"] for r in results["rows"]):
        return 3
    return 0


def main():  # pragma: no cover
    sys.exit(run())
