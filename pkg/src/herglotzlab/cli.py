"""Command-line interface: ``herglotz-lab <command> [options]``.

Every command computes one report, writes it as CSV or JSON and emits a
manifest (config, versions, tolerances, module operations used).  Module
flags -- divergence, non-convergence, failed tail checks -- end the run
with exit status 3 and an error JSON on stdout; invalid input gives
status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import herglotz, hconv, radial_toeplitz, sphere_op, symbol_lab
from .manifest import (ERROR_SCHEMA_ID, RESULT_SCHEMA_ID, build_manifest, dumps, threads,
                       write_atomic)
from .quad import sphere_grid
from .specfun import multiplicity
from .spherefn import SphereFunction
from .symbols import from_spec

COMMANDS = ("gamma", "spectrum", "kernel", "degenerate", "bounds", "hconv", "isometry",
            "farfield")


class ModuleFlag(RuntimeError):
    """A module reported divergence or non-convergence."""

    def __init__(self, kind: str, message: str, detail: Optional[dict] = None):
        super().__init__(message)
        self.kind = kind
        self.detail = detail or {}


@dataclass
class RunConfig:
    """Parsed command line (one command per process)."""

    command: str
    d: int = 2
    symbol: str = ""
    nmax: Optional[int] = None
    grid: Optional[int] = None
    R: Optional[float] = None
    tol: Optional[float] = None
    out: Optional[str] = None
    format: str = "csv"
    extra: dict = field(default_factory=dict)


@dataclass
class Report:
    payload: dict
    table: Optional[list] = None          # first row = header
    operations: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)


def _csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _flatten(obj, prefix="") -> list:
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
    else:
        rows.append([prefix, obj])
    return rows


def _floats(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def _basis(d: int, text: str) -> SphereFunction:
    n, _, j = text.partition(",")
    return SphereFunction.basis(d, int(n), int(j or 1))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gamma(cfg: RunConfig) -> Report:
    a = from_spec(cfg.symbol or "power:mu=2")
    nmax = 20 if cfg.nmax is None else cfg.nmax
    seq = radial_toeplitz.gamma_sequence(a, cfg.d, nmax, method=cfg.extra.get("method"))
    n = np.arange(nmax + 1)
    oracle, oracle_name = None, None
    tag = a.closed_form_tag
    if tag and tag[0] == "ex45":
        oracle = radial_toeplitz.closed_form_ex45(cfg.d, tag[1], n)
        oracle_name = "closed_form_ex45"
    elif tag and tag[0] == "ex44":
        oracle = radial_toeplitz.closed_form_ex44(cfg.d, n, variant="corrected")
        oracle_name = "closed_form_ex44(corrected)"
    head = ["n", "gamma", "error_bound"] + (["oracle", "rel_error"] if oracle is not None else [])
    rows = [head]
    rel = None
    if oracle is not None:
        rel = np.abs(seq.gammas - oracle) / np.maximum(np.abs(oracle), 1e-300)
    for k in range(nmax + 1):
        row = [int(k), float(seq.gammas[k]), float(seq.error_bounds[k])]
        if oracle is not None:
            row += [float(oracle[k]), float(rel[k])]
        rows.append(row)
    summary = radial_toeplitz.spectrum_summary(seq)
    payload = {"symbol": a.name, "d": cfg.d, "nmax": nmax, "method": seq.method,
               "gamma": seq.gammas, "error_bounds": seq.error_bounds,
               "oracle": oracle_name, "max_rel_error": float(np.max(rel)) if rel is not None
               else None, "summary": summary.to_dict()}
    if tag and tag[0] == "ex44":
        payload["stated_form"] = radial_toeplitz.closed_form_ex44(cfg.d, n, variant="stated")
    if not np.all(seq.converged):
        bad = [int(k) for k in np.flatnonzero(~seq.converged)]
        raise ModuleFlag("non-convergence", "gamma_sequence did not converge", {"n": bad})
    ops = ["radial_toeplitz.gamma_sequence", "radial_toeplitz.spectrum_summary"]
    if oracle_name:
        ops.append(f"radial_toeplitz.{oracle_name.split('(')[0]}")
    return Report(payload, rows, ops, {"oracle_rel": 1e-6})


def _with_multiplicity(values: np.ndarray, d: int) -> np.ndarray:
    out = []
    for n, g in enumerate(values):
        out += [float(g)] * multiplicity(d, n)
    return np.array(sorted(out, key=lambda x: -abs(x)))


def cmd_spectrum(cfg: RunConfig) -> Report:
    a = from_spec(cfg.symbol or "exp")
    d = cfg.d
    res = cfg.grid or (256 if d == 2 else 12)
    nmax = 32 if cfg.nmax is None else cfg.nmax
    top = int(cfg.extra.get("top", 20))
    T = sphere_op.transform_of(a, d)
    g = sphere_grid(d, res)
    eig = sphere_op.eigen_hermitian(sphere_op.build_nodal(T, g))
    if not eig.converged:
        raise ModuleFlag("non-convergence", "Jacobi eigensolver did not converge",
                         {"sweeps": eig.sweeps, "off_norm": eig.off_norm})
    seq = radial_toeplitz.gamma_sequence(a, d, nmax)
    diag = _with_multiplicity(seq.gammas, d)
    spectra = {"diag": diag[:top], "nodal": np.asarray(eig.values)[:top]}
    ops = ["sphere_op.transform_of", "sphere_op.build_nodal", "sphere_op.eigen_hermitian",
           "radial_toeplitz.gamma_sequence"]
    if d == 2:
        spectra["circle"] = _with_multiplicity(sphere_op.circle_eigs(T, nmax), 2)[:top]
        ops.append("sphere_op.circle_eigs")
    k = min(len(v) for v in spectra.values())
    names = sorted(spectra)
    gaps = {}
    for i, p in enumerate(names):
        for q in names[i + 1:]:
            x, y = spectra[p][:k], spectra[q][:k]
            gaps[f"{p}-{q}"] = float(np.max(np.abs(x - y) / np.maximum(np.abs(x), 1e-300)))
    rows = [["rank"] + names] + [[r] + [float(spectra[nm][r]) for nm in names] for r in range(k)]
    payload = {"symbol": a.name, "d": d, "grid": res, "nodal_size": g.size, "nmax": nmax,
               "top": k, "max_relative_gap": gaps, "spectra": spectra,
               "transform_provenance": T.provenance, "kernel_reach": T.reach.max_arg}
    return Report(payload, rows, ops, {"spectra_rel": 1e-4})


def cmd_kernel(cfg: RunConfig) -> Report:
    d = cfg.d
    tmax = float(cfg.extra.get("tmax", 20.0))
    npts = int(cfg.extra.get("points", 201))
    nmax = 40 if cfg.nmax is None else cfg.nmax
    t = np.linspace(0.0, tmax, npts)
    kappa = herglotz.repro_kernel(d, t)
    rows = [["t", "kappa", "series", "abs_diff"]]
    worst = 0.0
    for ti, ki in zip(t, kappa):
        x = np.zeros(d)
        x[0] = ti
        s = herglotz.kernel_series(d, x, np.zeros(d), nmax)
        diff = abs(s - ki)
        if ti <= 3.0:
            worst = max(worst, diff)
        rows.append([float(ti), float(ki), float(s), float(diff)])
    payload = {"d": d, "nmax": nmax, "tmax": tmax, "points": npts,
               "max_series_error_t_le_3": worst}
    return Report(payload, rows, ["herglotz.repro_kernel", "herglotz.kernel_series"],
                  {"series_abs": 1e-8})


def cmd_degenerate(cfg: RunConfig) -> Report:
    d = cfg.d
    a = from_spec(cfg.symbol or "gauss:s=1")
    R0 = float(cfg.extra.get("R0", 3.0))
    nmax = 4 if cfg.nmax is None else cfg.nmax
    R = 60.0 if cfg.R is None else cfg.R
    tol = 1e-4 if cfg.tol is None else cfg.tol
    deg = symbol_lab.degenerate_part(a, symbol_lab.CutoffWindow(R0), d)
    l1 = a.l1_norm(d)
    basis = [(i.n, i.j) for i in _indices(d, nmax)]
    fields = {b: herglotz.HerglotzField(SphereFunction.basis(d, *b)) for b in basis}
    rows = [["n", "j", "m", "l", "F_deg_abs", "F_a_re", "F_a_im", "F_deg_over_L1",
             "F_a_over_L1"]]
    worst, best = 0.0, 0.0
    for p in basis:
        for q in basis:
            fd = symbol_lab.form_quadrature(deg, fields[p], fields[q], R)
            fa = symbol_lab.form_quadrature(a, fields[p], fields[q], R)
            if not (fd.tail_ok and fa.tail_ok):
                raise ModuleFlag("tail-bound", "form quadrature tail check failed",
                                 {"pair": [p, q], "R": R})
            worst = max(worst, abs(fd.value) / l1)
            best = max(best, abs(fa.value) / l1)
            rows.append([p[0], p[1], q[0], q[1], float(abs(fd.value)), float(fa.value.real),
                         float(fa.value.imag), float(abs(fd.value) / l1),
                         float(abs(fa.value) / l1)])
    payload = {"symbol": a.name, "d": d, "R0": R0, "nmax": nmax, "R": R, "L1": l1,
               "max_F_deg_over_L1": worst, "max_F_a_over_L1": best,
               "degenerate_ok": worst <= tol, "symbol_visible": best >= 1e-2}
    return Report(payload, rows, ["symbol_lab.degenerate_part", "symbol_lab.form_quadrature",
                                  "symbols.RadialSymbol.l1_norm"],
                  {"F_deg_over_L1": tol, "F_a_over_L1_min": 1e-2})


def _indices(d: int, nmax: int):
    from .specfun import harmonic_indices
    return harmonic_indices(d, nmax)


def cmd_bounds(cfg: RunConfig) -> Report:
    d = cfg.d
    ops = []
    payload: dict = {"d": d}
    if "beta" in cfg.extra:
        T = symbol_lab.power_transform(float(cfg.extra["beta"]), d)
        payload["transform"] = T.name
    else:
        a = from_spec(cfg.symbol or "gauss:s=1")
        T = sphere_op.transform_of(a, d)
        payload["transform"] = T.name
        ops.append("sphere_op.transform_of")
    b = symbol_lab.boundedness_constant(T, d)
    ops.append("symbol_lab.boundedness_constant")
    payload["bound"] = b.to_dict()
    if b.divergent:
        raise ModuleFlag("divergence", "boundedness integral diverges", payload)
    if "lam" in cfg.extra:
        a = from_spec(cfg.symbol or "power:mu=2")
        payload["hd"] = symbol_lab.hd_check(a, float(cfg.extra["lam"]), d).to_dict()
        ops.append("symbol_lab.hd_check")
    if "gauge" in cfg.extra:
        gauge = from_spec(cfg.extra["gauge"])
        payload["argf"] = symbol_lab.argf_check(gauge, d).to_dict()
        ops.append("symbol_lab.argf_check")
    return Report(payload, None, ops, {})


def cmd_hconv(cfg: RunConfig) -> Report:
    d = cfg.d
    spec_a = (cfg.symbol or "sphere:cos").removeprefix("sphere:")
    spec_b = cfg.extra.get("symbol_b", "sphere:2+sin").removeprefix("sphere:")
    a, b = hconv.sphere_symbol(spec_a, d), hconv.sphere_symbol(spec_b, d)
    ladder = _ints(cfg.extra.get("nmax_ladder", "8,16,32" if d == 2 else "4,8"))
    R = 400.0 if cfg.R is None else cfg.R
    u = herglotz.HerglotzField(_basis(d, cfg.extra.get("u", "0,1")))
    v = herglotz.HerglotzField(_basis(d, cfg.extra.get("v", "0,1")))
    rep = hconv.algebra_checks(a, b, d, ladder)
    fac = hconv.verify_factorization(u, v, (R, 2 * R))
    conv = hconv.hconvolve(u, v, (R, 2 * R))
    target = hconv._product_target(u, v)
    payload = rep.to_dict()
    payload.update({"d": d, "a": a.name, "b": b.name, "residuals": fac.to_dict(),
                    "hconvolve": {"method": conv.method, "ladder": [R, 2 * R],
                                  "extrapolation_residual": conv.residual,
                                  "converged": conv.converged,
                                  "error_vs_product": (conv.density - target).norm()}})
    if not conv.converged:
        raise ModuleFlag("non-convergence", "h-convolution ladder did not converge", payload)
    return Report(payload, None, ["hconv.algebra_checks", "hconv.verify_factorization",
                                  "hconv.hconvolve"],
                  {"nodal_exact": 1e-12, "factorization": 0.05})


def _ladder_table(values: list, radii: list, name: str) -> list:
    rows = [["R", name, "ratio_to_previous"]]
    for i, (R, v) in enumerate(zip(radii, values)):
        ratio = v / values[i - 1] if i and values[i - 1] > 0 else math.nan
        rows.append([float(R), float(v), float(ratio)])
    return rows


def cmd_isometry(cfg: RunConfig) -> Report:
    d = cfg.d
    phi = _basis(d, cfg.extra.get("u", "0,1"))
    radii = _floats(cfg.extra.get("R_ladder", "125,250,500,1000"))
    dev = [herglotz.isometry_deviation(phi, R) for R in radii]
    payload = {"d": d, "basis": cfg.extra.get("u", "0,1"), "radii": radii, "deviation": dev}
    return Report(payload, _ladder_table(dev, radii, "deviation"),
                  ["herglotz.isometry_deviation"], {"deviation_at_500": 0.02})


def cmd_farfield(cfg: RunConfig) -> Report:
    d = cfg.d
    phi = _basis(d, cfg.extra.get("u", "1,1"))
    radii = _floats(cfg.extra.get("R_ladder", "100,200,400"))
    mode = cfg.extra.get("mode", "shell")
    res = [herglotz.far_field_residual(phi, R, mode=mode) for R in radii]
    payload = {"d": d, "basis": cfg.extra.get("u", "1,1"), "mode": mode, "radii": radii,
               "residual": res}
    return Report(payload, _ladder_table(res, radii, "residual"),
                  ["herglotz.far_field_residual"], {"ratio": 0.8})


_DISPATCH = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="herglotz-lab",
                                description="Toeplitz operators on Herglotz spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, symbol_default: str = ""):
        sp.add_argument("--d", type=int, default=2, choices=(2, 3))
        sp.add_argument("--symbol", default=symbol_default)
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--out", help="directory for the artifact and its manifest")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        return sp

    s = common(sub.add_parser("gamma", help="spectral sequence + oracle comparison"),
               "power:mu=2")
    s.add_argument("--method", choices=("continuation", "compact", "split", "taper"))
    s = common(sub.add_parser("spectrum", help="sphere-operator eigenvalues, all paths"),
               "exp")
    s.add_argument("--grid", type=int)
    s.add_argument("--top", type=int, default=20)
    s = common(sub.add_parser("kernel", help="reproducing kernel table"))
    s.add_argument("--tmax", type=float, default=20.0)
    s.add_argument("--points", type=int, default=201)
    s = common(sub.add_parser("degenerate", help="form residuals of the degenerate part"),
               "gauss:s=1")
    s.add_argument("--R0", type=float, default=3.0)
    s.add_argument("--R", type=float)
    s.add_argument("--tol", type=float)
    s = common(sub.add_parser("bounds", help="boundedness constant, HD and gauge checks"))
    s.add_argument("--beta", type=float, help="use a_hat = |zeta|^-beta directly")
    s.add_argument("--lam", type=float, help="exponent for the HD growth check")
    s.add_argument("--gauge", help="radial symbol spec for the gauge check")
    s = common(sub.add_parser("hconv", help="algebra and factorization report"), "sphere:cos")
    s.add_argument("--symbol-b", default="sphere:2+sin")
    s.add_argument("--nmax-ladder")
    s.add_argument("--R", type=float)
    s.add_argument("--u", default="0,1", help="basis field n,j of the first factor")
    s.add_argument("--v", default="0,1", help="basis field n,j of the second factor")
    s = common(sub.add_parser("isometry", help="B*-norm ladder"))
    s.add_argument("--u", default="0,1")
    s.add_argument("--R-ladder", default="125,250,500,1000")
    s = common(sub.add_parser("farfield", help="far-field residual ladder"))
    s.add_argument("--u", default="1,1")
    s.add_argument("--R-ladder", default="100,200,400")
    s.add_argument("--mode", choices=("shell", "sphere"), default="shell")
    return p


_CORE = {"command", "d", "symbol", "nmax", "grid", "R", "tol", "out", "format"}


def config_from_args(argv=None) -> RunConfig:
    ns = vars(_parser().parse_args(argv))
    extra = {k: v for k, v in ns.items() if k not in _CORE and v is not None}
    core = {k: ns.get(k) for k in _CORE}
    return RunConfig(extra=extra, **core)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    config = asdict(cfg)
    try:
        threads()
        report = _DISPATCH[cfg.command](cfg)
    except ModuleFlag as flag:
        err = {"schema": ERROR_SCHEMA_ID, "command": cfg.command, "error": flag.kind,
               "message": str(flag), "detail": flag.detail, "config": config}
        _emit_error(cfg, err, stdout)
        return 3
    except (ValueError, ArithmeticError, sphere_op.KernelReachError) as exc:
        err = {"schema": ERROR_SCHEMA_ID, "command": cfg.command,
               "error": type(exc).__name__, "message": str(exc), "config": config}
        _emit_error(cfg, err, stdout)
        return 2
    if cfg.format == "json":
        text = dumps({"schema": RESULT_SCHEMA_ID, "command": cfg.command,
                      "result": report.payload, "table": report.table})
    else:
        rows = report.table if report.table is not None else \
            [["key", "value"]] + _flatten(report.payload)
        text = _csv(rows)
    name = f"{cfg.command}.{cfg.format}"
    manifest = build_manifest(cfg.command, config, report.tolerances, [name],
                              operations=report.operations)
    if cfg.out:
        write_atomic(Path(cfg.out) / name, text)
        write_atomic(Path(cfg.out) / f"{cfg.command}.manifest.json", dumps(manifest))
    else:
        stdout.write(text)
        stderr.write(dumps(manifest))
    return 0


def _emit_error(cfg: RunConfig, err: dict, stdout):
    text = dumps(err)
    stdout.write(text)
    if cfg.out:
        write_atomic(Path(cfg.out) / f"{cfg.command}.error.json", text)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except SystemExit as exc:       # argparse usage error or --help
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
