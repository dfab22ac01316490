"""Command-line harness for the identity checks.

    verify list
    verify run --check ell_binomial --set s=2
    verify run --config checks.cfg --out report.json
    verify grid --fn K_s --xmin -0.5 --xmax 0.5 --ymin 0.8 --ymax 2 --nx 20 --ny 20 --out k.csv

Each check compares two independently computed sides of an identity and
reports the residual, the truncation tails and a verdict.  Exit status is 0
when every check passes, 1 if any fails, 2 if some are inconclusive (and none
fail) and 3 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import __version__
from .eisenstein import (elliptic, elliptic_via_k_series, hyperbolic, hyperbolic_via_integral, parabolic,
                         parabolic_via_horocycle, pde_residual_elliptic, pde_residual_hyperbolic)
from .errors import AutomorphicError, DivergenceError, DomainError, SingularityError
from .hyperbolic_geometry import cosh_dist, dist_to_line
from .kernels import (TruncationBudget, automorphic_K, greens_contour, greens_function, heat_kernel_M,
                      heat_profile, poisson_scalar, wave_action)
from .modular_group import EllipticPointData, GroupElement, HyperbolicClassData, standard_fixtures
from .selberg_transform import (DEFAULT_CONFIG, QuadratureConfig, RadialKernel, TestFunction, forward_transform,
                                h_transform, series_identity_G, series_identity_G_tilde, shift_identity)
from .special_functions import a_coeff, conical_half, legendre_p_conical, legendre_q, legendre_q_spectral

__all__ = [
    "CheckSpec",
    "CheckReport",
    "CHECKS",
    "GRID_FUNCTIONS",
    "run",
    "run_one",
    "emit_grid",
    "parse_config",
    "exit_code",
    "main",
]

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    """Unknown check, malformed parameter or unreadable configuration."""


# ---------------------------------------------------------------------------
# Parameter parsing
# ---------------------------------------------------------------------------

_NAMED_POINTS = {"i": 1j, "rho": complex(0.5, math.sqrt(3.0) / 2.0)}


def parse_complex(text) -> complex:
    """Accept 2i, 1+i, 0.5-2.5i, i, rho and plain Python complex literals."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    t = str(text).strip().replace(" ", "")
    if t in _NAMED_POINTS:
        return _NAMED_POINTS[t]
    t = t.replace("I", "i").replace("j", "i")
    if t.endswith("i"):
        head = t[:-1]
        if head in ("", "+", "-") or head[-1] in "+-":
            t = head + "1i"
    try:
        return complex(t.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as a complex number") from exc


def parse_element(text) -> GroupElement:
    if isinstance(text, GroupElement):
        return text
    try:
        a, b, c, d = (int(v) for v in str(text).replace(";", ",").strip("()").split(","))
        return GroupElement(a, b, c, d)
    except (ValueError, DomainError) as exc:
        raise UsageError(f"cannot parse {text!r} as a PSL(2,Z) element a,b,c,d") from exc


def _real(text) -> float:
    v = parse_complex(text)
    if v.imag != 0:
        raise UsageError(f"expected a real number, got {text!r}")
    return v.real


def _int(text) -> int:
    try:
        return int(str(text))
    except ValueError as exc:
        raise UsageError(f"expected an integer, got {text!r}") from exc


def _flag(text) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _text(text) -> str:
    return str(text).strip()


_PARSERS: dict[str, Callable] = {
    "s": parse_complex, "z": parse_complex, "w": parse_complex, "r": parse_complex, "nu": parse_complex,
    "beta": parse_complex, "u": _real, "a": _real, "delta": _real, "T": _real, "b": _real, "t": _real,
    "lam": parse_complex, "Z": parse_complex, "rho": _real, "n": _int, "kmax": _int, "h": _real,
    "gamma": parse_element, "bound": _real, "direct_bound": _real, "quadrature": _flag, "normalization": _text,
}

_BUDGET_KEYS = {"group_bound": _real, "series_kmax": _int, "tail_policy": _text, "tail_tol": _real,
                "complete_tail": _flag}
_QUAD_KEYS = {f.name: (_int if f.type in ("int", int) else _real) for f in fields(QuadratureConfig)}


def _elliptic_data(w: complex) -> EllipticPointData:
    _, ell_i, ell_rho, _ = standard_fixtures()
    for data in (ell_i, ell_rho):
        if abs(data.w.z - w) < 1e-12:
            return data
    return EllipticPointData.at(w, 1)


# ---------------------------------------------------------------------------
# Specs and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    params: dict = field(default_factory=dict)
    budget: Optional[TruncationBudget] = None
    quad: QuadratureConfig = DEFAULT_CONFIG
    tolerance: Optional[float] = None

    def __post_init__(self):
        if self.check_id not in CHECKS:
            raise UsageError(f"unknown check_id {self.check_id!r}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("tolerance must be > 0")

    def resolved(self) -> "CheckSpec":
        """Spec with registry defaults filled in for anything unset."""
        entry = CHECKS[self.check_id]
        params = dict(entry.defaults)
        unknown = set(self.params) - set(entry.defaults)
        if unknown:
            raise UsageError(f"{self.check_id}: unknown parameter(s) {sorted(unknown)}")
        params.update(self.params)
        try:
            params = {k: _PARSERS[k](v) for k, v in params.items()}
        except AutomorphicError as exc:
            raise UsageError(str(exc)) from exc
        budget = self.budget if self.budget is not None else entry.budget
        tol = self.tolerance if self.tolerance is not None else entry.tolerance
        return replace(self, params=params, budget=budget, tolerance=tol)

    def to_json(self) -> dict:
        spec = self.resolved()
        return {
            "check_id": spec.check_id,
            "params": {k: _jsonable(v) for k, v in spec.params.items()},
            "budget": asdict(spec.budget),
            "quad": asdict(spec.quad),
            "tolerance": spec.tolerance,
        }


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    params: dict
    lhs: complex
    rhs: complex
    residual: float
    tail_estimates: dict
    elapsed: float
    verdict: str
    tolerance: float
    error: Optional[str] = None

    @staticmethod
    def decide(residual: float, tails: dict, tolerance: float) -> str:
        """pass iff residual <= tol and the summed tails <= tol; inconclusive
        when only the tails are too large."""
        if not math.isfinite(residual) or residual > tolerance:
            return "fail"
        return "pass" if sum(tails.values()) <= tolerance else "inconclusive"

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs": _jsonable(complex(self.lhs)),
            "rhs": _jsonable(complex(self.rhs)),
            "residual": self.residual if math.isfinite(self.residual) else None,
            "tail_estimates": {k: float(v) for k, v in self.tail_estimates.items()},
            "elapsed": self.elapsed,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
            "error": self.error,
        }


def _jsonable(v):
    if isinstance(v, complex):
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            return None
        return {"re": v.real, "im": v.imag}
    if isinstance(v, GroupElement):
        return list(v.entries)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    """lhs, rhs, residual (already scaled) and tails on the same scale."""

    lhs: complex
    rhs: complex
    residual: float
    tails: dict


def _relative(lhs, rhs, tails: Optional[dict] = None) -> Outcome:
    scale = abs(rhs) if rhs != 0 else 1.0
    return Outcome(complex(lhs), complex(rhs), abs(lhs - rhs) / scale,
                   {k: float(v) / scale for k, v in (tails or {}).items()})


def _absolute(lhs, rhs, tails: Optional[dict] = None) -> Outcome:
    return Outcome(complex(lhs), complex(rhs), abs(lhs - rhs), {k: float(v) for k, v in (tails or {}).items()})


def _bud(b: TruncationBudget, group_bound: float) -> TruncationBudget:
    return replace(b, group_bound=group_bound)


def _check_transform_closed_form(p, budget, quad):
    lhs = h_transform(TestFunction.g_s(p["s"]), p["r"], quad)
    return _relative(lhs, a_coeff(0.5 + 1j * p["r"], p["s"]))


def _check_wave_equals_K(p, budget, quad):
    pipe = wave_action(p["z"], p["w"], TestFunction.g_s(p["s"]), budget, quad, pipeline=True)
    direct = automorphic_K(p["z"], p["w"], p["s"], budget)
    # the two sums share the orbit set, so only the kernel-level tail matters
    return _relative(pipe.value, direct.value, {"K_s": direct.tail_estimate})


def _check_shift_identity(p, budget, quad):
    res = shift_identity(p["r"], p["s"], p["n"], quad, quadrature=p["quadrature"])
    return _relative(res.rhs, res.lhs)


def _check_hyp_integral(p, budget, quad):
    data = HyperbolicClassData.from_element(p["gamma"])
    integ = hyperbolic_via_integral(p["z"], p["s"], data, budget, quad)
    direct = hyperbolic(p["z"], p["s"], data, budget=_bud(budget, p["direct_bound"]))
    return _relative(integ.value, direct.value, {"geodesic_integral": integ.tail_estimate,
                                                 "direct": direct.tail_estimate})


def _check_beardon_triangle(p, budget, quad):
    z, rho = p["z"], p["rho"]
    lhs = cosh_dist(z, 1j * math.exp(rho))
    rhs = math.cosh(rho - math.log(abs(z))) * math.cosh(dist_to_line(z))
    return _relative(lhs, rhs)


def _check_ell_binomial(p, budget, quad):
    data = _elliptic_data(p["w"])
    ks = elliptic_via_k_series(p["z"], p["s"], data, kmax=p["kmax"], budget=budget)
    direct = elliptic(p["z"], p["s"], data, budget=budget)
    return _relative(ks.value, direct.value, {"k_series": ks.tail_estimate, "direct": direct.tail_estimate})


def _check_G_series(p, budget, quad):
    res = series_identity_G(p["s"], p["beta"], p["u"])
    return _absolute(res.lhs, res.rhs, {"series": res.tail_estimate})


def _check_G_tilde_series(p, budget, quad):
    res = series_identity_G_tilde(p["nu"], p["beta"], p["u"])
    return _absolute(res.lhs, res.rhs, {"series": res.tail_estimate})


def _check_sinh_transform_guard(p, budget, quad):
    # lhs: 1 if the transform reported divergence; rhs: 1 if it should
    k = RadialKernel.sinh_power(p["s"])
    expected = 1.0 if complex(p["s"]).real / 2.0 >= 1.0 else 0.0
    try:
        _, _, h = forward_transform(k, 0.0, quad)
        observed = 0.0 if np.isfinite(h) else 1.0
    except DivergenceError:
        observed = 1.0
    return _absolute(observed, expected)


def _check_legendre_split(p, budget, quad):
    r, u = p["r"], p["u"]
    lhs = legendre_p_conical(r.real, 1.0 + 2.0 * u)
    rhs = conical_half(0.5 + 1j * r, u) + conical_half(0.5 - 1j * r, u)
    return _absolute(lhs, complex(rhs))


def _check_Q_contour(p, budget, quad):
    s, b = p["s"].real, p["b"]
    val, err = legendre_q_spectral(s, math.cosh(b))
    return _relative(val, complex(legendre_q(s - 1.0, math.cosh(b))), {"quadrature": err})


def _check_greens_contour(p, budget, quad):
    cont = greens_contour(p["z"], p["w"], p["s"], p["delta"], p["T"], budget, quad)
    direct = greens_function(p["z"], p["w"], p["s"], budget)
    return _relative(cont.value, direct.value, {"contour_truncation": cont.truncation_error,
                                                "imag_part": abs(cont.imag_part),
                                                "direct": direct.tail_estimate})


def _check_par_horocycle(p, budget, quad):
    horo = parabolic_via_horocycle(p["z"], p["s"], p["a"], budget, quad, normalization=p["normalization"])
    direct = parabolic(p["z"], p["s"])
    return _relative(horo.value, direct.value, {"horocycle_integral": horo.tail_estimate,
                                                "direct": direct.tail_estimate})


def _check_pde_hyp(p, budget, quad):
    data = HyperbolicClassData.from_element(p["gamma"])
    _, lhs, rhs = pde_residual_hyperbolic(p["z"], p["s"], data, budget.group_bound, p["h"])
    return _absolute(lhs, rhs)


def _check_pde_ell(p, budget, quad):
    _, lhs, rhs = pde_residual_elliptic(p["z"], p["s"], _elliptic_data(p["w"]), budget.group_bound, p["h"])
    return _absolute(lhs, rhs)


def _check_heat_mass(p, budget, quad):
    prof = heat_profile(p["t"], p["rho"])
    total = 2.0 * math.pi * prof.table.integral(np.sinh, prof.rho_max)
    return _absolute(complex(total), 1.0)


def _check_poisson_scalar(p, budget, quad):
    lhs = complex(poisson_scalar(p["lam"], p["u"], p["Z"])[0])
    rhs = complex(np.exp(-p["u"] * np.sqrt(p["lam"] + p["Z"])))
    return _absolute(lhs, rhs)


@dataclass(frozen=True)
class CheckEntry:
    fn: Callable
    defaults: dict
    tolerance: float
    budget: TruncationBudget
    summary: str


_B60 = TruncationBudget()
CHECKS: dict[str, CheckEntry] = {
    "transform_closed_form": CheckEntry(_check_transform_closed_form, {"s": 3, "r": 0.5}, 1e-8, _B60,
                                       "cosine transform of g_s equals a_{1/2+ir}(s)"),
    "wave_equals_K": CheckEntry(_check_wave_equals_K, {"z": "2i", "w": "1+i", "s": 3}, 1e-5,
                                TruncationBudget(group_bound=200.0),
                                "numerical H -> k -> group-sum pipeline for g_s equals K_s"),
    "shift_identity": CheckEntry(_check_shift_identity, {"s": 1.5, "n": 1, "r": 0, "quadrature": 0}, 1e-10, _B60,
                                 "H(r, g_s) equals the Pochhammer factor times H(r, g_{s+2n})"),
    "hyp_integral": CheckEntry(_check_hyp_integral, {"z": "2i", "s": 3, "gamma": "2,1,1,1", "direct_bound": 200},
                               1e-5, TruncationBudget(group_bound=100.0),
                               "geodesic integral of K_s equals the hyperbolic Eisenstein series"),
    "beardon_triangle": CheckEntry(_check_beardon_triangle, {"z": "0.3+0.7i", "rho": 0.4}, 1e-10, _B60,
                                   "right-triangle cosine rule against the imaginary axis"),
    "ell_binomial": CheckEntry(_check_ell_binomial, {"z": "2i", "w": "i", "s": 3, "kmax": 60}, 1e-6, _B60,
                               "binomial k-series of K_{s+2k} equals the elliptic Eisenstein series"),
    "G_series": CheckEntry(_check_G_series, {"s": 2.2, "beta": 3, "u": 1.0}, 1e-10, _B60,
                           "G_{s,beta} equals its g_{s+2k,beta} series"),
    "sinh_transform_guard": CheckEntry(_check_sinh_transform_guard, {"s": 2.5}, 0.5, _B60,
                                       "sinh^{-s} transform diverges exactly when s >= 2"),
    "legendre_split": CheckEntry(_check_legendre_split, {"r": 1, "u": 1.0}, 1e-9, _B60,
                                 "conical P equals the sum of its two hypergeometric halves"),
    "Q_contour": CheckEntry(_check_Q_contour, {"s": 2, "b": 1.0}, 1e-6, _B60,
                            "conical expansion of Q_{s-1} equals the hypergeometric Q_{s-1}"),
    "greens_contour": CheckEntry(_check_greens_contour, {"z": "2i", "w": "1+i", "s": 2, "delta": 0.25, "T": 400},
                                 5e-3, TruncationBudget(group_bound=40.0),
                                 "vertical-line integral over the hypergeometric kernel equals G_s"),
    "G_tilde_series": CheckEntry(_check_G_tilde_series, {"nu": 2.2, "beta": 3, "u": 1.0}, 1e-10, _B60,
                                 "G~_{nu,beta} equals its b_k(nu) series"),
    "par_horocycle": CheckEntry(_check_par_horocycle, {"z": "i", "s": 2, "a": 10.0, "normalization": "euclidean"},
                                1e-4, TruncationBudget(group_bound=100.0),
                                "horocycle integral of G_s equals the parabolic Eisenstein series"),
    "pde_hyp": CheckEntry(_check_pde_hyp, {"z": "2i", "s": 3, "gamma": "2,1,1,1", "h": 5e-4}, 1e-4, _B60,
                          "(Delta - s(1-s)) E_hyp(s) = s^2 E_hyp(s+2) by finite differences"),
    "pde_ell": CheckEntry(_check_pde_ell, {"z": "2i", "w": "i", "s": 3, "h": 5e-4}, 1e-4, _B60,
                          "(Delta - s(1-s)) E_ell(s) = -s^2 E_ell(s+2) by finite differences"),
    "heat_mass": CheckEntry(_check_heat_mass, {"t": 1.0, "rho": 14.0}, 1e-4, _B60,
                            "plane heat kernel integrates to 1"),
    "poisson_scalar": CheckEntry(_check_poisson_scalar, {"lam": 2, "Z": 0.25, "u": 1.3}, 1e-9, _B60,
                                 "t-integral of the heat weight equals exp(-u sqrt(lam + Z))"),
}


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

def run_one(spec: CheckSpec) -> CheckReport:
    spec = spec.resolved()
    entry = CHECKS[spec.check_id]
    t0 = time.perf_counter()
    try:
        out = entry.fn(spec.params, spec.budget, spec.quad)
    except AutomorphicError as exc:
        elapsed = time.perf_counter() - t0
        nan = complex(math.nan, math.nan)
        return CheckReport(spec.check_id, spec.params, nan, nan, math.inf, {}, elapsed, "fail",
                           spec.tolerance, f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - t0
    verdict = CheckReport.decide(out.residual, out.tails, spec.tolerance)
    return CheckReport(spec.check_id, spec.params, out.lhs, out.rhs, float(out.residual), out.tails, elapsed,
                       verdict, spec.tolerance)


def run(specs: list[CheckSpec], jobs: int = 1) -> list[CheckReport]:
    """One report per spec, in input order."""
    specs = [s.resolved() for s in specs]
    if jobs <= 1 or len(specs) <= 1:
        return [run_one(s) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_one, specs))


def exit_code(reports: list[CheckReport]) -> int:
    verdicts = {r.verdict for r in reports}
    if "fail" in verdicts:
        return EXIT_FAIL
    if "inconclusive" in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def make_spec(check_id: str, settings: dict) -> CheckSpec:
    """Split flat key=value settings into params, budget, quadrature and tolerance."""
    if check_id not in CHECKS:
        raise UsageError(f"unknown check_id {check_id!r}")
    entry = CHECKS[check_id]
    params, bud, quad, tol = {}, {}, {}, None
    for k, v in settings.items():
        if k == "tolerance":
            tol = _real(v)
        elif k in _BUDGET_KEYS:
            bud[k] = _BUDGET_KEYS[k](v)
        elif k in _QUAD_KEYS:
            quad[k] = _QUAD_KEYS[k](v)
        elif k in _PARSERS:
            params[k] = v
        else:
            raise UsageError(f"unknown key {k!r}")
    try:
        budget = replace(entry.budget, **bud) if bud else None
        qcfg = replace(DEFAULT_CONFIG, **quad)
    except AutomorphicError as exc:
        raise UsageError(str(exc)) from exc
    return CheckSpec(check_id, params, budget, qcfg, tol)


def parse_config(text: str) -> list[CheckSpec]:
    """Blank-line separated blocks of ``key = value`` lines, each with a check_id."""
    specs, block = [], {}

    def flush():
        if block:
            if "check_id" not in block:
                raise UsageError("config block without check_id")
            cid = block.pop("check_id")
            specs.append(make_spec(cid, dict(block)))
            block.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if "=" not in line:
            raise UsageError(f"line {lineno}: expected key = value")
        k, v = (part.strip() for part in line.split("=", 1))
        if k in block:
            raise UsageError(f"line {lineno}: duplicate key {k!r}")
        block[k] = v
    flush()
    return specs


def report_document(specs: list[CheckSpec], reports: list[CheckReport]) -> dict:
    return {"version": __version__, "specs": [s.to_json() for s in specs],
            "reports": [r.to_json() for r in reports]}


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

def _grid_K(z, p, budget):
    kv = automorphic_K(z, p["w"], p["s"], budget)
    return kv.value, kv.tail_estimate


def _grid_G(z, p, budget):
    kv = greens_function(z, p["w"], p["s"], budget)
    return kv.value, kv.tail_estimate


def _grid_heat(z, p, budget):
    kv = heat_kernel_M(z, p["w"], p["t"], budget)
    return kv.value, kv.tail_estimate


def _grid_par(z, p, budget):
    ev = parabolic(z, p["s"])
    return ev.value, ev.tail_estimate


def _grid_hyp(z, p, budget):
    ev = hyperbolic(z, p["s"], HyperbolicClassData.from_element(p["gamma"]), budget=budget)
    return ev.value, ev.tail_estimate


def _grid_ell(z, p, budget):
    ev = elliptic(z, p["s"], _elliptic_data(p["w"]), budget=budget)
    return ev.value, ev.tail_estimate


GRID_FUNCTIONS: dict[str, tuple[Callable, dict]] = {
    "K_s": (_grid_K, {"w": "1+i", "s": 3}),
    "E_par": (_grid_par, {"s": 2}),
    "E_hyp": (_grid_hyp, {"s": 3, "gamma": "2,1,1,1"}),
    "E_ell": (_grid_ell, {"s": 3, "w": "i"}),
    "G_s": (_grid_G, {"w": "1+i", "s": 2}),
    "heat_M": (_grid_heat, {"w": "1+i", "t": 1.0}),
}


def emit_grid(function_id: str, region: tuple[float, float, float, float], resolution: tuple[int, int],
              params: dict, budget: TruncationBudget, out) -> int:
    """Write CSV rows x, y, re, im, tail_estimate over a rectangle; returns row count.

    The header is a block of ``# key = value`` comment lines recording every
    parameter, followed by the column names.  Single-row or single-column
    grids sit at xmin (or ymin).
    """
    if function_id not in GRID_FUNCTIONS:
        raise UsageError(f"unknown grid function {function_id!r}")
    xmin, xmax, ymin, ymax = region
    nx, ny = resolution
    if nx < 1 or ny < 1:
        raise UsageError("grid resolution must be >= 1")
    if ymin <= 0 or ymax <= 0:
        raise DomainError("grid region must lie in y > 0")
    fn, defaults = GRID_FUNCTIONS[function_id]
    unknown = set(params) - set(defaults)
    if unknown:
        raise UsageError(f"{function_id}: unknown parameter(s) {sorted(unknown)}")
    params = {**defaults, **params}
    parsed = {k: _PARSERS[k](v) for k, v in params.items()}
    xs = np.linspace(xmin, xmax, nx) if nx > 1 else np.array([xmin])
    ys = np.linspace(ymin, ymax, ny) if ny > 1 else np.array([ymin])
    out.write(f"# function = {function_id}\n")
    out.write(f"# region = {xmin!r},{xmax!r},{ymin!r},{ymax!r}\n# resolution = {nx},{ny}\n")
    for k, v in sorted(params.items()):
        out.write(f"# {k} = {v}\n")
    for k, v in asdict(budget).items():
        out.write(f"# {k} = {v}\n")
    writer = csv.writer(out)
    writer.writerow(["x", "y", "re", "im", "tail_estimate"])
    rows = 0
    for y in ys:
        for x in xs:
            try:
                val, tail = fn(complex(x, y), parsed, budget)
            except SingularityError:
                # point on the singular orbit: keep the row, mark it undefined
                val, tail = complex(math.nan, math.nan), math.inf
            val = complex(val)
            writer.writerow([repr(float(x)), repr(float(y)), repr(val.real), repr(val.imag), repr(float(tail))])
            rows += 1
    return rows


def read_grid(path) -> tuple[dict, np.ndarray]:
    """Parse a CSV written by emit_grid into (header dict, array of rows)."""
    header, rows = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                k, v = (p.strip() for p in line[1:].split("=", 1))
                header[k] = v
            elif line.startswith("x,"):
                continue
            elif line.strip():
                rows.append([float(v) for v in line.strip().split(",")])
    return header, np.array(rows)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def _settings(pairs: list[str]) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Run automorphic identity checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run checks and print a JSON report")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="file of key = value blocks")
    src.add_argument("--check", help="single check id")
    p_run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="parameter, budget or tolerance override (with --check)")
    p_run.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")
    p_run.add_argument("--jobs", type=int, default=1, help="worker processes")

    p_grid = sub.add_parser("grid", help="tabulate a function over a rectangle")
    p_grid.add_argument("--fn", required=True, choices=sorted(GRID_FUNCTIONS))
    for name in ("xmin", "xmax", "ymin", "ymax"):
        p_grid.add_argument(f"--{name}", type=float, required=True)
    p_grid.add_argument("--nx", type=int, default=10)
    p_grid.add_argument("--ny", type=int, default=10)
    p_grid.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_grid.add_argument("--group-bound", type=float, default=60.0)
    p_grid.add_argument("--out", type=Path, required=True)

    sub.add_parser("list", help="list registered checks")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "list":
            for cid, entry in CHECKS.items():
                defaults = " ".join(f"{k}={v}" for k, v in entry.defaults.items())
                print(f"{cid:<22} tol={entry.tolerance:<8g} {defaults}  # {entry.summary}")
            return EXIT_PASS
        if args.command == "grid":
            bud = TruncationBudget(group_bound=args.group_bound)
            with open(args.out, "w", newline="") as fh:
                emit_grid(args.fn, (args.xmin, args.xmax, args.ymin, args.ymax), (args.nx, args.ny),
                          _settings(args.set), bud, fh)
            return EXIT_PASS
        if args.config is not None:
            if args.set:
                raise UsageError("--set is only valid with --check")
            specs = parse_config(args.config.read_text())
        else:
            specs = [make_spec(args.check, _settings(args.set))]
        specs = [s.resolved() for s in specs]
    except (UsageError, OSError, DomainError, KeyError) as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return EXIT_USAGE

    reports = run(specs, jobs=args.jobs)
    doc = json.dumps(report_document(specs, reports), indent=2)
    if args.out:
        args.out.write_text(doc + "\n")
    else:
        print(doc)
    for r in reports:
        print(f"{r.check_id}: {r.verdict} (residual {r.residual:.3e}, tol {r.tolerance:g})", file=sys.stderr)
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
