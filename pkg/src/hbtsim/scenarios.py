"""Scenario configuration, presets, runners, and report I/O for the CLI.

A scenario is described by a flat key=value mapping (preset, config file, and
command-line overrides all produce the same keys).  `run_scenario` computes
the analytic coincidence curve over the configured scan, optionally runs the
Monte Carlo sampler and fringe fit, writes CSV curves plus a JSON report, and
returns the report.  Reports are deterministic for a given config and seed
apart from the timing block.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import epr as epr_mod
from . import wavepacket as wp
from .classical import ClassicalParams, classical_visibility, correlation_analytic, correlation_mc
from .epr import EprParams, entanglement_diagnostic, epr_dx_marginal, epr_fringe_period
from .errors import NoFringeError
from .sampling import FringeModel, SamplerConfig, fit_fringes, fringe_shape, histogram_dx, sample_pairs
from .wavepacket import PacketParams, dx_marginal, fringe_period, visibility_envelope


class ConfigError(ValueError):
    """Invalid scenario configuration; message names the offending field."""


SCENARIOS = (
    "classical-hbt",
    "independent-bosons",
    "independent-fermions",
    "entangled-epr",
    "ghosh-mandel",
)

PRESETS: dict[str, dict[str, str]] = {
    "classical-hbt": {
        "scenario": "classical-hbt",
        "alpha": "1.0",
        "beta": "1.0",
        "wavelength": "0.15707963267948966",
        "source_separation": "2.0",
        "screen_distance": "100.0",
        "scan.variable": "dx",
        "scan.min": "-20.0",
        "scan.max": "20.0",
        "scan.points": "81",
        "mc.enabled": "true",
        "mc.samples": "20000",
        "mc.seed": "20260810",
    },
    "independent-bosons": {
        "scenario": "independent-bosons",
        "epsilon": "0.2",
        "x0": "1.0",
        "eta": "1",
        "delta": "5.0",
        "scan.variable": "dx",
        "scan.points": "128",
        "mc.enabled": "true",
        "mc.samples": "200000",
        "mc.seed": "20260810",
    },
    "independent-fermions": {
        "scenario": "independent-fermions",
        "epsilon": "0.2",
        "x0": "1.0",
        "eta": "-1",
        "delta": "5.0",
        "scan.variable": "dx",
        "scan.points": "128",
        "mc.enabled": "true",
        "mc.samples": "200000",
        "mc.seed": "20260810",
    },
    "entangled-epr": {
        "scenario": "entangled-epr",
        "sigma": "4.0",
        "omega": "1.0",
        "x0": "1.0",
        "eta": "1",
        "delta_e": "10.0",
        "scan.variable": "dx",
        "scan.points": "128",
        "mc.enabled": "true",
        "mc.samples": "200000",
        "mc.seed": "20260810",
    },
    "ghosh-mandel": {
        "scenario": "ghosh-mandel",
        "epr.sigma": "4.0",
        "epr.omega": "1.0",
        "epr.x0": "1.0",
        "epr.delta_e": "10.0",
        "packet.epsilon": "0.2",
        "packet.x0": "1.0",
        "packet.delta": "5.0",
        "scan.variable": "dx",
        "scan.points": "128",
        "mc.enabled": "true",
        "mc.samples": "200000",
        "mc.seed": "20260810",
    },
}


# ---------------------------------------------------------------------------
# flat-config parsing

def _get(flat, key, cast, default=None, required=False):
    if key not in flat:
        if required:
            raise ConfigError(f"missing required field '{key}'")
        return default
    raw = flat[key]
    try:
        if cast is bool:
            low = str(raw).strip().lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"field '{key}': cannot parse {raw!r} as {cast.__name__}") from None


def _spread_param(flat, prefix, key, factor):
    """Resolve delta-like keys, accepting a wavelength/distance block instead."""
    lam_key, dist_key = prefix + "lambda", prefix + "L"
    has_direct = (prefix + key) in flat
    has_optical = lam_key in flat or dist_key in flat
    if has_direct and has_optical:
        raise ConfigError(
            f"field '{prefix}{key}': give either '{prefix}{key}' or the "
            f"'{lam_key}'/'{dist_key}' pair, not both"
        )
    if has_optical:
        lam = _get(flat, lam_key, float, required=True)
        dist = _get(flat, dist_key, float, required=True)
        try:
            return factor * wp.spread_from_wavelength(lam, dist)
        except ValueError as err:
            raise ConfigError(f"field '{lam_key}/{dist_key}': {err}") from None
    return _get(flat, prefix + key, float, required=True)


def _packet_params(flat, prefix="") -> PacketParams:
    try:
        return PacketParams(
            epsilon=_get(flat, prefix + "epsilon", float, required=True),
            x0=_get(flat, prefix + "x0", float, required=True),
            eta=_get(flat, prefix + "eta", int, default=1),
            delta=_spread_param(flat, prefix, "delta", 1.0),
        )
    except ValueError as err:
        raise ConfigError(f"packet parameters: {err}") from None


def _epr_params(flat, prefix="") -> EprParams:
    try:
        return EprParams(
            sigma=_get(flat, prefix + "sigma", float, required=True),
            omega=_get(flat, prefix + "omega", float, required=True),
            x0=_get(flat, prefix + "x0", float, required=True),
            eta=_get(flat, prefix + "eta", int, default=1),
            delta_e=_spread_param(flat, prefix, "delta_e", 2.0),
        )
    except ValueError as err:
        raise ConfigError(f"entangled-pair parameters: {err}") from None


def _classical_params(flat) -> ClassicalParams:
    lam = _get(flat, "wavelength", float)
    k = _get(flat, "k", float)
    if (lam is None) == (k is None):
        raise ConfigError("field 'k': give exactly one of 'k' or 'wavelength'")
    if k is None:
        if not lam > 0:
            raise ConfigError(f"field 'wavelength': must be positive, got {lam}")
        k = 2.0 * math.pi / lam
    try:
        return ClassicalParams(
            alpha=_get(flat, "alpha", float, required=True),
            beta=_get(flat, "beta", float, required=True),
            k=k,
            source_separation=_get(flat, "source_separation", float, required=True),
            screen_distance=_get(flat, "screen_distance", float, required=True),
            phi=_get(flat, "phi", float),
        )
    except ValueError as err:
        raise ConfigError(f"classical parameters: {err}") from None


@dataclass(frozen=True)
class ScanSpec:
    variable: str
    lo: float
    hi: float
    points: int


@dataclass(frozen=True)
class McSpec:
    enabled: bool
    samples: int
    seed: int
    max_rejection_factor: float


@dataclass(frozen=True)
class OutputSpec:
    directory: Path | None
    formats: tuple[str, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    flat: dict[str, str]
    scan: ScanSpec
    mc: McSpec
    output: OutputSpec
    x1_fixed: float = 0.0
    packet: PacketParams | None = None
    epr: EprParams | None = None
    classical: ClassicalParams | None = None


def parse_config(flat: dict[str, str]) -> ScenarioConfig:
    """Validate a flat key=value mapping and build the typed configuration."""
    flat = {str(k): str(v) for k, v in flat.items()}
    scenario = _get(flat, "scenario", str, required=True)
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"field 'scenario': unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}"
        )

    packet = epr_p = classical = None
    if scenario in ("independent-bosons", "independent-fermions"):
        packet = _packet_params(flat)
        want = 1 if scenario == "independent-bosons" else -1
        if packet.eta != want:
            raise ConfigError(f"field 'eta': scenario {scenario} requires eta={want}")
        scale = wp.marginal_scale(packet)
    elif scenario == "entangled-epr":
        epr_p = _epr_params(flat)
        scale = epr_mod.marginal_scale(epr_p)
    elif scenario == "ghosh-mandel":
        epr_p = _epr_params(flat, prefix="epr.")
        packet = _packet_params(flat, prefix="packet.")
        if epr_p.eta != 1 or packet.eta != 1:
            raise ConfigError("field 'eta': ghosh-mandel compares bosonic scenarios (eta=1)")
        scale = max(epr_mod.marginal_scale(epr_p), wp.marginal_scale(packet))
    else:
        classical = _classical_params(flat)
        scale = None

    variable = _get(flat, "scan.variable", str, default="dx")
    if variable not in ("dx", "x2"):
        raise ConfigError(f"field 'scan.variable': must be 'dx' or 'x2', got {variable!r}")
    default_points = 81 if scenario == "classical-hbt" else 128
    points = _get(flat, "scan.points", int, default=default_points)
    if points < 2:
        raise ConfigError(f"field 'scan.points': need at least 2, got {points}")
    lo = _get(flat, "scan.min", float)
    hi = _get(flat, "scan.max", float)
    if (lo is None) != (hi is None):
        raise ConfigError("fields 'scan.min'/'scan.max': give both or neither")
    if lo is None:
        if scale is None:
            raise ConfigError("fields 'scan.min'/'scan.max': required for classical scans")
        lo, hi = -4.0 * scale, 4.0 * scale
    if not hi > lo:
        raise ConfigError(f"field 'scan.max': must exceed scan.min, got [{lo}, {hi}]")
    scan = ScanSpec(variable=variable, lo=lo, hi=hi, points=points)

    mc_enabled = _get(flat, "mc.enabled", bool, default=False)
    mc = McSpec(
        enabled=mc_enabled,
        samples=_get(flat, "mc.samples", int, default=100000),
        seed=_get(flat, "mc.seed", int, default=0),
        max_rejection_factor=_get(flat, "mc.max_rejection_factor", float, default=2.0),
    )
    if mc.enabled and mc.samples < 1:
        raise ConfigError(f"field 'mc.samples': must be >= 1, got {mc.samples}")
    if mc.enabled and variable == "x2":
        raise ConfigError("field 'mc.enabled': Monte Carlo applies to dx scans only")

    out_dir = _get(flat, "output.directory", str)
    formats = tuple(
        f.strip() for f in _get(flat, "output.formats", str, default="csv,json").split(",") if f.strip()
    )
    for f in formats:
        if f not in ("csv", "json"):
            raise ConfigError(f"field 'output.formats': unknown format {f!r}")
    output = OutputSpec(directory=Path(out_dir) if out_dir else None, formats=formats)

    return ScenarioConfig(
        scenario=scenario,
        flat=dict(sorted(flat.items())),
        scan=scan,
        mc=mc,
        output=output,
        x1_fixed=_get(flat, "x1", float, default=0.0),
        packet=packet,
        epr=epr_p,
        classical=classical,
    )


def load_config_file(path) -> dict[str, str]:
    """Read a flat key = value file ('#' starts a comment)."""
    flat: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = body.split("=", 1)
        flat[key.strip()] = value.strip()
    return flat


def preset_config(name: str) -> dict[str, str]:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return dict(PRESETS[name])


def list_presets() -> str:
    """Stable text table of the built-in scenario presets."""
    lines = ["preset                parameters"]
    for name, flat in PRESETS.items():
        skip = {"scenario"}
        pairs = ", ".join(
            f"{k}={v}" for k, v in flat.items()
            if k not in skip and not k.startswith(("scan.", "mc.", "output."))
        )
        lines.append(f"{name:<21s} {pairs}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# report structure

@dataclass
class RunReport:
    scenario: str
    config: dict[str, str]
    seed: int | None
    analytic: dict
    mc: dict | None
    comparisons: list[dict]
    files: dict[str, str]
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "config": self.config,
            "seed": self.seed,
            "analytic": self.analytic,
            "mc": self.mc,
            "comparisons": self.comparisons,
            "files": self.files,
            "timing": self.timing,
        }

    def passed(self) -> bool:
        return all(c["pass"] for c in self.comparisons)


def _comparison(name, value_a, value_b, difference, tolerance, passed) -> dict:
    return {
        "name": name,
        "value_a": value_a,
        "value_b": value_b,
        "difference": difference,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def _write_csv(path: Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    rows = len(next(iter(columns.values())))
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(rows):
            fh.write(",".join(f"{float(columns[n][i]):.17g}" for n in names) + "\n")


def read_csv(path) -> dict[str, np.ndarray]:
    """Read back a curve CSV written by `run_scenario` (exact float parse)."""
    lines = Path(path).read_text(encoding="utf-8").strip().splitlines()
    names = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return {name: data[:, i] for i, name in enumerate(names)}


# ---------------------------------------------------------------------------
# runners

def _central_bin_expectation(marginal, edges, i, n_samples):
    """Expected count in bin i via 8-point Gauss-Legendre quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(8)
    lo, hi = edges[i], edges[i + 1]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return n_samples * half * float(np.dot(weights, marginal(mid + half * nodes)))


def _run_quantum_dx(config, params, marginal, envelope, proposal, period_fn, model):
    """Shared dx-scan runner for packet and entangled scenarios."""
    edges = np.linspace(config.scan.lo, config.scan.hi, config.scan.points + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    width = float(edges[1] - edges[0])
    curve = {
        "dx": centers,
        "pdf_analytic": marginal(centers),
        "envelope": envelope(centers),
    }
    try:
        period = period_fn(params)
    except NoFringeError:
        period = None
    analytic = {"fringe_period": period}

    mc_block = None
    comparisons = []
    if config.mc.enabled:
        cfg = SamplerConfig(
            n_samples=config.mc.samples,
            seed=config.mc.seed,
            max_rejection_factor=config.mc.max_rejection_factor,
        )
        samples, acceptance = sample_pairs(
            lambda a, b: _unnormalized_pdf(params, a, b), proposal, cfg
        )
        hist = histogram_dx(samples, bins=config.scan.points,
                            dx_range=(config.scan.lo, config.scan.hi),
                            acceptance_rate=acceptance)
        fit = fit_fringes(hist, model, params=params)
        curve["count_mc"] = hist.counts.astype(float)
        curve["expected_mc"] = config.mc.samples * width * curve["pdf_analytic"]
        curve["fit_curve"] = fringe_shape(centers, *fit.shape_params)
        mc_block = {
            "n_samples": config.mc.samples,
            "acceptance_rate": acceptance,
            "n_underflow": hist.n_underflow,
            "n_overflow": hist.n_overflow,
            "fit": {
                "period": fit.period,
                "visibility": fit.visibility,
                "modulation": fit.modulation,
                "envelope_scale": fit.envelope_scale,
                "residual_rms": fit.residual_rms,
            },
        }
        if period is not None:
            rel = abs(fit.period - period) / period
            comparisons.append(
                _comparison("fringe_period_fit_vs_analytic", fit.period, period, rel, 0.02, rel <= 0.02)
            )
        comparisons.append(
            _comparison(
                "modulation_sign_vs_exchange",
                fit.modulation,
                float(params.eta),
                abs(math.copysign(1.0, fit.modulation) - params.eta),
                "same sign",
                math.copysign(1.0, fit.modulation) == params.eta,
            )
        )
        i_center = int(np.searchsorted(edges, 0.0) - 1)
        if 0 <= i_center < len(centers):
            expected = _central_bin_expectation(marginal, edges, i_center, config.mc.samples)
            observed = float(hist.counts[i_center])
            z = (observed - expected) / math.sqrt(max(expected, 1.0))
            comparisons.append(
                _comparison("central_bin_counts_vs_expected", observed, expected, z, 4.0, abs(z) <= 4.0)
            )
    return curve, analytic, mc_block, comparisons


def _unnormalized_pdf(params, a, b):
    if isinstance(params, PacketParams):
        return wp.joint_pdf(params, a, b)
    return epr_mod.epr_evolved_pdf(params, a, b)


def _run_packet(config: ScenarioConfig) -> tuple[dict, RunReport]:
    p = config.packet
    if config.scan.variable == "x2":
        x2 = np.linspace(config.scan.lo, config.scan.hi, config.scan.points)
        curve = {
            "x2": x2,
            "pdf_analytic": wp.joint_pdf(p, config.x1_fixed, x2, normalized=True),
        }
        analytic = {"x1": config.x1_fixed}
        report = RunReport(config.scenario, config.flat, None, analytic, None, [], {})
        return {"curve": curve}, report
    curve, analytic, mc_block, comparisons = _run_quantum_dx(
        config, p,
        marginal=lambda u: dx_marginal(p, u),
        envelope=lambda u: visibility_envelope(p, u),
        proposal=wp.coincidence_proposal(p),
        period_fn=fringe_period,
        model=FringeModel.INDEPENDENT,
    )
    analytic.update({
        "marginal_scale": wp.marginal_scale(p),
        "total_norm": wp.total_norm(p),
    })
    report = RunReport(
        config.scenario, config.flat,
        config.mc.seed if config.mc.enabled else None,
        analytic, mc_block, comparisons, {},
    )
    return {"curve": curve}, report


def _run_epr(config: ScenarioConfig) -> tuple[dict, RunReport]:
    e = config.epr
    if config.scan.variable == "x2":
        x2 = np.linspace(config.scan.lo, config.scan.hi, config.scan.points)
        curve = {
            "x2": x2,
            "pdf_analytic": epr_mod.epr_evolved_pdf(e, config.x1_fixed, x2, normalized=True),
        }
        report = RunReport(config.scenario, config.flat, None, {"x1": config.x1_fixed}, None, [], {})
        return {"curve": curve}, report
    diag = entanglement_diagnostic(e)
    curve, analytic, mc_block, comparisons = _run_quantum_dx(
        config, e,
        marginal=lambda u: epr_dx_marginal(e, u),
        envelope=lambda u: epr_mod.visibility_envelope(e, u),
        proposal=epr_mod.coincidence_proposal(e),
        period_fn=epr_fringe_period,
        model=FringeModel.ENTANGLED,
    )
    analytic.update({
        "marginal_scale": epr_mod.marginal_scale(e),
        "total_norm": epr_mod.total_norm(e),
        "entanglement_ratio": diag.ratio,
        "entanglement_regime": diag.regime.value,
    })
    report = RunReport(
        config.scenario, config.flat,
        config.mc.seed if config.mc.enabled else None,
        analytic, mc_block, comparisons, {},
    )
    return {"curve": curve}, report


def _run_classical(config: ScenarioConfig) -> tuple[dict, RunReport]:
    c = config.classical
    if config.scan.variable == "x2":
        x2 = np.linspace(config.scan.lo, config.scan.hi, config.scan.points)
        curve = {"x2": x2, "correlation_analytic": correlation_analytic(c, config.x1_fixed, x2)}
        report = RunReport(config.scenario, config.flat, None, {"x1": config.x1_fixed}, None, [], {})
        return {"curve": curve}, report
    dxs = np.linspace(config.scan.lo, config.scan.hi, config.scan.points)
    analytic_curve = correlation_analytic(c, dxs / 2.0, -dxs / 2.0)
    curve = {"dx": dxs, "correlation_analytic": analytic_curve}
    analytic = {"visibility": classical_visibility(c)}
    mc_block = None
    comparisons = []
    if config.mc.enabled:
        means = np.empty_like(dxs)
        errs = np.empty_like(dxs)
        for i, dx in enumerate(dxs):
            est = correlation_mc(c, dx / 2.0, -dx / 2.0, config.mc.samples, config.mc.seed + i)
            means[i] = est.mean
            errs[i] = est.std_error
        z = (means - analytic_curve) / np.where(errs > 0, errs, np.inf)
        curve["correlation_mc"] = means
        curve["mc_std_error"] = errs
        curve["z_score"] = z
        max_z = float(np.max(np.abs(z)))
        mc_block = {"n_samples_per_point": config.mc.samples, "max_abs_z": max_z}
        comparisons.append(
            _comparison("classical_mc_vs_analytic_max_z", max_z, 0.0, max_z, 5.0, max_z <= 5.0)
        )
    report = RunReport(
        config.scenario, config.flat,
        config.mc.seed if config.mc.enabled else None,
        analytic, mc_block, comparisons, {},
    )
    return {"curve": curve}, report


def _run_ghosh_mandel(config: ScenarioConfig) -> tuple[dict, RunReport]:
    """Virtual-source comparison: entangled pairs vs independent bosons."""
    e, p = config.epr, config.packet
    edges = np.linspace(config.scan.lo, config.scan.hi, config.scan.points + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    curves = {
        "curve_entangled": {
            "dx": centers,
            "pdf_analytic": epr_dx_marginal(e, centers),
            "envelope": epr_mod.visibility_envelope(e, centers),
        },
        "curve_independent": {
            "dx": centers,
            "pdf_analytic": dx_marginal(p, centers),
            "envelope": visibility_envelope(p, centers),
        },
    }
    analytic = {
        "fringe_period_entangled": epr_fringe_period(e),
        "fringe_period_independent": fringe_period(p),
        "entanglement_regime": entanglement_diagnostic(e).regime.value,
    }
    mc_block = None
    comparisons = []
    if config.mc.enabled:
        width = float(edges[1] - edges[0])
        results = {}
        for label, params, marginal, proposal, model, seed in (
            ("entangled", e, lambda u: epr_dx_marginal(e, u), epr_mod.coincidence_proposal(e),
             FringeModel.ENTANGLED, config.mc.seed),
            ("independent", p, lambda u: dx_marginal(p, u), wp.coincidence_proposal(p),
             FringeModel.INDEPENDENT, config.mc.seed + 1),
        ):
            cfg = SamplerConfig(n_samples=config.mc.samples, seed=seed,
                                max_rejection_factor=config.mc.max_rejection_factor)
            samples, acceptance = sample_pairs(
                lambda a, b: _unnormalized_pdf(params, a, b), proposal, cfg
            )
            hist = histogram_dx(samples, bins=config.scan.points,
                                dx_range=(config.scan.lo, config.scan.hi),
                                acceptance_rate=acceptance)
            fit = fit_fringes(hist, model, params=params)
            curves[f"curve_{label}"]["count_mc"] = hist.counts.astype(float)
            curves[f"curve_{label}"]["expected_mc"] = (
                config.mc.samples * width * curves[f"curve_{label}"]["pdf_analytic"]
            )
            curves[f"curve_{label}"]["fit_curve"] = fringe_shape(centers, *fit.shape_params)
            results[label] = {
                "acceptance_rate": acceptance,
                "fit": {
                    "period": fit.period,
                    "visibility": fit.visibility,
                    "modulation": fit.modulation,
                    "envelope_scale": fit.envelope_scale,
                    "residual_rms": fit.residual_rms,
                },
            }
        mc_block = {"n_samples": config.mc.samples, **results}
        pe = results["entangled"]["fit"]["period"]
        pi = results["independent"]["fit"]["period"]
        rel = abs(pe - pi) / pi
        ve = results["entangled"]["fit"]["visibility"]
        vi = results["independent"]["fit"]["visibility"]
        comparisons.extend([
            _comparison("fitted_period_entangled_vs_independent", pe, pi, rel, 0.02, rel <= 0.02),
            _comparison("visibility_entangled_above_0.9", ve, 0.9, ve - 0.9, ">= 0.9", ve >= 0.9),
            _comparison("visibility_independent_above_0.9", vi, 0.9, vi - 0.9, ">= 0.9", vi >= 0.9),
        ])
    report = RunReport(
        config.scenario, config.flat,
        config.mc.seed if config.mc.enabled else None,
        analytic, mc_block, comparisons, {},
    )
    return curves, report


_RUNNERS = {
    "independent-bosons": _run_packet,
    "independent-fermions": _run_packet,
    "entangled-epr": _run_epr,
    "classical-hbt": _run_classical,
    "ghosh-mandel": _run_ghosh_mandel,
}


def run_scenario(config: ScenarioConfig) -> RunReport:
    """Compute the configured scenario, write outputs, and return the report."""
    start = time.perf_counter()
    curves, report = _RUNNERS[config.scenario](config)
    out = config.output
    if out.directory is not None:
        out.directory.mkdir(parents=True, exist_ok=True)
        if "csv" in out.formats:
            for key, columns in curves.items():
                name = f"{key}.csv"
                _write_csv(out.directory / name, columns)
                report.files[key] = name
        report.timing = {"total_s": time.perf_counter() - start}
        if "json" in out.formats:
            (out.directory / "report.json").write_text(
                json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
            )
    else:
        report.timing = {"total_s": time.perf_counter() - start}
    return report


# ---------------------------------------------------------------------------
# run comparison

DEFAULT_TOLERANCES = {"curve": 1e-9, "period": 0.02, "visibility": 0.1}


def compare_runs(report_a, report_b, tolerances: dict | None = None) -> dict:
    """Compare two written run reports point by point and fit by fit.

    `report_a`/`report_b` are paths to report.json files.  Curves shared by
    both reports must sit on identical scan grids; their pointwise relative
    differences plus fitted-parameter deltas are reported against the given
    tolerances (defaults: curve 1e-9 relative, period 2% relative, visibility
    0.1 absolute).
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    path_a, path_b = Path(report_a), Path(report_b)
    rep_a = json.loads(path_a.read_text(encoding="utf-8"))
    rep_b = json.loads(path_b.read_text(encoding="utf-8"))
    summary: dict = {"report_a": str(path_a), "report_b": str(path_b), "curves": {}, "fits": {}}
    overall = True

    shared_files = sorted(set(rep_a["files"]) & set(rep_b["files"]))
    if not shared_files:
        raise ValueError("reports share no curve files to compare")
    for key in shared_files:
        curve_a = read_csv(path_a.parent / rep_a["files"][key])
        curve_b = read_csv(path_b.parent / rep_b["files"][key])
        grid_name = next(iter(curve_a))
        if grid_name not in curve_b or not np.array_equal(curve_a[grid_name], curve_b[grid_name]):
            raise ValueError(f"scan grids differ for curve {key!r}")
        diffs = {}
        for col in curve_a:
            if col == grid_name or col not in curve_b:
                continue
            a, b = curve_a[col], curve_b[col]
            scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)
            diffs[col] = float(np.max(np.abs(a - b) / scale))
        max_diff = max(diffs.values()) if diffs else 0.0
        matches = max_diff <= tol["curve"]
        summary["curves"][key] = {
            "columns": diffs,
            "max_rel_diff": max_diff,
            "tolerance": tol["curve"],
            "match": matches,
        }

    def _fits(rep):
        mc = rep.get("mc") or {}
        found = {}
        if "fit" in mc:
            found["fit"] = mc["fit"]
        for label in ("entangled", "independent"):
            if label in mc and "fit" in mc[label]:
                found[label] = mc[label]["fit"]
        return found

    fits_a, fits_b = _fits(rep_a), _fits(rep_b)
    for key in sorted(set(fits_a) & set(fits_b)):
        fa, fb = fits_a[key], fits_b[key]
        period_rel = abs(fa["period"] - fb["period"]) / max(abs(fb["period"]), 1e-300)
        vis_abs = abs(fa["visibility"] - fb["visibility"])
        entry = {
            "period_a": fa["period"],
            "period_b": fb["period"],
            "period_rel_diff": period_rel,
            "period_tolerance": tol["period"],
            "period_pass": period_rel <= tol["period"],
            "visibility_a": fa["visibility"],
            "visibility_b": fb["visibility"],
            "visibility_abs_diff": vis_abs,
            "visibility_tolerance": tol["visibility"],
            "visibility_pass": vis_abs <= tol["visibility"],
        }
        summary["fits"][key] = entry
        overall = overall and entry["period_pass"] and entry["visibility_pass"]

    summary["curves_match"] = all(c["match"] for c in summary["curves"].values())
    summary["pass"] = overall
    return summary
