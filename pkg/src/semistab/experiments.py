"""Experiment configuration, execution, and persistence.

Configs are flat ``section.key = value`` text files (hand-editable; exact
grammar in the README).  Every run produces a self-contained JSON report
with the echoed canonical config, the sampled curves, fitted constants,
projection diagnostics, and tri-state verdicts, plus CSV files with the
plot-ready data.  Outputs are written atomically and, timings aside, are
byte-reproducible for identical configs and seeds.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics, models, spectral
from ._version import __version__
from .asymptotics import (FitFamily, NormSamples, Quantity, concave_envelope,
                          envelope_translation_check, fit_rate, hardy_check,
                          sample_norms, witness_lower_bound)
from .errors import (ClusteredSpectrumError, ConfigError,
                     InsufficientSamplesError, SemistabError,
                     TruncationInadequateError)
from .models import Family, Model, ModelSpec, build_model

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"

#: Thresholds for the conclusion-decay verdict of the theorem pipeline.
CONCLUSION_SLOPE_MAX = -0.1
CONCLUSION_DROP_MAX = 0.75

#: Spread bound used by every boundedness / two-sided-equivalence verdict.
SPREAD_BOUND = 3.0

#: Trend-slope bound for compensated-curve flatness.
TREND_SLOPE_BOUND = 0.15

_ENVELOPE_DEFECT_TOL = 1e-12


class Spacing(enum.Enum):
    LINEAR = "LINEAR"
    GEOMETRIC = "GEOMETRIC"


@dataclass(frozen=True)
class TimeGrid:
    t_min: float
    t_max: float
    points: int
    spacing: Spacing = Spacing.GEOMETRIC

    def __post_init__(self):
        if self.points < 2:
            raise ValueError(f"grid needs >= 2 points, got {self.points}")
        if not (self.t_max > self.t_min):
            raise ValueError("t_max must exceed t_min")
        if self.spacing is Spacing.GEOMETRIC:
            if self.t_min <= 0:
                raise ValueError("geometric grids need t_min > 0")
        elif self.t_min < 0:
            raise ValueError("t_min must be >= 0")

    def values(self) -> np.ndarray:
        if self.spacing is Spacing.GEOMETRIC:
            return np.geomspace(self.t_min, self.t_max, self.points)
        return np.linspace(self.t_min, self.t_max, self.points)


@dataclass(frozen=True)
class Tolerances:
    norm_tol: float = 1e-10
    proj_tol: float = 1e-8

    def __post_init__(self):
        if self.norm_tol <= 0 or self.proj_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    formats: tuple = ("CSV", "JSON")

    def __post_init__(self):
        bad = set(self.formats) - {"CSV", "JSON"}
        if bad:
            raise ValueError(f"unknown output formats: {sorted(bad)}")


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec
    grid: TimeGrid
    contour_nodes: int = spectral.DEFAULT_NODES
    radius_cap: float = spectral.RADIUS_CAP
    top_k: int = 5
    translation_shift: float = 1.0
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: OutputSpec = field(default_factory=OutputSpec)


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip())
    except ValueError:
        raise ConfigError(f"cannot parse complex value {text!r}") from None


_CONFIG_KEYS = (
    "model.family", "model.max_index", "model.order", "model.mu",
    "grid.t_min", "grid.t_max", "grid.points", "grid.spacing",
    "contour.nodes", "contour.radius_cap",
    "checks.top_k", "checks.translation_shift",
    "tolerances.norm_tol", "tolerances.proj_tol",
    "output.directory", "output.formats",
)

_REQUIRED_KEYS = ("model.family", "grid.t_min", "grid.t_max", "grid.points")


def _family_dim(family: Family, max_index: int) -> int:
    if family is Family.DIAG_JORDAN:
        return 2 * max_index - 1
    if family is Family.JORDAN_PAIRS:
        return 2 * (max_index - 1)
    return max_index - 1


def parse_config(text: str, max_dim: int | None = None) -> ExperimentConfig:
    """Parse the flat key = value grammar into a validated config.

    ``model.max_index = auto`` resolves to the minimal adequate truncation
    for the grid's t_max; an explicit value below that is rejected, as is
    any truncation whose coordinate dimension exceeds ``max_dim``.
    """
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        entries[key] = (lineno, value)

    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise ConfigError(f"missing required key {key!r}")

    def take(key, default=None):
        if key in entries:
            return entries[key][1]
        return default

    def convert(key, conv, default=None):
        raw = take(key)
        if raw is None:
            return default
        lineno = entries[key][0]
        try:
            return conv(raw)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None

    family = convert("model.family", lambda s: Family[s])
    order = convert("model.order", int, 1)
    mu = convert("model.mu", _parse_complex, 1.0 + 0.0j)
    grid = TimeGrid(
        t_min=convert("grid.t_min", float),
        t_max=convert("grid.t_max", float),
        points=convert("grid.points", int),
        spacing=convert("grid.spacing", lambda s: Spacing[s], Spacing.GEOMETRIC),
    )

    need = models.required_max_index(family, grid.t_max)
    raw_mi = take("model.max_index", "auto")
    if raw_mi == "auto":
        max_index = need
    else:
        max_index = convert("model.max_index", int)
        if max_index < need:
            raise TruncationInadequateError(
                f"model.max_index {max_index} is inadequate for grid.t_max "
                f"{grid.t_max}; need max_index >= {need} "
                f"(dim {_family_dim(family, need)})",
                required=need)
    dim = _family_dim(family, max_index)
    if max_dim is not None and dim > max_dim:
        raise TruncationInadequateError(
            f"adequate truncation needs dim {dim} > configured cap {max_dim} "
            f"(minimal adequate max_index {need})",
            required=need)

    try:
        spec = ModelSpec(family, max_index, order=order, mu_default=mu)
        tolerances = Tolerances(
            norm_tol=convert("tolerances.norm_tol", float, 1e-10),
            proj_tol=convert("tolerances.proj_tol", float, 1e-8),
        )
        output = OutputSpec(
            directory=take("output.directory", "out"),
            formats=tuple(convert(
                "output.formats",
                lambda s: [f.strip() for f in s.split(",") if f.strip()],
                ["CSV", "JSON"])),
        )
        return ExperimentConfig(
            model=spec,
            grid=grid,
            contour_nodes=convert("contour.nodes", int, spectral.DEFAULT_NODES),
            radius_cap=convert("contour.radius_cap", float, spectral.RADIUS_CAP),
            top_k=convert("checks.top_k", int, 5),
            translation_shift=convert("checks.translation_shift", float, 1.0),
            tolerances=tolerances,
            output=output,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def render_config(cfg: ExperimentConfig) -> str:
    """Canonical text for a config; parsing it back yields an equal config."""
    lines = [
        f"model.family = {cfg.model.family.value}",
        f"model.max_index = {cfg.model.max_index}",
        f"model.order = {cfg.model.order}",
        f"model.mu = {format_complex(cfg.model.mu_default)}",
        f"grid.t_min = {cfg.grid.t_min!r}",
        f"grid.t_max = {cfg.grid.t_max!r}",
        f"grid.points = {cfg.grid.points}",
        f"grid.spacing = {cfg.grid.spacing.value}",
        f"contour.nodes = {cfg.contour_nodes}",
        f"contour.radius_cap = {cfg.radius_cap!r}",
        f"checks.top_k = {cfg.top_k}",
        f"checks.translation_shift = {cfg.translation_shift!r}",
        f"tolerances.norm_tol = {cfg.tolerances.norm_tol!r}",
        f"tolerances.proj_tol = {cfg.tolerances.proj_tol!r}",
        f"output.directory = {cfg.output.directory}",
        f"output.formats = {','.join(cfg.output.formats)}",
    ]
    return "\n".join(lines) + "\n"


def config_hash(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(render_config(cfg).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: str
    metrics: dict

    def to_dict(self) -> dict:
        return {"status": self.status, "detail": self.detail,
                "metrics": dict(self.metrics)}


def _verdict(ok: bool, detail: str, **metrics) -> Verdict:
    return Verdict(PASS if ok else FAIL, detail, metrics)


def _skipped(reason: str, **metrics) -> Verdict:
    return Verdict(SKIPPED, reason, metrics)


@dataclass
class RunReport:
    command: str
    config_text: str
    samples: dict
    fits: dict
    projections: list
    verdicts: dict
    timings: dict
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "config": {
                "command": self.command,
                "text": self.config_text,
                "hash": hashlib.sha256(
                    self.config_text.encode("utf-8")).hexdigest(),
            },
            "samples": self.samples,
            "fits": self.fits,
            "projections": self.projections,
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "timings": self.timings,
            "version": self.version,
        }

    def all_passed(self) -> bool:
        return all(v.status in (PASS, SKIPPED) for v in self.verdicts.values())


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: str, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_cell(cell) for cell in row) for row in rows)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, obj) -> None:
    _atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _emit(report: RunReport, out_dir: str, formats, csv_files: dict) -> None:
    if "CSV" in formats:
        for name, (header, rows) in csv_files.items():
            write_csv(os.path.join(out_dir, name), header, rows)
    if "JSON" in formats:
        write_json(os.path.join(out_dir, "report.json"), report.to_dict())


def _samples_dict(*curves: NormSamples) -> dict:
    return {
        curve.quantity.value.lower(): {
            "t": [float(t) for t in curve.ts],
            "value": [float(v) for v in curve.values],
        }
        for curve in curves
    }


def _fit_dict(fit) -> dict:
    return {
        "family": fit.family.value,
        "coefficient": fit.coefficient,
        "exponent_or_scale": fit.exponent_or_scale,
        "residual": fit.residual,
        "window": [fit.window[0], fit.window[1]],
    }


def _spread(values: np.ndarray) -> float:
    return float(np.max(values) / np.min(values))


def _trend_slope(ts: np.ndarray, values: np.ndarray) -> float:
    design = np.column_stack([np.ones(ts.size), np.log(ts)])
    return float(np.linalg.lstsq(design, np.log(values), rcond=None)[0][1])


def _growth_verdict(model: Model, semi: NormSamples) -> Verdict:
    family = model.spec.family
    if family is Family.LOG_SPECTRUM:
        order = model.spec.order
        try:
            fit = fit_rate(semi, FitFamily.POWER)
        except InsufficientSamplesError as exc:
            return _skipped(str(exc))
        ok = order - 0.2 <= fit.exponent_or_scale <= order + 0.2
        return _verdict(ok, f"power-law exponent {fit.exponent_or_scale:.4f} "
                            f"vs expected {order}",
                        exponent=fit.exponent_or_scale, expected=float(order))
    t_floor, bracket = ((20.0, 0.1) if family is Family.JORDAN_PAIRS
                        else (50.0, 0.2))
    mask = semi.ts >= t_floor
    if not np.any(mask):
        return _skipped(f"no samples with t >= {t_floor}")
    normalized = semi.values[mask] / semi.ts[mask]
    worst = float(np.max(np.abs(normalized - 1.0)))
    return _verdict(worst <= bracket,
                    f"max |norm(t)/t - 1| = {worst:.4f} over t >= {t_floor}",
                    worst_deviation=worst, bracket=bracket)


def _bounded_verdict(model: Model, prod: NormSamples) -> Verdict:
    if model.spec.family is Family.LOG_SPECTRUM:
        return _skipped("resolvent product is unbounded for this family; "
                        "the ratio law verdict covers it")
    mask = prod.ts >= 10.0
    if np.count_nonzero(mask) < 2:
        return _skipped("need >= 2 samples with t >= 10")
    spread = _spread(prod.values[mask])
    return _verdict(spread <= SPREAD_BOUND,
                    f"sup/inf of the resolvent product = {spread:.4f} "
                    f"over t >= 10",
                    spread=spread, bound=SPREAD_BOUND)


def _ratio_verdict(model: Model, ratio: NormSamples):
    """Family-appropriate decay law of the ratio; returns (verdict, fits)."""
    fits = {}
    if model.spec.family is Family.LOG_SPECTRUM:
        try:
            fit = fit_rate(ratio, FitFamily.INVERSE_LOG)
        except InsufficientSamplesError as exc:
            return _skipped(str(exc)), fits
        fits["ratio_inverse_log"] = _fit_dict(fit)
        mask = ratio.ts >= fit.window[0]
        compensated = ratio.values[mask] * np.log(ratio.ts[mask])
        slope = _trend_slope(ratio.ts[mask], compensated)
        ok = fit.exponent_or_scale <= SPREAD_BOUND and abs(slope) <= TREND_SLOPE_BOUND
        return _verdict(ok, f"ratio * log t: spread {fit.exponent_or_scale:.4f}, "
                            f"trend slope {slope:.4f}",
                        spread=fit.exponent_or_scale, trend_slope=slope,
                        spread_bound=SPREAD_BOUND,
                        slope_bound=TREND_SLOPE_BOUND), fits
    try:
        fit = fit_rate(ratio, FitFamily.POWER)
    except InsufficientSamplesError as exc:
        return _skipped(str(exc)), fits
    fits["ratio_power"] = _fit_dict(fit)
    ok = -1.1 <= fit.exponent_or_scale <= -0.9
    return _verdict(ok, f"ratio power-law exponent {fit.exponent_or_scale:.4f}",
                    exponent=fit.exponent_or_scale), fits


def run_simulate(cfg: ExperimentConfig, out_dir: str | None = None) -> RunReport:
    """Sample the three monitored curves and judge the family's claims."""
    clock = time.perf_counter
    started = clock()
    model = build_model(cfg.model)
    ts = cfg.grid.values()
    semi = sample_norms(model, ts, Quantity.SEMIGROUP_NORM,
                        tol=cfg.tolerances.norm_tol)
    prod = sample_norms(model, ts, Quantity.RESOLVENT_PRODUCT_NORM,
                        tol=cfg.tolerances.norm_tol)
    ratio = NormSamples(Quantity.RATIO, ts, prod.values / semi.values)
    sampled = clock()

    verdicts = {"semigroup_growth": _growth_verdict(model, semi),
                "resolvent_product_bounded": _bounded_verdict(model, prod)}
    ratio_verdict, fits = _ratio_verdict(model, ratio)
    verdicts["ratio_decay"] = ratio_verdict
    finished = clock()

    report = RunReport(
        command="simulate",
        config_text=render_config(cfg),
        samples=_samples_dict(semi, prod, ratio),
        fits=fits,
        projections=[],
        verdicts=verdicts,
        timings={"sampling_s": sampled - started,
                 "verdicts_s": finished - sampled,
                 "total_s": finished - started},
    )
    rows = list(zip(ts, semi.values, prod.values, ratio.values))
    _emit(report, out_dir or cfg.output.directory, cfg.output.formats,
          {"samples.csv": (["t", "semigroup_norm", "resolvent_product_norm",
                            "ratio"], rows)})
    return report


def _envelope_verdict(env, semi: NormSamples) -> Verdict:
    kt, kv = env.knot_ts, env.knot_log_values
    concavity = 0.0
    for i in range(1, kt.size - 1):
        left = (kv[i] - kv[i - 1]) / (kt[i] - kt[i - 1])
        right = (kv[i + 1] - kv[i]) / (kt[i + 1] - kt[i])
        concavity = max(concavity,
                        (right - left) / (kt[i + 1] - kt[i - 1]))
    majorization = float(np.max(np.log(semi.values) - env.log_value(semi.ts)))
    ok = (concavity <= _ENVELOPE_DEFECT_TOL
          and majorization <= _ENVELOPE_DEFECT_TOL
          and 0.0 < env.a_estimate <= 1.0)
    return _verdict(ok, f"concavity defect {concavity:.2e}, majorization "
                        f"defect {majorization:.2e}, a = {env.a_estimate:.4f}",
                    concavity_defect=concavity,
                    majorization_defect=majorization,
                    a_estimate=env.a_estimate)


def _projection_entry(lam: complex, contour, report) -> dict:
    return {
        "eigenvalue": format_complex(lam),
        "center": format_complex(contour.center),
        "radius": contour.radius,
        "nodes": contour.nodes,
        "idempotency_defect": report.idempotency_defect,
        "commutation_defect": report.commutation_defect,
        "rank": report.rank,
        "enclosed": [format_complex(z) for z in report.enclosed],
    }


def run_theorem_check(cfg: ExperimentConfig, out_dir: str | None = None) -> RunReport:
    """Drive the full decay-criterion pipeline and report its verdicts.

    Checks, in order: envelope admissibility (log-concavity, majorization,
    positive approximation constant), envelope translation stability,
    decay of the projected semigroup against the envelope for the lowest
    eigenvalues, and decay of the resolvent-product curve divided by the
    envelope.
    """
    if cfg.grid.points < 3:
        raise ConfigError("theorem-check needs a grid of at least 3 points "
                          "to build an envelope")
    clock = time.perf_counter
    started = clock()
    model = build_model(cfg.model)
    ts = cfg.grid.values()
    semi = sample_norms(model, ts, Quantity.SEMIGROUP_NORM,
                        tol=cfg.tolerances.norm_tol)
    prod = sample_norms(model, ts, Quantity.RESOLVENT_PRODUCT_NORM,
                        tol=cfg.tolerances.norm_tol)
    env = concave_envelope(semi)
    sampled = clock()

    verdicts = {"envelope_conditions": _envelope_verdict(env, semi)}

    translation = envelope_translation_check(env, cfg.translation_shift, ts)
    verdicts["envelope_translation"] = _verdict(
        translation.within_tolerance,
        f"|f(t+s)/f(s) - 1| = {abs(float(translation.ratios[-1]) - 1.0):.4f} "
        f"at s = {float(ts[-1]):.4g} for shift t = {cfg.translation_shift}",
        end_ratio=float(translation.ratios[-1]),
        shift=cfg.translation_shift)

    eigs = models.eigenvalues(model)[:cfg.top_k]
    projections = []
    curves = []
    decay_flags = []
    skipped_eigs = []
    for eig in eigs:
        try:
            contour = spectral.hypothesis_a_check(
                model, eig.value, radius_cap=cfg.radius_cap,
                nodes=cfg.contour_nodes)
        except ClusteredSpectrumError as exc:
            skipped_eigs.append((eig.value, str(exc)))
            continue
        proj_report = spectral.riesz_projection_quadrature(
            model, contour, drift_tol=cfg.tolerances.proj_tol)
        projections.append(_projection_entry(eig.value, contour, proj_report))
        curve = spectral.hypothesis_b_check(model, contour, ts, env,
                                            tol=cfg.tolerances.norm_tol)
        curves.append((eig.value, curve))
        decay_flags.append(curve.decaying)
    skipped_values = [format_complex(v) for v, _ in skipped_eigs]
    if not decay_flags:
        detail = "; ".join(f"{format_complex(v)}: {msg}" for v, msg in skipped_eigs)
        verdicts["hypothesis_b_decay"] = _skipped(
            f"no eigenvalue admitted an isolating circle ({detail})",
            skipped_eigenvalues=skipped_values)
    else:
        ok = all(decay_flags)
        detail = (f"{sum(decay_flags)}/{len(decay_flags)} projected curves decay"
                  + (f"; skipped clustered eigenvalue(s) {skipped_values}"
                     if skipped_eigs else ""))
        verdicts["hypothesis_b_decay"] = _verdict(
            ok, detail, checked=len(decay_flags), skipped=len(skipped_eigs),
            skipped_eigenvalues=skipped_values)

    conclusion = prod.values / env.value(ts)
    slope = _trend_slope(ts, conclusion)
    drop = float(conclusion[-1] / conclusion[0])
    verdicts["conclusion_decay"] = _verdict(
        slope <= CONCLUSION_SLOPE_MAX and drop <= CONCLUSION_DROP_MAX,
        f"resolvent-product / envelope: trend slope {slope:.4f}, "
        f"end/start {drop:.4f}",
        trend_slope=slope, end_over_start=drop,
        slope_bound=CONCLUSION_SLOPE_MAX, drop_bound=CONCLUSION_DROP_MAX)
    finished = clock()

    samples = _samples_dict(semi, prod)
    samples["envelope_knots"] = {
        "t": [float(x) for x in env.knot_ts],
        "log_value": [float(y) for y in env.knot_log_values],
    }
    report = RunReport(
        command="theorem-check",
        config_text=render_config(cfg),
        samples=samples,
        fits={},
        projections=projections,
        verdicts=verdicts,
        timings={"sampling_s": sampled - started,
                 "checks_s": finished - sampled,
                 "total_s": finished - started},
    )
    curve_rows = list(zip(ts, semi.values, prod.values, env.value(ts), conclusion))
    hyp_rows = [(format_complex(lam), t, v)
                for lam, curve in curves
                for t, v in zip(curve.ts, curve.values)]
    _emit(report, out_dir or cfg.output.directory, cfg.output.formats, {
        "theorem_curves.csv": (["t", "semigroup_norm", "resolvent_product_norm",
                                "envelope", "conclusion_curve"], curve_rows),
        "hypothesis_b.csv": (["eigenvalue", "t", "value"], hyp_rows),
        "envelope_knots.csv": (["t", "log_value"],
                               list(zip(env.knot_ts, env.knot_log_values))),
    })
    return report


def run_hardy(cases: int, max_len: int = 512, seed: int = 42,
              out_dir: str = "out",
              formats: tuple = ("CSV", "JSON")) -> RunReport:
    """Randomized check of the discrete Hardy inequality.

    Draws ``cases`` standard complex Gaussian sequences with lengths in
    [2, max_len] and reports the worst ratio together with its witness.
    """
    if cases < 1:
        raise ConfigError(f"cases must be >= 1, got {cases}")
    if max_len < 2:
        raise ConfigError(f"max_len must be >= 2, got {max_len}")
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst_ratio = -1.0
    worst_seq = np.zeros(0, dtype=complex)
    worst_case = -1
    for case in range(cases):
        length = int(rng.integers(2, max_len + 1))
        seq = rng.standard_normal(length) + 1j * rng.standard_normal(length)
        ratio = hardy_check(seq).ratio
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst_seq = seq
            worst_case = case
    finished = time.perf_counter()

    config_text = (f"hardy.cases = {cases}\nhardy.max_len = {max_len}\n"
                   f"hardy.seed = {seed}\n")
    verdict = _verdict(worst_ratio <= 1.0,
                       f"worst ratio {worst_ratio!r} over {cases} cases "
                       f"(seed {seed}, case {worst_case})",
                       worst_ratio=worst_ratio, cases=cases,
                       max_len=max_len, seed=seed, worst_case=worst_case)
    report = RunReport(
        command="hardy",
        config_text=config_text,
        samples={},
        fits={},
        projections=[],
        verdicts={"hardy_bound": verdict},
        timings={"total_s": finished - started},
    )
    rows = [(i + 1, z.real, z.imag) for i, z in enumerate(worst_seq)]
    _emit(report, out_dir, formats, {"hardy_worst.csv": (["n", "re", "im"], rows)})
    return report


def run_witness(t_values, dim: int | None = None, out_dir: str = "out",
                formats: tuple = ("CSV", "JSON")) -> RunReport:
    """Witness-vector lower-bound experiment on the weighted diagonal model."""
    ts = sorted(float(t) for t in t_values)
    if not ts:
        raise ConfigError("need at least one t value")
    if dim is None:
        dim = math.ceil(asymptotics.WITNESS_DIM_FACTOR * max(ts))
    started = time.perf_counter()
    spec = ModelSpec(Family.LOG_SPECTRUM, dim + 1, order=1)
    model = build_model(spec)
    bounds = [witness_lower_bound(model, t) for t in ts]
    finished = time.perf_counter()

    normalized = np.array([b.normalized for b in bounds])
    raw = np.array([b.raw_ratio for b in bounds])
    verdicts = {}
    if len(ts) >= 2:
        bracket = _spread(normalized)
        verdicts["witness_bracket"] = _verdict(
            bracket <= 5.0,
            f"normalized witness values span max/min = {bracket:.4f}",
            bracket=bracket, bound=5.0)
        increasing = bool(np.all(np.diff(raw) > 0))
        verdicts["witness_monotone"] = _verdict(
            increasing, "raw witness ratio increases along the t grid",
            increasing=increasing)
    else:
        verdicts["witness_bracket"] = _skipped("need >= 2 t values for a bracket")

    config_text = (f"witness.t = {','.join(repr(t) for t in ts)}\n"
                   f"witness.dim = {dim}\n")
    report = RunReport(
        command="witness",
        config_text=config_text,
        samples={"witness": {"t": list(ts),
                             "raw_ratio": [float(r) for r in raw],
                             "normalized": [float(v) for v in normalized]}},
        fits={},
        projections=[],
        verdicts=verdicts,
        timings={"total_s": finished - started},
    )
    rows = list(zip(ts, raw, normalized))
    _emit(report, out_dir, formats,
          {"witness.csv": (["t", "raw_ratio", "normalized"], rows)})
    return report


def load_report(path: str) -> dict:
    """Read a report JSON; raises ConfigError on malformed content."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            report = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed report {path}: {exc}") from None
    if not isinstance(report, dict) or "verdicts" not in report:
        raise ConfigError(f"malformed report {path}: missing 'verdicts'")
    return report


def render_report(report: dict) -> str:
    """Human-readable verdict and constants table for a report dict."""
    lines = []
    config = report.get("config", {})
    lines.append(f"command: {config.get('command', '?')}   "
                 f"version: {report.get('version', '?')}")
    lines.append(f"config hash: {config.get('hash', '?')}")
    lines.append("")
    lines.append(f"{'check':<28} {'status':<8} detail")
    lines.append("-" * 76)
    for name in sorted(report.get("verdicts", {})):
        verdict = report["verdicts"][name]
        lines.append(f"{name:<28} {verdict.get('status', '?'):<8} "
                     f"{verdict.get('detail', '')}")
    fits = report.get("fits", {})
    if fits:
        lines.append("")
        lines.append(f"{'fit':<28} {'family':<12} {'coefficient':<16} "
                     f"{'exponent/scale':<16} residual")
        lines.append("-" * 88)
        for name in sorted(fits):
            fit = fits[name]
            lines.append(f"{name:<28} {fit['family']:<12} "
                         f"{fit['coefficient']:<16.6g} "
                         f"{fit['exponent_or_scale']:<16.6g} "
                         f"{fit['residual']:.3g}")
    return "\n".join(lines)


def report_exit_code(report: dict) -> int:
    statuses = [v.get("status") for v in report.get("verdicts", {}).values()]
    return 0 if all(s in (PASS, SKIPPED) for s in statuses) else 1
