"""Experiment driver: configs, figure presets, parameter sweeps and CSV
output. Rates are computed internally in nats per transmit antenna and
reported in bits (per antenna and total).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from datetime import datetime, timezone

import numpy as np

from .channel import ArraySpec, ChannelStatistics, gen_correlation
from .errors import ParseError, UnknownPreset, ValidationError
from .montecarlo import mc_secrecy_rate
from .precoders import Strategy, optimize

CSV_COLUMNS = [
    "sweep_var",
    "sweep_value",
    "strategy",
    "rs_lsl_per_antenna_bits",
    "rs_lsl_total_bits",
    "rs_mc_per_antenna_bits",
    "rs_mc_std_error",
    "outer_iterations",
    "error",
]

SWEEP_KINDS = ("snr", "ne", "spacing")

# Common caption values shared by all experiments.
DEFAULT_SPACING = 1.0
DEFAULT_THETA_MAIN = 40.0
DEFAULT_THETA_EAVE = -10.0
DEFAULT_SPREAD = 5.0
DEFAULT_MC_REALIZATIONS = 10_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one sweep experiment."""

    m: int
    n_main: int
    n_eave: int
    sweep: str
    sweep_grid: tuple[float, ...]
    snr_main_db: float = 10.0
    snr_eave_db: float = 10.0
    array_main: ArraySpec | None = None
    array_eave: ArraySpec | None = None
    strategies: tuple[Strategy, ...] = (Strategy.ISOTROPIC, Strategy.WATER_FILLING, Strategy.GSVD_BEAMFORMING)
    mc_realizations: int = DEFAULT_MC_REALIZATIONS
    seed: int = 0
    output_path: str = "sweep.csv"

    def __post_init__(self):
        if min(self.m, self.n_main, self.n_eave) < 1:
            raise ValidationError("antenna counts must be >= 1")
        if self.sweep not in SWEEP_KINDS:
            raise ValidationError(f"sweep must be one of {SWEEP_KINDS}")
        grid = tuple(float(v) for v in self.sweep_grid)
        if not grid:
            raise ValidationError("sweep_grid must be nonempty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValidationError("sweep_grid must be strictly ascending")
        object.__setattr__(self, "sweep_grid", grid)
        if self.mc_realizations < 1:
            raise ValidationError("mc_realizations must be >= 1")
        if self.array_main is None:
            object.__setattr__(self, "array_main", _default_array(self.m, DEFAULT_THETA_MAIN))
        if self.array_eave is None:
            object.__setattr__(self, "array_eave", _default_array(self.m, DEFAULT_THETA_EAVE))
        object.__setattr__(self, "strategies", tuple(Strategy(s) for s in self.strategies))


@dataclass(frozen=True)
class SweepRow:
    sweep_var: str
    sweep_value: float
    strategy: str
    rs_lsl_per_antenna_bits: float | None
    rs_lsl_total_bits: float | None
    rs_mc_per_antenna_bits: float | None
    rs_mc_std_error: float | None
    outer_iterations: int | None
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: tuple[SweepRow, ...]

    @property
    def num_failed(self) -> int:
        return sum(1 for row in self.rows if row.error)


def _default_array(m: int, theta: float) -> ArraySpec:
    return ArraySpec(
        num_antennas=m,
        spacing_wavelengths=DEFAULT_SPACING,
        mean_angle_deg=theta,
        angle_spread_deg=DEFAULT_SPREAD,
    )


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def figure_preset(name: str) -> ExperimentConfig:
    """Experiment configurations matching the four published figures."""
    snr_grid = tuple(np.arange(-5.0, 20.0 + 1e-9, 2.5))
    if name == "fig2":
        return ExperimentConfig(m=6, n_main=6, n_eave=2, sweep="snr", sweep_grid=snr_grid)
    if name == "fig3":
        return ExperimentConfig(m=2, n_main=3, n_eave=4, sweep="snr", sweep_grid=snr_grid)
    if name == "fig4":
        return ExperimentConfig(
            m=4,
            n_main=4,
            n_eave=2,
            sweep="ne",
            sweep_grid=tuple(float(v) for v in range(1, 13)),
            snr_main_db=0.0,
            snr_eave_db=0.0,
        )
    if name == "fig5":
        return ExperimentConfig(
            m=4,
            n_main=4,
            n_eave=2,
            sweep="spacing",
            sweep_grid=tuple(np.round(np.arange(0.2, 3.0 + 1e-9, 0.1), 10)),
            snr_main_db=0.0,
            snr_eave_db=0.0,
        )
    raise UnknownPreset(name)


def parse_config(path: str) -> ExperimentConfig:
    """Load an experiment config from a flat JSON file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    return config_from_dict(raw, source=path)


def config_from_dict(raw: dict, source: str = "<dict>") -> ExperimentConfig:
    known = {
        "m",
        "n_main",
        "n_eave",
        "sweep",
        "sweep_grid",
        "snr_main_db",
        "snr_eave_db",
        "strategies",
        "mc_realizations",
        "seed",
        "output_path",
        "spacing_wavelengths",
        "theta_main_deg",
        "theta_eave_deg",
        "angle_spread_deg",
    }
    unknown = set(raw) - known
    if unknown:
        raise ParseError(f"{source}: unknown fields {sorted(unknown)}")
    missing = {"m", "n_main", "n_eave", "sweep", "sweep_grid"} - set(raw)
    if missing:
        raise ParseError(f"{source}: missing fields {sorted(missing)}")

    try:
        m = int(raw["m"])
        spacing = float(raw.get("spacing_wavelengths", DEFAULT_SPACING))
        spread = float(raw.get("angle_spread_deg", DEFAULT_SPREAD))
        array_main = ArraySpec(m, spacing, float(raw.get("theta_main_deg", DEFAULT_THETA_MAIN)), spread)
        array_eave = ArraySpec(m, spacing, float(raw.get("theta_eave_deg", DEFAULT_THETA_EAVE)), spread)
        return ExperimentConfig(
            m=m,
            n_main=int(raw["n_main"]),
            n_eave=int(raw["n_eave"]),
            sweep=str(raw["sweep"]),
            sweep_grid=tuple(float(v) for v in raw["sweep_grid"]),
            snr_main_db=float(raw.get("snr_main_db", 10.0)),
            snr_eave_db=float(raw.get("snr_eave_db", 10.0)),
            array_main=array_main,
            array_eave=array_eave,
            strategies=tuple(Strategy(s) for s in raw.get("strategies", ["iso", "wf", "gsvd"])),
            mc_realizations=int(raw.get("mc_realizations", DEFAULT_MC_REALIZATIONS)),
            seed=int(raw.get("seed", 0)),
            output_path=str(raw.get("output_path", "sweep.csv")),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{source}: {exc}") from exc


def build_statistics(
    config: ExperimentConfig,
    snr_db: float | None = None,
    n_eave: int | None = None,
    spacing: float | None = None,
) -> tuple[ChannelStatistics, ChannelStatistics]:
    """Materialize per-link statistical CSI at one sweep point."""
    array_main = config.array_main
    array_eave = config.array_eave
    if spacing is not None:
        array_main = replace(array_main, spacing_wavelengths=spacing)
        array_eave = replace(array_eave, spacing_wavelengths=spacing)
    snr_main = db_to_linear(config.snr_main_db if snr_db is None else snr_db)
    snr_eave = db_to_linear(config.snr_eave_db if snr_db is None else snr_db)
    ne = config.n_eave if n_eave is None else n_eave
    t_main = gen_correlation(array_main)
    t_eave = gen_correlation(array_eave)
    stats_m = ChannelStatistics(
        snr=snr_main, num_rx=config.n_main, num_tx=config.m, t_corr=t_main, r_corr=np.eye(config.n_main)
    )
    stats_e = ChannelStatistics(
        snr=snr_eave, num_rx=ne, num_tx=config.m, t_corr=t_eave, r_corr=np.eye(ne)
    )
    return stats_m, stats_e


def _point_statistics(config: ExperimentConfig, value: float):
    if config.sweep == "snr":
        return build_statistics(config, snr_db=value)
    if config.sweep == "ne":
        return build_statistics(config, n_eave=int(round(value)))
    return build_statistics(config, spacing=value)


def _point_seed(base_seed: int, grid_index: int, strategy_index: int) -> int:
    ss = np.random.SeedSequence([int(base_seed), grid_index, strategy_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_sweep(config: ExperimentConfig, include_mc: bool = True) -> SweepResult:
    """Run every (grid point, strategy) pair; failures become error rows."""
    ln2 = math.log(2.0)
    rows = []
    for gi, value in enumerate(config.sweep_grid):
        try:
            stats_m, stats_e = _point_statistics(config, value)
        except Exception as exc:  # noqa: BLE001 - per-point fault isolation
            for strategy in config.strategies:
                rows.append(
                    SweepRow(config.sweep, value, strategy.value, None, None, None, None, None, error=str(exc))
                )
            continue
        for si, strategy in enumerate(config.strategies):
            try:
                precoder, rate, iterations = optimize(strategy, stats_m, stats_e)
                mc_mean_bits = mc_se = None
                if include_mc:
                    mc = mc_secrecy_rate(
                        stats_m, stats_e, precoder, config.mc_realizations, _point_seed(config.seed, gi, si)
                    )
                    mc_mean_bits = mc.mean / ln2
                    mc_se = mc.std_error / ln2
                rows.append(
                    SweepRow(
                        sweep_var=config.sweep,
                        sweep_value=value,
                        strategy=strategy.value,
                        rs_lsl_per_antenna_bits=rate.rs / ln2,
                        rs_lsl_total_bits=rate.rs * config.m / ln2,
                        rs_mc_per_antenna_bits=mc_mean_bits,
                        rs_mc_std_error=mc_se,
                        outer_iterations=iterations,
                    )
                )
            except Exception as exc:  # noqa: BLE001
                rows.append(
                    SweepRow(config.sweep, value, strategy.value, None, None, None, None, None, error=str(exc))
                )
    return SweepResult(config=config, rows=tuple(rows))


def write_csv(result: SweepResult, path: str, timestamp: bool = True) -> None:
    """Write the sweep table; rerunning with the same seed and
    timestamp=False yields a byte-identical file."""
    with open(path, "w", newline="") as fh:
        if timestamp:
            fh.write(f"# generated {datetime.now(timezone.utc).isoformat()}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            writer.writerow(
                [
                    row.sweep_var,
                    _fmt(row.sweep_value),
                    row.strategy,
                    _fmt(row.rs_lsl_per_antenna_bits),
                    _fmt(row.rs_lsl_total_bits),
                    _fmt(row.rs_mc_per_antenna_bits),
                    _fmt(row.rs_mc_std_error),
                    "" if row.outer_iterations is None else row.outer_iterations,
                    row.error,
                ]
            )


def _fmt(value) -> str:
    return "" if value is None else format(value, ".12g")
