"""Deterministic Monte-Carlo experiment runner.

Reproduces the level-count optimization (mean MSE vs number of lines at a
fixed channel SNR), runs SDR-vs-SNR sweeps for one or more FDMA sensors,
executes the round-trip self-check suite, and writes CSV or JSON results.

Reproducibility: every trial draws from a generator seeded by
SeedSequence([master_seed, trial]) (and [..., antenna] for capture noise),
so results depend only on the configuration and never on scheduling or the
worker count.  Trial streams are shared across sweep points (common random
numbers), which stabilizes the location of the sweep minimum.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .circuit import CircuitConfig, circuit_encode, equivalent_mapping
from .mapping import MappingConfig, Quantizer, SourceSample, decode, encode
from .metrics import sdr
from .multisensor import SensorNode, SensorResult, assign_channels, simulate_cluster
from .signal_chain import ChannelSpec, FmConfig, ReceiverConfig, transmit_receive

__all__ = [
    "DEFAULT_L_GRID",
    "ExperimentKind",
    "SourceSpec",
    "ExperimentConfig",
    "SweepRow",
    "SweepResult",
    "CheckResult",
    "RoundTripReport",
    "run_mse_vs_L",
    "run_sdr_vs_csnr",
    "run_roundtrip_suite",
    "run_cluster_demo",
    "run_experiment",
    "emit_csv",
    "emit_json",
    "load_config_file",
    "config_from_mapping",
]

# dense near the documented optimum, coarse elsewhere
DEFAULT_L_GRID: tuple[int, ...] = (
    tuple(range(10, 56, 5)) + tuple(range(56, 96)) + tuple(range(100, 151, 5))
)

CSV_HEADER = "param,mean_mse,mean_sdr_db,mse_x1,mse_x2,trials"


class ExperimentKind(enum.Enum):
    MSE_VS_L = "mse-vs-l"
    SDR_VS_CSNR = "sdr-vs-csnr"
    ROUND_TRIP = "round-trip"
    CLUSTER_DEMO = "cluster-demo"


@dataclass(frozen=True)
class SourceSpec:
    """Source distribution in normalized [0, 1] coordinates."""

    kind: str = "uniform"  # "uniform" | "fixed"
    x1: float = 0.5
    x2: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("uniform", "fixed"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.kind == "fixed" and not (0 <= self.x1 <= 1 and 0 <= self.x2 <= 1):
            raise ValueError("fixed source point must lie in [0, 1]^2")

    def draw(self, rng: np.random.Generator) -> tuple[float, float]:
        if self.kind == "fixed":
            return self.x1, self.x2
        u = rng.uniform(size=2)
        return float(u[0]), float(u[1])


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs, including the master seed."""

    kind: ExperimentKind
    source: SourceSpec = SourceSpec()
    trials: int = 200
    l_values: tuple[int, ...] = DEFAULT_L_GRID
    snr_values: tuple[float, ...] = (-20.0,)
    snr_db: float = -20.0
    d_max: float = 5.0
    v2: float = 1.0
    num_levels: int = 73
    quantizer: Quantizer = Quantizer.FLOOR
    sensor_count: int = 1
    antennas: int = 1
    guard_hz: float = 1000.0
    gain_error: float = 0.0
    offset_error: float = 0.0
    master_seed: int = 0
    workers: int = 1
    output_path: str | None = None
    output_format: str = "csv"
    fm: FmConfig = FmConfig()
    receiver: ReceiverConfig = ReceiverConfig()

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.l_values:
            raise ValueError("l_values must be non-empty")
        if any(l < 2 for l in self.l_values):
            raise ValueError("every swept level count must be >= 2")
        if not self.snr_values:
            raise ValueError("snr_values must be non-empty")
        if self.sensor_count < 1 or self.antennas < 1:
            raise ValueError("sensor_count and antennas must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        # construction validates the codec parameters
        MappingConfig(self.d_max, self.num_levels, self.v2, self.quantizer)


@dataclass(frozen=True)
class SweepRow:
    param: float
    mean_mse: float
    mean_sdr_db: float
    mse_x1: float
    mse_x2: float
    trials: int


@dataclass
class SweepResult:
    kind: ExperimentKind
    rows: list[SweepRow]
    best_param: float
    best_mse: float
    details: dict = field(default_factory=dict)


def _trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial]))


def _finish(kind: ExperimentKind, rows: list[SweepRow], details: dict) -> SweepResult:
    best = min(rows, key=lambda r: r.mean_mse)
    return SweepResult(
        kind=kind, rows=rows, best_param=best.param, best_mse=best.mean_mse, details=details
    )


def _map_points(cfg: ExperimentConfig, params, point_fn):
    if cfg.workers == 1:
        return [point_fn(cfg, p) for p in params]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(partial(point_fn, cfg), params))


# ---------------------------------------------------------------------------
# mean MSE vs number of levels


def _mse_vs_l_point(cfg: ExperimentConfig, num_levels: int) -> SweepRow:
    mapping = MappingConfig(cfg.d_max, num_levels, cfg.v2, cfg.quantizer)
    sum1 = sum2 = 0.0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.master_seed, trial)
        u1, u2 = cfg.source.draw(rng)
        noise_seed = int(rng.integers(0, 2**62))
        x1 = u1 * mapping.v1
        x2 = u2 * mapping.v2
        vd = encode(mapping, x1, x2)
        channel = ChannelSpec(snr_db=cfg.snr_db, rng_seed=noise_seed)
        vd_hat = transmit_receive(cfg.fm, channel, cfg.receiver, vd)
        dec = decode(mapping, vd_hat)
        sum1 += ((dec.x1_hat - x1) / mapping.v1) ** 2
        sum2 += ((dec.x2_hat - x2) / mapping.v2) ** 2
    m1, m2 = sum1 / cfg.trials, sum2 / cfg.trials
    return SweepRow(
        param=float(num_levels),
        mean_mse=m1 + m2,
        mean_sdr_db=sdr(m1 + m2),
        mse_x1=m1,
        mse_x2=m2,
        trials=cfg.trials,
    )


def run_mse_vs_L(cfg: ExperimentConfig) -> SweepResult:
    """Sweep the level count: uniform sources, full chain, normalized mean MSE."""
    if cfg.kind is not ExperimentKind.MSE_VS_L:
        raise ValueError(f"config kind is {cfg.kind}, expected MSE_VS_L")
    rows = _map_points(cfg, cfg.l_values, _mse_vs_l_point)
    return _finish(cfg.kind, rows, details={})


# ---------------------------------------------------------------------------
# SDR vs channel SNR for one or more FDMA sensors


def _sdr_point(cfg: ExperimentConfig, snr_db: float) -> tuple[SweepRow, dict]:
    mapping = MappingConfig(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer)
    plan = assign_channels(cfg.sensor_count, cfg.fm, cfg.d_max, cfg.guard_hz)
    n = cfg.sensor_count
    per_trial_mse = np.zeros((cfg.trials, n))
    per_trial_mse_x1 = np.zeros((cfg.trials, n))
    per_trial_mse_x2 = np.zeros((cfg.trials, n))
    per_trial_x2_hat = np.zeros((cfg.trials, n))
    per_trial_vd_err = np.zeros((cfg.trials, n))
    per_trial_csnr = np.zeros((cfg.trials, n))
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.master_seed, trial)
        draws = [cfg.source.draw(rng) for _ in range(n)]
        capture_seed = int(rng.integers(0, 2**62))
        sensors = [
            SensorNode(
                id=i,
                mapping=mapping,
                fm=cfg.fm,
                truth=SourceSample(u1 * mapping.v1, u2 * mapping.v2),
            )
            for i, (u1, u2) in enumerate(draws)
        ]
        channels = [ChannelSpec(snr_db=snr_db, rng_seed=0) for _ in range(n)]
        results = simulate_cluster(
            sensors, plan, channels, cfg.receiver, antennas=cfg.antennas, seed=capture_seed
        )
        for i, res in enumerate(results):
            u1, u2 = draws[i]
            e1 = (res.decoded.x1_hat / mapping.v1 - u1) ** 2
            e2 = (res.decoded.x2_hat / mapping.v2 - u2) ** 2
            per_trial_mse_x1[trial, i] = e1
            per_trial_mse_x2[trial, i] = e2
            per_trial_mse[trial, i] = e1 + e2
            per_trial_x2_hat[trial, i] = res.decoded.x2_hat
            per_trial_vd_err[trial, i] = abs(res.vd_hat - res.vd_true)
            per_trial_csnr[trial, i] = res.csnr_est_db
    mean_mse = float(per_trial_mse.mean())
    row = SweepRow(
        param=float(snr_db),
        mean_mse=mean_mse,
        mean_sdr_db=sdr(mean_mse),
        mse_x1=float(per_trial_mse_x1.mean()),
        mse_x2=float(per_trial_mse_x2.mean()),
        trials=cfg.trials,
    )
    detail = {
        "per_trial_mse": per_trial_mse,
        "per_trial_x2_hat": per_trial_x2_hat,
        "per_trial_vd_err": per_trial_vd_err,
        "csnr_est_db": float(per_trial_csnr.mean()),
    }
    return row, detail


def run_sdr_vs_csnr(cfg: ExperimentConfig) -> SweepResult:
    """Sweep channel SNR for sensor_count FDMA sensors; details hold per-trial data."""
    if cfg.kind is not ExperimentKind.SDR_VS_CSNR:
        raise ValueError(f"config kind is {cfg.kind}, expected SDR_VS_CSNR")
    pairs = _map_points(cfg, cfg.snr_values, _sdr_point)
    rows = [row for row, _ in pairs]
    details = {row.param: det for row, det in pairs}
    return _finish(cfg.kind, rows, details)


# ---------------------------------------------------------------------------
# round-trip self checks


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    bound: float


@dataclass
class RoundTripReport:
    checks: list[CheckResult]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _x2_base_bound(mapping: MappingConfig) -> float:
    return mapping.delta if mapping.quantizer is Quantizer.FLOOR else mapping.delta / 2


def _check_mapping_roundtrip(cfg: ExperimentConfig) -> list[CheckResult]:
    mapping = MappingConfig(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, 101]))
    n = 100_000
    x1 = rng.uniform(0.0, mapping.v1, n)
    x2 = rng.uniform(0.0, mapping.v2, n)
    dec = decode(mapping, encode(mapping, x1, x2))
    worst1 = float(np.max(np.abs(dec.x1_hat - x1)))
    worst2 = float(np.max(np.abs(dec.x2_hat - x2)))
    bound1 = 1e-9 * max(1.0, mapping.d_max)
    bound2 = _x2_base_bound(mapping)
    return [
        CheckResult("mapping-roundtrip-x1", worst1 <= bound1, worst1, bound1),
        CheckResult("mapping-roundtrip-x2", worst2 <= bound2, worst2, bound2),
    ]


def _check_circuit_equivalence(cfg: ExperimentConfig) -> CheckResult:
    circuit = CircuitConfig(
        quantizer=cfg.quantizer,
        gain_error=cfg.gain_error,
        offset_error=cfg.offset_error,
    )
    mapping = equivalent_mapping(circuit)
    vts = np.linspace(0.0, circuit.vt_max, 100)
    vhs = np.linspace(0.0, circuit.vh_max, 100)
    worst = 0.0
    for vt in vts:
        x1 = vt * circuit.v_r / circuit.vt_max
        for vh in vhs:
            diff = abs(circuit_encode(circuit, vt, vh) - encode(mapping, x1, vh))
            worst = max(worst, diff)
    bound = 1e-9 * mapping.d_max
    return CheckResult("circuit-codec-equivalence", worst <= bound, worst, bound)


def _check_chain_roundtrip(cfg: ExperimentConfig) -> list[CheckResult]:
    mapping = MappingConfig(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, 202]))
    channel = ChannelSpec(snr_db=math.inf)
    bin_width = cfg.fm.sample_rate / cfg.receiver.fft_size
    # one full bin: covers image-leakage tie breaks and the near-DC corner,
    # which push the usual half-bin error up to ~0.63 bins
    bound1 = bin_width / cfg.fm.scale + 1e-9
    # a voltage error can flip the detected line, costing one extra spacing
    bound2 = _x2_base_bound(mapping) + mapping.delta
    worst1 = worst2 = 0.0
    for _ in range(cfg.trials):
        x1 = rng.uniform(0.0, mapping.v1)
        x2 = rng.uniform(0.0, mapping.v2)
        vd_hat = transmit_receive(cfg.fm, channel, cfg.receiver, encode(mapping, x1, x2))
        dec = decode(mapping, vd_hat)
        worst1 = max(worst1, abs(dec.x1_hat - x1))
        worst2 = max(worst2, abs(dec.x2_hat - x2))
    return [
        CheckResult("chain-roundtrip-x1", worst1 <= bound1, worst1, bound1),
        CheckResult("chain-roundtrip-x2", worst2 <= bound2, worst2, bound2),
    ]


def run_roundtrip_suite(cfg: ExperimentConfig) -> RoundTripReport:
    """Codec, circuit and chain invariants over seeded inputs, with worst errors."""
    if cfg.kind is not ExperimentKind.ROUND_TRIP:
        raise ValueError(f"config kind is {cfg.kind}, expected ROUND_TRIP")
    checks = _check_mapping_roundtrip(cfg)
    checks.append(_check_circuit_equivalence(cfg))
    checks.extend(_check_chain_roundtrip(cfg))
    return RoundTripReport(checks)


# ---------------------------------------------------------------------------
# one-shot cluster demo


def run_cluster_demo(cfg: ExperimentConfig) -> list[SensorResult]:
    """Single capture of sensor_count sensors with drawn or fixed truths."""
    if cfg.kind is not ExperimentKind.CLUSTER_DEMO:
        raise ValueError(f"config kind is {cfg.kind}, expected CLUSTER_DEMO")
    mapping = MappingConfig(cfg.d_max, cfg.num_levels, cfg.v2, cfg.quantizer)
    plan = assign_channels(cfg.sensor_count, cfg.fm, cfg.d_max, cfg.guard_hz)
    rng = _trial_rng(cfg.master_seed, 0)
    sensors = []
    for i in range(cfg.sensor_count):
        u1, u2 = cfg.source.draw(rng)
        sensors.append(
            SensorNode(
                id=i,
                mapping=mapping,
                fm=cfg.fm,
                truth=SourceSample(u1 * mapping.v1, u2 * mapping.v2),
            )
        )
    capture_seed = int(rng.integers(0, 2**62))
    channels = [ChannelSpec(snr_db=cfg.snr_db, rng_seed=0) for _ in range(cfg.sensor_count)]
    return simulate_cluster(
        sensors, plan, channels, cfg.receiver, antennas=cfg.antennas, seed=capture_seed
    )


def run_experiment(cfg: ExperimentConfig):
    """Dispatch on the experiment kind."""
    runner = {
        ExperimentKind.MSE_VS_L: run_mse_vs_L,
        ExperimentKind.SDR_VS_CSNR: run_sdr_vs_csnr,
        ExperimentKind.ROUND_TRIP: run_roundtrip_suite,
        ExperimentKind.CLUSTER_DEMO: run_cluster_demo,
    }[cfg.kind]
    return runner(cfg)


# ---------------------------------------------------------------------------
# output


def _format_row(row: SweepRow) -> str:
    return ",".join(
        [
            repr(float(row.param)),
            repr(float(row.mean_mse)),
            repr(float(row.mean_sdr_db)),
            repr(float(row.mse_x1)),
            repr(float(row.mse_x2)),
            str(row.trials),
        ]
    )


def render_csv(result: SweepResult) -> str:
    return "\n".join([CSV_HEADER] + [_format_row(r) for r in result.rows]) + "\n"


def emit_csv(result: SweepResult, path: str | Path) -> None:
    """Write the sweep as CSV (fixed column order, repr-exact floats, overwrites)."""
    Path(path).write_text(render_csv(result), encoding="ascii")


def render_json(result: SweepResult) -> str:
    payload = {
        "kind": result.kind.value,
        "rows": [dataclasses.asdict(r) for r in result.rows],
        "best_param": result.best_param,
        "best_mse": result.best_mse,
    }
    return json.dumps(payload, indent=2) + "\n"


def emit_json(result: SweepResult, path: str | Path) -> None:
    """JSON equivalent of the CSV output (details excluded), overwrites."""
    Path(path).write_text(render_json(result), encoding="ascii")


def parse_csv(text: str) -> list[SweepRow]:
    """Read back what render_csv produced."""
    lines = [ln for ln in text.splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognized CSV header")
    rows = []
    for ln in lines[1:]:
        p, m, s, m1, m2, t = ln.split(",")
        rows.append(SweepRow(float(p), float(m), float(s), float(m1), float(m2), int(t)))
    return rows


# ---------------------------------------------------------------------------
# flat key=value config files


def _parse_tuple(text: str, typ):
    return tuple(typ(tok) for tok in text.split(",") if tok.strip())


def config_from_mapping(values: dict[str, str]) -> ExperimentConfig:
    """Build an ExperimentConfig from flat string key/value pairs."""
    kwargs: dict = {}
    source: dict = {}
    fm: dict = {}
    receiver: dict = {}
    for key, raw in values.items():
        if key == "kind":
            kwargs["kind"] = ExperimentKind(raw)
        elif key == "quantizer":
            kwargs["quantizer"] = Quantizer(raw)
        elif key == "l_values":
            kwargs["l_values"] = _parse_tuple(raw, int)
        elif key == "snr_values":
            kwargs["snr_values"] = _parse_tuple(raw, float)
        elif key in ("trials", "num_levels", "sensor_count", "antennas", "master_seed", "workers"):
            kwargs[key] = int(raw)
        elif key in ("snr_db", "d_max", "v2", "guard_hz", "gain_error", "offset_error"):
            kwargs[key] = float(raw)
        elif key in ("output_path", "output_format"):
            kwargs[key] = raw
        elif key == "source_kind":
            source["kind"] = raw
        elif key in ("source_x1", "source_x2"):
            source[key.removeprefix("source_")] = float(raw)
        elif key in ("fm_scale", "fm_amplitude", "fm_sample_rate", "fm_record_seconds"):
            fm[key.removeprefix("fm_")] = float(raw)
        elif key == "fft_size":
            receiver["fft_size"] = int(raw)
        else:
            raise ValueError(f"unknown config key {key!r}")
    if "kind" not in kwargs:
        raise ValueError("config must set kind")
    if source:
        kwargs["source"] = SourceSpec(**source)
    if fm:
        kwargs["fm"] = FmConfig(**fm)
    if receiver:
        kwargs["receiver"] = ReceiverConfig(**receiver)
    return ExperimentConfig(**kwargs)


def load_config_file(path: str | Path) -> ExperimentConfig:
    """Parse a flat key=value file (blank lines and # comments ignored)."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return config_from_mapping(values)
