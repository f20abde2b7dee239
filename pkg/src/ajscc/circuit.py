"""Behavioral model of the analog rectangular-mapping encoder circuit.

Each parallel line of the mapping is one circuit level: a comparator bank
turns the quantized-axis voltage vh into per-level select signals, and an
analog mux per level forwards one of three inputs to the summing stage:
0 V (level above the mapped point), the saturation voltage v_r (level fully
below the point), or a VCVS output proportional (even 0-based index) or
complementary (odd index) to the continuous-axis voltage vt.  The summed
output equals the ideal codec voltage when the non-ideality knobs are zero.

Also hosts the component power budget used for feasibility estimates.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .mapping import MappingConfig, Quantizer

__all__ = [
    "LevelSelect",
    "ContributionKind",
    "LevelContribution",
    "CircuitConfig",
    "ComponentBudget",
    "PROTOTYPE_BUDGET",
    "prototype_config",
    "default_thresholds",
    "comparator_selects",
    "vcvs_proportional",
    "vcvs_complement",
    "level_contribution",
    "circuit_encode",
    "equivalent_mapping",
    "estimate_power",
]


class LevelSelect(enum.Enum):
    """Position of vh relative to one level's band of the quantized axis."""

    BELOW = "below"
    ON = "on"
    ABOVE = "above"


class ContributionKind(enum.Enum):
    ZERO = "zero"
    PARTIAL = "partial"
    FULL = "full"


@dataclass(frozen=True)
class LevelContribution:
    """One level's summand: 0, a partial VCVS output in [0, v_r], or v_r."""

    kind: ContributionKind
    voltage: float


def default_thresholds(num_levels: int, delta_h: float, quantizer: Quantizer) -> tuple[float, ...]:
    """Comparator thresholds separating adjacent levels.

    FLOOR placement puts threshold j at j*delta_h; NEAREST at (j - 0.5)*delta_h,
    for j = 1..num_levels-1.
    """
    if quantizer is Quantizer.FLOOR:
        return tuple(j * delta_h for j in range(1, num_levels))
    return tuple((j - 0.5) * delta_h for j in range(1, num_levels))


@dataclass(frozen=True)
class CircuitConfig:
    """Behavioral parameters of the level-summing encoder.

    thresholds defaults to the placement implied by the quantizer mode; pass an
    explicit tuple to model comparator offset errors.  gain_error and
    offset_error perturb the VCVS outputs (affine, clamped at the mux inputs).
    """

    num_levels: int = 11
    delta_h: float = 0.3
    v_r: float = 1.0
    vt_max: float = 1.0
    quantizer: Quantizer = Quantizer.FLOOR
    thresholds: tuple[float, ...] = field(default=())
    gain_error: float = 0.0
    offset_error: float = 0.0

    def __post_init__(self) -> None:
        if self.num_levels < 2:
            raise ValueError(f"num_levels must be >= 2, got {self.num_levels}")
        if not self.delta_h > 0:
            raise ValueError(f"delta_h must be positive, got {self.delta_h}")
        if not self.v_r > 0:
            raise ValueError(f"v_r must be positive, got {self.v_r}")
        if not self.vt_max > 0:
            raise ValueError(f"vt_max must be positive, got {self.vt_max}")
        if not self.thresholds:
            object.__setattr__(
                self,
                "thresholds",
                default_thresholds(self.num_levels, self.delta_h, self.quantizer),
            )
        if len(self.thresholds) != self.num_levels - 1:
            raise ValueError(
                f"need {self.num_levels - 1} thresholds, got {len(self.thresholds)}"
            )
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")

    @property
    def vh_max(self) -> float:
        """Full range of the quantized-axis input."""
        return (self.num_levels - 1) * self.delta_h


def comparator_selects(cfg: CircuitConfig, vh: float) -> tuple[LevelSelect, ...]:
    """Per-level select signals from threshold comparisons; exactly one is ON."""
    if not np.isfinite(vh) or vh < 0 or vh > cfg.vh_max:
        raise ValueError(f"vh out of range [0, {cfg.vh_max}]")
    active = int(np.searchsorted(cfg.thresholds, vh, side="right"))
    return tuple(
        LevelSelect.ABOVE if i < active else LevelSelect.ON if i == active else LevelSelect.BELOW
        for i in range(cfg.num_levels)
    )


def _vcvs_raw(cfg: CircuitConfig, vt: float) -> float:
    if not np.isfinite(vt) or vt < 0 or vt > cfg.vt_max:
        raise ValueError(f"vt out of range [0, {cfg.vt_max}]")
    return (1.0 + cfg.gain_error) * (cfg.v_r / cfg.vt_max) * vt + cfg.offset_error


def vcvs_proportional(cfg: CircuitConfig, vt: float) -> float:
    """VCVS output proportional to vt, clamped to [0, v_r]."""
    return float(np.clip(_vcvs_raw(cfg, vt), 0.0, cfg.v_r))


def vcvs_complement(cfg: CircuitConfig, vt: float) -> float:
    """VCVS output v_r minus the proportional output, clamped to [0, v_r]."""
    return float(np.clip(cfg.v_r - _vcvs_raw(cfg, vt), 0.0, cfg.v_r))


def level_contribution(cfg: CircuitConfig, level_index: int, vt: float, vh: float) -> LevelContribution:
    """What one level adds to the total encoded voltage."""
    if not 0 <= level_index < cfg.num_levels:
        raise ValueError(f"level_index out of range [0, {cfg.num_levels - 1}]")
    sel = comparator_selects(cfg, vh)[level_index]
    if sel is LevelSelect.BELOW:
        return LevelContribution(ContributionKind.ZERO, 0.0)
    if sel is LevelSelect.ABOVE:
        return LevelContribution(ContributionKind.FULL, cfg.v_r)
    if level_index % 2 == 0:
        return LevelContribution(ContributionKind.PARTIAL, vcvs_proportional(cfg, vt))
    return LevelContribution(ContributionKind.PARTIAL, vcvs_complement(cfg, vt))


def circuit_encode(cfg: CircuitConfig, vt: float, vh: float) -> float:
    """Sum of all level contributions, the encoded voltage in [0, num_levels*v_r]."""
    total = 0.0
    for i in range(cfg.num_levels):
        total += level_contribution(cfg, i, vt, vh).voltage
    return total


def equivalent_mapping(cfg: CircuitConfig) -> MappingConfig:
    """The ideal codec this circuit realizes when non-idealities are zero.

    circuit_encode(cfg, vt, vh) == encode(equivalent_mapping(cfg),
    vt * v_r / vt_max, vh) for all in-range inputs.
    """
    return MappingConfig(
        d_max=cfg.num_levels * cfg.v_r,
        num_levels=cfg.num_levels,
        v2=cfg.vh_max,
        quantizer=cfg.quantizer,
    )


def prototype_config(quantizer: Quantizer = Quantizer.FLOOR) -> CircuitConfig:
    """The 11-level, 0.3 V spacing board configuration."""
    return CircuitConfig(num_levels=11, delta_h=0.3, quantizer=quantizer)


@dataclass(frozen=True)
class ComponentBudget:
    """Component counts and per-unit supply powers (watts)."""

    opamp_count: int
    comparator_count: int
    mux_count: int
    opamp_power: float
    comparator_power: float
    mux_power: float

    def __post_init__(self) -> None:
        for name in (
            "opamp_count",
            "comparator_count",
            "mux_count",
            "opamp_power",
            "comparator_power",
            "mux_power",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


# 11-level board: 16 op-amps at 8 uW, 17 comparators at 12.7 nW, 11 muxes at 10 nW
PROTOTYPE_BUDGET = ComponentBudget(16, 17, 11, 8e-6, 12.7e-9, 10e-9)


def estimate_power(budget: ComponentBudget) -> float:
    """Total supply power in watts."""
    return (
        budget.opamp_count * budget.opamp_power
        + budget.comparator_count * budget.comparator_power
        + budget.mux_count * budget.mux_power
    )
