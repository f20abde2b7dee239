"""Analog joint source-channel coding with the rectangular Shannon mapping.

Library layout:

- ``mapping``: the ideal 2:1 (and nested 3:1) codec
- ``circuit``: behavioral model of the analog encoder and its power budget
- ``signal_chain``: FM tone, AWGN channel, FFT peak receiver
- ``multisensor``: FDMA band planning, joint capture, diversity combining
- ``metrics``: MSE, SDR, spectral CSNR estimate
- ``experiments``: seeded Monte-Carlo sweeps, self checks, CSV/JSON output
"""
from .mapping import (
    DecodedPair,
    MappingConfig,
    Quantizer,
    SourceSample,
    decode,
    decode3,
    encode,
    encode3,
    quantize_level,
)
from .circuit import (
    PROTOTYPE_BUDGET,
    CircuitConfig,
    ComponentBudget,
    circuit_encode,
    equivalent_mapping,
    estimate_power,
    prototype_config,
)
from .signal_chain import (
    ChannelSpec,
    FmConfig,
    ReceiverConfig,
    Waveform,
    apply_channel,
    detect_peak,
    fm_modulate,
    freq_to_voltage,
    transmit_receive,
)
from .multisensor import (
    FdmaPlan,
    SensorNode,
    SensorResult,
    assign_channels,
    diversity_combine,
    simulate_cluster,
)
from .metrics import SDR_CAP_DB, MetricsReport, estimate_csnr, make_report, mse, sdr
from .experiments import (
    DEFAULT_L_GRID,
    ExperimentConfig,
    ExperimentKind,
    SourceSpec,
    SweepResult,
    SweepRow,
    emit_csv,
    emit_json,
    run_cluster_demo,
    run_experiment,
    run_mse_vs_L,
    run_roundtrip_suite,
    run_sdr_vs_csnr,
)

__version__ = "0.1.0"
