"""Command-line interface.

Subcommands: encode, decode, chain, sweep-l, sdr-sweep, cluster, selftest.
Sweep commands accept a flat key=value --config file; explicit flags override
file values.  Exit code 0 on success; on failure a single machine-readable
JSON error line goes to stderr and the exit code is nonzero.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .experiments import (
    DEFAULT_L_GRID,
    ExperimentConfig,
    ExperimentKind,
    SourceSpec,
    emit_csv,
    emit_json,
    load_config_file,
    render_csv,
    render_json,
    run_cluster_demo,
    run_mse_vs_L,
    run_roundtrip_suite,
    run_sdr_vs_csnr,
)
from .mapping import MappingConfig, Quantizer, decode, encode
from .signal_chain import ChannelSpec, FmConfig, ReceiverConfig, transmit_receive


def _parse_l_grid(text: str) -> tuple[int, ...]:
    """Comma-separated level counts; a:b:s tokens expand to inclusive ranges."""
    values: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            parts = [int(p) for p in token.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            values.extend(range(start, stop + 1, step))
        else:
            values.append(int(token))
    return tuple(values)


def _parse_snrs(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _add_codec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dmax", type=float, default=5.0, help="encoded amplitude limit (V)")
    p.add_argument("--levels", type=int, default=73, help="number of parallel lines")
    p.add_argument("--v2", type=float, default=1.0, help="range of the quantized source (V)")
    p.add_argument(
        "--quantizer",
        choices=[q.value for q in Quantizer],
        default=Quantizer.FLOOR.value,
        help="line assignment rule",
    )


def _codec(args: argparse.Namespace) -> MappingConfig:
    return MappingConfig(args.dmax, args.levels, args.v2, Quantizer(args.quantizer))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ajscc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="map (x1, x2) to the encoded voltage")
    _add_codec_flags(p)
    p.add_argument("x1", type=float)
    p.add_argument("x2", type=float)

    p = sub.add_parser("decode", help="invert an encoded voltage")
    _add_codec_flags(p)
    p.add_argument("voltage", type=float)

    p = sub.add_parser("chain", help="encode, transmit through FM/AWGN/FFT, decode")
    _add_codec_flags(p)
    p.add_argument("--snr-db", type=float, default=float("inf"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("x1", type=float)
    p.add_argument("x2", type=float)

    p = sub.add_parser("sweep-l", help="mean MSE vs number of levels")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--trials", type=int)
    p.add_argument("--snr-db", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--dmax", type=float)
    p.add_argument("--v2", type=float)
    p.add_argument("--quantizer", choices=[q.value for q in Quantizer])
    p.add_argument("--l-grid", help="e.g. 10:150:5 or 60,70,80")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=["csv", "json"])

    p = sub.add_parser("sdr-sweep", help="SDR vs channel SNR for FDMA sensors")
    p.add_argument("--config")
    p.add_argument("--trials", type=int)
    p.add_argument("--snrs", help="comma-separated SNR list in dB")
    p.add_argument("--seed", type=int)
    p.add_argument("--dmax", type=float)
    p.add_argument("--v2", type=float)
    p.add_argument("--levels", type=int)
    p.add_argument("--quantizer", choices=[q.value for q in Quantizer])
    p.add_argument("--sensors", type=int)
    p.add_argument("--antennas", type=int)
    p.add_argument("--source", choices=["uniform", "fixed"])
    p.add_argument("--x1", type=float, help="fixed source x1 in [0,1]")
    p.add_argument("--x2", type=float, help="fixed source x2 in [0,1]")
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])

    p = sub.add_parser("cluster", help="one joint capture of several sensors")
    p.add_argument("--sensors", type=int, default=3)
    p.add_argument("--antennas", type=int, default=1)
    p.add_argument("--snr-db", type=float, default=float("inf"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dmax", type=float, default=5.0)
    p.add_argument("--levels", type=int, default=11)
    p.add_argument("--quantizer", choices=[q.value for q in Quantizer], default="floor")

    p = sub.add_parser("selftest", help="run the round-trip self-check suite")
    p.add_argument("--levels", type=int, default=73)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--quantizer", choices=[q.value for q in Quantizer], default="floor")
    p.add_argument("--gain-error", type=float, default=0.0)
    p.add_argument("--offset-error", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _sweep_config(args: argparse.Namespace, kind: ExperimentKind) -> ExperimentConfig:
    if args.config:
        cfg = load_config_file(args.config)
        cfg = dataclasses.replace(cfg, kind=kind)
    else:
        cfg = ExperimentConfig(kind=kind)
    overrides: dict = {}
    for flag, field_name in (
        ("trials", "trials"),
        ("snr_db", "snr_db"),
        ("seed", "master_seed"),
        ("dmax", "d_max"),
        ("v2", "v2"),
        ("levels", "num_levels"),
        ("sensors", "sensor_count"),
        ("antennas", "antennas"),
        ("workers", "workers"),
        ("out", "output_path"),
        ("format", "output_format"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field_name] = value
    if getattr(args, "quantizer", None) is not None:
        overrides["quantizer"] = Quantizer(args.quantizer)
    if getattr(args, "l_grid", None) is not None:
        overrides["l_values"] = _parse_l_grid(args.l_grid)
    if getattr(args, "snrs", None) is not None:
        overrides["snr_values"] = _parse_snrs(args.snrs)
    if getattr(args, "source", None) is not None or getattr(args, "x1", None) is not None:
        kind_name = getattr(args, "source", None) or "fixed"
        overrides["source"] = SourceSpec(
            kind=kind_name,
            x1=args.x1 if args.x1 is not None else 0.5,
            x2=args.x2 if args.x2 is not None else 0.5,
        )
    return dataclasses.replace(cfg, **overrides)


def _emit_result(result, cfg: ExperimentConfig) -> None:
    render = render_csv if cfg.output_format == "csv" else render_json
    if cfg.output_path:
        (emit_csv if cfg.output_format == "csv" else emit_json)(result, cfg.output_path)
        print(
            f"wrote {cfg.output_path} best_param={result.best_param!r} "
            f"best_mse={result.best_mse!r}"
        )
    else:
        sys.stdout.write(render(result))


def _run(args: argparse.Namespace) -> int:
    if args.command == "encode":
        print(repr(encode(_codec(args), args.x1, args.x2)))
    elif args.command == "decode":
        dec = decode(_codec(args), args.voltage)
        print(
            json.dumps(
                {"x1_hat": dec.x1_hat, "x2_hat": dec.x2_hat, "level_index": dec.level_index}
            )
        )
    elif args.command == "chain":
        codec = _codec(args)
        vd = encode(codec, args.x1, args.x2)
        channel = ChannelSpec(snr_db=args.snr_db, rng_seed=args.seed)
        vd_hat = transmit_receive(FmConfig(), channel, ReceiverConfig(), vd)
        dec = decode(codec, vd_hat)
        print(
            json.dumps(
                {
                    "vd": vd,
                    "vd_hat": vd_hat,
                    "x1_hat": dec.x1_hat,
                    "x2_hat": dec.x2_hat,
                    "level_index": dec.level_index,
                }
            )
        )
    elif args.command == "sweep-l":
        cfg = _sweep_config(args, ExperimentKind.MSE_VS_L)
        _emit_result(run_mse_vs_L(cfg), cfg)
    elif args.command == "sdr-sweep":
        cfg = _sweep_config(args, ExperimentKind.SDR_VS_CSNR)
        _emit_result(run_sdr_vs_csnr(cfg), cfg)
    elif args.command == "cluster":
        cfg = ExperimentConfig(
            kind=ExperimentKind.CLUSTER_DEMO,
            sensor_count=args.sensors,
            antennas=args.antennas,
            snr_db=args.snr_db,
            master_seed=args.seed,
            d_max=args.dmax,
            num_levels=args.levels,
            quantizer=Quantizer(args.quantizer),
        )
        for res in run_cluster_demo(cfg):
            print(
                json.dumps(
                    {
                        "sensor_id": res.sensor_id,
                        "vd_true": res.vd_true,
                        "vd_hat": res.vd_hat,
                        "peak_hz": res.peak_hz,
                        "x1_hat": res.decoded.x1_hat,
                        "x2_hat": res.decoded.x2_hat,
                        "level_index": res.decoded.level_index,
                        "csnr_est_db": res.csnr_est_db,
                    }
                )
            )
    elif args.command == "selftest":
        cfg = ExperimentConfig(
            kind=ExperimentKind.ROUND_TRIP,
            num_levels=args.levels,
            trials=args.trials,
            quantizer=Quantizer(args.quantizer),
            gain_error=args.gain_error,
            offset_error=args.offset_error,
            master_seed=args.seed,
        )
        report = run_roundtrip_suite(cfg)
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"{status} {check.name} worst={check.worst:.3e} bound={check.bound:.3e}")
        return 0 if report.all_passed else 1
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except Exception as exc:  # single machine-readable error line
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
