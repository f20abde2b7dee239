#!/usr/bin/env python3
"""SDR vs channel SNR for 1..3 FDMA sensors sharing one receiver.

Runs the sweep once per sensor count and prints a combined table, mirroring
the multi-sensor comparison experiment (receiver diversity via --antennas).
"""
import argparse

from ajscc.experiments import (
    ExperimentConfig,
    ExperimentKind,
    SourceSpec,
    emit_csv,
    run_sdr_vs_csnr,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snrs", default="-35,-30,-25,-20,-15,-10,-5,0")
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--levels", type=int, default=11)
    ap.add_argument("--antennas", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--x1", type=float, default=0.37, help="fixed truth in [0,1]")
    ap.add_argument("--x2", type=float, default=0.53, help="fixed truth in [0,1]")
    ap.add_argument("--out-prefix", default="sdr_sweep")
    args = ap.parse_args()

    snrs = tuple(float(t) for t in args.snrs.split(","))
    print("snr_db  " + "  ".join(f"{n}-sensor SDR" for n in (1, 2, 3)))
    tables = []
    for sensors in (1, 2, 3):
        cfg = ExperimentConfig(
            kind=ExperimentKind.SDR_VS_CSNR,
            source=SourceSpec(kind="fixed", x1=args.x1, x2=args.x2),
            trials=args.trials,
            snr_values=snrs,
            num_levels=args.levels,
            sensor_count=sensors,
            antennas=args.antennas,
            master_seed=args.seed,
        )
        result = run_sdr_vs_csnr(cfg)
        emit_csv(result, f"{args.out_prefix}_{sensors}tx.csv")
        tables.append({row.param: row.mean_sdr_db for row in result.rows})
    for snr in snrs:
        print(f"{snr:+6.1f}  " + "  ".join(f"{tables[i][snr]:12.2f}" for i in range(3)))
    print(f"wrote {args.out_prefix}_{{1,2,3}}tx.csv")


if __name__ == "__main__":
    main()
