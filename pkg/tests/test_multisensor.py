"""FDMA cluster tests: band plans, joint capture, solo equivalence, diversity."""
import math

import numpy as np
import pytest

from ajscc.mapping import MappingConfig, SourceSample
from ajscc.multisensor import (
    FdmaPlan,
    SensorNode,
    assign_channels,
    build_capture,
    diversity_combine,
    simulate_cluster,
)
from ajscc.signal_chain import ChannelSpec, FmConfig, ReceiverConfig

FM = FmConfig()
RX = ReceiverConfig()
CODEC = MappingConfig(5.0, 11, 1.0)


def make_sensors(truths):
    return [SensorNode(i, CODEC, FM, SourceSample(*t)) for i, t in enumerate(truths)]


def no_noise(n):
    return [ChannelSpec(snr_db=math.inf) for _ in range(n)]


class TestAssignChannels:
    def test_single_band_starts_at_guard(self):
        plan = assign_channels(1, FM, 5.0)
        assert plan.offsets == (1000.0,)
        assert plan.band(0) == (1000.0, 6000.0)

    def test_three_bands(self):
        plan = assign_channels(3, FM, 5.0, guard_hz=1000.0)
        assert plan.offsets == (1000.0, 7000.0, 13000.0)

    def test_capacity_limit(self):
        # 5 bands of 6 kHz fit under the 32768 Hz Nyquist edge; 6 do not
        assert assign_channels(5, FM, 5.0).offsets[-1] == 25000.0
        with pytest.raises(ValueError):
            assign_channels(6, FM, 5.0)
        with pytest.raises(ValueError):
            assign_channels(11, FM, 5.0)

    def test_rejects_zero_sensors(self):
        with pytest.raises(ValueError):
            assign_channels(0, FM, 5.0)


class TestFdmaPlan:
    def test_shared_band_rejected(self):
        with pytest.raises(ValueError):
            FdmaPlan(offsets=(1000.0, 1000.0), guard_hz=1000.0, band_width_hz=5000.0)

    def test_guard_violation_rejected(self):
        with pytest.raises(ValueError):
            FdmaPlan(offsets=(1000.0, 6500.0), guard_hz=1000.0, band_width_hz=5000.0)

    def test_touching_bands_with_zero_guard_allowed(self):
        plan = FdmaPlan(offsets=(0.0, 5000.0), guard_hz=0.0, band_width_hz=5000.0)
        assert plan.band(1) == (5000.0, 10000.0)


class TestCapture:
    def test_antenna_waveforms_share_geometry(self):
        sensors = make_sensors([(0.2, 0.3), (0.1, 0.8)])
        plan = assign_channels(2, FM, 5.0)
        cap = build_capture(sensors, plan, no_noise(2), antennas=3, seed=5)
        assert len(cap.waveforms) == 3
        assert len({len(w) for w in cap.waveforms}) == 1

    def test_noiseless_capture_is_tone_sum(self):
        sensors = make_sensors([(0.0, 0.0)])
        plan = assign_channels(1, FM, 5.0)
        cap = build_capture(sensors, plan, no_noise(1))
        n = np.arange(FM.num_samples)
        expected = np.cos(2 * np.pi * 1000.0 / 65536.0 * n)
        assert np.allclose(cap.waveforms[0].samples, expected, atol=1e-12)

    def test_mixed_snr_rejected(self):
        sensors = make_sensors([(0.2, 0.3), (0.1, 0.8)])
        plan = assign_channels(2, FM, 5.0)
        chans = [ChannelSpec(snr_db=-10.0), ChannelSpec(snr_db=-20.0)]
        with pytest.raises(ValueError):
            build_capture(sensors, plan, chans)

    def test_duplicate_ids_rejected(self):
        sensors = [
            SensorNode(1, CODEC, FM, SourceSample(0.1, 0.1)),
            SensorNode(1, CODEC, FM, SourceSample(0.2, 0.2)),
        ]
        plan = assign_channels(2, FM, 5.0)
        with pytest.raises(ValueError):
            build_capture(sensors, plan, no_noise(2))


class TestSimulateCluster:
    def test_single_sensor_roundtrip(self):
        sensors = make_sensors([(0.21, 0.58)])
        plan = assign_channels(1, FM, 5.0)
        (res,) = simulate_cluster(sensors, plan, no_noise(1), RX)
        assert abs(res.vd_hat - res.vd_true) <= 0.5 / FM.scale + 1e-9
        assert abs(res.decoded.x1_hat - 0.21) <= 0.5 / FM.scale + 1e-9

    def test_three_sensors_noiseless_match_solo_runs(self):
        truths = [(0.11, 0.27), (0.35, 0.62), (0.02, 0.93)]
        sensors = make_sensors(truths)
        plan = assign_channels(3, FM, 5.0)
        joint = simulate_cluster(sensors, plan, no_noise(3), RX)
        for i, sensor in enumerate(sensors):
            solo_plan = FdmaPlan(
                offsets=(plan.offsets[i],),
                guard_hz=plan.guard_hz,
                band_width_hz=plan.band_width_hz,
            )
            (solo,) = simulate_cluster([sensor], solo_plan, no_noise(1), RX)
            assert joint[i].peak_hz == solo.peak_hz
            assert joint[i].vd_hat == solo.vd_hat
            assert joint[i].decoded == solo.decoded

    def test_results_invariant_under_sensor_permutation(self):
        truths = [(0.11, 0.27), (0.35, 0.62), (0.02, 0.93)]
        sensors = make_sensors(truths)
        plan = assign_channels(3, FM, 5.0)
        chans = [ChannelSpec(snr_db=-20.0) for _ in range(3)]
        direct = simulate_cluster(sensors, plan, chans, RX, seed=9)
        order = [2, 0, 1]
        permuted_plan = FdmaPlan(
            offsets=tuple(plan.offsets[i] for i in order),
            guard_hz=plan.guard_hz,
            band_width_hz=plan.band_width_hz,
        )
        permuted = simulate_cluster(
            [sensors[i] for i in order],
            permuted_plan,
            [chans[i] for i in order],
            RX,
            seed=9,
        )
        by_id_direct = {r.sensor_id: r for r in direct}
        for res in permuted:
            ref = by_id_direct[res.sensor_id]
            assert res.peak_hz == ref.peak_hz
            assert res.vd_hat == ref.vd_hat
            assert res.decoded == ref.decoded

    def test_mismatched_plan_length_rejected(self):
        sensors = make_sensors([(0.1, 0.1), (0.2, 0.2)])
        plan = assign_channels(3, FM, 5.0)
        with pytest.raises(ValueError):
            simulate_cluster(sensors, plan, no_noise(2), RX)

    def test_sensor_wider_than_its_band_rejected(self):
        wide = MappingConfig(8.0, 11, 1.0)  # 8 kHz of tones in a 5 kHz band
        sensors = [SensorNode(0, wide, FM, SourceSample(0.1, 0.1))]
        plan = assign_channels(1, FM, 5.0)
        with pytest.raises(ValueError, match="wider"):
            simulate_cluster(sensors, plan, no_noise(1), RX)


class TestDiversity:
    def test_single_spectrum_identity(self):
        spec = np.abs(np.random.default_rng(0).normal(size=64))
        assert np.allclose(diversity_combine([spec]), spec)

    def test_identical_spectra_keep_argmax(self):
        spec = np.abs(np.random.default_rng(1).normal(size=64))
        combined = diversity_combine([spec, spec])
        assert np.argmax(combined) == np.argmax(spec)
        assert np.allclose(combined, spec)

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            diversity_combine([np.ones(8), np.ones(9)])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            diversity_combine([])

    def test_two_capture_combining_reduces_miss_rate(self):
        # at -30 dB single captures miss the tone peak noticeably more often
        sensors = make_sensors([(0.37, 0.53)])
        plan = assign_channels(1, FM, 5.0)
        chans = [ChannelSpec(snr_db=-30.0)]
        misses = {1: 0, 2: 0}
        for antennas in (1, 2):
            for trial in range(100):
                (res,) = simulate_cluster(
                    sensors, plan, chans, RX, antennas=antennas, seed=trial
                )
                if abs(res.vd_hat - res.vd_true) > 1e-3:
                    misses[antennas] += 1
        assert misses[2] <= misses[1]
        assert misses[1] > 0
