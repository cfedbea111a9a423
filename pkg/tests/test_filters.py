"""Filter design and streaming application.

The frequency-response oracle here evaluates each biquad's polynomial
ratio at z = e^{j 2 pi f / fs} directly, independent of the scipy
helpers used inside the package.
"""

import numpy as np
import pytest

from pizzatruck.errors import InvalidBand
from pizzatruck.filters import StreamingFilter, apply_filter, design_bandpass

from conftest import make_chunk


def sos_gain_db(sos, freq_hz, fs):
    """|H| in dB via direct per-section polynomial evaluation."""
    z = np.exp(1j * 2 * np.pi * freq_hz / fs)
    h = 1.0 + 0.0j
    for b0, b1, b2, a0, a1, a2 in sos:
        h *= (b0 + b1 / z + b2 / z**2) / (a0 + a1 / z + a2 / z**2)
    return 20 * np.log10(np.abs(h) + 1e-300)


class TestDesignBandpass:
    def test_broadband_design_passes_midband(self):
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=4)
        assert sos_gain_db(coeffs.sos, 20.0, 250.0) >= -1.0
        for section in coeffs.sos:
            poles = np.roots(section[3:])
            assert np.all(np.abs(poles) < 1.0)

    def test_alpha_band_design_selectivity(self):
        coeffs = design_bandpass(8.0, 12.0, 250.0, order=4)
        assert sos_gain_db(coeffs.sos, 10.0, 250.0) >= -1.0
        assert sos_gain_db(coeffs.sos, 2.0, 250.0) <= -20.0

    def test_band_edges_sit_at_minus_3db(self):
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=10)
        assert sos_gain_db(coeffs.sos, 1.0, 250.0) == pytest.approx(-3.0, abs=0.2)
        assert sos_gain_db(coeffs.sos, 40.0, 250.0) == pytest.approx(-3.0, abs=0.2)

    @pytest.mark.parametrize("low,high", [(40.0, 1.0), (8.0, 8.0), (0.0, 40.0), (1.0, 125.0)])
    def test_invalid_band_rejected(self, low, high):
        with pytest.raises(InvalidBand):
            design_bandpass(low, high, 250.0, order=4)

    @pytest.mark.parametrize("order", [0, 1, 3])
    def test_bad_order_rejected(self, order):
        with pytest.raises(ValueError):
            design_bandpass(1.0, 40.0, 250.0, order=order)


class TestApplyFilter:
    def test_zero_in_zero_out(self):
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=4)
        chunk = make_chunk(np.zeros((16, 500)))
        for mode in ("causal", "zero_phase"):
            out = apply_filter(chunk, coeffs, mode=mode)
            assert np.all(out.samples == 0.0)
            assert out.start_time_s == chunk.start_time_s

    def test_dc_offset_rejected_at_steady_state(self):
        # Oracle: a band-pass has zero DC gain, so the steady-state mean
        # of a constant input must vanish relative to the offset.
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=4)
        offset = 100.0
        chunk = make_chunk(np.full((16, 250 * 30), offset))
        out = apply_filter(chunk, coeffs, mode="causal")
        steady = out.samples[:, -500:]
        assert np.all(np.abs(steady.mean(axis=1)) < 0.01 * offset)

    def test_chunk_split_invariance_bitwise(self):
        rng = np.random.default_rng(3)
        data = rng.standard_normal((16, 400))
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=4)

        whole = StreamingFilter(coeffs, 16).process_array(data)

        filt = StreamingFilter(coeffs, 16)
        pieces = []
        # Sizes 1 then irregular blocks: output must be bit-identical.
        cuts = [1] * 20 + [3, 17, 60, 300]
        start = 0
        for size in cuts:
            pieces.append(filt.process_array(data[:, start:start + size]))
            start += size
        assert np.array_equal(np.concatenate(pieces, axis=1), whole)

    def test_unknown_mode_rejected(self):
        coeffs = design_bandpass(1.0, 40.0, 250.0, order=4)
        with pytest.raises(ValueError):
            apply_filter(make_chunk(np.zeros((16, 10))), coeffs, mode="sideways")
