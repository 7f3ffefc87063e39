import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tensoraudit.errors import ArgumentError, DataError
from tensoraudit.spectrum import (
    MARGINAL,
    NON_UNIQUE,
    UNIQUE,
    center,
    center_all_modes,
    cutoff_gap,
    identity_spectra,
    mode_vote,
    predict_uniqueness,
    spectrum_report,
)
from tensoraudit.synth import gen_planted_tucker, gen_random_tensor


def test_constant_tensor_centers_to_zero():
    assert np.abs(center_all_modes(np.full((3, 4, 2), 7.5))).max() <= 1e-15


def test_centering_idempotent_and_zero_means(rng):
    X = rng.standard_normal((3, 3, 3)) + 2.0
    Xc = center_all_modes(X)
    for axis in range(3):
        assert np.abs(Xc.mean(axis=axis)).max() <= 1e-12
    np.testing.assert_allclose(center_all_modes(Xc), Xc, atol=1e-12)


def test_other_centerings(rng):
    X = rng.random((3, 4, 5))
    assert abs(center(X, "grand").mean()) <= 1e-15
    np.testing.assert_array_equal(center(X, "none"), X)
    with pytest.raises(ArgumentError):
        center(X, "median")


def test_rank_r_mode_one_spectrum(rng):
    A = rng.standard_normal((6, 2))
    B = rng.standard_normal((2, 5 * 4))
    X = (A @ B).reshape((6, 5, 4), order="F")
    spectra = identity_spectra(X, centering="none")
    assert np.sum(spectra[0] > 1e-12) == 2


def test_rank_one_each_mode_single_unit_entry(rng):
    X = np.einsum("i,j,k->ijk", rng.random(4) + 1, rng.random(5) + 1, rng.random(3) + 1)
    for s in identity_spectra(X, centering="none"):
        assert s[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.abs(s[1:]) <= 1e-12)


def test_spectra_normalised_and_sorted(rng):
    for s in identity_spectra(rng.random((5, 6, 7))):
        assert s.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.all(np.diff(s) <= 0) and np.all(s >= -1e-12)


def test_random_tensor_spectra_nearly_flat():
    for s in identity_spectra(gen_random_tensor((30, 30, 30), 5)):
        # no dominant direction survives centering; the bulk sits near 1/n
        assert s[0] < 0.1
        assert s[5] / s[0] > 0.5


def test_zero_after_centering_is_data_error():
    with pytest.raises(DataError, match="degenerate"):
        identity_spectra(np.full((3, 3, 3), 2.0))


def test_gap_rule_arithmetic():
    spectrum = [0.5, 0.3, 0.1, 0.05, 0.03, 0.02]
    assert cutoff_gap(spectrum, 3) == pytest.approx(0.1)
    assert mode_vote(cutoff_gap(spectrum, 3), 0.01) == UNIQUE
    assert mode_vote(0.015, 0.01) == MARGINAL
    assert mode_vote(0.005, 0.01) == NON_UNIQUE


def test_flat_spectrum_non_unique():
    flat = np.full(20, 1 / 20)
    assert predict_uniqueness([flat] * 3, (5, 5, 5))[0] == NON_UNIQUE


def test_eight_equal_dominant_modes():
    s = np.array([0.1] * 8 + [0.01] * 20)
    s = s / s.sum()
    assert predict_uniqueness([s] * 3, (5, 5, 5))[0] == NON_UNIQUE
    assert predict_uniqueness([s] * 3, (8, 8, 8))[0] == UNIQUE


def test_full_dims_exact_note():
    s = np.full(4, 0.25)
    prediction, gaps, votes, notes = predict_uniqueness([s] * 3, (4, 4, 4))
    assert prediction == UNIQUE and gaps == [None] * 3 and notes


def test_one_mode_decides(rng):
    gapped = np.array([0.6, 0.3, 0.05, 0.05])
    flat = np.full(4, 0.25)
    assert predict_uniqueness([gapped, gapped, flat], (2, 2, 2))[0] == NON_UNIQUE


def test_predictor_argument_errors():
    with pytest.raises(ArgumentError):
        predict_uniqueness([np.ones(3)] * 3, (1, 1))
    with pytest.raises(ArgumentError):
        predict_uniqueness([np.ones(3)] * 3, (1, 1, 1), tau=0.0)


@settings(max_examples=40)
@given(
    st.lists(st.floats(0.0, 1.0), min_size=3, max_size=12),
    st.integers(1, 11),
    st.floats(1e-4, 0.2),
    st.floats(1.0, 10.0),
)
def test_vote_monotone_in_tau(values, m, tau, factor):
    s = np.sort(np.asarray(values) + 1e-3)[::-1]
    s = s / s.sum()
    rank = {NON_UNIQUE: 0, MARGINAL: 1, UNIQUE: 2}
    low = predict_uniqueness([s] * 3, (m, m, m), tau)[0]
    high = predict_uniqueness([s] * 3, (m, m, m), tau * factor)[0]
    assert rank[high] <= rank[low]


def test_prediction_invariant_to_rescaling():
    X = gen_planted_tucker((12, 12, 12), (4, 4, 4), (1, 0.7, 0.4, 0.2), 0.02, seed=1)
    a = spectrum_report(X, (3, 3, 3))
    b = spectrum_report(X * 1234.5, (3, 3, 3))
    assert a.prediction == b.prediction
    for s, t in zip(a.spectra, b.spectra):
        np.testing.assert_allclose(s, t, rtol=1e-9, atol=1e-15)


def test_planted_predictions():
    gapped = gen_planted_tucker((20, 20, 20), (5, 5, 5), (1, 0.8, 0.6, 0.5, 0.4), 0.01, seed=3)
    assert spectrum_report(gapped, (5, 5, 5)).prediction == UNIQUE
    flat = gen_planted_tucker((20, 20, 20), (6, 6, 6), (1, 0.6, 0.6, 0.6, 0.6, 0.6), 0.01, seed=3)
    assert spectrum_report(flat, (3, 3, 3)).prediction == NON_UNIQUE


def test_report_dict():
    X = gen_random_tensor((5, 6, 7), 0)
    d = spectrum_report(X, (2, 2, 2), centering="grand").to_dict()
    assert d["kind"] == "spectrum" and d["centering"] == "grand"
    assert [len(s) for s in d["spectra"]] == [5, 6, 7]
    assert d["prediction"] in (UNIQUE, NON_UNIQUE, MARGINAL)
    assert spectrum_report(X).to_dict()["prediction"] is None
