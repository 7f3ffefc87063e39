"""Eigenvalue spectra under identity projectors and the eigengap predictor.

With ``UU^T = VV^T = WW^T = I`` the F, G, H matrices reduce to the three mode
Gram matrices ``unfold_m(X) unfold_m(X)^T``. Spectra are computed on a
centered copy of the tensor, sorted, clamped at zero and normalised to sum 1.

The predictor looks only at the cutoff of each mode:
``g_m = (lam[m_m] - lam[m_m + 1]) / lam[1]`` (1-based). A mode votes
NON_UNIQUE when ``g_m < tau``, UNIQUE when ``g_m >= 2 tau`` and MARGINAL in
between; the overall prediction is the worst vote. Modes kept in full
(``m_m >= n_m``) always vote UNIQUE.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, DataError
from .linalg import sym_eig_all
from .tensor import as_tensor3, unfold

CENTERINGS = ("all-modes", "grand", "none")
DEFAULT_TAU = 0.01

UNIQUE = "UNIQUE"
NON_UNIQUE = "NON_UNIQUE"
MARGINAL = "MARGINAL"
_RANK = {NON_UNIQUE: 0, MARGINAL: 1, UNIQUE: 2}


def center_all_modes(X):
    """Remove mode-1, then mode-2, then mode-3 fiber means."""
    X = as_tensor3(X)
    for axis in range(3):
        X = X - X.mean(axis=axis, keepdims=True)
    return X


def center(X, centering="all-modes"):
    if centering == "all-modes":
        return center_all_modes(X)
    X = as_tensor3(X)
    if centering == "grand":
        return X - X.mean()
    if centering == "none":
        return X.copy()
    raise ArgumentError(f"centering must be one of {CENTERINGS}, got {centering!r}")


def normalized_spectrum(gram):
    values = np.clip(sym_eig_all(gram).values, 0.0, None)
    total = values.sum()
    if not total > 0:
        raise DataError("degenerate spectrum: tensor is zero after centering")
    return values / total


def identity_spectra(X, centering="all-modes"):
    """Normalised spectra of the three mode Grams, largest first."""
    Xc = center(X, centering)
    spectra = []
    for mode in (1, 2, 3):
        M = unfold(Xc, mode)
        spectra.append(normalized_spectrum(M @ M.T))
    return spectra


@dataclass
class SpectrumReport:
    spectra: list
    centering: str
    dims: tuple = None
    tau: float = DEFAULT_TAU
    gaps: list = field(default_factory=list)
    votes: list = field(default_factory=list)
    prediction: str = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "schema_version": 1,
            "kind": "spectrum",
            "centering": self.centering,
            "dims": list(self.dims) if self.dims else None,
            "tau": self.tau,
            "rule": "relative gap at cutoff (lam[m] - lam[m+1]) / lam[1]; "
            "NON_UNIQUE if any < tau, UNIQUE if all >= 2 tau, else MARGINAL",
            "gaps": [None if g is None else float(g) for g in self.gaps],
            "votes": list(self.votes),
            "prediction": self.prediction,
            "notes": list(self.notes),
            "spectra": [[float(v) for v in s] for s in self.spectra],
        }


def cutoff_gap(spectrum, m):
    """Relative gap after the ``m``-th eigenvalue, or None if ``m`` keeps everything."""
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if m >= len(spectrum):
        return None
    return float((spectrum[m - 1] - spectrum[m]) / spectrum[0])


def mode_vote(gap, tau):
    if gap is None or gap >= 2 * tau:
        return UNIQUE
    if gap < tau:
        return NON_UNIQUE
    return MARGINAL


def predict_uniqueness(spectra, dims, tau=DEFAULT_TAU):
    """Return ``(prediction, gaps, votes, notes)`` for target dims."""
    dims = tuple(int(m) for m in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise ArgumentError(f"dims must be three positive integers, got {dims}")
    if not tau > 0:
        raise ArgumentError("tau must be positive")
    gaps = [cutoff_gap(s, m) for s, m in zip(spectra, dims)]
    votes = [mode_vote(g, tau) for g in gaps]
    notes = []
    if all(g is None for g in gaps):
        notes.append("exact decomposition: every mode kept in full")
    prediction = min(votes, key=_RANK.__getitem__)
    return prediction, gaps, votes, notes


def spectrum_report(X, dims=None, tau=DEFAULT_TAU, centering="all-modes"):
    spectra = identity_spectra(X, centering)
    report = SpectrumReport(spectra=spectra, centering=centering, dims=dims, tau=tau)
    if dims is not None:
        report.dims = (int(dims),) * 3 if np.ndim(dims) == 0 else tuple(int(m) for m in dims)
        report.prediction, report.gaps, report.votes, report.notes = predict_uniqueness(
            spectra, report.dims, tau
        )
    return report
