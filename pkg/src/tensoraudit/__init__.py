"""HOSVD and ParaFac decompositions of dense 3D tensors, with a multi-start
uniqueness audit and an eigengap-based uniqueness predictor."""

from .audit import AuditConfig, AuditReport, hosvd_distance, parafac_distance, run_audit
from .errors import ArgumentError, DataError, FormatError, NumericalError
from .hosvd import HosvdModel, compute_F, compute_G, compute_H, core_tensor, hosvd_run
from .io import ingest_images, load_tensor, save_tensor
from .parafac import ParafacModel, parafac_objective, parafac_run
from .spectrum import identity_spectra, predict_uniqueness, spectrum_report
from .synth import gen_planted_tucker, gen_random_tensor
from .t1 import make_init_bundle, t1_gram, t1_solve
from .tensor import (
    fold,
    frobenius_norm_sq,
    mode_multiply,
    reconstruct_hosvd,
    reconstruct_parafac,
    unfold,
)

__version__ = "0.1.0"
