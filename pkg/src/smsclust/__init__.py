"""Joint selection of embedding dimension and cluster count for spectral graph clustering."""
from __future__ import annotations

from .baselines import seq_bic_zg, zg_elbow
from .errors import (DegenerateBlockError, EmbeddingDimensionError, NumericError,
                     ParameterError, SelectionError)
from .gmm import (ConstrainedGmmParams, EmOptions, FitResult, bic, em_fit, gmm_bic,
                  log_density, map_labels, param_count, sample_model)
from .graphgen import (THREE_BLOCK, TWO_BLOCK, SbmParams, edge_probability_matrix,
                       sample_memberships, sample_rdpg, sample_sbm, sample_sbm_conditional)
from .metrics import ari, selection_table, sign_test
from .selection import SelectionOptions, SelectionResult, sms, sms_reduced, sms_two_step
from .spectral import block_stats, eig_sym, extended_ase, split

__all__ = [
    "ConstrainedGmmParams", "DegenerateBlockError", "EmOptions", "EmbeddingDimensionError",
    "FitResult", "NumericError", "ParameterError", "SbmParams", "SelectionError",
    "SelectionOptions", "SelectionResult", "THREE_BLOCK", "TWO_BLOCK", "ari", "bic",
    "block_stats", "edge_probability_matrix", "eig_sym", "em_fit", "extended_ase", "gmm_bic",
    "log_density", "map_labels", "param_count", "sample_memberships", "sample_model",
    "sample_rdpg", "sample_sbm", "sample_sbm_conditional", "selection_table", "seq_bic_zg",
    "sign_test", "sms", "sms_reduced", "sms_two_step", "split", "zg_elbow",
]
