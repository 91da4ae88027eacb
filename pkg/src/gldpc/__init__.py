"""Generalized LDPC codes with message-invariant subcode constraints:
density-evolution threshold analysis (BEC and BI-AWGN), Gaussian and
Gaussian-mixture approximations, ensemble graph sampling, and an iterative
BP/APP decoder with a BLER simulation harness."""

from .subcodes import (
    EnsembleSpec,
    LinearSubcode,
    builtin_c1,
    builtin_c2,
    design_rate,
    get_subcode,
    spc_code,
    verify_message_invariance,
)
from .gc_app import app_message, app_message_batch, app_erasure_output
from .channels import Bec, BiAwgn, capacity, channel_llr, transmit
from .de_bec import bec_threshold, gc_erasure_poly, spc_erasure_poly, sweep_t_bec
from .de_awgn import McConfig, awgn_threshold_de, ldpc_threshold_de
from .gauss_approx import (
    GcMeanMap,
    PhiEvaluator,
    fit_gc_mean_map,
    ga_threshold,
    ga_ldpc_threshold,
    gma_threshold,
    gma_ldpc_threshold,
    paper_fit_map,
)
from .ensemble_graph import (
    TannerGraph,
    clean_graph,
    derive_comparison_ldpc,
    girth_check,
    load_graph,
    sample_graph,
    save_graph,
)
from .mp_decoder import BlerRecord, bler_sim, decode, syndrome_check

__version__ = "0.1.0"
