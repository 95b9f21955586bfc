"""Factor graphs, duality and decoding for polar codes built on plain F(m)."""

from .gf2 import BitMatrix, f_matrix, identity, kron, mul, solve_lower_unitriangular, transpose
from .graphs import (
    INFINITE_GIRTH,
    LabeledFactorGraph,
    NodeRole,
    RoleKind,
    base_graph,
    expand_pair,
    expand_step,
    fe_full,
    fe_sc_full,
    girth,
    he_full,
    staged_size,
)
from .polar import (
    DualCode,
    PolarCodeSpec,
    dual,
    frozen_bec,
    frozen_rm,
    generator,
    is_codeword,
    new_code,
    parity_check,
    systematic_partition,
)
from .codec import (
    CLIP,
    BPDecoder,
    DecodeResult,
    Schedule,
    bp_decode_g,
    bp_decode_h,
    encode,
    hard_decision,
    sc_decode,
    systematic_encode,
)
from .channel import BEC, BSC, BiAwgn, DecoderConfig, SimResult, channel_llrs, run_monte_carlo

__version__ = "0.1.0"
