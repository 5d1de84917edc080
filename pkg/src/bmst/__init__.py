"""Workbench for block Markov superposition transmission codes."""
from .analysis import (complexity_per_bit, design_memory, genie_lower_bound,
                       genie_shift_db, latency_bits, memory_design_table,
                       shannon_limit)
from .basic_codes import (REPETITION, SINGLE_PARITY_CHECK, BasicCodeSpec,
                          encode_basic, siso_decode_basic)
from .channel import ChannelParams, awgn_llr, channel_mi, frame_rng, modulate_bpsk
from .core import BmstCode, BmstSpec, encode_bmst, rate_bmst
from .errors import WorkbenchError
from .exit_analysis import ThresholdQuery, threshold_search, window_exit_decode
from .jfunction import j_fun, j_inv
from .scldpc import (LiftedCode, ProtographSpec, assemble_base,
                     exit_threshold_sc, window_bp_decode)
from .window_decoder import WindowConfig, decode_frame

__version__ = "0.1.0"

__all__ = [
    "BasicCodeSpec", "BmstCode", "BmstSpec", "ChannelParams", "LiftedCode",
    "ProtographSpec", "REPETITION", "SINGLE_PARITY_CHECK", "ThresholdQuery",
    "WindowConfig", "WorkbenchError", "assemble_base", "awgn_llr",
    "channel_mi", "complexity_per_bit", "decode_frame", "design_memory",
    "encode_basic", "encode_bmst", "exit_threshold_sc", "frame_rng",
    "genie_lower_bound", "genie_shift_db", "j_fun", "j_inv", "latency_bits",
    "memory_design_table", "modulate_bpsk", "rate_bmst", "shannon_limit",
    "siso_decode_basic", "threshold_search", "window_bp_decode",
    "window_exit_decode",
]
