"""Experiment orchestration: config handling, BER sweeps, threshold and
bound exports, memory design tables, and the equal-latency comparison.

Every runner returns plain records and can dump them as CSV with the
resolved config echoed in `# key=value` header lines, so a run is fully
reproducible from its own artifact.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .analysis import (BMST_FAMILY, SCLDPC_FAMILY, RepetitionPerformanceCurve,
                       complexity_per_bit, genie_lower_bound, latency_bits,
                       memory_design_table, shannon_limit, simulate_spc_curve)
from .basic_codes import REPETITION, SINGLE_PARITY_CHECK, BasicCodeSpec
from .channel import ChannelParams, awgn_llr, frame_rng, modulate_bpsk
from .core import BmstCode, BmstSpec, rate_bmst
from .errors import ConfigError
from .exit_analysis import ThresholdQuery, threshold_search
from .scldpc import (SC_DESIGN_RATE, LiftedCode, assemble_base,
                     exit_threshold_sc, window_bp_decode)
from .window_decoder import WindowConfig, decode_frame

FAMILIES = (BMST_FAMILY, SCLDPC_FAMILY)
KINDS = (REPETITION, SINGLE_PARITY_CHECK)


@dataclass(frozen=True)
class SimConfig:
    family: str = BMST_FAMILY
    kind: str = REPETITION
    N: int = 2
    B: int = 100
    m: int = 2
    L: int = 20
    M: int = 500
    interleaver_seed: int = 0
    d: int = 6
    max_iters: int = 0          # 0 resolves to 18 (bmst) or 100 (sc-ldpc)
    entropy_threshold: float = 1e-6
    ebn0_start: float = 1.0
    ebn0_stop: float = 3.0
    ebn0_step: float = 0.5
    max_frames: int = 1000
    min_bit_errors: int = 200
    seed: int = 0
    payload: str = "random"
    target_ber: float = 1e-5
    targets: str = "1e-3,1e-4,1e-5,1e-6"
    budget: int = 30000
    candidates: str = "bmst:9,bmst:14,sc-ldpc:5"
    frames: int = 1
    avg_iters: float = 1.0
    out: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"family: must be one of {FAMILIES}, got {self.family!r}")
        if self.kind not in KINDS:
            raise ConfigError(f"kind: must be one of {KINDS}, got {self.kind!r}")
        if self.ebn0_step <= 0:
            raise ConfigError(f"ebn0_step: must be positive, got {self.ebn0_step}")
        if self.min_bit_errors < 1:
            raise ConfigError(f"min_bit_errors: must be at least 1, got {self.min_bit_errors}")
        if self.max_frames < 1:
            raise ConfigError(f"max_frames: must be at least 1, got {self.max_frames}")
        if self.payload not in ("random", "zero"):
            raise ConfigError(f"payload: must be 'random' or 'zero', got {self.payload!r}")
        if self.d < 0:
            raise ConfigError(f"d: must be non-negative, got {self.d}")
        if not 0.0 < self.target_ber < 0.5:
            raise ConfigError(f"target_ber: must lie in (0, 0.5), got {self.target_ber}")
        if self.budget < 1:
            raise ConfigError(f"budget: must be positive, got {self.budget}")
        if self.frames < 1:
            raise ConfigError(f"frames: must be at least 1, got {self.frames}")
        if self.avg_iters <= 0:
            raise ConfigError(f"avg_iters: must be positive, got {self.avg_iters}")

    def resolved_max_iters(self) -> int:
        if self.max_iters > 0:
            return self.max_iters
        return 18 if self.family == BMST_FAMILY else 100

    def echo(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def config_from_mapping(mapping: dict) -> SimConfig:
    """Build a SimConfig from string-valued keys, with field diagnostics."""
    parsed = {}
    types = {f.name: f.type for f in fields(SimConfig)}
    defaults = SimConfig()
    for key, raw in mapping.items():
        if key not in types:
            raise ConfigError(f"unknown config key: {key}")
        current = getattr(defaults, key)
        try:
            if isinstance(current, int):
                parsed[key] = int(raw)
            elif isinstance(current, float):
                parsed[key] = float(raw)
            else:
                parsed[key] = str(raw)
        except (TypeError, ValueError):
            raise ConfigError(
                f"{key}: cannot parse {raw!r} as {type(current).__name__}") from None
    return SimConfig(**parsed)


def parse_config_file(path: str) -> dict:
    """key=value lines; blank lines and # comments ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


@dataclass
class PointResult:
    ebn0_db: float
    frames: int
    bit_errors: int
    bits: int
    avg_iters: float
    ops_per_bit: float
    wall_s: float
    frame_errors: list = field(default_factory=list)

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits

    @property
    def stderr(self) -> float:
        p = self.ber
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.bits)


@dataclass
class SimReport:
    config: dict
    points: list

    def to_csv(self, path_or_buf) -> None:
        _write_csv(path_or_buf, self.config,
                   ["ebn0_db", "frames", "bit_errors", "ber", "stderr",
                    "avg_iters", "ops_per_bit"],
                   [[_fmt(p.ebn0_db), p.frames, p.bit_errors, f"{p.ber:.6e}",
                     f"{p.stderr:.6e}", f"{p.avg_iters:.4f}",
                     f"{p.ops_per_bit:.4f}"] for p in self.points])


def _fmt(x: float) -> str:
    return f"{x:g}"


def _write_csv(path_or_buf, config: dict, header: list, rows: list) -> None:
    own = isinstance(path_or_buf, str)
    fh = open(path_or_buf, "w", newline="") if own else path_or_buf
    try:
        for key in sorted(config):
            fh.write(f"# {key}={config[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if own:
            fh.close()


def _sweep_grid(cfg: SimConfig) -> np.ndarray:
    n = int(math.floor((cfg.ebn0_stop - cfg.ebn0_start) / cfg.ebn0_step + 1e-9)) + 1
    if n < 1:
        raise ConfigError("ebn0_stop: sweep range is empty")
    return cfg.ebn0_start + cfg.ebn0_step * np.arange(n)


def _bmst_point(cfg: SimConfig, spec: BmstSpec, code: BmstCode, point: int,
                ebn0_db: float) -> PointResult:
    params = ChannelParams(ebn0_db, float(rate_bmst(spec)))
    wcfg = WindowConfig(cfg.d, cfg.resolved_max_iters(), cfg.entropy_threshold)
    k = spec.basic.k
    t0 = time.perf_counter()
    errors = 0
    bits = 0
    iters = []
    frame_errors = []
    frame = 0
    while frame < cfg.max_frames and errors < cfg.min_bit_errors:
        rng = frame_rng(cfg.seed, point, frame)
        if cfg.payload == "random":
            u = rng.integers(0, 2, size=(spec.L, k)).astype(np.uint8)
        else:
            u = np.zeros((spec.L, k), dtype=np.uint8)
        llr = awgn_llr(modulate_bpsk(code.encode(u)), params, rng)
        result = decode_frame(spec, llr, wcfg, code=code)
        n_err = int(np.sum(result.info_bits != u))
        errors += n_err
        bits += u.size
        iters.append(result.avg_iterations)
        frame_errors.append(n_err)
        frame += 1
    avg_iters = float(np.mean(iters))
    ops = complexity_per_bit(BMST_FAMILY, cfg.d, avg_iters, m=spec.m)
    return PointResult(ebn0_db, frame, errors, bits, avg_iters, ops,
                       time.perf_counter() - t0, frame_errors)


def _sc_point(cfg: SimConfig, code: LiftedCode, point: int,
              ebn0_db: float) -> PointResult:
    params = ChannelParams(ebn0_db, SC_DESIGN_RATE)
    t0 = time.perf_counter()
    errors = 0
    bits = 0
    iters = []
    frame_errors = []
    frame = 0
    while frame < cfg.max_frames and errors < cfg.min_bit_errors:
        rng = frame_rng(cfg.seed, point, frame)
        llr = awgn_llr(np.ones(code.n_vars), params, rng)
        result = window_bp_decode(code, llr, cfg.d, cfg.resolved_max_iters(),
                                  cfg.entropy_threshold)
        n_err = int(result.bits.sum())
        errors += n_err
        bits += code.n_vars
        iters.append(result.avg_iterations)
        frame_errors.append(n_err)
        frame += 1
    avg_iters = float(np.mean(iters))
    ops = complexity_per_bit(SCLDPC_FAMILY, cfg.d, avg_iters)
    return PointResult(ebn0_db, frame, errors, bits, avg_iters, ops,
                       time.perf_counter() - t0, frame_errors)


def run_ber_sweep(cfg: SimConfig) -> SimReport:
    """Simulate each SNR point until min_bit_errors or max_frames.

    BMST frames carry random (or zero) payloads and count info-bit errors;
    the baseline transmits the all-zero codeword and counts coded-bit errors.
    """
    grid = _sweep_grid(cfg)
    points = []
    if cfg.family == BMST_FAMILY:
        spec = BmstSpec(BasicCodeSpec(cfg.kind, cfg.N, cfg.B), cfg.m, cfg.L,
                        cfg.interleaver_seed)
        code = BmstCode(spec)
        for i, ebn0 in enumerate(grid):
            points.append(_bmst_point(cfg, spec, code, i, float(ebn0)))
    else:
        code = LiftedCode(assemble_base(cfg.L), cfg.M, cfg.interleaver_seed)
        for i, ebn0 in enumerate(grid):
            points.append(_sc_point(cfg, code, i, float(ebn0)))
    return SimReport(cfg.echo(), points)


@dataclass
class ThresholdRecord:
    family: str
    m: int
    L: int
    d: int
    target_ber: float
    threshold_db: float

    def to_csv(self, path_or_buf, config: dict) -> None:
        _write_csv(path_or_buf, config,
                   ["family", "m", "L", "d", "target_ber", "threshold_db"],
                   [[self.family, self.m, self.L, self.d, _fmt(self.target_ber),
                     f"{self.threshold_db:.4f}"]])


def run_threshold(cfg: SimConfig) -> ThresholdRecord:
    if cfg.family == BMST_FAMILY:
        spec = BmstSpec(BasicCodeSpec(cfg.kind, cfg.N, cfg.B), cfg.m, cfg.L,
                        cfg.interleaver_seed)
        result = threshold_search(ThresholdQuery(spec, cfg.d, cfg.target_ber))
        return ThresholdRecord(cfg.family, cfg.m, cfg.L, cfg.d, cfg.target_ber,
                               result.threshold_db)
    result = exit_threshold_sc(cfg.L, cfg.d, cfg.target_ber)
    return ThresholdRecord(cfg.family, 1, cfg.L, cfg.d, cfg.target_ber,
                           result.threshold_db)


def _basic_curve(cfg: SimConfig):
    if cfg.kind == REPETITION:
        return RepetitionPerformanceCurve(cfg.N)
    return simulate_spc_curve(cfg.N, seed=cfg.seed + 12345)


def run_bound(cfg: SimConfig):
    """Genie-aided lower bound of BER over the configured SNR grid."""
    curve = _basic_curve(cfg)
    rows = []
    for ebn0 in _sweep_grid(cfg):
        rows.append((float(ebn0), genie_lower_bound(curve, cfg.m, cfg.L, float(ebn0))))
    return rows


def bound_to_csv(path_or_buf, cfg: SimConfig, rows) -> None:
    _write_csv(path_or_buf, cfg.echo(), ["ebn0_db", "ber_bound"],
               [[_fmt(e), f"{b:.6e}"] for e, b in rows])


def run_design_memory(cfg: SimConfig):
    """Encoding-memory design table for the configured basic code."""
    try:
        targets = [float(t) for t in cfg.targets.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"targets: cannot parse {cfg.targets!r}") from None
    if not targets:
        raise ConfigError("targets: no target BERs given")
    curve = _basic_curve(cfg)
    basic = BasicCodeSpec(cfg.kind, cfg.N, 1)
    rate = basic.k / basic.n
    return memory_design_table(curve, targets, shannon_limit(rate))


def design_memory_to_csv(path_or_buf, cfg: SimConfig, rows) -> None:
    _write_csv(path_or_buf, cfg.echo(),
               ["target_ber", "gamma_target_db", "gamma_lim_db", "m"],
               [[_fmt(p), f"{gt:.4f}", f"{gl:.4f}", m] for p, gt, gl, m in rows])


@dataclass
class Candidate:
    family: str
    d: int
    size: int     # B for bmst, M for sc-ldpc

    @property
    def label(self) -> str:
        return f"{self.family}:d={self.d}"


def derive_candidates(budget: int, spec: str) -> list:
    """Resolve a latency budget into per-family block sizes.

    Candidates are `family:d` items; each needs budget == 2*size*(d+1)
    exactly.  On failure the error lists the nearest feasible budgets.
    """
    items = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        fam, _, d_str = token.partition(":")
        fam = fam.strip()
        if fam not in FAMILIES:
            raise ConfigError(f"candidates: unknown family {fam!r} in {token!r}")
        try:
            d = int(d_str)
        except ValueError:
            raise ConfigError(f"candidates: cannot parse delay in {token!r}") from None
        if d < 0:
            raise ConfigError(f"candidates: negative delay in {token!r}")
        items.append((fam, d))
    if not items:
        raise ConfigError("candidates: empty candidate list")
    divisor = math.lcm(*(2 * (d + 1) for _, d in items))
    if budget % divisor:
        lower = (budget // divisor) * divisor
        upper = lower + divisor
        feasible = f"{lower} or {upper}" if lower else str(upper)
        raise ConfigError(
            f"budget: {budget} is not divisible by every 2*(d+1); "
            f"nearest feasible budgets: {feasible}")
    return [Candidate(fam, d, budget // (2 * (d + 1))) for fam, d in items]


def run_equal_latency_compare(cfg: SimConfig) -> list:
    """BER sweep per candidate at one shared decoding latency.

    Returns (candidate, SimReport) pairs; every candidate's latency_bits
    equals the configured budget by construction.
    """
    pairs = []
    for cand in derive_candidates(cfg.budget, cfg.candidates):
        assert latency_bits(cand.family, cand.size, cand.d) == cfg.budget
        if cand.family == BMST_FAMILY:
            sub = replace(cfg, family=BMST_FAMILY, B=cand.size, d=cand.d,
                          max_iters=cfg.max_iters)
        else:
            sub = replace(cfg, family=SCLDPC_FAMILY, M=cand.size, d=cand.d,
                          max_iters=cfg.max_iters)
        pairs.append((cand, run_ber_sweep(sub)))
    return pairs


def compare_to_csv(path_or_buf, cfg: SimConfig, pairs) -> None:
    rows = []
    for cand, report in pairs:
        for p in report.points:
            rows.append([cand.label, cand.family, cand.size, cand.d,
                         _fmt(p.ebn0_db), p.frames, p.bit_errors,
                         f"{p.ber:.6e}", f"{p.stderr:.6e}",
                         f"{p.avg_iters:.4f}", f"{p.ops_per_bit:.4f}"])
    _write_csv(path_or_buf, cfg.echo(),
               ["candidate", "family", "size", "d", "ebn0_db", "frames",
                "bit_errors", "ber", "stderr", "avg_iters", "ops_per_bit"],
               rows)


def run_encode(cfg: SimConfig):
    """Encode seeded payload frames; rows of (frame, layer, info, code) bits."""
    spec = BmstSpec(BasicCodeSpec(cfg.kind, cfg.N, cfg.B), cfg.m, cfg.L,
                    cfg.interleaver_seed)
    code = BmstCode(spec)
    rows = []
    for f in range(cfg.frames):
        rng = frame_rng(cfg.seed, 0, f)
        if cfg.payload == "random":
            u = rng.integers(0, 2, size=(spec.L, spec.basic.k)).astype(np.uint8)
        else:
            u = np.zeros((spec.L, spec.basic.k), dtype=np.uint8)
        c = code.encode(u)
        for t in range(spec.L + spec.m):
            info = "".join(map(str, u[t])) if t < spec.L else ""
            rows.append([f, t, info, "".join(map(str, c[t]))])
    return rows


def encode_to_csv(path_or_buf, cfg: SimConfig, rows) -> None:
    _write_csv(path_or_buf, cfg.echo(), ["frame", "layer", "info_bits", "code_bits"],
               rows)


@dataclass
class ComplexityRecord:
    family: str
    size: int
    d: int
    avg_iters: float
    m: int
    latency: int
    ops_per_bit: float


def run_complexity(cfg: SimConfig) -> ComplexityRecord:
    size = cfg.B if cfg.family == BMST_FAMILY else cfg.M
    m = cfg.m if cfg.family == BMST_FAMILY else 1
    return ComplexityRecord(cfg.family, size, cfg.d, cfg.avg_iters, m,
                            latency_bits(cfg.family, size, cfg.d),
                            complexity_per_bit(cfg.family, cfg.d, cfg.avg_iters,
                                               m=cfg.m if cfg.family == BMST_FAMILY else 0))


def complexity_to_csv(path_or_buf, cfg: SimConfig, rec: ComplexityRecord) -> None:
    _write_csv(path_or_buf, cfg.echo(),
               ["family", "size", "d", "avg_iters", "m", "latency_bits",
                "ops_per_bit"],
               [[rec.family, rec.size, rec.d, _fmt(rec.avg_iters), rec.m,
                 rec.latency, f"{rec.ops_per_bit:.4f}"]])


def report_to_string(report: SimReport) -> str:
    buf = io.StringIO()
    report.to_csv(buf)
    return buf.getvalue()
