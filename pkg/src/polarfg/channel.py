"""Memoryless binary channels and seeded Monte-Carlo error-rate estimation.

Each trial ``t`` draws from its own generator seeded by
``SeedSequence(seed, spawn_key=(t,))``, so a result depends only on the
inputs and the master seed, never on how trials are split across threads.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .codec import (
    CLIP,
    DEFAULT_MAX_ITERS,
    BPDecoder,
    Schedule,
    encode,
    sc_decode_batch,
    systematic_encode,
)
from .polar import PolarCodeSpec

log = logging.getLogger(__name__)

CSV_FIELDS = ("channel", "param", "decoder", "n", "k", "trials", "bit_errors", "frame_errors", "ber", "fer", "seed")
CHUNK = 512


@dataclass(frozen=True)
class BEC:
    eps: float

    name = "bec"

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"BEC erasure probability must be in [0, 1], got {self.eps}")

    @property
    def param(self) -> float:
        return self.eps

    @property
    def degenerate(self) -> bool:
        return self.eps == 1.0


@dataclass(frozen=True)
class BSC:
    p: float

    name = "bsc"

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"BSC crossover probability must be in [0, 0.5], got {self.p}")

    @property
    def param(self) -> float:
        return self.p

    @property
    def degenerate(self) -> bool:
        return self.p == 0.5

    @property
    def llr_magnitude(self) -> float:
        if self.p == 0.0:
            return CLIP
        return min(math.log((1.0 - self.p) / self.p), CLIP)


@dataclass(frozen=True)
class BiAwgn:
    """Antipodal 0 -> +1, 1 -> -1 with Gaussian noise of deviation ``sigma``."""

    sigma: float

    name = "awgn"

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"AWGN sigma must be positive, got {self.sigma}")

    @property
    def param(self) -> float:
        return self.sigma

    degenerate = False


ChannelModel = BEC | BSC | BiAwgn


def parse_channel(text: str) -> list[ChannelModel]:
    """Parse ``bec:0.3``, ``bsc:0.01,0.02`` or ``awgn:0.8`` into channel models."""
    kind, _, params = text.partition(":")
    ctor = {"bec": BEC, "bsc": BSC, "awgn": BiAwgn}.get(kind.strip().lower())
    if ctor is None or not params:
        raise ValueError(f"channel must look like bec:<eps>, bsc:<p> or awgn:<sigma>, got {text!r}")
    try:
        values = [float(v) for v in params.split(",")]
    except ValueError:
        raise ValueError(f"bad channel parameter in {text!r}") from None
    return [ctor(v) for v in values]


def _draw(ch: ChannelModel, rng: np.random.Generator, n: int) -> np.ndarray:
    if isinstance(ch, BiAwgn):
        return rng.standard_normal(n)
    return rng.random(n) < ch.param


def _llrs(ch: ChannelModel, codeword: np.ndarray, noise: np.ndarray) -> np.ndarray:
    sym = 1.0 - 2.0 * codeword.astype(float)
    if isinstance(ch, BEC):
        out = np.where(noise, 0.0, sym * CLIP)
    elif isinstance(ch, BSC):
        out = np.where(noise, -sym, sym) * ch.llr_magnitude
    else:
        y = sym + ch.sigma * noise
        out = 2.0 * y / ch.sigma**2
    return np.clip(out, -CLIP, CLIP)


def channel_llrs(ch: ChannelModel, codeword, rng: np.random.Generator) -> np.ndarray:
    """Transmit ``codeword`` once and return the clipped channel LLRs."""
    x = np.asarray(codeword, dtype=np.uint8)
    return _llrs(ch, x, _draw(ch, rng, len(x)))


@dataclass(frozen=True)
class DecoderConfig:
    name: str = "sc"  # sc | bp-g | bp-h
    schedule: Schedule = Schedule.FLOODING
    max_iters: int = DEFAULT_MAX_ITERS
    systematic: bool = False
    all_zero: bool = False

    def __post_init__(self):
        if self.name not in ("sc", "bp-g", "bp-h"):
            raise ValueError(f"unknown decoder {self.name!r}")
        object.__setattr__(self, "schedule", Schedule(self.schedule))
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    @property
    def tag(self) -> str:
        t = self.name
        if self.name != "sc" and self.schedule is not Schedule.FLOODING:
            t += f"@{self.schedule.value}"
        if self.systematic:
            t += "+sys"
        return t

    def build(self, code: PolarCodeSpec):
        if self.name == "sc":
            return lambda llr: sc_decode_batch(code, llr, self.systematic)
        dec = BPDecoder(code, "g" if self.name == "bp-g" else "h", self.schedule, self.max_iters)
        return lambda llr: dec.decode_batch(llr, self.systematic)


@dataclass(frozen=True)
class SimResult:
    trials: int
    bit_errors: int
    frame_errors: int
    seed: int
    decoder_name: str
    channel: ChannelModel
    n: int
    k: int
    undetected_errors: int = 0
    degenerate: bool = False

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.k) if self.k else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials

    def row(self) -> dict:
        return {
            "channel": self.channel.name,
            "param": repr(float(self.channel.param)),
            "decoder": self.decoder_name,
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "bit_errors": self.bit_errors,
            "frame_errors": self.frame_errors,
            "ber": repr(self.ber),
            "fer": repr(self.fer),
            "seed": self.seed,
        }


def _chunk(code, ch, cfg, decode, seed, lo, hi):
    n, k = code.n, code.k
    info = np.zeros((hi - lo, k), dtype=np.uint8)
    noise = []
    for row, t in enumerate(range(lo, hi)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))
        if not cfg.all_zero:
            info[row] = rng.integers(0, 2, size=k, dtype=np.uint8)
        noise.append(_draw(ch, rng, n))
    x = systematic_encode(code, info) if cfg.systematic else encode(code, info)
    llr = _llrs(ch, x, np.stack(noise))
    res = decode(llr)
    bit_err = (res.info_bits != info).sum(axis=1)
    frame_wrong = bit_err > 0
    undetected = res.converged & (res.bits != x).any(axis=1)
    return int(bit_err.sum()), int(frame_wrong.sum()), int(undetected.sum())


def thread_count() -> int:
    env = os.environ.get("POLAR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer POLAR_THREADS=%r", env)
    return 1


def run_monte_carlo(code: PolarCodeSpec, ch: ChannelModel, decoder: DecoderConfig, trials: int, seed: int,
                    threads: int | None = None) -> SimResult:
    """Estimate information-bit and frame error rates over ``trials`` frames.

    Errors are counted on information bits against what was sent; a frame
    is in error when any of its information bits is wrong.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned value")
    if ch.degenerate:
        log.warning("channel %s:%s carries no information; all LLRs are 0", ch.name, ch.param)
    decode = decoder.build(code)
    bounds = [(lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]
    workers = threads if threads is not None else thread_count()

    def job(b):
        return _chunk(code, ch, decoder, decode, seed, *b)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, bounds))
    else:
        parts = [job(b) for b in bounds]
    be, fe, ud = (sum(p[i] for p in parts) for i in range(3))
    return SimResult(trials, be, fe, seed, decoder.tag, ch, code.n, code.k, ud, ch.degenerate)


def results_to_csv(results: list[SimResult]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()


def results_to_json(results: list[SimResult]) -> str:
    return json.dumps([r.row() for r in results], indent=2)
