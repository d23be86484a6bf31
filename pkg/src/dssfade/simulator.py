"""Monte Carlo node-repair simulation.

Each trial draws ``r`` uniform helper subpackets, maps them onto the
constellation, sends every helper symbol through its own channel use,
ML-decodes, and rebuilds the lost subpacket from the estimates.

Randomness is derived from ``(seed, point, block)`` with counter-based
Philox streams, so results do not depend on the number of workers or on
the order in which blocks finish.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import analysis
from .channel import ChannelConfig, ChannelKind, ml_decode_indices, transmit
from .constellation import SUPPORTED_Q, Constellation, build_qam
from .gf import FieldParams
from .gf import field as gf_field
from .rotation_opt import Objective, RotationObjectiveConfig, es_over_4n0_from_ebn0, optimize_rotation
from .storage_code import RepairScenario

BLOCK_SIZE = 8192

# Fourth counter word tags the stream family so trial and block streams never collide.
_TRIAL_TAG = 0
_BLOCK_TAG = 1


class ThetaMode(str, enum.Enum):
    NONE = "none"
    FIXED = "fixed"
    OPTIMIZE_F1 = "optimize-f1"
    OPTIMIZE_F2 = "optimize-f2"


def point_key(seed: int, point: int) -> np.ndarray:
    return np.random.SeedSequence(seed, spawn_key=(point,)).generate_state(2, np.uint64)


def _philox(seed: int, point: int, word1: int, word2: int, tag: int) -> np.random.Generator:
    counter = np.array([0, word1, word2, tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=point_key(seed, point)))


def derive_trial_stream(seed: int, point: int, trial: int) -> np.random.Generator:
    """Independent stream for one ``(point, trial)`` pair.

    The key depends on ``(seed, point)`` and the trial index occupies its
    own 64-bit counter word, far beyond any number of draws one trial makes.
    """
    return _philox(seed, point, trial, 0, _TRIAL_TAG)


def derive_block_stream(seed: int, point: int, block: int) -> np.random.Generator:
    """Stream for trials ``[block*BLOCK_SIZE, (block+1)*BLOCK_SIZE)`` of a point."""
    return _philox(seed, point, 0, block, _BLOCK_TAG)


@dataclass(frozen=True)
class TrialOutcome:
    subpacket_correct: bool
    symbol_errors: int


@dataclass
class Tally:
    trials: int = 0
    symbol_errors: int = 0
    psub_errors: int = 0
    multi_error_trials: int = 0
    cancelled_trials: int = 0

    def __iadd__(self, other: Tally) -> Tally:
        self.trials += other.trials
        self.symbol_errors += other.symbol_errors
        self.psub_errors += other.psub_errors
        self.multi_error_trials += other.multi_error_trials
        self.cancelled_trials += other.cancelled_trials
        return self


def _combine(values: np.ndarray, alphas: Sequence[int], params: FieldParams) -> np.ndarray:
    acc = np.zeros(values.shape[0], dtype=np.int64)
    for i, a in enumerate(alphas):
        col = values[:, i]
        acc ^= col if a == 1 else params.mul_row(a)[col]
    return acc


def simulate_block(
    scenario: RepairScenario, c: Constellation, cfg: ChannelConfig, rng: np.random.Generator, n: int
) -> tuple[Tally, np.ndarray, np.ndarray]:
    """Run ``n`` trials; returns the tally, per-trial correctness and symbol error counts."""
    if scenario.field.q != c.q:
        raise ValueError(f"scenario field size {scenario.field.q} != constellation size {c.q}")
    r = scenario.r
    omega = rng.integers(0, c.q, size=(n, r))
    obs = transmit(c.points[omega], cfg, rng)
    est = ml_decode_indices(obs, c)
    alphas = scenario.alpha_values
    correct = _combine(est, alphas, scenario.field) == _combine(omega, alphas, scenario.field)
    nerr = np.count_nonzero(est != omega, axis=1)
    if not (correct[nerr == 0].all() and not correct[nerr == 1].any()):
        raise AssertionError("reconstruction violated the zero/one-error rules")
    multi = nerr >= 2
    tally = Tally(
        trials=n,
        symbol_errors=int(nerr.sum()),
        psub_errors=int(np.count_nonzero(~correct)),
        multi_error_trials=int(np.count_nonzero(multi)),
        cancelled_trials=int(np.count_nonzero(multi & correct)),
    )
    return tally, correct, nerr


def run_trial(
    scenario: RepairScenario, c: Constellation, cfg: ChannelConfig, rng: np.random.Generator
) -> TrialOutcome:
    _, correct, nerr = simulate_block(scenario, c, cfg, rng, 1)
    return TrialOutcome(bool(correct[0]), int(nerr[0]))


@dataclass(frozen=True)
class SimulationPlan:
    q: int
    r: int
    channel: ChannelKind
    ebn0_db: tuple[float, ...]
    trials: int = 100_000
    seed: int = 0
    theta_mode: ThetaMode = ThetaMode.NONE
    theta: float = 0.0
    alphas: tuple[int, ...] | None = None
    grid: int = 1024
    block_size: int = BLOCK_SIZE

    def __post_init__(self) -> None:
        object.__setattr__(self, "channel", ChannelKind(self.channel))
        object.__setattr__(self, "theta_mode", ThetaMode(self.theta_mode))
        object.__setattr__(self, "ebn0_db", tuple(float(x) for x in self.ebn0_db))
        if self.q not in SUPPORTED_Q:
            raise ValueError(f"q={self.q} unsupported; choose from {set(SUPPORTED_Q)}")
        if self.r < 1:
            raise ValueError(f"r must be >= 1, got {self.r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.ebn0_db:
            raise ValueError("ebn0_db must not be empty")
        if any(b <= a for a, b in zip(self.ebn0_db, self.ebn0_db[1:])):
            raise ValueError("ebn0_db must be strictly increasing")
        if self.theta_mode is ThetaMode.FIXED and not 0.0 <= self.theta <= math.pi / 2:
            raise ValueError(f"theta={self.theta} outside [0, pi/2]")
        if self.alphas is not None:
            object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))
        if self.block_size < 1:
            raise ValueError("block_size must be >= 1")
        self.scenario()  # validates alphas against r and the field

    @property
    def field(self) -> FieldParams:
        return gf_field(self.q.bit_length() - 1)

    def scenario(self) -> RepairScenario:
        if self.alphas is None:
            return RepairScenario.lrc(self.r, self.field)
        return RepairScenario(self.r, tuple(self.field(a) for a in self.alphas), self.field)


@dataclass(frozen=True)
class SweepPoint:
    ebn0_db: float
    theta_rad: float
    r: int
    trials: int
    symbol_errors: int
    psub_errors: int
    multi_error_trials: int = 0
    cancelled_trials: int = 0

    @property
    def symbols(self) -> int:
        return self.trials * self.r

    @property
    def ps(self) -> float:
        return self.symbol_errors / self.symbols

    @property
    def ps_stderr(self) -> float:
        return math.sqrt(self.ps * (1.0 - self.ps) / self.symbols)

    @property
    def psub(self) -> float:
        return self.psub_errors / self.trials

    @property
    def psub_stderr(self) -> float:
        return math.sqrt(self.psub * (1.0 - self.psub) / self.trials)

    @property
    def psub_upper95(self) -> float:
        """Rule of three when no subpacket error was seen."""
        if self.psub_errors == 0:
            return 3.0 / self.trials
        return self.psub + 1.96 * self.psub_stderr

    @property
    def estimates(self) -> analysis.PsubEstimates:
        return analysis.bounds(self.ps, self.r)

    @property
    def lower_bound(self) -> float:
        return self.estimates.lower

    @property
    def upper_bound(self) -> float:
        return self.estimates.upper

    @property
    def r_times_ps(self) -> float:
        return self.r * self.ps

    def lower_gap_sigma(self) -> float:
        """Combined standard error of ``psub - lower_bound``."""
        return math.hypot(self.psub_stderr, analysis.lower_bound_stderr(self.ps, self.ps_stderr, self.r))

    def upper_gap_sigma(self) -> float:
        return math.hypot(self.psub_stderr, analysis.upper_bound_stderr(self.ps, self.ps_stderr, self.r))


@dataclass(frozen=True)
class SweepResult:
    q: int
    r: int
    channel: ChannelKind
    seed: int
    theta_mode: ThetaMode
    points: tuple[SweepPoint, ...] = field(default_factory=tuple)


def _theta_for_point(plan: SimulationPlan, ebn0_db: float) -> float:
    if plan.theta_mode is ThetaMode.NONE:
        return 0.0
    if plan.theta_mode is ThetaMode.FIXED:
        return plan.theta
    objective = Objective.F1 if plan.theta_mode is ThetaMode.OPTIMIZE_F1 else Objective.F2
    cfg = RotationObjectiveConfig(plan.q, plan.r, es_over_4n0_from_ebn0(ebn0_db, plan.q), plan.grid)
    return optimize_rotation(cfg, objective).theta_star


def run_point(
    plan: SimulationPlan, index: int, executor: ThreadPoolExecutor | None = None
) -> SweepPoint:
    ebn0_db = plan.ebn0_db[index]
    theta = _theta_for_point(plan, ebn0_db)
    c = build_qam(plan.q, theta)
    if abs(c.E_b - build_qam(plan.q).E_b) > 1e-12 * c.E_b:
        raise AssertionError("rotation changed the energy per bit")
    cfg = ChannelConfig.from_ebn0(plan.channel, ebn0_db, c.E_b)
    scenario = plan.scenario()
    nblocks = -(-plan.trials // plan.block_size)

    def work(b: int) -> Tally:
        n = min(plan.block_size, plan.trials - b * plan.block_size)
        rng = derive_block_stream(plan.seed, index, b)
        return simulate_block(scenario, c, cfg, rng, n)[0]

    total = Tally()
    results = executor.map(work, range(nblocks)) if executor else map(work, range(nblocks))
    for t in results:
        total += t
    return SweepPoint(
        ebn0_db=ebn0_db,
        theta_rad=theta,
        r=plan.r,
        trials=total.trials,
        symbol_errors=total.symbol_errors,
        psub_errors=total.psub_errors,
        multi_error_trials=total.multi_error_trials,
        cancelled_trials=total.cancelled_trials,
    )


def run_sweep(plan: SimulationPlan, workers: int = 1) -> SweepResult:
    """Simulate every E_b/N_0 point of ``plan``; identical output for any ``workers``."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        pts = tuple(run_point(plan, i) for i in range(len(plan.ebn0_db)))
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            pts = tuple(run_point(plan, i, ex) for i in range(len(plan.ebn0_db)))
    return SweepResult(plan.q, plan.r, plan.channel, plan.seed, plan.theta_mode, pts)
