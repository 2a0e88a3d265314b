"""
Simulator Service

Runs an n-tag system step by step: n symbols leave the front of the queue and
the matching production joins the back. Epoch boundaries are tracked so that
observables can be recorded at the start of every epoch.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from models.distribution import TupleDistribution
from models.exceptions import HaltedError, QueueTooShortError
from models.rule_set import Alphabet, RuleSet, validate_rules
from models.simulation import EpochReport, SimulationRun, Snapshot
from services.config_service import ConfigService

Seed = Union[int, np.random.SeedSequence]
Word = Union[str, Sequence[int], np.ndarray]


def trial_seed(master_seed: int, trial: int) -> np.random.SeedSequence:
    """Independent seed for trial k, derived from the master seed alone."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=(trial,))


def random_queue(length: int, alphabet_size: int, seed: Seed) -> np.ndarray:
    """I.i.d. uniform symbol ids drawn with PCG64; same seed, same queue."""
    if length < 1:
        raise ValueError(f"queue length must be positive, got {length}")
    if alphabet_size < 1:
        raise ValueError(f"alphabet size must be positive, got {alphabet_size}")
    rng = np.random.default_rng(seed)
    return rng.integers(0, alphabet_size, size=length, dtype=np.uint8)


def measure_tuple_distribution(queue: Sequence[int], n: int, alphabet: Alphabet) -> TupleDistribution:
    """Empirical frequencies of the length-n windows at every queue position.

    Raises:
        QueueTooShortError: if the queue is shorter than n.
    """
    symbols = np.asarray(queue, dtype=np.int64)
    if symbols.size < n:
        raise QueueTooShortError(int(symbols.size), n)

    base = alphabet.size
    windows = symbols.size - n + 1
    codes = np.zeros(windows, dtype=np.int64)
    for offset in range(n):
        codes = codes * base + symbols[offset:offset + windows]
    counts = np.bincount(codes, minlength=base ** n)

    words = alphabet.words(n)
    return TupleDistribution(
        mass={word: float(counts[index]) / windows for index, word in enumerate(words)}
    )


@dataclass
class SimulationState:
    """Live queue of symbol ids with epoch bookkeeping."""
    queue: Deque[int]
    symbol_counts: List[int]
    step: int = 0
    epoch: int = 0
    remaining_in_epoch: int = 0
    epoch_start_length: int = 0

    @classmethod
    def start(cls, symbols: Sequence[int], alphabet_size: int) -> "SimulationState":
        queue = deque(int(symbol) for symbol in symbols)
        counts = [0] * alphabet_size
        for symbol in queue:
            counts[symbol] += 1
        return cls(
            queue=queue,
            symbol_counts=counts,
            remaining_in_epoch=len(queue),
            epoch_start_length=len(queue),
        )

    @property
    def length(self) -> int:
        return len(self.queue)


@dataclass
class _EpochStart:
    epoch: int
    step: int
    length: int
    densities: Dict[str, float] = field(default_factory=dict)


class TagSimulator:
    """Executes one rule set. Holds no run state, so one instance can drive many runs."""

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.n = rules.n
        self.alphabet = rules.alphabet
        self.base = rules.alphabet.size
        # indexed by the base-|Σ| code of the deleted tuple
        self._table = [rules.alphabet.encode(rules.production(word)) for word in rules.words()]

    def new_state(self, initial: Word) -> SimulationState:
        return SimulationState.start(self._symbols(initial), self.base)

    def step(self, state: SimulationState) -> SimulationState:
        """Delete n symbols, append their production and update epoch counters in place.

        Raises:
            HaltedError: if fewer than n symbols remain.
        """
        queue = state.queue
        if len(queue) < self.n:
            raise HaltedError(len(queue), self.n)

        counts = state.symbol_counts
        code = 0
        for _ in range(self.n):
            symbol = queue.popleft()
            counts[symbol] -= 1
            code = code * self.base + symbol

        production = self._table[code]
        queue.extend(production)
        for symbol in production:
            counts[symbol] += 1

        state.step += 1
        state.remaining_in_epoch = max(state.remaining_in_epoch - self.n, 0)
        if state.remaining_in_epoch == 0:
            state.epoch += 1
            state.remaining_in_epoch = len(queue)
            state.epoch_start_length = len(queue)
        return state

    def run_epochs(self, initial: Word, max_epochs: int, stride: Optional[int] = None,
                   snapshots: bool = False) -> SimulationRun:
        """Simulate until max_epochs epochs complete or the queue halts.

        stride samples the (step, length) trace, and queue snapshots when
        requested, every stride steps; step 0 is always sampled.
        """
        if stride is not None and stride < 1:
            raise ValueError(f"stride must be at least 1, got {stride}")
        if snapshots and stride is None:
            stride = 1

        state = self.new_state(initial)
        run = SimulationRun()
        if stride is not None:
            self._sample(run, state, snapshots)

        start = self._observe(state)
        if max_epochs <= 0:
            run.reports.append(EpochReport(
                epoch=0, start_length=start.length, steps=0, growth_per_step=0.0,
                densities=start.densities, complete=False,
            ))
            run.halted = state.length < self.n
            return run

        while state.epoch < max_epochs:
            if state.length < self.n:
                if state.step > start.step:
                    run.reports.append(self._report(start, state, complete=False))
                break

            epoch_before = state.epoch
            self.step(state)
            if stride is not None and state.step % stride == 0:
                self._sample(run, state, snapshots)

            if state.epoch != epoch_before:
                run.reports.append(self._report(start, state, complete=True))
                logger.debug(
                    f"Epoch {start.epoch} finished after {state.step - start.step} steps, "
                    f"length {start.length} -> {state.length}"
                )
                start = self._observe(state)

        if stride is not None and run.trace[-1][0] != state.step:
            self._sample(run, state, snapshots)
        run.halted = state.length < self.n
        run.total_steps = state.step
        return run

    def _symbols(self, initial: Word) -> Sequence[int]:
        if isinstance(initial, str):
            return self.alphabet.encode(initial)
        return initial

    def _observe(self, state: SimulationState) -> _EpochStart:
        densities: Dict[str, float] = {}
        if state.length > 0:
            densities = {
                glyph: state.symbol_counts[symbol] / state.length
                for symbol, glyph in enumerate(self.alphabet.glyphs)
            }
        return _EpochStart(epoch=state.epoch, step=state.step, length=state.length,
                           densities=densities)

    def _report(self, start: _EpochStart, state: SimulationState, complete: bool) -> EpochReport:
        steps = state.step - start.step
        return EpochReport(
            epoch=start.epoch,
            start_length=start.length,
            steps=steps,
            growth_per_step=(state.length - start.length) / steps,
            densities=start.densities,
            complete=complete,
        )

    def _sample(self, run: SimulationRun, state: SimulationState, snapshots: bool) -> None:
        run.trace.append((state.step, state.length))
        if snapshots:
            run.snapshots.append(Snapshot(
                step=state.step, epoch=state.epoch, queue=self.alphabet.decode(state.queue)
            ))


class SimulatorService:
    """Service for running seeded tag-system simulations."""

    def __init__(self, config_service: ConfigService):
        self.config_service = config_service
        self._simulators: Dict[str, TagSimulator] = {}
        logger.info("SimulatorService initialized")

    def get_simulator(self, rules: RuleSet) -> TagSimulator:
        """Validated, cached simulator for a rule set."""
        key = rules.model_dump_json()
        if key not in self._simulators:
            validate_rules(rules)
            self._simulators[key] = TagSimulator(rules)
        return self._simulators[key]

    def simulate(self, rules: RuleSet, initial_length: int, seed: Seed, max_epochs: int,
                 stride: Optional[int] = None, snapshots: bool = False) -> SimulationRun:
        """Run from a random queue of the given length."""
        simulator = self.get_simulator(rules)
        initial = random_queue(initial_length, rules.alphabet.size, seed)
        run = simulator.run_epochs(initial, max_epochs, stride=stride, snapshots=snapshots)
        if run.halted:
            logger.debug(f"Run halted after {run.total_steps} steps")
        return run

    def simulate_word(self, rules: RuleSet, initial: str, max_epochs: int,
                      stride: Optional[int] = None, snapshots: bool = False) -> SimulationRun:
        """Run from an explicit initial word."""
        simulator = self.get_simulator(rules)
        return simulator.run_epochs(initial, max_epochs, stride=stride, snapshots=snapshots)
