"""
Monte Carlo simulation for dipcheck
Vectorized path-probability estimates and single sampled runs of a mechanism
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from src.config.logging_config import get_logger, log_execution_time
from src.config.settings import (
    DEFAULT_MC_SAMPLES,
    DEFAULT_SEED,
    MC_CHUNK_SIZE,
    MC_WORKERS,
    RARE_EVENT_HITS,
)
from src.errors import DegenerateScale, NonPositiveEpsilon
from src.models.automaton import DipAutomaton, Guard, OutputKind
from src.models.path import MechanismRun, Path, ProbResult, RunStep
from src.tools.laplace import LaplaceDist, sample, sample_array

logger = get_logger(__name__)

# Upper bound on steps taken by run_mechanism through non-input states
MAX_RUN_STEPS = 10_000


def _check_eps(eps: float):
    if not eps > 0 or not math.isfinite(eps):
        raise NonPositiveEpsilon(f"eps must be a positive real, got {eps}")


def _simulate_chunk(a: DipAutomaton, eps: float, x0: float, p: Path, size: int, seed: int) -> int:
    """Number of runs out of `size` that follow p"""
    rng = np.random.default_rng(seed)
    r = np.full(size, float(x0))
    alive = np.ones(size, dtype=bool)

    for step in p.steps:
        t = step.transition
        params = a.params(step.state)
        shift = step.input or 0.0
        observed = step.observed

        needs_sample = t.assign or not t.guard.is_trivial or t.output.kind is OutputKind.SAMPLE
        if needs_sample:
            if params.d == 0:
                raise DegenerateScale(f"state '{step.state}' samples s with d = 0")
            s = sample_array(float(params.d) * eps, np.full(size, float(params.mu) + shift), rng)
            if t.guard is Guard.GE:
                alive &= s >= r
            elif t.guard is Guard.LT:
                alive &= s < r
            if t.output.kind is OutputKind.SAMPLE:
                alive &= (s > observed.lo) & (s < observed.hi)

        if t.output.kind is OutputKind.SAMPLE_AUX:
            if params.d_aux == 0:
                raise DegenerateScale(f"state '{step.state}' outputs s' with d_aux = 0")
            aux = sample_array(float(params.d_aux) * eps, np.full(size, float(params.mu_aux) + shift), rng)
            alive &= (aux > observed.lo) & (aux < observed.hi)

        if t.assign:
            r = s

        if not alive.any():
            break

    return int(alive.sum())


@log_execution_time
def pathprob_mc(a: DipAutomaton, eps: float, x0: float, p: Path,
                n: int = DEFAULT_MC_SAMPLES, seed: int = DEFAULT_SEED,
                workers: int = MC_WORKERS) -> ProbResult:
    """Fraction of n simulated runs that follow p; chunk c always draws from seed + c"""
    _check_eps(eps)
    if n < 1:
        raise ValueError(f"sample count must be at least 1, got {n}")

    sizes = [MC_CHUNK_SIZE] * (n // MC_CHUNK_SIZE)
    if n % MC_CHUNK_SIZE:
        sizes.append(n % MC_CHUNK_SIZE)

    def run(c: int) -> int:
        return _simulate_chunk(a, eps, x0, p, sizes[c], seed + c)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(run, range(len(sizes))))
    else:
        hits = sum(run(c) for c in range(len(sizes)))

    value = hits / n
    logger.debug(f"MC estimate {value} from {hits}/{n} hits",
                 extra={"automaton": a.name, "eps": eps, "seed": seed})
    return ProbResult(
        value=value,
        method="monte_carlo",
        eps=eps,
        x0=x0,
        std_error=math.sqrt(value * (1.0 - value) / n),
        samples=n,
        hits=hits,
        seed=seed,
        rare_event=hits < RARE_EVENT_HITS,
    )


def run_mechanism(a: DipAutomaton, eps: float, inputs: Sequence[float],
                  seed: int = DEFAULT_SEED, x0: float = 0.0) -> MechanismRun:
    """Execute the automaton once, consuming one input per input state

    Stops when the inputs are used up at an input state, when no transition
    is enabled, or after MAX_RUN_STEPS steps.
    """
    _check_eps(eps)
    rng = np.random.default_rng(seed)
    remaining: List[float] = list(inputs)
    state, r = a.init, x0
    steps: List[RunStep] = []

    while len(steps) < MAX_RUN_STEPS:
        if not a.outgoing(state):
            break
        decl = a.state(state)
        value: Optional[float] = None
        if decl.is_input:
            if not remaining:
                break
            value = float(remaining.pop(0))
        shift = value or 0.0
        params = decl.params

        s = None
        if params.d > 0:
            s = sample(LaplaceDist(float(params.d) * eps, float(params.mu) + shift), rng)

        t = a.delta(state, Guard.TRUE)
        if t is None and s is not None:
            t = a.delta(state, Guard.GE if s >= r else Guard.LT)
        if t is None:
            break

        if t.output.kind is OutputKind.SAMPLE_AUX:
            output = sample(LaplaceDist(float(params.d_aux) * eps, float(params.mu_aux) + shift), rng)
        elif t.output.kind is OutputKind.SAMPLE:
            output = s
        else:
            output = t.output.symbol
        if t.assign:
            r = s

        steps.append(RunStep(state, value, output, t.ref))
        state = t.target

    if remaining:
        logger.warning(f"Run of '{a.name}' halted at '{state}' with {len(remaining)} unused input(s)")

    logger.debug(f"Ran '{a.name}' for {len(steps)} step(s)", extra={"automaton": a.name, "seed": seed})
    return MechanismRun(eps=eps, seed=seed, steps=tuple(steps))
