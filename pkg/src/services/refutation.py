"""
Refutation search for dipcheck
Looks for a repetition count and eps at which a witness pair beats e^(d * eps)
"""

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from src.config.logging_config import get_logger, log_execution_time
from src.config.settings import (
    DEFAULT_ELL_MAX,
    DEFAULT_EPS_GRID,
    DEFAULT_MC_SAMPLES,
    DEFAULT_SEED,
    MC_CONFIRMATION_SIGMAS,
    MC_WORKERS,
    RARE_EVENT_HITS,
)
from src.errors import AutomatonIsWellFormed, InvalidRepetition, NonPositiveEpsilon
from src.models.automaton import DipAutomaton
from src.models.verdict import ViolationWitness
from src.models.witness import Inconclusive, McConfirmation, RatioEntry, Refutation, WitnessPair
from src.services.graph_analysis import check_well_formed
from src.services.simulation import pathprob_mc
from src.services.witness_generator import generate_pair, ratio_report

logger = get_logger(__name__)


def repetition_schedule(ell_max: int) -> List[int]:
    """1, 2, 4, ... up to ell_max"""
    if ell_max < 1:
        raise InvalidRepetition(f"ell_max must be at least 1, got {ell_max}")
    schedule, ell = [], 1
    while ell <= ell_max:
        schedule.append(ell)
        ell *= 2
    return schedule


def confirm(a: DipAutomaton, pair: WitnessPair, hit: RatioEntry, n: int, seed: int,
            workers: int = MC_WORKERS) -> McConfirmation:
    """Re-estimate both probabilities by simulation; confirmed when p1 exceeds p2 by the sigma margin"""
    mc1 = pathprob_mc(a, hit.eps, pair.x0, pair.rho1, n=n, seed=seed, workers=workers)
    mc2 = pathprob_mc(a, hit.eps, pair.x0, pair.rho2, n=n, seed=seed + 1, workers=workers)
    spread = math.sqrt(mc1.std_error ** 2 + mc2.std_error ** 2)
    confirmed = mc1.value - mc2.value > MC_CONFIRMATION_SIGMAS * spread
    rare = min(hit.p1, hit.p2) < RARE_EVENT_HITS / n
    return McConfirmation(p1=mc1, p2=mc2, sigmas=MC_CONFIRMATION_SIGMAS,
                          confirmed=confirmed, rare_event=rare)


@log_execution_time
def refute(a: DipAutomaton, d: Union[Fraction, float],
           eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
           ell_max: int = DEFAULT_ELL_MAX,
           mc_samples: int = DEFAULT_MC_SAMPLES,
           seed: int = DEFAULT_SEED,
           style: str = "tail",
           witness: Optional[ViolationWitness] = None) -> Union[Refutation, Inconclusive]:
    """Search (ell, eps) in lexicographic order for pathprob(rho1) > e^(d * eps) * pathprob(rho2)"""
    if witness is None:
        verdict = check_well_formed(a)
        if verdict.is_well_formed:
            raise AutomatonIsWellFormed(
                f"'{a.name}' is well-formed (weight {verdict.weight}); there is nothing to refute"
            )
        witness = verdict.witness
    if any(not eps > 0 for eps in eps_grid) or not eps_grid:
        raise NonPositiveEpsilon(f"eps grid must be non-empty and positive, got {list(eps_grid)}")
    grid = sorted(eps_grid)

    searched: List[RatioEntry] = []
    for ell in repetition_schedule(ell_max):
        pair = generate_pair(a, witness, ell, style)
        entries = ratio_report(a, pair, grid, d=d)
        searched.extend(entries)
        hit = next((entry for entry in entries if entry.exceeds), None)
        if hit is None:
            continue

        logger.info(f"Refuted {d}-privacy of '{a.name}' at ell={ell}, eps={hit.eps}",
                    extra={"automaton": a.name, "ell": ell, "eps": hit.eps, "seed": seed})
        confirmation = confirm(a, pair, hit, mc_samples, seed) if mc_samples > 0 else None
        if confirmation is not None and confirmation.rare_event:
            logger.warning(f"Exact probability below {RARE_EVENT_HITS}/{mc_samples}; "
                           f"simulation cannot resolve it", extra={"automaton": a.name})
        return Refutation(d=Fraction(d), hit=hit, pair=pair.with_report(entries),
                          confirmation=confirmation, searched=tuple(searched))

    scored = [e for e in searched if not math.isnan(e.log_ratio)]
    best = max(scored, key=lambda e: e.log_ratio - float(d) * e.eps, default=None)
    logger.info(f"No refutation of {d}-privacy of '{a.name}' up to ell={ell_max}",
                extra={"automaton": a.name})
    return Inconclusive(d=Fraction(d), best=best, searched=tuple(searched))
