"""
Laplace distribution primitives
Density, distribution function, pairwise comparison, sampling and pep encodings
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from src.errors import NonPositiveRate
from src.tools.piecewise import PiecewiseExpPoly


@dataclass(frozen=True)
class LaplaceDist:
    """Laplace variable with density (k/2) * exp(-k * |x - mu|)"""

    k: float
    mu: float = 0.0

    def __post_init__(self):
        if not self.k > 0 or math.isinf(self.k):
            raise NonPositiveRate(f"Laplace rate must be positive and finite, got {self.k}")

    @property
    def scale(self) -> float:
        return 1.0 / self.k

    @property
    def variance(self) -> float:
        return 2.0 / (self.k * self.k)


def laplace_pdf(dist: LaplaceDist, x: float) -> float:
    return 0.5 * dist.k * math.exp(-dist.k * abs(x - dist.mu))


def laplace_cdf(dist: LaplaceDist, c: float) -> float:
    """Pr[X <= c]"""
    if math.isinf(c):
        return 1.0 if c > 0 else 0.0
    z = c - dist.mu
    if z < 0:
        return 0.5 * math.exp(dist.k * z)
    return 1.0 - 0.5 * math.exp(-dist.k * z)


def interval_prob(dist: LaplaceDist, lo: float, hi: float) -> float:
    """Pr[lo < X < hi]"""
    if not lo < hi:
        return 0.0
    return max(0.0, laplace_cdf(dist, hi) - laplace_cdf(dist, lo))


def prob_le(x1: LaplaceDist, x2: LaplaceDist) -> float:
    """Pr[X1 <= X2] for independent Laplace variables"""
    delta = x2.mu - x1.mu
    gap = abs(delta)
    sign = (delta > 0) - (delta < 0)

    # (k2^2 e^{-k1 g} - k1^2 e^{-k2 g}) / (k2^2 - k1^2) is symmetric in the rates;
    # with slow <= fast it is rewritten without the cancelling difference
    slow, fast = sorted((x1.k, x2.k))
    spread = fast - slow
    damped = gap if spread == 0.0 else -math.expm1(-spread * gap) / spread
    tail = math.exp(-fast * gap) + fast * fast * math.exp(-slow * gap) * damped / (slow + fast)
    return 0.5 * (1.0 + sign * (1.0 - tail))


def sample(dist: LaplaceDist, rng: np.random.Generator,
           size: Optional[int] = None) -> Union[float, np.ndarray]:
    """Inverse-CDF draw(s); the generator is threaded explicitly"""
    u = rng.random(size) - 0.5
    draws = dist.mu - np.sign(u) * np.log1p(-2.0 * np.abs(u)) / dist.k
    if size is None:
        return float(draws)
    return draws


def sample_array(k: float, mu: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw per entry of `mu`, all with rate k"""
    if not k > 0:
        raise NonPositiveRate(f"Laplace rate must be positive, got {k}")
    u = rng.random(mu.shape) - 0.5
    return mu - np.sign(u) * np.log1p(-2.0 * np.abs(u)) / k


def pdf_pep(dist: LaplaceDist) -> PiecewiseExpPoly:
    half = 0.5 * dist.k
    return PiecewiseExpPoly.from_pieces(
        (dist.mu,),
        ([(half, 0, dist.k)], [(half, 0, -dist.k)]),
    )


def cdf_pep(dist: LaplaceDist) -> PiecewiseExpPoly:
    return PiecewiseExpPoly.from_pieces(
        (dist.mu,),
        ([(0.5, 0, dist.k)], [(1.0, 0, 0.0), (-0.5, 0, -dist.k)]),
    )


def prob_le_pep(x1: LaplaceDist, x2: LaplaceDist) -> float:
    """Pr[X1 <= X2] as the integral of pdf_2 * cdf_1, through the pep calculus"""
    return (pdf_pep(x2) * pdf_pep(x1).integrate_lower()).integrate()
