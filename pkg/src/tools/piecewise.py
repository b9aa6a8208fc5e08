"""
Piecewise exponential-polynomial functions
Closed under +, *, shift, clamping and (in)definite integration

A function is stored as sorted breakpoints b_1 < ... < b_m splitting the real
line into m + 1 open pieces. On a piece with anchor a the value is

    sum(coeff * (x - a) ** degree * exp(rate * (x - a)))

Bounded pieces are anchored at their midpoint and unbounded pieces at their
finite end, which keeps every exponent small where the piece is used. A point
lying exactly on a breakpoint is evaluated with the piece to its right.
"""

import math
from bisect import bisect_right
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.config.settings import NEGLIGIBLE_TAIL_RATIO, RATE_MERGE_DIGITS
from src.errors import DivergentTail

INF = math.inf

_LEFT, _RIGHT, _BOTH = "left", "right", "both"


@dataclass(frozen=True)
class Term:
    coeff: float
    degree: int
    rate: float

    def value(self, t: float) -> float:
        power = t ** self.degree if self.degree else 1.0
        return self.coeff * power * math.exp(self.rate * t)


@dataclass(frozen=True)
class Piece:
    anchor: float
    terms: Tuple[Term, ...]

    def value(self, x: float) -> float:
        t = x - self.anchor
        return math.fsum(term.value(t) for term in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(term.degree == 0 and term.rate == 0.0 for term in self.terms)


def _snap_rate(rate: float) -> float:
    if abs(rate) < 10.0 ** -RATE_MERGE_DIGITS:
        return 0.0
    return float(f"{rate:.{RATE_MERGE_DIGITS}g}")


def _diverges(term: Term, side: str) -> bool:
    """Whether the term fails to vanish towards the unbounded end(s) of its piece"""
    if side == _RIGHT:
        return term.rate >= 0.0
    if side == _LEFT:
        return term.rate <= 0.0
    if side == _BOTH:
        return True
    return False


def _merge(terms: Iterable[Term], side: Optional[str] = None) -> Tuple[Term, ...]:
    """Combine terms sharing (degree, rate); drop zeros and numerical noise on tails"""
    merged: Dict[Tuple[int, float], float] = {}
    for term in terms:
        key = (term.degree, _snap_rate(term.rate))
        merged[key] = merged.get(key, 0.0) + term.coeff

    result = [Term(c, n, r) for (n, r), c in merged.items() if c != 0.0]
    if side is not None and result:
        scale = max(abs(t.coeff) for t in result)
        result = [
            t for t in result
            if not (_diverges(t, side) and abs(t.coeff) <= NEGLIGIBLE_TAIL_RATIO * scale)
        ]
    result.sort(key=lambda t: (t.degree, t.rate))
    return tuple(result)


def _canonical_anchor(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi
    if math.isinf(hi):
        return lo
    return 0.5 * (lo + hi)


def _probe(lo: float, hi: float) -> float:
    """A point strictly inside (lo, hi)"""
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - 1.0
    if math.isinf(hi):
        return lo + 1.0
    return 0.5 * (lo + hi)


def _side(index: int, count: int) -> Optional[str]:
    if count == 1:
        return _BOTH
    if index == 0:
        return _LEFT
    if index == count - 1:
        return _RIGHT
    return None


def _reanchor(piece: Piece, anchor: float, side: Optional[str] = None) -> Piece:
    """Rewrite a piece around a new anchor via binomial expansion"""
    if piece.anchor == anchor or piece.is_constant:
        return Piece(anchor, piece.terms)
    delta = anchor - piece.anchor
    terms: List[Term] = []
    for term in piece.terms:
        scale = term.coeff * math.exp(term.rate * delta)
        for j in range(term.degree + 1):
            coeff = scale * comb(term.degree, j) * delta ** (term.degree - j)
            terms.append(Term(coeff, j, term.rate))
    return Piece(anchor, _merge(terms, side))


def _antiderivative(terms: Sequence[Term]) -> Tuple[Term, ...]:
    """Terms of F with F' = f, in the same anchor"""
    result: List[Term] = []
    for term in terms:
        n, r = term.degree, term.rate
        if r == 0.0:
            result.append(Term(term.coeff / (n + 1), n + 1, 0.0))
            continue
        # int t^n e^{rt} dt = e^{rt} * sum_j (-1)^(n-j) n!/j! t^j / r^(n-j+1)
        coeff = term.coeff / r
        result.append(Term(coeff, n, r))
        for j in range(n, 0, -1):
            coeff *= -j / r
            result.append(Term(coeff, j - 1, r))
    return _merge(result)


def _eval_terms(terms: Sequence[Term], t: float) -> float:
    return math.fsum(term.value(t) for term in terms)


def _tail_limit(terms: Sequence[Term], toward: float) -> float:
    """Limit of sum(terms) as t -> +/-inf; every term must vanish there"""
    side = _RIGHT if toward > 0 else _LEFT
    scale = max((abs(t.coeff) for t in terms), default=0.0)
    for term in terms:
        if _diverges(term, side) and abs(term.coeff) > NEGLIGIBLE_TAIL_RATIO * scale:
            raise DivergentTail(
                f"term {term.coeff:g}*t^{term.degree}*exp({term.rate:g}t) "
                f"does not decay towards {'+' if toward > 0 else '-'}inf"
            )
    return 0.0


@dataclass(frozen=True)
class PiecewiseExpPoly:
    breakpoints: Tuple[float, ...]
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more piece than breakpoints")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(math.isinf(b) or math.isnan(b) for b in self.breakpoints):
            raise ValueError("breakpoints must be finite")

    # Construction

    @classmethod
    def constant(cls, value: float) -> "PiecewiseExpPoly":
        terms = (Term(float(value), 0, 0.0),) if value != 0.0 else ()
        return cls((), (Piece(0.0, terms),))

    @classmethod
    def zero(cls) -> "PiecewiseExpPoly":
        return cls.constant(0.0)

    @classmethod
    def from_pieces(cls, breakpoints: Sequence[float],
                    pieces: Sequence[Sequence[Tuple[float, int, float]]]) -> "PiecewiseExpPoly":
        """Build from (coeff, degree, rate) triples, each piece in canonical anchor"""
        bps = tuple(float(b) for b in breakpoints)
        built = []
        for i, raw in enumerate(pieces):
            lo, hi = _bounds(bps, i)
            built.append(Piece(_canonical_anchor(lo, hi),
                               _merge((Term(float(c), int(n), float(r)) for c, n, r in raw),
                                      _side(i, len(pieces)))))
        return _normalize(bps, built)

    # Inspection

    def bounds(self, index: int) -> Tuple[float, float]:
        return _bounds(self.breakpoints, index)

    def piece_index(self, x: float) -> int:
        return bisect_right(self.breakpoints, x)

    def __call__(self, x: float) -> float:
        return self.pieces[self.piece_index(x)].value(x)

    evaluate = __call__

    @property
    def term_count(self) -> int:
        return sum(len(p.terms) for p in self.pieces)

    def describe(self, precision: int = 6) -> str:
        """Human-readable piecewise formula"""
        lines = []
        for i, piece in enumerate(self.pieces):
            lo, hi = self.bounds(i)
            if piece.terms:
                body = " + ".join(
                    _format_term(t, piece.anchor, precision) for t in piece.terms
                )
            else:
                body = "0"
            lines.append(f"({lo:.{precision}g}, {hi:.{precision}g}): {body}")
        return "\n".join(lines)

    # Algebra

    def __add__(self, other: "PiecewiseExpPoly") -> "PiecewiseExpPoly":
        return pep_add(self, other)

    def __mul__(self, other: "PiecewiseExpPoly") -> "PiecewiseExpPoly":
        return pep_mul(self, other)

    def scale(self, factor: float) -> "PiecewiseExpPoly":
        if factor == 0.0:
            return PiecewiseExpPoly.zero()
        pieces = tuple(
            Piece(p.anchor, tuple(Term(t.coeff * factor, t.degree, t.rate) for t in p.terms))
            for p in self.pieces
        )
        return PiecewiseExpPoly(self.breakpoints, pieces)

    def shift(self, c: float) -> "PiecewiseExpPoly":
        return pep_shift(self, c)

    def clamp(self, lo: float, hi: float) -> "PiecewiseExpPoly":
        return pep_clamp(self, lo, hi)

    def integrate(self, lo: float = -INF, hi: float = INF) -> float:
        return pep_integrate(self, lo, hi)

    def integrate_upper(self) -> "PiecewiseExpPoly":
        return pep_integrate_upper(self)

    def integrate_lower(self) -> "PiecewiseExpPoly":
        return pep_integrate_lower(self)


def _bounds(breakpoints: Sequence[float], index: int) -> Tuple[float, float]:
    lo = breakpoints[index - 1] if index > 0 else -INF
    hi = breakpoints[index] if index < len(breakpoints) else INF
    return lo, hi


def _format_term(term: Term, anchor: float, precision: int) -> str:
    shifted = "x" if anchor == 0.0 else f"(x - {anchor:.{precision}g})"
    parts = [f"{term.coeff:.{precision}g}"]
    if term.degree:
        parts.append(shifted if term.degree == 1 else f"{shifted}^{term.degree}")
    if term.rate:
        parts.append(f"exp({term.rate:.{precision}g}*{shifted})")
    return "*".join(parts)


def _refine(f: PiecewiseExpPoly, breakpoints: Sequence[float]) -> List[Piece]:
    """f's pieces split along a superset of its breakpoints, canonically anchored"""
    count = len(breakpoints) + 1
    pieces = []
    for i in range(count):
        lo, hi = _bounds(breakpoints, i)
        source = f.pieces[f.piece_index(_probe(lo, hi))]
        pieces.append(_reanchor(source, _canonical_anchor(lo, hi), _side(i, count)))
    return pieces


def _normalize(breakpoints: Sequence[float], pieces: Sequence[Piece]) -> PiecewiseExpPoly:
    """Drop breakpoints between pieces that agree (zero or equal constants)"""
    kept_bps: List[float] = []
    kept: List[Piece] = [pieces[0]]
    for bp, piece in zip(breakpoints, pieces[1:]):
        last = kept[-1]
        if last.is_constant and piece.is_constant and last.terms == piece.terms:
            continue
        kept_bps.append(bp)
        kept.append(piece)

    count = len(kept)
    result = []
    for i, piece in enumerate(kept):
        lo, hi = _bounds(kept_bps, i)
        anchor = _canonical_anchor(lo, hi)
        result.append(_reanchor(piece, anchor, _side(i, count)) if piece.anchor != anchor else piece)
    return PiecewiseExpPoly(tuple(kept_bps), tuple(result))


def _union(*collections: Iterable[float]) -> List[float]:
    return sorted({float(b) for c in collections for b in c if not math.isinf(b)})


def pep_add(f: PiecewiseExpPoly, g: PiecewiseExpPoly) -> PiecewiseExpPoly:
    bps = _union(f.breakpoints, g.breakpoints)
    pf, pg = _refine(f, bps), _refine(g, bps)
    count = len(bps) + 1
    pieces = [
        Piece(a.anchor, _merge(a.terms + b.terms, _side(i, count)))
        for i, (a, b) in enumerate(zip(pf, pg))
    ]
    return _normalize(bps, pieces)


def pep_mul(f: PiecewiseExpPoly, g: PiecewiseExpPoly) -> PiecewiseExpPoly:
    bps = _union(f.breakpoints, g.breakpoints)
    pf, pg = _refine(f, bps), _refine(g, bps)
    count = len(bps) + 1
    pieces = []
    for i, (a, b) in enumerate(zip(pf, pg)):
        product = (
            Term(s.coeff * t.coeff, s.degree + t.degree, s.rate + t.rate)
            for s in a.terms for t in b.terms
        )
        pieces.append(Piece(a.anchor, _merge(product, _side(i, count))))
    return _normalize(bps, pieces)


def pep_shift(f: PiecewiseExpPoly, c: float) -> PiecewiseExpPoly:
    """x -> f(x + c)"""
    bps = tuple(b - c for b in f.breakpoints)
    pieces = tuple(Piece(p.anchor - c, p.terms) for p in f.pieces)
    return _normalize(bps, pieces)


def pep_clamp(f: PiecewiseExpPoly, lo: float, hi: float) -> PiecewiseExpPoly:
    """f on (lo, hi), zero elsewhere"""
    if not lo < hi:
        return PiecewiseExpPoly.zero()
    bps = _union(f.breakpoints, (lo, hi))
    refined = _refine(f, bps)
    pieces = []
    for i, piece in enumerate(refined):
        p_lo, p_hi = _bounds(bps, i)
        inside = p_lo >= lo and p_hi <= hi
        pieces.append(piece if inside else Piece(piece.anchor, ()))
    return _normalize(bps, pieces)


def _piece_integral(piece: Piece, lo: float, hi: float) -> float:
    """Integral of one piece over (lo, hi) within its bounds"""
    if not piece.terms or not lo < hi:
        return 0.0
    antiderivative = _antiderivative(piece.terms)
    upper = _tail_limit(piece.terms, INF) if math.isinf(hi) else _eval_terms(antiderivative, hi - piece.anchor)
    lower = _tail_limit(piece.terms, -INF) if math.isinf(lo) else _eval_terms(antiderivative, lo - piece.anchor)
    return upper - lower


def pep_integrate(f: PiecewiseExpPoly, lo: float = -INF, hi: float = INF) -> float:
    """Definite integral of f over (lo, hi)"""
    if lo > hi:
        return -pep_integrate(f, hi, lo)
    total = []
    for i, piece in enumerate(f.pieces):
        p_lo, p_hi = f.bounds(i)
        a, b = max(p_lo, lo), min(p_hi, hi)
        if a < b:
            total.append(_piece_integral(piece, a, b))
    return math.fsum(total)


def pep_integrate_upper(f: PiecewiseExpPoly) -> PiecewiseExpPoly:
    """x -> integral of f over (x, inf)"""
    count = len(f.pieces)
    pieces: List[Optional[Piece]] = [None] * count
    beyond = 0.0
    for i in range(count - 1, -1, -1):
        piece = f.pieces[i]
        lo, hi = f.bounds(i)
        antiderivative = _antiderivative(piece.terms)
        at_hi = _tail_limit(piece.terms, INF) if math.isinf(hi) else _eval_terms(antiderivative, hi - piece.anchor)
        constant = beyond + at_hi
        terms = [Term(-t.coeff, t.degree, t.rate) for t in antiderivative]
        terms.append(Term(constant, 0, 0.0))
        pieces[i] = Piece(piece.anchor, _merge(terms, _side(i, count)))
        if not math.isinf(lo) and piece.terms:
            beyond += at_hi - _eval_terms(antiderivative, lo - piece.anchor)
    return _normalize(f.breakpoints, pieces)


def pep_integrate_lower(f: PiecewiseExpPoly) -> PiecewiseExpPoly:
    """x -> integral of f over (-inf, x)"""
    count = len(f.pieces)
    pieces: List[Piece] = []
    before = 0.0
    for i, piece in enumerate(f.pieces):
        lo, hi = f.bounds(i)
        antiderivative = _antiderivative(piece.terms)
        at_lo = _tail_limit(piece.terms, -INF) if math.isinf(lo) else _eval_terms(antiderivative, lo - piece.anchor)
        terms = list(antiderivative)
        terms.append(Term(before - at_lo, 0, 0.0))
        pieces.append(Piece(piece.anchor, _merge(terms, _side(i, count))))
        if not math.isinf(hi) and piece.terms:
            before += _eval_terms(antiderivative, hi - piece.anchor) - at_lo
    return _normalize(f.breakpoints, pieces)
