"""Harder-Narasimhan strata and generation checks for type A quivers."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ, ZZ, prime
from sympy.polys.matrices import DomainMatrix

from .error_utils import PreconditionError, StabilityError, UnsupportedStabilityError
from .laurent import Exponents, LaurentPoly
from .quiver import DimVector, Quiver, StabilityCondition, TorusWeighting, is_type_a, slope, unit_torus
from .shuffle import ShuffleElement, generator
from .validation import is_strictly_decreasing, is_strictly_increasing

Window = Tuple[int, int]

GENERATION_CHUNK = 16


@dataclass(frozen=True)
class HNStratum:
    parts: Tuple[DimVector, ...]
    slopes: Tuple[Fraction, ...]

    @classmethod
    def build(cls, theta: StabilityCondition, parts: Sequence[DimVector]) -> "HNStratum":
        parts = tuple(parts)
        if len(parts) < 2:
            raise StabilityError(f"a stratum needs at least two parts, got {len(parts)}")
        slopes = tuple(slope(theta, d) for d in parts)
        if not is_strictly_decreasing(slopes):
            raise StabilityError(f"slopes {[str(s) for s in slopes]} are not strictly decreasing")
        return cls(parts, slopes)

    @property
    def total(self) -> DimVector:
        result = self.parts[0]
        for d in self.parts[1:]:
            result = result + d
        return result

    def sort_key(self):
        return len(self.parts), tuple(d.entries for d in self.parts)


@dataclass(frozen=True)
class HNStratification:
    dim: DimVector
    strata: Tuple[HNStratum, ...]

    @staticmethod
    def precedes(x: HNStratum, y: HNStratum) -> bool:
        """x < y when x has more parts."""
        return len(x.parts) > len(y.parts)

    def order_pairs(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, x in enumerate(self.strata) for j, y in enumerate(self.strata)
                if self.precedes(x, y)]


def _descending_partitions(theta: StabilityCondition, remaining: DimVector,
                           bound: Optional[Fraction]) -> Iterator[Tuple[DimVector, ...]]:
    for part in remaining.sub_vectors():
        if part.is_zero():
            continue
        mu = slope(theta, part)
        if bound is not None and mu >= bound:
            continue
        rest = remaining - part
        if rest.is_zero():
            yield (part,)
            continue
        for tail in _descending_partitions(theta, rest, mu):
            yield (part,) + tail


def hn_strata(quiver: Quiver, theta: StabilityCondition, d: DimVector) -> HNStratification:
    if len(theta) != quiver.n_vertices or len(d) != quiver.n_vertices:
        raise StabilityError("stability and dimension vector must have one entry per vertex")
    if d.is_zero():
        raise StabilityError("Harder-Narasimhan strata need a nonzero dimension vector")
    strata = [HNStratum.build(theta, parts)
              for parts in _descending_partitions(theta, d, None) if len(parts) >= 2]
    strata.sort(key=HNStratum.sort_key)
    logging.info(f"Found {len(strata)} strata at {list(d)}")
    return HNStratification(d, tuple(strata))


def typeA_semistable_dims(n: int, theta: StabilityCondition) -> List[DimVector]:
    if len(theta) != n:
        raise StabilityError(f"stability has {len(theta)} entries for {n} vertices")
    if is_strictly_increasing(theta.values):
        return [DimVector.unit(n, i) for i in range(n)]
    if is_strictly_decreasing(theta.values):
        return [DimVector.root(n, a, b) for a in range(n) for b in range(a, n)]
    raise UnsupportedStabilityError(
        f"unsupported stability {[str(t) for t in theta.values]} for closed-form semistable support")


def window_columns(n_per_vertex: Sequence[int], window: Window, symmetric: bool = False) -> List[Exponents]:
    """z exponent vectors in the window; with ``symmetric`` only weakly decreasing ones per vertex."""
    low, high = window
    if low > high:
        raise PreconditionError(f"empty window [{low}, {high}]")
    values = range(high, low - 1, -1)
    blocks = []
    for count in n_per_vertex:
        if symmetric:
            blocks.append(list(combinations_with_replacement(values, count)))
        else:
            blocks.append(list(product(values, repeat=count)))
    columns = [sum(choice, ()) for choice in product(*blocks)]
    return sorted(columns, reverse=True)


def _row_coefficients(p: LaurentPoly, window: Window) -> Dict[Exponents, Dict[Exponents, int]]:
    """z exponents -> (q exponents -> coefficient) for the window part of p."""
    r = p.space.q_rank
    result: Dict[Exponents, Dict[Exponents, int]] = {}
    for exps, coeff in p.truncate(*window).items():
        result.setdefault(exps[r:], {})[exps[:r]] = coeff
    return result


def _exact_matrix(rows: Sequence[LaurentPoly], window: Window, columns: Sequence[Exponents]) -> DomainMatrix:
    r = rows[0].space.q_rank
    index = {c: k for k, c in enumerate(columns)}
    if r == 0:
        domain, ring = QQ, None
    else:
        domain = ZZ[tuple(f"q{k + 1}" for k in range(r))]
        ring = domain.ring
    matrix = []
    for p in rows:
        entries = [domain.zero] * len(columns)
        table = _row_coefficients(p, window)
        q_terms = [q for coeffs in table.values() for q in coeffs]
        low = tuple(min(col) for col in zip(*q_terms)) if q_terms else (0,) * r
        for z_exps, coeffs in table.items():
            if z_exps not in index:
                continue
            if ring is None:
                entries[index[z_exps]] = QQ(sum(coeffs.values()))
            else:
                shifted = {tuple(a - b for a, b in zip(q, low)): c for q, c in coeffs.items()}
                entries[index[z_exps]] = ring.from_dict(shifted)
        matrix.append(entries)
    return DomainMatrix(matrix, (len(rows), len(columns)), domain)


def _pivots(rows: Sequence[LaurentPoly], window: Window, columns: Sequence[Exponents]) -> Tuple[int, ...]:
    if not rows or not columns:
        return ()
    matrix = _exact_matrix(rows, window, columns).to_field()
    _, pivots = matrix.rref()
    return tuple(pivots)


def exact_rank(rows: Sequence[LaurentPoly], window: Window,
               columns: Optional[Sequence[Exponents]] = None) -> int:
    """Rank over the fraction field of Z[q] of the window coefficients of ``rows``."""
    if not rows:
        return 0
    if columns is None:
        columns = window_columns(rows[0].space.counts, window)
    return len(_pivots(rows, window, columns))


def default_primes(r: int) -> Tuple[int, ...]:
    return tuple(prime(k + 1) for k in range(r))


def specialized_rank(rows: Sequence[LaurentPoly], window: Window, primes: Optional[Sequence[int]] = None,
                     columns: Optional[Sequence[Exponents]] = None) -> int:
    """Rank over Q after sending q_k to primes[k]; never exceeds ``exact_rank``."""
    if not rows:
        return 0
    space = rows[0].space
    primes = tuple(primes) if primes is not None else default_primes(space.q_rank)
    if columns is None:
        columns = window_columns(space.counts, window)
    index = {c: k for k, c in enumerate(columns)}
    matrix = []
    for p in rows:
        entries = [QQ.zero] * len(columns)
        for z_exps, value in p.truncate(*window).specialize_q(primes).items():
            if z_exps in index:
                entries[index[z_exps]] = QQ(value.numerator, value.denominator)
        matrix.append(entries)
    if not columns:
        return 0
    return DomainMatrix(matrix, (len(rows), len(columns)), QQ).rank()


@dataclass(frozen=True)
class GenerationReport:
    dim: DimVector
    window: Window
    gen_degree: int
    achieved_rank: int
    target_rank: int
    unspanned: Tuple[Tuple[Tuple[int, ...], ...], ...]
    products_evaluated: int

    @property
    def full_rank(self) -> bool:
        return self.achieved_rank == self.target_rank


def _generator_tuples(quiver: Quiver, theta: StabilityCondition, d: DimVector,
                      gen_degree: int) -> Iterator[Tuple[Tuple[str, int], ...]]:
    """Ordered generator labels (vertex, k), higher slope first."""
    order = sorted(range(quiver.n_vertices), key=lambda i: theta[i], reverse=True)
    slots = [quiver.vertices[i] for i in order for _ in range(d[i])]
    degrees = range(-gen_degree, gen_degree + 1)
    for ks in product(degrees, repeat=len(slots)):
        yield tuple(zip(slots, ks))


def _split_by_vertex(space_counts: Sequence[int], exps: Exponents) -> Tuple[Tuple[int, ...], ...]:
    blocks, position = [], 0
    for count in space_counts:
        blocks.append(tuple(exps[position:position + count]))
        position += count
    return tuple(blocks)


def verify_generation(quiver: Quiver, theta: StabilityCondition, d: DimVector, window: Window,
                      gen_degree: int, torus: Optional[TorusWeighting] = None) -> GenerationReport:
    """Rank of the span of ordered generator products inside the symmetric window basis at d."""
    if not is_type_a(quiver):
        raise PreconditionError("generation checks need a type A quiver with edges i -> i+1")
    if len(theta) != quiver.n_vertices or len(d) != quiver.n_vertices:
        raise PreconditionError("stability and dimension vector must have one entry per vertex")
    if not is_strictly_increasing(theta.values):
        raise UnsupportedStabilityError("generation checks need a strictly increasing stability")
    if d.is_zero():
        raise PreconditionError("generation checks need a nonzero dimension vector")
    if gen_degree < 0:
        raise PreconditionError(f"generator degree must be nonnegative, got {gen_degree}")
    torus = (torus or unit_torus(quiver)).validate_against(quiver)
    columns = window_columns(d.entries, window, symmetric=True)
    target = len(columns)

    cache: Dict[Tuple[Tuple[str, int], ...], ShuffleElement] = {}

    def evaluate(labels: Tuple[Tuple[str, int], ...]) -> ShuffleElement:
        if labels not in cache:
            vertex, k = labels[-1]
            last = generator(quiver, torus, vertex, k)
            cache[labels] = last if len(labels) == 1 else evaluate(labels[:-1]) * last
        return cache[labels]

    rows: List[LaurentPoly] = []
    evaluated = 0
    for labels in _generator_tuples(quiver, theta, d, gen_degree):
        payload = evaluate(labels).payload.truncate(*window)
        evaluated += 1
        if not payload.is_zero():
            rows.append(payload)
        if evaluated % GENERATION_CHUNK == 0 and specialized_rank(rows, window, columns=columns) == target:
            logging.debug(f"Full rank reached after {evaluated} products")
            break
    pivots = _pivots(rows, window, columns)
    spanned = set(pivots)
    unspanned = tuple(_split_by_vertex(d.entries, columns[k]) for k in range(target) if k not in spanned)
    logging.info(f"Generation at {list(d)}: rank {len(pivots)} of {target}")
    return GenerationReport(d, tuple(window), gen_degree, len(pivots), target, unspanned, evaluated)
