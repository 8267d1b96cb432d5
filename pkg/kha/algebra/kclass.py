"""Torus weights, Euler classes and lambda-weight certificates."""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

from .error_utils import FixedLocusError, PreconditionError, VarSpaceMismatch
from .laurent import Exponents, LaurentPoly, RationalFunction, VarSpace


@dataclass(frozen=True)
class WeightList:
    """Characters beta as exponent vectors over a variable space; repeats are multiplicities."""

    space: VarSpace
    weights: Tuple[Exponents, ...] = ()

    def __post_init__(self):
        weights = tuple(tuple(int(x) for x in w) for w in self.weights)
        for k, w in enumerate(weights):
            if len(w) != self.space.n_vars:
                raise VarSpaceMismatch(f"weight {k} has length {len(w)}, expected {self.space.n_vars}")
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __add__(self, other: "WeightList") -> "WeightList":
        if self.space != other.space:
            raise VarSpaceMismatch("weight lists live in different variable spaces")
        return WeightList(self.space, self.weights + other.weights)


@dataclass(frozen=True)
class Cocharacter:
    values: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    def pairing(self, beta: Sequence[int]) -> int:
        if len(beta) != len(self.values):
            raise VarSpaceMismatch(f"cocharacter has length {len(self.values)}, weight has {len(beta)}")
        return sum(l * b for l, b in zip(self.values, beta))


@dataclass(frozen=True)
class Certificate:
    """Lowest lambda-weight v of eu and the signed monomial spanning that piece."""

    v: int
    sign: int
    exponents: Exponents


def character(space: VarSpace, beta: Sequence[int]) -> LaurentPoly:
    return LaurentPoly.monomial(space, beta)


def euler_class(weights: WeightList) -> LaurentPoly:
    space = weights.space
    result = LaurentPoly.constant(space, 1)
    for beta in weights:
        result = result * (1 - character(space, beta))
    return result


def split_weights(weights: WeightList, lam: Cocharacter) -> Tuple[WeightList, WeightList, WeightList]:
    """(repelling, fixed, attracting) by the sign of the pairing with lam."""
    buckets = {-1: [], 0: [], 1: []}
    for beta in weights:
        p = lam.pairing(beta)
        buckets[(p > 0) - (p < 0)].append(beta)
    return tuple(WeightList(weights.space, tuple(buckets[s])) for s in (-1, 0, 1))


def lowest_weight_certificate(weights: WeightList, lam: Cocharacter) -> Certificate:
    for k, beta in enumerate(weights):
        if lam.pairing(beta) == 0:
            raise FixedLocusError(f"weight {k} = {list(beta)} pairs to zero with the cocharacter")
    eu = euler_class(weights)
    degrees = eu.lambda_degrees(lam.values)
    v = min(degrees.values())
    piece = eu.graded_piece(lam.values, v)
    if not piece.is_monomial():
        raise PreconditionError(f"lowest graded piece of the Euler class is not a monomial: {piece}")
    (exponents, coeff), = piece.items()
    if abs(coeff) != 1:
        raise PreconditionError(f"lowest graded piece has non-unit coefficient {coeff}")
    logging.debug(f"Lowest lambda-weight {v} with sign {coeff}")
    return Certificate(v, coeff, exponents)


def _in_space(x: LaurentPoly, weights: WeightList) -> None:
    if x.space != weights.space:
        raise VarSpaceMismatch("class and weights live in different variable spaces")


def localized_pushpull(x: LaurentPoly, attracting: WeightList) -> LaurentPoly:
    """Multiplication by the Euler class of the attracting weights."""
    _in_space(x, attracting)
    return euler_class(attracting) * x


def attracting_pushforward(x: LaurentPoly, weights: WeightList, lam: Cocharacter) -> LaurentPoly:
    """Multiplication by the Euler class of the lam-positive part of ``weights``."""
    _in_space(x, weights)
    _, _, attracting = split_weights(weights, lam)
    return euler_class(attracting) * x


def localized_inverse(y: LaurentPoly, attracting: WeightList) -> RationalFunction:
    _in_space(y, attracting)
    return RationalFunction(y, [1 - character(y.space, beta) for beta in attracting])


def graded_piece(p: LaurentPoly, lam: Cocharacter, v: int) -> LaurentPoly:
    return p.graded_piece(lam.values, v)
