"""Exact Laurent polynomials in q_1..q_r and z_{i,j}, and rational functions over them.

Exponent vectors list the q's first, then the z's grouped by vertex (in the
vertex order of the variable space) and by copy index.  Terms are kept in
descending lexicographic order of exponent vectors.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import ZZ
from sympy.polys.orderings import lex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyRing

from .error_utils import NotDivisibleError, PreconditionError, VarSpaceMismatch

Exponents = Tuple[int, ...]
Permutation = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class VarSpace:
    q_rank: int
    vertices: Tuple[str, ...] = ()
    counts: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if self.q_rank < 0:
            raise VarSpaceMismatch(f"torus rank must be nonnegative, got {self.q_rank}")
        if len(self.vertices) != len(self.counts):
            raise VarSpaceMismatch("variable counts must be given for every vertex")
        if any(c < 0 for c in self.counts):
            raise VarSpaceMismatch(f"variable counts must be nonnegative, got {self.counts}")

    @cached_property
    def offsets(self) -> Tuple[int, ...]:
        result, position = [], self.q_rank
        for count in self.counts:
            result.append(position)
            position += count
        return tuple(result)

    @property
    def n_vars(self) -> int:
        return self.q_rank + sum(self.counts)

    @property
    def n_z(self) -> int:
        return sum(self.counts)

    def vertex_position(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise VarSpaceMismatch(f"vertex {vertex!r} not in variable space") from None

    def count(self, vertex: str) -> int:
        return self.counts[self.vertex_position(vertex)]

    def z_index(self, vertex: str, j: int) -> int:
        """Exponent position of z_{vertex, j} (0-based copy index)."""
        k = self.vertex_position(vertex)
        if not 0 <= j < self.counts[k]:
            raise VarSpaceMismatch(f"copy index {j} out of range for vertex {vertex!r}")
        return self.offsets[k] + j

    def variable_names(self) -> List[str]:
        names = [f"q{k + 1}" for k in range(self.q_rank)]
        for vertex, count in zip(self.vertices, self.counts):
            names.extend(f"z_{vertex}_{j + 1}" for j in range(count))
        return names


@lru_cache(maxsize=None)
def _division_ring(n: int) -> PolyRing:
    return PolyRing(",".join(f"x{k}" for k in range(n)), ZZ, lex)


def _pairing(exps: Exponents, lam: Sequence[int]) -> int:
    return sum(e * l for e, l in zip(exps, lam))


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients."""

    __slots__ = ("space", "_terms", "_hash")

    def __init__(self, space: VarSpace, terms: Optional[Mapping[Exponents, int]] = None):
        n = space.n_vars
        cleaned: Dict[Exponents, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != n:
                raise VarSpaceMismatch(f"exponent vector {exps} has length {len(exps)}, expected {n}")
            coeff = int(coeff)
            if coeff:
                cleaned[exps] = coeff
        self.space = space
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, space: VarSpace, terms: Dict[Exponents, int]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.space = space
        obj._terms = {e: c for e, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, space: VarSpace) -> "LaurentPoly":
        return cls._raw(space, {})

    @classmethod
    def constant(cls, space: VarSpace, c: int = 1) -> "LaurentPoly":
        return cls._raw(space, {(0,) * space.n_vars: int(c)})

    @classmethod
    def monomial(cls, space: VarSpace, exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(space, {tuple(exps): c})

    @classmethod
    def q_monomial(cls, space: VarSpace, q_exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        q_exps = tuple(q_exps)
        if len(q_exps) != space.q_rank:
            raise VarSpaceMismatch(f"q exponent vector {q_exps} does not match torus rank {space.q_rank}")
        return cls._raw(space, {q_exps + (0,) * space.n_z: int(c)})

    @classmethod
    def z(cls, space: VarSpace, vertex: str, j: int, power: int = 1) -> "LaurentPoly":
        exps = [0] * space.n_vars
        exps[space.z_index(vertex, j)] = power
        return cls._raw(space, {tuple(exps): 1})

    @property
    def terms(self) -> List[Tuple[Exponents, int]]:
        return sorted(self._terms.items(), reverse=True)

    def items(self):
        return self._terms.items()

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_one(self) -> bool:
        return self._terms == {(0,) * self.space.n_vars: 1}

    def leading_term(self) -> Tuple[Exponents, int]:
        if not self._terms:
            raise PreconditionError("zero polynomial has no leading term")
        exps = max(self._terms)
        return exps, self._terms[exps]

    def _check(self, other: "LaurentPoly") -> None:
        if self.space != other.space:
            raise VarSpaceMismatch(f"variable spaces differ: {self.space} vs {other.space}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.space, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.space, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            terms[exps] = terms.get(exps, 0) + coeff
        return LaurentPoly._raw(self.space, terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.space, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly._raw(self.space, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, 0) + c1 * c2
        return LaurentPoly._raw(self.space, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial():
                raise NotDivisibleError("only monomials have Laurent inverses")
            (exps, coeff), = self._terms.items()
            if abs(coeff) != 1:
                raise NotDivisibleError(f"coefficient {coeff} is not a unit")
            inverse = LaurentPoly._raw(self.space, {tuple(-e for e in exps): coeff})
            return inverse ** (-n)
        result = LaurentPoly.constant(self.space, 1)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._raw(self.space, {tuple(a + b for a, b in zip(e, exps)): c
                                             for e, c in self._terms.items()})

    def min_exponents(self) -> Exponents:
        if not self._terms:
            return (0,) * self.space.n_vars
        return tuple(min(column) for column in zip(*self._terms))

    def content_free(self) -> Tuple["LaurentPoly", Exponents]:
        """(p', m) with p = x^m p' and p' having zero minimal exponent in every variable."""
        low = self.min_exponents()
        return self.shift(tuple(-e for e in low)), low

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """The Laurent polynomial quotient, or NotDivisibleError."""
        self._check(divisor)
        if divisor.is_zero():
            raise NotDivisibleError("division by the zero polynomial")
        if self.is_zero():
            return self
        if divisor.is_monomial():
            (d_exps, d_coeff), = divisor._terms.items()
            terms = {}
            for exps, coeff in self._terms.items():
                if coeff % d_coeff:
                    raise NotDivisibleError(f"coefficient {coeff} not divisible by {d_coeff}")
                terms[tuple(a - b for a, b in zip(exps, d_exps))] = coeff // d_coeff
            return LaurentPoly._raw(self.space, terms)
        if len(divisor._terms) == 2:
            (alpha, c1), (beta, c2) = divisor._terms.items()
            if abs(c1) == abs(c2):
                return LaurentPoly._raw(self.space, _binomial_quotient(self._terms, alpha, beta, c1, c2))
        numerator, low_n = self.content_free()
        denominator, low_d = divisor.content_free()
        ring = _division_ring(self.space.n_vars)
        try:
            quotient = ring.from_dict(dict(numerator._terms)).exquo(ring.from_dict(dict(denominator._terms)))
        except ExactQuotientFailed:
            raise NotDivisibleError(f"{divisor} does not divide {self}") from None
        terms = {tuple(int(e) for e in exps): int(c) for exps, c in quotient.items()}
        return LaurentPoly._raw(self.space, terms).shift(tuple(a - b for a, b in zip(low_n, low_d)))

    def permute(self, images: Permutation) -> "LaurentPoly":
        """Send z_{i,j} to z_{i,images[i][j]}; q exponents are untouched."""
        images = tuple(tuple(row) for row in images)
        space = self.space
        if len(images) != len(space.counts):
            raise VarSpaceMismatch(f"permutation has {len(images)} blocks for {len(space.counts)} vertices")
        target = list(range(space.n_vars))
        for k, (row, count) in enumerate(zip(images, space.counts)):
            if sorted(row) != list(range(count)):
                raise VarSpaceMismatch(f"block {k} is not a permutation of {count} positions")
            offset = space.offsets[k]
            for j, image in enumerate(row):
                target[offset + j] = offset + image
        terms = {}
        for exps, coeff in self._terms.items():
            moved = [0] * space.n_vars
            for position, e in enumerate(exps):
                moved[target[position]] = e
            terms[tuple(moved)] = coeff
        return LaurentPoly._raw(space, terms)

    def is_symmetric(self) -> bool:
        for k, count in enumerate(self.space.counts):
            for j in range(count - 1):
                images = [tuple(range(c)) for c in self.space.counts]
                row = list(range(count))
                row[j], row[j + 1] = row[j + 1], row[j]
                images[k] = tuple(row)
                if self.permute(tuple(images)) != self:
                    return False
        return True

    def truncate(self, low: int, high: int) -> "LaurentPoly":
        """Drop terms with some z exponent outside [low, high]."""
        if low > high:
            raise PreconditionError(f"empty window [{low}, {high}]")
        r = self.space.q_rank
        return LaurentPoly._raw(self.space, {e: c for e, c in self._terms.items()
                                             if all(low <= x <= high for x in e[r:])})

    def embed(self, target: VarSpace, shift: Optional[Mapping[str, int]] = None) -> "LaurentPoly":
        """Re-index into ``target``: copy j at vertex v lands on copy shift[v] + j."""
        space = self.space
        if target.q_rank != space.q_rank:
            raise VarSpaceMismatch(f"torus ranks differ: {space.q_rank} vs {target.q_rank}")
        shift = shift or {}
        positions = list(range(space.q_rank))
        for vertex, count in zip(space.vertices, space.counts):
            start = shift.get(vertex, 0)
            if count and start + count > target.count(vertex):
                raise VarSpaceMismatch(f"vertex {vertex!r} does not fit in the target space")
            positions.extend(target.z_index(vertex, start + j) for j in range(count))
        terms = {}
        for exps, coeff in self._terms.items():
            moved = [0] * target.n_vars
            for position, e in zip(positions, exps):
                moved[position] = e
            terms[tuple(moved)] = coeff
        return LaurentPoly._raw(target, terms)

    def specialize_q(self, values: Sequence[int]) -> Dict[Exponents, Fraction]:
        """Substitute nonzero integers for the q's; keys are z exponent vectors."""
        r = self.space.q_rank
        if len(values) != r:
            raise VarSpaceMismatch(f"need {r} specialization values, got {len(values)}")
        result: Dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            value = Fraction(coeff)
            for base, e in zip(values, exps[:r]):
                value *= Fraction(base) ** e
            key = exps[r:]
            result[key] = result.get(key, Fraction(0)) + value
        return {k: v for k, v in result.items() if v}

    def lambda_degrees(self, lam: Sequence[int]) -> Dict[Exponents, int]:
        if len(lam) != self.space.n_vars:
            raise VarSpaceMismatch(f"cocharacter has length {len(lam)}, expected {self.space.n_vars}")
        return {exps: _pairing(exps, lam) for exps in self._terms}

    def graded_piece(self, lam: Sequence[int], v: int) -> "LaurentPoly":
        degrees = self.lambda_degrees(lam)
        return LaurentPoly._raw(self.space, {e: c for e, c in self._terms.items() if degrees[e] == v})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        names = self.space.variable_names()
        pieces = []
        for exps, coeff in self.terms:
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
            body = "*".join(factors)
            if not body:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append(body)
            elif coeff == -1:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"{coeff}*{body}")
        return " + ".join(pieces).replace("+ -", "- ")


def _binomial_quotient(terms: Mapping[Exponents, int], alpha: Exponents, beta: Exponents,
                       c1: int, c2: int) -> Dict[Exponents, int]:
    """Exact quotient of ``terms`` by c1 x^alpha + c2 x^beta with |c1| = |c2|.

    Writing the divisor as c1 x^beta (u - s) with u = x^(alpha - beta), the
    terms split into chains e + k (alpha - beta).  Each chain is a Laurent
    polynomial in u and is divided by u - s with one downward pass.
    """
    gamma = tuple(a - b for a, b in zip(alpha, beta))
    s = -c2 // c1
    pivot = next(k for k, g in enumerate(gamma) if g)
    chains: Dict[Exponents, Dict[int, int]] = {}
    for exps, coeff in terms.items():
        k = exps[pivot] // gamma[pivot]
        base = tuple(e - k * g for e, g in zip(exps, gamma))
        chains.setdefault(base, {})[k] = coeff
    quotient: Dict[Exponents, int] = {}
    for base, chain in chains.items():
        k_min, k_max = min(chain), max(chain)
        running = 0
        for k in range(k_max, k_min, -1):
            running = chain.get(k, 0) + s * running
            if not running:
                continue
            if running % c1:
                raise NotDivisibleError(f"coefficient {running} not divisible by {c1}")
            exps = tuple(b + (k - 1) * g - e for b, g, e in zip(base, gamma, beta))
            quotient[exps] = running // c1
        if chain.get(k_min, 0) + s * running:
            raise NotDivisibleError(f"binomial divisor leaves a remainder along {base}")
    return quotient


@dataclass(frozen=True)
class WeylCosetRep:
    """Per-vertex sorted positions taken by the left factor in S_d / S_a x S_b."""

    subsets: Tuple[Tuple[int, ...], ...]

    def permutation(self, total: Sequence[int]) -> Permutation:
        """Left block j goes to subsets[i][j]; the right block fills the rest in order."""
        if len(total) != len(self.subsets):
            raise VarSpaceMismatch("coset representative and dimension vector lengths differ")
        images = []
        for chosen, d in zip(self.subsets, total):
            if any(not 0 <= p < d for p in chosen) or list(chosen) != sorted(set(chosen)):
                raise VarSpaceMismatch(f"positions {chosen} are not a sorted subset of 0..{d - 1}")
            rest = [p for p in range(d) if p not in chosen]
            images.append(tuple(chosen) + tuple(rest))
        return tuple(images)


def coset_representatives(a: Sequence[int], b: Sequence[int]) -> Iterator[WeylCosetRep]:
    """All WeylCosetRep for S_{a+b} / S_a x S_b in lexicographic order of subsets."""
    if len(a) != len(b):
        raise VarSpaceMismatch("left and right dimension vectors have different lengths")
    choices = [list(combinations(range(x + y), x)) for x, y in zip(a, b)]
    for subsets in product(*choices):
        yield WeylCosetRep(tuple(subsets))


def _normalize_factor(factor: LaurentPoly) -> Tuple[Optional[LaurentPoly], LaurentPoly]:
    """Split factor = unit * normalized; returns (normalized or None when a unit, unit inverse)."""
    if factor.is_zero():
        raise PreconditionError("rational function with a zero denominator factor")
    stripped, low = factor.content_free()
    _, lead = stripped.leading_term()
    sign = 1 if lead > 0 else -1
    if sign < 0:
        stripped = -stripped
    inverse_unit = LaurentPoly._raw(factor.space, {tuple(-e for e in low): sign})
    if stripped.is_one():
        return None, inverse_unit
    return stripped, inverse_unit


def _factor_key(p: LaurentPoly):
    return tuple(p.terms)


class RationalFunction:
    """A Laurent numerator over a product of tracked, normalized denominator factors.

    Factors are content-free with positive leading coefficient; sums use the
    multiset union of factors as common denominator, so no gcd is ever taken.
    """

    __slots__ = ("numerator", "factors")

    def __init__(self, numerator: LaurentPoly, factors: Iterable[LaurentPoly] = ()):
        normalized = []
        for factor in factors:
            numerator._check(factor)
            kept, inverse_unit = _normalize_factor(factor)
            numerator = numerator * inverse_unit
            if kept is not None:
                normalized.append(kept)
        self.numerator = numerator
        self.factors = tuple(sorted(normalized, key=_factor_key))

    @classmethod
    def _raw(cls, numerator: LaurentPoly, factors: Sequence[LaurentPoly]) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.numerator = numerator
        obj.factors = tuple(sorted(factors, key=_factor_key))
        return obj

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RationalFunction":
        return cls._raw(p, ())

    @property
    def space(self) -> VarSpace:
        return self.numerator.space

    @property
    def denominator(self) -> LaurentPoly:
        result = LaurentPoly.constant(self.space, 1)
        for factor in self.factors:
            result = result * factor
        return result

    def _factor_counts(self) -> Dict[LaurentPoly, int]:
        counts: Dict[LaurentPoly, int] = {}
        for factor in self.factors:
            counts[factor] = counts.get(factor, 0) + 1
        return counts

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        self.numerator._check(other.numerator)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        mine, theirs = self._factor_counts(), other._factor_counts()
        common: List[LaurentPoly] = []
        left, right = self.numerator, other.numerator
        for factor in set(mine) | set(theirs):
            a, b = mine.get(factor, 0), theirs.get(factor, 0)
            common.extend([factor] * max(a, b))
            for _ in range(max(a, b) - a):
                left = left * factor
            for _ in range(max(a, b) - b):
                right = right * factor
        return RationalFunction._raw(left + right, common)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.numerator, self.factors)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, LaurentPoly):
            return RationalFunction._raw(self.numerator * other, self.factors)
        self.numerator._check(other.numerator)
        return RationalFunction._raw(self.numerator * other.numerator, self.factors + other.factors).reduced()

    def permute(self, images: Permutation) -> "RationalFunction":
        return RationalFunction(self.numerator.permute(images), [f.permute(images) for f in self.factors])

    def reduced(self) -> "RationalFunction":
        """Cancel every tracked factor that divides the numerator."""
        numerator, remaining = self.numerator, []
        for factor in self.factors:
            try:
                numerator = numerator.exact_div(factor)
            except NotDivisibleError:
                remaining.append(factor)
        return RationalFunction._raw(numerator, remaining)

    def to_laurent(self) -> LaurentPoly:
        """Divide out every factor; NotDivisibleError if the value is not a Laurent polynomial."""
        numerator = self.numerator
        for factor in self.factors:
            numerator = numerator.exact_div(factor)
        logging.debug(f"Divided out {len(self.factors)} denominator factors")
        return numerator

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            other = RationalFunction.from_laurent(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def __repr__(self) -> str:
        if not self.factors:
            return repr(self.numerator)
        return f"({self.numerator}) / ({')*('.join(repr(f) for f in self.factors)})"


def accumulate(values: Iterable[RationalFunction], space: VarSpace) -> RationalFunction:
    total = RationalFunction.from_laurent(LaurentPoly.zero(space))
    for value in values:
        total = total + value
    return total
