"""The shuffle algebra of symmetric Laurent polynomials for a quiver with zero potential.

The product of f at a and g at b is the sum over S_{a+b} / S_a x S_b of the
permuted integrand f(left block) g(right block) times the zeta kernel over
every (left, right) pair of variables.  The left block at vertex i is the first
a_i copies of z_i in the canonical layout.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple

from .error_utils import NotDivisibleError, PolynomialityError, PreconditionError, SymmetryError, VarSpaceMismatch
from .kclass import Cocharacter, WeightList, euler_class
from .laurent import (
    LaurentPoly,
    RationalFunction,
    VarSpace,
    accumulate,
    coset_representatives,
)
from .quiver import DimVector, Quiver, TorusWeighting, framed_quiver, jordan_quiver, unit_torus
from .validation import FRAMING_VERTEX

ZETA_VARIABLE = "z"


def element_space(quiver: Quiver, torus: TorusWeighting, d: DimVector) -> VarSpace:
    if len(d) != quiver.n_vertices:
        raise VarSpaceMismatch(f"dimension vector has {len(d)} entries for {quiver.n_vertices} vertices")
    return VarSpace(torus.rank, quiver.vertices, d.entries)


def framed_space(quiver: Quiver, torus: TorusWeighting, d: DimVector) -> VarSpace:
    return VarSpace(torus.rank, (FRAMING_VERTEX,) + quiver.vertices, (1,) + d.entries)


def _scalar(value, space: VarSpace) -> LaurentPoly:
    """An int or a q-only Laurent polynomial as an element of ``space``."""
    if isinstance(value, int):
        return LaurentPoly.constant(space, value)
    if value.space.n_z:
        raise VarSpaceMismatch("scalars must not involve z variables")
    return value.embed(space)


@dataclass(frozen=True)
class ShuffleElement:
    quiver: Quiver
    torus: TorusWeighting
    dim: DimVector
    payload: LaurentPoly

    def __post_init__(self):
        if self.payload.space != element_space(self.quiver, self.torus, self.dim):
            raise VarSpaceMismatch(f"payload variables do not match dimension vector {list(self.dim)}")
        if not self.payload.is_symmetric():
            raise SymmetryError(f"payload {self.payload} is not symmetric")

    def _same_algebra(self, other: "ShuffleElement") -> None:
        if (self.quiver, self.torus) != (other.quiver, other.torus):
            raise VarSpaceMismatch("elements belong to different quivers or torus weightings")

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        self._same_algebra(other)
        if self.dim != other.dim:
            raise VarSpaceMismatch(f"cannot add elements of degrees {list(self.dim)} and {list(other.dim)}")
        return ShuffleElement(self.quiver, self.torus, self.dim, self.payload + other.payload)

    def __neg__(self) -> "ShuffleElement":
        return ShuffleElement(self.quiver, self.torus, self.dim, -self.payload)

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + (-other)

    def scaled(self, scalar) -> "ShuffleElement":
        """Multiply by an integer or a Laurent polynomial in the q's."""
        return ShuffleElement(self.quiver, self.torus, self.dim,
                              self.payload * _scalar(scalar, self.payload.space))

    def __mul__(self, other):
        if isinstance(other, ShuffleElement):
            return shuffle_mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)


@dataclass(frozen=True)
class FramedModuleElement:
    """A class at dimension (1, d) of the framed quiver; the framing vertex carries z_inf."""

    quiver: Quiver
    torus: TorusWeighting
    framing: DimVector
    dim: DimVector
    payload: LaurentPoly

    def __post_init__(self):
        if self.payload.space != framed_space(self.quiver, self.torus, self.dim):
            raise VarSpaceMismatch(f"payload variables do not match framed dimension (1, {list(self.dim)})")
        if not self.payload.is_symmetric():
            raise SymmetryError(f"payload {self.payload} is not symmetric")

    @property
    def framed(self) -> Quiver:
        return framed_quiver(self.quiver, self.framing)

    def __add__(self, other: "FramedModuleElement") -> "FramedModuleElement":
        if (self.quiver, self.torus, self.framing, self.dim) != (other.quiver, other.torus, other.framing, other.dim):
            raise VarSpaceMismatch("module elements live in different degrees or modules")
        return FramedModuleElement(self.quiver, self.torus, self.framing, self.dim, self.payload + other.payload)


@dataclass(frozen=True)
class CutBundleWeights:
    space: VarSpace
    characters: Tuple[Tuple[int, ...], ...]
    lam: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "characters", tuple(tuple(c) for c in self.characters))
        object.__setattr__(self, "lam", tuple(self.lam))
        if len(self.lam) != self.space.n_vars:
            raise VarSpaceMismatch(f"cocharacter has length {len(self.lam)}, expected {self.space.n_vars}")
        for k, chi in enumerate(self.characters):
            if len(chi) != self.space.n_vars:
                raise VarSpaceMismatch(f"cut character {k} has length {len(chi)}")


def zeta(quiver: Quiver, torus: TorusWeighting, i: str, j: str) -> RationalFunction:
    """prod_{e: i -> j} (1 - q_e^-1 z^-1) / (1 - z^-1)^[i == j] in one formal variable z."""
    quiver.vertex_index(i)
    quiver.vertex_index(j)
    space = VarSpace(torus.rank, (ZETA_VARIABLE,), (1,))
    numerator = LaurentPoly.constant(space, 1)
    for edge in quiver.edges_between(i, j):
        weight = tuple(-x for x in torus.weight(edge.id))
        numerator = numerator * (1 - LaurentPoly.monomial(space, weight + (-1,)))
    factors = [1 - LaurentPoly.monomial(space, (0,) * torus.rank + (-1,))] if i == j else []
    return RationalFunction(numerator, factors)


def _pair_character(space: VarSpace, q_exps: Sequence[int], low: Tuple[str, int], high: Tuple[str, int]):
    """Exponent vector of q^q_exps * z_low^-1 * z_high."""
    exps = list(q_exps) + [0] * space.n_z
    exps[space.z_index(*low)] -= 1
    exps[space.z_index(*high)] += 1
    return tuple(exps)


def normal_bundle_weights(quiver: Quiver, torus: TorusWeighting, a: DimVector, b: DimVector) -> WeightList:
    """Characters q_e^-1 z_{i,j}^-1 z_{i',j'} for e: i -> i', j left at i, j' right at i'."""
    space = element_space(quiver, torus, a + b)
    offsets = dict(zip(quiver.vertices, a))
    weights = []
    for edge in quiver.edges:
        inverse = tuple(-x for x in torus.weight(edge.id))
        for j in range(offsets[edge.src]):
            for k in range(offsets[edge.tgt], space.count(edge.tgt)):
                weights.append(_pair_character(space, inverse, (edge.src, j), (edge.tgt, k)))
    return WeightList(space, tuple(weights))


def weyl_weights(quiver: Quiver, torus: TorusWeighting, a: DimVector, b: DimVector) -> WeightList:
    """Characters z_{i,j}^-1 z_{i,k} for j in the left block and k in the right block at i."""
    space = element_space(quiver, torus, a + b)
    zero = (0,) * torus.rank
    weights = []
    for vertex, left, right in zip(quiver.vertices, a, b):
        for j in range(left):
            for k in range(left, left + right):
                weights.append(_pair_character(space, zero, (vertex, j), (vertex, k)))
    return WeightList(space, tuple(weights))


@lru_cache(maxsize=256)
def _kernel(quiver: Quiver, torus: TorusWeighting, a: DimVector, b: DimVector) -> RationalFunction:
    numerator = euler_class(normal_bundle_weights(quiver, torus, a, b))
    weyl = weyl_weights(quiver, torus, a, b)
    return RationalFunction(numerator, [1 - LaurentPoly.monomial(weyl.space, beta) for beta in weyl])


def _symmetrize(quiver: Quiver, torus: TorusWeighting, a: DimVector, b: DimVector,
                left: LaurentPoly, right: LaurentPoly, twist: Optional[LaurentPoly] = None) -> LaurentPoly:
    d = a + b
    space = element_space(quiver, torus, d)
    shift = dict(zip(quiver.vertices, a))
    integrand = _kernel(quiver, torus, a, b) * (left.embed(space) * right.embed(space, shift))
    if twist is not None:
        integrand = integrand * twist
    reps = list(coset_representatives(a.entries, b.entries))
    logging.debug(f"Symmetrizing over {len(reps)} cosets at {list(a)} + {list(b)}")
    total = accumulate((integrand.permute(rep.permutation(d.entries)) for rep in reps), space)
    try:
        result = total.to_laurent()
    except NotDivisibleError as e:
        raise PolynomialityError(f"product at {list(a)} + {list(b)} is not a Laurent polynomial: {e}") from e
    if not result.is_symmetric():
        raise SymmetryError(f"product at {list(a)} + {list(b)} is not symmetric")
    return result


def unit(quiver: Quiver, torus: TorusWeighting) -> ShuffleElement:
    d = DimVector.zero(quiver.n_vertices)
    return ShuffleElement(quiver, torus, d, LaurentPoly.constant(element_space(quiver, torus, d), 1))


def generator(quiver: Quiver, torus: TorusWeighting, vertex: str, k: int) -> ShuffleElement:
    """z^k at the unit vector of ``vertex``."""
    d = DimVector.unit(quiver.n_vertices, quiver.vertex_index(vertex))
    space = element_space(quiver, torus, d)
    return ShuffleElement(quiver, torus, d, LaurentPoly.z(space, vertex, 0, k))


def constant_element(quiver: Quiver, torus: TorusWeighting, d: DimVector, c: int = 1) -> ShuffleElement:
    return ShuffleElement(quiver, torus, d, LaurentPoly.constant(element_space(quiver, torus, d), c))


def shuffle_mul(f: ShuffleElement, g: ShuffleElement) -> ShuffleElement:
    f._same_algebra(g)
    payload = _symmetrize(f.quiver, f.torus, f.dim, g.dim, f.payload, g.payload)
    return ShuffleElement(f.quiver, f.torus, f.dim + g.dim, payload)


def block_cocharacter(space: VarSpace, a: DimVector) -> Tuple[int, ...]:
    """1 on the first a_i copies at each vertex, 0 elsewhere and on the q's."""
    lam = [0] * space.n_vars
    for vertex, left in zip(space.vertices, a):
        for j in range(left):
            lam[space.z_index(vertex, j)] = 1
    return tuple(lam)


def cut_bundle_weights(quiver: Quiver, torus: TorusWeighting, cut: Iterable[str],
                       a: DimVector, b: DimVector) -> CutBundleWeights:
    """Characters q^{T(e)} z_{t(e),k} z_{s(e),j}^-1 of the cut bundle at a + b."""
    space = element_space(quiver, torus, a + b)
    characters = []
    for edge_id in cut:
        edge = quiver.edge(edge_id)
        weight = torus.weight(edge_id)
        for j in range(space.count(edge.src)):
            for k in range(space.count(edge.tgt)):
                characters.append(_pair_character(space, weight, (edge.src, j), (edge.tgt, k)))
    return CutBundleWeights(space, tuple(characters), block_cocharacter(space, a))


def twist_weight(cut: CutBundleWeights, a: DimVector, b: DimVector) -> LaurentPoly:
    """Product of the cut characters with strictly negative pairing against the block cocharacter."""
    if cut.space.counts != (a + b).entries:
        raise VarSpaceMismatch(f"cut bundle is not enumerated at {list(a + b)}")
    if cut.lam != block_cocharacter(cut.space, a):
        raise PreconditionError("cut bundle cocharacter is not the block cocharacter of the split")
    lam = Cocharacter(cut.lam)
    exps = [0] * cut.space.n_vars
    for chi in cut.characters:
        if lam.pairing(chi) < 0:
            exps = [x + y for x, y in zip(exps, chi)]
    return LaurentPoly.monomial(cut.space, exps)


def twisted_mul_by(f: ShuffleElement, g: ShuffleElement, twist: LaurentPoly) -> ShuffleElement:
    """Product with the integrand multiplied by a Laurent monomial before symmetrization."""
    f._same_algebra(g)
    space = element_space(f.quiver, f.torus, f.dim + g.dim)
    if not twist.is_monomial():
        raise PreconditionError(f"twist {twist} is not a monomial")
    if twist.space != space:
        twist = _scalar(twist, space)
    payload = _symmetrize(f.quiver, f.torus, f.dim, g.dim, f.payload, g.payload, twist)
    return ShuffleElement(f.quiver, f.torus, f.dim + g.dim, payload)


def twisted_mul(f: ShuffleElement, g: ShuffleElement, cut: CutBundleWeights) -> ShuffleElement:
    return twisted_mul_by(f, g, twist_weight(cut, f.dim, g.dim))


def vacuum(quiver: Quiver, torus: TorusWeighting, framing: DimVector, k: int = 0) -> FramedModuleElement:
    """z_inf^k at dimension (1, 0)."""
    d = DimVector.zero(quiver.n_vertices)
    space = framed_space(quiver, torus, d)
    return FramedModuleElement(quiver, torus, framing, d, LaurentPoly.z(space, FRAMING_VERTEX, 0, k))


def module_action(f: ShuffleElement, m: FramedModuleElement) -> FramedModuleElement:
    """The shuffle formula on the framed quiver at (0, a) + (1, d); z_inf is a spectator."""
    if (f.quiver, f.torus) != (m.quiver, m.torus):
        raise VarSpaceMismatch("algebra and module elements belong to different quivers or tori")
    framed = m.framed
    left = DimVector((0,) + f.dim.entries)
    right = DimVector((1,) + m.dim.entries)
    torus = m.torus.validate_against(framed)
    payload = _symmetrize(framed, torus, left, right, f.payload, m.payload)
    return FramedModuleElement(m.quiver, m.torus, m.framing, f.dim + m.dim, payload)


def jordan_torus() -> TorusWeighting:
    return unit_torus(jordan_quiver())


@dataclass(frozen=True)
class RelationSearchResult:
    r_max: int
    candidates: Tuple[int, ...]
    accepted: Tuple[int, ...]
    failures: Tuple[Tuple[int, int, int], ...]

    @property
    def alpha(self) -> Optional[int]:
        return self.accepted[0] if len(self.accepted) == 1 else None


def relation_search(r_max: int, candidates: Sequence[int]) -> RelationSearchResult:
    """Find alpha = q^c among ``candidates`` (exponents c) satisfying the quantum affine relation.

    e_r e_{s+1} - alpha e_{s+1} e_r = alpha e_{r+1} e_s - e_s e_{r+1} on the Jordan quiver.
    """
    if r_max < 0:
        raise PreconditionError(f"degree bound must be nonnegative, got {r_max}")
    quiver, torus = jordan_quiver(), jordan_torus()
    gens = {k: generator(quiver, torus, "1", k) for k in range(r_max + 2)}
    products = {}

    def prod(x: int, y: int) -> ShuffleElement:
        if (x, y) not in products:
            products[(x, y)] = gens[x] * gens[y]
        return products[(x, y)]

    accepted, failures = [], []
    for c in candidates:
        alpha = LaurentPoly.q_monomial(VarSpace(1), (c,))
        failed = None
        for r in range(r_max + 1):
            for s in range(r_max + 1):
                lhs = prod(r, s + 1) - prod(s + 1, r).scaled(alpha)
                rhs = prod(r + 1, s).scaled(alpha) - prod(s, r + 1)
                if lhs != rhs:
                    failed = (c, r, s)
                    break
            if failed:
                break
        if failed:
            failures.append(failed)
        else:
            accepted.append(c)
    logging.info(f"Relation search accepted exponents {accepted} out of {list(candidates)}")
    return RelationSearchResult(r_max, tuple(candidates), tuple(accepted), tuple(failures))
