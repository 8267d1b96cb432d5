import random
from itertools import permutations, product
from pathlib import Path

import pytest

from kha.algebra.laurent import LaurentPoly, VarSpace
from kha.algebra.quiver import (
    DimVector,
    Quiver,
    TorusWeighting,
    jordan_quiver,
    nakajima_torus,
    tripled_quiver,
    type_a_quiver,
    unit_torus,
)
from kha.algebra.shuffle import ShuffleElement, element_space

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def jordan():
    quiver = jordan_quiver()
    return quiver, unit_torus(quiver)


@pytest.fixture
def a2():
    quiver = type_a_quiver(2)
    return quiver, unit_torus(quiver)


@pytest.fixture
def tripled_jordan():
    quiver, _ = tripled_quiver(jordan_quiver())
    return quiver, nakajima_torus(jordan_quiver())


def symmetrize(p: LaurentPoly) -> LaurentPoly:
    """Sum of p over every per-vertex permutation."""
    space = p.space
    total = LaurentPoly.zero(space)
    for images in product(*(permutations(range(c)) for c in space.counts)):
        total = total + p.permute(tuple(images))
    return total


def random_laurent(rng: random.Random, space: VarSpace, n_terms: int = 2, low: int = -2, high: int = 2) -> LaurentPoly:
    terms = {}
    for _ in range(n_terms):
        q = [rng.randint(-1, 1) for _ in range(space.q_rank)]
        z = [rng.randint(low, high) for _ in range(space.n_z)]
        terms[tuple(q + z)] = rng.choice([-2, -1, 1, 2])
    return LaurentPoly(space, terms)


def random_element(rng: random.Random, quiver: Quiver, torus: TorusWeighting, d: DimVector,
                   n_terms: int = 1) -> ShuffleElement:
    space = element_space(quiver, torus, d)
    payload = symmetrize(random_laurent(rng, space, n_terms))
    if payload.is_zero():
        payload = LaurentPoly.constant(space, 1)
    return ShuffleElement(quiver, torus, d, payload)


def identity_permutation(space: VarSpace):
    return tuple(tuple(range(c)) for c in space.counts)


def compose(outer, inner):
    """outer o inner, acting first by inner."""
    return tuple(tuple(o[i] for i in row) for o, row in zip(outer, inner))
