import json
import random
import time

import pytest

from kha.algebra.core import Workspace
from kha.algebra.error_utils import PreconditionError, SymmetryError, VarSpaceMismatch
from kha.algebra.laurent import LaurentPoly, RationalFunction, VarSpace
from kha.algebra.quiver import DimVector, TorusWeighting, jordan_quiver, type_a_quiver
from kha.algebra.shuffle import (
    FramedModuleElement,
    ShuffleElement,
    constant_element,
    cut_bundle_weights,
    element_space,
    framed_space,
    generator,
    module_action,
    relation_search,
    shuffle_mul,
    twist_weight,
    twisted_mul,
    twisted_mul_by,
    unit,
    vacuum,
    zeta,
)
from kha.algebra.validation import FRAMING_VERTEX

from .conftest import random_element


def _z(space, vertex, j, power=1):
    return LaurentPoly.z(space, vertex, j, power)


def test_zeta_jordan(jordan):
    quiver, torus = jordan
    space = VarSpace(1, ("z",), (1,))
    z_inv = LaurentPoly.monomial(space, (0, -1))
    q_inv_z_inv = LaurentPoly.monomial(space, (-1, -1))
    assert zeta(quiver, torus, "1", "1") == RationalFunction(1 - q_inv_z_inv, [1 - z_inv])


def test_zeta_a2(a2):
    quiver, torus = a2
    space = VarSpace(1, ("z",), (1,))
    assert zeta(quiver, torus, "1", "2") == 1 - LaurentPoly.monomial(space, (-1, -1))
    assert zeta(quiver, torus, "2", "1") == LaurentPoly.constant(space, 1)


def test_jordan_square_of_one(jordan):
    quiver, torus = jordan
    one = constant_element(quiver, torus, DimVector((1,)))
    product = one * one
    space = element_space(quiver, torus, DimVector((2,)))
    assert product.dim == DimVector((2,))
    assert product.payload == 1 + LaurentPoly.q_monomial(space, (-1,))


def test_a2_products_depend_on_order(a2):
    quiver, torus = a2
    e1 = constant_element(quiver, torus, DimVector((1, 0)))
    e2 = constant_element(quiver, torus, DimVector((0, 1)))
    space = element_space(quiver, torus, DimVector((1, 1)))
    assert (e1 * e2).payload == 1 - LaurentPoly.monomial(space, (-1, -1, 1))
    assert (e2 * e1).payload == 1


def test_unit_laws(jordan, a2):
    for quiver, torus in (jordan, a2):
        rng = random.Random(7)
        f = random_element(rng, quiver, torus, DimVector.root(quiver.n_vertices, 0, quiver.n_vertices - 1), 2)
        one = unit(quiver, torus)
        assert one * f == f
        assert f * one == f


def test_payload_must_be_symmetric(jordan):
    quiver, torus = jordan
    space = element_space(quiver, torus, DimVector((2,)))
    with pytest.raises(SymmetryError):
        ShuffleElement(quiver, torus, DimVector((2,)), _z(space, "1", 0))
    with pytest.raises(VarSpaceMismatch):
        ShuffleElement(quiver, torus, DimVector((1,)), _z(space, "1", 0) + _z(space, "1", 1))


@pytest.mark.parametrize("seed", range(3))
def test_associativity_jordan(jordan, seed):
    quiver, torus = jordan
    rng = random.Random(seed)
    f, g, h = (random_element(rng, quiver, torus, DimVector((1,)), 2) for _ in range(3))
    assert (f * g) * h == f * (g * h)


@pytest.mark.parametrize("seed", range(3))
def test_associativity_a2(a2, seed):
    quiver, torus = a2
    rng = random.Random(10 + seed)
    f = random_element(rng, quiver, torus, DimVector((1, 0)), 2)
    g = random_element(rng, quiver, torus, DimVector((0, 1)), 2)
    h = random_element(rng, quiver, torus, DimVector((1, 1)), 1)
    assert (f * g) * h == f * (g * h)


def test_associativity_tripled_jordan(tripled_jordan):
    quiver, torus = tripled_jordan
    rng = random.Random(3)
    f, g, h = (random_element(rng, quiver, torus, DimVector((1,))) for _ in range(3))
    assert (f * g) * h == f * (g * h)


@pytest.mark.parametrize("seed", range(3))
def test_associativity_with_larger_blocks_jordan(jordan, seed):
    quiver, torus = jordan
    rng = random.Random(40 + seed)
    f = random_element(rng, quiver, torus, DimVector((2,)), 2)
    g = random_element(rng, quiver, torus, DimVector((1,)), 2)
    h = random_element(rng, quiver, torus, DimVector((2,)), 2)
    assert (f * g) * h == f * (g * h)


@pytest.mark.parametrize("seed", range(3))
def test_associativity_with_larger_blocks_a2(a2, seed):
    quiver, torus = a2
    rng = random.Random(50 + seed)
    f = random_element(rng, quiver, torus, DimVector((2, 0)), 2)
    g = random_element(rng, quiver, torus, DimVector((0, 2)), 2)
    h = random_element(rng, quiver, torus, DimVector((1, 1)), 1)
    assert (f * g) * h == f * (g * h)
    assert (g * f) * h == g * (f * h)


@pytest.mark.parametrize("first, second, third", [((2,), (1,), (1,)), ((1,), (1,), (2,))])
def test_associativity_tripled_jordan_at_degree_four(tripled_jordan, first, second, third):
    quiver, torus = tripled_jordan
    rng = random.Random(sum(first) + 7)
    f, g, h = (random_element(rng, quiver, torus, DimVector(d)) for d in (first, second, third))
    start = time.perf_counter()
    assert (f * g) * h == f * (g * h)
    assert time.perf_counter() - start < 30


def test_tripled_jordan_product_of_two_blocks(tripled_jordan):
    quiver, torus = tripled_jordan
    rng = random.Random(17)
    f, g = (random_element(rng, quiver, torus, DimVector((2,)), 2) for _ in range(2))
    start = time.perf_counter()
    product = f * g
    assert time.perf_counter() - start < 30
    assert product.dim == DimVector((4,))
    assert product.payload.is_symmetric()
    assert (f + f) * g == product + product


def test_bilinearity_and_q_scalars(a2):
    quiver, torus = a2
    rng = random.Random(21)
    f1, f2 = (random_element(rng, quiver, torus, DimVector((1, 0)), 2) for _ in range(2))
    g = random_element(rng, quiver, torus, DimVector((0, 1)), 2)
    assert (f1 + f2) * g == f1 * g + f2 * g
    assert g * (f1 - f2) == g * f1 - g * f2
    q = LaurentPoly.q_monomial(VarSpace(1), (1,))
    assert f1.scaled(q) * g == (f1 * g).scaled(q)
    assert (3 * f1) * g == (f1 * g).scaled(3)


def test_elements_of_different_algebras_do_not_multiply(jordan):
    quiver, torus = jordan
    other = TorusWeighting(2, (("f", (1, 0)),))
    with pytest.raises(VarSpaceMismatch):
        unit(quiver, torus) * unit(quiver, other)


def test_twist_weight_jordan(jordan):
    quiver, torus = jordan
    a = b = DimVector((1,))
    cut = cut_bundle_weights(quiver, torus, ["f"], a, b)
    space = element_space(quiver, torus, a + b)
    assert twist_weight(cut, a, b) == LaurentPoly.monomial(space, (1, -1, 1))
    with pytest.raises(PreconditionError):
        twist_weight(cut, DimVector((2,)), DimVector((0,)))


def test_twist_weight_rank_zero():
    quiver = jordan_quiver()
    torus = TorusWeighting(0)
    for a, b in ((DimVector((1,)), DimVector((0,))), (DimVector((0,)), DimVector((1,)))):
        cut = cut_bundle_weights(quiver, torus, ["f"], a, b)
        assert twist_weight(cut, a, b) == 1


def test_twisted_mul_jordan(jordan):
    quiver, torus = jordan
    one = constant_element(quiver, torus, DimVector((1,)))
    cut = cut_bundle_weights(quiver, torus, ["f"], one.dim, one.dim)
    space = element_space(quiver, torus, DimVector((2,)))
    expected = (-LaurentPoly.q_monomial(space, (1,)) + LaurentPoly.monomial(space, (0, -1, 1)) + 1
                + LaurentPoly.monomial(space, (0, 1, -1)))
    assert twisted_mul(one, one, cut).payload == expected


def test_twisted_mul_by_q_monomial_scales(a2):
    quiver, torus = a2
    rng = random.Random(5)
    f = random_element(rng, quiver, torus, DimVector((1, 0)), 2)
    g = random_element(rng, quiver, torus, DimVector((0, 1)), 2)
    q = LaurentPoly.q_monomial(VarSpace(1), (2,))
    assert twisted_mul_by(f, g, q) == (f * g).scaled(q)
    with pytest.raises(PreconditionError):
        twisted_mul_by(f, g, 1 + q)


def _module_constant(quiver, torus, framing, d, c=1):
    return FramedModuleElement(quiver, torus, framing, d, LaurentPoly.constant(framed_space(quiver, torus, d), c))


def test_module_action_jordan_spectator(jordan):
    quiver, torus = jordan
    framing = DimVector((1,))
    e0 = generator(quiver, torus, "1", 0)
    once = module_action(e0, vacuum(quiver, torus, framing))
    assert once == _module_constant(quiver, torus, framing, DimVector((1,)))
    twice = module_action(e0, once)
    space = framed_space(quiver, torus, DimVector((2,)))
    assert twice.dim == DimVector((2,))
    assert twice.payload == 1 + LaurentPoly.q_monomial(space, (-1,))


def test_module_unit_law(a2):
    quiver, torus = a2
    framing = DimVector((1, 0))
    m = _module_constant(quiver, torus, framing, DimVector((1, 0)), 2)
    assert module_action(unit(quiver, torus), m) == m


def test_vacuum_power_pulls_out(jordan):
    quiver, torus = jordan
    framing = DimVector((1,))
    f = random_element(random.Random(8), quiver, torus, DimVector((1,)), 2)
    plain = module_action(f, vacuum(quiver, torus, framing))
    shifted = module_action(f, vacuum(quiver, torus, framing, 3))
    assert shifted.payload == plain.payload * _z(plain.payload.space, "inf", 0, 3)


SPECTATOR_CASES = [
    ("jordan", (1,), (1,)), ("jordan", (1,), (2,)), ("jordan", (2,), (1,)),
    ("a2", (1, 0), (0, 1)), ("a2", (0, 1), (1, 0)), ("a2", (1, 1), (1, 0)), ("a2", (1, 0), (1, 1)),
]


@pytest.mark.parametrize("seed", range(50))
def test_module_action_matches_unframed_product(jordan, a2, seed):
    name, a, b = SPECTATOR_CASES[seed % len(SPECTATOR_CASES)]
    quiver, torus = jordan if name == "jordan" else a2
    framing = DimVector((1,) * quiver.n_vertices)
    rng = random.Random(600 + seed)
    f = random_element(rng, quiver, torus, DimVector(a), 2)
    g = random_element(rng, quiver, torus, DimVector(b), 2)
    k = rng.randint(-2, 2)
    space = framed_space(quiver, torus, g.dim)
    m = FramedModuleElement(quiver, torus, framing, g.dim, g.payload.embed(space))
    expected = shuffle_mul(f, g).payload.embed(framed_space(quiver, torus, f.dim + g.dim))
    assert module_action(f, m).payload == expected
    shifted = FramedModuleElement(quiver, torus, framing, g.dim, m.payload * _z(space, FRAMING_VERTEX, 0, k))
    assert module_action(f, shifted).payload == expected * _z(expected.space, FRAMING_VERTEX, 0, k)


def test_module_action_is_associative(a2):
    quiver, torus = a2
    framing = DimVector((1, 1))
    rng = random.Random(13)
    f = random_element(rng, quiver, torus, DimVector((1, 0)), 2)
    g = random_element(rng, quiver, torus, DimVector((0, 1)), 2)
    m = vacuum(quiver, torus, framing, 1)
    assert module_action(f * g, m) == module_action(f, module_action(g, m))


def test_relation_search_finds_q_inverse():
    result = relation_search(2, (1, -1, 2, -2))
    assert result.accepted == (-1,)
    assert result.alpha == -1
    assert {c for c, _, _ in result.failures} == {1, 2, -2}


def test_relation_search_without_candidates():
    result = relation_search(1, ())
    assert result.accepted == () and result.alpha is None
    with pytest.raises(PreconditionError):
        relation_search(-1, (1,))


def test_workspace_store_and_load(fixtures_dir):
    workspace = Workspace.from_bundle(json.loads((fixtures_dir / "jordan.json").read_text()))
    one = json.loads((fixtures_dir / "jordan_one.json").read_text())
    product = workspace.multiply(one, one)
    text = workspace.store("square", product)
    assert text == (fixtures_dir / "jordan_one_squared.json").read_text()
    assert workspace.load("square") == product
    with pytest.raises(VarSpaceMismatch):
        workspace.load("cube")
    with pytest.raises(VarSpaceMismatch):
        workspace.store("other", unit(type_a_quiver(2), workspace.torus))
