import json

import pytest

from kha.algebra import io, reports
from kha.algebra.error_utils import SchemaError
from kha.algebra.kclass import Certificate
from kha.algebra.laurent import LaurentPoly, VarSpace
from kha.algebra.quiver import DimVector, StabilityCondition, jordan_quiver, tripled_quiver, type_a_quiver, unit_torus
from kha.algebra.shuffle import constant_element
from kha.algebra.wallcross import hn_strata, verify_generation

from .conftest import FIXTURES


def _load(fixtures_dir, name):
    return json.loads((fixtures_dir / name).read_text())


def test_dumps_is_canonical():
    assert io.dumps({"b": [1, 2], "a": "é"}) == '{"a":"é","b":[1,2]}\n'


def test_loads_reports_the_position():
    with pytest.raises(SchemaError, match="line 1"):
        io.loads("{", "quiver")


def test_bundle_round_trip(fixtures_dir):
    quiver, torus, potential = io.parse_bundle(_load(fixtures_dir, "q3.json"))
    assert torus is None
    assert [t.cycle for t in potential.terms] == [("x", "y", "z"), ("x", "z", "y")]
    assert io.parse_bundle(io.serialize_bundle(quiver, potential=potential))[2] == potential
    tripled, tripled_potential = tripled_quiver(jordan_quiver())
    payload = io.serialize_bundle(tripled, unit_torus(tripled), tripled_potential)
    assert io.parse_bundle(payload) == (tripled, unit_torus(tripled), tripled_potential)


def test_potential_error_names_the_term(fixtures_dir):
    with pytest.raises(SchemaError) as info:
        io.parse_bundle(_load(fixtures_dir, "invalid/bad_potential.json"))
    assert info.value.path == "quiver.potential[1].cycle"


def test_torus_with_unknown_edge(fixtures_dir):
    with pytest.raises(SchemaError) as info:
        io.parse_torus(_load(fixtures_dir, "invalid/unknown_edge_torus.json"), jordan_quiver())
    assert info.value.path == "torus.weights.g"


def test_quiver_schema_errors():
    with pytest.raises(SchemaError) as info:
        io.parse_quiver({"vertices": ["1"], "edges": [{"id": "a", "src": "1"}]})
    assert info.value.path == "quiver.edges[0].tgt"
    with pytest.raises(SchemaError):
        io.parse_quiver({"vertices": ["1", "1"]})


def test_parse_dim():
    quiver = type_a_quiver(2)
    assert io.parse_dim([1, 2], quiver) == DimVector((1, 2))
    assert io.parse_dim({"2": 3}, quiver) == DimVector((0, 3))
    with pytest.raises(SchemaError):
        io.parse_dim({"3": 1}, quiver)
    with pytest.raises(SchemaError):
        io.parse_dim([1], quiver)
    with pytest.raises(SchemaError):
        io.parse_dim([1, -1], quiver)


def test_stability_is_exact():
    theta = io.parse_stability(["1/2", 3])
    assert theta == StabilityCondition((io.parse_rational("1/2", "x"), 3))
    assert io.serialize_stability(theta) == ["1/2", "3"]
    with pytest.raises(SchemaError):
        io.parse_stability([0.5])
    with pytest.raises(SchemaError):
        io.parse_stability(["1/0"])


def test_element_golden(fixtures_dir):
    quiver = jordan_quiver()
    torus = unit_torus(quiver)
    one = io.parse_element(_load(fixtures_dir, "jordan_one.json"), quiver, torus)
    assert one == constant_element(quiver, torus, DimVector((1,)))
    squared = io.dumps(io.serialize_element(one * one))
    assert squared == (fixtures_dir / "jordan_one_squared.json").read_text()
    assert io.parse_element(io.loads(squared), quiver, torus) == one * one


def test_element_schema_errors(fixtures_dir):
    quiver = type_a_quiver(2)
    torus = unit_torus(quiver)
    with pytest.raises(SchemaError) as info:
        io.parse_element(_load(fixtures_dir, "invalid/a2_not_symmetric.json"), quiver, torus)
    assert info.value.path == "element"
    bad_coeff = {"vars": {"q": 1, "z": {"1": 1}}, "terms": [{"coeff": 1, "q": [0], "z": {"1": [0]}}]}
    with pytest.raises(SchemaError) as info:
        io.parse_element(bad_coeff, quiver, torus)
    assert info.value.path == "element.terms[0].coeff"
    wrong_rank = {"vars": {"q": 2, "z": {"1": 1}}, "terms": []}
    with pytest.raises(SchemaError):
        io.parse_element(wrong_rank, quiver, torus)


def test_laurent_terms_only_list_occupied_vertices():
    space = VarSpace(1, ("1", "2"), (1, 0))
    payload = io.serialize_laurent(LaurentPoly.monomial(space, (2, -1), 7))
    assert payload == {"vars": {"q": 1, "z": {"1": 1, "2": 0}},
                       "terms": [{"coeff": "7", "q": [2], "z": {"1": [-1]}}]}
    assert io.parse_laurent(payload, ("1", "2")) == LaurentPoly.monomial(space, (2, -1), 7)


def test_large_coefficients_survive_as_strings():
    space = VarSpace(0, ("1",), (1,))
    big = 10 ** 30 + 1
    payload = io.serialize_laurent(LaurentPoly.constant(space, big))
    assert payload["terms"][0]["coeff"] == str(big)
    assert io.parse_laurent(io.loads(io.dumps(payload)), ("1",)).coefficient((0,)) == big


def test_weights_and_certificates(fixtures_dir):
    weights = io.parse_weights(_load(fixtures_dir, "weights_11.json"))
    assert weights.weights == ((1,), (1,))
    assert io.parse_weights({"rank": 2, "weights": [[1, 0]]}).space == VarSpace(2)
    with pytest.raises(SchemaError):
        io.parse_weights({"rank": 1, "weights": [[1, 0]]})
    assert io.parse_cocharacter({"lambda": [-1]}, 1).values == (-1,)
    with pytest.raises(SchemaError):
        io.parse_cocharacter([1, 2], 1)
    assert io.serialize_certificate(Certificate(-2, 1, (2,))) == {"v": -2, "sign": 1, "monomial": [2]}


def test_path_poly_and_weights_round_trip():
    quiver = jordan_quiver()
    poly = io.parse_path_poly({"source": "1", "target": "1", "terms": [{"coeff": 2, "path": ["f", "f"]}]}, quiver)
    assert io.parse_path_poly(io.serialize_path_poly(poly), quiver) == poly
    with pytest.raises(SchemaError):
        io.parse_path_poly({"source": "1", "target": "1", "terms": [{"coeff": 1, "path": ["g"]}]}, quiver)
    weights = io.parse_weights({"vars": {"q": 1, "z": {"1": 1}}, "weights": [[1, -1]]})
    assert io.parse_weights(io.serialize_weights(weights)) == weights


def test_rational_function_round_trip():
    space = VarSpace(1, ("z",), (1,))
    value = io.parse_rational_function({
        "numerator": io.serialize_laurent(1 - LaurentPoly.monomial(space, (-1, -1))),
        "denominator": io.serialize_laurent(1 - LaurentPoly.monomial(space, (0, -1))),
    }, ("z",))
    assert io.parse_rational_function(io.serialize_rational(value), ("z",)) == value
    zero = io.serialize_laurent(LaurentPoly.zero(space))
    with pytest.raises(SchemaError):
        io.parse_rational_function({"numerator": zero, "denominator": zero}, ("z",))


def _bundle(obj):
    return io.serialize_bundle(*io.parse_bundle(obj))


def _element(obj):
    quiver = jordan_quiver()
    return io.serialize_element(io.parse_element(obj, quiver, unit_torus(quiver)))


def _module(obj):
    quiver = jordan_quiver()
    return io.serialize_module_element(io.parse_module_element(obj, quiver, unit_torus(quiver), DimVector((1,))))


def _relation(obj):
    quiver, _, _ = io.parse_bundle(json.loads((FIXTURES / "q3.json").read_text()))
    return io.serialize_path_poly(io.parse_path_poly(obj, quiver))


ROUND_TRIPS = {
    "a2.json": _bundle,
    "jordan.json": _bundle,
    "q3.json": _bundle,
    "jordan_torus.json": lambda obj: io.serialize_torus(io.parse_torus(obj, jordan_quiver())),
    "theta_0.json": lambda obj: io.serialize_stability(io.parse_stability(obj)),
    "theta_12.json": lambda obj: io.serialize_stability(io.parse_stability(obj)),
    "jordan_one.json": _element,
    "jordan_one_squared.json": _element,
    "jordan_vacuum.json": _module,
    "q3_relation_z.json": _relation,
    "weights_11.json": lambda obj: io.serialize_weights(io.parse_weights(obj)),
    "lambda_neg.json": lambda obj: io.serialize_cocharacter(io.parse_cocharacter(obj)),
    "certificate_11_neg.json": lambda obj: io.serialize_certificate(io.parse_certificate(obj)),
}


def test_every_valid_fixture_has_a_round_trip(fixtures_dir):
    assert sorted(p.name for p in fixtures_dir.glob("*.json")) == sorted(ROUND_TRIPS)


@pytest.mark.parametrize("name", sorted(ROUND_TRIPS))
def test_fixture_round_trips_byte_for_byte(fixtures_dir, name):
    text = (fixtures_dir / name).read_text(encoding="utf-8")
    assert io.dumps(ROUND_TRIPS[name](io.loads(text, name))) == text


def test_report_goldens(fixtures_dir):
    quiver = type_a_quiver(2)
    theta = io.parse_stability(_load(fixtures_dir, "theta_12.json"))
    stratification = hn_strata(quiver, theta, DimVector((1, 1)))
    assert io.dumps(reports.strata_report(stratification)) == (fixtures_dir / "reports" / "strata_a2_11.json").read_text()
    report = verify_generation(quiver, theta, DimVector((1, 1)), (-1, 1), 0)
    expected = (fixtures_dir / "reports" / "generation_a2_11_degree0.json").read_text()
    assert io.dumps(reports.generation_report(report, quiver.vertices)) == expected


def test_certificate_schema_errors():
    with pytest.raises(SchemaError) as info:
        io.parse_certificate({"v": 0, "sign": 2, "monomial": []})
    assert info.value.path == "certificate.sign"
    with pytest.raises(SchemaError):
        io.parse_certificate({"v": 0, "sign": 1})
