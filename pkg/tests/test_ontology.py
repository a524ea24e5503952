from fractions import Fraction
from itertools import product

import pytest

import oracle
from pbrcheck.cabbolet import build_cabbolet_model, build_cabbolet_pair_model
from pbrcheck.ontology import (
    TOL_PROB,
    EpistemicState,
    OnticSpace,
    OntologicalModel,
    ResponseFunction,
    SpaceMismatchError,
    UnknownLabelError,
    classify,
    fraction_in_region,
    marginal,
    outcome_region,
    predicted_probability,
    product_model,
    support,
    supports_overlap,
    validate_against_quantum,
)
from pbrcheck.pbr import SINGLE_PREPARATIONS
from pbrcheck.qlinalg import MINUS, ONE, PLUS, ZERO, born_probability

SPACE = OnticSpace(["0+", "0-", "1+", "1-"])

QUANTUM_TARGETS = [
    (p, m, out, born_probability(vec, SINGLE_PREPARATIONS[p]))
    for p in ("0", "+")
    for m, outs in (("A", (("0", ZERO), ("1", ONE))), ("B", (("+", PLUS), ("-", MINUS))))
    for out, vec in outs
]


def test_space_validation():
    with pytest.raises(ValueError):
        OnticSpace([])
    with pytest.raises(ValueError):
        OnticSpace(["a", "a"])


def test_epistemic_validation():
    with pytest.raises(ValueError):
        EpistemicState(SPACE, {"0+": 0.5})
    with pytest.raises(ValueError):
        EpistemicState(SPACE, {"0+": 1.5, "0-": -0.5})
    with pytest.raises(UnknownLabelError):
        EpistemicState(SPACE, {"zz": 1.0})


def test_response_validation():
    with pytest.raises(ValueError):
        ResponseFunction("A", ("0", "1"), {"0+": (0.5, 0.6)})
    with pytest.raises(ValueError):
        ResponseFunction("A", ("0", "1"), {"0+": (1.0,)})
    r = ResponseFunction("A", ("0", "1"), {"x": (0.5, 0.5)})
    assert not r.is_deterministic()


def test_model_rejects_foreign_space():
    other = OnticSpace(["x"])
    with pytest.raises(SpaceMismatchError):
        OntologicalModel(SPACE, {"p": EpistemicState.point(other, "x")}, {})


def test_predicted_probability_examples():
    m = build_cabbolet_model()
    assert predicted_probability(m, "0", "B", "+") == 0.5
    assert predicted_probability(m, "+", "A", "1") == 0.5
    assert predicted_probability(m, "0", "A", "0") == 1
    with pytest.raises(UnknownLabelError):
        predicted_probability(m, "1", "A", "0")
    with pytest.raises(UnknownLabelError):
        predicted_probability(m, "0", "C", "0")
    with pytest.raises(UnknownLabelError):
        predicted_probability(m, "0", "A", "+")


def test_predictions_match_hand_enumeration():
    m = build_cabbolet_model()
    for p, meas in product(("0", "+"), ("A", "B")):
        for out in m.measurement(meas).outcomes:
            exact = sum(w for lam, w in oracle.MU[p].items() if oracle.answer(lam, meas) == out)
            assert predicted_probability(m, p, meas, out) == float(Fraction(exact))


def test_support_examples():
    m = build_cabbolet_model()
    assert support(m.preparation("0")) == {"0+", "0-"}
    assert support(EpistemicState.point(SPACE, "0+")) == {"0+"}
    assert support(EpistemicState.uniform(SPACE)) == set(SPACE)
    assert support(EpistemicState(SPACE, {"0+": 1 - 1e-16, "0-": 1e-16})) == {"0+"}


def test_overlap_examples():
    m = build_cabbolet_model()
    assert supports_overlap(m.preparation("0"), m.preparation("+")) == {"0+"}
    a, b = EpistemicState.point(SPACE, "0+"), EpistemicState.point(SPACE, "1-")
    assert supports_overlap(a, b) == set()
    e = m.preparation("+")
    assert supports_overlap(e, e) == support(e)
    with pytest.raises(SpaceMismatchError):
        supports_overlap(a, EpistemicState.point(OnticSpace(["x"]), "x"))


def test_overlap_symmetric():
    m = build_cabbolet_model()
    for p, q in product(m.preparations, repeat=2):
        assert supports_overlap(m.preparation(p), m.preparation(q)) == supports_overlap(
            m.preparation(q), m.preparation(p)
        )


def test_classification():
    assert classify(build_cabbolet_model()) == "psi-epistemic"
    disjoint = OntologicalModel(
        SPACE, {"0": EpistemicState.point(SPACE, "0-"), "+": EpistemicState.point(SPACE, "1+")}, {}
    )
    assert classify(disjoint) == "psi-ontic"


def test_product_weights_exhaustive():
    m = build_cabbolet_model()
    pm = product_model(m, m)
    assert len(pm.space) == 16
    for p, q in product(m.preparations, repeat=2):
        mu = pm.preparation((p, q))
        for l1, l2 in product(m.space, repeat=2):
            assert mu[(l1, l2)] == m.preparation(p)[l1] * m.preparation(q)[l2]
            assert mu[(l1, l2)] == float(oracle.pair_weight(p, q, l1, l2))
    assert pm.preparation(("0", "+"))[("0+", "0+")] == 0.25


def test_product_of_points_is_point():
    single = OntologicalModel(SPACE, {"a": EpistemicState.point(SPACE, "1-")}, {})
    pm = product_model(single, single)
    assert support(pm.preparation(("a", "a"))) == {("1-", "1-")}
    assert pm.preparation(("a", "a"))[("1-", "1-")] == 1


def test_product_marginals():
    m = build_cabbolet_model()
    pm = product_model(m, m)
    for p, q in product(m.preparations, repeat=2):
        first = marginal(pm.preparation((p, q)), 0, m.space)
        second = marginal(pm.preparation((p, q)), 1, m.space)
        assert dict(first.weights) == dict(m.preparation(p).weights)
        assert dict(second.weights) == dict(m.preparation(q).weights)


def test_lifted_measurements():
    pm = build_cabbolet_pair_model()
    assert set(pm.measurements) == {"A⊗id", "B⊗id", "id⊗A", "id⊗B"}
    assert pm.measurement("id⊗B").outcome_at(("0+", "1-")) == "-"
    assert pm.measurement("A⊗id").outcome_at(("1+", "0-")) == "1"
    assert predicted_probability(pm, ("0", "+"), "id⊗A", "1") == 0.5


def test_normalization_all_pairs():
    for m in (build_cabbolet_model(), build_cabbolet_pair_model()):
        for p, meas in product(m.preparations, m.measurements):
            outs = m.measurement(meas).outcomes
            total = sum(predicted_probability(m, p, meas, k) for k in outs)
            assert abs(total - 1) <= len(outs) * TOL_PROB


def test_deterministic_prediction_equals_region_fraction():
    for m in (build_cabbolet_model(), build_cabbolet_pair_model()):
        assert m.is_outcome_deterministic()
        for p, meas in product(m.preparations, m.measurements):
            for k in m.measurement(meas).outcomes:
                assert predicted_probability(m, p, meas, k) == fraction_in_region(m, p, outcome_region(m, meas, k))


def test_fraction_in_region():
    pm = build_cabbolet_pair_model()
    for p in pm.preparations:
        assert fraction_in_region(pm, p, {("0+", "0+")}) == 0.25
        assert fraction_in_region(pm, p, pm.space) == 1
        assert fraction_in_region(pm, p, set()) == 0
    with pytest.raises(UnknownLabelError):
        fraction_in_region(pm, ("0", "0"), {"0+"})


def test_validate_cabbolet_passes():
    report = validate_against_quantum(build_cabbolet_model(), QUANTUM_TARGETS, tol=1e-12)
    assert len(report.rows) == 8
    assert report.passed
    assert report.max_error < 1e-12


def test_validate_uniform_fails():
    m = build_cabbolet_model()
    bad = OntologicalModel(m.space, {"0": EpistemicState.uniform(m.space), "+": m.preparation("+")}, m.measurements)
    report = validate_against_quantum(bad, QUANTUM_TARGETS, tol=1e-12)
    assert not report.passed
    row = next(r for r in report.rows if (r.prep, r.meas, r.outcome) == ("0", "A", "0"))
    assert (row.predicted, row.required, row.passed) == (0.5, 1.0, False)


def test_validate_empty():
    assert validate_against_quantum(build_cabbolet_model(), []).passed


def test_json_round_trip_single_and_product():
    for m in (build_cabbolet_model(), build_cabbolet_pair_model()):
        back = OntologicalModel.loads(m.dumps())
        assert back.space == m.space
        assert set(back.preparations) == set(m.preparations)
        for p in m.preparations:
            assert dict(back.preparation(p).weights) == dict(m.preparation(p).weights)
        for k in m.measurements:
            assert dict(back.measurement(k).table) == dict(m.measurement(k).table)


def test_json_schema_shape():
    doc = build_cabbolet_model().to_dict()
    assert doc["space"] == ["0+", "0-", "1+", "1-"]
    assert doc["preparations"]["0"] == {"0+": 0.5, "0-": 0.5}
    assert doc["measurements"]["B"] == {
        "outcomes": ["+", "-"],
        "table": {"0+": [1.0, 0.0], "0-": [0.0, 1.0], "1+": [1.0, 0.0], "1-": [0.0, 1.0]},
    }


def test_json_unknown_label():
    with pytest.raises(UnknownLabelError):
        OntologicalModel.from_dict({"space": ["a"], "preparations": {"p": {"b": 1.0}}, "measurements": {}})
