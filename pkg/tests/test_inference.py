import itertools

import numpy as np
import pytest

from bnexplain import (
    ExactEngine,
    ImpossibleEvidenceError,
    conditional_mutual_information,
    event_probability,
    interventional_probability,
    joint_probability,
    mpe,
    oracle_conditional_mutual_information,
    oracle_event_probability,
    oracle_mpe,
    query_distribution,
)


def test_joint_probability_drug(drug):
    assert joint_probability(drug, {"Sex": "m", "Drug": "yes", "Recovery": "rec"}) == \
        pytest.approx(0.5 * 0.75 * 0.6, abs=1e-15)
    total = 0.0
    for s, d, r in itertools.product(("m", "f"), ("yes", "no"), ("rec", "norec")):
        total += joint_probability(drug, {"Sex": s, "Drug": d, "Recovery": r})
    assert total == pytest.approx(1.0, abs=1e-12)


def test_joint_probability_zero_entry(asia):
    # TbOrCa is a deterministic OR, so an inconsistent assignment has a zero factor
    full = {"VisitAsia": "no", "Smoker": "no", "Tuberculosis": "yes",
            "LungCancer": "no", "Bronchitis": "no", "TbOrCa": "no",
            "X-ray": "normal", "Dyspnea": "no"}
    assert joint_probability(asia, full) == 0.0


def test_joint_probability_requires_full_assignment(drug):
    with pytest.raises(ValueError, match="unbound"):
        joint_probability(drug, {"Sex": "m"})


def test_event_probability_drug(drug):
    assert event_probability(drug, {"Recovery": "rec"}) == pytest.approx(0.45, abs=1e-12)
    assert event_probability(drug, {"Recovery": "rec"}, {"Drug": "yes"}) == \
        pytest.approx(0.5, abs=1e-12)
    # self-conditioning is a no-op
    assert event_probability(drug, {"Sex": "m"}, {"Sex": "m"}) == pytest.approx(1.0, abs=1e-12)


def test_event_probability_conflicting_bindings(drug):
    with pytest.raises(ValueError, match="conflicting"):
        event_probability(drug, {"Sex": "m"}, {"Sex": "f"})


def test_impossible_conditioning_raises(asia):
    impossible = {"TbOrCa": "yes", "Tuberculosis": "no", "LungCancer": "no"}
    with pytest.raises(ImpossibleEvidenceError):
        event_probability(asia, {"Dyspnea": "yes"}, impossible)


def test_query_distribution_normalized(asia):
    qr = query_distribution(asia, ("LungCancer", "Bronchitis"), {"Dyspnea": "yes"})
    assert qr.distribution.scope == ("LungCancer", "Bronchitis")
    assert float(qr.distribution.values.sum()) == pytest.approx(1.0, abs=1e-9)
    assert 0.0 < qr.evidence_probability < 1.0


def test_mpe_drug_recovery(drug):
    completion, p = mpe(drug, {"Recovery": "rec"})
    assert completion == {"Sex": "m", "Drug": "yes"}
    assert p == pytest.approx(0.5, abs=1e-9)


def test_mpe_all_evidence(drug):
    completion, p = mpe(drug, {"Sex": "f", "Drug": "no", "Recovery": "norec"})
    assert completion == {}
    assert p == 1.0


def test_mpe_norec_matches_enumeration(drug):
    completion, p = mpe(drug, {"Recovery": "norec"})
    want, want_p = oracle_mpe(drug, {"Recovery": "norec"})
    assert completion == want
    assert p == pytest.approx(want_p, abs=1e-12)


def test_mpe_tie_break_is_declaration_then_state_order():
    from bnexplain import Cpt, Network, Variable
    variables = [Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"))]
    cpts = {"A": Cpt("A", (), ((0.5, 0.5),)), "B": Cpt("B", (), ((0.5, 0.5),))}
    net = Network(variables, cpts)
    completion, p = mpe(net, {})
    assert completion == {"A": "a0", "B": "b0"}
    assert p == pytest.approx(0.25, abs=1e-12)


def test_mpe_matches_oracle_on_corpus(random_corpus):
    rng = np.random.default_rng(11)
    for net in random_corpus[:12]:
        names = [v.name for v in net.variables]
        k = int(rng.integers(1, len(names)))
        observed = {v: net.domain(v)[int(rng.integers(2))]
                    for v in rng.choice(names, size=k, replace=False)}
        got, got_p = mpe(net, observed)
        want, want_p = oracle_mpe(net, observed)
        assert got == want
        assert got_p == pytest.approx(want_p, abs=1e-9)


def test_cmi_drug_values(drug):
    got = conditional_mutual_information(drug, "Sex", "Drug")
    assert got == pytest.approx(oracle_conditional_mutual_information(drug, "Sex", "Drug"), abs=1e-9)
    assert got == pytest.approx(0.18872, abs=2e-5)
    posterior = conditional_mutual_information(drug, "Sex", "Drug", {"Recovery": "rec"})
    assert posterior == pytest.approx(
        oracle_conditional_mutual_information(drug, "Sex", "Drug", {"Recovery": "rec"}), abs=1e-9
    )
    assert posterior == pytest.approx(0.18804, abs=5e-5)


def test_cmi_zero_for_dseparated_roots(asia):
    assert abs(conditional_mutual_information(asia, "VisitAsia", "Smoker")) < 1e-12


def test_cmi_symmetry_and_nonnegativity(random_corpus):
    rng = np.random.default_rng(23)
    for net in random_corpus[:10]:
        names = [v.name for v in net.variables]
        x, y = (str(v) for v in rng.choice(names, size=2, replace=False))
        rest = [v for v in names if v not in (x, y)]
        context = {}
        if rest and rng.random() < 0.7:
            c = str(rng.choice(rest))
            context[c] = net.domain(c)[int(rng.integers(2))]
        a = conditional_mutual_information(net, x, y, context)
        b = conditional_mutual_information(net, y, x, context)
        assert abs(a - b) < 1e-9
        assert a >= -1e-12


def test_engine_matches_oracle_on_random_queries(random_corpus):
    rng = np.random.default_rng(31)
    for net in random_corpus[:10]:
        names = [v.name for v in net.variables]
        for _ in range(5):
            picked = list(rng.choice(names, size=min(3, len(names)), replace=False))
            event = {picked[0]: net.domain(picked[0])[int(rng.integers(2))]}
            given = {v: net.domain(v)[int(rng.integers(2))] for v in picked[1:]}
            got = event_probability(net, event, given)
            want = oracle_event_probability(net, event, given)
            assert got == pytest.approx(want, abs=1e-9)


def test_engine_matches_oracle_on_mixed_cardinality_networks():
    from bnexplain import (
        conditional_mutual_information as cmi,
        flow_to_state,
        oracle_conditional_mutual_information,
        oracle_flow_to_state,
        oracle_interventional_probability,
    )

    from conftest import make_random_network

    rng = np.random.default_rng(97)
    for i in range(6):
        net = make_random_network(rng, 5 + (i % 3), name=f"mixed{i}", max_states=4)
        names = [v.name for v in net.variables]
        for _ in range(4):
            picked = [str(v) for v in rng.choice(names, size=4, replace=False)]
            state = lambda v: net.domain(v)[int(rng.integers(len(net.domain(v))))]
            event, given = {picked[0]: state(picked[0])}, {picked[1]: state(picked[1])}
            do = {picked[2]: state(picked[2])}
            got = interventional_probability(net, event, given, do)
            want = oracle_interventional_probability(net, event, given, do)
            assert got == pytest.approx(want, abs=1e-9)
            context = {picked[3]: state(picked[3])}
            a = cmi(net, picked[0], picked[1], context)
            b = oracle_conditional_mutual_information(net, picked[0], picked[1], context)
            assert a == pytest.approx(b, abs=1e-9)
            f = flow_to_state(net, picked[1], event, {}, do)
            g = oracle_flow_to_state(net, picked[1], event, {}, do)
            assert f == pytest.approx(g, abs=1e-9)


def test_caching_free_engine_reuse(drug):
    # one engine, many queries: results identical to fresh engines
    eng = ExactEngine()
    a = event_probability(drug, {"Recovery": "rec"}, {"Sex": "m"}, engine=eng)
    b = event_probability(drug, {"Recovery": "rec"}, {"Sex": "m"}, engine=eng)
    c = event_probability(drug, {"Recovery": "rec"}, {"Sex": "m"})
    assert a == b == c
    assert eng.calls == 4  # two queries per conditional probability


def test_no_intervention_consistency(drug):
    a = interventional_probability(drug, {"Recovery": "rec"})
    b = event_probability(drug, {"Recovery": "rec"})
    assert a == b
