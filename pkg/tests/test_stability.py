import math
from fractions import Fraction

import pytest

from gbdiv.breakdiv import TreeCharge, charge_from_signature
from gbdiv.chipfiring import Divisor
from gbdiv.fixtures import kite, seeded_weights, theta, triangle
from gbdiv.graphs import GraphError
from gbdiv.signatures import (
    CIRCUIT,
    COCIRCUIT,
    Signature,
    is_acyclic,
    is_triangulating_signature,
    reference_signature,
    signature_from_weights,
)
from gbdiv.stability import (
    Polarization,
    VStability,
    certify_classical,
    chamber_certificate,
    charge_from_vstability,
    cocycle_flip,
    flip_path,
    is_generic,
    phi_pcan,
    vstability_from_charge,
    vstability_from_polarization,
)


def test_polarization_basics():
    g = kite()
    phi = Polarization.from_values(g, ["1/4", "3/4", "1/4", "3/4"])
    assert phi.degree == 2
    assert phi.total(["t", "r"]) == 1
    with pytest.raises(GraphError):
        Polarization.from_values(g, ["1/4", "3/4"])
    with pytest.raises(GraphError):
        Polarization.from_values(g, ["1/3", "1/3", "1/3", "1/3"])


def test_phi_pcan_values():
    assert phi_pcan(kite()).values == (
        Fraction(1, 5),
        Fraction(4, 5),
        Fraction(1, 5),
        Fraction(4, 5),
    )
    assert phi_pcan(triangle()).values == (Fraction(1, 3),) * 3
    assert phi_pcan(theta()).values == (Fraction(1), Fraction(1))
    for g in (kite(), triangle(), theta()):
        assert phi_pcan(g).degree == g.genus
        assert is_generic(phi_pcan(g))


def test_genericity_detects_walls():
    g = kite()
    assert not is_generic(Polarization.from_values(g, [1, 0, 0, 1]))
    assert is_generic(Polarization.from_values(g, ["1/4", "3/4", "1/4", "3/4"]))


def test_vstability_from_polarization_is_ceiling_of_adjusted_total():
    g = kite()
    phi = phi_pcan(g)
    stab = vstability_from_polarization(phi)
    for w in g.biconnected_subsets():
        adjusted = phi.total(w) - Fraction(g.cut_size(w), 2)
        assert stab.n(w) == math.ceil(adjusted)


def test_vstability_from_polarization_rejects_walls():
    g = kite()
    with pytest.raises(GraphError, match="wall"):
        vstability_from_polarization(Polarization.from_values(g, [1, 0, 0, 1]))


def test_pcan_stability_counts_induced_genus():
    for g in (kite(), triangle(), theta()):
        stab = vstability_from_polarization(phi_pcan(g))
        assert stab.degree == g.genus
        for w in g.biconnected_subsets():
            assert stab.n(w) == g.induced_genus(w)


def test_vstability_accessors_and_validation():
    g = kite()
    stab = vstability_from_polarization(phi_pcan(g))
    stab.validate()
    assert stab.n(["t"]) == 0
    with pytest.raises(GraphError, match="nontrivial biconnected"):
        stab.n(["t", "b"])
    mapping = stab.as_dict()
    assert len(mapping) == 12
    again = VStability.from_dict(g, stab.degree, mapping)
    assert again == stab
    del mapping[frozenset({"t"})]
    with pytest.raises(GraphError, match="cover every"):
        VStability.from_dict(g, stab.degree, mapping)


def test_validate_catches_broken_identities():
    g = kite()
    stab = vstability_from_polarization(phi_pcan(g))
    mapping = stab.as_dict()
    mapping[frozenset({"t"})] += 1
    bad = VStability.from_dict(g, stab.degree, mapping)
    with pytest.raises(GraphError, match="complement identity"):
        bad.validate()
    # shift a complement pair together: identity holds, window breaks
    mapping = stab.as_dict()
    mapping[frozenset({"t"})] += 2
    mapping[frozenset({"r", "b", "l"})] -= 2
    worse = VStability.from_dict(g, stab.degree, mapping)
    with pytest.raises(GraphError, match="union window|complement identity"):
        worse.validate()


KITE_REF_STAB = {
    frozenset("t"): 0,
    frozenset("r"): 0,
    frozenset("b"): 0,
    frozenset("l"): 0,
    frozenset(("t", "r")): 0,
    frozenset(("t", "l")): 0,
    frozenset(("b", "r")): 0,
    frozenset(("b", "l")): 0,
    frozenset(("r", "b", "l")): 1,
    frozenset(("t", "r", "l")): 1,
    frozenset(("t", "b", "l")): 0,
    frozenset(("t", "b", "r")): 0,
}


def test_reference_signature_stability_kite():
    g = kite()
    charge = charge_from_signature(reference_signature(g, "b"), "b")
    stab = vstability_from_charge(charge)
    assert stab.degree == 2
    assert stab.as_dict() == KITE_REF_STAB
    # the reference charge vanishes, so this is the plain break stability,
    # which matches the canonical polarization's
    assert stab == vstability_from_polarization(phi_pcan(g))


def test_cocycle_flip_moves_one_complement_pair():
    g = kite()
    ref = reference_signature(g, "b")
    flipped = cocycle_flip(ref, frozenset({0, 1}))
    s0 = vstability_from_charge(charge_from_signature(ref, "b"))
    s1 = vstability_from_charge(charge_from_signature(flipped, "b"))
    assert s1.n(["t"]) == s0.n(["t"]) - 1
    assert s1.n(["r", "b", "l"]) == s0.n(["r", "b", "l"]) + 1
    for w in g.biconnected_subsets():
        if w not in (frozenset({"t"}), frozenset({"r", "b", "l"})):
            assert s1.n(w) == s0.n(w)
    with pytest.raises(GraphError):
        cocycle_flip(Signature(CIRCUIT, (1, 1, 1), g), frozenset({0, 1}))


def test_charge_and_vstability_roundtrip():
    g = kite()
    for sig in (
        reference_signature(g, "b"),
        reference_signature(g, "b").flip(frozenset({0, 1})),
        signature_from_weights(g, COCIRCUIT, seeded_weights(g, 9)),
    ):
        if not is_triangulating_signature(sig):
            continue
        charge = charge_from_signature(sig, "b")
        stab = vstability_from_charge(charge)
        back = charge_from_vstability(stab)
        for tree in g.spanning_trees():
            assert back.charge(tree).values == charge.charge(tree).values
        assert vstability_from_charge(back) == stab


def test_charge_from_vstability_needs_consistent_pairs():
    g = kite()
    stab = vstability_from_polarization(phi_pcan(g))
    mapping = stab.as_dict()
    mapping[frozenset({"t"})] += 1
    bad = VStability.from_dict(g, stab.degree, mapping)
    with pytest.raises(GraphError, match="not a V-stability"):
        charge_from_vstability(bad)


def test_vstability_from_charge_rejects_adversarial_charge():
    g = theta()
    trees = g.spanning_trees()
    values = {t.mask: Divisor.zero(g) for t in trees}
    values[trees[0].mask] = Divisor((3, -3), g)
    charge = TreeCharge(g, values, "adversarial")
    with pytest.raises(GraphError, match="not stability-induced"):
        vstability_from_charge(charge)


def test_certify_classical_reference_kite():
    g = kite()
    cert = certify_classical(reference_signature(g, "b"), "b")
    assert cert.is_classical
    assert cert.slack == Fraction(1, 4)
    assert cert.polarization.values == (
        Fraction(1, 4),
        Fraction(3, 4),
        Fraction(1, 4),
        Fraction(3, 4),
    )
    assert is_generic(cert.polarization)
    assert vstability_from_polarization(cert.polarization) == cert.vstability
    obj = cert.to_json_obj()
    assert obj["classical"] is True


def test_certify_classical_flipped_kite():
    g = kite()
    sig = reference_signature(g, "b").flip(frozenset({0, 1}))
    cert = certify_classical(sig, "b")
    assert cert.is_classical
    assert cert.slack == Fraction(1, 4)
    assert cert.polarization.values == (
        Fraction(-1, 4),
        Fraction(1),
        Fraction(1, 4),
        Fraction(1),
    )


def test_chamber_certificate_reports_empty_chamber():
    # an inconsistent n vector passes construction but has no chamber
    g = kite()
    stab = vstability_from_polarization(phi_pcan(g))
    mapping = stab.as_dict()
    for w in list(mapping):
        mapping[w] = 5
    bad = VStability.from_dict(g, stab.degree, mapping)
    cert = chamber_certificate(bad)
    assert not cert.is_classical
    assert cert.polarization is None
    assert "chamber" in cert.reason
    assert cert.to_json_obj()["classical"] is False


def test_flip_path_adjacent_pair():
    g = kite()
    ref = reference_signature(g, "b")
    goal = ref.flip(frozenset({0, 1}))
    assert flip_path(ref, ref) == []
    path = flip_path(ref, goal)
    assert path == [frozenset({0, 1})]
    assert flip_path(ref, goal, acyclic_only=True) == [frozenset({0, 1})]


def test_flip_path_lands_on_goal_through_triangulating_signatures():
    g = kite()
    start = signature_from_weights(g, COCIRCUIT, seeded_weights(g, 1))
    goal = signature_from_weights(g, COCIRCUIT, seeded_weights(g, 2))
    path = flip_path(start, goal)
    assert path is not None and len(path) >= 1
    cur = start
    for support in path:
        cur = cocycle_flip(cur, support)
        assert is_triangulating_signature(cur)
    assert cur == goal


def test_flip_path_input_checks():
    g = kite()
    ref = reference_signature(g, "b")
    with pytest.raises(GraphError, match="different graphs"):
        flip_path(ref, reference_signature(kite(), "b"))
    with pytest.raises(GraphError, match="cocircuit"):
        flip_path(
            Signature(CIRCUIT, (1, 1, 1), g), Signature(CIRCUIT, (1, 1, 1), g)
        )
    goal = Signature(COCIRCUIT, tuple(-s for s in ref.signs), g)
    with pytest.raises(GraphError, match="budget"):
        flip_path(ref, goal, node_budget=1)


def test_flip_path_rejects_non_triangulating_endpoints():
    import itertools

    g = kite()
    bad = next(
        Signature(COCIRCUIT, signs, g)
        for signs in itertools.product((1, -1), repeat=6)
        if not is_triangulating_signature(Signature(COCIRCUIT, signs, g))
    )
    with pytest.raises(GraphError, match="not admissible"):
        flip_path(bad, reference_signature(g, "b"))


def test_vstability_json_shape():
    g = triangle()
    obj = vstability_from_polarization(phi_pcan(g)).to_json_obj()
    assert obj["degree"] == 1
    assert len(obj["values"]) == 6
    assert all(sorted(entry) == ["n", "subset"] for entry in obj["values"])
