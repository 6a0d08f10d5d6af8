import itertools
import random

import pytest

from gbdiv.breakdiv import (
    TreeCharge,
    all_break_divisors,
    break_divisor,
    certify_complete,
    charge_from_signature,
    external_orientations,
    generalized_break_divisors,
)
from gbdiv.chipfiring import Divisor, linearly_equivalent
from gbdiv.fixtures import kite, theta, triangle
from gbdiv.graphs import GraphError
from gbdiv.orientations import UNORIENTED, Fourientation
from gbdiv.signatures import (
    COCIRCUIT,
    Signature,
    is_triangulating_signature,
    reference_signature,
)

# (t, r, b, l) coordinates throughout
KITE_BREAK_SET = {
    (0, 0, 0, 2),
    (0, 2, 0, 0),
    (0, 1, 0, 1),
    (1, 0, 0, 1),
    (1, 1, 0, 0),
    (0, 0, 1, 1),
    (1, 0, 1, 0),
    (0, 1, 1, 0),
}

KITE_GBD_SET = {
    (-1, 1, 0, 2),
    (0, 2, 0, 0),
    (-1, 2, 0, 1),
    (0, 0, 0, 2),
    (0, 1, 0, 1),
    (-1, 1, 1, 1),
    (0, 0, 1, 1),
    (0, 1, 1, 0),
}


def test_break_divisor_places_chips_at_heads():
    g = kite()
    tree = next(t for t in g.spanning_trees() if t.edge_indices == (0, 2, 3))
    ext = Fourientation.from_string(g, ".>..>")  # tl: t->l, lb: l->b
    assert break_divisor(tree, ext).values == (0, 0, 1, 1)
    with pytest.raises(GraphError):
        break_divisor(tree, Fourientation.from_string(g, ">>..>"))
    with pytest.raises(GraphError):
        break_divisor(tree, Fourientation.from_string(g, ".>..="))


def test_external_orientations_enumerates_all():
    g = kite()
    for tree in g.spanning_trees():
        exts = list(external_orientations(tree))
        assert len(exts) == 2 ** len(tree.external_indices)
        assert len({e.encoding for e in exts}) == len(exts)
        for ext in exts:
            assert all(ext.state(e) == UNORIENTED for e in tree.edge_indices)
            d = break_divisor(tree, ext)
            assert d.degree == g.genus


def test_kite_break_divisors_match_known_set():
    rset = all_break_divisors(kite())
    assert {d.values for d in rset.divisors} == KITE_BREAK_SET
    assert len(rset) == 8
    assert rset.provenance == "break-divisors"


def test_break_divisors_certified_on_small_graphs():
    for g in (triangle(), theta(), kite()):
        rset = all_break_divisors(g)
        result = certify_complete(rset)
        assert result.complete
        assert result.class_count == result.expected == g.spanning_tree_count()


def test_zero_charge_reproduces_break_divisors():
    g = kite()
    plain = all_break_divisors(g, certify=False)
    shifted = generalized_break_divisors(TreeCharge.zero(g))
    assert [d.values for d in shifted.divisors] == [d.values for d in plain.divisors]


def test_reference_signature_charge_is_zero():
    for g, q in ((kite(), "b"), (theta(), "v"), (triangle(), "a")):
        charge = charge_from_signature(reference_signature(g, q), q)
        for tree in g.spanning_trees():
            assert charge.charge(tree).values == (0,) * g.n_vertices


def test_flipped_signature_charge_kite():
    g = kite()
    sig = reference_signature(g, "b").flip(frozenset({0, 1}))
    charge = charge_from_signature(sig, "b")
    want = {
        (0, 1, 3): (0, 0, 0, 0),
        (0, 1, 4): (0, 0, 0, 0),
        (0, 2, 3): (-1, 1, 0, 0),
        (0, 2, 4): (-1, 1, 0, 0),
        (0, 3, 4): (-1, 1, 0, 0),
        (1, 2, 3): (-1, 0, 0, 1),
        (1, 2, 4): (-1, 0, 0, 1),
        (1, 3, 4): (-1, 0, 0, 1),
    }
    for tree in g.spanning_trees():
        got = charge.charge(tree)
        assert got.values == want[tree.edge_indices]
        assert got.degree == 0


def test_generalized_break_divisors_kite_match_known_set():
    g = kite()
    sig = reference_signature(g, "b").flip(frozenset({0, 1}))
    rset = generalized_break_divisors(charge_from_signature(sig, "b"))
    assert {d.values for d in rset.divisors} == KITE_GBD_SET
    result = certify_complete(rset)
    assert result.complete
    assert result.to_json_obj()["classes_hit"] == 8


def test_charge_rejects_wrong_signatures():
    g = kite()
    with pytest.raises(GraphError, match="cocircuit"):
        charge_from_signature(
            Signature("circuit", (1, 1, 1), g), "b"
        )
    bad = next(
        Signature(COCIRCUIT, signs, g)
        for signs in itertools.product((1, -1), repeat=6)
        if not is_triangulating_signature(Signature(COCIRCUIT, signs, g))
    )
    with pytest.raises(GraphError, match="not triangulating"):
        charge_from_signature(bad, "b")
    # check=False skips the guard
    charge_from_signature(bad, "b", check=False)


def test_tree_charge_validation():
    g = theta()
    trees = g.spanning_trees()
    with pytest.raises(GraphError, match="every spanning tree"):
        TreeCharge(g, {trees[0].mask: Divisor.zero(g)}, "partial")
    bad = {t.mask: Divisor.zero(g) for t in trees}
    bad[trees[0].mask] = Divisor((1, 0), g)
    with pytest.raises(GraphError, match="nonzero degree"):
        TreeCharge(g, bad, "unbalanced")


def test_theta_charge_can_cause_collisions():
    # shifting one tree by a multiple of a firing move folds its break
    # divisors onto another tree's, so certification must fail
    g = theta()
    trees = g.spanning_trees()
    values = {t.mask: Divisor.zero(g) for t in trees}
    values[trees[0].mask] = Divisor((3, -3), g)
    rset = generalized_break_divisors(TreeCharge(g, values, "adversarial"))
    result = certify_complete(rset)
    assert not result.complete
    assert result.witness is not None
    w1, w2 = result.witness
    assert linearly_equivalent(w1, w2)
    assert "witness" in result.to_json_obj()


def test_distinct_divisor_count_never_below_tree_count():
    # arbitrary integer charges keep at least one divisor per class
    rng = random.Random(5)
    for g in (theta(), kite()):
        n = g.n_vertices
        for _ in range(40):
            values = {}
            for t in g.spanning_trees():
                vals = [rng.randint(-3, 3) for _ in range(n - 1)]
                vals.append(-sum(vals))
                values[t.mask] = Divisor(tuple(vals), g)
            rset = generalized_break_divisors(TreeCharge(g, values, "random"))
            assert len(rset) >= g.spanning_tree_count()


def test_representative_set_json_shape():
    obj = all_break_divisors(triangle()).to_json_obj()
    assert obj["size"] == 3
    assert sorted(obj) == ["divisors", "provenance", "size"]
