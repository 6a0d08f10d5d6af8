import itertools
from fractions import Fraction

import pytest

from gbdiv.fixtures import kite, seeded_weights, theta, triangle
from gbdiv.graphs import GraphError
from gbdiv.orientations import EXTERNAL, INTERNAL, Fourientation
from gbdiv.signatures import (
    CIRCUIT,
    COCIRCUIT,
    Atlas,
    Signature,
    acyclicity_certificate,
    atlas_from_signature,
    bby_map,
    is_acyclic,
    is_triangulating_signature,
    reference_signature,
    signature_from_weights,
    signature_of_atlas,
)


def test_signature_validation():
    g = kite()
    with pytest.raises(GraphError):
        Signature(COCIRCUIT, (1, 1, 1), g)  # kite has 6 bonds
    with pytest.raises(GraphError):
        Signature(CIRCUIT, (1, 0, 1), g)
    with pytest.raises(GraphError):
        Signature("bond", (1,) * 6, g)


def test_signature_from_weights_pairs_positively():
    g = kite()
    w = seeded_weights(g, 0)
    for flavor in (CIRCUIT, COCIRCUIT):
        sig = signature_from_weights(g, flavor, w)
        for support in sig.supports:
            chosen = sig.value(support)
            assert sum(Fraction(w[e]) * s for e, s in chosen.items) > 0


def test_signature_from_weights_rejects_orthogonal_weights():
    g = theta()
    with pytest.raises(GraphError, match="support \\[0, 1\\]"):
        signature_from_weights(g, CIRCUIT, [1, 1, 1])
    with pytest.raises(GraphError):
        signature_from_weights(g, CIRCUIT, [1, 1])


def test_flip_changes_exactly_one_entry():
    g = kite()
    sig = reference_signature(g, "b")
    flipped = sig.flip(frozenset({0, 1}))
    diffs = [a != b for a, b in zip(sig.signs, flipped.signs)]
    assert sum(diffs) == 1
    assert flipped.flip(frozenset({0, 1})) == sig
    with pytest.raises(GraphError):
        sig.flip(frozenset({0, 4}))  # not a bond


def test_theta_cyclically_chosen_circuits_are_not_acyclic():
    g = theta()
    sig = Signature(CIRCUIT, (1, -1, 1), g)
    # the three chosen circuits sum to zero, a positive dependency
    total = [0, 0, 0]
    for ss in sig.signed_sets():
        for e, s in ss.items:
            total[e] += s
    assert total == [0, 0, 0]
    assert not is_acyclic(sig)
    assert acyclicity_certificate(sig) is None


def _gordan_dependency(sig, radius=3):
    """Small positive integer combination of chosen sets summing to zero."""
    sets = [dict(ss.items) for ss in sig.signed_sets()]
    m = sig.graph.n_edges
    for lam in itertools.product(range(radius + 1), repeat=len(sets)):
        if not any(lam):
            continue
        tot = [0] * m
        for li, ss in zip(lam, sets):
            if li:
                for e, s in ss.items():
                    tot[e] += li * s
        if not any(tot):
            return lam
    return None


def test_acyclicity_certificates_against_dependency_search():
    # exactly one of the two certificates exists (strict separation
    # versus a positive zero combination), and each one checks out
    g = kite()
    for signs in itertools.product((1, -1), repeat=6):
        sig = Signature(COCIRCUIT, signs, g)
        cert = acyclicity_certificate(sig)
        lam = _gordan_dependency(sig)
        if cert is None:
            assert lam is not None
        else:
            assert lam is None
            for ss in sig.signed_sets():
                assert sum(cert[e] * s for e, s in ss.items) > 0


def test_kite_signature_census():
    g = kite()
    acyclic = set()
    triangulating = set()
    for signs in itertools.product((1, -1), repeat=6):
        sig = Signature(COCIRCUIT, signs, g)
        if is_acyclic(sig):
            acyclic.add(signs)
        if is_triangulating_signature(sig):
            triangulating.add(signs)
    assert len(acyclic) == 24
    assert len(triangulating) == 24
    assert acyclic <= triangulating


def test_reference_signature_is_acyclic_and_triangulating():
    for g, q in ((kite(), "b"), (theta(), "u"), (triangle(), "a")):
        ref = reference_signature(g, q)
        assert is_acyclic(ref)
        assert is_triangulating_signature(ref)


def test_reference_signature_orients_bonds_away_from_q():
    g = kite()
    ref = reference_signature(g, "b")
    for (sset, plus_side), chosen in zip(g.bonds(), ref.signed_sets()):
        side = plus_side if chosen == sset else frozenset(g.vertices) - plus_side
        assert "b" not in side


def test_atlas_from_flipped_reference_has_known_arcs():
    g = kite()
    sig = reference_signature(g, "b").flip(frozenset({0, 1}))
    atlas = atlas_from_signature(sig)
    assert atlas.flavor == INTERNAL
    arcs_by_tree = {
        (0, 2, 3): [("t", "r"), ("r", "l"), ("b", "r")],
        (1, 2, 4): [("t", "l"), ("b", "l"), ("l", "r")],
        (0, 2, 4): [("t", "r"), ("l", "r"), ("b", "l")],
        (1, 2, 3): [("b", "r"), ("t", "l"), ("r", "l")],
        (1, 3, 4): [("t", "l"), ("b", "r"), ("b", "l")],
        (0, 3, 4): [("t", "r"), ("b", "r"), ("b", "l")],
        (0, 1, 3): [("b", "r"), ("r", "t"), ("t", "l")],
        (0, 1, 4): [("b", "l"), ("l", "t"), ("t", "r")],
    }
    assert len(atlas.bases) == 8
    for base in atlas.bases:
        arcs = arcs_by_tree[base.tree.edge_indices]
        want = Fourientation.from_arcs(
            g, arcs, bioriented=base.tree.external_indices
        )
        assert base.four == want


def test_atlas_validation():
    g = kite()
    atlas = atlas_from_signature(reference_signature(g, "b"))
    with pytest.raises(GraphError, match="every spanning tree"):
        Atlas(atlas.flavor, atlas.bases[:-1], g)
    with pytest.raises(GraphError, match="sorted"):
        Atlas(atlas.flavor, atlas.bases[::-1], g)
    with pytest.raises(GraphError):
        Atlas(atlas.flavor, (atlas.bases[0],) * len(atlas.bases), g)


def test_signature_atlas_roundtrip_and_injectivity():
    g = kite()
    atlases = {}
    for signs in itertools.product((1, -1), repeat=6):
        sig = Signature(COCIRCUIT, signs, g)
        if not is_triangulating_signature(sig):
            continue
        atlas = atlas_from_signature(sig)
        assert signature_of_atlas(atlas) == sig
        key = tuple(b.four.encoding for b in atlas.bases)
        assert key not in atlases
        atlases[key] = sig
    assert len(atlases) == 24


def test_signature_of_mixed_atlas_is_none():
    g = kite()
    ref = reference_signature(g, "b")
    neg = Signature(COCIRCUIT, tuple(-s for s in ref.signs), g)
    a = atlas_from_signature(ref)
    b = atlas_from_signature(neg)
    mixed = Atlas(a.flavor, (b.bases[0],) + a.bases[1:], g)
    assert signature_of_atlas(mixed) is None


def test_bby_map_is_a_bijection_onto_classes():
    g = kite()
    ext = atlas_from_signature(
        signature_from_weights(g, CIRCUIT, seeded_weights(g, 0))
    )
    itl = atlas_from_signature(reference_signature(g, "b"))
    assert ext.flavor == EXTERNAL
    mapping = bby_map(ext, itl)
    assert len(mapping) == g.spanning_tree_count()
    assert len(set(mapping.values())) == g.spanning_tree_count()
    # overlay orientations have divisor degree g - 1
    for cls in mapping.values():
        assert cls.degree == g.genus - 1
    with pytest.raises(GraphError):
        bby_map(itl, ext)


def test_signature_json_shape():
    g = theta()
    obj = reference_signature(g, "u").to_json_obj()
    assert len(obj) == 1
    assert sorted(obj[0]) == ["signs", "support"]
