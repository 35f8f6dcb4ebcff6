from collections import Counter

import pytest
from hypothesis import given, strategies as st

from k3torus.errors import EmptyRestriction, NotOnSurface, NotWellFormed, SmoothPoint
from k3torus.wps import (
    Locus,
    WeightedFamily,
    edge_analysis,
    edge_monomials,
    edge_reduced_degree,
    load_catalog,
    singularity_content,
    vertex_on_surface,
    vertex_type,
    well_formed,
)


def labels(points):
    return sorted(p.label for p in points)


@pytest.mark.parametrize(
    "weights, expected",
    [((5, 6, 8, 11), True), ((1, 1, 1, 1), True), ((2, 4, 6, 5), False)],
)
def test_well_formed(weights, expected):
    assert well_formed(WeightedFamily.from_weights(weights, 30)) is expected


def test_vertices_x30(x30):
    assert not vertex_on_surface(x30, 0)
    assert vertex_on_surface(x30, 2)
    assert vertex_type(x30, 2).label == "A7"
    assert vertex_type(x30, 3).label == "A10"
    with pytest.raises(NotOnSurface):
        vertex_type(x30, 0)


def test_weight_one_vertex_never_on_surface():
    for d in range(1, 40):
        assert not vertex_on_surface(WeightedFamily.from_weights((1, 2, 3, 5), d), 0)
    with pytest.raises(SmoothPoint):
        vertex_type(WeightedFamily.from_weights((1, 2, 3, 5), 7), 0)


def test_vertex_types(x50):
    assert vertex_type(x50, 0).label == "A6"
    assert vertex_type(WeightedFamily.from_weights((2, 3, 5, 7), 9), 0).label == "A1"


# (family fixture, edge, monomials on the edge, reduced weights and degree)
def test_edge_x30(x30):
    assert edge_monomials(x30, 1, 2) == [(1, 3), (5, 0)]
    assert edge_reduced_degree(x30, 1, 2) == (3, 4, 12)
    pts = edge_analysis(x30, 1, 2)
    assert labels(pts) == ["A1"]
    assert pts[0].locus == Locus.edge(1, 2, 0)


def test_edge_x50(x50):
    assert edge_reduced_degree(x50, 2, 3) == (2, 5, 10)
    assert labels(edge_analysis(x50, 2, 3)) == ["A4"]
    assert edge_reduced_degree(x50, 1, 2) == (4, 5, 20)
    assert labels(edge_analysis(x50, 1, 2)) == ["A1"]


def test_coprime_edges_are_smooth(x50):
    assert edge_analysis(x50, 0, 1) == []


def test_empty_restriction():
    # no monomial in x2, x3 of degree 7 with weights 2, 4
    with pytest.raises(EmptyRestriction):
        edge_reduced_degree(WeightedFamily.from_weights((1, 3, 2, 4), 7), 2, 3)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("X30", ["A1", "A10", "A7"]),
        ("X36", ["A2", "A3", "A6", "A7"]),
        ("X50", ["A1", "A4", "A6", "A7"]),
    ],
)
def test_content(catalog, name, expected):
    pts = singularity_content(catalog[name])
    assert labels(pts) == expected
    assert sum(p.n for p in pts) == 18


def test_content_loci(x30):
    kinds = {p.label: p.locus.kind for p in singularity_content(x30)}
    assert kinds == {"A1": "edge", "A7": "vertex", "A10": "vertex"}


def test_not_well_formed():
    with pytest.raises(NotWellFormed):
        singularity_content(WeightedFamily.from_weights((2, 4, 6, 5), 30))


def test_types_match_weights(catalog):
    from math import gcd

    for fam in catalog.values():
        for p in singularity_content(fam):
            idx = p.locus.indices
            if p.locus.kind == "vertex":
                assert p.n == fam.weights[idx[0]] - 1
            else:
                assert p.n == gcd(fam.weights[idx[0]], fam.weights[idx[1]]) - 1


@given(st.permutations(range(4)), st.sampled_from(["X30", "X36", "X50"]))
def test_permutation_invariance(perm, name):
    fam = load_catalog()[name]
    permuted = WeightedFamily.from_weights([fam.weights[i] for i in perm], fam.degree)
    assert Counter(labels(singularity_content(permuted))) == Counter(labels(singularity_content(fam)))


def test_catalog_roundtrip(tmp_path, catalog):
    import json

    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"families": [f.to_json() for f in catalog.values()]}))
    assert load_catalog(path) == catalog
