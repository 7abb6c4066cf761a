import networkx as nx
import pytest

from reference_hasse import HASSE_LINE_A3, HASSE_NAKAYAMA
from icetors.errors import PreconditionError
from icetors.lattice import (
    Interval, enumerate_mmi_sequences, enumerate_tors, hasse_dot, hasse_graph, interval_tors_iso_check,
    is_meet_interval, is_wide_interval, star, tors_of, wide_intervals,
)
from icetors.subcat import calculus


def brute_tors(cat):
    calc = calculus(cat)
    return sorted(m for m in range(cat.full_mask + 1) if calc.is_torsion_class(m))


def brute_covers(elements):
    below = {(a, b) for a in elements for b in elements if a != b and b & ~a == 0}
    return {(a, b) for a, b in below
            if not any((a, c) in below and (c, b) in below for c in elements)}


@pytest.mark.parametrize("name,count", [("a3", 14), ("lam", 12), ("a2", 5)])
def test_counts_against_predicate_scan(name, count, request):
    cat = request.getfixturevalue(name)
    lat = enumerate_tors(cat)
    assert len(lat) == count
    assert sorted(lat.elements) == brute_tors(cat)


def test_generate_and_scan_strategies_agree(a3, lam):
    for cat in (a3, lam):
        assert sorted(tors_of(cat, strategy="scan").elements) == sorted(tors_of(cat, strategy="generate").elements)


def test_covers_match_brute_force(a3, lam):
    for cat in (a3, lam):
        lat = enumerate_tors(cat)
        got = {(lat.elements[i], lat.elements[j]) for i, j in lat.covers}
        assert got == brute_covers(lat.elements)


@pytest.mark.parametrize("name,edges", [("a3", HASSE_LINE_A3), ("lam", HASSE_NAKAYAMA)])
def test_hasse_isomorphic_to_reference(name, edges, request):
    lat = enumerate_tors(request.getfixturevalue(name))
    ref = nx.DiGraph(edges)
    assert ref.number_of_nodes() == len(lat)
    assert nx.is_isomorphic(hasse_graph(lat), ref)


def test_nakayama_named_nodes(lam):
    # a few nodes named by their modules
    lat = enumerate_tors(lam)
    for labels in ("1,32,3", "2,21,3,32", "32,3", "2,3,32"):
        assert lam.mask(labels) in lat


def test_t_minus_is_meet_of_lower_covers(a3, lam):
    for cat in (a3, lam):
        lat = enumerate_tors(cat)
        covers = brute_covers(lat.elements)
        for T in lat.elements:
            want = T
            for a, b in covers:
                if a == T:
                    want &= b
            assert lat.t_minus(T) == want


def test_t_minus_example(a3):
    lat = enumerate_tors(a3)
    assert a3.labels_of(lat.t_minus(a3.mask("2,21,32,3,321"))) == ["2"]
    assert lat.t_minus(0) == 0


def test_wide_iff_meet(a3, lam):
    for cat in (a3, lam):
        lat = enumerate_tors(cat)
        for lo in lat.elements:
            for up in lat.elements:
                if lo & ~up == 0:
                    I = Interval(cat, lo, up)
                    assert is_wide_interval(I) == is_meet_interval(I, lat)


def test_interval_iso_everywhere(a3, lam):
    sizes = []
    for cat in (a3, lam):
        lat = enumerate_tors(cat)
        wides = wide_intervals(lat)
        sizes.append(len(wides))
        for W in wides:
            assert interval_tors_iso_check(W, lat)["ok"]
    assert sizes == [45, 39]


def test_interval_iso_rejects_non_wide(a3):
    lat = enumerate_tors(a3)
    I = Interval(a3, 0, a3.mask("1,21"))
    assert not is_wide_interval(I)
    with pytest.raises(PreconditionError):
        interval_tors_iso_check(I, lat)


def test_star_inverse_example(a3):
    # U = Fac(2) and D = {32, 3, 321} inside the heart of [U, full]
    U = a3.mask("2")
    assert star(a3, U, a3.mask("3,32,321")) == a3.mask("2,3,32,321")


def test_mmi_counts(a3, lam):
    assert [len(enumerate_mmi_sequences(enumerate_tors(a3), n)) for n in (1, 2, 3)] == [14, 55, 140]
    assert [len(enumerate_mmi_sequences(enumerate_tors(lam), n)) for n in (1, 2, 3)] == [12, 45, 112]


def test_hasse_dot_is_deterministic(a2):
    lat = enumerate_tors(a2)
    dot = hasse_dot(lat)
    assert dot == hasse_dot(enumerate_tors(a2))
    assert dot.splitlines()[1] == '  n0 [label="0"];'
    assert dot.endswith("}\n")


def test_json_export(a3):
    js = enumerate_tors(a3).to_json()
    assert len(js["elements"]) == 14 and len(js["covers"]) == 21
