import itertools

import pytest
from hypothesis import given, settings, strategies as st

import icetors.complexes as Cx
from icetors.catalog import enumerate_indecomposables
from icetors.derived import (
    WindowedAisle, brute_preaisle_scan, coaisle, coaisle_remark_search, heart_cohomology, intermediate_count,
    labelled, mu, right_approximation, stalk, stalk_sum, theta, tilted_scenario, triangle_problems,
    verify_ice_aisles, verify_t_structure,
)
from icetors.errors import FalsificationError, UnsupportedAlgebraError, WindowTooSmallError
from icetors.iceseq import IceSequence, ice_sequences
from icetors.quiver import builtin
from icetors.reps import ext1_dim, hom_dim

A3 = enumerate_indecomposables(builtin("lineA:3"))


def formula(cat, m, i, n, j):
    # Hom(M[i], N[j]) over a hereditary algebra
    M, N = cat.members[m], cat.members[n]
    if i == j:
        return hom_dim(M, N)
    if j == i + 1:
        return ext1_dim(M, N)
    return 0


def test_homspace_matches_formula_a2(a2):
    for m, n in itertools.product(range(len(a2)), repeat=2):
        for i, j in itertools.product((-1, 0, 1), repeat=2):
            H = Cx.HomSpace(stalk(a2, m, -i), stalk(a2, n, -j))
            assert H.dim == formula(a2, m, i, n, j) == Cx.derived_hom_dim(a2, m, i, n, j)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(-1, 1), st.integers(-1, 1))
def test_homspace_matches_formula_a3(m, n, i, j):
    H = Cx.HomSpace(stalk(A3, m, -i), stalk(A3, n, -j))
    assert H.dim == formula(A3, m, i, n, j)


def euler(cat, X):
    total = 0
    for k, c in Cx.cohomology(X, cat).items():
        total += (-1) ** k * sum(cat.members[i].total_dim * mult for i, mult in c.items())
    return total


def term_euler(X):
    return sum((-1) ** k * X.term(k).total_dim for k in X.degrees())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(-2, 1)), min_size=1, max_size=3))
def test_cone_euler_characteristic(items):
    X = stalk_sum(A3, items)
    Y = stalk_sum(A3, list(reversed(items)))
    H = Cx.HomSpace(X, Y)
    f = H.basis[0] if H.basis else Cx.HomSpace(X, X).basis[0]
    C, _, _ = Cx.mapping_cone(f)
    assert term_euler(C) == term_euler(f.target) - term_euler(f.source)
    assert euler(A3, C) == term_euler(C)


def test_cone_of_identity_is_acyclic(a3):
    X = stalk_sum(a3, [(a3.index("21"), 0), (a3.index("3"), -1)])
    C, _, _ = Cx.mapping_cone(Cx.identity_map(X))
    assert Cx.cohomology(C, a3) == {}
    assert Cx.minimize(C, track=False)[0].is_zero()


def test_cone_of_zero_map(a3):
    X, Y = stalk(a3, a3.index("1"), 0), stalk(a3, a3.index("32"), 0)
    zero = Cx.ChainMap(X, Y, {})
    C, _, _ = Cx.mapping_cone(zero)
    assert labelled(a3, Cx.cohomology(C, a3)) == {-1: {"1": 1}, 0: {"32": 1}}


def test_cone_of_monomorphism(a3):
    f = Cx.HomSpace(stalk(a3, a3.index("1"), 0), stalk(a3, a3.index("21"), 0)).basis[0]
    C, _, _ = Cx.mapping_cone(f)
    assert labelled(a3, Cx.cohomology(C, a3)) == {0: {"2": 1}}


def test_minimize_is_homotopy_equivalence(a3):
    f = Cx.HomSpace(stalk(a3, a3.index("32"), 0), stalk(a3, a3.index("3"), 0)).basis[0]
    C, _, _ = Cx.mapping_cone(f)
    Y, p, s = Cx.minimize(C)
    assert Y.total_rank() < C.total_rank()
    assert p.is_chain_map() and s.is_chain_map()
    pid = p.compose(s)
    assert Cx.HomSpace(Y, Y).is_null_homotopic(pid + Cx.identity_map(Y).scale(-1))
    assert Cx.cohomology(Y, a3) == Cx.cohomology(C, a3)


def test_non_hereditary_rejected(lam):
    with pytest.raises(UnsupportedAlgebraError):
        stalk(lam, 0, 0)
    with pytest.raises(UnsupportedAlgebraError):
        verify_t_structure(WindowedAisle.standard(lam, 0))


def test_theta_of_first_sequence(a3):
    seq = IceSequence.from_labels(a3, 1, ["2,21,32,3,321", "3,321"])
    U = theta(seq)
    assert U.lo == -2
    assert a3.labels_of(U.layer(0)) == ["3", "321"]
    assert sorted(a3.labels_of(U.layer(-1))) == ["2", "21", "3", "32", "321"]
    assert U.layer(-2) == a3.full_mask and U.layer(1) == 0
    assert mu(U).values == seq.values


def test_theta_mu_roundtrip(a3):
    for n in (1, 2):
        for seq in ice_sequences(a3, n):
            assert mu(theta(seq)).values == seq.values


def test_aisle_json_and_dot(a3):
    U = WindowedAisle.from_layers(a3, -2, {-1: "2,21,32,3,321", 0: "3,321"})
    js = U.to_json()
    assert js["window"] == [-2, 0] and js["layers"]["0"] == ["3", "321"]
    dot = U.to_dot()
    assert dot == U.to_dot() and "red" in dot
    assert U == theta(IceSequence.from_labels(a3, 1, ["2,21,32,3,321", "3,321"]))


def test_coaisle_standard_and_empty(a3):
    std = coaisle(WindowedAisle.standard(a3, -1))
    assert std[0] == 0 and std[1] == a3.full_mask
    # aisle with nothing above degree -1: the coaisle starts one step lower
    U = WindowedAisle(a3, -1, (0,))
    co = coaisle(U)
    assert co[0] == a3.full_mask and co[-1] == 0


def test_coaisle_orthogonality_by_homspace(a3):
    U = WindowedAisle.from_layers(a3, -2, {-1: "2,21,32,3,321", 0: "3,321"})
    co = coaisle(U, (-3, 1))
    for k in range(-2, 1):
        for d in range(-3, 2):
            for m in a3.indices(U.layer(k)):
                for n in a3.indices(co[d]):
                    assert Cx.HomSpace(stalk(a3, m, k), stalk(a3, n, d)).dim == 0


@pytest.mark.parametrize("name,w,count", [("a2", 1, 5), ("a2", 2, 12), ("a2", 3, 22), ("a3", 1, 14)])
def test_brute_preaisle_scan(name, w, count, request):
    cat = request.getfixturevalue(name)
    rep = brute_preaisle_scan(cat, w)
    assert rep["ok"] and rep["survivors"] == count
    assert rep["extra"] == [] and rep["missing"] == []
    assert count == len(ice_sequences(cat, w))


def test_approximation_trivial_cases(a3):
    U = WindowedAisle.standard(a3, -1)
    X = stalk(a3, a3.index("21"), 0)
    tri = right_approximation(X, U)
    assert labelled(a3, tri.coh_u) == {0: {"21": 1}} and tri.coh_v == {}
    X = stalk(a3, a3.index("21"), 1)
    tri = right_approximation(X, U)
    assert tri.coh_u == {} and labelled(a3, tri.coh_v) == {1: {"21": 1}}


def test_approximation_of_32(a3):
    U = WindowedAisle.from_layers(a3, -2, {-1: "2,21,32,3,321", 0: "3,321"})
    tri = right_approximation(stalk(a3, a3.index("32"), 0), U)
    assert labelled(a3, tri.coh_u) == {0: {"321": 1}}
    assert labelled(a3, tri.coh_v) == {-1: {"1": 1}}
    assert triangle_problems(tri, U) == []
    # v is right orthogonal to every stalk of the aisle, checked on chain level
    for k in range(-2, 1):
        for m in a3.indices(U.layer(k)):
            assert Cx.HomSpace(stalk(a3, m, k), tri.v).dim == 0


def test_verify_t_structure(a3):
    U = WindowedAisle.from_layers(a3, -2, {-1: "2,21,32,3,321", 0: "3,321"})
    assert verify_t_structure(U)["ok"]
    bad = WindowedAisle.from_layers(a3, -1, {0: "1,21,321"})
    rep = verify_t_structure(bad, raise_on_fail=False)
    assert not rep["ok"]
    with pytest.raises(FalsificationError):
        verify_t_structure(bad)


def test_intermediate_aisles_are_torsion_classes(a2, a3):
    assert intermediate_count(a2) == 5
    assert intermediate_count(a3) == 14


def test_verify_ice_aisles(a3):
    rep = verify_ice_aisles(a3, 2)
    assert rep["ok"] and rep["aisles"] == 55


def test_heart_cohomology_standard(a3):
    X = stalk_sum(a3, [(a3.index("21"), 0), (a3.index("3"), -1), (a3.index("1"), 1)])
    std = WindowedAisle.standard(a3, -3)
    for k in (-1, 0, 1):
        H = heart_cohomology(X, std, k)
        want = Cx.cohomology(X, a3).get(k)
        assert H == ({0: want} if want else {})


def test_heart_cohomology_window(a3):
    X = stalk(a3, 0, -2)
    with pytest.raises(WindowTooSmallError):
        heart_cohomology(X, WindowedAisle.standard(a3, -1), window=(-1, 1))


@pytest.fixture(scope="module")
def scenario(a3, lam):
    return tilted_scenario(a3, "1,3,32,321", lam)


def test_tilted_heart(scenario):
    assert scenario.to_json()["heart"] == {"1": "1[0]", "2": "32[0]", "3": "2[1]", "21": "321[0]", "32": "3[0]"}


def test_tilted_cohomology_of_21(scenario, a3):
    # 0 -> 1 -> 21 -> 2 -> 0 with 2 torsionfree, and 2[1] is the heart object 3
    tc = scenario.target_cohomology(a3.index("21"))
    assert {k: scenario.target.labels_of(m) for k, m in tc.items()} == {0: ["1"], 1: ["3"]}


def test_coaisle_remark(scenario):
    rep = coaisle_remark_search(scenario, {0: "3", -1: "2,21,32,3"}, -2, expect="3")
    assert rep["ok"]
    assert {"object": "21[1]", "H0": {-1: {"2": 1}}, "H0_target": ["3"]} in [
        {**w, "H0": {k: dict(v) for k, v in w["H0"].items()}} for w in rep["witnesses"]
    ]
