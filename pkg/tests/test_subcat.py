import itertools

import pytest
from hypothesis import given, settings, strategies as st

from icetors import reps as R
from icetors.errors import PreconditionError
from icetors.subcat import Fac, Subcat, calculus, ice_closed_subcats, wide_subcats


def S(cat, labels):
    return Subcat.of(cat, labels)


def test_torsion_examples(a3):
    assert S(a3, "2,21,32,3,321").is_torsion_class()
    assert not S(a3, "21").is_torsion_class()
    assert Subcat.empty(a3).is_torsion_class() and Subcat.full(a3).is_torsion_class()


def test_ice_examples(a3, lam):
    assert S(a3, "3,321").is_ice_closed()
    assert S(lam, "3").is_ice_closed()
    full = Subcat.full(a3)
    assert full.is_image_closed() and full.is_kernel_closed() and full.is_cokernel_closed()


def test_single_brick_is_ice_closed(a3):
    # End(32) is the field and Ext^1(32, 32) = 0, so every map inside add(32)
    # is a split one and {32} is closed under images, cokernels and extensions
    assert a3.hom_table[a3.index("32")][a3.index("32")] == 1
    assert a3.ext_table[a3.index("32")][a3.index("32")] == 0
    assert S(a3, "32").is_ice_closed()
    assert S(a3, "32").is_wide()


def test_wide_examples(a3):
    assert S(a3, "21,3,321").is_wide()
    assert not S(a3, "2,21").is_wide()
    assert Subcat.empty(a3).is_wide()


def test_torsion_in_wide(a3):
    W = S(a3, "21,3,321")
    assert S(a3, "3,321").torsion_in_wide(W)
    assert W.torsion_in_wide(W)
    assert not S(a3, "321").torsion_in_wide(W)
    with pytest.raises(PreconditionError):
        S(a3, "3").torsion_in_wide(S(a3, "2,21"))


def test_alpha_examples(a3, lam):
    assert sorted(S(a3, "2,21,32,3,321").alpha().labels) == ["21", "3", "321"]
    assert sorted(S(lam, "2,21,32,3").alpha().labels) == ["21", "3"]
    with pytest.raises(PreconditionError):
        S(a3, "1,32").alpha()


def test_counts(a3, lam):
    # type A_3: large Schroeder number 22 of ICE-closed, Catalan number 14 of wide
    assert len(ice_closed_subcats(a3)) == 22
    assert len(wide_subcats(a3)) == 14
    assert len(ice_closed_subcats(lam)) == 16
    assert len(wide_subcats(lam)) == 12


def test_perps(a3):
    assert sorted(S(a3, "1").perp_right().labels) == ["2", "3", "32"]
    assert sorted(S(a3, "3").perp_left().labels) == ["1", "2", "21"]


def brute_fac(cat, mask):
    # X is a quotient of a sum of members iff the trace of the sum of members in X is X
    reps = cat.reps_of(mask)
    out = 0
    for i, X in enumerate(cat.members):
        if reps and R.trace_dims(reps, X) == X.dims:
            out |= 1 << i
    return out


def brute_is_image_closed(cat, mask):
    # every image of a map between single members stays inside
    idx = cat.indices(mask)
    for i, j in itertools.product(idx, repeat=2):
        for f in R.all_morphisms(cat.members[i], cat.members[j], skip_zero=True):
            im, _, _ = R.image_of(f)
            if cat.support_mask(im) & ~mask:
                return False
    return True


@settings(max_examples=64, deadline=None)
@given(st.integers(0, 63))
def test_fac_matches_trace_oracle(mask):
    from icetors.catalog import enumerate_indecomposables
    from icetors.quiver import builtin
    cat = enumerate_indecomposables(builtin("lineA:3"))
    assert calculus(cat).fac(mask) == brute_fac(cat, mask)


def test_image_closed_implies_single_map_oracle(a3):
    calc = calculus(a3)
    for m in range(a3.full_mask + 1):
        if calc.is_image_closed(m):
            assert brute_is_image_closed(a3, m)


def mask_strategy():
    return st.integers(0, 63)


@settings(max_examples=60, deadline=None)
@given(mask_strategy(), mask_strategy())
def test_closure_operator_laws(m1, m2):
    from icetors.catalog import enumerate_indecomposables
    from icetors.quiver import builtin
    calc = calculus(enumerate_indecomposables(builtin("lineA:3")))
    for close in (calc.fac, calc.ext_closure):
        c1 = close(m1)
        assert c1 & m1 == m1
        assert close(c1) == c1
        if m1 & m2 == m1:
            assert close(m1) & close(m2) == close(m1)


def test_alpha_laws_everywhere(a3, lam):
    for cat in (a3, lam):
        calc = calculus(cat)
        for m in ice_closed_subcats(cat):
            a = calc.alpha(m)
            assert a & ~m == 0
            assert calc.is_wide(a)


def test_summand_bound_is_stable(a3, lam):
    # raising the summand bound of the record tables changes nothing
    for cat in (a3, lam):
        c2, c3 = calculus(cat, 2), calculus(cat, 3)
        for m in range(cat.full_mask + 1):
            assert c2.is_ext_closed(m) == c3.is_ext_closed(m)
            assert c2.is_ice_closed(m) == c3.is_ice_closed(m)
            assert c2.is_wide(m) == c3.is_wide(m)


def test_fac_helper(a3):
    assert sorted(Fac(a3, "2,21,321").labels) == sorted(["2", "21", "321", "3", "32"])
