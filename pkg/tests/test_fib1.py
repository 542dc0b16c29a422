"""Fibrations, cleavages, fiber categories and the Grothendieck construction."""

from fractions import Fraction

import pytest

from bicat_euler import fixtures as fx
from bicat_euler.fib1 import (
    IncoherentData,
    LaxFunctorToCat,
    MorphismNotInCategory,
    NotBiFibered,
    NotFibered,
    ObjectNotInBase,
    choose_cleavage,
    classify_fibration,
    fiber_category,
    grothendieck_cat,
    induced_fiber_pseudofunctor,
    is_cartesian_morphism,
    is_strict,
    reverse_functor,
    validate_laxcat,
    verify_gr_formula,
    verify_product_formula_cat,
)
from bicat_euler.fincat import coproduct_cat, euler_char_cat, validate_functor
from bicat_euler.generators import gen_fib_groupoids_functor, gen_groupoid_valued_laxcat


ARROW_TO_PT = validate_functor(
    fx.ARROW, fx.PT, {"0": "*", "1": "*"}, {"id0": "id*", "id1": "id*", "a": "id*"}
)


def test_identity_functor_everything_cartesian():
    ident = fx.identity_functor(fx.BZ2)
    for m in fx.BZ2.morphisms:
        assert is_cartesian_morphism(ident, m.name)


def test_arrow_over_point_not_cartesian():
    assert not is_cartesian_morphism(ARROW_TO_PT, "a")


def test_paper_convention_flag_flips_the_example():
    # under the literal source-material reading, the same morphism passes
    assert is_cartesian_morphism(ARROW_TO_PT, "a", convention="paper")


def test_unknown_morphism_raises():
    with pytest.raises(MorphismNotInCategory):
        is_cartesian_morphism(ARROW_TO_PT, "nope")


def test_grothendieck_projection_morphisms_cartesian():
    gr = grothendieck_cat(fx.BZ2_BASE_LAXCAT)
    for m in gr.total.morphisms:
        assert is_cartesian_morphism(gr.projection, m.name)


def test_classify_ez2_to_bz2_all_flags():
    rep = classify_fibration(fx.EZ2_TO_BZ2)
    assert rep.fibered and rep.cofibered
    assert rep.fibered_in_groupoids and rep.cofibered_in_groupoids


def test_classify_identity_on_bz2():
    rep = classify_fibration(fx.identity_functor(fx.BZ2))
    assert rep.fibered and rep.cofibered and rep.fibered_in_groupoids and rep.cofibered_in_groupoids


def test_classify_d2_into_arrow_not_fibered():
    p = validate_functor(fx.D2, fx.ARROW, {"x": "0", "y": "1"}, {"idx": "id0", "idy": "id1"})
    rep = classify_fibration(p)
    assert not rep.fibered
    assert rep.witnesses.get("no_lift") == ("a", "y") or rep.witnesses.get("no_cartesian_lift")


def test_dualization_involution():
    for p in (fx.EZ2_TO_BZ2, ARROW_TO_PT, fx.identity_functor(fx.SPAN)):
        rep = classify_fibration(p)
        rev = classify_fibration(reverse_functor(p))
        assert rep.cofibered == rev.fibered
        assert rep.cofibered_in_groupoids == rev.fibered_in_groupoids


def test_cleavage_identity_functor_picks_self():
    ident = fx.identity_functor(fx.BZ2)
    c = choose_cleavage(ident)
    for m in fx.BZ2.morphisms:
        assert c.lift(m.name, m.dst) == m.name


def test_cleavage_not_fibered_raises():
    p = validate_functor(fx.D2, fx.ARROW, {"x": "0", "y": "1"}, {"idx": "id0", "idy": "id1"})
    with pytest.raises(NotFibered):
        choose_cleavage(p)


def test_fiber_of_quotient_is_discrete():
    fib = fiber_category(fx.EZ2_TO_BZ2, "*")
    assert fib.objects == ("0", "1")
    assert all(fib.is_identity(m.name) for m in fib.morphisms)


def test_fiber_of_identity_is_point_shaped():
    fib = fiber_category(fx.identity_functor(fx.SPAN), "c")
    assert fib.objects == ("c",)
    assert len(fib.morphisms) == 1


def test_fiber_unknown_object():
    with pytest.raises(ObjectNotInBase):
        fiber_category(fx.EZ2_TO_BZ2, "nope")


def test_grothendieck_fiber_matches_fiber_functor():
    gr = grothendieck_cat(fx.ARROW_BASE_LAXCAT)
    fib0 = fiber_category(gr.projection, "0")
    assert euler_char_cat(fib0).chi == euler_char_cat(fx.ARROW_BASE_LAXCAT.fiber["0"]).chi
    fib1_ = fiber_category(gr.projection, "1")
    assert euler_char_cat(fib1_).chi == euler_char_cat(fx.ARROW_BASE_LAXCAT.fiber["1"]).chi


def test_induced_pseudofunctor_identity():
    ident = fx.identity_functor(fx.BZ2)
    lax = induced_fiber_pseudofunctor(ident, choose_cleavage(ident))
    pull = lax.pullback["e"]
    assert all(pull.ob(x) == x for x in lax.fiber["*"].objects)


def test_induced_pseudofunctor_swap():
    lax = induced_fiber_pseudofunctor(fx.EZ2_TO_BZ2, choose_cleavage(fx.EZ2_TO_BZ2))
    swap = lax.pullback["g"]
    assert swap.ob("0") == "1" and swap.ob("1") == "0"


def test_grothendieck_point_base_recovers_fiber():
    lax = validate_laxcat(
        LaxFunctorToCat(fx.PT, {"*": fx.BZ2}, {"id*": fx.identity_functor(fx.BZ2)})
    )
    gr = grothendieck_cat(lax)
    assert gr.euler().chi == euler_char_cat(fx.BZ2).chi


def test_grothendieck_arrow_base_zeta():
    gr = grothendieck_cat(fx.ARROW_BASE_LAXCAT)
    assert gr.objects == ("(0,x)", "(0,y)", "(1,*)")
    assert [[str(v) for v in row] for row in gr.zeta().entries] == [
        ["1", "0", "1"],
        ["0", "1", "0"],
        ["0", "0", "1"],
    ]
    assert gr.euler().chi == 2


def test_grothendieck_bz2_base_is_indiscrete():
    gr = grothendieck_cat(fx.BZ2_BASE_LAXCAT)
    zeta = gr.zeta()
    assert all(v == 1 for row in zeta.entries for v in row)
    assert gr.euler().chi == 1


def _nonstrict_chain_laxcat(with_coherence: bool) -> LaxFunctorToCat:
    # base 0 -> 1 -> 2 with composite; fibers indiscrete on two objects;
    # F(chain) deliberately differs from F(step)∘F(step) by a natural iso
    from bicat_euler.fincat import validate_category

    base = validate_category(
        ["0", "1", "2"],
        [("id0", "0", "0"), ("id1", "1", "1"), ("id2", "2", "2"),
         ("c01", "0", "1"), ("c12", "1", "2"), ("c02", "0", "2")],
        {"0": "id0", "1": "id1", "2": "id2"},
        {
            ("id0", "id0"): "id0", ("id1", "id1"): "id1", ("id2", "id2"): "id2",
            ("c01", "id0"): "c01", ("id1", "c01"): "c01",
            ("c12", "id1"): "c12", ("id2", "c12"): "c12",
            ("c02", "id0"): "c02", ("id2", "c02"): "c02",
            ("c12", "c01"): "c02",
        },
    )
    ez = fx.EZ2
    swap = validate_functor(ez, ez, {"0": "1", "1": "0"},
                            {"id0": "id1", "id1": "id0", "m01": "m10", "m10": "m01"})
    const0 = validate_functor(ez, ez, {"0": "0", "1": "0"},
                              {"id0": "id0", "id1": "id0", "m01": "id0", "m10": "id0"})
    pullback = {
        "id0": fx.identity_functor(ez),
        "id1": fx.identity_functor(ez),
        "id2": fx.identity_functor(ez),
        "c01": swap,
        "c12": swap,
        "c02": const0,  # swap∘swap = Id != const0, so the functor is not strict
    }
    coherence = None
    unit = None
    if with_coherence:
        # indiscrete fibers: there is a unique 2-cell component everywhere
        def iso(src_obj, dst_obj):
            return "id0" if src_obj == dst_obj == "0" else ("id1" if src_obj == dst_obj == "1" else f"m{src_obj}{dst_obj}")

        coherence = {}
        for g in ("id0", "id1", "id2", "c01", "c12", "c02"):
            for f in ("id0", "id1", "id2", "c01", "c12", "c02"):
                gm, fm = base.morphism(g), base.morphism(f)
                if gm.src != fm.dst:
                    continue
                ff, fg = pullback[f], pullback[g]
                fgf = pullback[base.compose2(g, f)]
                coherence[(g, f)] = {z: iso(ff.ob(fg.ob(z)), fgf.ob(z)) for z in ez.objects}
        unit = {b: {x: f"id{x}" for x in ez.objects} for b in base.objects}
    return LaxFunctorToCat(base, {b: ez for b in base.objects}, pullback, coherence, unit)


def test_nonstrict_without_coherence_is_counting_mode():
    lax = validate_laxcat(_nonstrict_chain_laxcat(with_coherence=False))
    assert not is_strict(lax)
    gr = grothendieck_cat(lax)
    assert gr.total is None and gr.projection is None
    assert gr.euler().chi is not None


def test_nonstrict_with_coherence_builds_full_category():
    lax = validate_laxcat(_nonstrict_chain_laxcat(with_coherence=True))
    gr = grothendieck_cat(lax)
    assert gr.total is not None and gr.projection is not None
    counting = grothendieck_cat(lax.remove_coherence())
    assert counting.euler().chi == gr.euler().chi


def test_bad_coherence_raises():
    lax = _nonstrict_chain_laxcat(with_coherence=True)
    broken = dict(lax.unit_iso)
    broken["0"] = {x: "m01" for x in ("0", "1")}  # wrong frames
    with pytest.raises(IncoherentData):
        validate_laxcat(LaxFunctorToCat(lax.base, lax.fiber, lax.pullback, lax.comp_iso, broken))


def test_gr_formula_examples():
    rep = verify_gr_formula(fx.ARROW_BASE_LAXCAT)
    assert rep.equal and rep.lhs == 2
    assert rep.coweighting.to_json() == {"0": "1", "1": "0"}
    point = validate_laxcat(
        LaxFunctorToCat(fx.PT, {"*": fx.PAIR}, {"id*": fx.identity_functor(fx.PAIR)})
    )
    rep2 = verify_gr_formula(point)
    assert rep2.equal and rep2.lhs == euler_char_cat(fx.PAIR).chi
    rep3 = verify_gr_formula(fx.BZ2_BASE_LAXCAT)
    assert rep3.equal and rep3.lhs == 1 and rep3.rhs == Fraction(1, 2) * 2


def test_product_formula_quotient():
    rep = verify_product_formula_cat(fx.EZ2_TO_BZ2)
    assert rep.equal
    assert rep.chi_total == 1
    assert rep.components[0][1] == Fraction(1, 2) and rep.components[0][2] == 2


def test_product_formula_identity():
    rep = verify_product_formula_cat(fx.identity_functor(fx.SPAN))
    assert rep.equal and rep.chi_total == 1


def test_product_formula_disjoint_union():
    total = coproduct_cat([fx.EZ2, fx.SPAN])
    base = coproduct_cat([fx.BZ2, fx.SPAN])
    object_map = {"0:0": "0:*", "0:1": "0:*", "1:c": "1:c", "1:l": "1:l", "1:r": "1:r"}
    morphism_map = {"0:id0": "0:e", "0:id1": "0:e", "0:m01": "0:g", "0:m10": "0:g"}
    morphism_map.update({f"1:{m.name}": f"1:{m.name}" for m in fx.SPAN.morphisms})
    p = validate_functor(total, base, object_map, morphism_map)
    rep = verify_product_formula_cat(p)
    assert rep.equal
    assert rep.chi_total == 2  # 1 (EZ2 over BZ2) + 1 (SPAN over itself)
    assert len(rep.components) == 2


def test_product_formula_rejects_non_bifibered():
    gr = grothendieck_cat(fx.ARROW_BASE_LAXCAT)
    with pytest.raises(NotBiFibered):
        verify_product_formula_cat(gr.projection)


def test_generated_instances_fully_verify():
    for seed in range(10):
        lax = gen_groupoid_valued_laxcat(seed, 3)
        assert verify_gr_formula(lax).equal
        p = gen_fib_groupoids_functor(seed, 3)
        rep = classify_fibration(p)
        assert rep.fibered_in_groupoids and rep.cofibered_in_groupoids
        assert verify_product_formula_cat(p).equal
        # fibers of a functor fibered in groupoids are groupoids
        for b in p.target.objects:
            fib = fiber_category(p, b)
            assert all(fib.inverse_of(m.name) is not None for m in fib.morphisms)
