"""Fibrations of finite categories and the Grothendieck construction.

Cartesianness and all fibration predicates are decided by exhaustive
search over the finite hom-sets.  The cartesian-morphism definition
follows the standard Grothendieck convention; the literal reading of the
source material is kept behind convention="paper" for auditability.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .exactq import MatrixEuler, QMatrix, QVector, format_rational, matrix_euler
from .fincat import (
    FinCategory,
    Functor,
    InvalidCategory,
    Morphism,
    category_components,
    euler_char_cat,
    full_subcategory,
    pair_label,
    validate_category,
    validate_functor,
)


class MorphismNotInCategory(Exception):
    pass


class NotFibered(Exception):
    pass


class NonUniqueLift(Exception):
    pass


class ObjectNotInBase(Exception):
    pass


class NotBiFibered(Exception):
    pass


class MissingEulerCharacteristic(Exception):
    """Names the structure whose weighting or coweighting is absent."""


class IncoherentData(Exception):
    pass


def is_cartesian_morphism(p: Functor, f: str, convention: str = "standard") -> bool:
    """Decide cartesianness of the morphism named f by exhaustive search.

    standard: f: x -> y is cartesian iff every g: z -> y together with
    h: P(z) -> P(x) satisfying P(f)∘h = P(g) admits exactly one lift
    h̃: z -> x with P(h̃) = h and f∘h̃ = g.  The "paper" convention flips
    the lift out of x instead (g∘h̃ = f with h: P(x) -> P(z)).
    """
    e, b = p.source, p.target
    if f not in {m.name for m in e.morphisms}:
        raise MorphismNotInCategory(f)
    x, y = e.src(f), e.dst(f)
    pf = p.mor(f)
    for z in e.objects:
        for g in e.hom(z, y):
            pg = p.mor(g)
            if convention == "standard":
                for h in b.hom(p.ob(z), p.ob(x)):
                    if b.compose2(pf, h) != pg:
                        continue
                    lifts = [t for t in e.hom(z, x) if p.mor(t) == h and e.compose2(f, t) == g]
                    if len(lifts) != 1:
                        return False
            else:
                for h in b.hom(p.ob(x), p.ob(z)):
                    if b.compose2(pg, h) != pf:
                        continue
                    lifts = [t for t in e.hom(x, z) if p.mor(t) == h and e.compose2(g, t) == f]
                    if len(lifts) != 1:
                        return False
    return True


@dataclass(frozen=True)
class FibrationReport:
    fibered: bool
    cofibered: bool
    fibered_in_groupoids: bool
    cofibered_in_groupoids: bool
    witnesses: Mapping[str, tuple]

    def to_json(self) -> dict:
        return {
            "fibered": self.fibered,
            "cofibered": self.cofibered,
            "fibered_in_groupoids": self.fibered_in_groupoids,
            "cofibered_in_groupoids": self.cofibered_in_groupoids,
            "witnesses": {k: list(v) for k, v in self.witnesses.items()},
        }


def reverse_functor(p: Functor) -> Functor:
    """Formally flip every morphism in both categories."""
    return Functor(p.source.opposite(), p.target.opposite(), dict(p.object_map), dict(p.morphism_map))


def _cartesian_lift_candidates(p: Functor, f: str, e_obj: str, convention: str) -> list[str]:
    e, b = p.source, p.target
    return sorted(
        m.name
        for m in e.morphisms
        if m.dst == e_obj and p.mor(m.name) == f and is_cartesian_morphism(p, m.name, convention)
    )


def _one_sided_flags(p: Functor, convention: str) -> tuple[bool, bool, dict]:
    """(fibered, fibered_in_groupoids, witnesses) for the covariant side."""
    e, b = p.source, p.target
    witnesses: dict[str, tuple] = {}
    fibered = True
    all_cartesian = True
    lifts_exist = True
    for m in e.morphisms:
        if not is_cartesian_morphism(p, m.name, convention):
            all_cartesian = False
            witnesses.setdefault("non_cartesian", (m.name,))
            break
    for e_obj in e.objects:
        target_obj = p.ob(e_obj)
        for b_obj in b.objects:
            for f in b.hom(b_obj, target_obj):
                candidates = [m.name for m in e.morphisms if m.dst == e_obj and p.mor(m.name) == f]
                if not candidates:
                    lifts_exist = False
                    fibered = False
                    witnesses.setdefault("no_lift", (f, e_obj))
                elif not any(is_cartesian_morphism(p, c, convention) for c in candidates):
                    fibered = False
                    witnesses.setdefault("no_cartesian_lift", (f, e_obj))
    return fibered, all_cartesian and lifts_exist, witnesses


def classify_fibration(p: Functor, convention: str = "standard") -> FibrationReport:
    """Decide the four fibration flags; cofibered flags reuse the same code on reversed data."""
    fibered, fig, wit = _one_sided_flags(p, convention)
    co_fibered, co_fig, co_wit = _one_sided_flags(reverse_functor(p), convention)
    witnesses = dict(wit)
    witnesses.update({f"co_{k}": v for k, v in co_wit.items()})
    report = FibrationReport(fibered, co_fibered, fig, co_fig, witnesses)
    assert not report.fibered_in_groupoids or report.fibered
    assert not report.cofibered_in_groupoids or report.cofibered
    return report


@dataclass(frozen=True)
class Cleavage:
    """Chosen cartesian lift for every (base morphism, endpoint object) pair."""

    lifts: Mapping[tuple[str, str], str]

    def lift(self, f: str, e_obj: str) -> str:
        return self.lifts[(f, e_obj)]


def choose_cleavage(p: Functor, policy: str = "min", convention: str = "standard") -> Cleavage:
    """Deterministic cleavage: lexicographically smallest (or largest) valid lift."""
    e, b = p.source, p.target
    lifts: dict[tuple[str, str], str] = {}
    for e_obj in e.objects:
        for b_obj in b.objects:
            for f in b.hom(b_obj, p.ob(e_obj)):
                candidates = _cartesian_lift_candidates(p, f, e_obj, convention)
                if not candidates:
                    raise NotFibered(f"no cartesian lift of {f} at {e_obj}")
                lifts[(f, e_obj)] = candidates[0] if policy == "min" else candidates[-1]
    return Cleavage(lifts)


def fiber_category(p: Functor, b_obj: str) -> FinCategory:
    """Subcategory of the total category strictly over b and id_b."""
    if b_obj not in p.target.objects:
        raise ObjectNotInBase(b_obj)
    e = p.source
    id_b = p.target.identity[b_obj]
    objects = [x for x in e.objects if p.ob(x) == b_obj]
    morphs = [m for m in e.morphisms if p.mor(m.name) == id_b]
    names = {m.name for m in morphs}
    return validate_category(
        objects,
        morphs,
        {x: e.identity[x] for x in objects},
        {(g, f): h for (g, f), h in e.compose.items() if g in names and f in names},
    )


@dataclass(frozen=True)
class LaxFunctorToCat:
    """Contravariant Cat-valued lax functor: fibers plus pullback functors.

    pullback[f] for f: b -> c is a functor fiber(c) -> fiber(b); identities
    are included.  comp_iso/unit_iso, when present, are complete coherence
    component families (one morphism per object, natural in it).
    """

    base: FinCategory
    fiber: Mapping[str, FinCategory]
    pullback: Mapping[str, Functor]
    comp_iso: Optional[Mapping[tuple[str, str], Mapping[str, str]]] = None
    unit_iso: Optional[Mapping[str, Mapping[str, str]]] = None

    def remove_coherence(self) -> "LaxFunctorToCat":
        return LaxFunctorToCat(self.base, dict(self.fiber), dict(self.pullback))


def validate_laxcat(f: LaxFunctorToCat) -> LaxFunctorToCat:
    for b in f.base.objects:
        if b not in f.fiber:
            raise IncoherentData(f"missing fiber for base object {b}")
    for m in f.base.morphisms:
        pb = f.pullback.get(m.name)
        if pb is None:
            raise IncoherentData(f"missing pullback functor for base morphism {m.name}")
        if pb.source != f.fiber[m.dst] or pb.target != f.fiber[m.src]:
            raise IncoherentData(f"pullback along {m.name} has wrong endpoints")
    if (f.comp_iso is None) != (f.unit_iso is None):
        raise IncoherentData("coherence data must supply both composite and unit components")
    if f.comp_iso is not None:
        _validate_coherence(f)
    return f


def _validate_coherence(f: LaxFunctorToCat):
    base = f.base
    for b in base.objects:
        fb = f.fiber[b]
        unit = f.unit_iso.get(b)
        if unit is None:
            raise IncoherentData(f"missing unit components at {b}")
        fid = f.pullback[base.identity[b]]
        for x in fb.objects:
            comp = unit.get(x)
            if comp is None or fb.src(comp) != x or fb.dst(comp) != fid.ob(x):
                raise IncoherentData(f"unit component at ({b}, {x}) has wrong frame")
        for m in fb.morphisms:
            if fb.compose2(unit[m.dst], m.name) != fb.compose2(fid.mor(m.name), unit[m.src]):
                raise IncoherentData(f"unit naturality fails at ({b}, {m.name})")
    for (g, f_name), comps in f.comp_iso.items():
        gm, fm = base.morphism(g), base.morphism(f_name)
        if gm.src != fm.dst:
            raise IncoherentData(f"composite components for non-composable pair ({g}, {f_name})")
    for gm in base.morphisms:
        for fm in base.morphisms:
            if gm.src != fm.dst:
                continue
            comps = f.comp_iso.get((gm.name, fm.name))
            if comps is None:
                raise IncoherentData(f"missing composite components for ({gm.name}, {fm.name})")
            ff, fg = f.pullback[fm.name], f.pullback[gm.name]
            fgf = f.pullback[f.base.compose2(gm.name, fm.name)]
            fb = f.fiber[fm.src]
            top = f.fiber[gm.dst]
            for z in top.objects:
                comp = comps.get(z)
                if comp is None or fb.src(comp) != ff.ob(fg.ob(z)) or fb.dst(comp) != fgf.ob(z):
                    raise IncoherentData(f"composite component at ({gm.name}, {fm.name}, {z}) has wrong frame")
            for w in top.morphisms:
                lhs = fb.compose2(comps[w.dst], ff.mor(fg.mor(w.name)))
                rhs = fb.compose2(fgf.mor(w.name), comps[w.src])
                if lhs != rhs:
                    raise IncoherentData(f"composite naturality fails at ({gm.name}, {fm.name}, {w.name})")


def is_strict(f: LaxFunctorToCat) -> bool:
    """True when pullbacks compose on the nose and identities pull back to identities."""
    base = f.base
    for b in base.objects:
        fid = f.pullback[base.identity[b]]
        fb = f.fiber[b]
        if any(fid.ob(x) != x for x in fb.objects):
            return False
        if any(fid.mor(m.name) != m.name for m in fb.morphisms):
            return False
    for gm in base.morphisms:
        for fm in base.morphisms:
            if gm.src != fm.dst:
                continue
            ff, fg = f.pullback[fm.name], f.pullback[gm.name]
            fgf = f.pullback[base.compose2(gm.name, fm.name)]
            top = f.fiber[gm.dst]
            if any(ff.ob(fg.ob(z)) != fgf.ob(z) for z in top.objects):
                return False
            if any(ff.mor(fg.mor(w.name)) != fgf.mor(w.name) for w in top.morphisms):
                return False
    return True


@dataclass(frozen=True)
class GrothendieckCat:
    """Total category of a Cat-valued lax functor.

    Counting mode (total is None) still carries the objects and hom-sets,
    which is all the Euler characteristic needs; full mode additionally
    holds the validated total category and the projection functor.
    """

    objects: tuple[str, ...]
    object_pairs: Mapping[str, tuple[str, str]]
    hom: Mapping[tuple[str, str], tuple[str, ...]]
    morphism_pairs: Mapping[str, tuple[str, str]]
    total: Optional[FinCategory]
    projection: Optional[Functor]

    def zeta(self) -> QMatrix:
        return QMatrix.build(self.objects, self.objects, lambda i, j: Fraction(len(self.hom[(i, j)])))

    def euler(self) -> MatrixEuler:
        return matrix_euler(self.zeta())


def grothendieck_cat(f: LaxFunctorToCat) -> GrothendieckCat:
    """Paper-defined pairs construction; full category exactly when sound.

    Composition is assembled from the coherence components (identities for
    a verified-strict functor); absent both, only objects/hom-sets are
    produced, since fabricating coherence would be unsound.
    """
    validate_laxcat(f)
    base = f.base
    objects: list[str] = []
    object_pairs: dict[str, tuple[str, str]] = {}
    for b in base.objects:
        for x in f.fiber[b].objects:
            label = pair_label(b, x)
            objects.append(label)
            object_pairs[label] = (b, x)
    objects.sort()

    hom: dict[tuple[str, str], list[str]] = {(o1, o2): [] for o1 in objects for o2 in objects}
    morphism_pairs: dict[str, tuple[str, str]] = {}
    morphisms: list[Morphism] = []
    for o1 in objects:
        b, x = object_pairs[o1]
        for o2 in objects:
            c, y = object_pairs[o2]
            for bf in base.hom(b, c):
                fy = f.pullback[bf].ob(y)
                for u in f.fiber[b].hom(x, fy):
                    # y is carried in the name: (f, u) alone does not pin the
                    # target when the pullback is not injective on objects
                    name = f"({bf},{u},{y})"
                    hom[(o1, o2)].append(name)
                    morphism_pairs[name] = (bf, u)
                    morphisms.append(Morphism(name, o1, o2))

    strict = f.comp_iso is None and is_strict(f)
    if f.comp_iso is None and not strict:
        return GrothendieckCat(
            tuple(objects), object_pairs, {k: tuple(v) for k, v in hom.items()}, morphism_pairs, None, None
        )

    def gamma(g: str, ff: str, z: str) -> Optional[str]:
        if strict:
            return None
        return f.comp_iso[(g, ff)][z]

    identity = {}
    for o in objects:
        b, x = object_pairs[o]
        if strict:
            unit = f.fiber[b].identity[x]
        else:
            unit = f.unit_iso[b][x]
        identity[o] = f"({base.identity[b]},{unit},{x})"

    compose: dict[tuple[str, str], str] = {}
    for m2 in morphisms:  # (g, v): (c,y) -> (d,z)
        g, v = morphism_pairs[m2.name]
        for m1 in morphisms:  # (f, u): (b,x) -> (c,y)
            if m1.dst != m2.src:
                continue
            bf, u = morphism_pairs[m1.name]
            b, _ = object_pairs[m1.src]
            _, z = object_pairs[m2.dst]
            fb = f.fiber[b]
            w = fb.compose2(f.pullback[bf].mor(v), u)
            g_comp = gamma(g, bf, z)
            if g_comp is not None:
                w = fb.compose2(g_comp, w)
            compose[(m2.name, m1.name)] = f"({base.compose2(g, bf)},{w},{z})"
    try:
        total = validate_category(objects, morphisms, identity, compose)
    except InvalidCategory as exc:
        raise IncoherentData(f"supplied coherence does not assemble a category: {exc}") from exc
    projection = validate_functor(
        total,
        base,
        {o: object_pairs[o][0] for o in objects},
        {m: morphism_pairs[m][0] for m in morphism_pairs},
    )
    return GrothendieckCat(
        tuple(objects), object_pairs, {k: tuple(v) for k, v in hom.items()}, morphism_pairs, total, projection
    )


def induced_fiber_pseudofunctor(p: Functor, c: Cleavage) -> LaxFunctorToCat:
    """Fibers and cleavage-induced pullback functors of a fibered functor."""
    base = p.target
    fibers = {b: fiber_category(p, b) for b in base.objects}
    pullbacks: dict[str, Functor] = {}
    e = p.source
    for m in base.morphisms:
        b, c_obj = m.src, m.dst
        object_map = {}
        morphism_map = {}
        for y in fibers[c_obj].objects:
            object_map[y] = e.src(c.lift(m.name, y))
        for h in fibers[c_obj].morphisms:
            lift_dst = c.lift(m.name, h.dst)
            lift_src = c.lift(m.name, h.src)
            want = e.compose2(h.name, lift_src)
            candidates = [
                u
                for u in e.hom(object_map[h.src], object_map[h.dst])
                if p.mor(u) == base.identity[b] and e.compose2(lift_dst, u) == want
            ]
            if len(candidates) != 1:
                raise NonUniqueLift(f"pullback of {h.name} along {m.name}: {len(candidates)} candidates")
            morphism_map[h.name] = candidates[0]
        pullbacks[m.name] = validate_functor(fibers[c_obj], fibers[b], object_map, morphism_map)
    return LaxFunctorToCat(base, fibers, pullbacks)


@dataclass(frozen=True)
class GrFormulaReport:
    """Both sides of chi(Gr(F)) = sum_b k_b chi(Fb), with the intermediates."""

    lhs: Fraction
    rhs: Fraction
    coweighting: QVector
    fiber_chi: Mapping[str, Fraction]
    equal: bool

    def to_json(self) -> dict:
        return {
            "chi_grothendieck": format_rational(self.lhs),
            "sum_k_b_chi_fiber": format_rational(self.rhs),
            "base_coweighting": self.coweighting.to_json(),
            "fiber_chi": {b: format_rational(v) for b, v in self.fiber_chi.items()},
            "equal": self.equal,
        }


def verify_gr_formula(f: LaxFunctorToCat) -> GrFormulaReport:
    base_euler = euler_char_cat(f.base)
    if base_euler.coweighting is None:
        raise MissingEulerCharacteristic("base category has no coweighting")
    gr = grothendieck_cat(f)
    gr_euler = gr.euler()
    if gr_euler.chi is None:
        raise MissingEulerCharacteristic("Grothendieck construction has no Euler characteristic")
    fiber_chi: dict[str, Fraction] = {}
    for b in f.base.objects:
        chi_b = euler_char_cat(f.fiber[b]).chi
        if chi_b is None:
            raise MissingEulerCharacteristic(f"fiber over {b} has no Euler characteristic")
        fiber_chi[b] = chi_b
    rhs = sum(
        (base_euler.coweighting[b] * fiber_chi[b] for b in f.base.objects),
        Fraction(0),
    )
    return GrFormulaReport(gr_euler.chi, rhs, base_euler.coweighting, fiber_chi, gr_euler.chi == rhs)


@dataclass(frozen=True)
class ProductFormulaReport:
    """chi(E) against the per-component sum of chi(B_i)·chi(F_i)."""

    chi_total: Fraction
    rhs: Fraction
    components: tuple[tuple[tuple[str, ...], Fraction, Fraction], ...]
    equal: bool

    def to_json(self) -> dict:
        return {
            "chi_total": format_rational(self.chi_total),
            "sum_of_products": format_rational(self.rhs),
            "components": [
                {
                    "objects": list(objs),
                    "chi_base": format_rational(cb),
                    "chi_fiber": format_rational(cf),
                }
                for objs, cb, cf in self.components
            ],
            "equal": self.equal,
        }


def verify_product_formula_cat(p: Functor, convention: str = "standard") -> ProductFormulaReport:
    report = classify_fibration(p, convention)
    if not (report.fibered_in_groupoids and report.cofibered_in_groupoids):
        raise NotBiFibered(f"not fibered+cofibered in groupoids: {report.witnesses}")
    chi_total = euler_char_cat(p.source).chi
    if chi_total is None:
        raise MissingEulerCharacteristic("total category has no Euler characteristic")
    components = []
    rhs = Fraction(0)
    for comp in category_components(p.target):
        chi_base = euler_char_cat(full_subcategory(p.target, comp)).chi
        if chi_base is None:
            raise MissingEulerCharacteristic(f"base component {comp} has no Euler characteristic")
        fiber_chis = []
        for b in comp:
            chi_fb = euler_char_cat(fiber_category(p, b)).chi
            if chi_fb is None:
                raise MissingEulerCharacteristic(f"fiber over {b} has no Euler characteristic")
            fiber_chis.append(chi_fb)
        assert len(set(fiber_chis)) == 1, f"fiber chi not constant on component {comp}"
        components.append((comp, chi_base, fiber_chis[0]))
        rhs += chi_base * fiber_chis[0]
    return ProductFormulaReport(chi_total, rhs, tuple(components), chi_total == rhs)
