"""Finite categories with explicit composition tables.

Categories are validated exhaustively (identity, endpoint and
associativity laws) and immutable afterwards; every downstream module
builds on the similarity matrix ζ_A(i,j) = #A(i,j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exactq import MatrixEuler, QMatrix, matrix_euler


class NotAcyclic(Exception):
    pass


@dataclass(frozen=True)
class Violation:
    """One violated category/functor law, machine-readable."""

    code: str
    message: str
    subject: tuple[str, ...] = ()

    def __str__(self):
        return f"{self.code}: {self.message}"


class InvalidCategory(Exception):
    """Raised with the complete list of violated laws, not just the first."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in violations))


class InvalidFunctor(InvalidCategory):
    pass


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class FinCategory:
    """Finite category: objects, named morphisms, identity and composition tables.

    Construct through `validate_category` (or a validated constructor like
    the fixtures/products); direct construction skips the law checks.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identity: Mapping[str, str]
    compose: Mapping[tuple[str, str], str]
    _by_name: Mapping[str, Morphism] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._by_name is None:
            object.__setattr__(self, "_by_name", {m.name: m for m in self.morphisms})

    def morphism(self, name: str) -> Morphism:
        return self._by_name[name]

    def src(self, name: str) -> str:
        return self._by_name[name].src

    def dst(self, name: str) -> str:
        return self._by_name[name].dst

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return tuple(m.name for m in self.morphisms if m.src == x and m.dst == y)

    def is_identity(self, name: str) -> bool:
        m = self._by_name[name]
        return m.src == m.dst and self.identity.get(m.src) == name

    def compose2(self, g: str, f: str) -> str:
        """g∘f for a composable pair (src(g) = dst(f))."""
        return self.compose[(g, f)]

    def inverse_of(self, name: str) -> Optional[str]:
        """Two-sided inverse found by exhaustive search, or None."""
        m = self._by_name[name]
        for cand in self.hom(m.dst, m.src):
            if (
                self.compose2(cand, name) == self.identity[m.src]
                and self.compose2(name, cand) == self.identity[m.dst]
            ):
                return cand
        return None

    def objects_isomorphic(self, x: str, y: str) -> bool:
        return any(self.inverse_of(f) is not None for f in self.hom(x, y))

    def opposite(self) -> "FinCategory":
        return FinCategory(
            self.objects,
            tuple(Morphism(m.name, m.dst, m.src) for m in self.morphisms),
            dict(self.identity),
            {(f, g): h for (g, f), h in self.compose.items()},
        )


EMPTY_CATEGORY = FinCategory((), (), {}, {})


def validate_category(
    objects: Sequence[str],
    morphisms: Sequence[tuple[str, str, str] | Morphism],
    identity: Mapping[str, str],
    compose: Mapping[tuple[str, str], str],
) -> FinCategory:
    """Check every category law exhaustively; raise InvalidCategory with all failures.

    Objects and morphisms are stored sorted by label so that all derived
    artifacts (matrices, serializations) are canonical.
    """
    morphs = tuple(m if isinstance(m, Morphism) else Morphism(*m) for m in morphisms)
    violations: list[Violation] = []
    if len(set(objects)) != len(objects):
        violations.append(Violation("DanglingEndpoint", "duplicate object labels"))
    names = [m.name for m in morphs]
    if len(set(names)) != len(names):
        violations.append(Violation("DanglingEndpoint", "duplicate morphism names"))
    obj_set = set(objects)
    for m in morphs:
        if m.src not in obj_set or m.dst not in obj_set:
            violations.append(
                Violation("DanglingEndpoint", f"morphism {m.name}: {m.src} -> {m.dst} leaves the object set", (m.name,))
            )
    if violations:
        raise InvalidCategory(violations)

    by_name = {m.name: m for m in morphs}
    for x in objects:
        ident = identity.get(x)
        if ident is None or ident not in by_name:
            violations.append(Violation("IdentityLawViolation", f"no identity morphism for object {x}", (x,)))
        else:
            m = by_name[ident]
            if m.src != x or m.dst != x:
                violations.append(
                    Violation("IdentityLawViolation", f"identity of {x} is {ident}: {m.src} -> {m.dst}", (x,))
                )
    for (g, f), h in compose.items():
        if g not in by_name or f not in by_name or h not in by_name:
            violations.append(Violation("DanglingEndpoint", f"compose({g}, {f}) = {h} names unknown morphisms", (g, f)))
            continue
        if by_name[g].src != by_name[f].dst:
            violations.append(Violation("DanglingEndpoint", f"compose({g}, {f}): pair is not composable", (g, f)))
        elif by_name[h].src != by_name[f].src or by_name[h].dst != by_name[g].dst:
            violations.append(
                Violation("DanglingEndpoint", f"compose({g}, {f}) = {h} has wrong endpoints", (g, f, h))
            )
    if violations:
        raise InvalidCategory(violations)

    for g in morphs:
        for f in morphs:
            if g.src == f.dst and (g.name, f.name) not in compose:
                violations.append(
                    Violation("MissingComposite", f"compose({g.name}, {f.name}) undefined", (g.name, f.name))
                )
    if violations:
        raise InvalidCategory(violations)

    for m in morphs:
        if compose[(m.name, identity[m.src])] != m.name or compose[(identity[m.dst], m.name)] != m.name:
            violations.append(Violation("IdentityLawViolation", f"identity laws fail at {m.name}", (m.name,)))
    for h in morphs:
        for g in morphs:
            if h.src != g.dst:
                continue
            for f in morphs:
                if g.src != f.dst:
                    continue
                if compose[(compose[(h.name, g.name)], f.name)] != compose[(h.name, compose[(g.name, f.name)])]:
                    violations.append(
                        Violation(
                            "AssociativityViolation",
                            f"({h.name}∘{g.name})∘{f.name} != {h.name}∘({g.name}∘{f.name})",
                            (h.name, g.name, f.name),
                        )
                    )
    if violations:
        raise InvalidCategory(violations)

    return FinCategory(
        tuple(sorted(objects)),
        tuple(sorted(morphs, key=lambda m: m.name)),
        {x: identity[x] for x in sorted(objects)},
        dict(compose),
    )


def similarity_matrix(a: FinCategory) -> QMatrix:
    """ζ_A over ob(A): entry (i,j) = #A(i,j)."""
    return QMatrix.build(a.objects, a.objects, lambda i, j: Fraction(len(a.hom(i, j))))


def euler_char_cat(a: FinCategory) -> MatrixEuler:
    return matrix_euler(similarity_matrix(a))


def is_acyclic(a: FinCategory) -> bool:
    """No non-identity endomorphisms and no directed circuit through distinct objects."""
    for x in a.objects:
        if any(m != a.identity[x] for m in a.hom(x, x)):
            return False
    edges = {x: set() for x in a.objects}
    for m in a.morphisms:
        if not a.is_identity(m.name):
            edges[m.src].add(m.dst)
    state: dict[str, int] = {}

    def has_cycle(x: str) -> bool:
        state[x] = 1
        for y in edges[x]:
            if state.get(y, 0) == 1:
                return True
            if state.get(y, 0) == 0 and has_cycle(y):
                return True
        state[x] = 2
        return False

    return not any(state.get(x, 0) == 0 and has_cycle(x) for x in a.objects)


@dataclass(frozen=True)
class ChainComplexCount:
    """Nondegenerate n-chain counts of the nerve and their alternating sum."""

    counts: tuple[int, ...]
    euler: int


def nerve_euler(a: FinCategory) -> ChainComplexCount:
    """Count composable chains of non-identity morphisms, level by level.

    counts[0] = #objects; counts[n] = #chains f_n∘...∘f_1 of non-identity
    morphisms.  Finite exactly because the category is acyclic.
    """
    if not is_acyclic(a):
        raise NotAcyclic("nerve chain counts are finite only for acyclic categories")
    non_id = [m for m in a.morphisms if not a.is_identity(m.name)]
    counts = [len(a.objects)]
    # ending[x] = number of length-n chains ending at x; memoized per level.
    ending = {x: 1 for x in a.objects}
    while True:
        nxt = {x: 0 for x in a.objects}
        total = 0
        for m in non_id:
            nxt[m.dst] += ending[m.src]
            total += ending[m.src]
        if total == 0:
            break
        counts.append(total)
        ending = nxt
    euler = sum((-1) ** n * c for n, c in enumerate(counts))
    return ChainComplexCount(tuple(counts), euler)


def coproduct_cat(parts: Sequence[FinCategory]) -> FinCategory:
    """Disjoint union; summands are tagged `<i>:` to keep labels unique."""
    objects: list[str] = []
    morphisms: list[Morphism] = []
    identity: dict[str, str] = {}
    compose: dict[tuple[str, str], str] = {}
    for i, part in enumerate(parts):
        tag = f"{i}:"
        objects += [tag + x for x in part.objects]
        morphisms += [Morphism(tag + m.name, tag + m.src, tag + m.dst) for m in part.morphisms]
        identity.update({tag + x: tag + m for x, m in part.identity.items()})
        compose.update({(tag + g, tag + f): tag + h for (g, f), h in part.compose.items()})
    return validate_category(objects, morphisms, identity, compose)


def pair_label(x: str, y: str) -> str:
    return f"({x},{y})"


def product_cat(a: FinCategory, b: FinCategory) -> FinCategory:
    objects = [pair_label(x, y) for x in a.objects for y in b.objects]
    morphisms = [
        Morphism(pair_label(m.name, n.name), pair_label(m.src, n.src), pair_label(m.dst, n.dst))
        for m in a.morphisms
        for n in b.morphisms
    ]
    identity = {
        pair_label(x, y): pair_label(a.identity[x], b.identity[y]) for x in a.objects for y in b.objects
    }
    compose = {}
    for (g1, f1), h1 in a.compose.items():
        for (g2, f2), h2 in b.compose.items():
            compose[(pair_label(g1, g2), pair_label(f1, f2))] = pair_label(h1, h2)
    return validate_category(objects, morphisms, identity, compose)


@dataclass(frozen=True)
class Functor:
    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]

    def ob(self, x: str) -> str:
        return self.object_map[x]

    def mor(self, m: str) -> str:
        return self.morphism_map[m]


def validate_functor(
    source: FinCategory,
    target: FinCategory,
    object_map: Mapping[str, str],
    morphism_map: Mapping[str, str],
) -> Functor:
    violations: list[Violation] = []
    for x in source.objects:
        if object_map.get(x) not in target.objects:
            violations.append(Violation("DanglingEndpoint", f"object {x} has no valid image", (x,)))
    for m in source.morphisms:
        img = morphism_map.get(m.name)
        if img is None or img not in {t.name for t in target.morphisms}:
            violations.append(Violation("DanglingEndpoint", f"morphism {m.name} has no valid image", (m.name,)))
    if violations:
        raise InvalidFunctor(violations)
    for m in source.morphisms:
        img = target.morphism(morphism_map[m.name])
        if img.src != object_map[m.src] or img.dst != object_map[m.dst]:
            violations.append(Violation("DanglingEndpoint", f"image of {m.name} has wrong endpoints", (m.name,)))
    for x in source.objects:
        if morphism_map[source.identity[x]] != target.identity[object_map[x]]:
            violations.append(Violation("IdentityLawViolation", f"identity of {x} not preserved", (x,)))
    for (g, f), h in source.compose.items():
        if target.compose[(morphism_map[g], morphism_map[f])] != morphism_map[h]:
            violations.append(
                Violation("AssociativityViolation", f"composition not preserved at ({g}, {f})", (g, f))
            )
    if violations:
        raise InvalidFunctor(violations)
    return Functor(source, target, dict(object_map), dict(morphism_map))


@dataclass(frozen=True)
class NatTransformation:
    source: Functor
    target: Functor
    components: Mapping[str, str]


def validate_nat_transformation(
    source: Functor, target: Functor, components: Mapping[str, str]
) -> NatTransformation:
    if source.source is not target.source and source.source != target.source:
        raise InvalidFunctor([Violation("DanglingEndpoint", "functors are not parallel")])
    if source.target != target.target:
        raise InvalidFunctor([Violation("DanglingEndpoint", "functors are not parallel")])
    cat = source.target
    names = {m.name for m in cat.morphisms}
    violations = []
    for x in source.source.objects:
        c = components.get(x)
        if c is None or c not in names or cat.src(c) != source.ob(x) or cat.dst(c) != target.ob(x):
            violations.append(Violation("DanglingEndpoint", f"component at {x} has wrong frame", (x,)))
    if violations:
        raise InvalidFunctor(violations)
    for m in source.source.morphisms:
        lhs = cat.compose2(components[m.dst], source.mor(m.name))
        rhs = cat.compose2(target.mor(m.name), components[m.src])
        if lhs != rhs:
            violations.append(Violation("AssociativityViolation", f"naturality fails at {m.name}", (m.name,)))
    if violations:
        raise InvalidFunctor(violations)
    return NatTransformation(source, target, dict(components))


def check_equivalence_functor(f: Functor) -> bool:
    """Fully faithful and essentially surjective, decided by exhaustive search."""
    for x in f.source.objects:
        for y in f.source.objects:
            images = [f.mor(m) for m in f.source.hom(x, y)]
            if len(set(images)) != len(images):
                return False
            if set(images) != set(f.target.hom(f.ob(x), f.ob(y))):
                return False
    image_objects = [f.ob(x) for x in f.source.objects]
    for b in f.target.objects:
        if not any(f.target.objects_isomorphic(a, b) for a in image_objects):
            return False
    return True


def zigzag_components(objects: Sequence[str], connected: Mapping[str, set]) -> tuple[tuple[str, ...], ...]:
    """Connected components under a symmetric-closed adjacency map."""
    seen: set[str] = set()
    components = []
    for start in objects:
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in connected.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        components.append(tuple(sorted(comp)))
    return tuple(components)


def category_components(a: FinCategory) -> tuple[tuple[str, ...], ...]:
    adj = {x: set() for x in a.objects}
    for m in a.morphisms:
        adj[m.src].add(m.dst)
        adj[m.dst].add(m.src)
    return zigzag_components(a.objects, adj)


def full_subcategory(a: FinCategory, objects: Sequence[str]) -> FinCategory:
    keep = set(objects)
    morphs = [m for m in a.morphisms if m.src in keep and m.dst in keep]
    names = {m.name for m in morphs}
    return FinCategory(
        tuple(sorted(keep)),
        tuple(morphs),
        {x: a.identity[x] for x in sorted(keep)},
        {(g, f): h for (g, f), h in a.compose.items() if g in names and f in names},
    )
