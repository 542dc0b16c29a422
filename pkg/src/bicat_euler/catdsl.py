"""The .catj text format: parser with span diagnostics and canonical serializer.

Concrete syntax is JSON with a top-level "kind" field; hom categories are
nested category objects keyed "x|y" and composition tables are arrays of
[g, f, g∘f] triples.  Parsing recovers and continues: every problem in a
document is reported, each with a line/column span.

Diagnostic codes:
  E001 reference to an undeclared object/morphism/cell
  E002 duplicate label
  E003 missing or ill-typed field
  E004 unknown kind
  E005 JSON syntax error
  E006 malformed composite key (expected "x|y", "x|y|z", ...)
  E010 incomplete functor map
  E012 missing pullback functor
  E013 missing fiber
  E014 missing trihomomorphism 2-cell component (names alpha and y)
Validation failures surface verbatim under their law codes
(MissingComposite, IdentityLawViolation, AssociativityViolation,
DanglingEndpoint, MissingCompositionData, IncoherentData,
IllTypedComponent).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .bicat import (
    Bicategory,
    CatGraph,
    LaxFunctorBicat,
    MissingCompositionData,
    make_catgraph,
    validate_bicategory,
    validate_lax_functor,
)
from .bifib import IllTypedComponent, Trihomomorphism, validate_trihomomorphism
from .fib1 import IncoherentData, LaxFunctorToCat, validate_laxcat
from .fincat import FinCategory, Functor, InvalidCategory, validate_category, validate_functor

KINDS = ("category", "functor", "catgraph", "bicategory", "laxfunctor", "laxcat", "trihom")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    line: int
    col: int
    code: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.col} {self.code} {self.message}"


@dataclass(frozen=True)
class Document:
    kind: str
    value: object


@dataclass(frozen=True)
class ParseResult:
    document: Optional[Document]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.document is not None and not self.diagnostics


@dataclass
class JNode:
    value: object
    line: int
    col: int
    key_pos: Optional[dict] = field(default=None)


class _SyntaxProblem(Exception):
    def __init__(self, line, col, message):
        self.line, self.col, self.message = line, col, message
        super().__init__(message)


class _Scanner:
    """Recursive-descent JSON reader that records the position of every value."""

    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1

    def _fail(self, message):
        raise _SyntaxProblem(self.line, self.col, message)

    def _advance(self, n=1):
        for _ in range(n):
            if self.i < len(self.text):
                if self.text[self.i] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.i += 1

    def _skip_ws(self):
        while self.i < len(self.text) and self.text[self.i] in " \t\r\n":
            self._advance()

    def _peek(self):
        return self.text[self.i] if self.i < len(self.text) else ""

    def _expect(self, ch):
        if self._peek() != ch:
            self._fail(f"expected {ch!r}")
        self._advance()

    def parse(self) -> JNode:
        self._skip_ws()
        node = self._value()
        self._skip_ws()
        if self.i != len(self.text):
            self._fail("trailing data after document")
        return node

    def _value(self) -> JNode:
        self._skip_ws()
        ch = self._peek()
        if ch == "{":
            return self._object()
        if ch == "[":
            return self._array()
        if ch == '"':
            line, col = self.line, self.col
            return JNode(self._string(), line, col)
        if ch in "-0123456789":
            return self._number()
        for literal, value in (("true", True), ("false", False), ("null", None)):
            if self.text.startswith(literal, self.i):
                node = JNode(value, self.line, self.col)
                self._advance(len(literal))
                return node
        self._fail("expected a JSON value")

    def _object(self) -> JNode:
        line, col = self.line, self.col
        self._expect("{")
        out: dict[str, JNode] = {}
        key_pos: dict[str, tuple[int, int]] = {}
        self._skip_ws()
        if self._peek() == "}":
            self._advance()
            return JNode(out, line, col, key_pos)
        while True:
            self._skip_ws()
            if self._peek() != '"':
                self._fail("expected a string key")
            kline, kcol = self.line, self.col
            key = self._string()
            if key in out:
                self._fail(f"duplicate key {key!r}")
            key_pos[key] = (kline, kcol)
            self._skip_ws()
            self._expect(":")
            out[key] = self._value()
            self._skip_ws()
            if self._peek() == ",":
                self._advance()
                continue
            self._expect("}")
            return JNode(out, line, col, key_pos)

    def _array(self) -> JNode:
        line, col = self.line, self.col
        self._expect("[")
        out: list[JNode] = []
        self._skip_ws()
        if self._peek() == "]":
            self._advance()
            return JNode(out, line, col)
        while True:
            out.append(self._value())
            self._skip_ws()
            if self._peek() == ",":
                self._advance()
                continue
            self._expect("]")
            return JNode(out, line, col)

    def _string(self) -> str:
        self._expect('"')
        chars = []
        while True:
            ch = self._peek()
            if ch == "":
                self._fail("unterminated string")
            if ch == '"':
                self._advance()
                return "".join(chars)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                mapping = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}
                if esc in mapping:
                    chars.append(mapping[esc])
                    self._advance()
                elif esc == "u":
                    self._advance()
                    hexa = self.text[self.i : self.i + 4]
                    if len(hexa) != 4 or any(c not in "0123456789abcdefABCDEF" for c in hexa):
                        self._fail("bad unicode escape")
                    chars.append(chr(int(hexa, 16)))
                    self._advance(4)
                else:
                    self._fail(f"bad escape \\{esc}")
            else:
                chars.append(ch)
                self._advance()

    def _number(self) -> JNode:
        line, col = self.line, self.col
        start = self.i
        if self._peek() == "-":
            self._advance()
        if not self._peek().isdigit():
            self._fail("malformed number")
        while self._peek().isdigit():
            self._advance()
        is_int = True
        if self._peek() == ".":
            is_int = False
            self._advance()
            while self._peek().isdigit():
                self._advance()
        if self._peek() in "eE":
            is_int = False
            self._advance()
            if self._peek() in "+-":
                self._advance()
            while self._peek().isdigit():
                self._advance()
        text = self.text[start : self.i]
        return JNode(int(text) if is_int else float(text), line, col)


class _Builder:
    def __init__(self):
        self.diags: list[Diagnostic] = []

    def err(self, node: JNode, code: str, message: str):
        self.diags.append(Diagnostic("error", node.line, node.col, code, message))

    def object_of(self, node: JNode, what: str) -> Optional[dict]:
        if not isinstance(node.value, dict):
            self.err(node, "E003", f"{what} must be a JSON object")
            return None
        return node.value

    def array_of(self, node: JNode, what: str) -> Optional[list]:
        if not isinstance(node.value, list):
            self.err(node, "E003", f"{what} must be a JSON array")
            return None
        return node.value

    def string_of(self, node: JNode, what: str) -> Optional[str]:
        if not isinstance(node.value, str):
            self.err(node, "E003", f"{what} must be a string")
            return None
        return node.value

    def fieldnode(self, node: JNode, obj: dict, key: str, required=True) -> Optional[JNode]:
        if key not in obj:
            if required:
                self.err(node, "E003", f"missing field {key!r}")
            return None
        return obj[key]

    def string_map(self, node: JNode, what: str) -> dict[str, str]:
        out = {}
        obj = self.object_of(node, what)
        if obj is None:
            return out
        for key, sub in obj.items():
            val = self.string_of(sub, f"{what}[{key}]")
            if val is not None:
                out[key] = val
        return out

    def split_key(self, node: JNode, key: str, arity: int) -> Optional[tuple[str, ...]]:
        parts = tuple(key.split("|"))
        if len(parts) != arity or any(not p for p in parts):
            line, col = (node.key_pos or {}).get(key, (node.line, node.col))
            self.diags.append(
                Diagnostic("error", line, col, "E006", f"key {key!r} must have {arity} |-separated parts")
            )
            return None
        return parts

    def triples(self, node: JNode, what: str, width: int = 3) -> list[tuple]:
        out = []
        arr = self.array_of(node, what)
        if arr is None:
            return out
        for item in arr:
            row = self.array_of(item, f"{what} entry")
            if row is None:
                continue
            if len(row) != width or any(not isinstance(cell.value, str) for cell in row):
                self.err(item, "E003", f"{what} entries must be arrays of {width} strings")
                continue
            out.append(tuple(cell.value for cell in row))
        return out


def _build_category(b: _Builder, node: JNode) -> Optional[FinCategory]:
    obj = b.object_of(node, "category")
    if obj is None:
        return None
    objects_node = b.fieldnode(node, obj, "objects")
    morphisms_node = b.fieldnode(node, obj, "morphisms")
    identity_node = b.fieldnode(node, obj, "identity")
    compose_node = b.fieldnode(node, obj, "compose")
    if None in (objects_node, morphisms_node, identity_node, compose_node):
        return None
    objects = []
    arr = b.array_of(objects_node, "objects") or []
    for item in arr:
        label = b.string_of(item, "object label")
        if label is None:
            continue
        if label in objects:
            b.err(item, "E002", f"duplicate object {label!r}")
        else:
            objects.append(label)
    morphisms = []
    names = set()
    for name, src, dst in b.triples(morphisms_node, "morphisms"):
        if name in names:
            b.err(morphisms_node, "E002", f"duplicate morphism {name!r}")
            continue
        names.add(name)
        for endpoint in (src, dst):
            if endpoint not in objects:
                b.err(morphisms_node, "E001", f"morphism {name!r} references undeclared object {endpoint!r}")
        morphisms.append((name, src, dst))
    identity = {}
    for key, sub in (b.object_of(identity_node, "identity") or {}).items():
        val = b.string_of(sub, f"identity[{key}]")
        if key not in objects:
            b.err(sub, "E001", f"identity key {key!r} is not a declared object")
            continue
        if val is not None:
            if val not in names:
                b.err(sub, "E001", f"identity of {key!r} references undeclared morphism {val!r}")
            identity[key] = val
    compose = {}
    for g, f, h in b.triples(compose_node, "compose"):
        for ref in (g, f, h):
            if ref not in names:
                b.err(compose_node, "E001", f"compose entry references undeclared morphism {ref!r}")
        compose[(g, f)] = h
    if b.diags:
        return None
    try:
        return validate_category(objects, morphisms, identity, compose)
    except InvalidCategory as exc:
        for violation in exc.violations:
            b.err(node, violation.code, violation.message)
        return None


def _build_plain_functor(b: _Builder, node: JNode, source: FinCategory, target: FinCategory) -> Optional[Functor]:
    obj = b.object_of(node, "functor maps")
    if obj is None:
        return None
    object_node = b.fieldnode(node, obj, "object_map")
    morphism_node = b.fieldnode(node, obj, "morphism_map")
    if None in (object_node, morphism_node):
        return None
    object_map = b.string_map(object_node, "object_map")
    morphism_map = b.string_map(morphism_node, "morphism_map")
    for x in source.objects:
        if x not in object_map:
            b.err(object_node, "E010", f"object_map is missing {x!r}")
    for m in source.morphisms:
        if m.name not in morphism_map:
            b.err(morphism_node, "E010", f"morphism_map is missing {m.name!r}")
    for x, img in object_map.items():
        if img not in target.objects:
            b.err(object_node, "E001", f"object_map[{x!r}] references undeclared object {img!r}")
    target_names = {m.name for m in target.morphisms}
    for m, img in morphism_map.items():
        if img not in target_names:
            b.err(morphism_node, "E001", f"morphism_map[{m!r}] references undeclared morphism {img!r}")
    if b.diags:
        return None
    try:
        return validate_functor(source, target, object_map, morphism_map)
    except InvalidCategory as exc:
        for violation in exc.violations:
            b.err(node, violation.code, violation.message)
        return None


def _build_functor(b: _Builder, node: JNode) -> Optional[Functor]:
    obj = b.object_of(node, "functor")
    if obj is None:
        return None
    source_node = b.fieldnode(node, obj, "source")
    target_node = b.fieldnode(node, obj, "target")
    if None in (source_node, target_node):
        return None
    source = _build_category(b, source_node)
    target = _build_category(b, target_node)
    if source is None or target is None:
        return None
    return _build_plain_functor(b, node, source, target)


def _build_hom_table(b: _Builder, node: JNode, objects: list[str]) -> Optional[dict]:
    hom = {}
    table = b.object_of(node, "hom") or {}
    for key, sub in table.items():
        parts = b.split_key(node, key, 2)
        if parts is None:
            continue
        x, y = parts
        for obj_label in parts:
            if obj_label not in objects:
                line, col = (node.key_pos or {}).get(key, (node.line, node.col))
                b.diags.append(
                    Diagnostic("error", line, col, "E001", f"hom key references undeclared object {obj_label!r}")
                )
        cat = _build_category(b, sub)
        if cat is not None:
            hom[(x, y)] = cat
    return hom


def _build_catgraph(b: _Builder, node: JNode) -> Optional[CatGraph]:
    obj = b.object_of(node, "catgraph")
    if obj is None:
        return None
    objects_node = b.fieldnode(node, obj, "objects")
    hom_node = b.fieldnode(node, obj, "hom")
    if None in (objects_node, hom_node):
        return None
    objects = []
    for item in b.array_of(objects_node, "objects") or []:
        label = b.string_of(item, "object label")
        if label is not None:
            if label in objects:
                b.err(item, "E002", f"duplicate object {label!r}")
            else:
                objects.append(label)
    hom = _build_hom_table(b, hom_node, objects)
    if b.diags or hom is None:
        return None
    return make_catgraph(objects, hom)


def _keyed_triples(b: _Builder, node: JNode, what: str, key_arity: int, width: int = 3) -> dict:
    out = {}
    table = b.object_of(node, what) or {}
    for key, sub in table.items():
        parts = b.split_key(node, key, key_arity)
        if parts is None:
            continue
        for row in b.triples(sub, f"{what}[{key}]", width):
            out[(parts,) + row[:-1]] = row[-1]
    return out


def _build_bicategory(b: _Builder, node: JNode) -> Optional[Bicategory]:
    obj = b.object_of(node, "bicategory")
    if obj is None:
        return None
    objects_node = b.fieldnode(node, obj, "objects")
    hom_node = b.fieldnode(node, obj, "hom")
    identity_node = b.fieldnode(node, obj, "identity1")
    compose_node = b.fieldnode(node, obj, "compose1")
    if None in (objects_node, hom_node, identity_node, compose_node):
        return None
    objects = []
    for item in b.array_of(objects_node, "objects") or []:
        label = b.string_of(item, "object label")
        if label is not None:
            if label in objects:
                b.err(item, "E002", f"duplicate object {label!r}")
            else:
                objects.append(label)
    hom = _build_hom_table(b, hom_node, objects)
    identity1 = b.string_map(identity_node, "identity1")
    compose1 = _keyed_triples(b, compose_node, "compose1", 3)
    hcompose2 = None
    hc_node = b.fieldnode(node, obj, "hcompose2", required=False)
    if hc_node is not None:
        hcompose2 = _keyed_triples(b, hc_node, "hcompose2", 3)
    associator = None
    assoc_node = b.fieldnode(node, obj, "associator", required=False)
    if assoc_node is not None:
        associator = _keyed_triples(b, assoc_node, "associator", 4, width=4)
    unitors = {}
    for key in ("unitor_l", "unitor_r"):
        sub = b.fieldnode(node, obj, key, required=False)
        if sub is None:
            unitors[key] = None
            continue
        table = {}
        for hom_key, entries in (b.object_of(sub, key) or {}).items():
            parts = b.split_key(sub, hom_key, 2)
            if parts is None:
                continue
            for f, cell in b.triples(entries, key, width=2):
                table[(parts[0], parts[1], f)] = cell
        unitors[key] = table
    if b.diags or hom is None:
        return None
    try:
        return validate_bicategory(
            objects, hom, identity1, compose1, hcompose2, associator, unitors["unitor_l"], unitors["unitor_r"]
        )
    except MissingCompositionData as exc:
        b.err(node, "MissingCompositionData", str(exc))
        return None


def _build_lax_functor(b: _Builder, node: JNode) -> Optional[LaxFunctorBicat]:
    obj = b.object_of(node, "laxfunctor")
    if obj is None:
        return None
    source_node = b.fieldnode(node, obj, "source")
    target_node = b.fieldnode(node, obj, "target")
    object_node = b.fieldnode(node, obj, "object_map")
    hf_node = b.fieldnode(node, obj, "hom_functors")
    if None in (source_node, target_node, object_node, hf_node):
        return None
    source = _build_bicategory(b, source_node)
    target = _build_bicategory(b, target_node)
    if source is None or target is None:
        return None
    object_map = b.string_map(object_node, "object_map")
    for x in source.objects:
        if x not in object_map:
            b.err(object_node, "E010", f"object_map is missing {x!r}")
    for x, img in object_map.items():
        if img not in target.objects:
            b.err(object_node, "E001", f"object_map[{x!r}] references undeclared object {img!r}")
    if b.diags:
        return None
    hom_functors = {}
    table = b.object_of(hf_node, "hom_functors") or {}
    for x in source.objects:
        for y in source.objects:
            key = f"{x}|{y}"
            if key not in table:
                b.err(hf_node, "E010", f"hom_functors is missing {key!r}")
                continue
            fun = _build_plain_functor(
                b, table[key], source.hom_at(x, y), target.hom_at(object_map[x], object_map[y])
            )
            if fun is not None:
                hom_functors[(x, y)] = fun
    phi = None
    phi_node = b.fieldnode(node, obj, "phi", required=False)
    if phi_node is not None:
        phi = _keyed_triples(b, phi_node, "phi", 3)
    psi = None
    psi_node = b.fieldnode(node, obj, "psi", required=False)
    if psi_node is not None:
        psi = b.string_map(psi_node, "psi")
    if b.diags:
        return None
    try:
        return validate_lax_functor(source, target, object_map, hom_functors, phi, psi)
    except MissingCompositionData as exc:
        b.err(node, "MissingCompositionData", str(exc))
        return None


def _build_laxcat(b: _Builder, node: JNode) -> Optional[LaxFunctorToCat]:
    obj = b.object_of(node, "laxcat")
    if obj is None:
        return None
    base_node = b.fieldnode(node, obj, "base")
    fibers_node = b.fieldnode(node, obj, "fibers")
    pullbacks_node = b.fieldnode(node, obj, "pullbacks")
    if None in (base_node, fibers_node, pullbacks_node):
        return None
    base = _build_category(b, base_node)
    if base is None:
        return None
    fibers = {}
    fiber_table = b.object_of(fibers_node, "fibers") or {}
    for key, sub in fiber_table.items():
        if key not in base.objects:
            b.err(sub, "E001", f"fiber key {key!r} is not a base object")
            continue
        cat = _build_category(b, sub)
        if cat is not None:
            fibers[key] = cat
    for x in base.objects:
        if x not in fiber_table:
            b.err(fibers_node, "E013", f"missing fiber for base object {x!r}")
    if b.diags:
        return None
    pullbacks = {}
    pb_table = b.object_of(pullbacks_node, "pullbacks") or {}
    base_names = {m.name for m in base.morphisms}
    for key, sub in pb_table.items():
        if key not in base_names:
            b.err(sub, "E001", f"pullback key {key!r} is not a base morphism")
            continue
        m = base.morphism(key)
        fun = _build_plain_functor(b, sub, fibers[m.dst], fibers[m.src])
        if fun is not None:
            pullbacks[key] = fun
    for m in base.morphisms:
        if m.name not in pb_table:
            b.err(pullbacks_node, "E012", f"missing pullback functor for base morphism {m.name!r}")
    comp_iso = None
    comp_node = b.fieldnode(node, obj, "comp_iso", required=False)
    if comp_node is not None:
        comp_iso = {}
        for key, sub in (b.object_of(comp_node, "comp_iso") or {}).items():
            parts = b.split_key(comp_node, key, 2)
            if parts is not None:
                comp_iso[parts] = b.string_map(sub, f"comp_iso[{key}]")
    unit_iso = None
    unit_node = b.fieldnode(node, obj, "unit_iso", required=False)
    if unit_node is not None:
        unit_iso = {}
        for key, sub in (b.object_of(unit_node, "unit_iso") or {}).items():
            unit_iso[key] = b.string_map(sub, f"unit_iso[{key}]")
    if b.diags:
        return None
    try:
        return validate_laxcat(LaxFunctorToCat(base, fibers, pullbacks, comp_iso, unit_iso))
    except IncoherentData as exc:
        b.err(node, "IncoherentData", str(exc))
        return None


def _build_trihom(b: _Builder, node: JNode) -> Optional[Trihomomorphism]:
    obj = b.object_of(node, "trihom")
    if obj is None:
        return None
    base_node = b.fieldnode(node, obj, "base")
    fibers_node = b.fieldnode(node, obj, "fibers")
    pb1_node = b.fieldnode(node, obj, "pullback1")
    pb2_node = b.fieldnode(node, obj, "pullback2")
    if None in (base_node, fibers_node, pb1_node, pb2_node):
        return None
    base = _build_bicategory(b, base_node)
    if base is None:
        return None
    fibers = {}
    fiber_table = b.object_of(fibers_node, "fibers") or {}
    for key, sub in fiber_table.items():
        if key not in base.objects:
            b.err(sub, "E001", f"fiber key {key!r} is not a base object")
            continue
        bicat = _build_bicategory(b, sub)
        if bicat is not None:
            fibers[key] = bicat
    for x in base.objects:
        if x not in fiber_table:
            b.err(fibers_node, "E013", f"missing fiber for base object {x!r}")
    if b.diags:
        return None
    pullback1 = {}
    pb1_table = b.object_of(pb1_node, "pullback1") or {}
    for bb in base.objects:
        for cc in base.objects:
            for f in base.onecells(bb, cc):
                key = f"{bb}|{cc}|{f}"
                if key not in pb1_table:
                    b.err(pb1_node, "E012", f"missing pullback lax functor {key!r}")
                    continue
                lax = _build_fiber_lax_functor(b, pb1_table[key], fibers[cc], fibers[bb])
                if lax is not None:
                    pullback1[(bb, cc, f)] = lax
    pullback2 = {}
    pb2_table = b.object_of(pb2_node, "pullback2") or {}
    for bb in base.objects:
        for cc in base.objects:
            hom = base.hom_at(bb, cc)
            for alpha in hom.morphisms:
                key = f"{bb}|{cc}|{alpha.name}"
                if key not in pb2_table:
                    b.err(pb2_node, "E014", f"missing components for base 2-cell {alpha.name!r}")
                    continue
                comps = b.string_map(pb2_table[key], f"pullback2[{key}]")
                for y in fibers[cc].objects:
                    if y not in comps:
                        b.err(
                            pb2_table[key],
                            "E014",
                            f"missing component of {alpha.name!r} at fiber object {y!r}",
                        )
                pullback2[(bb, cc, alpha.name)] = comps
    if b.diags:
        return None
    try:
        return validate_trihomomorphism(Trihomomorphism(base, fibers, pullback1, pullback2))
    except IllTypedComponent as exc:
        b.err(node, "IllTypedComponent", str(exc))
        return None


def _build_fiber_lax_functor(b: _Builder, node: JNode, source: Bicategory, target: Bicategory):
    obj = b.object_of(node, "pullback lax functor")
    if obj is None:
        return None
    object_node = b.fieldnode(node, obj, "object_map")
    hf_node = b.fieldnode(node, obj, "hom_functors")
    if None in (object_node, hf_node):
        return None
    object_map = b.string_map(object_node, "object_map")
    for x in source.objects:
        if x not in object_map:
            b.err(object_node, "E010", f"object_map is missing {x!r}")
    if b.diags:
        return None
    hom_functors = {}
    table = b.object_of(hf_node, "hom_functors") or {}
    for x in source.objects:
        for y in source.objects:
            key = f"{x}|{y}"
            if key not in table:
                b.err(hf_node, "E010", f"hom_functors is missing {key!r}")
                continue
            fun = _build_plain_functor(
                b, table[key], source.hom_at(x, y), target.hom_at(object_map[x], object_map[y])
            )
            if fun is not None:
                hom_functors[(x, y)] = fun
    if b.diags:
        return None
    try:
        return validate_lax_functor(source, target, object_map, hom_functors)
    except MissingCompositionData as exc:
        b.err(node, "MissingCompositionData", str(exc))
        return None


_BUILDERS = {
    "category": _build_category,
    "functor": _build_functor,
    "catgraph": _build_catgraph,
    "bicategory": _build_bicategory,
    "laxfunctor": _build_lax_functor,
    "laxcat": _build_laxcat,
    "trihom": _build_trihom,
}


def parse(text: str) -> ParseResult:
    """Parse a .catj document; never raises, always reports every problem found."""
    try:
        root = _Scanner(text).parse()
    except _SyntaxProblem as exc:
        return ParseResult(None, (Diagnostic("error", exc.line, exc.col, "E005", exc.message),))
    builder = _Builder()
    obj = builder.object_of(root, "document")
    if obj is None:
        return ParseResult(None, tuple(builder.diags))
    kind_node = builder.fieldnode(root, obj, "kind")
    if kind_node is None:
        return ParseResult(None, tuple(builder.diags))
    kind = builder.string_of(kind_node, "kind")
    if kind is None:
        return ParseResult(None, tuple(builder.diags))
    if kind not in _BUILDERS:
        builder.err(kind_node, "E004", f"unknown kind {kind!r}")
        return ParseResult(None, tuple(builder.diags))
    value = _BUILDERS[kind](builder, root)
    if value is None or builder.diags:
        return ParseResult(None, tuple(builder.diags))
    return ParseResult(Document(kind, value), ())


def _category_body(cat: FinCategory) -> dict:
    return {
        "objects": list(cat.objects),
        "morphisms": sorted([m.name, m.src, m.dst] for m in cat.morphisms),
        "identity": dict(cat.identity),
        "compose": sorted([g, f, h] for (g, f), h in cat.compose.items()),
    }


def _functor_body(fun: Functor) -> dict:
    return {
        "source": _category_body(fun.source),
        "target": _category_body(fun.target),
        "object_map": dict(fun.object_map),
        "morphism_map": dict(fun.morphism_map),
    }


def _maps_body(fun: Functor) -> dict:
    return {"object_map": dict(fun.object_map), "morphism_map": dict(fun.morphism_map)}


def _catgraph_body(g: CatGraph) -> dict:
    return {
        "objects": list(g.objects),
        "hom": {
            f"{x}|{y}": _category_body(g.hom_at(x, y))
            for x in g.objects
            for y in g.objects
            if g.hom_at(x, y).objects
        },
    }


def _keyed_triple_body(table: Mapping, key_arity: int) -> dict:
    out: dict[str, list] = {}
    for key, value in table.items():
        parts, rest = key[0], list(key[1:])
        assert len(parts) == key_arity
        out.setdefault("|".join(parts), []).append(rest + [value])
    return {k: sorted(v) for k, v in sorted(out.items())}


def _bicategory_body(b: Bicategory) -> dict:
    body = _catgraph_body(b.graph)
    body["identity1"] = dict(b.identity1 or {})
    body["compose1"] = _keyed_triple_body(b.compose1 or {}, 3)
    if b.hcompose2 is not None:
        body["hcompose2"] = _keyed_triple_body(b.hcompose2, 3)
    if b.associator is not None:
        body["associator"] = _keyed_triple_body(b.associator, 4)
    for name, table in (("unitor_l", b.unitor_l), ("unitor_r", b.unitor_r)):
        if table is not None:
            out: dict[str, list] = {}
            for (x, y, f), cell in table.items():
                out.setdefault(f"{x}|{y}", []).append([f, cell])
            body[name] = {k: sorted(v) for k, v in sorted(out.items())}
    return body


def _laxfunctor_body(l: LaxFunctorBicat) -> dict:
    body = {
        "source": _bicategory_body(l.source),
        "target": _bicategory_body(l.target),
        "object_map": dict(l.object_map),
        "hom_functors": {f"{x}|{y}": _maps_body(fun) for (x, y), fun in l.hom_functors.items()},
    }
    if l.phi is not None:
        body["phi"] = _keyed_triple_body(l.phi, 3)
    if l.psi is not None:
        body["psi"] = dict(l.psi)
    return body


def _laxcat_body(f: LaxFunctorToCat) -> dict:
    body = {
        "base": _category_body(f.base),
        "fibers": {b: _category_body(cat) for b, cat in f.fiber.items()},
        "pullbacks": {m: _maps_body(fun) for m, fun in f.pullback.items()},
    }
    if f.comp_iso is not None:
        body["comp_iso"] = {f"{g}|{ff}": dict(comps) for (g, ff), comps in sorted(f.comp_iso.items())}
    if f.unit_iso is not None:
        body["unit_iso"] = {b: dict(comps) for b, comps in sorted(f.unit_iso.items())}
    return body


def _fiber_lax_body(l: LaxFunctorBicat) -> dict:
    return {
        "object_map": dict(l.object_map),
        "hom_functors": {f"{x}|{y}": _maps_body(fun) for (x, y), fun in l.hom_functors.items()},
    }


def _trihom_body(t: Trihomomorphism) -> dict:
    return {
        "base": _bicategory_body(t.base),
        "fibers": {b: _bicategory_body(bi) for b, bi in t.fiber.items()},
        "pullback1": {f"{b}|{c}|{f}": _fiber_lax_body(lax) for (b, c, f), lax in sorted(t.pullback1.items())},
        "pullback2": {f"{b}|{c}|{a}": dict(comps) for (b, c, a), comps in sorted(t.pullback2.items())},
    }


def serialize(value) -> str:
    """Canonical text: sorted keys and entries, byte-identical across runs."""
    if isinstance(value, Document):
        value = value.value
    if isinstance(value, FinCategory):
        body, kind = _category_body(value), "category"
    elif isinstance(value, Functor):
        body, kind = _functor_body(value), "functor"
    elif isinstance(value, Trihomomorphism):
        body, kind = _trihom_body(value), "trihom"
    elif isinstance(value, LaxFunctorToCat):
        body, kind = _laxcat_body(value), "laxcat"
    elif isinstance(value, LaxFunctorBicat):
        body, kind = _laxfunctor_body(value), "laxfunctor"
    elif isinstance(value, Bicategory):
        body, kind = _bicategory_body(value), "bicategory"
    elif isinstance(value, CatGraph):
        body, kind = _catgraph_body(value), "catgraph"
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return json.dumps({"kind": kind, **body}, indent=2, sort_keys=True) + "\n"
