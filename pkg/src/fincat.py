"""Finite categories, morphism classes and functor categories."""

import itertools
import json
import logging
import threading
from dataclasses import dataclass, field
from typing import (Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional,
                    Sequence, Tuple, Union)

import numpy as np
from pydantic import TypeAdapter

from config import settings
from .errors import CapExceededError, CategoryError, ClassMismatchError, PosetCycleError
from .models import CategoryDocument, CategoryFile, PosetFile

logger = logging.getLogger(__name__)

Ref = Union[int, str]

_CATEGORY_ADAPTER = TypeAdapter(CategoryDocument)


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of set bits, lowest first."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def popcount(bits: int) -> int:
    return bin(bits).count("1")


class FiniteCategory:
    """A finite category stored as dense index tables.

    Objects and morphisms are numbered in sorted-id order. ``table[g, f]`` is the index
    of ``g∘f``, or -1 when ``cod(f) != dom(g)``. Instances are immutable; derived tables
    (lifting matrix, factorizations, retracts) are memoized through :meth:`cached`.
    """

    def __init__(self, name: str, objects: Sequence[str], morphisms: Sequence[str],
                 dom: Sequence[int], cod: Sequence[int], identity: Sequence[int],
                 table: np.ndarray):
        self.name = name
        self.objects: Tuple[str, ...] = tuple(objects)
        self.morphisms: Tuple[str, ...] = tuple(morphisms)
        self.dom: Tuple[int, ...] = tuple(int(x) for x in dom)
        self.cod: Tuple[int, ...] = tuple(int(x) for x in cod)
        self.identity: Tuple[int, ...] = tuple(int(m) for m in identity)
        self.table = np.array(table, dtype=np.int32, copy=True)
        self.table.setflags(write=False)

        self.object_index: Dict[str, int] = {x: i for i, x in enumerate(self.objects)}
        self.morphism_index: Dict[str, int] = {m: i for i, m in enumerate(self.morphisms)}

        homs: List[List[List[int]]] = [[[] for _ in self.objects] for _ in self.objects]
        for m in range(len(self.morphisms)):
            homs[self.dom[m]][self.cod[m]].append(m)
        self._hom = tuple(tuple(tuple(h) for h in row) for row in homs)
        self._identity_of = {m: x for x, m in enumerate(self.identity)}
        # plain-list copy of the table for scalar lookups in search loops
        self.composites: List[List[int]] = self.table.tolist()

        self._cache: Dict[str, Any] = {}
        self._lock = threading.RLock()

    # -- lookup -----------------------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_morphisms) - 1

    def mor(self, ref: Ref) -> int:
        """Resolve a morphism id or index to its index."""
        if isinstance(ref, (int, np.integer)):
            if 0 <= int(ref) < self.n_morphisms:
                return int(ref)
            raise CategoryError(f"morphism index {ref} out of range in {self.name}")
        try:
            return self.morphism_index[ref]
        except KeyError:
            raise CategoryError(f"unknown morphism {ref!r} in {self.name}",
                                witness=(str(ref),)) from None

    def obj(self, ref: Ref) -> int:
        """Resolve an object id or index to its index."""
        if isinstance(ref, (int, np.integer)):
            if 0 <= int(ref) < self.n_objects:
                return int(ref)
            raise CategoryError(f"object index {ref} out of range in {self.name}")
        try:
            return self.object_index[ref]
        except KeyError:
            raise CategoryError(f"unknown object {ref!r} in {self.name}",
                                witness=(str(ref),)) from None

    def hom(self, x: Ref, y: Ref) -> Tuple[int, ...]:
        return self._hom[self.obj(x)][self.obj(y)]

    def compose(self, g: Ref, f: Ref) -> int:
        """Return ``g∘f``."""
        gi, fi = self.mor(g), self.mor(f)
        h = int(self.table[gi, fi])
        if h < 0:
            raise CategoryError(
                f"{self.morphisms[gi]} and {self.morphisms[fi]} are not composable",
                witness=(self.morphisms[gi], self.morphisms[fi]))
        return h

    def is_identity(self, m: Ref) -> bool:
        return self.mor(m) in self._identity_of

    def is_iso(self, m: Ref) -> bool:
        return self.mor(m) in self.isomorphisms()

    def label(self, m: int) -> str:
        return self.morphisms[m]

    def labels(self, bits: int) -> List[str]:
        return [self.morphisms[m] for m in iter_bits(bits)]

    def cached(self, key: str, factory: Callable[[], Any]) -> Any:
        """Memoize a derived table; the first caller computes it, later callers only read."""
        value = self._cache.get(key)
        if value is None:
            with self._lock:
                value = self._cache.get(key)
                if value is None:
                    value = factory()
                    self._cache[key] = value
        return value

    # -- classes ----------------------------------------------------------------

    def morphism_class(self, members: Iterable[Ref] = ()) -> "MorphismClass":
        bits = 0
        for m in members:
            bits |= 1 << self.mor(m)
        return MorphismClass(self, bits)

    def empty(self) -> "MorphismClass":
        return MorphismClass(self, 0)

    def all_morphisms(self) -> "MorphismClass":
        return MorphismClass(self, self.full_mask)

    def identities(self) -> "MorphismClass":
        return self.morphism_class(self.identity)

    def isomorphisms(self) -> "MorphismClass":
        return self.cached("isomorphisms", self._compute_isomorphisms)

    def _compute_isomorphisms(self) -> "MorphismClass":
        bits = 0
        for m in range(self.n_morphisms):
            a, b = self.dom[m], self.cod[m]
            for k in self._hom[b][a]:
                if self.table[k, m] == self.identity[a] and self.table[m, k] == self.identity[b]:
                    bits |= 1 << m
                    break
        return MorphismClass(self, bits)

    def full_subcategory_mask(self, objects: Iterable[Ref]) -> int:
        """Bits of every morphism whose domain and codomain lie in ``objects``."""
        chosen = {self.obj(x) for x in objects}
        bits = 0
        for m in range(self.n_morphisms):
            if self.dom[m] in chosen and self.cod[m] in chosen:
                bits |= 1 << m
        return bits

    # -- laws -------------------------------------------------------------------

    def check_laws(self) -> None:
        """Scan every composable tuple; raise :class:`CategoryError` on the first violation."""
        n = self.n_morphisms
        if n == 0:
            return
        T = self.table.astype(np.int64)
        dom = np.array(self.dom, dtype=np.int64)
        cod = np.array(self.cod, dtype=np.int64)

        if (T >= n).any():
            g, f = (int(v) for v in np.argwhere(T >= n)[0])
            raise CategoryError(f"composite of ({self.morphisms[g]}, {self.morphisms[f]}) "
                                f"references unknown morphism index {int(T[g, f])}",
                                witness=(self.morphisms[g], self.morphisms[f]))

        composable = cod[None, :] == dom[:, None]
        defined = T >= 0
        mismatch = composable != defined
        if mismatch.any():
            g, f = (int(v) for v in np.argwhere(mismatch)[0])
            what = "missing composite" if composable[g, f] else "composite defined for non-composable pair"
            raise CategoryError(f"{what} ({self.morphisms[g]}, {self.morphisms[f]})",
                                witness=(self.morphisms[g], self.morphisms[f]))

        gs, fs = np.nonzero(defined)
        hs = T[gs, fs]
        wrong = (dom[hs] != dom[fs]) | (cod[hs] != cod[gs])
        if wrong.any():
            k = int(np.argmax(wrong))
            g, f = int(gs[k]), int(fs[k])
            raise CategoryError(
                f"composite {self.morphisms[int(hs[k])]} of ({self.morphisms[g]}, {self.morphisms[f]}) "
                "has the wrong domain or codomain",
                witness=(self.morphisms[g], self.morphisms[f]))

        everything = np.arange(n)
        for x, i in enumerate(self.identity):
            into = everything[cod == x]
            out = everything[dom == x]
            bad_left = into[T[i, into] != into]
            bad_right = out[T[out, i] != out]
            if bad_left.size or bad_right.size:
                other = int(bad_left[0]) if bad_left.size else int(bad_right[0])
                raise CategoryError(
                    f"bad identity: {self.morphisms[i]} is not a unit for {self.morphisms[other]}",
                    witness=(self.morphisms[i], self.morphisms[other]))

        for h in range(n):
            G = np.nonzero(defined[h])[0]
            if G.size == 0:
                continue
            inner = T[G]
            mask = inner >= 0
            left = T[h][np.where(mask, inner, 0)]
            right = T[T[h, G]]
            violation = mask & (left != right)
            if violation.any():
                gi, f = (int(v) for v in np.argwhere(violation)[0])
                g = int(G[gi])
                raise CategoryError(
                    "composition is not associative on "
                    f"({self.morphisms[h]}, {self.morphisms[g]}, {self.morphisms[f]})",
                    witness=(self.morphisms[h], self.morphisms[g], self.morphisms[f]))

    # -- misc -------------------------------------------------------------------

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": len(self.morphisms),
            "identities": [self.morphisms[m] for m in self.identity],
            "isomorphisms": self.isomorphisms().ids(),
        }

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.dom == other.dom and self.cod == other.cod
                and self.identity == other.identity
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.objects, self.morphisms, self.dom, self.cod))

    def __repr__(self) -> str:
        return (f"FiniteCategory({self.name!r}, objects={len(self.objects)}, "
                f"morphisms={len(self.morphisms)})")


@dataclass(frozen=True, eq=False)
class MorphismClass:
    """A set of morphisms of one category, stored as an integer bitset."""

    category: FiniteCategory
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.category.n_morphisms:
            raise CategoryError(f"class bits outside the morphisms of {self.category.name}")

    def bits_of(self, other: "MorphismClass") -> int:
        if not isinstance(other, MorphismClass):
            raise TypeError(f"expected MorphismClass, got {type(other).__name__}")
        if other.category is not self.category and other.category != self.category:
            raise ClassMismatchError(
                f"classes live on different categories: {self.category.name} and {other.category.name}")
        return other.bits

    def __contains__(self, m: Ref) -> bool:
        return bool(self.bits >> self.category.mor(m) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __or__(self, other: "MorphismClass") -> "MorphismClass":
        return MorphismClass(self.category, self.bits | self.bits_of(other))

    def __and__(self, other: "MorphismClass") -> "MorphismClass":
        return MorphismClass(self.category, self.bits & self.bits_of(other))

    def __sub__(self, other: "MorphismClass") -> "MorphismClass":
        return MorphismClass(self.category, self.bits & ~self.bits_of(other))

    def __le__(self, other: "MorphismClass") -> bool:
        return self.bits & ~self.bits_of(other) == 0

    def __ge__(self, other: "MorphismClass") -> bool:
        return self.bits_of(other) & ~self.bits == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MorphismClass):
            return NotImplemented
        return self.bits == other.bits and (
            other.category is self.category or other.category == self.category)

    def __hash__(self) -> int:
        return hash(self.bits)

    def complement(self) -> "MorphismClass":
        return MorphismClass(self.category, self.category.full_mask & ~self.bits)

    def first(self) -> Optional[int]:
        if not self.bits:
            return None
        return (self.bits & -self.bits).bit_length() - 1

    def ids(self) -> List[str]:
        return self.category.labels(self.bits)

    def __repr__(self) -> str:
        return f"MorphismClass({self.category.name!r}, {self.ids()})"


# -- construction -------------------------------------------------------------

def _first_duplicate(values: Sequence[str]) -> Optional[str]:
    seen = set()
    for v in values:
        if v in seen:
            return v
        seen.add(v)
    return None


def _assemble(name: str, objects: Sequence[str],
              morphisms: Sequence[Tuple[str, str, str]],
              identities: Mapping[str, str],
              composition: Iterable[Tuple[str, str, str]]) -> FiniteCategory:
    """Index, fill and law-check a category; identity composites are filled in."""
    duplicate = _first_duplicate(list(objects))
    if duplicate is not None:
        raise CategoryError(f"duplicate object id {duplicate!r}", witness=(duplicate,))
    objs = sorted(objects)
    oidx = {x: i for i, x in enumerate(objs)}

    ends: Dict[str, Tuple[str, str]] = {}
    for mid, d, c in morphisms:
        if mid in ends:
            raise CategoryError(f"duplicate morphism id {mid!r}", witness=(mid,))
        for end in (d, c):
            if end not in oidx:
                raise CategoryError(f"morphism {mid!r} references unknown object {end!r}",
                                    witness=(mid,))
        ends[mid] = (d, c)

    for x in objs:
        mid = identities.get(x)
        if mid is None:
            raise CategoryError(f"object {x!r} has no identity", witness=(x,))
        if mid not in ends:
            raise CategoryError(f"identity {mid!r} of {x!r} is not a declared morphism", witness=(mid,))
        if ends[mid] != (x, x):
            raise CategoryError(f"bad identity: {mid!r} is not an endomorphism of {x!r}", witness=(mid,))
    for x in identities:
        if x not in oidx:
            raise CategoryError(f"identity declared for unknown object {x!r}", witness=(x,))

    mors = sorted(ends)
    midx = {m: i for i, m in enumerate(mors)}
    n = len(mors)
    dom = [oidx[ends[m][0]] for m in mors]
    cod = [oidx[ends[m][1]] for m in mors]
    identity = [midx[identities[x]] for x in objs]
    if len(set(identity)) != len(identity):
        raise CategoryError("one morphism is declared as the identity of two objects")

    table = np.full((n, n), -1, dtype=np.int32)
    for g, f, h in composition:
        for ref in (g, f, h):
            if ref not in midx:
                raise CategoryError(f"composition triple ({g}, {f}, {h}) references unknown morphism {ref!r}",
                                    witness=(g, f))
        gi, fi, hi = midx[g], midx[f], midx[h]
        if cod[fi] != dom[gi]:
            raise CategoryError(f"composite listed for non-composable pair ({g}, {f})", witness=(g, f))
        if dom[hi] != dom[fi] or cod[hi] != cod[gi]:
            raise CategoryError(
                f"composite of ({g}, {f}) is {h}, which runs {objs[dom[hi]]}→{objs[cod[hi]]} "
                f"instead of {objs[dom[fi]]}→{objs[cod[gi]]}", witness=(g, f))
        if table[gi, fi] not in (-1, hi):
            raise CategoryError(f"conflicting composites listed for ({g}, {f})", witness=(g, f))
        table[gi, fi] = hi

    for m in range(n):
        for a, b in ((identity[cod[m]], m), (m, identity[dom[m]])):
            if table[a, b] == -1:
                table[a, b] = m
            elif table[a, b] != m:
                raise CategoryError(
                    f"bad identity: {mors[a]}∘{mors[b]} is listed as {mors[table[a, b]]}, expected {mors[m]}",
                    witness=(mors[a], mors[b]))

    category = FiniteCategory(name, objs, mors, dom, cod, identity, table)
    category.check_laws()
    return category


def validate_category(raw: Union[CategoryFile, PosetFile, Mapping[str, Any]]) -> FiniteCategory:
    """Build a category from a file document, enforcing every category law."""
    document = raw if isinstance(raw, (CategoryFile, PosetFile)) else _CATEGORY_ADAPTER.validate_python(raw)
    if isinstance(document, PosetFile):
        return poset_category(document.elements, document.leq, name=document.name)

    morphisms = [(m.id, m.dom, m.cod) for m in document.morphisms]
    declared = {m.id: (m.dom, m.cod) for m in document.morphisms}
    identities = dict(document.identities)
    for x in document.objects:
        if x in identities:
            continue
        auto = f"id_{x}"
        if auto in declared and declared[auto] != (x, x):
            raise CategoryError(f"cannot insert identity {auto!r}: id already used", witness=(auto,))
        if auto not in declared:
            morphisms.append((auto, x, x))
            declared[auto] = (x, x)
        identities[x] = auto

    category = _assemble(document.name, document.objects, morphisms, identities,
                         [tuple(t) for t in document.composition])
    logger.info(f"Validated category {category.name}: {category.n_objects} objects, "
                f"{category.n_morphisms} morphisms")
    return category


def quote_name(name: str, delimiters: str) -> str:
    """The name itself, or its JSON string form when it contains a delimiter or a quote."""
    if any(ch in delimiters or ch == '"' for ch in name):
        return json.dumps(name, ensure_ascii=False)
    return name


def _poset_arrow(x: str, y: str) -> str:
    if x == y:
        return f"id_{quote_name(x, '<')}"
    return f"{quote_name(x, '<')}<{quote_name(y, '<')}"


def poset_category(elements: Iterable[str], relation: Iterable[Sequence[str]],
                   name: str = "P") -> FiniteCategory:
    """The category with one morphism x→y iff x ≤ y in the reflexive-transitive closure."""
    elems = list(elements)
    duplicate = _first_duplicate(elems)
    if duplicate is not None:
        raise CategoryError(f"duplicate element {duplicate!r}", witness=(duplicate,))
    order = sorted(elems)
    idx = {e: i for i, e in enumerate(order)}
    k = len(order)

    leq = np.eye(k, dtype=bool)
    for pair in relation:
        a, b = pair
        for e in (a, b):
            if e not in idx:
                raise CategoryError(f"relation pair ({a}, {b}) references unknown element {e!r}",
                                    witness=(a, b))
        leq[idx[a], idx[b]] = True
    for m in range(k):
        leq |= leq[:, m:m + 1] & leq[m:m + 1, :]

    cycle = leq & leq.T & ~np.eye(k, dtype=bool)
    if cycle.any():
        i, j = (int(v) for v in np.argwhere(cycle)[0])
        raise PosetCycleError(f"relation has a cycle: {order[i]} ≤ {order[j]} ≤ {order[i]}",
                              witness=(order[i], order[j]))

    morphisms = []
    for i, j in zip(*np.nonzero(leq)):
        x, y = order[int(i)], order[int(j)]
        morphisms.append((_poset_arrow(x, y), x, y))
    identities = {x: _poset_arrow(x, x) for x in order}

    composition = []
    for i, j in zip(*np.nonzero(leq)):
        if i == j:
            continue
        for l in np.nonzero(leq[j])[0]:
            if l == j:
                continue
            x, y, z = order[int(i)], order[int(j)], order[int(l)]
            composition.append((_poset_arrow(y, z), _poset_arrow(x, y), _poset_arrow(x, z)))

    return _assemble(name, order, morphisms, identities, composition)


# -- finite (co)limits ------------------------------------------------------------

def pushout(category: FiniteCategory, f: Ref, g: Ref) -> Optional[Tuple[int, int, int]]:
    """Pushout of the span b ←f– a –g→ c as (p, u: b→p, v: c→p), or None if none exists.

    Universality is checked exhaustively: for every object q, composing with u and v must be
    a bijection from Hom(p, q) onto the cocones at q.
    """
    found = pushouts(category, f, g)
    return found[0] if found else None


def pushouts(category: FiniteCategory, f: Ref, g: Ref) -> Tuple[Tuple[int, int, int], ...]:
    """Every universal cocone on the span, in index order (several only when isomorphisms exist)."""
    fi, gi = category.mor(f), category.mor(g)
    if category.dom[fi] != category.dom[gi]:
        raise CategoryError(
            f"pushout needs a span: {category.label(fi)} and {category.label(gi)} have different domains",
            witness=(category.label(fi), category.label(gi)))
    return category.cached(f"pushout:{fi}:{gi}", lambda: _compute_pushouts(category, fi, gi))


def _compute_pushouts(category: FiniteCategory, f: int, g: int) -> Tuple[Tuple[int, int, int], ...]:
    T = category.composites
    b, c = category.cod[f], category.cod[g]
    cocones_at = []
    for q in range(category.n_objects):
        cocones_at.append({(u, v) for u in category.hom(b, q) for v in category.hom(c, q)
                           if T[u][f] == T[v][g]})
    universal_cocones = []
    for p in range(category.n_objects):
        for u, v in sorted(cocones_at[p]):
            universal = True
            for q in range(category.n_objects):
                images = {(T[m][u], T[m][v]) for m in category.hom(p, q)}
                if len(images) != len(category.hom(p, q)) or images != cocones_at[q]:
                    universal = False
                    break
            if universal:
                universal_cocones.append((p, u, v))
    return tuple(universal_cocones)


def product(category: FiniteCategory, factors: Sequence[Ref]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Product of a finite family of objects as (p, projections), or None.

    The empty family yields a terminal object.
    """
    ys = tuple(category.obj(y) for y in factors)
    key = "product:" + ",".join(str(y) for y in ys)
    found = category.cached(key, lambda: _compute_product(category, ys) or ())
    return found or None


def _compute_product(category: FiniteCategory, ys: Tuple[int, ...]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    T = category.table
    cone_counts = []
    for q in range(category.n_objects):
        count = 1
        for y in ys:
            count *= len(category.hom(q, y))
        cone_counts.append(count)
    for p in range(category.n_objects):
        for projections in itertools.product(*(category.hom(p, y) for y in ys)):
            universal = True
            for q in range(category.n_objects):
                maps = category.hom(q, p)
                if len(maps) != cone_counts[q]:
                    universal = False
                    break
                images = {tuple(int(T[pi, m]) for pi in projections) for m in maps}
                if len(images) != len(maps):
                    universal = False
                    break
            if universal:
                return (p, tuple(projections))
    return None


def terminal_object(category: FiniteCategory) -> Optional[int]:
    found = product(category, ())
    return None if found is None else found[0]


def is_retract(category: FiniteCategory, f: Ref, g: Ref) -> bool:
    """True iff f is a retract of g in the arrow category (exhaustive search)."""
    fi, gi = category.mor(f), category.mor(g)
    T = category.table
    a, b = category.dom[fi], category.cod[fi]
    c, d = category.dom[gi], category.cod[gi]
    id_a, id_b = category.identity[a], category.identity[b]

    sections = [(i, r) for i in category.hom(a, c) for r in category.hom(c, a) if T[r, i] == id_a]
    if not sections:
        return False
    cosections = [(j, s) for j in category.hom(b, d) for s in category.hom(d, b) if T[s, j] == id_b]
    for i, r in sections:
        for j, s in cosections:
            if T[gi, i] == T[j, fi] and T[fi, r] == T[s, gi]:
                return True
    return False


def retract_table(category: FiniteCategory) -> Tuple[int, ...]:
    """For each morphism g, the bitset of morphisms that are retracts of g."""
    def compute() -> Tuple[int, ...]:
        rows = []
        for g in range(category.n_morphisms):
            bits = 0
            for f in range(category.n_morphisms):
                if is_retract(category, f, g):
                    bits |= 1 << f
            rows.append(bits)
        return tuple(rows)
    return category.cached("retracts", compute)


# -- functor categories ---------------------------------------------------------

Functor = Tuple[Tuple[int, ...], Tuple[int, ...]]


@dataclass(frozen=True, eq=False)
class DiagramIndex:
    """The functor category M^C with its object and morphism tables.

    ``functors[X]`` is the (object images, morphism images) pair of the total object X;
    ``components[phi]`` lists the M-morphism at each shape object for the total morphism phi.
    """

    base: FiniteCategory
    shape: FiniteCategory
    total: FiniteCategory
    functors: Tuple[Functor, ...]
    components: Tuple[Tuple[int, ...], ...]
    _functor_lookup: Dict[Functor, int] = field(repr=False)
    _morphism_lookup: Dict[Tuple[int, int, Tuple[int, ...]], int] = field(repr=False)

    def evaluate(self, X: Ref, alpha: Ref) -> int:
        """X(α) as a base object index."""
        return self.functors[self.total.obj(X)][0][self.shape.obj(alpha)]

    def component_of(self, phi: Ref, alpha: Ref) -> int:
        return self.components[self.total.mor(phi)][self.shape.obj(alpha)]

    def find_object(self, functor: Functor) -> Optional[int]:
        return self._functor_lookup.get(functor)

    def find_morphism(self, source: int, target: int, components: Sequence[int]) -> Optional[int]:
        return self._morphism_lookup.get((source, target, tuple(components)))

    def constant_functor(self, A: Ref) -> Functor:
        a = self.base.obj(A)
        return ((a,) * self.shape.n_objects, (self.base.identity[a],) * self.shape.n_morphisms)

    def pointed_diagram(self, A: Ref) -> int:
        X = self.find_object(self.constant_functor(A))
        if X is None:
            raise CategoryError(f"constant diagram at {self.base.objects[self.base.obj(A)]} "
                                "is missing from the functor category index")
        return X

    def pointed_map(self, f: Ref) -> int:
        fi = self.base.mor(f)
        source = self.pointed_diagram(self.base.dom[fi])
        target = self.pointed_diagram(self.base.cod[fi])
        phi = self.find_morphism(source, target, (fi,) * self.shape.n_objects)
        if phi is None:
            raise CategoryError(f"pointed map of {self.base.label(fi)} is missing from the index")
        return phi

    def pointed_objects(self) -> List[int]:
        return [self.pointed_diagram(a) for a in range(self.base.n_objects)]

    def pointed_subcategory_mask(self) -> int:
        """Morphisms of the full subcategory on pointed objects."""
        return self.total.full_subcategory_mask(self.pointed_objects())

    def pointed_maps_mask(self) -> int:
        bits = 0
        for f in range(self.base.n_morphisms):
            bits |= 1 << self.pointed_map(f)
        return bits

    def componentwise(self, cls: MorphismClass) -> MorphismClass:
        """Morphisms of M^C whose every component lies in a class of M."""
        self.base.morphism_class().bits_of(cls)
        bits = 0
        for phi, comps in enumerate(self.components):
            if all(cls.bits >> c & 1 for c in comps):
                bits |= 1 << phi
        return MorphismClass(self.total, bits)

    def component_union(self, cls: MorphismClass) -> MorphismClass:
        """All components of all members of a class of M^C, as a class of M."""
        self.total.morphism_class().bits_of(cls)
        bits = 0
        for phi in cls:
            for c in self.components[phi]:
                bits |= 1 << c
        return MorphismClass(self.base, bits)

    def check_invariants(self) -> None:
        """Every object is a functor, every morphism natural, composition componentwise."""
        M, C = self.base, self.shape
        for X, (objs, mors) in enumerate(self.functors):
            for x in range(C.n_objects):
                if mors[C.identity[x]] != M.identity[objs[x]]:
                    raise CategoryError(f"{self.total.objects[X]} does not preserve identities")
            for v in range(C.n_morphisms):
                for u in range(C.n_morphisms):
                    w = int(C.table[v, u])
                    if w >= 0 and mors[w] != M.table[mors[v], mors[u]]:
                        raise CategoryError(f"{self.total.objects[X]} does not preserve composition",
                                            witness=(C.label(v), C.label(u)))
        for phi, comps in enumerate(self.components):
            X, Y = self.total.dom[phi], self.total.cod[phi]
            for u in range(C.n_morphisms):
                a, b = C.dom[u], C.cod[u]
                left = M.table[self.functors[Y][1][u], comps[a]]
                right = M.table[comps[b], self.functors[X][1][u]]
                if left != right:
                    raise CategoryError(f"{self.total.label(phi)} is not natural at {C.label(u)}",
                                        witness=(self.total.label(phi), C.label(u)))
        T = self.total.table
        for psi in range(self.total.n_morphisms):
            for phi in range(self.total.n_morphisms):
                chi = int(T[psi, phi])
                if chi < 0:
                    continue
                expected = tuple(int(M.table[p, q]) for p, q in zip(self.components[psi], self.components[phi]))
                if self.components[chi] != expected:
                    raise CategoryError("composition in the functor category is not componentwise",
                                        witness=(self.total.label(psi), self.total.label(phi)))


def _enumerate_functors(M: FiniteCategory, C: FiniteCategory) -> List[Functor]:
    nonidentity = [u for u in range(C.n_morphisms) if not C.is_identity(u)]
    position = {u: k for k, u in enumerate(nonidentity)}

    # each composition constraint F(v∘u) = F(v)∘F(u) is checked once all three are assigned
    checks: List[List[Tuple[int, int, int]]] = [[] for _ in nonidentity]
    for v in range(C.n_morphisms):
        for u in range(C.n_morphisms):
            w = int(C.table[v, u])
            if w < 0:
                continue
            involved = [position[m] for m in (v, u, w) if m in position]
            if involved:
                checks[max(involved)].append((v, u, w))

    functors = []
    for objs in itertools.product(range(M.n_objects), repeat=C.n_objects):
        images = [-1] * C.n_morphisms
        for x in range(C.n_objects):
            images[C.identity[x]] = M.identity[objs[x]]

        def extend(k: int) -> None:
            if k == len(nonidentity):
                functors.append((objs, tuple(images)))
                return
            u = nonidentity[k]
            for candidate in M.hom(objs[C.dom[u]], objs[C.cod[u]]):
                images[u] = candidate
                if all(images[w] == M.table[images[v], images[uu]] for v, uu, w in checks[k]):
                    extend(k + 1)
            images[u] = -1

        extend(0)
    return functors


def _enumerate_transformations(M: FiniteCategory, C: FiniteCategory,
                               X: Functor, Y: Functor) -> List[Tuple[int, ...]]:
    # naturality at u: a→b involves the components at a and b; check when the later one is set
    squares: List[List[int]] = [[] for _ in range(C.n_objects)]
    for u in range(C.n_morphisms):
        if C.is_identity(u):
            continue
        squares[max(C.dom[u], C.cod[u])].append(u)

    found = []
    comps = [-1] * C.n_objects

    def extend(x: int) -> None:
        if x == C.n_objects:
            found.append(tuple(comps))
            return
        for candidate in M.hom(X[0][x], Y[0][x]):
            comps[x] = candidate
            if all(M.table[Y[1][u], comps[C.dom[u]]] == M.table[comps[C.cod[u]], X[1][u]]
                   for u in squares[x]):
                extend(x + 1)
        comps[x] = -1

    extend(0)
    return found


def _label_part(name: str) -> str:
    return quote_name(name, ",|<>=[]")


def functor_category(M: FiniteCategory, C: FiniteCategory, cap: Optional[int] = None) -> DiagramIndex:
    """Materialize M^C: all functors C→M and all natural transformations between them."""
    cap = settings.functor_cap if cap is None else cap
    bound = M.n_objects ** C.n_objects
    if bound > cap:
        raise CapExceededError(
            f"functor category {M.name}^{C.name} may have up to {bound} objects "
            f"(|Ob {M.name}|^|Ob {C.name}| = {M.n_objects}^{C.n_objects}), above the cap {cap}")

    logger.info(f"Building functor category {M.name}^{C.name} (object bound {bound})")
    functors = _enumerate_functors(M, C)
    if len(functors) > cap:
        raise CapExceededError(f"functor category {M.name}^{C.name} has {len(functors)} objects, "
                               f"above the cap {cap}")

    shared: Dict[Tuple[int, ...], int] = {}
    for objs, _ in functors:
        shared[objs] = shared.get(objs, 0) + 1
    nonidentity = [u for u in range(C.n_morphisms) if not C.is_identity(u)]

    def functor_label(F: Functor) -> str:
        text = ",".join(_label_part(M.objects[x]) for x in F[0])
        if shared[F[0]] > 1:
            text += "|" + ",".join(_label_part(M.morphisms[F[1][u]]) for u in nonidentity)
        return f"<{text}>"

    labels = [functor_label(F) for F in functors]

    transformations: List[Tuple[int, int, Tuple[int, ...]]] = []
    for i, X in enumerate(functors):
        for j, Y in enumerate(functors):
            for comps in _enumerate_transformations(M, C, X, Y):
                transformations.append((i, j, comps))
    hom_sizes: Dict[Tuple[int, int], int] = {}
    for i, j, _ in transformations:
        hom_sizes[(i, j)] = hom_sizes.get((i, j), 0) + 1

    def transformation_label(i: int, j: int, comps: Tuple[int, ...]) -> str:
        text = f"{labels[i]}=>{labels[j]}"
        if hom_sizes[(i, j)] > 1:
            text += "[" + ",".join(_label_part(M.morphisms[c]) for c in comps) + "]"
        return text

    tlabels = [transformation_label(*t) for t in transformations]
    by_key = {(i, j, comps): k for k, (i, j, comps) in enumerate(transformations)}

    identities = {}
    for i, (objs, _) in enumerate(functors):
        k = by_key[(i, i, tuple(M.identity[x] for x in objs))]
        identities[labels[i]] = tlabels[k]

    composition = []
    for (j, l, outer) in transformations:
        for (i, jj, inner) in transformations:
            if jj != j:
                continue
            comps = tuple(int(M.table[p, q]) for p, q in zip(outer, inner))
            k = by_key[(i, l, comps)]
            composition.append((tlabels[by_key[(j, l, outer)]], tlabels[by_key[(i, j, inner)]], tlabels[k]))

    total = _assemble(f"{M.name}^{C.name}", labels,
                      [(tlabels[k], labels[i], labels[j]) for k, (i, j, _) in enumerate(transformations)],
                      identities, composition)

    functor_at = [None] * total.n_objects
    for i, F in enumerate(functors):
        functor_at[total.obj(labels[i])] = F
    components_at = [None] * total.n_morphisms
    morphism_lookup = {}
    for k, (i, j, comps) in enumerate(transformations):
        phi = total.mor(tlabels[k])
        components_at[phi] = comps
        morphism_lookup[(total.obj(labels[i]), total.obj(labels[j]), comps)] = phi

    index = DiagramIndex(
        base=M, shape=C, total=total,
        functors=tuple(functor_at), components=tuple(components_at),
        _functor_lookup={F: X for X, F in enumerate(functor_at)},
        _morphism_lookup=morphism_lookup,
    )
    logger.info(f"Functor category {total.name}: {total.n_objects} objects, "
                f"{total.n_morphisms} morphisms")
    return index


def pointed_diagram(A: Ref, index: DiagramIndex) -> int:
    """The constant diagram at A, as an object of M^C."""
    return index.pointed_diagram(A)


def pointed_map(f: Ref, index: DiagramIndex) -> int:
    """The natural transformation with every component equal to f."""
    return index.pointed_map(f)


def component_of(phi: Ref, alpha: Ref, index: DiagramIndex) -> int:
    """The α-component φ(α): X(α)→Y(α) of a morphism of M^C."""
    return index.component_of(phi, alpha)
