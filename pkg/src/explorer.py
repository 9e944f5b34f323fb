"""Enumeration of model structures and the Bousfield quiver they form."""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import pandas as pd

from config import settings
from .delocalize import is_right_localization, right_intersect
from .errors import (BudgetExceededError, ClassMismatchError, EnumerationIncompleteError,
                     FibrationMismatchError, FinModelError, UnverifiedStructureError)
from .fincat import FiniteCategory, MorphismClass, iter_bits
from .lifting import lifting_bitsets
from .modelstruct import (ModelStructure, two_out_of_three_holds, factorization_table,
                          model_structure_holds, verify)
from .models import CensusRow, QuiverDump, QuiverEdge, QuiverNode, Verdict

logger = logging.getLogger(__name__)


class _Budget:
    """Candidate counter that raises once the ceiling is passed."""

    def __init__(self, ceiling: int, what: str):
        self.ceiling = ceiling
        self.what = what
        self.used = 0

    def spend(self, amount: int = 1, estimate: Optional[int] = None) -> None:
        self.used += amount
        if self.used > self.ceiling:
            detail = f"; estimated search space {estimate}" if estimate is not None else ""
            raise BudgetExceededError(
                f"{self.what}: examined {self.used} candidates, budget is {self.ceiling}{detail}")


# -- enumeration ----------------------------------------------------------------

def closed_right_classes(category: FiniteCategory, budget: _Budget) -> List[int]:
    """Every class R with R = (^☐R)^☐, as bitsets in ascending order.

    These are exactly the intersections of the single-morphism complements {l}^☐, so
    the family is grown one generator at a time as a closure system.
    """
    rows, _ = lifting_bitsets(category)
    closed: Set[int] = {category.full_mask}
    for row in sorted(set(rows)):
        grown = {c & row for c in closed}
        budget.spend(len(grown), estimate=2 ** category.n_morphisms)
        closed |= grown
    return sorted(closed)


def _factorizes(category: FiniteCategory, left: int, right: int) -> bool:
    for row in factorization_table(category):
        if not any(left >> l & 1 and right >> r & 1 for _, l, r in row):
            return False
    return True


def weak_factorization_systems(category: FiniteCategory,
                               budget: Optional[_Budget] = None) -> List[Tuple[int, int]]:
    """All weak factorization systems (L, R) as bitset pairs, ordered by (L, R)."""
    budget = budget or _Budget(settings.enum_budget, "weak factorization systems")
    _, columns = lifting_bitsets(category)
    systems = []
    for right in closed_right_classes(category, budget):
        left = category.full_mask
        for r in iter_bits(right):
            left &= columns[r]
        budget.spend()
        if _factorizes(category, left, right):
            systems.append((left, right))
    return sorted(systems)


def _compose_classes(category: FiniteCategory, outer: int, inner: int) -> int:
    T = category.composites
    bits = 0
    for r in iter_bits(outer):
        for l in iter_bits(inner):
            h = T[r][l]
            if h >= 0:
                bits |= 1 << h
    return bits


def _candidate_structures(category: FiniteCategory, budget: _Budget) -> List[ModelStructure]:
    systems = weak_factorization_systems(category, budget)
    logger.info(f"{category.name}: {len(systems)} weak factorization systems")
    candidates = []
    for (acyclic_cof, fib), (cof, acyclic_fib) in itertools.product(systems, repeat=2):
        if acyclic_cof & ~cof or acyclic_fib & ~fib:
            continue
        budget.spend(estimate=len(systems) ** 2)
        weq = _compose_classes(category, acyclic_fib, acyclic_cof)
        candidates.append(ModelStructure(category, cof=MorphismClass(category, cof),
                                         fib=MorphismClass(category, fib),
                                         weq=MorphismClass(category, weq)))
    return candidates


def _dedupe_sorted(structures: Sequence[ModelStructure]) -> List[ModelStructure]:
    unique: Dict[Tuple[int, int, int], ModelStructure] = {}
    for m in structures:
        unique.setdefault(m.key(), m)
    return [unique[k] for k in sorted(unique)]


def enumerate_model_structures(category: FiniteCategory, budget: Optional[int] = None,
                               workers: Optional[int] = None,
                               cross_check: bool = False) -> List[ModelStructure]:
    """Every model structure on a finite category, verified and in canonical order.

    Candidates come from pairs of weak factorization systems (C∩W, F) and (C, F∩W), with
    W the composites of acyclic fibrations after acyclic cofibrations.
    """
    budget_counter = _Budget(settings.enum_budget if budget is None else budget,
                             f"enumeration on {category.name}")
    workers = settings.workers if workers is None else workers
    logger.info(f"Enumerating model structures on {category.name} "
                f"({category.n_morphisms} morphisms)...")

    candidates = _candidate_structures(category, budget_counter)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verified = list(pool.map(verify, candidates))
    else:
        verified = [verify(m) for m in candidates]
    structures = _dedupe_sorted([m for m in verified if m.verified])
    logger.info(f"Found {len(structures)} model structures on {category.name} "
                f"from {len(candidates)} candidates")

    if cross_check and category.n_morphisms <= settings.naive_oracle_limit:
        naive = naive_model_structures(category)
        if [m.key() for m in naive] != [m.key() for m in structures]:
            missing = [m for m in naive if m not in structures]
            raise EnumerationIncompleteError(
                f"enumeration found {len(structures)} structures, the triple scan {len(naive)}",
                witness=tuple(repr(m) for m in missing[:1]))
    return structures


def naive_model_structures(category: FiniteCategory, limit: Optional[int] = None) -> List[ModelStructure]:
    """Triple scan over every membership assignment of the non-isomorphisms to C, F and W.

    Isomorphisms belong to all three classes of any model structure, so only the remaining
    morphisms vary. W is fixed first and skipped unless it has 2-out-of-3.
    """
    limit = settings.naive_oracle_limit if limit is None else limit
    if category.n_morphisms > limit:
        raise BudgetExceededError(
            f"triple scan on {category.name} needs {category.n_morphisms} morphisms ≤ {limit}")
    isos = category.isomorphisms().bits
    free = [m for m in range(category.n_morphisms) if not isos >> m & 1]
    subsets = []
    for choice in itertools.product((0, 1), repeat=len(free)):
        bits = isos
        for m, bit in zip(free, choice):
            if bit:
                bits |= 1 << m
        subsets.append(bits)

    found = []
    for weq in subsets:
        if not two_out_of_three_holds(category, weq):
            continue
        for cof in subsets:
            for fib in subsets:
                m = ModelStructure(category, cof=MorphismClass(category, cof),
                                   fib=MorphismClass(category, fib), weq=MorphismClass(category, weq))
                if model_structure_holds(m):
                    found.append(m.with_verdict(Verdict.ok("model structure")))
    return _dedupe_sorted(found)


# -- quiver -----------------------------------------------------------------------

@dataclass(frozen=True)
class BousfieldQuiver:
    """Verified model structures on one category with left and right localization edges."""

    category: FiniteCategory
    nodes: Tuple[ModelStructure, ...]
    edges: Tuple[Tuple[int, int, str], ...]

    def index_of(self, m: ModelStructure) -> Optional[int]:
        for i, node in enumerate(self.nodes):
            if node.same_classes(m):
                return i
        return None

    def has_edge(self, source: int, target: int, kind: str) -> bool:
        return (source, target, kind) in self.edges


def is_left_localization(m1: ModelStructure, m2: ModelStructure) -> Verdict:
    """Verified iff m2 is a left Bousfield localization of m1: C₁ = C₂ and W₁ ⊆ W₂."""
    if not (m1.verified and m2.verified):
        raise UnverifiedStructureError("left localization needs verified structures")
    if m1.cof != m2.cof:
        first = ((m1.cof - m2.cof) | (m2.cof - m1.cof)).first()
        return Verdict.refuted("cofibrations", "cofibrations do not agree",
                               witness=(m1.category.label(first),))
    if not m1.weq <= m2.weq:
        return Verdict.refuted("weak equivalences",
                               "a weak equivalence of the first structure is not one of the second",
                               witness=(m1.category.label((m1.weq - m2.weq).first()),))
    return Verdict.ok("left Bousfield localization")


def build_quiver(structures: Sequence[ModelStructure]) -> BousfieldQuiver:
    """Nodes in canonical order; an edge i→j of kind right (left) when F (C) agree and W_i ⊆ W_j."""
    if not structures:
        raise FinModelError("a quiver needs at least one structure")
    category = structures[0].category
    for m in structures:
        if m.category is not category and m.category != category:
            raise ClassMismatchError(f"structures on {category.name} and {m.category.name} mixed")
        if not m.verified:
            raise UnverifiedStructureError(f"quiver nodes must be verified, got {m!r}")
    nodes = tuple(_dedupe_sorted(structures))

    edges = []
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i == j or not a.weq <= b.weq:
                continue
            if a.fib == b.fib:
                edges.append((i, j, "right"))
            if a.cof == b.cof:
                edges.append((i, j, "left"))
    quiver = BousfieldQuiver(category=category, nodes=nodes, edges=tuple(sorted(edges)))
    logger.info(f"Quiver on {category.name}: {len(nodes)} nodes, {len(edges)} edges")
    return quiver


class UnionFind:
    def __init__(self, nodes: Sequence[int]):
        self.parents: Dict[int, int] = {v: v for v in nodes}
        self.heights: Dict[int, int] = {v: 1 for v in nodes}

    def join(self, v1: int, v2: int):
        r1 = self.root(v1)
        r2 = self.root(v2)
        if r1 == r2:
            return
        h1 = self.heights[r1]
        h2 = self.heights[r2]
        if h1 <= h2:
            self.parents[r1] = r2
            self.heights[r2] = max(h2, h1 + 1)
        else:
            self.parents[r2] = r1
            self.heights[r1] = max(h1, h2 + 1)

    def root(self, v0: int) -> int:
        v = v0
        while self.parents[v] != v:
            v = self.parents[v]
        return v

    def groups(self) -> List[List[int]]:
        """Groups sorted internally and by their smallest member."""
        members: Dict[int, List[int]] = {}
        for v in sorted(self.parents):
            members.setdefault(self.root(v), []).append(v)
        return sorted(members.values())


@dataclass(frozen=True)
class ComponentAnalysis:
    components: Tuple[Tuple[int, ...], ...]
    disconnected_pair: Optional[Tuple[int, int]] = None

    @property
    def count(self) -> int:
        return len(self.components)

    def component_of(self, node: int) -> int:
        for k, component in enumerate(self.components):
            if node in component:
                return k
        raise KeyError(node)


def left_localization_edges(quiver: BousfieldQuiver) -> List[Tuple[int, int]]:
    return [(s, t) for s, t, kind in quiver.edges if kind == "left"]


def right_localization_edges(quiver: BousfieldQuiver) -> List[Tuple[int, int]]:
    return [(s, t) for s, t, kind in quiver.edges if kind == "right"]


def component_analysis(quiver: BousfieldQuiver) -> ComponentAnalysis:
    """Connected components of the underlying undirected graph."""
    uf = UnionFind(range(len(quiver.nodes)))
    for source, target, _ in quiver.edges:
        uf.join(source, target)
    components = tuple(tuple(group) for group in uf.groups())
    pair = (components[0][0], components[1][0]) if len(components) > 1 else None
    return ComponentAnalysis(components=components, disconnected_pair=pair)


def corollary_check(m1: ModelStructure, m2: ModelStructure, quiver: BousfieldQuiver) -> Verdict:
    """Certify that same-fibration nodes share a component through M₁ ∩ M₂ and two right edges."""
    if m1.fib != m2.fib:
        raise FibrationMismatchError("fibrations do not agree",
                                     witness=tuple(((m1.fib - m2.fib) | (m2.fib - m1.fib)).ids()))
    i, j = quiver.index_of(m1), quiver.index_of(m2)
    if i is None or j is None:
        raise FinModelError("both structures must be nodes of the quiver")
    n = right_intersect(m1, m2)
    if not n.verified:
        return Verdict.refuted("intersection", "M₁ ∩ M₂ is not a model structure", witness=n.witness)
    k = quiver.index_of(n)
    if k is None:
        raise EnumerationIncompleteError(
            f"M₁ ∩ M₂ is a model structure missing from the quiver on {quiver.category.name}",
            witness=(repr(n),))
    for target in (i, j):
        if target != k and not quiver.has_edge(k, target, "right"):
            return Verdict.refuted("edge", "missing right edge from the intersection node",
                                   witness=(str(k), str(target)))
        if target != k and not is_right_localization(n, quiver.nodes[target]).verified:
            return Verdict.refuted("edge", "right edge without localization",
                                   witness=(str(k), str(target)))
    return Verdict.ok(f"nodes {i} and {j} are joined through node {k}")


def same_fibration_pairs(quiver: BousfieldQuiver) -> List[Tuple[int, int]]:
    return [(i, j) for i, j in itertools.combinations(range(len(quiver.nodes)), 2)
            if quiver.nodes[i].fib == quiver.nodes[j].fib]


# -- exports ---------------------------------------------------------------------

def node_label(m: ModelStructure) -> str:
    return f"C:{len(m.cof)} F:{len(m.fib)} W:{len(m.weq)}"


def quiver_dump(quiver: BousfieldQuiver) -> QuiverDump:
    nodes = [QuiverNode(index=i, label=node_label(m), cof=m.cof.ids(), fib=m.fib.ids(), weq=m.weq.ids())
             for i, m in enumerate(quiver.nodes)]
    edges = [QuiverEdge(source=s, target=t, kind=kind) for s, t, kind in quiver.edges]
    components = [list(c) for c in component_analysis(quiver).components]
    return QuiverDump(category=quiver.category.name, nodes=nodes, edges=edges, components=components)


def to_dot(quiver: BousfieldQuiver) -> str:
    """Graphviz description; right edges solid, left edges dashed."""
    lines = [f'digraph "{quiver.category.name}" {{', "  node [shape=box];"]
    for i, m in enumerate(quiver.nodes):
        tooltip = f"C={','.join(m.cof.ids())} | F={','.join(m.fib.ids())} | W={','.join(m.weq.ids())}"
        lines.append(f'  n{i} [label="{i}: {node_label(m)}", tooltip="{tooltip}"];')
    for source, target, kind in quiver.edges:
        style = "solid" if kind == "right" else "dashed"
        lines.append(f'  n{source} -> n{target} [style={style}, label="{kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def census_row(index: int, m: ModelStructure) -> CensusRow:
    return CensusRow(index=index, category=m.category.name, cof_count=len(m.cof),
                     fib_count=len(m.fib), weq_count=len(m.weq), cof=" ".join(m.cof.ids()),
                     fib=" ".join(m.fib.ids()), weq=" ".join(m.weq.ids()))


def census_table(structures: Sequence[ModelStructure]) -> pd.DataFrame:
    """One row per structure with class sizes and member lists."""
    if not structures:
        return pd.DataFrame()

    data = [census_row(i, m).model_dump() for i, m in enumerate(structures)]
    return pd.DataFrame(data)


def export_to_csv(df: pd.DataFrame, stem: str, output_dir: Optional[str] = None) -> str:
    output_dir = output_dir or settings.output_dir
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)

    filepath = os.path.join(output_dir, f"{stem}.csv")
    df.to_csv(filepath, index=False)
    logger.info(f"Exported {len(df)} rows to {filepath}")

    return filepath
