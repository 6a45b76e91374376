"""Partial order q << p iff q | p - 1, and the rooted (Pratt) trees it induces."""
from __future__ import annotations

import graphlib
from dataclasses import dataclass
from functools import lru_cache

from .errors import ComputationError, DomainError
from .primes import factorize, is_prime, primes_up_to

DEFAULT_DEPTH_LIMIT = 64


def _require_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return p


@dataclass(frozen=True)
class PrattTree:
    """Root ``prime`` over the trees of the prime factors of prime - 1.

    Children repeat with multiplicity and are sorted ascending; the tree
    of 2 is the single vertex.
    """

    prime: int
    children: tuple["PrattTree", ...] = ()

    @property
    def child_primes(self) -> list[int]:
        return [c.prime for c in self.children]

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def shape(self) -> tuple:
        """The unlabeled tree as nested tuples."""
        return tuple(c.shape() for c in self.children)

    def to_text(self) -> str:
        """One level in B+ notation, e.g. ``t(5)=B+(t(2),t(2))``."""
        args = ",".join(f"t({q})" for q in self.child_primes)
        return f"t({self.prime})=B+({args})"

    def to_nested_text(self) -> str:
        """Full unlabeled expansion; the leaf t(2) is written as a bullet."""
        if not self.children:
            return "•"
        return "B+(" + ",".join(c.to_nested_text() for c in self.children) + ")"

    def to_dot(self) -> str:
        lines = [f"digraph pratt_{self.prime} {{"]
        counter = [0]

        def walk(node):
            me = f"n{counter[0]}"
            counter[0] += 1
            lines.append(f'  {me} [label="{node.prime}"];')
            for c in node.children:
                child = walk(c)
                lines.append(f"  {me} -> {child};")
            return me

        walk(self)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {"prime": self.prime, "children": [c.as_dict() for c in self.children]}


def label_from_shape(shape: tuple) -> int:
    """Recover the root prime from an unlabeled tree, bottom-up.

    Each vertex is 1 + the product of its children's labels, so a leaf is 2.
    """
    prod = 1
    for child in shape:
        prod *= label_from_shape(child)
    return prod + 1


def poset_parents(p: int) -> set[int]:
    """Primes q with q | p - 1."""
    p = _require_prime(p)
    if p == 2:
        return set()
    return {q for q, _ in factorize(p - 1)}


def descendants_of_dilation(p: int) -> set[int]:
    """Primes q dividing p - 1; each gives a dilation experiment a=1, q."""
    return poset_parents(p)


@lru_cache(maxsize=4096)
def _tree(p: int) -> PrattTree:
    if p == 2:
        return PrattTree(2)
    kids = []
    for q, e in factorize(p - 1):
        kids.extend([_tree(q)] * e)
    return PrattTree(p, tuple(kids))


def pratt_tree(p: int, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> PrattTree:
    p = _require_prime(p)
    tree = _tree(p)
    if tree.depth() > depth_limit:
        raise ComputationError(f"Pratt tree of {p} exceeds depth limit {depth_limit}")
    return tree


@dataclass(frozen=True)
class PosetGraph:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        self.check()

    def predecessors(self) -> dict[int, list[int]]:
        preds: dict[int, list[int]] = {v: [] for v in self.vertices}
        for q, p in self.edges:
            preds[p].append(q)
        return preds

    def topological_order(self) -> list[int]:
        """Raises ``graphlib.CycleError`` if the graph has a cycle."""
        return list(graphlib.TopologicalSorter(self.predecessors()).static_order())

    def reaches_two(self) -> bool:
        """Every vertex reaches 2 by walking edges backwards."""
        if not self.vertices:
            return True
        preds = self.predecessors()
        ok = {2}
        for v in self.topological_order():
            if v in ok or any(q in ok for q in preds[v]):
                ok.add(v)
        return len(ok) == len(self.vertices)

    def check(self) -> None:
        preds = self.predecessors()
        for v in self.vertices:
            if v != 2 and not preds[v]:
                raise ComputationError(f"prime {v} has no smaller parent")
        self.topological_order()
        if not self.reaches_two():
            raise ComputationError("some vertex does not flow to 2")

    def to_dot(self) -> str:
        lines = ["digraph poset {"]
        lines += [f'  p{v} [label="{v}"];' for v in self.vertices]
        lines += [f"  p{q} -> p{p};" for q, p in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def poset_graph(limit: int) -> PosetGraph:
    """All primes <= limit with edges q -> p whenever q | p - 1."""
    if limit < 2:
        raise DomainError("poset_graph needs limit >= 2")
    primes = primes_up_to(int(limit)).tolist()
    edges = []
    for p in primes:
        if p > 2:
            edges.extend((q, p) for q, _ in factorize(p - 1))
    edges.sort()
    return PosetGraph(tuple(primes), tuple(edges))
