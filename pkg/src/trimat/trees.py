"""Alternating plane trees and the index pairs that drive the trace moments.

Two exact counting results live here: rooted alternating plane trees on k+1
vertices with the root above its children (k^k of them), and the index-pair
classes whose bipartite walk graphs are doubly-traversed trees (the hat class
has C(n, k+1) k^k members).  Everything is exact integer enumeration; the
only floating-point object is the generating-function partial sum.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetError, InputError

__all__ = [
    "PlaneTree",
    "IndexPair",
    "is_alternating",
    "count_alternating_trees",
    "classify_index_pair",
    "count_delta_hat",
    "iter_index_pairs",
    "walk_profile",
    "egf_partial_sum",
    "NOT_CONTRIBUTING",
    "DELTA",
    "DELTA_HAT",
]

TREE_K_CAP = 7
PAIR_BUDGET = 100_000_000

NOT_CONTRIBUTING = "not-contributing"
DELTA = "delta"
DELTA_HAT = "delta-hat"


@dataclass(frozen=True)
class PlaneTree:
    """Rooted tree with ordered children and a label bijection to {1..t}.

    children[v] lists v's children in plane order; labels[v] is v's label.
    Vertex ids are 0-based indices into both tuples.
    """

    children: tuple
    labels: tuple
    root: int = 0

    def __post_init__(self):
        ch = tuple(tuple(c) for c in self.children)
        lb = tuple(int(x) for x in self.labels)
        object.__setattr__(self, "children", ch)
        object.__setattr__(self, "labels", lb)
        t = len(ch)
        if len(lb) != t or t == 0:
            raise InputError("labels must match the vertex count")
        if sorted(lb) != list(range(1, t + 1)):
            raise InputError("labels must be a bijection onto {1..t}")
        if not 0 <= self.root < t:
            raise InputError("root out of range")
        seen = [False] * t
        stack = [self.root]
        seen[self.root] = True
        count = 1
        while stack:
            v = stack.pop()
            for c in ch[v]:
                if not 0 <= c < t or seen[c]:
                    raise InputError("children lists must form a tree under the root")
                seen[c] = True
                count += 1
                stack.append(c)
        if count != t:
            raise InputError("tree is not connected")

    def parent_of(self):
        par = [-1] * len(self.children)
        for v, ch in enumerate(self.children):
            for c in ch:
                par[c] = v
        return par


@dataclass(frozen=True)
class IndexPair:
    """A pair of equal-length index vectors (i, j)."""

    i: tuple
    j: tuple

    def __post_init__(self):
        iv = tuple(int(x) for x in self.i)
        jv = tuple(int(x) for x in self.j)
        object.__setattr__(self, "i", iv)
        object.__setattr__(self, "j", jv)
        if len(iv) == 0 or len(iv) != len(jv):
            raise InputError("i and j must be nonempty and of equal length")
        if any(x < 1 for x in iv + jv):
            raise InputError("indices must be >= 1")

    @property
    def k(self):
        return len(self.i)


def is_alternating(tree: PlaneTree) -> bool:
    """True iff labels alternate along every path.

    Equivalent local test: each vertex's neighbors all lie on the same side
    of its own label, i.e. every vertex is a local extremum.
    """
    par = tree.parent_of()
    lb = tree.labels
    for v in range(len(lb)):
        nbrs = list(tree.children[v])
        if par[v] >= 0:
            nbrs.append(par[v])
        if not nbrs:
            continue
        below = [lb[u] < lb[v] for u in nbrs]
        if any(below) and not all(below):
            return False
    return True


@lru_cache(maxsize=None)
def _shapes(t: int):
    """All plane-tree shapes on t vertices as nested child tuples."""
    if t == 1:
        return ((),)
    out = []
    for forest in _forests(t - 1):
        out.append(forest)
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(m: int):
    """Ordered forests with m total vertices, as tuples of shapes."""
    if m == 0:
        return ((),)
    out = []
    for first_size in range(1, m + 1):
        for head in _shapes(first_size):
            for rest in _forests(m - first_size):
                out.append((head,) + rest)
    return tuple(out)


def _flatten_shape(shape):
    """Nested child tuples -> (children lists, parent array), ids in BFS order."""
    children = [[]]
    parent = [-1]
    queue = [(0, shape)]
    while queue:
        vid, sub = queue.pop(0)
        for child_shape in sub:
            cid = len(children)
            children.append([])
            parent.append(vid)
            children[vid].append(cid)
            queue.append((cid, child_shape))
    return children, parent


def count_alternating_trees(k: int) -> int:
    """Exact count of alternating plane trees on k+1 vertices, root on top.

    Shapes come from recursive composition generation; labels are assigned
    in breadth-first order with pruning against the already-labeled parent,
    which keeps k = 6, 7 far below the naive t! x Catalan cost.
    """
    if not (isinstance(k, int) and k >= 1):
        raise InputError("k must be a positive integer")
    if k > TREE_K_CAP:
        raise BudgetError(f"alternating-tree enumeration capped at k = {TREE_K_CAP}")
    t = k + 1
    total = 0
    for shape in _shapes(t):
        children, parent = _flatten_shape(shape)
        # depth parity fixes which side of its parent each vertex must be on;
        # the root is even (a local max), so root > children comes for free
        even = [True] * t
        order = list(range(t))  # BFS ids: parents precede children
        for v in order[1:]:
            even[v] = not even[parent[v]]
        labels = [0] * t
        used = [False] * (t + 1)

        def place(pos: int) -> int:
            if pos == t:
                return 1
            v = order[pos]
            p = parent[v]
            found = 0
            for lab in range(1, t + 1):
                if used[lab]:
                    continue
                if p >= 0:
                    if even[v]:
                        if lab < labels[p]:
                            continue
                    else:
                        if lab > labels[p]:
                            continue
                used[lab] = True
                labels[v] = lab
                found += place(pos + 1)
                used[lab] = False
            return found

        total += place(0)
    return total


def _walk_edges(pair: IndexPair):
    """Undirected edge sequence of the closed bipartite walk."""
    k = pair.k
    edges = []
    for r in range(k):
        a = (1, pair.i[r])
        b = (2, pair.j[r])
        c = (1, pair.i[(r + 1) % k])
        edges.append(frozenset((a, b)))
        edges.append(frozenset((b, c)))
    return edges


def walk_profile(pair: IndexPair):
    """(vertex count, distinct edge count, every edge traversed exactly twice).

    Recomputed straight from the walk, independent of classify_index_pair,
    so tests can cross-check the classifier against the raw traversal.
    """
    edges = _walk_edges(pair)
    counts = Counter(edges)
    vertices = set()
    for e in edges:
        vertices |= e
    return len(vertices), len(counts), all(c == 2 for c in counts.values())


def classify_index_pair(pair, n: int) -> str:
    """Strongest class of an index pair: delta-hat > delta > not-contributing.

    delta requires the walk graph to be a tree on k+1 vertices with every
    edge traversed exactly twice and each j no larger than its two cyclic
    i-neighbors; delta-hat additionally needs the i and j value sets
    disjoint (so the tree carries k+1 distinct values).
    """
    if not isinstance(pair, IndexPair):
        pair = IndexPair(*pair)
    if not (isinstance(n, int) and n >= 1):
        raise InputError("n must be a positive integer")
    if any(x > n for x in pair.i + pair.j):
        raise InputError("indices must lie in {1..n}")
    k = pair.k
    edges = _walk_edges(pair)
    counts = Counter(edges)
    vertices = set()
    for e in edges:
        vertices |= e
    if len(vertices) != k + 1 or len(counts) != k:
        return NOT_CONTRIBUTING
    if any(c != 2 for c in counts.values()):
        return NOT_CONTRIBUTING
    # tree check: k edges on k+1 vertices is a tree iff connected
    adj = {}
    for e in counts:
        a, b = tuple(e)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != len(vertices):
        return NOT_CONTRIBUTING
    if any(pair.j[r] > min(pair.i[r], pair.i[(r + 1) % k]) for r in range(k)):
        return NOT_CONTRIBUTING
    if set(pair.i) & set(pair.j):
        return DELTA
    return DELTA_HAT


def iter_index_pairs(n: int, k: int):
    """All (i, j) pairs over {1..n}^k, in lexicographic order."""
    rng = range(1, n + 1)
    for i in itertools.product(rng, repeat=k):
        for j in itertools.product(rng, repeat=k):
            yield IndexPair(i, j)


def count_delta_hat(n: int, k: int):
    """Brute-force |delta-hat(n, k)| plus its closed form C(n, k+1) k^k.

    Returns (enumerated, closed_form); agreement of the two is the point.
    """
    if not (isinstance(n, int) and isinstance(k, int) and n >= 1 and k >= 1):
        raise InputError("n and k must be positive integers")
    if n ** (2 * k) > PAIR_BUDGET:
        raise BudgetError(f"enumeration over n^(2k) = {n ** (2 * k)} exceeds budget {PAIR_BUDGET}")
    enumerated = sum(
        1 for pair in iter_index_pairs(n, k) if classify_index_pair(pair, n) == DELTA_HAT
    )
    closed = math.comb(n, k + 1) * k**k
    return enumerated, closed


def egf_partial_sum(u, terms: int):
    """Partial sum of the tree generating function: sum (k-1)^(k-1) u^k / k!.

    The 0^0 = 1 convention supplies the k = 1 term.  Convergence requires
    |u| < 1/e, which is enforced rather than silently extrapolated.
    """
    if not (isinstance(terms, int) and terms >= 1):
        raise InputError("terms must be a positive integer")
    u = complex(u)
    if abs(u) >= 1.0 / math.e:
        raise InputError("need |u| < 1/e for the series to converge")
    total = 0j
    for k in range(1, terms + 1):
        coeff = (k - 1) ** (k - 1) if k > 1 else 1
        total += coeff * u**k / math.factorial(k)
    if u.imag == 0:
        return complex(total.real, 0.0)
    return total
