"""Non-planar rooted trees, forests, and their scalar statistics.

Canonical form: a tree is encoded as a nested bracket string, children sorted
by their own encodings ("[]" is the single vertex, "[[]]" the 2-chain,
"[[][]]" the cherry).  Two trees are equal iff their keys are equal iff they
are isomorphic as rooted posets.  A forest is a multiset of trees; its key is
the juxtaposition of the sorted member keys (empty string for the empty
forest).

Poset orientation: the root is MINIMAL.  A k-linearization is a surjective
strictly order preserving map onto {1..k} (smaller labels closer to the root);
the weak version drops surjectivity.  All linearization counts are counts of
maps on a concrete vertex set, not of maps up to isomorphism.

Statistics: sigma(t) is the automorphism count, tree_factorial the usual
t! = |t| * (branch factorials), num_linearizations m(t) = |t|!/t!, and
murua_omega the alternating sum over k of k-linearization counts.
murua_omega_recursive recomputes omega through the Bernoulli-weighted sum over
root-containing vertex selections of B-(t); the two must agree on every tree.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .exactnum import bernoulli

__all__ = [
    "RootedTree", "Forest", "LEAF",
    "tree_from_string", "forest_from_string",
    "enumerate_trees", "enumerate_forests", "tree_rank", "tree_by_rank",
    "b_plus", "b_minus",
    "sigma", "tree_factorial", "forest_factorial", "num_linearizations",
    "count_k_linearizations", "count_weak_k_linearizations",
    "murua_omega", "murua_omega_forest", "murua_omega_recursive",
    "LabeledForest", "labeled", "root_subforests", "induced_subforest",
    "cut_above",
]


class RootedTree:
    """An unlabeled rooted tree with multiset children, canonical and hashable."""

    __slots__ = ("children", "size", "key")

    def __init__(self, children=()):
        kids = tuple(sorted(children, key=lambda c: c.key))
        self.children = kids
        self.size = 1 + sum(c.size for c in kids)
        self.key = "[" + "".join(c.key for c in kids) + "]"

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return "RootedTree(%r)" % (self.key,)

    def __str__(self):
        return self.key


LEAF = RootedTree()


class Forest:
    """A multiset of rooted trees (the empty forest is the unit monomial)."""

    __slots__ = ("trees", "size", "key")

    def __init__(self, trees=()):
        ts = tuple(sorted(trees, key=lambda t: t.key))
        self.trees = ts
        self.size = sum(t.size for t in ts)
        self.key = "".join(t.key for t in ts)

    def __eq__(self, other):
        return isinstance(other, Forest) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self.trees)

    def __repr__(self):
        return "Forest(%r)" % (self.key,)

    def __str__(self):
        return self.key


EMPTY_FOREST = Forest()


def _parse_trees(s: str, pos: int, stop: int):
    trees = []
    while pos < stop:
        if s[pos] != "[":
            raise ValueError("bad bracket string at position %d: %r" % (pos, s))
        depth = 0
        for j in range(pos, stop):
            if s[j] == "[":
                depth += 1
            elif s[j] == "]":
                depth -= 1
                if depth == 0:
                    break
        else:
            raise ValueError("unbalanced brackets: %r" % (s,))
        trees.append(RootedTree(_parse_trees(s, pos + 1, j)))
        pos = j + 1
    return trees


def tree_from_string(s: str) -> RootedTree:
    """Parse a canonical (or any) bracket string into a tree."""
    trees = _parse_trees(s, 0, len(s))
    if len(trees) != 1:
        raise ValueError("expected exactly one tree, got %d in %r" % (len(trees), s))
    return trees[0]


def forest_from_string(s: str) -> Forest:
    """Parse juxtaposed bracket strings into a forest ("" is the empty forest)."""
    return Forest(_parse_trees(s, 0, len(s)))


def b_plus(f: Forest) -> RootedTree:
    """Add a common root below the forest."""
    return RootedTree(f.trees)


def b_minus(t: RootedTree) -> Forest:
    """Remove the root, leaving the forest of branches."""
    return Forest(t.children)


_TREES: dict[int, tuple] = {}
_FORESTS: dict[int, tuple] = {}
_RANK: dict[int, dict[str, int]] = {}


def enumerate_trees(n: int):
    """All rooted trees with n vertices, ascending canonical key; stable order."""
    if n < 1:
        raise ValueError("enumerate_trees needs n >= 1, got %r" % (n,))
    if n not in _TREES:
        _TREES[n] = tuple(sorted((b_plus(f) for f in enumerate_forests(n - 1)),
                                 key=lambda t: t.key))
    return list(_TREES[n])


def enumerate_forests(n: int):
    """All forests with n total vertices, ascending canonical key."""
    if n < 0:
        raise ValueError("enumerate_forests needs n >= 0, got %r" % (n,))
    if n not in _FORESTS:
        pool = [t for s in range(1, n + 1) for t in enumerate_trees(s)]

        def pick(total, start):
            if total == 0:
                yield ()
                return
            for i in range(start, len(pool)):
                t = pool[i]
                if t.size <= total:
                    for rest in pick(total - t.size, i):
                        yield (t,) + rest

        _FORESTS[n] = tuple(sorted((Forest(ts) for ts in pick(n, 0)),
                                   key=lambda f: f.key))
    return list(_FORESTS[n])


def tree_rank(t: RootedTree) -> int:
    """Ordinal of t within enumerate_trees(t.size); (size, rank) is stable."""
    ranks = _RANK.get(t.size)
    if ranks is None:
        ranks = {u.key: i for i, u in enumerate(enumerate_trees(t.size))}
        _RANK[t.size] = ranks
    return ranks[t.key]


def tree_by_rank(size: int, rank: int) -> RootedTree:
    ts = enumerate_trees(size)
    if not 0 <= rank < len(ts):
        raise ValueError("no tree with size %d and ordinal %d" % (size, rank))
    return ts[rank]


_SIGMA: dict[str, int] = {}
_FACTORIAL: dict[str, int] = {}


def sigma(t: RootedTree) -> int:
    """|Aut(t)|: product over distinct branches of m! * sigma(branch)^m."""
    out = _SIGMA.get(t.key)
    if out is None:
        out = 1
        mult: dict[str, int] = {}
        for c in t.children:
            mult[c.key] = mult.get(c.key, 0) + 1
        seen: dict[str, RootedTree] = {c.key: c for c in t.children}
        for key, m in mult.items():
            out *= factorial(m) * sigma(seen[key]) ** m
        _SIGMA[t.key] = out
    return out


def tree_factorial(t: RootedTree) -> int:
    """t! = |t| * product of branch factorials."""
    out = _FACTORIAL.get(t.key)
    if out is None:
        out = t.size
        for c in t.children:
            out *= tree_factorial(c)
        _FACTORIAL[t.key] = out
    return out


def forest_factorial(f: Forest) -> int:
    out = 1
    for t in f.trees:
        out *= tree_factorial(t)
    return out


def num_linearizations(t: RootedTree) -> int:
    """m(t) = |t|!/t!, the number of linear extensions of the tree poset."""
    top, fac = factorial(t.size), tree_factorial(t)
    assert top % fac == 0
    return top // fac


def _as_forest(p) -> Forest:
    if isinstance(p, RootedTree):
        return Forest((p,))
    if isinstance(p, Forest):
        return p
    raise TypeError("expected RootedTree or Forest, got %r" % (type(p),))


_SURJ: dict[tuple, int] = {}


def count_k_linearizations(p, k: int) -> int:
    """Count surjective strictly order preserving maps from p onto {1..k}.

    Peels level sets: f^-1(1) is a nonempty subset of the roots; what remains
    (chosen roots replaced by their branches) is mapped onto {2..k}.  Root
    multiplicities are handled with binomials so the result counts maps on the
    concrete vertex set.
    """
    if k < 1:
        raise ValueError("count_k_linearizations needs k >= 1, got %r" % (k,))
    return _surj(_as_forest(p), k)


def _surj(f: Forest, k: int) -> int:
    if k == 0:
        return 1 if f.size == 0 else 0
    if f.size == 0:
        return 0
    memo_key = (f.key, k)
    out = _SURJ.get(memo_key)
    if out is not None:
        return out
    mult: dict[str, int] = {}
    shape: dict[str, RootedTree] = {}
    for t in f.trees:
        mult[t.key] = mult.get(t.key, 0) + 1
        shape[t.key] = t
    keys = sorted(mult)
    out = 0

    def choose(idx, ways, picked_children, leftover):
        nonlocal out
        if idx == len(keys):
            if len(leftover) < len(f.trees):  # f^-1(1) must be nonempty
                out += ways * _surj(Forest(picked_children + leftover), k - 1)
            return
        key = keys[idx]
        t, m = shape[key], mult[key]
        for c in range(m + 1):
            choose(idx + 1, ways * comb(m, c),
                   picked_children + list(t.children) * c,
                   leftover + [t] * (m - c))

    choose(0, 1, [], [])
    _SURJ[memo_key] = out
    return out


_WEAK: dict[tuple, int] = {}


def count_weak_k_linearizations(p, k: int) -> int:
    """Count strictly order preserving maps from p into {1..k} (not nec. onto).

    Independent of count_k_linearizations: a direct tree recursion
    W(t, k) = sum_{j=1..k} prod_branches W(branch, k - j), multiplicative over
    forest components.  The binomial identity tying the two counts is a test.
    """
    if k < 0:
        raise ValueError("count_weak_k_linearizations needs k >= 0, got %r" % (k,))
    out = 1
    for t in _as_forest(p).trees:
        out *= _weak_tree(t, k)
    return out


def _weak_tree(t: RootedTree, k: int) -> int:
    if k <= 0:
        return 0
    memo_key = (t.key, k)
    out = _WEAK.get(memo_key)
    if out is None:
        out = 0
        for j in range(1, k + 1):
            term = 1
            for c in t.children:
                term *= _weak_tree(c, k - j)
                if term == 0:
                    break
            out += term
        _WEAK[memo_key] = out
    return out


_OMEGA: dict[str, Fraction] = {}


def murua_omega(t: RootedTree) -> Fraction:
    """omega(t) = sum_{k=1..|t|} ((-1)^(k-1)/k) * |k-lin(t)|."""
    out = _OMEGA.get(t.key)
    if out is None:
        out = sum((Fraction((-1) ** (k - 1), k) * count_k_linearizations(t, k)
                   for k in range(1, t.size + 1)), Fraction(0))
        _OMEGA[t.key] = out
    return out


def murua_omega_forest(f: Forest) -> Fraction:
    out = Fraction(1)
    for t in f.trees:
        out *= murua_omega(t)
    return out


class LabeledForest:
    """A concrete-vertex view of a forest: ids in preorder, roots first.

    Vertex ids are assigned by a depth-first walk of the canonical form
    (component trees in key order, children in key order), so ids are a stable
    function of the forest.
    """

    __slots__ = ("forest", "n", "parent", "children", "roots")

    def __init__(self, forest: Forest):
        self.forest = forest
        parent: list = []
        children: list = []
        roots: list = []

        def walk(t: RootedTree, par):
            v = len(parent)
            parent.append(par)
            children.append([])
            if par is None:
                roots.append(v)
            else:
                children[par].append(v)
            for c in t.children:
                walk(c, v)

        for t in forest.trees:
            walk(t, None)
        self.n = len(parent)
        self.parent = tuple(parent)
        self.children = tuple(tuple(cs) for cs in children)
        self.roots = tuple(roots)

    def vertices(self):
        return range(self.n)

    def _shape(self, v, kids) -> RootedTree:
        return RootedTree(self._shape(c, kids) for c in kids[v])

    def induced_subforest(self, sel) -> Forest:
        """Shape of the induced poset on sel: parent = nearest selected ancestor."""
        sel = frozenset(sel)
        kids: dict = {v: [] for v in sel}
        tops = []
        for v in sorted(sel):
            p = self.parent[v]
            while p is not None and p not in sel:
                p = self.parent[p]
            if p is None:
                tops.append(v)
            else:
                kids[p].append(v)
        return Forest(self._shape(v, kids) for v in tops)

    def cut_forest(self, sel) -> Forest:
        """Forest after deleting each edge from a selected vertex to its parent."""
        sel = frozenset(sel)
        kids = [[] for _ in range(self.n)]
        tops = []
        for v in range(self.n):
            p = self.parent[v]
            if p is None or v in sel:
                tops.append(v)
            else:
                kids[p].append(v)
        return Forest(self._shape(v, kids) for v in tops)


_LABELED: dict[str, LabeledForest] = {}


def labeled(f: Forest) -> LabeledForest:
    lf = _LABELED.get(f.key)
    if lf is None:
        lf = LabeledForest(f)
        _LABELED[f.key] = lf
    return lf


def root_subforests(f: Forest):
    """All concrete vertex selections of f containing every root.

    Selections are frozensets of LabeledForest ids.  Every subset of the
    non-root vertices may be added: an arbitrary subset containing the root of
    a tree is again a subtree under the induced order, so these are exactly
    the root-containing subforests.  Deterministic order.
    """
    lf = labeled(f)
    base = frozenset(lf.roots)
    others = [v for v in lf.vertices() if v not in base]
    out = []
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            out.append(base | frozenset(extra))
    return out


def induced_subforest(f: Forest, sel) -> Forest:
    return labeled(f).induced_subforest(sel)


def cut_above(f: Forest, sel) -> Forest:
    """Remove the edges connecting selected vertices with their parents."""
    lf = labeled(f)
    sel = frozenset(sel)
    if not sel.issuperset(lf.roots) or not sel.issubset(lf.vertices()):
        raise ValueError("selection is not a root-containing vertex subset of %r" % (f,))
    return lf.cut_forest(sel)


_OMEGA_REC: dict[str, Fraction] = {}


def murua_omega_recursive(t: RootedTree) -> Fraction:
    """omega via the Bernoulli recursion over root-containing selections.

    omega(t) = sum over selections s of B-(t) containing all its roots of
    (B_|s| / s!) * omega(cut-above-s forest), with s! the forest factorial of
    the selection's induced shape and omega multiplicative over components.
    """
    out = _OMEGA_REC.get(t.key)
    if out is not None:
        return out
    if t.size == 1:
        out = Fraction(1)
    else:
        f = b_minus(t)
        out = Fraction(0)
        for sel in root_subforests(f):
            b = bernoulli(len(sel))
            if b == 0:
                continue
            term = b / forest_factorial(induced_subforest(f, sel))
            for comp in cut_above(f, sel).trees:
                term *= murua_omega_recursive(comp)
                if term == 0:
                    break
            out += term
    _OMEGA_REC[t.key] = out
    return out
