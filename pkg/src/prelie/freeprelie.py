"""The free pre-Lie algebra on one generator and its Hopf envelope.

Products: graft (the pre-Lie product, sum over attachment vertices), the
symmetric brace t{u1,...,un} by the Oudom-Guin recursion, and the
Grossman-Larson product on forest polynomials.  Coproduct: Connes-Kreimer by
admissible cuts (trunk on the left, pruning on the right), with iterated,
reduced and irreducible variants.  The sigma-weighted pairing makes the
coproduct dual to the Grossman-Larson product.

Series operators: prelie_exp (exp under graft), the Magnus series three ways
(closed form via Murua coefficients, fixed point with Bernoulli weights, and
sol1 of the polynomial exponential), each truncated by total grade.

Truncation discipline: TreeSeries and ForestPoly carry a truncation order
(None = untruncated); binary operations keep the min of the declared orders
and every series operator takes an explicit order argument.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial

from .exactnum import bernoulli
from .lincomb import TermMap, iterate_coproduct
from .trees import (
    EMPTY_FOREST, Forest, LEAF, RootedTree, b_plus, enumerate_trees,
    murua_omega, sigma, tree_factorial,
)

__all__ = [
    "TreeSeries", "ForestPoly", "TensorPoly",
    "graft", "prelie", "brace", "gl_product", "poly_mul",
    "ck_coproduct", "iterated_coproduct", "reduced_iterated_coproduct",
    "irr_iterated_coproduct",
    "pairing", "tensor_pairing",
    "prelie_exp", "cm_coefficient",
    "magnus_closed_form", "magnus_fixed_point", "sol1", "poly_exp",
    "tree_series_to_poly", "tree_part",
]


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TreeSeries(TermMap):
    """Finite rational combination of rooted trees, with a truncation order."""

    __slots__ = ("order",)

    def __init__(self, terms=None, order=None):
        super().__init__(terms)
        self.order = order
        if order is not None:
            for t in [t for t in self.terms if t.size > order]:
                del self.terms[t]

    def _with(self, terms, other=None):
        order = self.order if other is None else _min_order(self.order, other.order)
        return TreeSeries(terms, order)

    @staticmethod
    def sort_key(t):
        return (t.size, t.key)

    def truncated(self, order):
        return TreeSeries(self.terms, _min_order(self.order, order))

    def max_grade(self):
        return max((t.size for t in self.terms), default=0)

    def to_json(self):
        return [{"forest": t.key, "coeff": str(c)} for t, c in self.items()]


class ForestPoly(TermMap):
    """Finite rational combination of forests (empty forest = the unit 1)."""

    __slots__ = ("order",)

    def __init__(self, terms=None, order=None):
        super().__init__(terms)
        self.order = order
        if order is not None:
            for f in [f for f in self.terms if f.size > order]:
                del self.terms[f]

    def _with(self, terms, other=None):
        order = self.order if other is None else _min_order(self.order, other.order)
        return ForestPoly(terms, order)

    @staticmethod
    def sort_key(f):
        return (f.size, f.key)

    def truncated(self, order):
        return ForestPoly(self.terms, _min_order(self.order, order))

    def to_json(self):
        return [{"forest": f.key, "coeff": str(c)} for f, c in self.items()]


class TensorPoly(TermMap):
    """Rational combination of k-tuples of forests (Sweedler tensors)."""

    __slots__ = ("arity",)

    def __init__(self, arity, terms=None):
        super().__init__(terms)
        self.arity = arity
        for key in self.terms:
            if len(key) != arity:
                raise ValueError("tensor term %r does not have arity %d" % (key, arity))

    def _with(self, terms, other=None):
        return TensorPoly(self.arity, terms)

    def _check(self, other):
        super()._check(other)
        if self.arity != other.arity:
            raise TypeError("tensor arities differ: %d vs %d" % (self.arity, other.arity))

    @staticmethod
    def sort_key(slots):
        return tuple((f.size, f.key) for f in slots)


def tree_series_to_poly(s: TreeSeries) -> ForestPoly:
    return ForestPoly({Forest((t,)): c for t, c in s.terms.items()}, s.order)


def tree_part(p: ForestPoly) -> TreeSeries:
    """Projection onto single-tree monomials."""
    return TreeSeries({f.trees[0]: c for f, c in p.terms.items() if len(f.trees) == 1},
                      p.order)


# ---------------------------------------------------------------------------
# pre-Lie product and braces

_GRAFT: dict[tuple, TreeSeries] = {}


def graft(t: RootedTree, u: RootedTree) -> TreeSeries:
    """t <| u: sum over vertices v of t of (t with u's root attached below v)."""
    memo_key = (t.key, u.key)
    out = _GRAFT.get(memo_key)
    if out is not None:
        return out
    terms: dict = {RootedTree(t.children + (u,)): Fraction(1)}
    for i, c in enumerate(t.children):
        rest = t.children[:i] + t.children[i + 1:]
        for sub, coeff in graft(c, u).terms.items():
            grown = RootedTree(rest + (sub,))
            terms[grown] = terms.get(grown, Fraction(0)) + coeff
    out = TreeSeries(terms)
    _GRAFT[memo_key] = out
    return out


def prelie(a: TreeSeries, b: TreeSeries, order=None) -> TreeSeries:
    """Bilinear extension of graft, truncated to order if given."""
    order = _min_order(order, _min_order(a.order, b.order))
    acc: dict = {}
    for t, ca in a.terms.items():
        for u, cb in b.terms.items():
            if order is not None and t.size + u.size > order:
                continue
            for r, c in graft(t, u).terms.items():
                acc[r] = acc.get(r, Fraction(0)) + ca * cb * c
    return TreeSeries(acc, order)


_BRACE: dict[tuple, TreeSeries] = {}


def _brace_basis(t: RootedTree, args: tuple) -> TreeSeries:
    """Symmetric brace t{args} by the Oudom-Guin recursion.

    t{} = t, t{u} = t <| u, and
    t{u1..un} = (t{u1..u_{n-1}}){un} - sum_i t{u1, .., ui <| un, .., u_{n-1}}.
    """
    if not args:
        return TreeSeries({t: 1})
    if len(args) == 1:
        return graft(t, args[0])
    memo_key = (t.key,) + tuple(u.key for u in args)
    out = _BRACE.get(memo_key)
    if out is not None:
        return out
    head, last = args[:-1], args[-1]
    out = prelie(_brace_basis(t, head), TreeSeries({last: 1}))
    for i in range(len(head)):
        for s, c in graft(head[i], last).terms.items():
            out = out - _brace_basis(t, head[:i] + (s,) + head[i + 1:]).scaled(c)
    _BRACE[memo_key] = out
    return out


def brace(t: RootedTree, args) -> TreeSeries:
    """t{args} for a forest or sequence of argument trees."""
    if isinstance(args, Forest):
        args = args.trees
    return _brace_basis(t, tuple(args))


# ---------------------------------------------------------------------------
# Grossman-Larson product

_GL: dict[tuple, ForestPoly] = {}


def _gl_monomial(fa: Forest, fb: Forest) -> ForestPoly:
    memo_key = (fa.key, fb.key)
    out = _GL.get(memo_key)
    if out is not None:
        return out
    a_trees, b_trees = fa.trees, fb.trees
    ell, m = len(a_trees), len(b_trees)
    acc: dict = {}
    for assign in product(range(ell + 1), repeat=m):
        groups: list = [[] for _ in range(ell + 1)]
        for pos, dest in enumerate(assign):
            groups[dest].append(b_trees[pos])
        # distribute the product of brace series over the a-factors
        partial = [(tuple(groups[0]), Fraction(1))]
        for i in range(ell):
            # braces are symmetric in their arguments: sort for memo reuse
            args = tuple(sorted(groups[i + 1], key=lambda u: u.key))
            fac = _brace_basis(a_trees[i], args)
            partial = [(trees + (r,), c * d)
                       for trees, c in partial
                       for r, d in fac.terms.items()]
        for trees, c in partial:
            f = Forest(trees)
            acc[f] = acc.get(f, Fraction(0)) + c
    out = ForestPoly(acc)
    _GL[memo_key] = out
    return out


def gl_product(a: ForestPoly, b: ForestPoly, order=None) -> ForestPoly:
    """Grossman-Larson product, bilinear over monomials; unit = empty forest."""
    order = _min_order(order, _min_order(a.order, b.order))
    acc: dict = {}
    for fa, ca in a.terms.items():
        for fb, cb in b.terms.items():
            if order is not None and fa.size + fb.size > order:
                continue
            for f, c in _gl_monomial(fa, fb).terms.items():
                acc[f] = acc.get(f, Fraction(0)) + ca * cb * c
    return ForestPoly(acc, order)


def poly_mul(a: ForestPoly, b: ForestPoly, order=None) -> ForestPoly:
    """Commutative polynomial product (forest juxtaposition)."""
    order = _min_order(order, _min_order(a.order, b.order))
    acc: dict = {}
    for fa, ca in a.terms.items():
        for fb, cb in b.terms.items():
            if order is not None and fa.size + fb.size > order:
                continue
            f = Forest(fa.trees + fb.trees)
            acc[f] = acc.get(f, Fraction(0)) + ca * cb
    return ForestPoly(acc, order)


# ---------------------------------------------------------------------------
# Connes-Kreimer coproduct

_CUTS: dict[str, tuple] = {}


def _cut_terms(t: RootedTree):
    """All admissible cuts of t, the empty cut included.

    Returns ((trunk, pruning, count), ...): trunk the root component, pruning
    the forest of detached subtrees, count the number of cuts producing the
    pair.  An edge below the root may be cut (detaching that whole branch) or
    kept (recursing into the branch); cutting two edges on one root-to-leaf
    path is thereby impossible.
    """
    out = _CUTS.get(t.key)
    if out is not None:
        return out
    options = []
    for c in t.children:
        opts = [(None, (c,), 1)]
        for trunk, pruning, count in _cut_terms(c):
            opts.append((trunk, pruning.trees, count))
        options.append(opts)
    acc: dict = {}
    for combo in product(*options):
        kept = tuple(tr for tr, _, _ in combo if tr is not None)
        pruned: tuple = ()
        count = 1
        for _, pr, cnt in combo:
            pruned += pr
            count *= cnt
        trunk = RootedTree(kept)
        key = (trunk, Forest(pruned))
        acc[key] = acc.get(key, 0) + count
    out = tuple((trunk, pruning, count) for (trunk, pruning), count in acc.items())
    _CUTS[t.key] = out
    return out


_DELTA_FOREST: dict[str, dict] = {}


def _delta_forest(f: Forest) -> dict:
    """Full coproduct of a forest monomial as {(left, right): Fraction}."""
    out = _DELTA_FOREST.get(f.key)
    if out is not None:
        return out
    acc = {(EMPTY_FOREST, EMPTY_FOREST): Fraction(1)}
    for t in f.trees:
        tree_terms = [(Forest((trunk,)), pruning, Fraction(count))
                      for trunk, pruning, count in _cut_terms(t)]
        tree_terms.append((EMPTY_FOREST, Forest((t,)), Fraction(1)))
        nxt: dict = {}
        for (lf, rf), c in acc.items():
            for tl, tr, d in tree_terms:
                key = (Forest(lf.trees + tl.trees), Forest(rf.trees + tr.trees))
                nxt[key] = nxt.get(key, Fraction(0)) + c * d
        acc = nxt
    _DELTA_FOREST[f.key] = acc
    return acc


def _as_forest_poly(x) -> ForestPoly:
    if isinstance(x, ForestPoly):
        return x
    if isinstance(x, TreeSeries):
        return tree_series_to_poly(x)
    if isinstance(x, RootedTree):
        return ForestPoly({Forest((x,)): 1})
    if isinstance(x, Forest):
        return ForestPoly({x: 1})
    raise TypeError("expected ForestPoly/TreeSeries/RootedTree/Forest, got %r"
                    % (type(x),))


def ck_coproduct(x) -> TensorPoly:
    """Connes-Kreimer coproduct: 1 (x) t + sum over admissible cuts, trunk (x)
    pruning (the empty cut giving t (x) 1); multiplicative on forests."""
    poly = _as_forest_poly(x)
    acc: dict = {}
    for f, c in poly.terms.items():
        for key, d in _delta_forest(f).items():
            acc[key] = acc.get(key, Fraction(0)) + c * d
    return TensorPoly(2, acc)


def iterated_coproduct(x, k: int) -> TensorPoly:
    """delta^[k] by left iteration (k = 1 is the identity)."""
    poly = _as_forest_poly(x)
    return TensorPoly(k, iterate_coproduct(_delta_forest, poly.terms, k))


def reduced_iterated_coproduct(x, k: int) -> TensorPoly:
    """(Id - unit counit)^(x)k of delta^[k]: drop terms with an empty slot."""
    full = iterated_coproduct(x, k)
    kept = {slots: c for slots, c in full.terms.items()
            if all(len(s.trees) > 0 for s in slots)}
    return TensorPoly(k, kept)


def irr_iterated_coproduct(x, k: int) -> TensorPoly:
    """delta_irr^[k]: project every slot onto single-tree monomials."""
    full = iterated_coproduct(x, k)
    kept = {slots: c for slots, c in full.terms.items()
            if all(len(s.trees) == 1 for s in slots)}
    return TensorPoly(k, kept)


# ---------------------------------------------------------------------------
# pairing

def _sigma_bplus(f: Forest) -> int:
    return sigma(b_plus(f))


def pairing(a, b) -> Fraction:
    """<s|t> = sigma(B+(t)) when the forests are isomorphic, else 0; bilinear."""
    pa, pb = _as_forest_poly(a), _as_forest_poly(b)
    small, big = (pa, pb) if len(pa.terms) <= len(pb.terms) else (pb, pa)
    out = Fraction(0)
    for f, c in small.terms.items():
        d = big.terms.get(f)
        if d is not None:
            out += c * d * _sigma_bplus(f)
    return out


def tensor_pairing(a: TensorPoly, b: TensorPoly) -> Fraction:
    """Slotwise product extension of the pairing to equal-arity tensors."""
    if a.arity != b.arity:
        raise ValueError("tensor arities differ")
    out = Fraction(0)
    small, big = (a, b) if len(a.terms) <= len(b.terms) else (b, a)
    for slots, c in small.terms.items():
        d = big.terms.get(slots)
        if d is not None:
            w = c * d
            for f in slots:
                w *= _sigma_bplus(f)
            out += w
    return out


# ---------------------------------------------------------------------------
# series operators

def prelie_exp(a: TreeSeries, order: int) -> TreeSeries:
    """exp under graft: sum_{n>=1} (1/n!) r^(n)_a(a), r^(n) = r^(n-1) <| a."""
    out = TreeSeries({}, order)
    r = a.truncated(order)
    n = 1
    while r and n <= order:
        out = out + r.scaled(Fraction(1, factorial(n)))
        r = prelie(r, a, order)
        n += 1
    return out


def cm_coefficient(t: RootedTree) -> Fraction:
    """Connes-Moscovici coefficient |t|!/(sigma(t) t!)."""
    return Fraction(factorial(t.size), sigma(t) * tree_factorial(t))


def magnus_closed_form(order: int) -> TreeSeries:
    """Omega(generator) = sum over trees of (omega(t)/sigma(t)) t, by grade."""
    acc: dict = {}
    for n in range(1, order + 1):
        for t in enumerate_trees(n):
            c = murua_omega(t) / sigma(t)
            if c:
                acc[t] = c
    return TreeSeries(acc, order)


def magnus_fixed_point(a: TreeSeries, order: int) -> TreeSeries:
    """Grade-by-grade solution of Omega = sum_{n>=0} (B_n/n!) r^(n+1)_Omega(a).

    The n = 0 term is a itself, the n = 1 term is B_1 (a <| Omega), and so on;
    each pass through the loop fixes one more grade, so `order` passes settle
    every grade up to the truncation.
    """
    omega = TreeSeries({}, order)
    for _ in range(order):
        acc = TreeSeries({}, order)
        r = a.truncated(order)  # r^(1)
        n = 0
        while r and n <= order:
            b = bernoulli(n)
            if b:
                acc = acc + r.scaled(b / factorial(n))
            r = prelie(r, omega, order)
            n += 1
        omega = acc
    return omega


_SOL1: dict[str, ForestPoly] = {}


def _sol1_monomial(f: Forest) -> ForestPoly:
    out = _SOL1.get(f.key)
    if out is not None:
        return out
    n = len(f.trees)
    out = ForestPoly({})
    for k in range(1, n + 1):
        coeff = Fraction((-1) ** (k - 1), k)
        layer = ForestPoly({})
        for assign in product(range(k), repeat=n):
            if len(set(assign)) != k:
                continue  # ordered partitions: every block nonempty
            blocks = [tuple(f.trees[i] for i in range(n) if assign[i] == j)
                      for j in range(k)]
            term = ForestPoly({Forest(blocks[0]): 1})
            for block in blocks[1:]:
                term = gl_product(term, ForestPoly({Forest(block): 1}))
            layer = layer + term
        out = out + layer.scaled(coeff)
    _SOL1[f.key] = out
    return out


def sol1(x: ForestPoly) -> ForestPoly:
    """Alternating ordered-partition sum of Grossman-Larson products.

    sol1(b1...bn) = sum_{k=1..n} ((-1)^(k-1)/k) sum over ordered partitions
    (I1,..,Ik) of [n] of b_{I1} * ... * b_{Ik}; linear in x; sol1(1) = 0.
    """
    acc = ForestPoly({}, x.order)
    for f, c in x.terms.items():
        acc = acc + _sol1_monomial(f).truncated(x.order).scaled(c)
    return acc


def poly_exp(a: TreeSeries, order: int) -> ForestPoly:
    """Polynomial (juxtaposition) exponential sum_n a^n / n!, by total grade."""
    if isinstance(a, TreeSeries):
        p = tree_series_to_poly(a).truncated(order)
    else:
        p = a.truncated(order)
    if any(f.size == 0 for f in p.terms):
        raise ValueError("poly_exp needs grade >= 1 terms only")
    out = ForestPoly({EMPTY_FOREST: 1}, order)
    term = ForestPoly({EMPTY_FOREST: 1}, order)
    for n in range(1, order + 1):
        term = poly_mul(term, p, order).scaled(Fraction(1, n))
        if not term:
            break
        out = out + term
    return out
