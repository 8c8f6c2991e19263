"""Shared machinery for finite rational linear combinations.

TermMap is a thin dict wrapper (basis key -> Fraction) with zero pruning and
the usual module arithmetic.  Subclasses fix the key type, a deterministic
sort key for serialization, and optionally a grade used for truncation.
Everything is value-like: operations return new objects, terms dicts are never
shared, so concurrent readers are safe.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["TermMap", "iterate_coproduct"]


class TermMap:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data: dict = {}
        if terms is not None:
            items = terms.items() if hasattr(terms, "items") else terms
            for k, c in items:
                c = Fraction(c)
                if not c:
                    continue
                acc = data.get(k)
                acc = c if acc is None else acc + c
                if acc:
                    data[k] = acc
                elif k in data:
                    del data[k]
        self.terms = data

    # subclasses override to carry extra attributes (truncation order, arity)
    def _with(self, terms, other=None):
        return type(self)(terms)

    @staticmethod
    def sort_key(key):
        return key

    def items(self):
        """Terms in deterministic order."""
        return sorted(self.terms.items(), key=lambda kv: self.sort_key(kv[0]))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return type(self) is type(other) and self.terms == other.terms

    __hash__ = None  # defining __eq__ without hash semantics

    def __add__(self, other):
        self._check(other)
        merged = dict(self.terms)
        for k, c in other.terms.items():
            acc = merged.get(k)
            acc = c if acc is None else acc + c
            if acc:
                merged[k] = acc
            elif k in merged:
                del merged[k]
        return self._with(merged, other)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c) -> "TermMap":
        c = Fraction(c)
        if not c:
            return self._with({})
        return self._with({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scaled(c)

    def __mul__(self, c):
        return self.scaled(c)

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def _check(self, other):
        if type(self) is not type(other):
            raise TypeError("cannot combine %s with %s"
                            % (type(self).__name__, type(other).__name__))

    def __repr__(self):
        body = ", ".join("%s: %s" % (k, c) for k, c in self.items())
        return "%s({%s})" % (type(self).__name__, body)


def iterate_coproduct(delta2, x_terms: dict, k: int) -> dict:
    """Left-iterate a binary coproduct k-1 times on a term dict.

    delta2 maps a monomial key to a dict {(left, right): Fraction}; the result
    maps k-tuples of monomial keys to Fractions (k = 1 wraps keys in 1-tuples).
    Left iteration: the coproduct is applied to slot 0 at every step.
    """
    if k < 1:
        raise ValueError("iterated coproduct needs k >= 1, got %r" % (k,))
    cur = {(key,): Fraction(c) for key, c in x_terms.items() if c}
    for _ in range(k - 1):
        nxt: dict = {}
        for slots, c in cur.items():
            for (a, b), d in delta2(slots[0]).items():
                key = (a, b) + slots[1:]
                acc = nxt.get(key)
                acc = c * d if acc is None else acc + c * d
                if acc:
                    nxt[key] = acc
                elif key in nxt:
                    del nxt[key]
        cur = nxt
    return cur
