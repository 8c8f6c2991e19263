from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from prelie.words import (
    WordPoly, WordTensor, enumerate_words, monomial, word_brace,
    word_dual_coproduct, word_full_coproduct, word_iterated_coproducts,
    word_pairing, word_prelie,
)

words_st = st.text(alphabet="ab", min_size=1, max_size=4)


def wp(w):
    return WordPoly({(w,): 1})


# ---------------------------------------------------------------------------
# insertion product

def test_prelie_fixtures():
    assert word_prelie("a", "b") == WordPoly({})
    assert word_prelie("ab", "c") == wp("acb")
    assert word_prelie("abc", "d") == WordPoly({("adbc",): 1, ("abdc",): 1})
    assert word_prelie("aa", "a") == wp("aaa")


@settings(deadline=None, max_examples=100)
@given(words_st, words_st, words_st)
def test_prelie_identity_on_words(a, b, c):
    lhs = _post(word_prelie(a, b), c) - _pre(a, word_prelie(b, c))
    rhs = _post(word_prelie(a, c), b) - _pre(a, word_prelie(c, b))
    assert lhs == rhs


def _post(poly, w):
    acc = WordPoly({})
    for (u,), coeff in poly.terms.items():
        acc = acc + word_prelie(u, w).scaled(coeff)
    return acc


def _pre(w, poly):
    acc = WordPoly({})
    for (u,), coeff in poly.terms.items():
        acc = acc + word_prelie(w, u).scaled(coeff)
    return acc


# ---------------------------------------------------------------------------
# braces

def test_brace_fixtures():
    assert word_brace("a", ("b",)) == WordPoly({})
    assert word_brace("ab", ()) == wp("ab")
    # both orders of insertion at the single interior slot
    assert word_brace("ab", ("c", "d")) == WordPoly({("acdb",): 1, ("adcb",): 1})
    assert word_brace("ab", ("c",)) == wp("acb")


def test_brace_matches_oudom_guin_recursion():
    def op(u, v):
        return {w: c for (w,), c in word_prelie(u, v).terms.items()}

    alphas = [w for n in (1, 2, 3) for w in enumerate_words("ab", n)]
    gammas = [w for n in (1, 2) for w in enumerate_words("ab", n)]
    checked = 0
    for alpha in alphas:
        for n in (1, 2, 3):
            for args in combinations_with_replacement(gammas, n):
                want = oracles.oudom_guin_brace(op, alpha, args)
                got = {w: c for (w,), c in word_brace(alpha, args).terms.items()}
                assert got == want, (alpha, args)
                checked += 1
    assert checked > 300


@settings(deadline=None, max_examples=40)
@given(words_st, st.lists(words_st, min_size=2, max_size=3), st.randoms())
def test_brace_symmetry(alpha, gammas, rng):
    shuffled = list(gammas)
    rng.shuffle(shuffled)
    assert word_brace(alpha, gammas) == word_brace(alpha, shuffled)


# ---------------------------------------------------------------------------
# coproducts

def test_dual_coproduct_fixtures():
    assert word_dual_coproduct("ab") == WordTensor(2, {})
    assert word_dual_coproduct("abc") == WordTensor(2, {(("ac",), ("b",)): 1})
    assert word_dual_coproduct("abcd") == WordTensor(2, {
        (("acd",), ("b",)): 1,
        (("abd",), ("c",)): 1,
        (("ad",), ("bc",)): 1,
        (("ad",), ("b", "c")): 1,
    })


def test_full_coproduct_on_a_letter():
    d = word_full_coproduct(wp("a"))
    assert d == WordTensor(2, {((), ("a",)): 1, (("a",), ()): 1})


def test_full_coproduct_is_multiplicative():
    u, v = "ab", "ba"
    du = _delta_terms((u,))
    dv = _delta_terms((v,))
    merged = {}
    for (l1, r1), c in du.items():
        for (l2, r2), d in dv.items():
            key = (monomial(l1 + l2), monomial(r1 + r2))
            merged[key] = merged.get(key, Fraction(0)) + c * d
    got = word_full_coproduct(WordPoly({monomial((u, v)): 1}))
    assert got == WordTensor(2, merged)


def _delta_terms(mono):
    return dict(word_full_coproduct(WordPoly({mono: 1})).terms)


def test_iterated_flavors():
    irr2 = word_iterated_coproducts(wp("abc"), 2, "irr")
    assert irr2 == WordTensor(2, {(("ac",), ("b",)): 1})
    irr3 = word_iterated_coproducts(wp("abcde"), 3, "irr")
    assert irr3.terms.get((("ace",), ("b",), ("d",))) == 1
    assert irr3.terms.get((("ace",), ("d",), ("b",))) == 1
    red = word_iterated_coproducts(wp("abc"), 2, "reduced")
    assert red == WordTensor(2, {(("ac",), ("b",)): 1})
    with pytest.raises(ValueError):
        word_iterated_coproducts(wp("abc"), 2, "bogus")


def test_coproduct_respects_grading():
    for w in enumerate_words("ab", 4):
        for slots, c in word_full_coproduct(wp(w)).terms.items():
            assert sum(sum(len(u) for u in m) for m in slots) == 4
            assert c > 0


# ---------------------------------------------------------------------------
# duality brace vs coproduct

def test_brace_coproduct_duality_sample():
    # <alpha{gammas} | w> = <alpha (x) gammas | delta_bar(w)> on 2 letters
    gammas_pool = [w for n in (1, 2) for w in enumerate_words("ab", n)]
    alphas = [w for n in (1, 2, 3) for w in enumerate_words("ab", n)]
    deltas = {w: word_dual_coproduct(w)
              for n in range(3, 5) for w in enumerate_words("ab", n)}
    checked = 0
    for alpha in alphas:
        for n in (1, 2):
            for gs in combinations_with_replacement(gammas_pool, n):
                L = len(alpha) + sum(len(g) for g in gs)
                if L > 4:
                    continue
                braced = word_brace(alpha, gs)
                probe = WordTensor(2, {((alpha,), monomial(gs)): 1})
                for w in enumerate_words("ab", L):
                    lhs = word_pairing(braced, w)
                    rhs = _tensor_pair(probe, deltas[w]) if L >= 3 else Fraction(0)
                    assert lhs == rhs, (alpha, gs, w)
                    checked += 1
    assert checked > 400


def _tensor_pair(a, b):
    out = Fraction(0)
    for (l1, r1), c in a.terms.items():
        for (l2, r2), d in b.terms.items():
            out += c * d * _mp(l1, l2) * _mp(r1, r2)
    return out


def _mp(u, v):
    from prelie.words import _mono_pairing
    return _mono_pairing(u, v) if u == v else 0


# ---------------------------------------------------------------------------
# pairing and containers

def test_pairing_fixtures():
    assert word_pairing("ab", "ab") == 1
    assert word_pairing(WordPoly({("ab", "ab"): 1}), WordPoly({("ab", "ab"): 1})) == 2
    assert word_pairing("ab", "ba") == 0
    assert word_pairing(WordPoly({("a", "b"): 1}), WordPoly({("a", "b"): 1})) == 1


def test_monomial_canonicalization():
    assert monomial(("b", "a")) == ("a", "b")
    with pytest.raises(ValueError):
        monomial(("a", ""))


def test_enumerate_words():
    assert enumerate_words("ab", 2) == ["aa", "ab", "ba", "bb"]
    with pytest.raises(ValueError):
        enumerate_words("ab", 0)


def test_tensor_arity_guard():
    with pytest.raises(ValueError):
        WordTensor(2, {(("a",),): 1})
