import json
import random
from fractions import Fraction
from itertools import product

import pytest

import oracles
from prelie.nc import (
    BRANDS, CumulantTable, NCPartition, convert, enumerate_interval,
    enumerate_nc, enumerate_nc_irr, enumerate_nc_irr_k, exp_functional,
    forest_factorial, forest_omega, iter_words, magnus_functional,
    nesting_forest,
)
from prelie.trees import Forest, LEAF, RootedTree, murua_omega

CHAIN2 = RootedTree((LEAF,))
CHERRY = RootedTree((LEAF, LEAF))


# ---------------------------------------------------------------------------
# the non-crossing lattice

def test_counts_match_catalan_two_ways():
    table = oracles.catalan_by_convolution(7)
    for n in range(1, 8):
        nc_n = len(enumerate_nc(n))
        assert nc_n == oracles.catalan(n)
        assert nc_n == table[n]
        assert len(enumerate_nc_irr(n)) == oracles.catalan(n - 1)
        assert len(enumerate_interval(n)) == 2 ** (n - 1)


def test_enumeration_matches_filtered_set_partitions():
    for n in range(1, 7):
        brute = {tuple(sorted(tuple(sorted(b)) for b in pi))
                 for pi in oracles.brute_set_partitions(n)
                 if oracles.is_noncrossing_by_interval_peeling(pi)}
        got = {tuple(sorted(tuple(sorted(b)) for b in pi.blocks))
               for pi in enumerate_nc(n)}
        assert got == brute


def test_irreducible_and_interval_split():
    for n in range(1, 7):
        all_nc = enumerate_nc(n)
        irr = [pi for pi in all_nc if pi.is_irreducible()]
        assert sorted(p.blocks for p in irr) == sorted(
            p.blocks for p in enumerate_nc_irr(n))
        ivals = [pi for pi in all_nc if pi.is_interval()]
        assert sorted(p.blocks for p in ivals) == sorted(
            p.blocks for p in enumerate_interval(n))
        for k in range(1, n + 1):
            by_k = [pi for pi in enumerate_nc_irr(n) if len(pi) == k]
            assert sorted(p.blocks for p in by_k) == sorted(
                p.blocks for p in enumerate_nc_irr_k(n, k))


def test_partition_validation():
    with pytest.raises(ValueError):
        NCPartition(((1, 3), (2, 4)))  # crossing
    with pytest.raises(ValueError):
        NCPartition(((1, 2), (2, 3)))  # element reused
    with pytest.raises(ValueError):
        NCPartition(((1, 2), (4,)))    # 3 missing
    pi = NCPartition(((2,), (1, 3)))
    assert pi.blocks == ((1, 3), (2,))  # blocks sort by minimum


# ---------------------------------------------------------------------------
# nesting forests

def test_nesting_fixtures():
    f = nesting_forest(NCPartition(((1, 3), (2,))))
    assert f.trees == (CHAIN2,)
    f = nesting_forest(NCPartition(((1, 4), (2,), (3,))))
    assert f.trees == (CHERRY,)
    f = nesting_forest(NCPartition(((1, 6), (2, 5), (3,), (4,))))
    assert f.trees == (RootedTree((CHERRY,)),)


def test_nesting_invariants():
    for n in range(1, 7):
        for pi in enumerate_nc(n):
            f = nesting_forest(pi)
            assert sum(t.size for t in f.trees) == len(pi)
            if pi.is_interval():
                assert all(t == LEAF for t in f.trees)
            if pi.is_irreducible():
                assert len(f.trees) == 1
        one_block = NCPartition((tuple(range(1, n + 1)),))
        assert nesting_forest(one_block).trees == (LEAF,)


def test_forest_statistics():
    f = nesting_forest(NCPartition(((1, 6), (2, 5), (3,), (4,))))
    assert forest_factorial(f) == 4 * 3  # 4-vertex tree, factorial 12
    assert forest_omega(f) == murua_omega(RootedTree((CHERRY,)))


# ---------------------------------------------------------------------------
# cumulant tables

def _table(brand, values, maxlen=4, variables=("a",)):
    return CumulantTable(brand, variables, maxlen, values)


def test_table_completeness_check():
    with pytest.raises(ValueError) as err:
        _table("free", {"a": Fraction(1)}, maxlen=2)
    assert "missing 1 word" in str(err.value)
    assert "aa" in str(err.value)


def test_table_json_round_trip():
    values = {w: Fraction(1, 1 + len(w)) for w in iter_words(("a", "b"), 3)}
    t = CumulantTable("boolean", ("a", "b"), 3, values)
    data = json.loads(json.dumps(t.to_json()))
    assert CumulantTable.from_json(data) == t
    assert data["brand"] == "boolean"


def test_semicircular_free_cumulants_give_catalan_moments():
    values = {w: Fraction(1 if len(w) == 2 else 0)
              for w in iter_words(("a",), 6)}
    m = convert(_table("free", values, maxlen=6), "moment")
    assert [m.values["a" * n] for n in range(1, 7)] == [0, 1, 0, 2, 0, 5]


def test_boolean_pair_cumulants_count_interval_pairings():
    values = {w: Fraction(1 if len(w) == 2 else 0)
              for w in iter_words(("a",), 6)}
    m = convert(_table("boolean", values, maxlen=6), "moment")
    # only the nested-interval pair partition survives at each even order
    assert [m.values["a" * n] for n in range(1, 7)] == [0, 1, 0, 1, 0, 1]


def test_monotone_pair_to_boolean_fixture():
    values = {w: Fraction(1 if len(w) == 2 else 0)
              for w in iter_words(("a",), 4)}
    b = convert(_table("monotone", values, maxlen=4), "boolean")
    assert b.values["aa"] == 1
    assert b.values["aaa"] == 0
    assert b.values["aaaa"] == Fraction(1, 2)


def test_identity_conversion_copies():
    values = {w: Fraction(len(w), 3) for w in iter_words(("a",), 3)}
    t = _table("free", values, maxlen=3)
    out = convert(t, "free")
    assert out == t and out is not t


def test_round_trips_and_route_agreement():
    rng = random.Random(7)
    variables = ("a", "b")
    N = 4
    tables = {}
    for brand in BRANDS:
        tables[brand] = CumulantTable(brand, variables, N, {
            w: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            for w in iter_words(variables, N)})
    for source in BRANDS:
        for target in BRANDS:
            direct = convert(tables[source], target)
            via = convert(tables[source], target, route="via-moments")
            assert direct == via, (source, target)
            back = convert(direct, source)
            assert back == tables[source], (source, target)


def test_bad_route_and_brand():
    t = _table("free", {w: Fraction(0) for w in iter_words(("a",), 2)}, maxlen=2)
    with pytest.raises(ValueError):
        convert(t, "free", route="bogus")
    with pytest.raises(ValueError):
        convert(t, "bogus")
    with pytest.raises(ValueError):
        CumulantTable("bogus", ("a",), 2,
                      {w: Fraction(0) for w in iter_words(("a",), 2)})


# ---------------------------------------------------------------------------
# functionals on irreducible partitions

def test_exp_functional_low_order_shape():
    # |w| = 3: NC_irr(3) = full block and {13|2}; tree factorials 1 and 2
    values = {w: Fraction(1) for w in iter_words(("a",), 3)}
    got = exp_functional(values, "aaa")
    assert got == Fraction(1) + Fraction(1, 2)


def test_magnus_functional_low_order_shape():
    values = {w: Fraction(1) for w in iter_words(("a",), 4)}
    assert magnus_functional(values, "aa") == 1
    assert magnus_functional(values, "aaa") == Fraction(1) - Fraction(1, 2)
    # NC_irr(4): full block, three one-nesting copies, the double nesting
    assert magnus_functional(values, "aaaa") == \
        Fraction(1) - 3 * Fraction(1, 2) + Fraction(1, 6)


def test_functional_theorems_on_random_cumulants():
    rng = random.Random(13)
    variables = ("a", "b")
    N = 4
    rho = CumulantTable("monotone", variables, N, {
        w: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        for w in iter_words(variables, N)})
    beta = convert(rho, "boolean")
    nu = convert(rho, "free")
    # beta = exp(rho), nu = -exp(-rho), rho = magnus(beta) = -magnus(-nu)
    for w in iter_words(variables, N):
        assert beta.values[w] == exp_functional(rho.values, w)
        assert nu.values[w] == -exp_functional(rho.negated().values, w)
        assert rho.values[w] == magnus_functional(beta.values, w)
        assert rho.values[w] == -magnus_functional(nu.negated().values, w)
