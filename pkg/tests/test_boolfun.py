import itertools

import pytest
from hypothesis import given, strategies as st

from ndpower import boolfun as bf
from ndpower.boolfun import BoolFun
from ndpower.errors import ArityError, LiteralParseError


def d_reference(a, b, c):
    return int((a and not b) or (not b and not c) or (not c and a))


def rows(k):
    return itertools.product((0, 1), repeat=k)


@st.composite
def funs(draw, max_arity=4):
    k = draw(st.integers(0, max_arity))
    return BoolFun(k, draw(st.integers(0, bf.full_mask(k))))


def test_eval_examples():
    assert bf.eval_fun(bf.AND, (1, 1)) == 1
    assert bf.eval_fun(bf.AND, (1, 0)) == 0
    assert bf.eval_fun(bf.D, (1, 0, 0)) == d_reference(1, 0, 0) == 1


def test_eval_arity_mismatch():
    with pytest.raises(ArityError):
        bf.eval_fun(bf.AND, (1,))


def test_bit_order_x1_least_significant():
    f = BoolFun.from_bits("0100")  # index 1 -> x1=1, x2=0
    assert f(1, 0) == 1 and f(0, 1) == 0


def test_d_table_matches_definition():
    for a in rows(3):
        assert bf.D(*a) == d_reference(*a)
    assert bf.D.bits() == "11010100"


def test_dual_examples():
    assert bf.dual(bf.AND) == bf.OR
    assert bf.dual(bf.D) == bf.D
    assert bf.dual(bf.ONE) == bf.ZERO


@given(funs())
def test_dual_is_involution(f):
    assert bf.dual(bf.dual(f)) == f


@given(funs())
def test_dual_matches_reversed_complement(f):
    g = bf.dual(f)
    top = f.size - 1
    for i in range(f.size):
        assert (g.table >> i) & 1 == 1 - ((f.table >> (top - i)) & 1)


def test_predicate_examples():
    assert bf.is_monotone(bf.AND) and not bf.is_monotone(bf.XOR)
    assert bf.is_self_dual(bf.D)
    assert bf.is_affine(bf.XNOR) and not bf.is_affine(bf.AND)
    assert bf.preserves_one(bf.GADGET_AND) and bf.preserves_zero(bf.GADGET_AND)


def _monotone_brute(f):
    for a in rows(f.arity):
        for b in rows(f.arity):
            if all(x <= y for x, y in zip(a, b)) and f(*a) > f(*b):
                return False
    return True


def _affine_brute(f):
    k = f.arity
    for c in (0, 1):
        for coeffs in rows(k):
            if all(f(*a) == (c + sum(x * y for x, y in zip(a, coeffs))) % 2 for a in rows(k)):
                return True
    return False


def _self_dual_brute(f):
    return all(f(*a) == 1 - f(*(1 - x for x in a)) for a in rows(f.arity))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_predicates_agree_with_brute_force(k):
    for f in bf.all_functions(k):
        assert bf.is_monotone(f) == _monotone_brute(f)
        assert bf.is_affine(f) == _affine_brute(f)
        assert bf.is_self_dual(f) == _self_dual_brute(f) == (bf.dual(f) == f)


def test_class_counts():
    assert sum(bf.is_self_dual(f) for f in bf.all_functions(3)) == 16
    assert sum(bf.is_monotone(f) for f in bf.all_functions(2)) == 6


def test_separating_index():
    assert bf.separating_index(bf.AND, 1) == 1
    assert bf.separating_index(bf.OR, 1) is None
    assert bf.separating_index(bf.GADGET_AND, 1) == 1
    assert bf.separating_index(bf.OR, 0) == 1
    assert bf.separating_index(bf.AND, 0) is None


def test_separating_index_degenerate_constants():
    assert bf.separating_index(bf.constant(0, 2), 1) == 1
    assert bf.separating_index(bf.constant(1, 2), 0) == 1
    assert bf.separating_index(bf.ZERO, 1) is None


@given(funs(), st.sampled_from([0, 1]))
def test_separating_index_brute(f, polarity):
    expect = None
    for i in range(1, f.arity + 1):
        if all(a[i - 1] == polarity for a in rows(f.arity) if f(*a) == polarity):
            expect = i
            break
    assert bf.separating_index(f, polarity) == expect


def test_projection():
    assert bf.projection(1, 1).bits() == "01"
    assert bf.projection(2, 2).bits() == "0011"
    assert bf.projection(3, 1).bits() == "01010101"
    with pytest.raises(ArityError):
        bf.projection(2, 3)


def test_table_must_fit():
    with pytest.raises(ValueError):
        BoolFun(1, 7)


def test_literals():
    name, f = bf.parse_literal("AND 2 0001")
    assert (name, f) == ("AND", bf.AND)
    assert bf.format_literal("D", bf.D) == "D 3 11010100"
    assert bf.parse_literal("ONE 0 1")[1] == bf.ONE
    for bad in ["AND 2 001", "AND x 0001", "AND 2 0021", "AND 2", "1AND 2 0001"]:
        with pytest.raises(LiteralParseError):
            bf.parse_literal(bad)


def test_literal_respects_max_arity():
    with pytest.raises(LiteralParseError):
        bf.parse_literal("BIG 7 " + "0" * 128)


def test_hex_index_zero_in_low_nibble():
    assert bf.AND.hex() == "8"
    assert bf.projection(3, 1).hex() == "aa"
    assert BoolFun.from_bits("1" + "0" * 15).hex() == "0001"


@given(funs(max_arity=4))
def test_extend_restrict_roundtrip(f):
    g = bf.extend(f, 4)
    assert bf.restrict_low(g, f.arity) == f


@given(funs(max_arity=4), st.data())
def test_fix_variable(f, data):
    if f.arity == 0:
        return
    j = data.draw(st.integers(1, f.arity))
    v = data.draw(st.integers(0, 1))
    g = BoolFun(f.arity - 1, bf.fix_variable(f.table, f.arity, j, v))
    for a in rows(f.arity - 1):
        full = a[: j - 1] + (v,) + a[j - 1:]
        assert g(*a) == f(*full)
