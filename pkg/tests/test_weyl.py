"""Group arithmetic, length, reduced words and the Bruhat order."""

import itertools
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgmu.errors import DimensionMismatch, ParseError
from bgmu.weyl import (
    AffineElement,
    GroupDatum,
    Permutation,
    bruhat_leq,
    bruhat_lower_set,
    bruhat_lt,
    format_element,
    omega_element,
    parse_element,
    reduced_word,
    simple_reflections,
    superbasic_element,
)
from conftest import oracle_length, wa_ball

GL2 = GroupDatum.gl(2)
GL3 = GroupDatum.gl(3)


def elt(text, datum=GL2):
    return parse_element(text, datum)


def elements(datum, max_abs=3):
    def build(trans, *block_perms):
        images = []
        for (lo, _), perm in zip(datum.block_ranges(), block_perms):
            images.extend(lo + p - 1 for p in perm)
        return AffineElement(datum, trans, Permutation(images))

    return st.builds(
        build,
        st.tuples(*[st.integers(-max_abs, max_abs)] * datum.n),
        *[st.permutations(list(range(1, nb + 1))) for nb in datum.blocks],
    )


# --- composition and inversion ----------------------------------------------

def test_translations_commute():
    assert elt("t[1,0]") * elt("t[0,1]") == elt("t[1,1]")


def test_permutation_acts_on_lattice():
    assert elt("t[0,0]*cyc(1,2)") * elt("t[1,0]") == elt("t[0,1]*cyc(1,2)")


def test_square_of_length_zero_generator():
    a = elt("t[1,0]*cyc(1,2)")
    assert a * a == elt("t[1,1]")


def test_invert_examples():
    assert AffineElement.identity(GL2).inverse() == AffineElement.identity(GL2)
    assert elt("t[1,0]*cyc(1,2)").inverse() == elt("t[0,-1]*cyc(1,2)")


@settings(max_examples=120, deadline=None)
@given(elements(GL3))
def test_double_inverse(w):
    assert w.inverse().inverse() == w


@settings(max_examples=80, deadline=None)
@given(elements(GL3), elements(GL3), elements(GL3))
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    e = AffineElement.identity(GL3)
    assert a * e == a and e * a == a
    assert a * a.inverse() == e


@settings(max_examples=60, deadline=None)
@given(elements(GroupDatum((2, 3))))
def test_block_product_axioms(w):
    assert (w * w.inverse()).is_identity()


def test_group_axioms_rank_eight():
    import random

    rng = random.Random(58)
    d8 = GroupDatum.gl(8)

    def rand():
        perm = list(range(1, 9))
        rng.shuffle(perm)
        return AffineElement(
            d8, tuple(rng.randint(-3, 3) for _ in range(8)), Permutation(perm)
        )

    e = AffineElement.identity(d8)
    for _ in range(25):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == e
        assert (a * e) == a


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        elt("t[1,0]") * parse_element("t[1,0,0]", GL3)


# --- affine action ------------------------------------------------------------

def test_apply_affine():
    assert AffineElement.identity(GL2).apply((5, 7)) == (5, 7)
    assert elt("t[1,0]").apply((0, 0)) == (1, 0)
    s = superbasic_element(5, 8)
    assert s.apply((0,) * 8) == (1, 1, 1, 1, 1, 0, 0, 0)


# --- length -------------------------------------------------------------------

def test_length_examples():
    assert AffineElement.identity(GL2).length() == 0
    assert superbasic_element(5, 8).length() == 0
    assert elt("t[1,0]").length() == 1


@pytest.mark.parametrize("datum", [GL2, GL3])
def test_length_against_word_search(datum):
    for w in sorted(wa_ball(datum, 5), key=lambda v: (v.length(), v.trans, v.perm.images)):
        if 0 < w.length() <= 5:
            assert oracle_length(w, cap=6) == w.length()


@settings(max_examples=80, deadline=None)
@given(elements(GL3))
def test_length_symmetries(w):
    assert w.length() == w.inverse().length()


@settings(max_examples=60, deadline=None)
@given(elements(GL3), st.integers(0, 5))
def test_length_zero_conjugation(w, k):
    omega = omega_element(GL3, (k,))
    assert (omega * w * omega.inverse()).length() == w.length()


@settings(max_examples=60, deadline=None)
@given(elements(GL3), elements(GL3))
def test_length_subadditive(a, b):
    assert (a * b).length() <= a.length() + b.length()


# --- reduced words -------------------------------------------------------------

def test_reduced_word_examples():
    rw = reduced_word(AffineElement.identity(GL2))
    assert rw.letters == () and rw.omega.is_identity()
    rw = reduced_word(elt("t[1,0]"))
    assert len(rw.letters) == 1 and rw.omega.length() == 0
    assert len(reduced_word(elt("t[0,2]")).letters) == 2


@settings(max_examples=80, deadline=None)
@given(elements(GL3, max_abs=2))
def test_reduced_word_reproduces_element(w):
    rw = reduced_word(w)
    assert len(rw.letters) == w.length()
    assert rw.product() == w


# --- Bruhat order ---------------------------------------------------------------

def test_bruhat_reflexive_and_example_chain():
    w = elt("t[1,0]*cyc(1,2)")
    assert bruhat_leq(w, w)
    d8 = GroupDatum.gl(8)
    mu = (1, 1, 1, 0, 0, 0, 0, 0)
    s = superbasic_element(5, 8)
    eps = Permutation((6, 3, 8, 5, 2, 7, 4, 1))
    top = AffineElement.translation(d8, eps.act(mu)) * s
    step = top * AffineElement.from_permutation(d8, Permutation.from_cycles(8, [(8, 3)]))
    assert bruhat_lt(step, top)


def test_length_zero_is_minimal_in_coset():
    assert bruhat_leq(elt("t[1,0]*cyc(1,2)"), elt("t[0,1]"))


def test_bruhat_needs_same_coset():
    assert not bruhat_leq(elt("t[1,0]"), elt("t[1,1]"))


@pytest.mark.parametrize("datum,max_len", [(GL2, 8), (GL3, 6)])
def test_bruhat_matches_subword_enumeration(datum, max_len):
    for k in range(min(3, datum.n)):
        omega = omega_element(datum, (k,))
        ball = sorted(
            (a * omega for a in wa_ball(datum, max_len)),
            key=lambda v: (v.length(), v.trans, v.perm.images),
        )
        lower = {w: bruhat_lower_set(w) for w in ball}
        for u in ball:
            for w in ball:
                assert bruhat_leq(u, w) == (u in lower[w])


def test_bruhat_antisymmetry_on_interval():
    top = elt("t[2,-1]")
    interval = sorted(
        bruhat_lower_set(top), key=lambda v: (v.length(), v.trans, v.perm.images)
    )
    for u in interval:
        for w in interval:
            if bruhat_leq(u, w) and bruhat_leq(w, u):
                assert u == w


def test_conjugation_by_length_zero_preserves_order():
    ball = sorted(
        wa_ball(GL2, 5), key=lambda v: (v.length(), v.trans, v.perm.images)
    )
    omega = omega_element(GL2, (1,))
    oinv = omega.inverse()
    for u in ball:
        for w in ball:
            assert bruhat_leq(u, w) == bruhat_leq(omega * u * oinv, omega * w * oinv)


def test_adjoint_blocks_align_central_translations():
    pgl2 = GroupDatum.pgl(2)
    lo = parse_element("t[1,0]*cyc(1,2)", pgl2)
    hi = parse_element("t[2,1]", pgl2)  # central shift of t[1,0]
    assert bruhat_leq(lo, hi)


# --- superbasic elements ---------------------------------------------------------

def test_superbasic_worked_case():
    s = superbasic_element(5, 8)
    assert s.trans == (1, 1, 1, 1, 1, 0, 0, 0)
    assert s.perm == Permutation.from_cycles(8, [(6, 3, 8, 5, 2, 7, 4, 1)])
    assert s.length() == 0


def test_superbasic_small():
    assert superbasic_element(1, 2) == elt("t[1,0]*cyc(1,2)")


@pytest.mark.parametrize("n", range(2, 13))
def test_superbasic_power_identity(n):
    for m in range(1, n):
        if gcd(m, n) != 1:
            continue
        s = superbasic_element(m, n)
        assert s.length() == 0
        assert s ** n == AffineElement.translation(GroupDatum.gl(n), (m,) * n)


def test_superbasic_rejects_bad_input():
    with pytest.raises(ValueError):
        superbasic_element(2, 4)
    with pytest.raises(ValueError):
        superbasic_element(3, 3)


# --- literals --------------------------------------------------------------------

def test_parse_basic():
    w = elt("t[1,0]*cyc(1,2)")
    assert w.trans == (1, 0) and w.perm(1) == 2


def test_parse_u58():
    d8 = GroupDatum.gl(8)
    w = parse_element("t[0,0,0,0,0,0,0,0]*cyc(6,3,8,5,2,7,4,1)", d8)
    assert w.perm == superbasic_element(5, 8).perm


def test_parse_cycles_compose_left_to_right():
    d3 = GL3
    w = parse_element("t[0,0,0]*cyc(1,2)*cyc(2,3)", d3)
    # (uv)(i) = u(v(i)): first cyc(2,3), then cyc(1,2)
    assert w.perm(2) == 3 and w.perm(3) == 1 and w.perm(1) == 2


@settings(max_examples=100, deadline=None)
@given(elements(GL3))
def test_format_parse_round_trip(w):
    assert parse_element(format_element(w), GL3) == w


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_element("t[1,0", GL2)
    with pytest.raises(ParseError):
        parse_element("t[1,0]*cyc(1,3)", GL2)
    with pytest.raises(ParseError):
        parse_element("t[1,0]*cyc(1,1)", GL2)
    with pytest.raises(ParseError):
        parse_element("t[1]", GL2)
