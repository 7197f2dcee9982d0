"""Laurent polynomial ring: examples, randomized axioms, determinants."""

import random
from fractions import Fraction

import pytest

from rigidhecke.exactpoly import (
    LaurentPoly,
    NonSquare,
    NotDivisible,
    OddDegree,
    PolyMatrix,
    VarTable,
    VarTableMismatch,
    ZeroSubstitutionForUnit,
    det_bareiss,
    det_cofactor,
    parse_poly,
    rational_matrix_rank,
    render_in_Q,
)

T2 = VarTable(("v0", "v1"), ("param-sqrt", "param-sqrt"))
TZ = VarTable(("v0", "z0"), ("param-sqrt", "twist"))


def rand_poly(table, rng, terms=4, span=3):
    out = LaurentPoly(table, {})
    for _ in range(terms):
        e = tuple(rng.randint(-span, span) for _ in table.names)
        out = out + LaurentPoly.monomial(table, e, Fraction(rng.randint(-5, 5)))
    return out


def test_ring_examples():
    v = T2.gen("v0")
    one = LaurentPoly.const(T2, 1)
    assert (v + one) * (v - one) == v * v - one
    q = v * v
    assert (q * q - 1).exact_div(q - 1) == q + 1
    assert v.inverse() * v == one


def test_exact_divide_failure():
    v0, v1 = T2.gens()
    with pytest.raises(NotDivisible):
        (v0 + 1).exact_div(v1 + 1)


def test_var_table_mismatch():
    other = VarTable(("v0",), ("param-sqrt",))
    with pytest.raises(VarTableMismatch):
        T2.gen("v0") + other.gen("v0")


def test_ring_axioms_randomized():
    rng = random.Random(5)
    for _ in range(50):
        a, b, c = (rand_poly(T2, rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_evaluate_examples():
    v0, v1 = T2.gens()
    q0, q1 = v0 * v0, v1 * v1
    assert (q0 + 1).evaluate({"v0": 2}) == LaurentPoly.const(T2, 5)
    # the extended-C2 specialization step: q0 -> 1 leaves q1 symbolic
    assert (q0 + q1).evaluate({"v0": 1}) == q1 + 1
    assert (v0 * v0).evaluate({"v0": 3}) == LaurentPoly.const(T2, 9)


def test_evaluate_is_homomorphism():
    rng = random.Random(11)
    for _ in range(30):
        a, b = rand_poly(T2, rng), rand_poly(T2, rng)
        assign = {"v0": Fraction(rng.randint(1, 7)), "v1": Fraction(rng.randint(1, 7))}
        assert (a * b).evaluate(assign) == a.evaluate(assign) * b.evaluate(assign)
        assert (a + b).evaluate(assign) == a.evaluate(assign) + b.evaluate(assign)


def test_evaluate_zero_unit():
    v0 = T2.gen("v0")
    with pytest.raises(ZeroSubstitutionForUnit):
        v0.evaluate({"v0": 0})
    z = TZ.gen("z0")
    with pytest.raises(ZeroSubstitutionForUnit):
        z.inverse().evaluate({"z0": 0})


def test_render_and_parse():
    v0, v1 = T2.gens()
    p = v0 ** 3 * -1 + v0 ** 2 * v1 * 2
    assert p.render() == "-1*v0^3 + 2*v0^2*v1"
    qt = T2.q_table()
    q = parse_poly(qt, "-1*Q0^3 + 2*Q0^2*Q1")
    assert q.render() == "-1*Q0^3 + 2*Q0^2*Q1"
    assert parse_poly(qt, "Q0 - 1") == qt.gen("Q0") - 1
    assert parse_poly(qt, "0").is_zero()


def test_render_in_Q():
    v0, v1 = T2.gens()
    qt = T2.q_table()
    assert render_in_Q(v0 ** 2 - 1) == parse_poly(qt, "Q0 - 1")
    assert render_in_Q(v0 ** 2 * v1 ** 2) == parse_poly(qt, "Q0*Q1")
    with pytest.raises(OddDegree):
        render_in_Q(v0)
    # twist variables pass through unchanged
    z = TZ.gen("z0")
    assert render_in_Q(z * TZ.gen("v0") ** 2).render() == "1*Q0*z0"


def test_det_examples():
    qt = T2.q_table()
    Q = qt.gen("Q0")
    one = LaurentPoly.const(qt, 1)
    m = PolyMatrix([[Q, one], [one, Q]])
    assert det_bareiss(m) == Q * Q - 1
    rep = PolyMatrix([[Q, one], [Q, one]])
    assert det_bareiss(rep).is_zero()
    with pytest.raises(NonSquare):
        det_bareiss(PolyMatrix([[Q, one]]))


def test_det_bareiss_matches_cofactor_small():
    rng = random.Random(23)
    for n in (1, 2, 3, 4):
        for _ in range(6):
            m = PolyMatrix(
                [[rand_poly(T2, rng, terms=2, span=1) for _ in range(n)] for _ in range(n)]
            )
            assert det_bareiss(m) == det_cofactor(m)


def test_det_bareiss_numeric_5x5():
    rng = random.Random(31)
    for _ in range(4):
        m = PolyMatrix(
            [[rand_poly(T2, rng, terms=2, span=1) for _ in range(5)] for _ in range(5)]
        )
        det = det_bareiss(m)
        assign = {"v0": Fraction(2), "v1": Fraction(3)}
        evaluated = m.map(lambda e: e.evaluate(assign))
        assert det.evaluate(assign) == det_cofactor(evaluated)


def test_rational_rank():
    rows = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert rational_matrix_rank(rows) == 1
    rows[1][1] = Fraction(5)
    assert rational_matrix_rank(rows) == 2
