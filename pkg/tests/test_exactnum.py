from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import cofactor_det, gauss_rank_fraction, gauss_rank_mod
from secantid.exactnum import (
    P61, P62, QQ, ExactMatrix, FieldMismatchError, FieldScalar, ForbiddenPointError, IntMatrix,
    PolyMap, PrimeField, annihilator, intersect_dim, jet_eval, nullspace, rank, row_spaces_equal,
    smith_normal_form, smith_rank, span_intersection,
)
from secantid.exactnum.poly import upoly_deg, upoly_divmod, upoly_gcd, upoly_mul

F61 = PrimeField(P61)


def test_rank_small_cases():
    assert rank(ExactMatrix.from_rows(np.eye(3, dtype=int).tolist(), QQ)) == 3
    assert rank(ExactMatrix.from_rows([[1, 2, 3], [1, 2, 3]], QQ)) == 1
    assert rank(ExactMatrix.from_rows([[1, 2, 3], [1, 2, 3]], F61)) == 1


@pytest.mark.parametrize("field", [QQ, F61, PrimeField(P62)])
def test_vandermonde_rank_matches_cofactor_determinant(field):
    xs = [2, 3, 5, 7]
    V = [[x ** j for j in range(4)] for x in xs]
    det = cofactor_det(V)
    assert det == np.prod([b - a for i, a in enumerate(xs) for b in xs[i + 1:]])
    assert rank(ExactMatrix.from_rows(V, field)) == 4


def test_mixed_fields_rejected():
    A = ExactMatrix.from_rows([[1, 2]], QQ)
    B = ExactMatrix.from_rows([[1, 2]], F61)
    with pytest.raises(FieldMismatchError):
        A.vstack(B)
    with pytest.raises(FieldMismatchError):
        FieldScalar(1, QQ) + FieldScalar(1, F61)


def test_prime_field_inverse_and_fraction():
    assert F61(Fraction(1, 2)) * 2 % P61 == 1
    with pytest.raises(ZeroDivisionError):
        F61.inv(0)


def test_intersect_dim_examples():
    F = QQ
    line = ExactMatrix.from_rows([[1, 0], [0, 1], [0, 0], [0, 0]], F)
    assert intersect_dim(line, line) == 1
    rng = np.random.default_rng(1)
    a = ExactMatrix.from_rows(rng.integers(-9, 9, (6, 3)).tolist(), F)
    b = ExactMatrix.from_rows(rng.integers(-9, 9, (6, 3)).tolist(), F)
    assert intersect_dim(a, b) == -1
    a = ExactMatrix.from_rows(rng.integers(-9, 9, (5, 3)).tolist(), F)
    b = ExactMatrix.from_rows(rng.integers(-9, 9, (5, 3)).tolist(), F)
    assert intersect_dim(a, b) == 0
    with pytest.raises(ValueError):
        intersect_dim(ExactMatrix(np.empty((4, 0), dtype=object), F), line)


def test_smith_examples():
    assert smith_rank(IntMatrix.from_rows([[2, 0], [0, 3]])) == (2, [1, 6])
    assert smith_rank(IntMatrix.from_rows([[0, 0], [0, 0]])) == (0, [])
    assert smith_rank(IntMatrix.from_rows([[2, 4]])) == (1, [2])


def test_smith_against_sympy():
    rng = np.random.default_rng(7)
    for _ in range(60):
        r, c = rng.integers(1, 5, size=2)
        A = rng.integers(-6, 7, size=(r, c))
        if rng.random() < 0.3:
            A[-1] = A[0] * 2
        ours = smith_normal_form(IntMatrix.from_rows(A.tolist()))
        snf = sympy_snf(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
        theirs = [abs(int(snf[i, i])) for i in range(min(r, c)) if snf[i, i] != 0]
        assert sorted(ours) == sorted(theirs)


def test_rank_agrees_with_reference_eliminations():
    rng = np.random.default_rng(3)
    for _ in range(30):
        k = int(rng.integers(1, 5))
        A = rng.integers(-20, 20, (6, k)) @ rng.integers(-20, 20, (k, 7))
        rows = A.tolist()
        assert rank(ExactMatrix.from_rows(rows, QQ)) == gauss_rank_fraction(rows)
        assert rank(ExactMatrix.from_rows(rows, F61)) == gauss_rank_mod(rows, P61)


def test_annihilator_and_nullspace():
    A = ExactMatrix.from_rows([[1, 2, 3, 4], [0, 1, 1, 1]], QQ)
    for order in (None, [3, 2, 1, 0]):
        Q = annihilator(A, order)
        assert Q.shape == (2, 4)
        assert all(x == 0 for x in (Q @ A.T).entries.ravel())
    K = nullspace(A)
    assert all(x == 0 for x in (A @ K.T).entries.ravel())
    assert row_spaces_equal(annihilator(A), annihilator(A, [3, 2, 1, 0]))


def test_span_intersection():
    A = ExactMatrix.from_rows([[1, 0, 0], [0, 1, 0]], QQ)
    B = ExactMatrix.from_rows([[0, 1, 0], [0, 0, 1]], QQ)
    X = span_intersection(A, B)
    assert X.shape == (1, 3) and row_spaces_equal(X, ExactMatrix.from_rows([[0, 1, 0]], QQ))


monomials = st.tuples(
    st.integers(-3, 3), st.integers(-2, 4), st.integers(0, 4), st.integers(1, 9),
)


@settings(max_examples=100, deadline=None)
@given(monomials, st.tuples(st.integers(1, 9), st.integers(-9, -1), st.integers(1, 9)))
def test_jet_matches_closed_form_derivatives(mono, point):
    *e, c = mono
    pm = PolyMap.from_polys([{tuple(e): c}], 3)
    u = [Fraction(x) for x in point]
    (jet,) = jet_eval(pm, u)

    def mono_value(exps, coeff):
        v = Fraction(coeff)
        for x, k in zip(u, exps):
            v *= x ** k
        return v

    assert jet.val == mono_value(e, c)
    for i in range(3):
        di = list(e)
        di[i] -= 1
        assert jet.grad[i] == (mono_value(di, c * e[i]) if e[i] else 0)
        for j in range(3):
            dij = list(di)
            dij[j] -= 1
            coeff = c * e[i] * (e[j] - (1 if i == j else 0))
            assert jet.hess[i][j] == (mono_value(dij, coeff) if coeff else 0)
    # the kernel path gives the same numbers modulo a prime
    val, grad, hess = pm.taylor(point, F61, order=2)
    assert val[0] == F61(jet.val)
    assert [grad[0, i] for i in range(3)] == [F61(g) for g in jet.grad]


def test_forbidden_point():
    pm = PolyMap.from_polys([{(-1,): 1}], 1)
    with pytest.raises(ForbiddenPointError):
        pm.evaluate([0], QQ)


def test_univariate_helpers():
    a = [Fraction(-1), Fraction(0), Fraction(1)]  # s^2 - 1
    b = [Fraction(1), Fraction(1)]  # s + 1
    q, r = upoly_divmod(a, b)
    assert r == [] and upoly_mul(q, b) == a
    assert upoly_gcd(a, upoly_mul(b, b)) == b
    assert upoly_deg([0, 0]) == -1
