from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from secantid.exactnum import QQ, ExactMatrix, nullspace, rank, row_spaces_equal
from secantid.varieties import make_rnc, resolve_variety
from secantid.witness import (
    WitnessError, transversal_plane, partition_count, rnc_tangential_projection, partition_witnesses,
    set_partitions, verify_rnc_counterexample,
)


def _mat(rows):
    return ExactMatrix.from_rows(rows, QQ)


def _random_planes(rng, h, r):
    while True:
        A = rng.integers(-5, 6, (h * r, h * r))
        if rank(_mat(A.tolist())) == h * r:
            return [A[i * r:(i + 1) * r].tolist() for i in range(h)]


def direct_sum_plane(planes, p):
    """Reference: p = Σ p_i with p_i in plane i is unique; the plane is spanned by the p_i."""
    basis = [row for P in planes for row in P]
    M = _mat([list(col) for col in zip(*basis)])  # columns are basis vectors
    aug = M.hstack(_mat([[x] for x in p]))
    K = nullspace(aug)
    coeffs = K.entries[0]
    coeffs = [-c / coeffs[-1] for c in coeffs[:-1]]
    r = len(planes[0])
    parts = []
    for i, P in enumerate(planes):
        c = coeffs[i * r:(i + 1) * r]
        parts.append([sum(Fraction(ci) * x for ci, x in zip(c, col)) for col in zip(*P)])
    return _mat(parts)


@pytest.mark.parametrize("h,r", [(2, 2), (3, 2), (2, 3), (4, 1), (3, 3)])
def test_transversal_matches_direct_sum_decomposition(h, r):
    rng = np.random.default_rng(h * 10 + r)
    planes = _random_planes(rng, h, r)
    p = [int(x) for x in rng.integers(1, 9, h * r)]
    w = transversal_plane(planes, p)
    assert w.verified and w.plane.shape[0] == h
    assert len(w.meets) == h
    assert row_spaces_equal(w.plane, direct_sum_plane(planes, p))


def test_transversal_order_independence():
    rng = np.random.default_rng(4)
    planes = _random_planes(rng, 3, 2)
    p = [3, 1, 4, 1, 5, 9]
    ref = transversal_plane(planes, p).plane
    for perm in permutations(range(3)):
        assert row_spaces_equal(transversal_plane([planes[i] for i in perm], p).plane, ref)


def test_transversal_skew_lines_in_p3():
    L1 = [[1, 0, 0, 0], [0, 1, 0, 0]]
    L2 = [[0, 0, 1, 0], [0, 0, 0, 1]]
    w = transversal_plane([L1, L2], [1, 2, 3, 4])
    assert row_spaces_equal(w.plane, _mat([[1, 2, 0, 0], [0, 0, 3, 4]]))


def test_transversal_errors():
    L = [[1, 0, 0, 0], [0, 1, 0, 0]]
    with pytest.raises(WitnessError):
        transversal_plane([L, L], [1, 1, 1, 1])
    with pytest.raises(WitnessError):
        transversal_plane([L, [[0, 0, 1, 0], [0, 0, 0, 1]]], [1, 1, 0, 0])


def test_partitions():
    assert partition_count(2, 2) == 3 and partition_count(3, 2) == 15 and partition_count(2, 3) == 10
    for h, r in [(2, 2), (3, 2), (2, 3), (4, 1), (2, 4)]:
        parts = list(set_partitions(h * r, r))
        assert len(parts) == partition_count(h, r)
        assert len({tuple(sorted(p)) for p in parts}) == len(parts)


@pytest.mark.parametrize("N,r,h,count", [(7, 2, 2, 3), (11, 2, 3, 15), (11, 3, 2, 10), (7, 1, 3, 1)])
def test_partition_witness_witness_counts(N, r, h, count):
    wits = partition_witnesses(make_rnc(N), r, h)
    assert len(wits) == count
    for w in wits:
        assert w.verified and len(w.meets) == h
        p = w.point
        assert rank(w.plane.vstack(_mat([p]))) == h


def test_partition_witness_on_a_surface():
    wits = partition_witnesses(resolve_variety("veronese:2:4"), 2, 2)
    assert len(wits) == 3


@pytest.mark.parametrize("N,t,span,deg", [(7, 2, 3, 3), (11, 4, 3, 3), (7, 3, 1, 1), (9, 1, 7, 7), (6, 0, 6, 6)])
def test_tangential_projection(N, t, span, deg):
    rep = rnc_tangential_projection(N, t)
    assert (rep.span_dim, rep.degree) == (span, deg)
    assert rep.span_dim + 2 * t == N
    assert rep.birational and rep.base_degree == 2 * t


def test_tangential_projection_precondition():
    with pytest.raises(ValueError):
        rnc_tangential_projection(7, 4)


@pytest.mark.parametrize("N,r,count", [(7, 2, 3), (11, 2, 15), (11, 3, 10)])
def test_verify_rnc_counterexample(N, r, count):
    d = verify_rnc_counterexample(N, r)
    assert d.verdict == "counterexample-verified"
    assert d.decompositions == count
    assert d.checks["perfect_case"]


def test_verify_rnc_counterexample_preconditions():
    with pytest.raises(ValueError):
        verify_rnc_counterexample(8, 2)
    with pytest.raises(ValueError):
        verify_rnc_counterexample(5, 1)
    assert verify_rnc_counterexample(7, 1).verdict == "not-verified"
