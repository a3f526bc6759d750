"""Basis bookkeeping and tensor-container invariants."""

import numpy as np
import pytest

from weylbench.basis import (
    four_tensor_to_pair_matrix,
    pair_basis,
    pair_matrix_to_four_tensor,
    triple_basis,
)
from weylbench.sampling import random_operator, random_two_form_one_form
from weylbench.tensors import (
    CovDerivCurvature,
    CurvatureTensor,
    Operator2Form,
    PureCurvatureMatrix,
    ThreeTwoTensor,
    inner,
    norm,
)

rng = np.random.default_rng(42)


def test_pair_basis_roundtrip():
    for n in (2, 3, 4, 6):
        pb = pair_basis(n)
        assert pb.size == n * (n - 1) // 2
        for a, (i, j) in enumerate(pb.pairs):
            assert pb.pos[i, j] == a == pb.pos[j, i]
            assert pb.sign[i, j] == 1.0 and pb.sign[j, i] == -1.0
        assert pb.pairs == tuple(sorted(pb.pairs))


def test_pair_basis_rejects_degenerate_dimension():
    with pytest.raises(ValueError):
        pair_basis(1)


def test_triple_basis_signs():
    tb = triple_basis(4)
    assert tb.size == 4
    a = tb.triples.index((0, 1, 2))
    assert tb.pos[0, 1, 2] == a and tb.sign[0, 1, 2] == 1
    assert tb.pos[1, 0, 2] == a and tb.sign[1, 0, 2] == -1
    assert tb.pos[2, 0, 1] == a and tb.sign[2, 0, 1] == 1
    assert tb.sign[0, 0, 1] == 0


def test_four_tensor_roundtrip():
    for n in (3, 4, 5):
        N = n * (n - 1) // 2
        m = rng.standard_normal((N, N))
        four = pair_matrix_to_four_tensor(n, m)
        assert np.allclose(four, -np.swapaxes(four, 0, 1))
        assert np.allclose(four, -np.swapaxes(four, 2, 3))
        back = four_tensor_to_pair_matrix(n, four)
        assert np.array_equal(back, m)


def test_operator_requires_symmetry():
    N = pair_basis(4).size
    m = rng.standard_normal((N, N))
    with pytest.raises(ValueError):
        Operator2Form(4, m)
    op = Operator2Form(4, m, require_self_adjoint=False)
    assert not op.is_self_adjoint()


def test_operator_component_accessor():
    op = random_operator(rng, 4)
    four = op.four()
    assert op.component(0, 1, 2, 3) == pytest.approx(four[0, 1, 2, 3])
    assert op.component(1, 0, 2, 3) == pytest.approx(-four[0, 1, 2, 3])
    assert op.component(0, 0, 2, 3) == 0.0


def test_operator_norm_is_quarter_of_full_contraction():
    op = random_operator(rng, 5)
    four = op.four()
    assert np.einsum('ijkl,ijkl->', four, four) == pytest.approx(4 * norm(op) ** 2)
    assert inner(op, op) == pytest.approx(norm(op) ** 2)


def test_inner_dimension_mismatch():
    with pytest.raises(ValueError):
        inner(random_operator(rng, 4), random_operator(rng, 5))


def test_curvature_tensor_rejects_bianchi_violation():
    # a generic symmetric operator has a nonzero totally antisymmetric part
    for _ in range(5):
        op = random_operator(rng, 4)
        try:
            CurvatureTensor(4, op.mat)
        except ValueError:
            return
    pytest.fail("no Bianchi violation detected on generic operators")


def test_two_form_one_form_norm_convention():
    A = random_two_form_one_form(rng, 5, trace_free=False)
    full = A.full()
    assert np.allclose(full, -np.swapaxes(full, 0, 1))
    assert 0.5 * np.einsum('ijk,ijk->', full, full) == pytest.approx(A.norm() ** 2)


def test_three_two_tensor_norm_convention():
    n = 5
    full = rng.standard_normal((n,) * 5)
    # antisymmetrize the leading three slots and trailing pair
    from itertools import permutations
    acc = np.zeros_like(full)
    for perm in permutations(range(3)):
        sign = 1 if perm in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
        acc += sign * np.transpose(full, perm + (3, 4))
    acc = (acc - np.transpose(acc, (0, 1, 2, 4, 3))) / 12.0
    t = ThreeTwoTensor.from_full(acc)
    assert np.einsum('abcde,abcde->', acc, acc) / 12.0 == pytest.approx(t.norm() ** 2)


def test_cov_deriv_norm_convention():
    n = 4
    N = pair_basis(n).size
    comps = rng.standard_normal((n, N, N))
    comps = (comps + np.swapaxes(comps, 1, 2)) / 2
    D = CovDerivCurvature(n, comps)
    full = D.full()
    assert np.einsum('mabcd,mabcd->', full, full) == pytest.approx(4 * D.norm() ** 2)


def test_pure_matrix_invariants_enforced():
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        PureCurvatureMatrix(2, w)  # rows do not sum to zero
    w = np.array([[0.5, -0.5], [-0.5, 0.5]])
    with pytest.raises(ValueError):
        PureCurvatureMatrix(2, w)  # nonzero diagonal
    good = np.array([[0.0, 0.0], [0.0, 0.0]])
    PureCurvatureMatrix(2, good)
