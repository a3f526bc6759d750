"""Products and maps on algebraic curvature tensors.

The inner product is fixed as one quarter of the full four-index contraction
(the operator convention), and every factor-sensitive formula below is written
against that single choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensors import (
    EPS_ALG,
    CovDerivCurvature,
    CurvatureDecomposition,
    CurvatureTensor,
    Operator2Form,
    PureCurvatureMatrix,
    ThreeTwoTensor,
    TwoFormOneForm,
    check_symmetric,
    inner,
)

__all__ = [
    "kulkarni_nomizu", "ricci_contraction", "bianchi_project", "decompose",
    "dot_product", "sharp_product", "tri", "circ_prime", "second_bianchi",
    "u_contraction", "quadratic_forms", "pure_cubics", "weyl_sectional_split",
    "QuadraticForms", "PureCubics", "kn_four",
]


def kn_four(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Kulkarni-Nomizu product as a raw four-index array.

    (h o k)_ijkl = h_ik k_jl + k_ik h_jl - h_il k_jk - k_il h_jk
    """
    return (np.einsum('ik,jl->ijkl', h, k) + np.einsum('ik,jl->ijkl', k, h)
            - np.einsum('il,jk->ijkl', h, k) - np.einsum('il,jk->ijkl', k, h))


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> CurvatureTensor:
    """Kulkarni-Nomizu product of two symmetric bilinear forms.

    The result satisfies the first Bianchi identity and is symmetric in its
    two arguments.
    """
    h = check_symmetric(h, "first factor")
    k = check_symmetric(k, "second factor")
    if h.shape != k.shape:
        raise ValueError(f"dimension mismatch: {h.shape[0]} vs {k.shape[0]}")
    return CurvatureTensor.from_operator(
        Operator2Form.from_four_tensor(kn_four(h, k)))


def ricci_contraction(T: Operator2Form) -> np.ndarray:
    """rc(T)(X, Y) = trace of T(X, ., Y, .); symmetric for self-adjoint T."""
    return np.einsum('ipjp->ij', T.four())


def bianchi_project(T: Operator2Form) -> tuple[CurvatureTensor, Operator2Form]:
    """Split T into its first-Bianchi kernel part and the complementary part.

    The image part is the cyclic average b(T); for self-adjoint T it is the
    totally antisymmetric component, orthogonal to the kernel part.
    """
    four = T.four()
    imb4 = (four + np.transpose(four, (1, 2, 0, 3)) + np.transpose(four, (2, 0, 1, 3))) / 3.0
    imb = Operator2Form.from_four_tensor(imb4, require_self_adjoint=T.is_self_adjoint())
    kerb = CurvatureTensor(T.n, T.mat - imb.mat)
    return kerb, imb


def decompose(R: CurvatureTensor) -> CurvatureDecomposition:
    """Orthogonal decomposition of a curvature tensor into Weyl/traceless-Ricci/scalar parts.

    W = R - S (g o g)/(2n(n-1)) - (E o g)/(n-2) with rc(W) = 0, and the three
    parts satisfy |R|^2 = |W|^2 + S^2/(2n(n-1)) + |E|^2/(n-2).
    """
    n = R.n
    if n < 4:
        raise ValueError(f"Weyl decomposition requires dimension >= 4, got {n}")
    g = np.eye(n)
    Rc = ricci_contraction(R)
    S = float(np.trace(Rc))
    E = Rc - (S / n) * g
    s_part = CurvatureTensor.from_operator(
        Operator2Form.from_four_tensor(S / (2 * n * (n - 1)) * kn_four(g, g)))
    e_part = CurvatureTensor.from_operator(
        Operator2Form.from_four_tensor(kn_four(E, g) / (n - 2)))
    weyl = CurvatureTensor(n, R.mat - s_part.mat - e_part.mat)
    return CurvatureDecomposition(weyl=weyl, e_part=e_part, s_part=s_part, E=E, S=S)


def dot_product(R: Operator2Form, S: Operator2Form) -> Operator2Form:
    """(R.S)_ijkl = (1/2) sum_pq R_ijpq S_klpq; the pair-basis matrix product."""
    R._check_same(S)
    mat = R.mat @ S.mat.T
    return Operator2Form(R.n, mat, require_self_adjoint=False)


def sharp_four(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Sharp product on raw four-index arrays.

    (R # S)_ijkl = (1/2) sum_pq [ R_ipkq S_jplq + S_ipkq R_jplq
                                 - R_iplq S_jpkq - S_iplq R_jpkq ]

    All four terms are index permutations of the first contraction, so a
    single einsum suffices.
    """
    m = np.einsum('ipkq,jplq->ijkl', A, B)
    return 0.5 * (m + np.transpose(m, (1, 0, 3, 2))
                  - np.transpose(m, (0, 1, 3, 2)) - np.transpose(m, (1, 0, 2, 3)))


def sharp_product(R: Operator2Form, S: Operator2Form) -> Operator2Form:
    """Commutative sharp product of two operators on 2-forms."""
    R._check_same(S)
    return Operator2Form.from_four_tensor(sharp_four(R.four(), S.four()),
                                          require_self_adjoint=False)


def tri(R1: Operator2Form, R2: Operator2Form, R3: Operator2Form) -> float:
    """Trilinear form <R1.R2 + R2.R1 + 2 R1 # R2, R3>, symmetric in all slots."""
    R1._check_same(R2)
    R1._check_same(R3)
    combo = (dot_product(R1, R2).mat + dot_product(R2, R1).mat
             + 2.0 * sharp_product(R1, R2).mat)
    return float(np.sum(combo * R3.mat))


def circ_prime_full(a: np.ndarray) -> np.ndarray:
    """Raw-array circ-prime kernel on a full (n, n, n) antisymmetric-pair tensor."""
    n = a.shape[0]
    g = np.eye(n)
    return (np.einsum('kn,ijm->ijkmn', g, a) + np.einsum('in,jkm->ijkmn', g, a)
            + np.einsum('jn,kim->ijkmn', g, a) + np.einsum('km,jin->ijkmn', g, a)
            + np.einsum('im,kjn->ijkmn', g, a) + np.einsum('jm,ikn->ijkmn', g, a))


def circ_prime(A: TwoFormOneForm) -> ThreeTwoTensor:
    """Six-term product of a 2-form-valued 1-form with the metric.

    (A o' g)_ijkmn = g_kn A_ijm + g_in A_jkm + g_jn A_kim
                   + g_km A_jin + g_im A_kjn + g_jm A_ikn

    For A with vanishing 1-3 contraction (sum_i A_iji = 0, automatic for
    divergence-type tensors) the norm identity |A o' g|^2 = (n-3)|A|^2 holds.
    """
    if A.n < 4:
        raise ValueError(f"circ-prime product requires dimension >= 4, got {A.n}")
    return ThreeTwoTensor.from_full(circ_prime_full(A.full()))


def second_bianchi_full(full: np.ndarray) -> np.ndarray:
    """Raw-array second-Bianchi kernel on a full (n,)*5 derivative tensor."""
    return full + np.transpose(full, (1, 2, 0, 3, 4)) + np.transpose(full, (2, 0, 1, 3, 4))


def second_bianchi(D: CovDerivCurvature) -> ThreeTwoTensor:
    """Cyclic sum over the derivative slot and the leading 2-form pair.

    B(D)_ijkmn = D_i,jkmn + D_j,kimn + D_k,ijmn; alternating in (i, j, k),
    vanishing exactly on derivative fields of genuine metrics.
    """
    return ThreeTwoTensor.from_full(second_bianchi_full(D.full()))


def u_tensor_contractions(W: CurvatureTensor) -> tuple[float, float]:
    """Raw skew-auxiliary-tensor sums (norm-square sum, cubic contraction sum)."""
    n = W.n
    g = np.eye(n)
    Wf = W.four()
    v = (np.einsum('inpq,jm->mnpqij', Wf, g) + np.einsum('mipq,jn->mnpqij', Wf, g)
         + np.einsum('mniq,jp->mnpqij', Wf, g) + np.einsum('mnpi,jq->mnpqij', Wf, g))
    u = v - np.transpose(v, (0, 1, 2, 3, 5, 4))
    norm_sum = float(np.sum(u * u))
    U = u.reshape(n ** 4, n ** 2)
    cubic_sum = float(np.sum((U @ Wf.reshape(n ** 2, n ** 2)) * U))
    return norm_sum, cubic_sum


def u_contraction(W: CurvatureTensor, tol: float = EPS_ALG) -> tuple[float, float]:
    """Auxiliary skew-tensor sums for a trace-free curvature operator.

    Returns (u_norm_sq, contracted) where u_norm_sq equals 32(n-1)|W|^2 and
    contracted equals 8 <W, W^2 + W#>.  The cubic contraction is orientation-
    fixed: the raw sum sum W_ijkl u_ij u_kl carries the opposite sign.
    """
    Rc = ricci_contraction(W)
    scale = max(1.0, float(np.abs(W.mat).max()))
    if np.abs(Rc).max() > tol * scale:
        raise ValueError("u-contraction requires a trace-free (Weyl-type) input")
    norm_sum, cubic_sum = u_tensor_contractions(W)
    return norm_sum, -cubic_sum / 8.0


@dataclass(frozen=True)
class QuadraticForms:
    W_AA: float
    A_cubed: float


def quadratic_forms(W: Operator2Form, A: np.ndarray) -> QuadraticForms:
    """W(A, A) = sum W_ijkl A_ik A_jl and the matrix cube trace sum A_ij A_jk A_ki."""
    A = check_symmetric(A, "quadratic-form argument")
    if A.shape[0] != W.n:
        raise ValueError(f"dimension mismatch: {W.n} vs {A.shape[0]}")
    w_aa = float(np.einsum('ijkl,ik,jl->', W.four(), A, A))
    a3 = float(np.einsum('ij,jk,ki->', A, A, A))
    return QuadraticForms(W_AA=w_aa, A_cubed=a3)


@dataclass(frozen=True)
class PureCubics:
    sharp_cubic: float
    square_cubic: float
    three_plane_sum: float


def pure_cubics(w: PureCurvatureMatrix) -> PureCubics:
    """Cubic sums of a pure-curvature matrix.

    sharp_cubic     = 6 sum_{i<j<k} w_ij w_ik w_kj
    square_cubic    = 2 sum_{i<j}   w_ij^3
    three_plane_sum =   sum_{i<j<k} (w_ij + w_jk + w_ik)^3

    These satisfy sharp_cubic = ((8-n)/2) square_cubic + three_plane_sum, and
    relate to the operator products of the diagonal curvature by
    <W, W#> = sharp_cubic / 2 and <W, W^2> = square_cubic / 2.
    """
    n, mat = w.n, w.w
    # ordered sums over all (i, j, k) vanish on non-distinct indices (zero diagonal)
    sharp_ordered = float(np.einsum('ij,ik,kj->', mat, mat, mat))
    iu = np.triu_indices(n, 1)
    square_cubic = 2.0 * float(np.sum(mat[iu] ** 3))
    three = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                three += (mat[a, b] + mat[b, c] + mat[a, c]) ** 3
    return PureCubics(sharp_cubic=sharp_ordered, square_cubic=square_cubic,
                      three_plane_sum=float(three))


def weyl_sectional_split(W: CurvatureTensor, subset: "set[int] | tuple[int, ...]",
                         tol: float = EPS_ALG) -> tuple[float, float]:
    """Sum of diagonal components W_ijij over pairs inside the subset and its complement.

    For a trace-free operator the two sums are equal; indices are 0-based.
    """
    n = W.n
    idx = sorted(set(int(i) for i in subset))
    if any(i < 0 or i >= n for i in idx):
        raise ValueError("subset indices out of range")
    if not idx or len(idx) == n:
        raise ValueError("subset must be proper and nonempty")
    Rc = ricci_contraction(W)
    scale = max(1.0, float(np.abs(W.mat).max()))
    if np.abs(Rc).max() > tol * scale:
        raise ValueError("sectional split requires a trace-free (Weyl-type) input")
    comp = [i for i in range(n) if i not in idx]
    w1 = sum(W.component(i, j, i, j) for a, i in enumerate(idx) for j in idx[a + 1:])
    w2 = sum(W.component(i, j, i, j) for a, i in enumerate(comp) for j in comp[a + 1:])
    return float(w1), float(w2)


def pure_matrix_from_weyl(W: CurvatureTensor, tol: float = EPS_ALG) -> PureCurvatureMatrix:
    """Extract w_ij = W_ijij; valid when the operator is diagonal on coordinate 2-forms."""
    n = W.n
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                w[i, j] = W.component(i, j, i, j)
    return PureCurvatureMatrix(n, w, tol=tol)
