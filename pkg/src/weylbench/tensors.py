"""Core tensor types: operators on 2-forms and the mixed-index tensor classes.

Norm conventions (fixed once, used everywhere):

* operators on 2-forms:  |T|^2 = sum_{i<j, k<l} T_ijkl^2  (the operator norm,
  one quarter of the full four-index square sum), so <T, S> is the Frobenius
  inner product of the pair-basis matrices;
* T in Lambda^2 x T*:    |T|^2 = sum_i sum_{a<b} T_abi^2;
* T in Lambda^3 x Lambda^2: |T|^2 = sum_{i<j<k} sum_{a<b} T_ijkab^2;
* T in T* x S^2(Lambda^2):  |T|^2 = sum_i sum_{a<b; c<d} T_iabcd^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import (
    four_tensor_to_pair_matrix,
    full3_to_pair_form,
    full5_to_triple_pair,
    pair_basis,
    pair_form_to_full3,
    pair_matrix_to_four_tensor,
    triple_basis,
)

#: default relative tolerance for exact algebraic identities in double precision
EPS_ALG = 1e-10

#: tolerance for normal-form round trips (eigenvector sensitivity)
EPS_NF = 1e-8


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


def check_dimension(n: int, minimum: int = 2) -> int:
    if int(n) != n or n < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {n}")
    return int(n)


def check_symmetric(mat: np.ndarray, what: str = "matrix", tol: float = EPS_ALG) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{what} must be square, got shape {mat.shape}")
    scale = max(1.0, float(np.abs(mat).max()))
    if np.abs(mat - mat.T).max() > tol * scale:
        raise ValueError(f"{what} is not symmetric within tolerance {tol}")
    return (mat + mat.T) / 2.0


class Operator2Form:
    """Operator on 2-forms stored as its pair-basis matrix.

    Self-adjointness (T_ijkl = T_klij) is required at construction unless
    ``require_self_adjoint=False``; products of distinct operators need the
    relaxed form since R.S is self-adjoint only when the factors commute.
    """

    __slots__ = ("n", "mat", "_four")

    def __init__(self, n: int, mat: np.ndarray, require_self_adjoint: bool = True):
        self.n = check_dimension(n)
        pb = pair_basis(self.n)
        mat = np.asarray(mat, dtype=float)
        if mat.shape != (pb.size, pb.size):
            raise ValueError(f"expected {pb.size} x {pb.size} matrix for n={n}, got {mat.shape}")
        if require_self_adjoint:
            mat = check_symmetric(mat, "pair-basis matrix")
        self.mat = _frozen(mat)
        self._four = None

    @classmethod
    def from_four_tensor(cls, four: np.ndarray, require_self_adjoint: bool = True,
                         tol: float = EPS_ALG) -> "Operator2Form":
        four = np.asarray(four, dtype=float)
        n = four.shape[0]
        if four.shape != (n, n, n, n):
            raise ValueError(f"expected (n,n,n,n) tensor, got {four.shape}")
        scale = max(1.0, float(np.abs(four).max()))
        if np.abs(four + np.swapaxes(four, 0, 1)).max() > tol * scale:
            raise ValueError("tensor is not antisymmetric in the first index pair")
        if np.abs(four + np.swapaxes(four, 2, 3)).max() > tol * scale:
            raise ValueError("tensor is not antisymmetric in the second index pair")
        return cls(n, four_tensor_to_pair_matrix(n, four), require_self_adjoint)

    @property
    def size(self) -> int:
        return self.mat.shape[0]

    def four(self) -> np.ndarray:
        """Full (n, n, n, n) tensor; cached after the first call."""
        if self._four is None:
            self._four = _frozen(pair_matrix_to_four_tensor(self.n, self.mat))
        return self._four

    def component(self, i: int, j: int, k: int, l: int) -> float:
        pb = pair_basis(self.n)
        if i == j or k == l:
            return 0.0
        s = pb.sign[i, j] * pb.sign[k, l]
        return float(s * self.mat[pb.pos[i, j], pb.pos[k, l]])

    def is_self_adjoint(self, tol: float = EPS_ALG) -> bool:
        scale = max(1.0, float(np.abs(self.mat).max()))
        return bool(np.abs(self.mat - self.mat.T).max() <= tol * scale)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def _wrap(self, mat: np.ndarray, sym: bool = True) -> "Operator2Form":
        return Operator2Form(self.n, mat, require_self_adjoint=sym)

    def __add__(self, other: "Operator2Form") -> "Operator2Form":
        self._check_same(other)
        return Operator2Form(self.n, self.mat + other.mat, require_self_adjoint=False)

    def __sub__(self, other: "Operator2Form") -> "Operator2Form":
        self._check_same(other)
        return Operator2Form(self.n, self.mat - other.mat, require_self_adjoint=False)

    def __mul__(self, scalar: float) -> "Operator2Form":
        return Operator2Form(self.n, self.mat * float(scalar), require_self_adjoint=False)

    __rmul__ = __mul__

    def _check_same(self, other: "Operator2Form") -> None:
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


def inner(a: Operator2Form, b: Operator2Form) -> float:
    """<a, b> = (1/4) of the full four-index contraction."""
    a._check_same(b)
    return float(np.sum(a.mat * b.mat))


def norm(a: Operator2Form) -> float:
    return float(np.linalg.norm(a.mat))


def bianchi_residual(op: Operator2Form) -> float:
    """Max-norm of the first-Bianchi cyclic sum b(T)."""
    T = op.four()
    b = (T + np.transpose(T, (1, 2, 0, 3)) + np.transpose(T, (2, 0, 1, 3))) / 3.0
    return float(np.abs(b).max())


class CurvatureTensor(Operator2Form):
    """Self-adjoint operator on 2-forms satisfying the first Bianchi identity."""

    __slots__ = ()

    def __init__(self, n: int, mat: np.ndarray, tol: float = EPS_ALG):
        super().__init__(n, mat, require_self_adjoint=True)
        scale = max(1.0, float(np.abs(self.mat).max()))
        if bianchi_residual(self) > tol * scale:
            raise ValueError("first Bianchi identity violated beyond tolerance")

    @classmethod
    def from_operator(cls, op: Operator2Form, tol: float = EPS_ALG) -> "CurvatureTensor":
        return cls(op.n, op.mat, tol=tol)


@dataclass(frozen=True)
class CurvatureDecomposition:
    """Orthogonal splitting R = weyl + e_part + s_part.

    ``e_part`` is (E o g)/(n-2) and ``s_part`` is S (g o g)/(2n(n-1)), with the
    traceless Ricci E and scalar S exposed directly.
    """

    weyl: CurvatureTensor
    e_part: CurvatureTensor
    s_part: CurvatureTensor
    E: np.ndarray
    S: float


class TwoFormOneForm:
    """3-index tensor antisymmetric in its first two slots, components (N, n)."""

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: np.ndarray):
        self.n = check_dimension(n)
        pb = pair_basis(self.n)
        comps = np.asarray(comps, dtype=float)
        if comps.shape != (pb.size, self.n):
            raise ValueError(f"expected ({pb.size}, {n}) components, got {comps.shape}")
        self.comps = _frozen(comps)

    @classmethod
    def from_full(cls, full: np.ndarray, tol: float = EPS_ALG) -> "TwoFormOneForm":
        full = np.asarray(full, dtype=float)
        n = full.shape[0]
        if full.shape != (n, n, n):
            raise ValueError(f"expected (n, n, n) tensor, got {full.shape}")
        scale = max(1.0, float(np.abs(full).max()))
        if np.abs(full + np.swapaxes(full, 0, 1)).max() > tol * scale:
            raise ValueError("tensor is not antisymmetric in its first two slots")
        return cls(n, full3_to_pair_form(n, full))

    def full(self) -> np.ndarray:
        return pair_form_to_full3(self.n, self.comps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.comps))

    def __sub__(self, other: "TwoFormOneForm") -> "TwoFormOneForm":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return TwoFormOneForm(self.n, self.comps - other.comps)

    def __mul__(self, scalar: float) -> "TwoFormOneForm":
        return TwoFormOneForm(self.n, self.comps * float(scalar))

    __rmul__ = __mul__


class ThreeTwoTensor:
    """Element of Lambda^3 x Lambda^2, components (triples, pairs)."""

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: np.ndarray):
        self.n = check_dimension(n, minimum=3)
        tb = triple_basis(self.n)
        pb = pair_basis(self.n)
        comps = np.asarray(comps, dtype=float)
        if comps.shape != (tb.size, pb.size):
            raise ValueError(f"expected ({tb.size}, {pb.size}) components, got {comps.shape}")
        self.comps = _frozen(comps)

    @classmethod
    def from_full(cls, full: np.ndarray) -> "ThreeTwoTensor":
        n = full.shape[0]
        return cls(n, full5_to_triple_pair(n, np.asarray(full, dtype=float)))

    def norm(self) -> float:
        return float(np.linalg.norm(self.comps))

    def __sub__(self, other: "ThreeTwoTensor") -> "ThreeTwoTensor":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return ThreeTwoTensor(self.n, self.comps - other.comps)

    def __add__(self, other: "ThreeTwoTensor") -> "ThreeTwoTensor":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return ThreeTwoTensor(self.n, self.comps + other.comps)

    def __mul__(self, scalar: float) -> "ThreeTwoTensor":
        return ThreeTwoTensor(self.n, self.comps * float(scalar))

    __rmul__ = __mul__


class CovDerivCurvature:
    """Formal covariant derivative of a curvature-type tensor.

    Components (m, a, b) over pair indices: slice m holds nabla_m T as a
    pair-basis matrix, each slice symmetric (T_abcd = T_cdab in the last
    four slots).
    """

    __slots__ = ("n", "comps")

    def __init__(self, n: int, comps: np.ndarray, tol: float = EPS_ALG):
        self.n = check_dimension(n)
        pb = pair_basis(self.n)
        comps = np.asarray(comps, dtype=float)
        if comps.shape != (self.n, pb.size, pb.size):
            raise ValueError(f"expected ({n}, {pb.size}, {pb.size}) components, got {comps.shape}")
        scale = max(1.0, float(np.abs(comps).max()))
        if np.abs(comps - np.swapaxes(comps, 1, 2)).max() > tol * scale:
            raise ValueError("slices are not symmetric in the last four slots")
        self.comps = _frozen(comps)

    @classmethod
    def from_full(cls, full: np.ndarray, tol: float = EPS_ALG) -> "CovDerivCurvature":
        full = np.asarray(full, dtype=float)
        n = full.shape[0]
        if full.shape != (n, n, n, n, n):
            raise ValueError(f"expected (n,)*5 tensor, got {full.shape}")
        comps = np.stack([four_tensor_to_pair_matrix(n, full[m]) for m in range(n)])
        return cls(n, comps, tol=tol)

    def full(self) -> np.ndarray:
        return np.stack([pair_matrix_to_four_tensor(self.n, self.comps[m])
                         for m in range(self.n)])

    def slice(self, m: int, require_self_adjoint: bool = True) -> Operator2Form:
        return Operator2Form(self.n, self.comps[m], require_self_adjoint)

    def norm(self) -> float:
        return float(np.linalg.norm(self.comps))


class PureCurvatureMatrix:
    """Sectional-value matrix w_ij of a curvature diagonal on coordinate 2-forms.

    Symmetric, zero diagonal, and every row sums to zero.
    """

    __slots__ = ("n", "w")

    def __init__(self, n: int, w: np.ndarray, tol: float = EPS_ALG):
        self.n = check_dimension(n)
        w = np.asarray(w, dtype=float)
        if w.shape != (self.n, self.n):
            raise ValueError(f"expected ({n}, {n}) matrix, got {w.shape}")
        scale = max(1.0, float(np.abs(w).max()))
        if np.abs(w - w.T).max() > tol * scale:
            raise ValueError("pure-curvature matrix must be symmetric")
        if np.abs(np.diag(w)).max() > tol * scale:
            raise ValueError("pure-curvature matrix must have zero diagonal")
        if np.abs(w.sum(axis=1)).max() > tol * scale:
            raise ValueError("pure-curvature matrix rows must sum to zero")
        self.w = _frozen(w)
