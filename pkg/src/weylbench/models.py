"""Closed-form curvature packages for homogeneous model spaces.

Each model is emitted at one point in an adapted orthonormal frame; all
catalog entries are locally symmetric, so the differential identities the
workbench verifies degenerate to pointwise algebraic equations there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    decompose,
    dot_product,
    inner,
    kn_four,
    kulkarni_nomizu,
    quadratic_forms,
    ricci_contraction,
    sharp_product,
)
from .tensors import EPS_ALG, CurvatureTensor, Operator2Form


@dataclass(frozen=True)
class Factor:
    kind: str       # "sphere" | "hyperbolic" | "euclidean"
    dim: int
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in ("sphere", "hyperbolic", "euclidean"):
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.dim < 2:
            raise ValueError("product factors need dimension >= 2")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def sectional(self) -> float:
        if self.kind == "sphere":
            return 1.0 / self.radius ** 2
        if self.kind == "hyperbolic":
            return -1.0 / self.radius ** 2
        return 0.0


@dataclass(frozen=True)
class ModelSpec:
    kind: str                                # "sphere"|"hyperbolic"|"euclidean"|"product"|"fubini_study"
    dim: int = 0
    radius: float = 1.0
    factors: tuple[Factor, ...] = ()
    complex_dim: int = 0

    @property
    def n(self) -> int:
        if self.kind == "product":
            return sum(f.dim for f in self.factors)
        if self.kind == "fubini_study":
            return 2 * self.complex_dim
        return self.dim


@dataclass(frozen=True)
class CurvaturePackage:
    spec: ModelSpec
    R: CurvatureTensor
    Rc: np.ndarray
    S: float
    is_locally_symmetric: bool


def parse_model_spec(text: str) -> ModelSpec:
    """Parse CLI strings like "sphere:4:1.0" or "product:sphere:2:1.0,sphere:2:1.0"."""
    text = text.strip()
    if text.startswith("product:"):
        factors = []
        for part in text[len("product:"):].split(","):
            bits = part.strip().split(":")
            if len(bits) == 2:
                kind, dim = bits
                radius = 1.0
            elif len(bits) == 3:
                kind, dim, radius = bits
            else:
                raise ValueError(f"bad product factor {part!r}")
            factors.append(Factor(kind, int(dim), float(radius)))
        if len(factors) < 2:
            raise ValueError("product needs at least two factors")
        return ModelSpec(kind="product", factors=tuple(factors))
    bits = text.split(":")
    kind = bits[0].replace("-", "_")
    if kind in ("sphere", "hyperbolic"):
        if len(bits) not in (2, 3):
            raise ValueError(f"bad model spec {text!r}")
        return ModelSpec(kind=kind, dim=int(bits[1]),
                         radius=float(bits[2]) if len(bits) == 3 else 1.0)
    if kind == "euclidean":
        return ModelSpec(kind=kind, dim=int(bits[1]))
    if kind == "fubini_study":
        return ModelSpec(kind=kind, complex_dim=int(bits[1]))
    raise ValueError(f"unknown model kind {bits[0]!r}")


def _space_form_four(n: int, kappa: float) -> np.ndarray:
    return 0.5 * kappa * kn_four(np.eye(n), np.eye(n))


def _product_four(factors: tuple[Factor, ...]) -> np.ndarray:
    n = sum(f.dim for f in factors)
    four = np.zeros((n, n, n, n))
    start = 0
    for f in factors:
        sl = slice(start, start + f.dim)
        g = np.zeros((n, n))
        g[sl, sl] = np.eye(f.dim)
        four += 0.5 * f.sectional * kn_four(g, g)
        start += f.dim
    return four


def _fubini_study_four(m: int) -> np.ndarray:
    """Unit Fubini-Study curvature (holomorphic sectional curvature 4)."""
    n = 2 * m
    g = np.eye(n)
    J = np.zeros((n, n))
    for k in range(m):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return (np.einsum('ik,jl->ijkl', g, g) - np.einsum('il,jk->ijkl', g, g)
            + np.einsum('ik,jl->ijkl', J, J) - np.einsum('il,jk->ijkl', J, J)
            + 2.0 * np.einsum('ij,kl->ijkl', J, J))


def model_curvature(spec: ModelSpec) -> CurvaturePackage:
    n = spec.n
    if n < 3:
        raise ValueError(f"total model dimension must be >= 3, got {n}")
    if spec.kind in ("sphere", "hyperbolic", "euclidean"):
        if spec.kind == "sphere":
            kappa = 1.0 / spec.radius ** 2
        elif spec.kind == "hyperbolic":
            kappa = -1.0 / spec.radius ** 2
        else:
            kappa = 0.0
        four = _space_form_four(n, kappa)
    elif spec.kind == "product":
        four = _product_four(spec.factors)
    elif spec.kind == "fubini_study":
        if spec.complex_dim < 2:
            raise ValueError("fubini_study needs complex dimension >= 2")
        four = _fubini_study_four(spec.complex_dim)
    else:
        raise ValueError(f"unknown model kind {spec.kind!r}")
    R = CurvatureTensor.from_operator(Operator2Form.from_four_tensor(four))
    Rc = ricci_contraction(R)
    return CurvaturePackage(spec=spec, R=R, Rc=Rc, S=float(np.trace(Rc)),
                            is_locally_symmetric=True)


def package_consistency(pkg: CurvaturePackage, tol: float = EPS_ALG) -> dict[str, float]:
    """Residuals of the internal-consistency checks every catalog entry must pass."""
    R, n = pkg.R, pkg.R.n
    out: dict[str, float] = {}
    out["ricci"] = float(np.abs(ricci_contraction(R) - pkg.Rc).max())
    out["scalar"] = abs(float(np.trace(pkg.Rc)) - pkg.S)
    if n >= 4:
        dec = decompose(R)
        total = dec.weyl.mat + dec.e_part.mat + dec.s_part.mat
        out["reassembly"] = float(np.abs(total - R.mat).max())
        lhs = inner(R, R)
        rhs = (inner(dec.weyl, dec.weyl) + pkg.S ** 2 / (2 * n * (n - 1))
               + float(np.sum(dec.E * dec.E)) / (n - 2))
        out["pythagoras"] = abs(lhs - rhs)
    return out


def symmetric_space_identity_report(pkg: CurvaturePackage) -> dict[str, float]:
    """Pointwise residuals of the zero-order identity balance on a symmetric space.

    r1 = 2 <W, W^2 + W#> - <Rc o g, W^2>
    r2 = W(E, E) - (n/(n-2)) E^3 - S |E|^2 / (n-1)

    Both vanish when the curvature is parallel; refused otherwise since the
    derivative terms they discard need not be zero.
    """
    if not pkg.is_locally_symmetric:
        raise ValueError("identity report requires a locally symmetric package")
    n = pkg.R.n
    if n < 4:
        raise ValueError("identity report requires dimension >= 4")
    dec = decompose(pkg.R)
    W = dec.weyl
    W2 = dot_product(W, W)
    cubic = float(np.sum(W.mat * (W2.mat + sharp_product(W, W).mat)))
    rc_term = float(np.sum(kulkarni_nomizu(pkg.Rc, np.eye(n)).mat * W2.mat))
    r1 = 2.0 * cubic - rc_term
    qf = quadratic_forms(W, dec.E)
    e_norm_sq = float(np.sum(dec.E * dec.E))
    r2 = qf.W_AA - (n / (n - 2)) * qf.A_cubed - pkg.S * e_norm_sq / (n - 1)
    return {"r1": float(r1), "r2": float(r2), "weyl_norm_sq": inner(W, W),
            "e_norm_sq": e_norm_sq, "scalar": pkg.S}
