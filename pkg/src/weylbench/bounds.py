"""Scalar bounds, rigidity constants, and pinch-condition verdicts.

Everything here is a pure function of numeric inputs: eigenvalue extremes,
the cubic bounds on <W, W^2 + W#>, the constrained-cubic maximization with
its independent multi-start oracle, and the pointwise / norm / integral
pinch verdicts with their dimensional constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import dot_product, ricci_contraction, sharp_product
from .tensors import EPS_ALG, CurvatureTensor, check_symmetric

#: slack for tie-breaking verdict comparisons (relative)
_TIE = 1e-12


def eigen_bound(T: np.ndarray, tol: float = EPS_ALG) -> tuple[float, float]:
    """(largest |eigenvalue|, sqrt((m-1)/m) |T|_F) for a traceless symmetric T."""
    T = check_symmetric(T, "trace-free operator")
    m = T.shape[0]
    if abs(np.trace(T)) > tol * max(1.0, float(np.abs(T).max())):
        raise ValueError("operator must be trace-free")
    eigs = np.linalg.eigvalsh(T)
    return float(np.abs(eigs).max()), float(np.sqrt((m - 1) / m) * np.linalg.norm(T))


@dataclass(frozen=True)
class SpectralExtremes:
    omega_mag: float   # largest eigenvalue magnitude of the 2-form operator
    omega_max: float   # largest (signed) eigenvalue
    ell: float         # minus the smallest eigenvalue of the traceless Ricci


def spectral_extremes(W: CurvatureTensor, E: np.ndarray,
                      tol: float = EPS_ALG) -> SpectralExtremes:
    E = check_symmetric(E, "traceless Ricci")
    scale = max(1.0, float(np.abs(W.mat).max()))
    if np.abs(ricci_contraction(W)).max() > tol * scale:
        raise ValueError("W must be trace-free")
    if abs(np.trace(E)) > tol * max(1.0, float(np.abs(E).max())):
        raise ValueError("E must be traceless")
    if E.shape[0] != W.n:
        raise ValueError("dimension mismatch")
    w_eigs = W.eigenvalues()
    e_eigs = np.linalg.eigvalsh(E) if W.n else np.zeros(0)
    return SpectralExtremes(omega_mag=float(np.abs(w_eigs).max()) if w_eigs.size else 0.0,
                            omega_max=float(w_eigs.max()) if w_eigs.size else 0.0,
                            ell=float(-e_eigs.min()) if e_eigs.size else 0.0)


@dataclass(frozen=True)
class ComponentBound:
    max_component: float
    bound: float


def berger_component_bound(W: CurvatureTensor, tol: float = EPS_ALG) -> ComponentBound:
    """Largest |W_ijkl| over pairwise-distinct indices against (4/3) max|eig|."""
    scale = max(1.0, float(np.abs(W.mat).max()))
    if np.abs(ricci_contraction(W)).max() > tol * scale:
        raise ValueError("component bound applies to trace-free operators")
    from .tensors import bianchi_residual
    if bianchi_residual(W) > tol * scale:
        raise ValueError("component bound applies to Bianchi-free operators")
    from .basis import disjoint_pair_mask
    max_comp = float(np.abs(W.mat[disjoint_pair_mask(W.n)]).max())
    omega = float(np.abs(W.eigenvalues()).max())
    bound = 4.0 * omega / 3.0
    if max_comp > bound + 100 * tol * max(1.0, omega):
        raise AssertionError("component bound violated")
    return ComponentBound(max_component=max_comp, bound=bound)


def audit_cubic_bounds(n: int, samples: int, seed: int = 0,
                       chunk: int = 64) -> dict[str, float]:
    """Worst relative excesses of the component/eigenvalue/norm bounds on random
    trace-free tensors; all values <= 0 mean zero violations."""
    if n < 5:
        raise ValueError("audit applies for n >= 5")
    from .basis import disjoint_pair_mask
    from .sampling import random_weyl_batch
    rng = np.random.default_rng([seed, n])
    mask = disjoint_pair_mask(n)
    cn = table_c(n)
    worst = {"component": -np.inf, "eig": -np.inf, "norm": -np.inf}
    if n == 5:
        worst["eig_signed"] = -np.inf
        worst["dim5_identity"] = -np.inf
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        four, mats = random_weyl_batch(rng, n, b)
        eigs = np.linalg.eigvalsh(mats)
        omega = np.abs(eigs).max(axis=1)
        w2 = np.einsum('bij,bij->b', mats, mats)
        max_comp = np.abs(mats[:, mask]).max(axis=1)
        lhs_dot = np.einsum('bij,bjk,bki->b', mats, mats, mats)
        m1 = np.einsum('bipkq,bjplq->bikjl', four, four, optimize=True)
        lhs_sharp = 0.5 * np.einsum('bijkl,bikjl->b', four, m1, optimize=True)
        lhs = lhs_dot + lhs_sharp
        scale3 = np.maximum(w2, 1e-30) ** 1.5
        worst["component"] = max(worst["component"],
                                 float(((max_comp - 4.0 * omega / 3.0)
                                        / np.maximum(omega, 1e-30)).max()))
        worst["eig"] = max(worst["eig"],
                           float(((lhs - 2.0 * (n - 1) / 3.0 * omega * w2) / scale3).max()))
        worst["norm"] = max(worst["norm"], float(((lhs - cn * w2 ** 1.5) / scale3).max()))
        if n == 5:
            sig = 2.0 * (n - 1) / 3.0 * eigs.max(axis=1) * w2
            worst["eig_signed"] = max(worst["eig_signed"], float(((lhs - sig) / scale3).max()))
            worst["dim5_identity"] = max(worst["dim5_identity"],
                                         float((np.abs(lhs - 3.0 * lhs_dot) / scale3).max()))
        done += b
    return worst


def audit_eigen_bound(samples: int, seed: int = 0,
                      sizes: tuple[int, ...] = tuple(range(2, 11))) -> float:
    """Worst relative excess of max |eigenvalue| over sqrt((m-1)/m)|T| on random
    traceless symmetric matrices."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for m in sizes:
        t = rng.uniform(-1.0, 1.0, size=(samples, m, m))
        t = (t + np.transpose(t, (0, 2, 1))) / 2.0
        tr = np.einsum('bii->b', t)
        t -= tr[:, None, None] / m * np.eye(m)
        eigs = np.linalg.eigvalsh(t)
        lam = np.abs(eigs).max(axis=1)
        bound = np.sqrt((m - 1) / m) * np.sqrt(np.einsum('bij,bij->b', t, t))
        worst = max(worst, float(((lam - bound) / np.maximum(bound, 1e-30)).max()))
    return worst


@dataclass(frozen=True)
class CubicBounds:
    lhs: float
    eig_bound: float
    norm_bound: float
    lhs_dot_only: float          # <W, W^2>
    eig_bound_signed: float | None = None   # n = 5 largest-eigenvalue variant


def cubic_bound_eval(W: CurvatureTensor, tol: float = EPS_ALG) -> CubicBounds:
    """Evaluate <W, W^2 + W#> against its eigenvalue and norm bounds (n >= 5).

    eig_bound = (2(n-1)/3) omega |W|^2 with omega the largest eigenvalue
    magnitude; norm_bound = c(n) |W|^3.  In dimension five the cubic also
    equals 3 <W, W^2> and the bound holds with the largest signed eigenvalue.
    """
    n = W.n
    if n < 5:
        raise ValueError("cubic bounds apply for dimension >= 5 (dimension 4 uses the"
                         " self-dual determinant route)")
    scale = max(1.0, float(np.abs(W.mat).max()))
    if np.abs(ricci_contraction(W)).max() > tol * scale:
        raise ValueError("cubic bounds apply to trace-free operators")
    lhs_dot = float(np.sum(W.mat * dot_product(W, W).mat))
    lhs = lhs_dot + float(np.sum(W.mat * sharp_product(W, W).mat))
    eigs = W.eigenvalues()
    omega = float(np.abs(eigs).max())
    w2 = float(np.sum(W.mat * W.mat))
    eig_bound = 2.0 * (n - 1) / 3.0 * omega * w2
    cn = table_c(n)
    norm_bound = cn * w2 ** 1.5
    slack = 1e-9 * max(1.0, abs(lhs), eig_bound, norm_bound)
    if lhs > eig_bound + slack:
        raise AssertionError("eigenvalue cubic bound violated")
    if lhs > norm_bound + slack:
        raise AssertionError("norm cubic bound violated")
    signed = None
    if n == 5:
        if abs(lhs - 3.0 * lhs_dot) > 1e-9 * max(1.0, abs(lhs)):
            raise AssertionError("dimension-5 cubic identity <W,W^2+W#> = 3<W,W^2> violated")
        signed = 2.0 * (n - 1) / 3.0 * float(eigs.max()) * w2
        if lhs > signed + slack:
            raise AssertionError("dimension-5 signed eigenvalue bound violated")
    return CubicBounds(lhs=lhs, eig_bound=eig_bound, norm_bound=norm_bound,
                       lhs_dot_only=lhs_dot, eig_bound_signed=signed)


def table_c(n: int) -> float:
    """Norm-bound constant: 8/sqrt(10) in dimension five, 5 for n >= 6."""
    if n == 5:
        return 8.0 / math.sqrt(10.0)
    if n >= 6:
        return 5.0
    raise ValueError("c(n) defined for n >= 5")


def wcubic_closed_form(s: float, n: int) -> float:
    """Maximum of sum x_i^3 / sum x_i^2 over sum x_i = 0, x_i <= s: s(n-2)/(n-1)."""
    if s <= 0:
        raise ValueError("cap must be positive")
    if n < 2:
        raise ValueError("need at least two variables")
    return s * (n - 2) / (n - 1)


def _project_feasible(x: np.ndarray, s: float) -> np.ndarray:
    """Row-wise Euclidean projection onto {sum x = 0, x_i <= s} (bisection on the shift)."""
    x = np.atleast_2d(x)
    lo = x.min(axis=1) - s - 1.0
    hi = x.max(axis=1)
    for _ in range(100):
        mu = 0.5 * (lo + hi)
        total = np.minimum(x - mu[:, None], s).sum(axis=1)
        above = total > 0
        lo = np.where(above, mu, lo)
        hi = np.where(above, hi, mu)
    return np.minimum(x - (0.5 * (lo + hi))[:, None], s)


def _ratio(x: np.ndarray) -> np.ndarray:
    q = np.sum(x * x, axis=1)
    p = np.sum(x ** 3, axis=1)
    return np.where(q > 1e-18, p / np.maximum(q, 1e-18), -np.inf)


@dataclass(frozen=True)
class OracleResult:
    value: float
    best_x: np.ndarray
    evaluations: int
    converged: bool


def wcubic_oracle(s: float, n: int, budget: int = 100_000, starts: int = 64,
                  seed: int = 0) -> OracleResult:
    """Independent maximization of sum x^3 / sum x^2 on {sum x = 0, x <= s}.

    Multi-start projected gradient ascent with step halving (the candidate
    rows march in lockstep), seeded with the structured stationary points
    (q entries at the cap, the rest equal).
    """
    if s <= 0:
        raise ValueError("cap must be positive")
    if not 2 <= n <= 12:
        raise ValueError("oracle supports 2 <= n <= 12")
    rng = np.random.default_rng(seed)
    structured = []
    for q in range(1, n):
        x0 = np.full(n, -q * s / (n - q))
        x0[:q] = s
        structured.append(x0)
    x = np.vstack([np.array(structured),
                   _project_feasible(rng.uniform(-1.0, 1.0, size=(starts, n)) * s, s)])
    fx = _ratio(x)
    step = np.full(x.shape[0], 0.5 * s)
    evals = x.shape[0]
    converged = True
    while evals < budget:
        active = step > 1e-12 * s
        if not active.any():
            break
        q = np.sum(x * x, axis=1)
        p = np.sum(x ** 3, axis=1)
        qs = np.maximum(q, 1e-18)
        grad = (3.0 * x * x * qs[:, None] - 2.0 * x * p[:, None]) / (qs * qs)[:, None]
        grad -= grad.mean(axis=1, keepdims=True)
        gn = np.maximum(np.linalg.norm(grad, axis=1), 1e-30)
        trial = _project_feasible(x + (step / gn)[:, None] * grad, s)
        ft = _ratio(trial)
        evals += x.shape[0]
        accept = ft > fx
        x = np.where(accept[:, None], trial, x)
        fx = np.where(accept, ft, fx)
        step = np.where(accept, step, step * 0.5)
    else:
        converged = bool((step <= 1e-10 * s).all())
    best = int(np.argmax(fx))
    return OracleResult(value=float(fx[best]), best_x=x[best],
                        evaluations=int(evals), converged=converged)


@dataclass(frozen=True)
class ConstantsTable:
    """Dimensional constants of the rigidity machinery.

    alpha is the biggest real root of
        8(n-1)^2 a^2 - 2n(n-1)(n-2) a + n(n-2)(n-3) = 0,
    real only for n = 4 or n >= 6; a1/a2 are emitted for n >= 6, the
    dimension-5 route carries its own coefficient triple instead, and the
    dimension-4 thresholds live in the self-dual subsystem.
    """

    n: int
    s_n: float
    alpha: float | None = None
    a1: float | None = None
    a2: float | None = None
    c_n: float | None = None
    case5: tuple[float, float, float] | None = None

    def as_dict(self) -> dict:
        out = {"n": self.n, "s_n": self.s_n, "alpha": self.alpha,
               "a1": self.a1, "a2": self.a2, "c_n": self.c_n}
        if self.case5 is not None:
            out["case5_c1"], out["case5_c2"], out["case5_threshold"] = self.case5
        return out


def quadratic_coefficients(n: int) -> tuple[float, float, float]:
    return (8.0 * (n - 1) ** 2,
            -2.0 * n * (n - 1) * (n - 2),
            float(n * (n - 2) * (n - 3)))


def constants(n: int) -> ConstantsTable:
    if n < 4:
        raise ValueError("constants defined for n >= 4")
    s_n = (n - 2) / (4.0 * (n - 1))
    if n == 4:
        return ConstantsTable(n=n, s_n=s_n)
    if n == 5:
        c5 = 8.0 / math.sqrt(10.0)
        return ConstantsTable(n=n, s_n=s_n, alpha=0.5, c_n=c5,
                              case5=(c5, 2.0 / math.sqrt(5.0), 3.0 / 16.0))
    A, B, C = quadratic_coefficients(n)
    disc = B * B - 4.0 * A * C
    if disc < 0:
        raise ValueError(f"quadratic has no real roots for n={n}")
    alpha = (-B + math.sqrt(max(disc, 0.0))) / (2.0 * A)
    denom = 2.0 * (n - 1) * alpha - n + 3.0
    a1 = 10.0 * (n - 1) * alpha ** 2 / denom
    a2 = 2.0 * (n - 1) * alpha ** 2 / denom * math.sqrt((n - 1) / n)
    return ConstantsTable(n=n, s_n=s_n, alpha=alpha, a1=a1, a2=a2, c_n=table_c(n))


@dataclass(frozen=True)
class PinchVerdict:
    condition_value: float
    threshold: float
    satisfied: bool
    which: str
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"which": self.which, "condition_value": self.condition_value,
                "threshold": self.threshold, "satisfied": self.satisfied,
                **{f"detail_{k}": v for k, v in sorted(self.details.items())}}


def _leq(value: float, threshold: float) -> bool:
    return bool(value <= threshold + _TIE * max(1.0, abs(threshold)))


def pinch_verdict_pointwise(W: CurvatureTensor, E: np.ndarray, S: float,
                            use_signed_omega: bool | None = None) -> PinchVerdict:
    """Eigenvalue pinch (2(n-1)/3) omega + ell <= S/n for n >= 5.

    omega is the largest eigenvalue magnitude; in dimension five the largest
    signed eigenvalue is admissible and is the default there.
    """
    n = W.n
    if n < 5:
        raise ValueError("pointwise pinch verdict requires n >= 5")
    ext = spectral_extremes(W, E)
    if use_signed_omega is None:
        use_signed_omega = (n == 5)
    if use_signed_omega and n != 5:
        raise ValueError("the signed-eigenvalue variant is admissible only in dimension 5")
    omega = ext.omega_max if use_signed_omega else ext.omega_mag
    value = 2.0 * (n - 1) / 3.0 * omega + ext.ell
    threshold = S / n
    return PinchVerdict(condition_value=float(value), threshold=float(threshold),
                        satisfied=_leq(value, threshold), which="pointwise",
                        details={"omega_mag": ext.omega_mag, "omega_max": ext.omega_max,
                                 "ell": ext.ell, "signed_variant": bool(use_signed_omega)})


def pinch_verdict_norm(W: CurvatureTensor, E: np.ndarray, S: float) -> PinchVerdict:
    """Norm pinch c(n)|W| + sqrt((n-1)/n)|E| <= S/n for n >= 5."""
    n = W.n
    if n < 5:
        raise ValueError("norm pinch verdict requires n >= 5")
    E = check_symmetric(E, "traceless Ricci")
    w_norm = float(np.linalg.norm(W.mat))
    e_norm = float(np.linalg.norm(E))
    value = table_c(n) * w_norm + math.sqrt((n - 1) / n) * e_norm
    threshold = S / n
    return PinchVerdict(condition_value=float(value), threshold=float(threshold),
                        satisfied=_leq(value, threshold), which="norm",
                        details={"w_norm": w_norm, "e_norm": e_norm, "c_n": table_c(n)})


def pinch_verdict_dim4(omega: float, S: float) -> PinchVerdict:
    """Self-dual eigenvalue pinch 6 omega <= S in dimension four."""
    if not (np.isfinite(omega) and np.isfinite(S)):
        raise ValueError("inputs must be finite")
    value = 6.0 * omega
    return PinchVerdict(condition_value=float(value), threshold=float(S),
                        satisfied=_leq(value, S), which="dim4_selfdual",
                        details={"omega": float(omega)})


def gap_verdict_integral(norm_w: float, norm_e: float, lam: float, n: int) -> PinchVerdict:
    """Integral gap verdict on user-supplied L^{n/2} norms and Yamabe invariant.

    For n >= 6 the condition is a1 ||W|| + a2 ||E|| < s_n lambda; dimension five
    uses the coefficients (8/sqrt10, 2/sqrt5) against (3/16) lambda.  A strict
    inequality is required: meeting the gap forces conformal flatness, and the
    borderline case forces nothing.
    """
    if lam <= 0:
        raise ValueError("the Yamabe invariant input must be positive")
    if norm_w < 0 or norm_e < 0:
        raise ValueError("norms must be nonnegative")
    if n == 5:
        c1, c2, thr = constants(5).case5
        value = c1 * norm_w + c2 * norm_e
        threshold = thr * lam
        which = "case5"
        details = {"c1": c1, "c2": c2}
    elif n >= 6:
        tab = constants(n)
        value = tab.a1 * norm_w + tab.a2 * norm_e
        threshold = tab.s_n * lam
        which = "integral"
        details = {"a1": tab.a1, "a2": tab.a2, "s_n": tab.s_n}
    else:
        raise ValueError("integral gap verdict requires n >= 5")
    return PinchVerdict(condition_value=float(value), threshold=float(threshold),
                        satisfied=bool(value < threshold), which=which, details=details)


def integral_rigidity_d(norm_w: float, norm_e: float, lam: float, n: int) -> float:
    """Smallest admissible d in the hypothesis c1 ||W|| + c2 ||E|| <= d lambda.

    d is a free parameter of the general integral-rigidity estimate; this is
    the derived consistency value (c1 ||W|| + c2 ||E||) / lambda with
    c1 = 2 c(n) and c2 = 2 sqrt((n-1)/n).
    """
    if lam <= 0:
        raise ValueError("the Yamabe invariant input must be positive")
    c1 = 2.0 * table_c(n)
    c2 = 2.0 * math.sqrt((n - 1) / n)
    return (c1 * norm_w + c2 * norm_e) / lam
