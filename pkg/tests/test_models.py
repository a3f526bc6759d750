"""Model-space catalog: closed-form curvature and the symmetric-space residuals."""

import numpy as np
import pytest

from weylbench.algebra import decompose, pure_matrix_from_weyl
from weylbench.models import (
    CurvaturePackage,
    Factor,
    ModelSpec,
    model_curvature,
    package_consistency,
    parse_model_spec,
    symmetric_space_identity_report,
)

CATALOG = [
    "sphere:4:1.0",
    "sphere:5:2.0",
    "hyperbolic:5:1.0",
    "euclidean:4",
    "product:sphere:2:1.0,sphere:2:1.0",
    "product:sphere:3:1.0,sphere:2:1.0",
    "product:sphere:3:1.0,sphere:3:1.0",
    "product:sphere:2:1.0,sphere:2:1.0,sphere:2:1.0",
    "product:hyperbolic:2:1.0,sphere:2:1.0",
    "product:hyperbolic:3:1.0,sphere:3:1.0",
    "fubini_study:2",
    "fubini_study:3",
]


def test_parse_model_spec_strings():
    spec = parse_model_spec("sphere:4:1.0")
    assert spec.kind == "sphere" and spec.dim == 4 and spec.radius == 1.0
    spec = parse_model_spec("product:sphere:2:1.0,sphere:2:1.0")
    assert spec.kind == "product" and len(spec.factors) == 2 and spec.n == 4
    spec = parse_model_spec("fubini-study:2")
    assert spec.kind == "fubini_study" and spec.n == 4
    with pytest.raises(ValueError):
        parse_model_spec("torus:3")
    with pytest.raises(ValueError):
        parse_model_spec("product:sphere:2:1.0")


def test_factor_validation():
    with pytest.raises(ValueError):
        Factor("sphere", 1, 1.0)
    with pytest.raises(ValueError):
        Factor("sphere", 2, -1.0)
    with pytest.raises(ValueError):
        Factor("plane", 2, 1.0)


def test_sphere_package_values():
    pkg = model_curvature(parse_model_spec("sphere:4:1.0"))
    assert pkg.S == pytest.approx(12.0)
    dec = decompose(pkg.R)
    assert np.abs(dec.E).max() < 1e-13
    assert np.abs(dec.weyl.mat).max() < 1e-13


def test_hyperbolic_package_values():
    pkg = model_curvature(parse_model_spec("hyperbolic:5:1.0"))
    assert pkg.S == pytest.approx(-20.0)
    assert np.abs(decompose(pkg.R).weyl.mat).max() < 1e-13


def test_product_package_operator():
    pkg = model_curvature(parse_model_spec("product:sphere:2:1.0,sphere:2:1.0"))
    assert pkg.S == pytest.approx(4.0)
    assert np.allclose(pkg.R.mat, np.diag([1.0, 0, 0, 0, 0, 1.0]), atol=1e-14)
    assert np.abs(decompose(pkg.R).E).max() < 1e-13


def test_sphere_radius_scaling():
    pkg = model_curvature(parse_model_spec("sphere:5:2.0"))
    assert pkg.S == pytest.approx(5 * 4 / 4.0)


def test_fubini_study_einstein():
    pkg = model_curvature(parse_model_spec("fubini_study:2"))
    assert pkg.S == pytest.approx(24.0)
    assert np.allclose(pkg.Rc, 6.0 * np.eye(4), atol=1e-13)


@pytest.mark.parametrize("spec", CATALOG)
def test_catalog_consistency(spec):
    pkg = model_curvature(parse_model_spec(spec))
    res = package_consistency(pkg)
    for name, value in res.items():
        assert value <= 1e-10 * max(1.0, abs(pkg.S)), (spec, name, value)


@pytest.mark.parametrize("spec", CATALOG)
def test_catalog_identity_residuals(spec):
    pkg = model_curvature(parse_model_spec(spec))
    if pkg.R.n < 4:
        return
    rep = symmetric_space_identity_report(pkg)
    scale = max(1.0, abs(pkg.S)) ** 3
    assert abs(rep["r1"]) <= 1e-10 * scale, spec
    assert abs(rep["r2"]) <= 1e-10 * scale, spec


def test_identity_report_refuses_non_symmetric():
    pkg = model_curvature(parse_model_spec("sphere:4:1.0"))
    broken = CurvaturePackage(spec=pkg.spec, R=pkg.R, Rc=pkg.Rc, S=pkg.S,
                              is_locally_symmetric=False)
    with pytest.raises(ValueError):
        symmetric_space_identity_report(broken)


def test_s3_x_s2_values():
    # non-Einstein parallel-Ricci product: frozen traceless Ricci spectrum
    pkg = model_curvature(parse_model_spec("product:sphere:3:1.0,sphere:2:1.0"))
    assert pkg.S == pytest.approx(8.0)
    dec = decompose(pkg.R)
    eigs = np.sort(np.linalg.eigvalsh(dec.E))
    assert np.allclose(eigs, [-0.6, -0.6, 0.4, 0.4, 0.4], atol=1e-13)
    rep = symmetric_space_identity_report(pkg)
    # W(E, E) computed independently from the pure-curvature matrix
    pm = pure_matrix_from_weyl(dec.weyl)
    e = np.diag(dec.E)
    w_ee = float(np.einsum('ij,i,j->', pm.w, e, e))
    assert w_ee == pytest.approx(2.0, rel=1e-12)
    assert abs(rep["r2"]) < 1e-12


def test_product_pure_matrix_invariants():
    for spec in ("product:sphere:2:1.0,sphere:2:1.0",
                 "product:sphere:3:1.0,sphere:3:1.0",
                 "product:sphere:2:1.0,sphere:2:1.0,sphere:2:1.0"):
        pkg = model_curvature(parse_model_spec(spec))
        pure_matrix_from_weyl(decompose(pkg.R).weyl)  # raises on violation


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        model_curvature(ModelSpec(kind="sphere", dim=2))
    with pytest.raises(ValueError):
        model_curvature(ModelSpec(kind="fubini_study", complex_dim=1))
