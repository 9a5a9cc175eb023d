"""Structure axioms, curvature-model fitting, and the ambient identity suite."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gssf_verify.catalog import get_model, model_names
from gssf_verify.contact import (
    AmbientModel,
    check_acs_axioms,
    curvature_model_basis,
    fit_gssf,
    gssf_identity_suite,
    structure_arrays,
)
from gssf_verify.errors import FitDegenerateError, NotAGssfError
from gssf_verify.nilpotent import nil_stack
from gssf_verify.riemann import MetricField, ricci_scalar
from gssf_verify.tensorjet import SmoothMap

SASAKIAN = ("sasakian_r5", "sasakian_r7")
FLAT = ("flat_r5", "flat_r7")

ACS_LABELS = (
    "phi-square",
    "reeb-pairing",
    "phi-compatibility",
    "phi-antisymmetry",
    "eta-xi-duality",
)

IDENTITY_LABELS = (
    "nabla-phi",
    "nabla-xi",
    "ricci-operator",
    "ricci-form",
    "scalar-value",
    "curvature-reeb-argument",
    "curvature-reeb-first",
    "eta-of-curvature",
    "ricci-reeb",
    "ricci-reeb-reeb",
    "concircular-reeb-argument",
    "concircular-reeb-first",
)


def sample_points(dim, count=20, seed=42):
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(count, dim))


def test_model_names_are_the_four_charts():
    assert tuple(model_names()) == (
        "flat_r5",
        "flat_r7",
        "sasakian_r5",
        "sasakian_r7",
    )


@pytest.mark.parametrize("name", FLAT + SASAKIAN)
def test_structure_axioms_hold_on_every_model(name):
    model = get_model(name)
    worst = 0.0
    for p in sample_points(model.dim):
        report = check_acs_axioms(model, p)
        assert report.name == "acs-axioms"
        assert report.labels == ACS_LABELS
        assert report.passed
        worst = max(worst, report.sup_residual)
    assert worst < 1e-10


@pytest.mark.parametrize("name", FLAT)
def test_fit_recovers_zero_coefficients_on_flat_models(name):
    model = get_model(name)
    for p in sample_points(model.dim, count=6, seed=3):
        fit = fit_gssf(model, p)
        assert fit.residual < 1e-9
        assert max(abs(c) for c in fit.coefficients) < 1e-9


@pytest.mark.parametrize("name", SASAKIAN)
def test_fit_recovers_sasakian_coefficients(name):
    model = get_model(name)
    for p in sample_points(model.dim, count=6, seed=4):
        fit = fit_gssf(model, p)
        assert fit.residual < 1e-7
        assert abs(fit.f1 - 0.0) < 1e-7
        assert abs(fit.f2 - (-1.0)) < 1e-7
        assert abs(fit.f3 - (-1.0)) < 1e-7


def test_fit_matches_catalog_known_coefficients():
    for name in FLAT + SASAKIAN:
        model = get_model(name)
        p = sample_points(model.dim, count=1, seed=9)[0]
        fit = fit_gssf(model, p)
        assert model.known_f is not None
        assert np.allclose(fit.coefficients, model.known_f, atol=1e-7)


@pytest.mark.parametrize(
    "name,scalar,reeb", [("sasakian_r5", -4.0, 4.0), ("sasakian_r7", -6.0, 6.0)]
)
def test_scalar_curvature_and_ricci_reeb_values(name, scalar, reeb):
    model = get_model(name)
    for p in sample_points(model.dim, count=4, seed=11):
        ricci, value = ricci_scalar(model.metric, p)
        assert abs(value - scalar) < 1e-6
        xi = structure_arrays(model, p)["xi"]
        paired = xi @ ricci.array @ xi
        assert abs(paired - reeb) < 1e-6


@pytest.mark.parametrize("name", SASAKIAN)
def test_identity_suite_on_sasakian_models(name):
    model = get_model(name)
    for p in sample_points(model.dim, count=3, seed=17):
        report = gssf_identity_suite(model, (0.0, -1.0, -1.0), p)
        assert report.name == "curvature-model-identities"
        assert report.labels == IDENTITY_LABELS
        assert report.sup_residual < 1e-7


def test_identity_suite_on_flat_models():
    for name in FLAT:
        model = get_model(name)
        p = sample_points(model.dim, count=1, seed=21)[0]
        report = gssf_identity_suite(model, (0.0, 0.0, 0.0), p)
        assert report.sup_residual < 1e-9


def test_concircular_reeb_coefficient_is_six_fifths():
    model = get_model("sasakian_r5")
    n = 2
    for p in sample_points(model.dim, count=3, seed=23):
        fit = fit_gssf(model, p)
        _, scalar = ricci_scalar(model.metric, p)
        coefficient = (fit.f1 - fit.f3) - scalar / (2 * n * (2 * n + 1))
        assert abs(coefficient - 6.0 / 5.0) < 1e-7


def test_identity_suite_flags_mismatched_coefficients():
    model = get_model("sasakian_r5")
    p = sample_points(model.dim, count=1, seed=29)[0]
    report = gssf_identity_suite(model, (0.5, -1.0, -1.0), p)
    assert not report.passed
    assert report.sup_residual > 0.1


def _bumped_flat_model():
    base = get_model("flat_r5")

    def g(xs):
        rows = []
        for i in range(5):
            row = [1.0 if i == j else 0.0 for j in range(5)]
            rows.append(nil_stack(row))
        rows[0] = nil_stack([1.0 + 0.3 * xs[1] * xs[1], 0.0, 0.0, 0.0, 0.0])
        return nil_stack(rows)

    metric = MetricField(dim=5, g=SmoothMap(5, 25, g, codomain_shape=(5, 5)))
    return AmbientModel(dim=5, metric=metric, structure=base.structure)


def test_identity_suite_refuses_curvature_outside_the_model():
    model = _bumped_flat_model()
    p = [0.3, 0.7, -0.2, 0.4, 0.1]
    fit = fit_gssf(model, p)
    assert fit.residual > 1e-3
    with pytest.raises(NotAGssfError):
        gssf_identity_suite(model, fit.coefficients, p)


def _phi_free_model():
    base = get_model("flat_r5")
    zero = np.zeros((5, 5))
    phi = SmoothMap(5, 25, lambda xs: zero, codomain_shape=(5, 5))
    structure = type(base.structure)(
        phi=phi, xi=base.structure.xi, eta=base.structure.eta
    )
    return AmbientModel(dim=5, metric=base.metric, structure=structure)


def test_fit_requires_an_independent_basis():
    model = _phi_free_model()
    with pytest.raises(FitDegenerateError):
        fit_gssf(model, [0.1, 0.2, 0.3, 0.4, 0.5])


coords5 = st.lists(
    st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    min_size=5,
    max_size=5,
)


@given(coords5)
def test_basis_gram_matrix_is_positive_semidefinite(p):
    model = get_model("sasakian_r5")
    arrays = structure_arrays(model, p)
    basis = curvature_model_basis(
        arrays["g"], arrays["phi"], arrays["eta"], arrays["xi"]
    )
    flat = [t.reshape(-1) for t in basis]
    gram = np.array([[u @ v for v in flat] for u in flat])
    assert np.min(np.linalg.eigvalsh(gram)) > -1e-9


@given(coords5)
def test_fit_is_stable_across_the_chart(p):
    model = get_model("sasakian_r5")
    fit = fit_gssf(model, p)
    assert np.allclose(fit.coefficients, (0.0, -1.0, -1.0), atol=1e-7)
    assert fit.residual < 1e-7
