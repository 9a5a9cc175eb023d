"""Tests for the Ricci soliton fits and Einstein-type residuals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gssf_verify as gv
from gssf_verify.contact import structure_arrays
from gssf_verify.soliton import (
    _domain_eta_jets,
    _domain_reeb_jets,
    _reeb_annihilating_split,
)
from gssf_verify.nilpotent import GenPool
from gssf_verify.subman import Immersion
from gssf_verify.tensorjet import SmoothMap

from .oracles import central_difference

CK = gv.ConnectionKind

U3 = [0.3, -0.2, 0.4]
U5 = [0.3, -0.2, 0.4, 0.1, -0.35]

INVARIANT_CASES = [
    ("example_2_1", U3),
    ("sasakian_r5_slice", U3),
    ("sasakian_r7_slice", U5),
]


def flat_r7_slice():
    ev = lambda c: [
        c[0],
        0.0 * c[0],
        c[1],
        0.0 * c[0],
        0.0 * c[0],
        0.0 * c[0],
        c[2],
    ]
    return Immersion(
        map=SmoothMap(3, 7, ev, name="flat_r7_slice"),
        ambient=gv.get_model("flat_r7"),
    )


def fd_lie_derivative(imm, u, h=1e-4):
    """Coordinate-route Lie derivative of the induced metric along xi.

    Independent of the covariant pairing the package uses: central
    differences of the metric field and of the domain Reeb components,
    assembled as xi^s d_s G_ij + G_sj d_i xi^s + G_is d_j xi^s.
    """
    k = imm.map.domain_dim

    def gfield(v):
        pd = gv.frames(imm, [float(x) for x in v])
        return pd.induced_metric.array.reshape(-1)

    def xfield(v):
        pt = [float(x) for x in v]
        pd = gv.frames(imm, pt)
        arrs = structure_arrays(imm.ambient, list(pd.p))
        jac = pd.tangent_frame.array
        gin = np.linalg.inv(pd.induced_metric.array)
        return gin @ (jac @ arrs["g"] @ arrs["xi"])

    u = np.asarray(u, dtype=float)
    G = gfield(u).reshape(k, k)
    xi_d = xfield(u)
    dG = np.stack(
        [central_difference(gfield, u, i, h).reshape(k, k) for i in range(k)]
    )
    dxi = np.stack([central_difference(xfield, u, i, h) for i in range(k)])
    return (
        np.einsum("s,sij->ij", xi_d, dG)
        + np.einsum("is,sj->ij", dxi, G)
        + np.einsum("js,si->ij", dxi, G)
    )


class TestLeviCivitaFit:
    def test_flat_example_is_trivial_soliton(self):
        fit = gv.soliton_fit(gv.get_example("example_2_1"), U3)
        assert fit.connection_kind is CK.LEVI_CIVITA
        assert fit.lam == 0.0
        assert fit.residual == 0.0
        assert np.max(np.abs(fit.lie_derivative.array)) == 0.0
        assert np.max(np.abs(fit.ricci.array)) == 0.0
        assert gv.einstein_residual(fit) == 0.0

    def test_flat_slice_of_seven_space(self):
        fit = gv.soliton_fit(flat_r7_slice(), U3)
        assert abs(fit.lam) < 1e-12
        assert gv.einstein_residual(fit) < 1e-12

    @pytest.mark.parametrize("name,u", INVARIANT_CASES)
    def test_reeb_field_is_killing(self, name, u):
        fit = gv.soliton_fit(gv.get_example(name), u)
        assert np.max(np.abs(fit.lie_derivative.array)) < 1e-8

    @pytest.mark.parametrize("name,u", INVARIANT_CASES[1:])
    def test_lie_derivative_matches_coordinate_oracle(self, name, u):
        imm = gv.get_example(name)
        fit = gv.soliton_fit(imm, u)
        oracle = fd_lie_derivative(imm, u)
        assert np.max(np.abs(fit.lie_derivative.array - oracle)) < 1e-6

    def test_sasakian_slice_ricci_shape(self):
        imm = gv.get_example("sasakian_r7_slice")
        fit = gv.soliton_fit(imm, U5)
        eta_d, _ = _domain_eta_jets(imm, U5, GenPool())
        expected = -2.0 * fit.metric.array + 6.0 * np.outer(eta_d, eta_d)
        assert np.max(np.abs(fit.ricci.array - expected)) < 1e-12
        xi_d, _ = _domain_reeb_jets(imm, U5, GenPool())
        assert abs(float(xi_d @ fit.ricci.array @ xi_d) - 4.0) < 1e-6

    def test_sasakian_slice_goldens(self):
        fit = gv.soliton_fit(gv.get_example("sasakian_r7_slice"), U5)
        assert abs(fit.lam - 0.38263062936817915) < 1e-9
        assert abs(fit.residual - 2.930297836961635) < 1e-9
        assert abs(gv.einstein_residual(fit) - 0.5478288286710224) < 1e-9
        fit5 = gv.soliton_fit(gv.get_example("sasakian_r5_slice"), U3)
        assert abs(fit5.lam - 0.5809716599190283) < 1e-9
        assert abs(fit5.residual - 1.6537284582921048) < 1e-9
        assert abs(gv.einstein_residual(fit5) - 0.43016194331983804) < 1e-9

    @pytest.mark.parametrize("name,u", INVARIANT_CASES)
    def test_lambda_is_exact_minimizer(self, name, u):
        fit = gv.soliton_fit(gv.get_example(name), u)
        G = fit.metric.array
        base = fit.lie_derivative.array + 2 * fit.ricci.array
        derivative = float(np.sum((base + 2 * fit.lam * G) * G))
        assert abs(derivative) < 1e-12

    def test_rejects_non_tangent_reeb(self):
        ev = lambda c: [c[0], 0.0 * c[0], c[1], 0.0 * c[0], 0.0 * c[0]]
        bad = Immersion(
            map=SmoothMap(2, 5, ev, name="xy_plane"),
            ambient=gv.get_model("flat_r5"),
        )
        with pytest.raises(gv.PreconditionError) as err:
            gv.soliton_fit(bad, [0.1, 0.2])
        assert "tangent" in str(err.value)


class TestShiftedConnectionFit:
    @pytest.mark.parametrize("name,u", INVARIANT_CASES)
    def test_shifted_lie_derivative_shape(self, name, u):
        imm = gv.get_example(name)
        fit = gv.soliton_fit(imm, u, CK.SEMI_SYMMETRIC_METRIC)
        eta_d, _ = _domain_eta_jets(imm, u, GenPool())
        expected = 2.0 * (fit.metric.array - np.outer(eta_d, eta_d))
        assert np.max(np.abs(fit.lie_derivative.array - expected)) < 1e-8

    def test_flat_example_is_exact_shifted_soliton(self):
        fit = gv.soliton_fit(
            gv.get_example("example_2_1"), U3, CK.SEMI_SYMMETRIC_METRIC
        )
        assert abs(fit.lam - 4.0) < 1e-12
        assert fit.residual < 1e-12

    def test_slice_goldens(self):
        fit = gv.soliton_fit(
            gv.get_example("sasakian_r7_slice"),
            U5,
            CK.SEMI_SYMMETRIC_METRIC,
        )
        assert abs(fit.lam - 9.843507505824238) < 1e-9
        assert abs(fit.residual - 4.925966646398029) < 1e-9
        fit5 = gv.soliton_fit(
            gv.get_example("sasakian_r5_slice"),
            U3,
            CK.SEMI_SYMMETRIC_METRIC,
        )
        assert abs(fit5.lam - 4.580971659919029) < 1e-9
        assert abs(fit5.residual - 1.7985599277658728) < 1e-9


class TestConclusionResiduals:
    def test_einstein_requires_plain_connection(self):
        fit = gv.soliton_fit(
            gv.get_example("example_2_1"), U3, CK.SEMI_SYMMETRIC_METRIC
        )
        with pytest.raises(gv.PreconditionError):
            gv.einstein_residual(fit)

    def test_decomposition_requires_shifted_connection(self):
        imm = gv.get_example("sasakian_r7_slice")
        fit = gv.soliton_fit(imm, U5)
        with pytest.raises(gv.PreconditionError):
            gv.pseudo_eta_einstein_residual(imm, U5, fit)

    def test_flat_example_decomposes_exactly(self):
        imm = gv.get_example("example_2_1")
        fit = gv.soliton_fit(imm, U3, CK.SEMI_SYMMETRIC_METRIC)
        dec = gv.pseudo_eta_einstein_residual(imm, U3, fit)
        assert dec.explicit_residual < 1e-12
        assert dec.residual < 1e-12
        assert abs(dec.p_coef) < 1e-12
        assert abs(dec.q_coef) < 1e-12
        assert abs(dec.s_coef) < 1e-12

    def test_sasakian_slice_decomposition(self):
        imm = gv.get_example("sasakian_r7_slice")
        fit = gv.soliton_fit(imm, U5, CK.SEMI_SYMMETRIC_METRIC)
        dec = gv.pseudo_eta_einstein_residual(imm, U5, fit)
        assert abs(dec.p_coef + 2.0) < 1e-9
        assert abs(dec.q_coef - 6.0) < 1e-9
        assert dec.s_coef < 1e-12
        assert dec.residual < 1e-12
        assert abs(dec.explicit_residual - 1.4608768764560596) < 1e-9

    def test_five_dim_slice_decomposition(self):
        imm = gv.get_example("sasakian_r5_slice")
        fit = gv.soliton_fit(imm, U3, CK.SEMI_SYMMETRIC_METRIC)
        dec = gv.pseudo_eta_einstein_residual(imm, U3, fit)
        assert abs(dec.p_coef + 2.0) < 1e-9
        assert abs(dec.q_coef - 4.0) < 1e-9
        assert dec.residual < 1e-12
        assert abs(dec.explicit_residual - 0.6452429149797572) < 1e-9


class TestReebAnnihilatingSplit:
    def test_split_is_exact_on_random_input(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            k = int(rng.integers(2, 6))
            raw = rng.normal(size=(k, k))
            rest = raw + raw.T
            xi = rng.normal(size=k)
            eta = rng.normal(size=k)
            eta += (1.0 - eta @ xi) * xi / (xi @ xi)
            assert abs(eta @ xi - 1.0) < 1e-12
            drest, removed = _reeb_annihilating_split(rest, eta, xi)
            assert np.max(np.abs(drest @ xi)) < 1e-12
            assert np.max(np.abs(drest + removed - rest)) < 1e-12


@settings(max_examples=15, deadline=None)
@given(
    st.lists(
        st.floats(-1.2, 1.2, allow_nan=False), min_size=3, max_size=3
    )
)
def test_killing_and_minimizer_everywhere(coords):
    imm = gv.get_example("sasakian_r5_slice")
    fit = gv.soliton_fit(imm, coords)
    assert np.max(np.abs(fit.lie_derivative.array)) < 1e-8
    G = fit.metric.array
    base = fit.lie_derivative.array + 2 * fit.ricci.array
    assert abs(float(np.sum((base + 2 * fit.lam * G) * G))) < 1e-10


@settings(max_examples=15, deadline=None)
@given(
    st.lists(
        st.floats(-1.2, 1.2, allow_nan=False), min_size=3, max_size=3
    )
)
def test_shifted_lie_shape_everywhere(coords):
    imm = gv.get_example("sasakian_r5_slice")
    fit = gv.soliton_fit(imm, coords, CK.SEMI_SYMMETRIC_METRIC)
    eta_d, _ = _domain_eta_jets(imm, coords, GenPool())
    expected = 2.0 * (fit.metric.array - np.outer(eta_d, eta_d))
    assert np.max(np.abs(fit.lie_derivative.array - expected)) < 1e-8
