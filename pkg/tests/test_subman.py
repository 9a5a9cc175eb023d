"""Submanifold machinery against closed forms and finite-difference oracles."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gssf_verify.catalog import get_example, get_model
from gssf_verify.errors import (
    ClassificationMismatchError,
    DimensionError,
    ImmersionDegenerateError,
    InsufficientSamplesError,
    ShapeError,
    UnsupportedOrderError,
)
from gssf_verify.subman import (
    DefectKind,
    Immersion,
    SamplingPlan,
    SubmanifoldKind,
    classify,
    defect,
    frames,
    induced_curvature,
    invariant_identity_suite,
    nabla_h,
    normal_curvature,
    second_fundamental_form,
)
from gssf_verify.tensorjet import SmoothMap

from .oracles import (
    fd_nabla_h,
    fd_normal_curvature_operator,
    fd_second_form,
)

TOTALLY_GEODESIC = ("example_2_1", "sasakian_r5_slice", "sasakian_r7_slice")

INVARIANT_LABELS = (
    "shape-pairing",
    "gauss-tangential",
    "h-with-reeb",
    "induced-reeb-derivative",
    "induced-curvature-reeb",
    "induced-ricci-reeb",
    "induced-phi-derivative",
    "h-phi-commutation",
)

WIDE_PLAN = SamplingPlan(points=20, combos=9, seed=7)


def sample_domain(imm, count=3, seed=5):
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(count, imm.map.domain_dim))


def bowl_immersion():
    """Graph surface with commuting-free shape operators.

    Small non-catalog immersion whose normal connection actually curves,
    used to exercise the curvature routes against each other.
    """

    def psi(u):
        a, b = u
        return [a, b, 0.5 * a * a, 0.5 * b * b, a * b]

    return Immersion(map=SmoothMap(2, 5, psi), ambient=get_model("flat_r5"))


# ---------------------------------------------------------------------------
# frames and induced metrics


def test_frames_of_plane_example():
    imm = get_example("example_2_1")
    pd = frames(imm, [0.4, -1.1, 0.7])
    assert np.allclose(pd.induced_metric.array, np.diag([2.0, 2.0, 1.0]))
    expected = np.array(
        [
            [1.0, 0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, -1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )
    assert np.allclose(pd.tangent_frame.array, expected, atol=1e-12)


def test_frames_of_anti_invariant_example_at_origin():
    imm = get_example("example_2_2")
    pd = frames(imm, [0.0, 0.0, 0.0])
    expected = np.array(
        [
            [0.0, 0.0, 1.0, 1.0, 1.0, -1.0, 0.0],
            [0.0, 0.0, 1.0, 1.0, -1.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ]
    )
    assert np.allclose(pd.tangent_frame.array, expected, atol=1e-12)
    gram = np.array([[4.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(pd.induced_metric.array, gram, atol=1e-12)


@pytest.mark.parametrize("name", ("example_2_3", "example_2_4"))
def test_induced_metric_of_slant_examples(name):
    imm = get_example(name)
    for u in sample_domain(imm):
        pd = frames(imm, u)
        assert np.allclose(
            pd.induced_metric.array, np.diag([3.0, 3.0, 1.0]), atol=1e-12
        )


@pytest.mark.parametrize("name", ("example_2_2", "sasakian_r7_slice"))
def test_frames_are_jointly_orthonormal(name):
    imm = get_example(name)
    for u in sample_domain(imm, count=2, seed=13):
        pd = frames(imm, u)
        full = np.vstack([pd.tangent_onb.array, pd.normal_onb.array])
        g0 = imm.ambient.metric.matrix(imm.map.evaluator(list(u)))
        assert np.allclose(full @ g0 @ full.T, np.eye(imm.ambient.dim),
                           atol=1e-10)


def test_immersion_must_land_in_the_ambient_dimension():
    with pytest.raises(ShapeError):
        Immersion(
            map=SmoothMap(2, 4, lambda u: [u[0], u[1], 0.0, 0.0]),
            ambient=get_model("flat_r5"),
        )


def test_rank_deficient_immersion_is_rejected():
    imm = Immersion(
        map=SmoothMap(3, 5, lambda u: [u[0] + u[1], u[0] + u[1], 0.0, 0.0, u[2]]),
        ambient=get_model("flat_r5"),
    )
    with pytest.raises(ImmersionDegenerateError):
        frames(imm, [0.1, 0.2, 0.3])


# ---------------------------------------------------------------------------
# second fundamental form


def test_h_closed_form_on_curled_slant_example():
    imm = get_example("example_2_3")
    for u, v, t in [(0.3, -0.2, 0.4), (-0.7, 0.5, -0.1), (0.0, 0.0, 0.0)]:
        pd = frames(imm, [u, v, t])
        forms = second_fundamental_form(imm, [u, v, t])
        amb = np.einsum(
            "ijm,ma->ija", forms.h.array, pd.normal_onb.array
        )
        expected = np.zeros((3, 3, 7))
        expected[0, 0] = [-np.sin(u), 0.0, 0.0, -np.cos(u), 0.0, 0.0, 0.0]
        expected[1, 1] = [0.0, -np.sin(v), 0.0, 0.0, -np.cos(v), 0.0, 0.0]
        assert np.allclose(amb, expected, atol=1e-12)


def test_mean_curvature_norm_of_curled_slant_example():
    imm = get_example("example_2_3")
    for u in sample_domain(imm, count=4, seed=19):
        forms = second_fundamental_form(imm, u)
        norm = float(np.linalg.norm(forms.H.array))
        assert abs(norm - np.sqrt(2.0) / 9.0) < 1e-9
        assert forms.umbilic_residual > 0.05


@pytest.mark.parametrize("name", TOTALLY_GEODESIC)
def test_totally_geodesic_entries_have_vanishing_h(name):
    imm = get_example(name)
    for u in sample_domain(imm, count=4, seed=23):
        forms = second_fundamental_form(imm, u)
        assert forms.tg_residual < 1e-9
        assert forms.umbilic_residual < 1e-9
        assert float(np.linalg.norm(forms.H.array)) < 1e-9


def test_shape_operators_realize_the_metric_pairing():
    for name in ("example_2_2", "example_2_3", "sasakian_r7_slice"):
        imm = get_example(name)
        u = sample_domain(imm, count=1, seed=29)[0]
        pd = frames(imm, u)
        forms = second_fundamental_form(imm, u)
        paired = np.einsum(
            "mli,lj->ijm", forms.shape_ops.array, pd.induced_metric.array
        )
        assert np.allclose(paired, forms.h.array, atol=1e-10)


@pytest.mark.parametrize("name", ("example_2_2", "example_2_3"))
def test_h_matches_finite_differences(name):
    imm = get_example(name)
    psi = imm.map.evaluator
    metric_fn = imm.ambient.metric.matrix
    for u in sample_domain(imm, count=2, seed=31):
        pd = frames(imm, u)
        forms = second_fundamental_form(imm, u)
        amb = np.einsum("ijm,ma->ija", forms.h.array, pd.normal_onb.array)
        _, _, hvec = fd_second_form(psi, metric_fn, u)
        assert np.max(np.abs(amb - hvec)) < 1e-5


def test_h_matches_finite_differences_in_curved_ambient():
    imm = get_example("sasakian_r7_slice")
    psi = imm.map.evaluator
    metric_fn = imm.ambient.metric.matrix
    u = np.array([0.2, -0.4, 0.1, 0.3, -0.2])
    pd = frames(imm, u)
    forms = second_fundamental_form(imm, u)
    amb = np.einsum("ijm,ma->ija", forms.h.array, pd.normal_onb.array)
    _, _, hvec = fd_second_form(psi, metric_fn, u)
    assert np.max(np.abs(amb - hvec)) < 1e-5


# ---------------------------------------------------------------------------
# covariant derivatives of h


def test_nabla_h_closed_form_on_curled_slant_example():
    imm = get_example("example_2_3")
    for u, v, t in [(0.3, -0.2, 0.4), (-0.5, 0.8, 0.2)]:
        pd = frames(imm, [u, v, t])
        nh = nabla_h(imm, [u, v, t], order=1).array
        amb = np.einsum("xijm,ma->xija", nh, pd.normal_onb.array)
        expected = np.zeros((3, 3, 3, 7))
        expected[0, 0, 0] = [
            -2.0 * np.cos(u) / 3.0, 0.0, 1.0 / 3.0,
            2.0 * np.sin(u) / 3.0, 0.0, 1.0 / 3.0, 0.0,
        ]
        expected[1, 1, 1] = [
            0.0, -2.0 * np.cos(v) / 3.0, 1.0 / 3.0,
            0.0, 2.0 * np.sin(v) / 3.0, -1.0 / 3.0, 0.0,
        ]
        assert np.allclose(amb, expected, atol=1e-10)


@pytest.mark.parametrize("name", ("example_2_2", "example_2_3"))
def test_nabla_h_matches_finite_differences(name):
    imm = get_example(name)
    psi = imm.map.evaluator
    metric_fn = imm.ambient.metric.matrix
    u = sample_domain(imm, count=1, seed=37)[0]
    pd = frames(imm, u)
    nh = nabla_h(imm, u, order=1).array
    amb = np.einsum("xijm,ma->xija", nh, pd.normal_onb.array)
    assert np.max(np.abs(amb - fd_nabla_h(psi, metric_fn, u))) < 1e-5


@pytest.mark.parametrize("name", TOTALLY_GEODESIC)
def test_nabla_h_vanishes_on_totally_geodesic_entries(name):
    imm = get_example(name)
    u = sample_domain(imm, count=1, seed=41)[0]
    assert np.max(np.abs(nabla_h(imm, u, order=1).array)) < 1e-12
    assert np.max(np.abs(nabla_h(imm, u, order=2).array)) < 1e-12


def test_nabla_h_rejects_unsupported_order():
    imm = get_example("example_2_3")
    with pytest.raises(UnsupportedOrderError):
        nabla_h(imm, [0.1, 0.2, 0.3], order=3)


# ---------------------------------------------------------------------------
# normal curvature


def test_normal_curvature_vanishes_on_anti_invariant_example():
    imm = get_example("example_2_2")
    for u in sample_domain(imm, count=3, seed=43):
        assert np.max(np.abs(normal_curvature(imm, u).array)) < 1e-12


def test_normal_curvature_agrees_with_direct_commutator():
    imm = bowl_immersion()
    psi = imm.map.evaluator
    metric_fn = imm.ambient.metric.matrix
    for u in ([0.3, -0.2], [-0.5, 0.7]):
        rp = normal_curvature(imm, u).array
        pd = frames(imm, u)
        nmat = pd.normal_onb.array
        g0 = metric_fn(psi(list(u)))
        op = np.einsum("ma,mn,nb->ab", nmat, rp[0, 1], nmat @ g0)
        oracle = fd_normal_curvature_operator(
            psi, metric_fn, np.asarray(u, dtype=float), 0, 1
        )
        assert np.max(np.abs(op - oracle)) < 1e-5


def test_normal_curvature_frozen_value_on_bowl():
    imm = bowl_immersion()
    pd = frames(imm, [0.3, -0.2])
    rp = normal_curvature(imm, [0.3, -0.2]).array
    nmat = pd.normal_onb.array
    g0 = imm.ambient.metric.matrix(imm.map.evaluator([0.3, -0.2]))
    op = np.einsum("ma,mn,nb->ab", nmat, rp[0, 1], nmat @ g0)
    assert abs(op[3, 4] - (-0.7619227886702193)) < 1e-9
    assert np.max(np.abs(rp)) > 0.5


# ---------------------------------------------------------------------------
# classification


@pytest.mark.parametrize(
    "name,kind",
    [
        ("example_2_1", SubmanifoldKind.INVARIANT),
        ("example_2_2", SubmanifoldKind.ANTI_INVARIANT),
        ("example_2_3", SubmanifoldKind.SLANT),
        ("example_2_4", SubmanifoldKind.SLANT),
        ("sasakian_r5_slice", SubmanifoldKind.INVARIANT),
        ("sasakian_r7_slice", SubmanifoldKind.INVARIANT),
    ],
)
def test_catalog_classifications(name, kind):
    c = classify(get_example(name), WIDE_PLAN)
    assert c.kind is kind
    assert c.xi_tangency_residual < 1e-12


@pytest.mark.parametrize(
    "name,cos_theta", [("example_2_3", 2.0 / 3.0), ("example_2_4", 1.0 / 3.0)]
)
def test_slant_angles_are_constant(name, cos_theta):
    c = classify(get_example(name), WIDE_PLAN)
    assert abs(c.cos_theta - cos_theta) < 1e-9
    assert c.cos_theta_stddev < 1e-9


def test_classifier_needs_samples_off_the_reeb_direction():
    imm = Immersion(
        map=SmoothMap(1, 5, lambda u: [0.0, 0.0, 0.0, 0.0, u[0]]),
        ambient=get_model("flat_r5"),
    )
    with pytest.raises(InsufficientSamplesError):
        classify(imm)


# ---------------------------------------------------------------------------
# defects


@pytest.mark.parametrize("name", TOTALLY_GEODESIC)
@pytest.mark.parametrize("kind", list(DefectKind))
def test_defects_vanish_on_totally_geodesic_entries(name, kind):
    imm = get_example(name)
    u = sample_domain(imm, count=1, seed=47)[0]
    report = defect(imm, u, kind)
    assert report.name == "submanifold-defect"
    assert report.sup_residual < 1e-7


def test_defect_values_on_curled_slant_example():
    imm = get_example("example_2_3")
    u = [0.3, -0.2, 0.4]
    parallel = defect(imm, u, DefectKind.PARALLEL)
    assert parallel.entries[0].label == "parallel"
    assert abs(parallel.entries[0].residual - 0.7924399095076425) < 1e-9
    for kind in (
        DefectKind.SEMIPARALLEL,
        DefectKind.TWO_SEMIPARALLEL,
        DefectKind.CONCIRCULAR_SEMIPARALLEL,
        DefectKind.CONCIRCULAR_TWO_SEMIPARALLEL,
    ):
        assert defect(imm, u, kind).sup_residual < 1e-12


def test_defect_values_on_anti_invariant_example():
    imm = get_example("example_2_2")
    u = [0.3, -0.2, 0.4]
    assert abs(
        defect(imm, u, DefectKind.PARALLEL).entries[0].residual
        - 0.7053338522473775
    ) < 1e-9
    assert defect(imm, u, DefectKind.SEMIPARALLEL).sup_residual < 1e-12
    assert (
        defect(imm, u, DefectKind.TWO_SEMIPARALLEL).sup_residual < 1e-12
    )


def test_defect_entry_labels_follow_the_kind():
    imm = get_example("example_2_1")
    u = [0.1, 0.2, 0.3]
    labels = [defect(imm, u, kind).entries[0].label for kind in DefectKind]
    assert labels == [
        "parallel",
        "semiparallel",
        "two-semiparallel",
        "concircular-semiparallel",
        "concircular-two-semiparallel",
    ]


def test_concircular_defects_need_odd_dimension():
    imm = bowl_immersion()
    with pytest.raises(DimensionError):
        defect(imm, [0.3, -0.2], DefectKind.CONCIRCULAR_SEMIPARALLEL)


# ---------------------------------------------------------------------------
# invariant identity suite


@pytest.mark.parametrize(
    "name,f",
    [
        ("example_2_1", (0.0, 0.0, 0.0)),
        ("sasakian_r5_slice", (0.0, -1.0, -1.0)),
        ("sasakian_r7_slice", (0.0, -1.0, -1.0)),
    ],
)
def test_invariant_identities_hold_on_invariant_entries(name, f):
    imm = get_example(name)
    for u in sample_domain(imm, count=2, seed=53):
        report = invariant_identity_suite(imm, u, f)
        assert report.name == "invariant-submanifold-identities"
        assert report.labels == INVARIANT_LABELS
        assert report.sup_residual < 1e-7


def test_invariant_identities_reject_slant_input():
    imm = get_example("example_2_3")
    with pytest.raises(ClassificationMismatchError):
        invariant_identity_suite(imm, [0.1, 0.2, 0.3], (0.0, -1.0, -1.0))


def test_induced_ricci_pairs_with_reeb_on_invariant_slice():
    imm = get_example("sasakian_r7_slice")
    xi_dom = np.array([0.0, 0.0, 0.0, 0.0, 2.0])
    for u in sample_domain(imm, count=2, seed=59):
        data = induced_curvature(imm, u)
        value = xi_dom @ data["ricci"] @ xi_dom
        assert abs(value - 4.0) < 1e-6


# ---------------------------------------------------------------------------
# sampled properties

coords3 = st.lists(
    st.floats(min_value=-1.5, max_value=1.5, allow_nan=False),
    min_size=3,
    max_size=3,
)


@given(coords3)
def test_h_is_symmetric_and_normal(u):
    imm = get_example("example_2_3")
    pd = frames(imm, u)
    forms = second_fundamental_form(imm, u)
    h = forms.h.array
    assert np.allclose(h, h.transpose(1, 0, 2), atol=1e-10)
    amb = np.einsum("ijm,ma->ija", h, pd.normal_onb.array)
    g0 = imm.ambient.metric.matrix(imm.map.evaluator(list(u)))
    tangential = np.einsum("ia,ab,ijb->ij", pd.tangent_frame.array, g0, amb)
    assert np.max(np.abs(tangential)) < 1e-10


@given(coords3)
def test_mean_curvature_norm_is_constant_on_curled_example(u):
    forms = second_fundamental_form(get_example("example_2_3"), u)
    norm = float(np.linalg.norm(forms.H.array))
    assert abs(norm - np.sqrt(2.0) / 9.0) < 1e-9
