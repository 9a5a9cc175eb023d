"""Submanifold geometry of explicit immersions into ambient models.

Everything here is computed from an immersion's derivative jets and the
ambient model's chart fields: induced metric and frames, the second
fundamental form and shape operators, first and second covariant
derivatives of h under the connection pair (tangential, normal), the
normal-bundle curvature, the invariant/anti-invariant/slant classifier,
and the curvature-acting defect functionals whose vanishing characterizes
parallel, semiparallel, and 2-semiparallel immersions together with their
concircular variants.

Derivative bookkeeping: evaluators defined here may be differentiated
again (the second fundamental form is itself a field over the domain), so
every internal jet call draws from one shared generator pool.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from .contact import AmbientModel, structure_arrays, structure_jets
from .errors import (
    ClassificationMismatchError,
    DegenerateFrameError,
    DegenerateMetricError,
    DimensionError,
    ImmersionDegenerateError,
    InsufficientSamplesError,
    ShapeError,
    UnsupportedOrderError,
)
from .nilpotent import (
    GenPool,
    NilArray,
    dense,
    field_jets,
    ncontract,
    nil_matinv,
    nunary,
)
from .report import DefectEntry, DefectReport
from .riemann import christoffel_in_chart, curvature_arrays
from .tensorjet import MultiArray, SmoothMap, orthonormal_frames

__all__ = [
    "Classification",
    "DefectKind",
    "FundamentalForms",
    "Immersion",
    "SamplingPlan",
    "SubmanifoldKind",
    "SubmanifoldPointData",
    "classify",
    "defect",
    "frames",
    "induced_curvature",
    "invariant_identity_suite",
    "nabla_h",
    "normal_curvature",
    "second_fundamental_form",
]


@dataclass(frozen=True)
class Immersion:
    """A parametrized submanifold of an ambient model."""

    map: SmoothMap
    ambient: AmbientModel

    def __post_init__(self):
        if self.map.codomain_dim != self.ambient.dim:
            raise ShapeError(
                f"immersion lands in dimension {self.map.codomain_dim}, "
                f"ambient model has dimension {self.ambient.dim}"
            )

    @property
    def domain_dim(self) -> int:
        return self.map.domain_dim


@dataclass(frozen=True)
class SubmanifoldPointData:
    """Frames and induced metric of an immersion at one domain point.

    ``tangent_frame`` holds the coordinate tangents (Jacobian rows, one
    per domain coordinate); ``tangent_onb`` and ``normal_onb`` are jointly
    orthonormal under the ambient metric, produced by Gram-Schmidt in a
    fixed order so repeated calls agree bit for bit.
    """

    u: Tuple[float, ...]
    p: Tuple[float, ...]
    tangent_frame: MultiArray
    tangent_onb: MultiArray
    normal_onb: MultiArray
    induced_metric: MultiArray


@dataclass(frozen=True)
class FundamentalForms:
    """Second fundamental form data in the normal orthonormal frame.

    ``h`` has shape (k, k, q) with q the codimension; ``shape_ops`` stacks
    one k-by-k operator per normal frame vector; ``H`` is the mean
    curvature vector.  ``tg_residual`` is the sup-norm of h and
    ``umbilic_residual`` the sup-norm of h(X,Y) - g(X,Y)H, so totally
    geodesic and totally umbilical immersions are read off directly.
    """

    h: MultiArray
    shape_ops: MultiArray
    H: MultiArray
    tg_residual: float
    umbilic_residual: float


class SubmanifoldKind(Enum):
    INVARIANT = "Invariant"
    ANTI_INVARIANT = "AntiInvariant"
    SLANT = "Slant"
    GENERIC = "Generic"


@dataclass(frozen=True)
class Classification:
    """Outcome of the structure-angle sampling classifier."""

    kind: SubmanifoldKind
    cos_theta: Optional[float]
    cos_theta_stddev: Optional[float]
    xi_tangency_residual: float


@dataclass(frozen=True)
class SamplingPlan:
    """Deterministic sampling used by the classifier.

    ``points`` domain points drawn uniformly from [-1, 1]^k, and at each
    point the coordinate tangents plus ``combos`` random unit
    combinations of them.  One generator seeded once drives everything.
    """

    points: int = 5
    combos: int = 8
    seed: int = 42
    tolerance: float = 1e-8


class DefectKind(Enum):
    PARALLEL = "Parallel"
    SEMIPARALLEL = "Semiparallel"
    TWO_SEMIPARALLEL = "TwoSemiparallel"
    CONCIRCULAR_SEMIPARALLEL = "ConcircularSemiparallel"
    CONCIRCULAR_TWO_SEMIPARALLEL = "ConcircularTwoSemiparallel"


def _scalar_components(vec, m):
    """Split a length-m engine vector into scalar-like entries."""
    if isinstance(vec, NilArray):
        return [vec.vindex(i) for i in range(m)]
    arr = np.asarray(vec, dtype=float).reshape(m)
    return [float(x) for x in arr]


def _second_order_state(imm: Immersion, coords, pool: GenPool) -> dict:
    """Immersion data through second derivatives at chart coordinates.

    Jet-capable: ``coords`` may carry live generators and every returned
    value rides along.  Keys: ``val`` (ambient point), ``jac`` [i, a] with
    row i the i-th coordinate tangent, ``g_amb``, ``gamma_amb``, induced
    metric ``G`` and inverse ``Ginv``, the tangential-coefficient
    extractor ``coef`` [l, b] (contract an ambient vector's components
    against it to get frame coefficients of the tangential part), the
    vector-valued second fundamental form ``hvec`` [i, j, a], and the
    induced connection coefficients ``gamma_ind`` [l, i, j].
    """
    k = imm.map.domain_dim
    m = imm.ambient.dim
    tables = field_jets(imm.map.evaluator, list(coords), 2, pool)
    val = NilArray.lift(tables[0])
    jac = NilArray.lift(tables[1])
    hess = NilArray.lift(tables[2])
    pt_amb = _scalar_components(tables[0], m)
    g_amb = NilArray.lift(imm.ambient.metric.g.evaluator(pt_amb))
    gamma_amb = christoffel_in_chart(
        imm.ambient.metric.g.evaluator, m, pt_amb, pool
    )
    low = ncontract("ia,ab->ib", jac, g_amb)
    big_g = ncontract("ib,jb->ij", low, jac)
    try:
        ginv = nil_matinv(big_g, k)
    except DegenerateMetricError as exc:
        raise ImmersionDegenerateError(
            "immersion jacobian loses rank at the sampled point"
        ) from exc
    coef = ncontract("ls,sb->lb", ginv, low)
    # ambient covariant derivative of the j-th tangent along the i-th
    lifted = ncontract("abc,ib->iac", gamma_amb, jac)
    dd = hess + ncontract("iac,jc->ija", lifted, jac)
    tang = ncontract("lb,ijb->ijl", coef, dd)
    hvec = dd - ncontract("ijl,la->ija", tang, jac)
    gamma_ind = nunary("ijl->lij", tang)
    return {
        "val": val,
        "jac": jac,
        "g_amb": g_amb,
        "gamma_amb": gamma_amb,
        "G": big_g,
        "Ginv": ginv,
        "coef": coef,
        "hvec": hvec,
        "gamma_ind": gamma_ind,
        "pt_amb": pt_amb,
    }


def _induced_metric_eval(imm: Immersion, pool: GenPool):
    """First-fundamental-form field over domain coordinates."""
    m = imm.ambient.dim

    def ev(cs):
        tabs = field_jets(imm.map.evaluator, list(cs), 1, pool)
        jac = NilArray.lift(tabs[1])
        g_amb = NilArray.lift(
            imm.ambient.metric.g.evaluator(_scalar_components(tabs[0], m))
        )
        return ncontract("ib,jb->ij", ncontract("ia,ab->ib", jac, g_amb), jac)

    return ev


def _dense_state(imm: Immersion, u):
    pool = GenPool()
    pt = [float(x) for x in u]
    st = _second_order_state(imm, pt, pool)
    k = imm.map.domain_dim
    m = imm.ambient.dim
    out = {
        "pt": pt,
        "val": dense(st["val"], (m,)),
        "jac": dense(st["jac"], (k, m)),
        "g_amb": dense(st["g_amb"], (m, m)),
        "gamma_amb": dense(st["gamma_amb"], (m, m, m)),
        "G": dense(st["G"], (k, k)),
        "Ginv": dense(st["Ginv"], (k, k)),
        "coef": dense(st["coef"], (k, m)),
        "hvec": dense(st["hvec"], (k, k, m)),
        "gamma_ind": dense(st["gamma_ind"], (k, k, k)),
    }
    # enforce the symmetry of h in its two arguments bit for bit
    out["hvec"] = 0.5 * (out["hvec"] + out["hvec"].transpose(1, 0, 2))
    return out


def _frames_from_state(st):
    try:
        tangent_onb, normal_onb = orthonormal_frames(
            st["g_amb"], [row for row in st["jac"]]
        )
    except DegenerateFrameError as exc:
        raise ImmersionDegenerateError(
            "immersion jacobian loses rank at the sampled point"
        ) from exc
    return np.array(tangent_onb), np.array(normal_onb)


def induced_curvature(imm: Immersion, u) -> dict:
    """Curvature data of the induced metric at a domain point.

    Same keys as the ambient curvature helper: g, ginv, christoffel,
    riemann13, riemann04, ricci, scalar, all for the first fundamental
    form as a metric on the domain chart.
    """
    pool = GenPool()
    return curvature_arrays(
        _induced_metric_eval(imm, pool),
        imm.map.domain_dim,
        [float(x) for x in u],
        pool,
    )


def frames(imm: Immersion, u) -> SubmanifoldPointData:
    """Coordinate and orthonormal frames with the induced metric."""
    st = _dense_state(imm, u)
    tangent_onb, normal_onb = _frames_from_state(st)
    return SubmanifoldPointData(
        u=tuple(st["pt"]),
        p=tuple(float(x) for x in st["val"]),
        tangent_frame=MultiArray.from_array(st["jac"]),
        tangent_onb=MultiArray.from_array(tangent_onb),
        normal_onb=MultiArray.from_array(normal_onb),
        induced_metric=MultiArray.from_array(st["G"]),
    )


def _forms_arrays(st, normal_onb):
    """h in the normal frame, shape operators, and the mean curvature."""
    h_onb = np.einsum(
        "ma,ab,ijb->ijm", normal_onb, st["g_amb"], st["hvec"]
    )
    shape_ops = np.einsum("ls,sim->mli", st["Ginv"], h_onb)
    mean = np.einsum("ij,ijm->m", st["Ginv"], h_onb) / st["G"].shape[0]
    return h_onb, shape_ops, mean


def second_fundamental_form(imm: Immersion, u) -> FundamentalForms:
    """Second fundamental form of the immersion at a domain point.

    h carries normal-frame components; the shape operators realize the
    pairing g(h(X,Y),V) = g(A_V X,Y) against the same frame, and H is the
    induced-metric trace of h over the submanifold dimension.
    """
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    h_onb, shape_ops, mean = _forms_arrays(st, normal_onb)
    umb = h_onb - st["G"][:, :, None] * mean[None, None, :]
    return FundamentalForms(
        h=MultiArray.from_array(h_onb),
        shape_ops=MultiArray.from_array(shape_ops),
        H=MultiArray.from_array(mean),
        tg_residual=float(np.max(np.abs(h_onb))) if h_onb.size else 0.0,
        umbilic_residual=float(np.max(np.abs(umb))) if umb.size else 0.0,
    )


def classify(
    imm: Immersion, sampling: SamplingPlan = SamplingPlan()
) -> Classification:
    """Sample the angle between phi of tangents and the tangent space.

    Tangent samples are projected orthogonal to xi and normalized; a
    sample is skipped when that projection or its phi-image is shorter
    than 1e-12.  The kind is decided by the sup of the normal leak of
    phi X (invariant), the sup of the tangential part (anti-invariant),
    or constancy of cos(theta) across all samples (slant).
    """
    k = imm.map.domain_dim
    rng = np.random.default_rng(sampling.seed)
    pts = rng.uniform(-1.0, 1.0, size=(sampling.points, k))
    cosines = []
    sup_normal = 0.0
    sup_tangential = 0.0
    xi_res = 0.0
    for row in pts:
        st = _dense_state(imm, row)
        tangent_onb, _ = _frames_from_state(st)
        ambient = structure_arrays(imm.ambient, st["val"])
        g0 = ambient["g"]
        phi0 = ambient["phi"]
        xi0 = ambient["xi"]
        eta0 = ambient["eta"]

        def tangential(vec):
            coeffs = tangent_onb @ g0 @ vec
            return coeffs @ tangent_onb

        def gnorm(vec):
            return float(np.sqrt(max(vec @ g0 @ vec, 0.0)))

        xi_res = max(xi_res, gnorm(xi0 - tangential(xi0)))
        directions = [st["jac"][i] for i in range(k)]
        combos = rng.standard_normal((sampling.combos, k))
        directions.extend(combos @ st["jac"])
        for direction in directions:
            vec = direction - (eta0 @ direction) * xi0
            nrm = gnorm(vec)
            if nrm < 1e-12:
                continue
            vec = vec / nrm
            phi_x = phi0 @ vec
            phi_norm = gnorm(phi_x)
            if phi_norm < 1e-12:
                continue
            tan_part = tangential(phi_x)
            cos_theta = gnorm(tan_part) / phi_norm
            sin_theta = gnorm(phi_x - tan_part) / phi_norm
            cosines.append(cos_theta)
            sup_normal = max(sup_normal, sin_theta)
            sup_tangential = max(sup_tangential, cos_theta)
    if not cosines:
        raise InsufficientSamplesError(
            "every tangent sample was parallel to xi or annihilated by phi"
        )
    cos_arr = np.array(cosines)
    mean = float(np.mean(cos_arr))
    spread = float(np.std(cos_arr))
    tol = sampling.tolerance
    if sup_normal < tol:
        kind = SubmanifoldKind.INVARIANT
    elif sup_tangential < tol:
        kind = SubmanifoldKind.ANTI_INVARIANT
    elif spread < tol:
        kind = SubmanifoldKind.SLANT
    else:
        kind = SubmanifoldKind.GENERIC
    return Classification(
        kind=kind,
        cos_theta=mean,
        cos_theta_stddev=spread,
        xi_tangency_residual=xi_res,
    )


def _nh1_amb(imm: Immersion, coords, pool: GenPool):
    """Ambient-vector components of the covariant derivative of h.

    Returns out[x, i, j, a]: the normal-bundle derivative of h(e_i, e_j)
    along e_x minus the connection corrections in both arguments.
    Jet-capable so a second derivative can be taken on top.
    """
    st = _second_order_state(imm, coords, pool)
    dh = field_jets(
        lambda cs: _second_order_state(imm, cs, pool)["hvec"],
        list(coords),
        1,
        pool,
    )[1]
    dh = NilArray.lift(dh)
    carried = ncontract(
        "xac,ijc->xija",
        ncontract("abc,xb->xac", st["gamma_amb"], st["jac"]),
        st["hvec"],
    )
    ncd = dh + carried
    tang = ncontract("lb,xijb->xijl", st["coef"], ncd)
    perp = ncd - ncontract("xijl,la->xija", tang, st["jac"])
    corr_i = ncontract("sxi,sja->xija", st["gamma_ind"], st["hvec"])
    corr_j = ncontract("sxj,isa->xija", st["gamma_ind"], st["hvec"])
    return perp - corr_i - corr_j


def _onb_components(normal_onb, g_amb, arr):
    """Convert trailing ambient-vector values to normal-frame components."""
    return np.einsum("ma,ab,...b->...m", normal_onb, g_amb, arr)


def nabla_h(imm: Immersion, u, order: int = 1) -> MultiArray:
    """First or second covariant derivative of h in the normal frame.

    Order 1 returns out[x, i, j, mu] for (D_x h)(e_i, e_j).  Order 2
    returns out[z, w, x, y, mu], the second derivative with outer
    direction x and inner direction y acting on the (z, w) slots, with
    the three connection corrections taken at the base point.
    """
    if order not in (1, 2):
        raise UnsupportedOrderError(
            f"covariant derivative order {order} is not supported; "
            "use 1 or 2"
        )
    k = imm.map.domain_dim
    m = imm.ambient.dim
    pool = GenPool()
    pt = [float(x) for x in u]
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    nh1 = dense(_nh1_amb(imm, pt, pool), (k, k, k, m))
    if order == 1:
        return MultiArray.from_array(
            _onb_components(normal_onb, st["g_amb"], nh1)
        )
    dnh1 = dense(
        field_jets(lambda cs: _nh1_amb(imm, cs, pool), pt, 1, pool)[1],
        (k, k, k, k, m),
    )
    carried = np.einsum(
        "abc,xb,yzwc->xyzwa", st["gamma_amb"], st["jac"], nh1
    )
    ncd = dnh1 + carried
    tang = np.einsum("lb,xyzwb->xyzwl", st["coef"], ncd)
    perp = ncd - np.einsum("xyzwl,la->xyzwa", tang, st["jac"])
    gam = st["gamma_ind"]
    out = (
        perp.transpose(2, 3, 0, 1, 4)
        - np.einsum("sxz,yswa->zwxya", gam, nh1)
        - np.einsum("syw,xzsa->zwxya", gam, nh1)
        - np.einsum("sxy,szwa->zwxya", gam, nh1)
    )
    return MultiArray.from_array(
        _onb_components(normal_onb, st["g_amb"], out)
    )


def _normal_curvature_arrays(imm: Immersion, st, normal_onb, shape_ops):
    """Normal-bundle curvature via the shape-operator commutator rule."""
    m = imm.ambient.dim
    pool = GenPool()
    amb = curvature_arrays(
        imm.ambient.metric.g.evaluator, m, st["val"], pool
    )
    amb_term = np.einsum(
        "abcd,ia,jb,nc,md->ijmn",
        amb["riemann04"], st["jac"], st["jac"], normal_onb, normal_onb,
    )
    comm = np.einsum("nsa,mai->mnsi", shape_ops, shape_ops)
    comm = comm - comm.transpose(1, 0, 2, 3)
    return amb_term + np.einsum("mnsi,sj->ijmn", comm, st["G"])


def normal_curvature(imm: Immersion, u) -> MultiArray:
    """Curvature of the normal connection on coordinate pairs.

    Entry [i, j, mu, nu] is the mu-th normal-frame component of
    R-perp(e_i, e_j) applied to the nu-th normal frame vector, assembled
    from the ambient curvature and the shape-operator commutator instead
    of third immersion derivatives.
    """
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    _, shape_ops, _ = _forms_arrays(st, normal_onb)
    return MultiArray.from_array(
        _normal_curvature_arrays(imm, st, normal_onb, shape_ops)
    )


def _kebab(kind: DefectKind) -> str:
    out = []
    for ch in kind.value:
        if ch.isupper() and out:
            out.append("-")
        out.append(ch.lower())
    return "".join(out)


def defect(
    imm: Immersion, u, kind: DefectKind, tolerance: float = 1e-7
) -> DefectReport:
    """Sup-norm of one curvature-acting defect on coordinate frames.

    Parallel measures the covariant derivative of h itself.  The
    semiparallel family applies the normal curvature to the value slot of
    h (or of its derivative) and subtracts the induced curvature acting
    on each argument slot; the concircular variants substitute the
    submanifold's concircular tensor for the induced curvature there.
    """
    k = imm.map.domain_dim
    pool = GenPool()
    pt = [float(x) for x in u]
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    h_onb, shape_ops, _ = _forms_arrays(st, normal_onb)
    if kind is DefectKind.PARALLEL:
        value = _onb_components(
            normal_onb,
            st["g_amb"],
            dense(_nh1_amb(imm, pt, pool), (k, k, k, imm.ambient.dim)),
        )
        sup = float(np.max(np.abs(value))) if value.size else 0.0
        return DefectReport(
            name="submanifold-defect",
            entries=(DefectEntry(_kebab(kind), sup),),
            tolerance=tolerance,
        )
    rperp = _normal_curvature_arrays(imm, st, normal_onb, shape_ops)
    induced = curvature_arrays(
        _induced_metric_eval(imm, pool), k, pt, pool
    )
    action = induced["riemann13"]
    if kind in (
        DefectKind.CONCIRCULAR_SEMIPARALLEL,
        DefectKind.CONCIRCULAR_TWO_SEMIPARALLEL,
    ):
        if k % 2 == 0:
            raise DimensionError(
                "concircular normalization needs an odd-dimensional "
                f"submanifold, got dimension {k}"
            )
        norm = induced["scalar"] / (k * (k - 1))
        eye = np.eye(k)
        action = action - norm * (
            np.einsum("js,li->lijs", induced["g"], eye)
            - np.einsum("is,lj->lijs", induced["g"], eye)
        )
    if kind in (DefectKind.SEMIPARALLEL, DefectKind.CONCIRCULAR_SEMIPARALLEL):
        value = (
            np.einsum("ijmn,zun->ijzum", rperp, h_onb)
            - np.einsum("sijz,sum->ijzum", action, h_onb)
            - np.einsum("siju,zsm->ijzum", action, h_onb)
        )
    else:
        nh1 = _onb_components(
            normal_onb,
            st["g_amb"],
            dense(_nh1_amb(imm, pt, pool), (k, k, k, imm.ambient.dim)),
        )
        value = (
            np.einsum("ijmn,zuwn->ijzuwm", rperp, nh1)
            - np.einsum("sijz,suwm->ijzuwm", action, nh1)
            - np.einsum("siju,zswm->ijzuwm", action, nh1)
            - np.einsum("sijw,zusm->ijzuwm", action, nh1)
        )
    sup = float(np.max(np.abs(value))) if value.size else 0.0
    return DefectReport(
        name="submanifold-defect",
        entries=(DefectEntry(_kebab(kind), sup),),
        tolerance=tolerance,
    )


def invariant_identity_suite(
    imm: Immersion,
    u,
    f,
    tolerance: float = 1e-7,
    classification: Optional[Classification] = None,
) -> DefectReport:
    """Residuals of the identities that hold on invariant submanifolds.

    ``f`` is the ambient three-coefficient tuple.  The input must
    classify as invariant with xi tangent; pass a precomputed
    classification to skip resampling.  Entries cover the shape-operator
    pairing, the tangential part of the ambient-to-induced curvature
    relation, h annihilating xi, the induced derivative of xi, curvature
    and Ricci contractions against xi on the submanifold, the induced
    derivative of phi, and the commutation of h with phi.
    """
    if classification is None:
        classification = classify(imm)
    plan_tol = SamplingPlan().tolerance
    if (
        classification.kind is not SubmanifoldKind.INVARIANT
        or classification.xi_tangency_residual > plan_tol
    ):
        raise ClassificationMismatchError(
            "identity suite needs an invariant submanifold with tangent "
            f"xi; classifier found {classification.kind.value} with "
            f"tangency residual {classification.xi_tangency_residual:.3e}"
        )
    f1, f2, f3 = (float(x) for x in f)
    kk = f1 - f3
    k = imm.map.domain_dim
    m = imm.ambient.dim
    n_sub = (k - 1) // 2
    pool = GenPool()
    pt = [float(x) for x in u]
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    h_onb, shape_ops, _ = _forms_arrays(st, normal_onb)
    ambient = structure_arrays(imm.ambient, st["val"])
    jets = structure_jets(imm.ambient, st["val"], pool)
    g0 = ambient["g"]
    phi0 = ambient["phi"]
    xi0 = ambient["xi"]
    eta0 = ambient["eta"]
    big_g = st["G"]
    jac = st["jac"]
    coef = st["coef"]
    eye = np.eye(k)

    # dual pairing of h and the shape operators
    paired = np.einsum("mli,lj->ijm", shape_ops, big_g)
    r_pairing = float(np.max(np.abs(paired - h_onb)))

    # tangential part of the ambient curvature vs induced plus A-terms
    amb = curvature_arrays(
        imm.ambient.metric.g.evaluator, m, st["val"], pool
    )
    pushed = np.einsum(
        "abcd,ib,jc,sd->ijsa", amb["riemann13"], jac, jac, jac
    )
    lhs_gauss = np.einsum("lb,ijsb->lijs", coef, pushed)
    induced = curvature_arrays(_induced_metric_eval(imm, pool), k, pt, pool)
    a_terms = (
        np.einsum("ism,mlj->lijs", h_onb, shape_ops)
        - np.einsum("jsm,mli->lijs", h_onb, shape_ops)
    )
    r_gauss = float(
        np.max(np.abs(lhs_gauss - induced["riemann13"] - a_terms))
    )

    # xi in frame coefficients, eta on the coordinate tangents
    xi_dom = coef @ xi0
    eta_hat = jac @ eta0

    r_h_xi = float(np.max(np.abs(np.einsum("ijm,j->im", h_onb, xi_dom))))

    # induced derivative of xi via the ambient chain rule
    nabxi_amb = jets["dxi"] + np.einsum("abc,c->ba", amb["christoffel"], xi0)
    along = np.einsum("ib,ba->ia", jac, nabxi_amb)
    nabxi_dom = np.einsum("lb,ib->il", coef, along)
    phi_dom = np.einsum("la,ab,ib->il", coef, phi0, jac)
    r_nabxi = float(np.max(np.abs(nabxi_dom + kk * phi_dom)))

    pair = np.einsum("j,li->lij", eta_hat, eye) - np.einsum(
        "i,lj->lij", eta_hat, eye
    )
    r_rxi = float(
        np.max(
            np.abs(
                np.einsum("lijs,s->lij", induced["riemann13"], xi_dom)
                - kk * pair
            )
        )
    )

    r_ricci = float(
        np.max(
            np.abs(
                induced["ricci"] @ xi_dom - 2.0 * n_sub * kk * eta_hat
            )
        )
    )

    # induced phi operator differentiated as a field over the domain
    def phihat_eval(cs):
        stt = _second_order_state(imm, cs, pool)
        phia = NilArray.lift(
            imm.ambient.structure.phi.evaluator(
                _scalar_components(stt["val"], m)
            )
        )
        push = ncontract("ab,jb->ja", phia, stt["jac"])
        return ncontract("la,ja->lj", stt["coef"], push)

    ph_tabs = field_jets(phihat_eval, pt, 1, pool)
    phihat = dense(ph_tabs[0], (k, k))
    dphihat = dense(ph_tabs[1], (k, k, k))
    gam_ind = st["gamma_ind"]
    nabla_phihat = (
        dphihat
        + np.einsum("lis,sj->ilj", gam_ind, phihat)
        - np.einsum("sij,ls->ilj", gam_ind, phihat)
    )
    rhs_phi = kk * (
        np.einsum("ij,l->ilj", big_g, xi_dom)
        - np.einsum("j,li->ilj", eta_hat, eye)
    )
    r_nabla_phi = float(np.max(np.abs(nabla_phihat - rhs_phi)))

    hvec = st["hvec"]
    r_h_phi = float(
        np.max(
            np.abs(
                np.einsum("sj,isa->ija", phihat, hvec)
                - np.einsum("ab,ijb->ija", phi0, hvec)
            )
        )
    )

    entries = (
        DefectEntry("shape-pairing", r_pairing),
        DefectEntry("gauss-tangential", r_gauss),
        DefectEntry("h-with-reeb", r_h_xi),
        DefectEntry("induced-reeb-derivative", r_nabxi),
        DefectEntry("induced-curvature-reeb", r_rxi),
        DefectEntry("induced-ricci-reeb", r_ricci),
        DefectEntry("induced-phi-derivative", r_nabla_phi),
        DefectEntry("h-phi-commutation", r_h_phi),
    )
    return DefectReport(
        name="invariant-submanifold-identities",
        entries=entries,
        tolerance=tolerance,
    )
