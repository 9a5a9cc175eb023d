"""Semi-symmetric shift of the Levi-Civita connection.

The shifted connection adds eta(Y) X - g(X, Y) xi to the Levi-Civita
derivative.  Its torsion is eta(Y) X - eta(X) Y and it still preserves
the metric.  This module builds the shifted coefficients, the alpha
tensor with its raised operator, a residual suite for the curvature of
the shifted connection, the induced objects on invariant submanifolds,
and pointwise least-squares fits for the recurrence relations satisfied
by the shifted derivatives of the second fundamental form.

Curvature conventions note: the transformation identity checked here is
the antisymmetric-in-(X, Y) form

    R~(X,Y)Z = R(X,Y)Z - a(Y,Z)X + a(X,Z)Y - g(Y,Z)L'X + g(X,Z)L'Y

with a = alpha - g and L' = L - id, which is the version consistent with
the direct curvature of the shifted coefficients.  The Reeb contraction
entries use the zero-offset readings (the derivative of eta or xi under
the unshifted connection) for the same reason; each entry measures an
exact identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .contact import AmbientModel, fit_gssf, structure_arrays, structure_jets
from .errors import (
    ClassificationMismatchError,
    NotAGssfError,
    UnsupportedOrderError,
)
from .nilpotent import GenPool, NilArray, dense, field_jets, ncontract, nunary
from .report import DefectEntry, DefectReport
from .riemann import (
    christoffel_in_chart,
    curvature_arrays,
    curvature_of_connection,
)
from .subman import (
    Classification,
    Immersion,
    SamplingPlan,
    SubmanifoldKind,
    _dense_state,
    _frames_from_state,
    _onb_components,
    _second_order_state,
    classify,
)
from .tensorjet import MultiArray

__all__ = [
    "RecurrenceKind",
    "RecurrenceSolution",
    "SsmcContext",
    "alpha_tensor",
    "recurrence_residual",
    "ssmc_connection",
    "ssmc_curvature_suite",
    "ssmc_induced",
    "ssmc_nabla_h",
]


@dataclass(frozen=True)
class SsmcContext:
    """Alpha data of the shifted connection at one chart point.

    ``alpha`` is the (0,2) tensor pairing the shifted derivative of eta
    with half the metric, ``L`` its metric raising in the first slot so
    that alpha(X, Y) = g(LX, Y), and ``a`` the metric trace of alpha.
    """

    model: AmbientModel
    point: tuple
    alpha: MultiArray
    L: MultiArray
    a: float


class RecurrenceKind(Enum):
    RECURRENT = "Recurrent"
    TWO_RECURRENT = "TwoRecurrent"
    GENERALIZED_TWO_RECURRENT = "GeneralizedTwoRecurrent"


@dataclass(frozen=True)
class RecurrenceSolution:
    """Least-squares fit of one recurrence relation at a point.

    ``forms`` maps form names to their solved coefficient arrays.
    Supports two-element unpacking as (forms, residual); the
    ``minimum_norm`` flag marks an underdetermined solve.
    """

    kind: RecurrenceKind
    forms: dict
    residual: float
    minimum_norm: bool = False

    def __iter__(self):
        yield self.forms
        yield self.residual


def _sup(arr) -> float:
    return float(np.max(np.abs(arr))) if np.size(arr) else 0.0


def _shifted_coefficients(gamma, g0, xi0, eta0):
    """Connection coefficients of the shift, plain arrays, index [a,b,c]."""
    m = len(xi0)
    eye = np.eye(m)
    return (
        gamma
        + np.einsum("c,ab->abc", eta0, eye)
        - np.einsum("bc,a->abc", g0, xi0)
    )


def ssmc_connection(model: AmbientModel, p, X, Y) -> np.ndarray:
    """Shifted covariant derivative of constant-component fields.

    ``X`` and ``Y`` are chart-component vectors held constant across the
    chart, so the Levi-Civita part reduces to the coefficient pairing
    and the result is Gamma(X, Y) + eta(Y) X - g(X, Y) xi.
    """
    m = model.dim
    pt = [float(x) for x in p]
    pool = GenPool()
    gamma = dense(
        christoffel_in_chart(model.metric.g.evaluator, m, pt, pool),
        (m, m, m),
    )
    arrs = structure_arrays(model, pt)
    X = np.asarray(X, dtype=float).reshape(m)
    Y = np.asarray(Y, dtype=float).reshape(m)
    lc_part = np.einsum("abc,b,c->a", gamma, X, Y)
    return (
        lc_part
        + float(arrs["eta"] @ Y) * X
        - float(X @ arrs["g"] @ Y) * arrs["xi"]
    )


def alpha_tensor(model: AmbientModel, p) -> SsmcContext:
    """Alpha of the shifted connection with its raised operator and trace."""
    m = model.dim
    pt = [float(x) for x in p]
    pool = GenPool()
    jets = structure_jets(model, pt, pool)
    curv = curvature_arrays(model.metric.g.evaluator, m, pt, pool)
    gamma_s = _shifted_coefficients(
        curv["christoffel"], curv["g"], jets["xi"], jets["eta"]
    )
    # alpha[i, j] = (shifted nabla_i eta)_j + g_ij / 2
    alpha = (
        jets["deta"]
        - np.einsum("cij,c->ij", gamma_s, jets["eta"])
        + 0.5 * curv["g"]
    )
    raised = np.einsum("ac,bc->ab", curv["ginv"], alpha)
    trace = float(np.einsum("ij,ij->", curv["ginv"], alpha))
    return SsmcContext(
        model=model,
        point=tuple(pt),
        alpha=MultiArray.from_array(alpha),
        L=MultiArray.from_array(raised),
        a=trace,
    )


def ssmc_curvature_suite(
    model: AmbientModel,
    f,
    p,
    tolerance: float = 1e-7,
    fit_tolerance: float = 1e-6,
) -> DefectReport:
    """Residuals of the shifted-connection identities at a chart point.

    Entries cover the torsion and metricity of the shifted coefficients,
    the shift relation between the two derivatives of eta, the curvature
    transformation against the direct curvature of the shifted
    coefficients, the Ricci and scalar contractions, the two Reeb
    contractions of the shifted curvature, the Reeb slot of the shifted
    Ricci tensor, and the metric raising of alpha.
    """
    fit = fit_gssf(model, p)
    if fit.residual > fit_tolerance:
        raise NotAGssfError(
            "curvature does not match the three-coefficient model "
            f"(relative residual {fit.residual:.3e})"
        )
    f1, f2, f3 = (float(c) for c in f)
    kk = f1 - f3
    m = model.dim
    n = (m - 1) // 2
    pt = [float(x) for x in p]
    pool = GenPool()
    jets = structure_jets(model, pt, pool)
    curv = curvature_arrays(model.metric.g.evaluator, m, pt, pool)
    g0, ginv = curv["g"], curv["ginv"]
    gamma = curv["christoffel"]
    eta0, xi0 = jets["eta"], jets["xi"]
    eye = np.eye(m)
    gamma_s = _shifted_coefficients(gamma, g0, xi0, eta0)

    tau = np.einsum("c,ab->abc", eta0, eye) - np.einsum(
        "b,ac->abc", eta0, eye
    )
    r_torsion = _sup(gamma_s - gamma_s.transpose(0, 2, 1) - tau)

    dg = dense(
        field_jets(model.metric.g.evaluator, pt, 1, pool)[1], (m, m, m)
    )
    nabla_g = (
        dg
        - np.einsum("cia,cb->iab", gamma_s, g0)
        - np.einsum("cib,ac->iab", gamma_s, g0)
    )
    r_metricity = _sup(nabla_g)

    nab_eta = jets["deta"] - np.einsum("cba,c->ba", gamma, eta0)
    nab_eta_s = jets["deta"] - np.einsum("cba,c->ba", gamma_s, eta0)
    r_shift = _sup(nab_eta_s - (nab_eta - np.outer(eta0, eta0) + g0))

    alpha = nab_eta_s + 0.5 * g0
    raised = np.einsum("ac,bc->ab", ginv, alpha)
    a_val = float(np.einsum("ij,ij->", ginv, alpha))
    r_raising = _sup(np.einsum("ab,aj->bj", raised, g0) - alpha)

    def shifted_eval(q):
        gam_q = christoffel_in_chart(model.metric.g.evaluator, m, q, pool)
        comps = [x for x in q]
        g_q = NilArray.lift(model.metric.g.evaluator(comps))
        eta_q = NilArray.lift(model.structure.eta.evaluator(comps))
        xi_q = NilArray.lift(model.structure.xi.evaluator(comps))
        lifted_eye = NilArray.lift(eye)
        return (
            gam_q
            + ncontract("c,ab->abc", eta_q, lifted_eye)
            - ncontract("bc,a->abc", g_q, xi_q)
        )

    r13_s = dense(curvature_of_connection(shifted_eval, pt, pool), (m,) * 4)

    alpha_y = alpha - g0
    raised_y = raised - eye
    transformed = (
        curv["riemann13"]
        - np.einsum("jk,li->lijk", alpha_y, eye)
        + np.einsum("ik,lj->lijk", alpha_y, eye)
        - np.einsum("jk,li->lijk", g0, raised_y)
        + np.einsum("ik,lj->lijk", g0, raised_y)
    )
    r_transform = _sup(r13_s - transformed)

    ricci_p = curv["ricci"] - (2 * n - 1) * alpha - a_val * g0
    scalar_p = curv["scalar"] - 4 * n * a_val
    r_ricci_contraction = abs(
        float(np.einsum("ij,ij->", ginv, ricci_p)) - scalar_p
    )

    ricci_d = np.einsum("aajk->jk", r13_s)
    scalar_d = float(np.einsum("jk,jk->", ginv, ricci_d))
    a_y = a_val - (2 * n + 1)
    r_scalar_contraction = abs(scalar_d - (curv["scalar"] - 4 * n * a_y))

    nab_xi = jets["dxi"] + np.einsum("abc,c->ba", gamma, xi0)
    lhs_arg = np.einsum("lijk,k->lij", r13_s, xi0)
    rhs_arg = (
        kk
        * (
            np.einsum("j,li->lij", eta0, eye)
            - np.einsum("i,lj->lij", eta0, eye)
        )
        - np.einsum("j,il->lij", eta0, nab_xi)
        + np.einsum("i,jl->lij", eta0, nab_xi)
    )
    r_reeb_argument = _sup(lhs_arg - rhs_arg)

    lhs_first = np.einsum("lijk,i->ljk", r13_s, xi0)
    rhs_first = (
        kk
        * (
            np.einsum("jk,l->ljk", g0, xi0)
            - np.einsum("k,lj->ljk", eta0, eye)
        )
        - np.einsum("jk,l->ljk", nab_eta, xi0)
        + np.einsum("k,jl->ljk", eta0, nab_xi)
    )
    r_reeb_first = _sup(lhs_first - rhs_first)

    a_zero = float(np.einsum("aa->", nab_xi))
    r_ricci_reeb = _sup(
        ricci_d @ xi0 - (2 * n * kk - a_zero) * eta0
    )

    entries = (
        DefectEntry("torsion", r_torsion),
        DefectEntry("metricity", r_metricity),
        DefectEntry("eta-derivative-shift", r_shift),
        DefectEntry("curvature-transformation", r_transform),
        DefectEntry("ricci-contraction", r_ricci_contraction),
        DefectEntry("scalar-contraction", r_scalar_contraction),
        DefectEntry("curvature-reeb-argument", r_reeb_argument),
        DefectEntry("curvature-reeb-first", r_reeb_first),
        DefectEntry("ricci-reeb", r_ricci_reeb),
        DefectEntry("alpha-raising", r_raising),
    )
    return DefectReport(
        name="semi-symmetric-connection-identities",
        entries=entries,
        tolerance=tolerance,
    )


def _ssmc_state(imm: Immersion, coords, pool: GenPool) -> dict:
    """Immersion state extended by the shifted-connection quantities.

    Jet-capable.  Adds the shifted ambient coefficients, the shifted
    induced coefficients, and the shifted vector-valued second form to
    the Levi-Civita state.
    """
    st = _second_order_state(imm, coords, pool)
    m = imm.ambient.dim
    pt_amb = st["pt_amb"]
    eta = NilArray.lift(imm.ambient.structure.eta.evaluator(pt_amb))
    xi = NilArray.lift(imm.ambient.structure.xi.evaluator(pt_amb))
    eye = NilArray.lift(np.eye(m))
    st["gamma_amb_s"] = (
        st["gamma_amb"]
        + ncontract("c,ab->abc", eta, eye)
        - ncontract("bc,a->abc", st["g_amb"], xi)
    )
    dd = st["hvec"] + ncontract("lij,la->ija", st["gamma_ind"], st["jac"])
    eta_j = ncontract("ja,a->j", st["jac"], eta)
    dd_s = (
        dd
        + ncontract("j,ia->ija", eta_j, st["jac"])
        - ncontract("ij,a->ija", st["G"], xi)
    )
    tang_s = ncontract("lb,ijb->ijl", st["coef"], dd_s)
    st["hvec_s"] = dd_s - ncontract("ijl,la->ija", tang_s, st["jac"])
    st["gamma_ind_s"] = nunary("ijl->lij", tang_s)
    st["eta_amb"] = eta
    st["xi_amb"] = xi
    return st


def _ssmc_nh1_amb(imm: Immersion, coords, pool: GenPool):
    """Shifted-connection derivative of h, ambient-vector components.

    Derivative and argument slots ride the shifted connections; the form
    itself stays the Levi-Civita second fundamental form.  Jet-capable.
    """
    st = _ssmc_state(imm, coords, pool)
    dh = field_jets(
        lambda cs: _second_order_state(imm, cs, pool)["hvec"],
        list(coords),
        1,
        pool,
    )[1]
    dh = NilArray.lift(dh)
    carried = ncontract(
        "xac,ijc->xija",
        ncontract("abc,xb->xac", st["gamma_amb_s"], st["jac"]),
        st["hvec"],
    )
    ncd = dh + carried
    tang = ncontract("lb,xijb->xijl", st["coef"], ncd)
    perp = ncd - ncontract("xijl,la->xija", tang, st["jac"])
    corr_i = ncontract("sxi,sja->xija", st["gamma_ind_s"], st["hvec"])
    corr_j = ncontract("sxj,isa->xija", st["gamma_ind_s"], st["hvec"])
    return perp - corr_i - corr_j


def ssmc_nabla_h(imm: Immersion, u, order: int = 1) -> MultiArray:
    """Shifted-connection derivatives of h in the normal frame.

    Same slot layout as the Levi-Civita version: order 1 gives
    out[x, i, j, mu], order 2 gives out[z, w, x, y, mu] with outer
    direction x and inner direction y.
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
    nh1 = dense(_ssmc_nh1_amb(imm, pt, pool), (k, k, k, m))
    dst = _dense_ssmc_state(imm, pt)
    if order == 1:
        return MultiArray.from_array(
            _onb_components(normal_onb, st["g_amb"], nh1)
        )
    dnh1 = dense(
        field_jets(lambda cs: _ssmc_nh1_amb(imm, cs, pool), pt, 1, pool)[1],
        (k, k, k, k, m),
    )
    carried = np.einsum(
        "abc,xb,yzwc->xyzwa", dst["gamma_amb_s"], st["jac"], nh1
    )
    ncd = dnh1 + carried
    tang = np.einsum("lb,xyzwb->xyzwl", st["coef"], ncd)
    perp = ncd - np.einsum("xyzwl,la->xyzwa", tang, st["jac"])
    gam = dst["gamma_ind_s"]
    out = (
        perp.transpose(2, 3, 0, 1, 4)
        - np.einsum("sxz,yswa->zwxya", gam, nh1)
        - np.einsum("syw,xzsa->zwxya", gam, nh1)
        - np.einsum("sxy,szwa->zwxya", gam, nh1)
    )
    return MultiArray.from_array(
        _onb_components(normal_onb, st["g_amb"], out)
    )


def _dense_ssmc_state(imm: Immersion, pt) -> dict:
    pool = GenPool()
    k = imm.map.domain_dim
    m = imm.ambient.dim
    st = _ssmc_state(imm, pt, pool)
    return {
        "gamma_amb_s": dense(st["gamma_amb_s"], (m, m, m)),
        "gamma_ind_s": dense(st["gamma_ind_s"], (k, k, k)),
        "hvec_s": dense(st["hvec_s"], (k, k, m)),
        "eta_amb": dense(st["eta_amb"], (m,)),
        "xi_amb": dense(st["xi_amb"], (m,)),
    }


def ssmc_induced(
    imm: Immersion,
    u,
    tolerance: float = 1e-10,
    classification: Optional[Classification] = None,
) -> DefectReport:
    """Induced objects of the shifted connection on an invariant input.

    Entries: the induced-connection shift law, equality of the shifted
    and Levi-Civita second forms, equality of the mean curvature
    vectors, and pointwise equality of the two normal connections.
    """
    if classification is None:
        classification = classify(imm)
    plan_tol = SamplingPlan().tolerance
    if (
        classification.kind is not SubmanifoldKind.INVARIANT
        or classification.xi_tangency_residual > plan_tol
    ):
        raise ClassificationMismatchError(
            "induced-connection comparison needs an invariant submanifold "
            f"with tangent xi; classifier found {classification.kind.value} "
            f"with tangency residual "
            f"{classification.xi_tangency_residual:.3e}"
        )
    k = imm.map.domain_dim
    pt = [float(x) for x in u]
    st = _dense_state(imm, u)
    dst = _dense_ssmc_state(imm, pt)
    _, normal_onb = _frames_from_state(st)
    jac, g0 = st["jac"], st["g_amb"]
    eta0, xi0 = dst["eta_amb"], dst["xi_amb"]
    eye_k = np.eye(k)

    eta_j = jac @ eta0
    xi_dom = st["coef"] @ xi0
    rhs = (
        st["gamma_ind"]
        + np.einsum("j,li->lij", eta_j, eye_k)
        - np.einsum("ij,l->lij", st["G"], xi_dom)
    )
    r_shift = _sup(dst["gamma_ind_s"] - rhs)

    r_h = _sup(dst["hvec_s"] - st["hvec"])

    mean_lc = np.einsum("ij,ija->a", st["Ginv"], st["hvec"]) / k
    mean_s = np.einsum("ij,ija->a", st["Ginv"], dst["hvec_s"]) / k
    r_mean = _sup(mean_s - mean_lc)

    diffs = []
    for nvec in normal_onb:
        raw = (
            float(eta0 @ nvec) * jac
            - np.outer(jac @ g0 @ nvec, xi0)
        )
        perp = raw - (raw @ g0 @ st["coef"].T) @ jac
        diffs.append(perp)
    r_normal = _sup(np.array(diffs))

    entries = (
        DefectEntry("induced-connection-shift", r_shift),
        DefectEntry("second-form-match", r_h),
        DefectEntry("mean-curvature-match", r_mean),
        DefectEntry("normal-connection-match", r_normal),
    )
    return DefectReport(
        name="semi-symmetric-induced-objects",
        entries=entries,
        tolerance=tolerance,
    )


def recurrence_residual(
    imm: Immersion, u, kind: RecurrenceKind
) -> RecurrenceSolution:
    """Pointwise least-squares fit of one recurrence relation.

    Solves for the unknown forms (a 1-form, a 2-form, or both) that best
    reproduce the shifted derivative of h from h itself over the full
    coordinate-frame tuple set at u, and returns the solved forms with a
    normalized sup residual.  A vanishing h short-circuits to residual
    zero with zero forms.
    """
    k = imm.map.domain_dim
    st = _dense_state(imm, u)
    _, normal_onb = _frames_from_state(st)
    h_onb = _onb_components(normal_onb, st["g_amb"], st["hvec"])
    nn = h_onb.shape[-1]
    h_sq = float(np.sum(h_onb * h_onb))
    if np.sqrt(h_sq) < 1e-14:
        zero_forms = {
            RecurrenceKind.RECURRENT: {"D": np.zeros(k)},
            RecurrenceKind.TWO_RECURRENT: {"psi": np.zeros((k, k))},
            RecurrenceKind.GENERALIZED_TWO_RECURRENT: {
                "psi": np.zeros((k, k)),
                "rho": np.zeros(k),
            },
        }[kind]
        return RecurrenceSolution(
            kind=kind,
            forms={
                key: MultiArray.from_array(val)
                for key, val in zero_forms.items()
            },
            residual=0.0,
        )
    nh1 = ssmc_nabla_h(imm, u, order=1).array
    if kind is RecurrenceKind.RECURRENT:
        solved = np.einsum("xijm,ijm->x", nh1, h_onb) / h_sq
        resid = nh1 - np.einsum("x,ijm->xijm", solved, h_onb)
        return RecurrenceSolution(
            kind=kind,
            forms={"D": MultiArray.from_array(solved)},
            residual=_sup(resid) / (1.0 + _sup(nh1)),
        )
    nh2 = ssmc_nabla_h(imm, u, order=2).array
    if kind is RecurrenceKind.TWO_RECURRENT:
        solved = np.einsum("zwxym,zwm->xy", nh2, h_onb) / h_sq
        resid = nh2 - np.einsum("xy,zwm->zwxym", solved, h_onb)
        return RecurrenceSolution(
            kind=kind,
            forms={"psi": MultiArray.from_array(solved)},
            residual=_sup(resid) / (1.0 + _sup(nh2)),
        )
    # generalized: nh2[z,w,x,y,m] = psi[x,y] h[z,w,m] + rho[x] nh1[y,z,w,m]
    rows = k * k * k * k * nn
    cols = k * k + k
    design = np.zeros((rows, cols))
    target = np.zeros(rows)
    row = 0
    for z in range(k):
        for w in range(k):
            for x in range(k):
                for y in range(k):
                    for mu in range(nn):
                        design[row, x * k + y] = h_onb[z, w, mu]
                        design[row, k * k + x] = nh1[y, z, w, mu]
                        target[row] = nh2[z, w, x, y, mu]
                        row += 1
    theta, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ theta
    return RecurrenceSolution(
        kind=kind,
        forms={
            "psi": MultiArray.from_array(theta[: k * k].reshape(k, k)),
            "rho": MultiArray.from_array(theta[k * k :]),
        },
        residual=_sup(resid) / (1.0 + _sup(nh2)),
        minimum_norm=rank < cols,
    )
