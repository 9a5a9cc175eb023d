"""Almost contact metric structures and the three-coefficient curvature model.

An ambient model couples a chart metric with a structure (phi, xi, eta).
The operations here verify the structure axioms pointwise, fit the
three-coefficient curvature model

    R(X,Y)Z = f1 {g(Y,Z)X - g(X,Z)Y}
            + f2 {g(X,phiZ)phiY - g(Y,phiZ)phiX + 2 g(X,phiY)phiZ}
            + f3 {eta(X)eta(Z)Y - eta(Y)eta(Z)X
                  + g(X,Z)eta(Y)xi - g(Y,Z)eta(X)xi}

by least squares at a point, and measure the residuals of the identity
suite that this curvature model implies (covariant derivatives of phi
and xi, Ricci data, Reeb contractions, and the concircular tensor).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitDegenerateError, NotAGssfError
from .nilpotent import GenPool, dense, field_jets
from .report import DefectEntry, DefectReport
from .riemann import MetricField, christoffel_in_chart, curvature_arrays
from .tensorjet import SmoothMap


@dataclass(frozen=True)
class AlmostContactStructure:
    """The tensor triple (phi, xi, eta) as chart-component fields.

    phi returns an m x m matrix whose column j holds the components of
    phi applied to the j-th coordinate field; xi returns a vector and
    eta a covector, all evaluable on jet-augmented coordinates.
    """

    phi: SmoothMap
    xi: SmoothMap
    eta: SmoothMap


@dataclass(frozen=True)
class AmbientModel:
    """An odd-dimensional chart metric with an almost contact structure."""

    dim: int
    metric: MetricField
    structure: AlmostContactStructure
    known_f: tuple | None = None


@dataclass(frozen=True)
class GssfFit:
    """Least-squares coefficients of the three-term curvature model."""

    f1: float
    f2: float
    f3: float
    residual: float

    @property
    def coefficients(self):
        return (self.f1, self.f2, self.f3)


def structure_arrays(model: AmbientModel, p) -> dict:
    """Plain arrays of g, its inverse, phi, xi, and eta at a point."""
    m = model.dim
    pt = [float(x) for x in p]
    g0 = model.metric.matrix(pt)
    phi0 = dense(model.structure.phi.evaluator(pt), (m, m))
    xi0 = dense(model.structure.xi.evaluator(pt), (m,))
    eta0 = dense(model.structure.eta.evaluator(pt), (m,))
    return {
        "g": g0,
        "ginv": np.linalg.inv(g0),
        "phi": phi0,
        "xi": xi0,
        "eta": eta0,
    }


def structure_jets(model: AmbientModel, p, pool: GenPool) -> dict:
    """First-derivative tables of the structure fields at a point.

    Returns dphi[i,a,b] = d_i phi^a_b, dxi[i,a] = d_i xi^a and
    deta[i,a] = d_i eta_a alongside the point values.
    """
    m = model.dim
    pt = [float(x) for x in p]
    phi_t = field_jets(model.structure.phi.evaluator, pt, 1, pool)
    xi_t = field_jets(model.structure.xi.evaluator, pt, 1, pool)
    eta_t = field_jets(model.structure.eta.evaluator, pt, 1, pool)
    return {
        "phi": dense(phi_t[0], (m, m)),
        "xi": dense(xi_t[0], (m,)),
        "eta": dense(eta_t[0], (m,)),
        "dphi": dense(phi_t[1], (m, m, m)),
        "dxi": dense(xi_t[1], (m, m)),
        "deta": dense(eta_t[1], (m, m)),
    }


def _sup(arr) -> float:
    return float(np.max(np.abs(arr))) if np.size(arr) else 0.0


def check_acs_axioms(model: AmbientModel, p, tolerance: float = 1e-10):
    """Residuals of the five structure axioms on the coordinate frame.

    Entries: the phi-square relation with phi xi = 0, the Reeb pairings
    (unit eta(xi), metric duality of xi and eta, eta annihilating phi),
    metric compatibility of phi, antisymmetry of g(phi .,.), and the
    duality of the covariant derivatives of eta and xi.
    """
    m = model.dim
    pt = [float(x) for x in p]
    pool = GenPool()
    arrs = structure_jets(model, pt, pool)
    g0 = model.metric.matrix(pt)
    phi0, xi0, eta0 = arrs["phi"], arrs["xi"], arrs["eta"]
    eye = np.eye(m)

    r_square = max(
        _sup(phi0 @ phi0 + eye - np.outer(xi0, eta0)),
        _sup(phi0 @ xi0),
    )
    r_pairing = max(
        abs(float(eta0 @ xi0) - 1.0),
        _sup(g0 @ xi0 - eta0),
        _sup(eta0 @ phi0),
    )
    r_compat = _sup(phi0.T @ g0 @ phi0 - (g0 - np.outer(eta0, eta0)))
    lowered = g0 @ phi0
    r_antisym = _sup(lowered + lowered.T)

    gam = dense(
        christoffel_in_chart(model.metric.g.evaluator, m, pt, pool),
        (m,) * 3,
    )
    nabla_eta = arrs["deta"] - np.einsum("aij,a->ij", gam, eta0)
    nabla_xi = arrs["dxi"] + np.einsum("aib,b->ia", gam, xi0)
    r_dual = _sup(nabla_eta - np.einsum("ia,ja->ij", nabla_xi, g0))

    entries = (
        DefectEntry("phi-square", r_square),
        DefectEntry("reeb-pairing", r_pairing),
        DefectEntry("phi-compatibility", r_compat),
        DefectEntry("phi-antisymmetry", r_antisym),
        DefectEntry("eta-xi-duality", r_dual),
    )
    return DefectReport("acs-axioms", entries, tolerance)


def curvature_model_basis(g0, phi0, eta0, xi0):
    """The three lowered basis tensors of the curvature model.

    Index order matches riemann04: entry [i,j,k,l] pairs the curvature
    argument slots (X,Y,Z) = (d_i,d_j,d_k) with the metric slot d_l.
    """
    t1 = np.einsum("jk,il->ijkl", g0, g0) - np.einsum("ik,jl->ijkl", g0, g0)
    low = g0 @ phi0
    t2 = (
        np.einsum("ik,lj->ijkl", low, low)
        - np.einsum("jk,li->ijkl", low, low)
        + 2.0 * np.einsum("ij,lk->ijkl", low, low)
    )
    t3 = (
        np.einsum("i,k,jl->ijkl", eta0, eta0, g0)
        - np.einsum("j,k,il->ijkl", eta0, eta0, g0)
        + np.einsum("ik,j,l->ijkl", g0, eta0, eta0)
        - np.einsum("jk,i,l->ijkl", g0, eta0, eta0)
    )
    return t1, t2, t3


def fit_gssf(model: AmbientModel, p) -> GssfFit:
    """Least-squares (f1, f2, f3) for the curvature model at a point.

    Solves the 3x3 normal equations in the Frobenius inner product over
    all index tuples of the lowered curvature tensor.  The residual is
    normalized by (norm of the curvature + 1) so that flat models report
    an absolute residual.
    """
    pt = [float(x) for x in p]
    arrs = structure_arrays(model, pt)
    curv = curvature_arrays(model.metric.g.evaluator, model.dim, pt)
    r04 = curv["riemann04"]
    basis = curvature_model_basis(arrs["g"], arrs["phi"], arrs["eta"],
                                  arrs["xi"])
    gram = np.array([[float(np.sum(a * b)) for b in basis] for a in basis])
    rhs = np.array([float(np.sum(a * r04)) for a in basis])
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1e12:
        raise FitDegenerateError(
            "normal equations for the curvature model are singular",
            gram,
        )
    f = np.linalg.solve(gram, rhs)
    fitted = f[0] * basis[0] + f[1] * basis[1] + f[2] * basis[2]
    residual = float(
        np.linalg.norm(r04 - fitted) / (np.linalg.norm(r04) + 1.0)
    )
    return GssfFit(float(f[0]), float(f[1]), float(f[2]), residual)


def gssf_identity_suite(
    model: AmbientModel,
    f,
    p,
    tolerance: float = 1e-7,
    fit_tolerance: float = 1e-6,
) -> DefectReport:
    """Residuals of the identity suite implied by the curvature model.

    Covers the covariant derivatives of phi and xi, the Ricci operator,
    Ricci tensor and scalar closed forms, the four Reeb contractions of
    the curvature, and the two Reeb contractions of the concircular
    tensor, each evaluated on the full coordinate frame at p.
    """
    fit = fit_gssf(model, p)
    if fit.residual > fit_tolerance:
        raise NotAGssfError(
            "curvature does not match the three-coefficient model "
            f"(relative residual {fit.residual:.3e})"
        )
    f1, f2, f3 = (float(c) for c in f)
    m = model.dim
    n = (m - 1) // 2
    pt = [float(x) for x in p]
    pool = GenPool()
    arrs = structure_jets(model, pt, pool)
    curv = curvature_arrays(model.metric.g.evaluator, m, pt)
    g0, ginv = curv["g"], curv["ginv"]
    gam = curv["christoffel"]
    r13, ricci, scalar = curv["riemann13"], curv["ricci"], curv["scalar"]
    phi0, xi0, eta0 = arrs["phi"], arrs["xi"], arrs["eta"]
    eye = np.eye(m)
    k = f1 - f3

    nabla_phi = (
        arrs["dphi"]
        + np.einsum("aic,cb->iab", gam, phi0)
        - np.einsum("cib,ac->iab", gam, phi0)
    )
    rhs_phi = k * (
        np.einsum("ib,a->iab", g0, xi0)
        - np.einsum("b,ai->iab", eta0, eye)
    )
    r_nabla_phi = _sup(nabla_phi - rhs_phi)

    nabla_xi = arrs["dxi"] + np.einsum("aib,b->ia", gam, xi0)
    r_nabla_xi = _sup(nabla_xi + k * phi0.T)

    coef_a = 2 * n * f1 + 3 * f2 - f3
    coef_b = 3 * f2 + (2 * n - 1) * f3
    q_op = ginv @ ricci
    r_q = _sup(q_op - coef_a * eye + coef_b * np.outer(xi0, eta0))
    r_s = _sup(ricci - coef_a * g0 + coef_b * np.outer(eta0, eta0))
    r_scalar = abs(
        scalar - (2 * n * (2 * n + 1) * f1 + 6 * n * f2 - 4 * n * f3)
    )

    pair = np.einsum("j,li->lij", eta0, eye) - np.einsum(
        "i,lj->lij", eta0, eye
    )
    r_rxi = _sup(np.einsum("lijk,k->lij", r13, xi0) - k * pair)
    rhs_12 = np.einsum("jk,l->ljk", g0, xi0) - np.einsum(
        "k,lj->ljk", eta0, eye
    )
    r_rfirst = _sup(np.einsum("lijk,i->ljk", r13, xi0) - k * rhs_12)
    rhs_13 = np.einsum("jk,i->ijk", g0, eta0) - np.einsum(
        "ik,j->ijk", g0, eta0
    )
    r_eta_r = _sup(np.einsum("l,lijk->ijk", eta0, r13) - k * rhs_13)
    r_ricci_xi = _sup(ricci @ xi0 - 2 * n * k * eta0)
    r_ricci_xx = abs(float(xi0 @ ricci @ xi0) - 2 * n * k)

    norm = scalar / (2 * n * (2 * n + 1))
    conc = r13 - norm * (
        np.einsum("jk,li->lijk", g0, eye) - np.einsum("ik,lj->lijk", g0, eye)
    )
    coef_c = k - norm
    r_cxi = _sup(np.einsum("lijk,k->lij", conc, xi0) - coef_c * pair)
    r_cfirst = _sup(np.einsum("lijk,i->ljk", conc, xi0) - coef_c * rhs_12)

    entries = (
        DefectEntry("nabla-phi", r_nabla_phi),
        DefectEntry("nabla-xi", r_nabla_xi),
        DefectEntry("ricci-operator", r_q),
        DefectEntry("ricci-form", r_s),
        DefectEntry("scalar-value", r_scalar),
        DefectEntry("curvature-reeb-argument", r_rxi),
        DefectEntry("curvature-reeb-first", r_rfirst),
        DefectEntry("eta-of-curvature", r_eta_r),
        DefectEntry("ricci-reeb", r_ricci_xi),
        DefectEntry("ricci-reeb-reeb", r_ricci_xx),
        DefectEntry("concircular-reeb-argument", r_cxi),
        DefectEntry("concircular-reeb-first", r_cfirst),
    )
    return DefectReport("curvature-model-identities", entries, tolerance)
