"""Levi-Civita connection, curvature, and Lie derivatives of chart metrics.

Index conventions, fixed once for the whole package:

* ``christoffel[k, i, j]`` is the coefficient of d_k in the covariant
  derivative of d_j along d_i.
* ``riemann13[l, i, j, k]`` is the d_l component of R(d_i, d_j) d_k with
  R(X, Y) = [grad_X, grad_Y] - grad_[X,Y].
* ``riemann04[i, j, k, l] = g(R(d_i, d_j) d_k, d_l)``.
* ``ricci[j, k]`` is the trace of X -> R(X, d_j) d_k, which makes the
  scalar curvature of the round unit 2-sphere equal +2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError, DimensionError
from .nilpotent import (
    GenPool,
    NilArray,
    dense,
    field_jets,
    ncontract,
    nil_matinv,
    nunary,
)
from .tensorjet import MultiArray, SmoothMap


@dataclass(frozen=True)
class MetricField:
    """A chart-defined Riemannian metric."""

    dim: int
    g: SmoothMap

    def matrix(self, p):
        """Metric matrix at a chart point, validated."""
        arr = dense(self.g.evaluator([float(x) for x in p]),
                    (self.dim, self.dim))
        _validate_metric(arr)
        return arr


@dataclass(frozen=True)
class CurvatureBundle:
    christoffel: MultiArray
    riemann13: MultiArray
    riemann04: MultiArray
    ricci: MultiArray
    scalar: float


def _validate_metric(g0):
    if not np.array_equal(g0, g0.T):
        raise DegenerateMetricError("metric matrix is not symmetric")
    try:
        np.linalg.cholesky(g0)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetricError(
            "metric matrix is not positive definite"
        ) from exc


def christoffel_in_chart(metric_eval, dim, coords, pool):
    """Connection coefficients Gamma^k_ij at scalar-like coordinates.

    Differentiable: coordinates may carry live generators, and the result
    rides along as a NilArray.
    """
    g0, dg = field_jets(metric_eval, list(coords), 1, pool)
    g0 = NilArray.lift(g0)
    dg = NilArray.lift(dg)
    ginv = nil_matinv(g0, dim)
    lowered = (
        dg + nunary("jil->ijl", dg) - nunary("lij->ijl", dg)
    )
    return 0.5 * ncontract("kl,ijl->kij", ginv, lowered)


def curvature_of_connection(conn_eval, coords, pool):
    """Curvature R^l_ijk of any chart connection field Gamma^k_ij(p).

    Valid for non-metric connections as well, since coordinate fields
    commute.  Differentiable in the same sense as christoffel_in_chart.
    """
    gam, dgam = field_jets(conn_eval, list(coords), 1, pool)
    gam = NilArray.lift(gam)
    dgam = NilArray.lift(dgam)
    r13 = (
        nunary("iljk->lijk", dgam)
        - nunary("jlik->lijk", dgam)
        + ncontract("lis,sjk->lijk", gam, gam)
        - ncontract("ljs,sik->lijk", gam, gam)
    )
    return r13


def levi_civita_curvature(metric_eval, dim, coords, pool):
    return curvature_of_connection(
        lambda q: christoffel_in_chart(metric_eval, dim, q, pool),
        coords,
        pool,
    )


def curvature_arrays(metric_eval, dim, p, pool=None):
    """Plain-number curvature data of a metric at a chart point.

    A caller whose ``metric_eval`` takes derivatives internally must pass
    the generator pool that evaluator draws from, so nested jets stay
    stack-disciplined.
    """
    pt = [float(x) for x in p]
    pool = GenPool() if pool is None else pool
    g0 = dense(metric_eval(pt), (dim, dim))
    _validate_metric(g0)
    ginv = np.linalg.inv(g0)
    gam = dense(
        christoffel_in_chart(metric_eval, dim, pt, pool), (dim,) * 3
    )
    r13 = dense(
        levi_civita_curvature(metric_eval, dim, pt, pool), (dim,) * 4
    )
    r04 = np.einsum("la,aijk->ijkl", g0, r13)
    ricci = np.einsum("aajk->jk", r13)
    scalar = float(np.einsum("jk,jk->", ginv, ricci))
    return {
        "g": g0,
        "ginv": ginv,
        "christoffel": gam,
        "riemann13": r13,
        "riemann04": r04,
        "ricci": ricci,
        "scalar": scalar,
    }


def christoffel(metric: MetricField, p) -> MultiArray:
    """Levi-Civita connection coefficients at a point."""
    pt = [float(x) for x in p]
    pool = GenPool()
    g0 = dense(metric.g.evaluator(pt), (metric.dim, metric.dim))
    _validate_metric(g0)
    gam = christoffel_in_chart(metric.g.evaluator, metric.dim, pt, pool)
    return MultiArray.from_array(dense(gam, (metric.dim,) * 3))


def riemann_tensor(metric: MetricField, p) -> CurvatureBundle:
    """Full curvature bundle of a metric at a point."""
    data = curvature_arrays(metric.g.evaluator, metric.dim, p)
    return CurvatureBundle(
        christoffel=MultiArray.from_array(data["christoffel"]),
        riemann13=MultiArray.from_array(data["riemann13"]),
        riemann04=MultiArray.from_array(data["riemann04"]),
        ricci=MultiArray.from_array(data["ricci"]),
        scalar=data["scalar"],
    )


def ricci_scalar(metric: MetricField, p):
    """Ricci tensor and scalar curvature at a point."""
    data = curvature_arrays(metric.g.evaluator, metric.dim, p)
    return MultiArray.from_array(data["ricci"]), data["scalar"]


def concircular(metric: MetricField, p) -> MultiArray:
    """Concircular curvature tensor in (1,3) form, same layout as
    riemann13.

    The normalization divides the scalar curvature by (dim-1)*dim, which
    presumes an odd-dimensional space written as 2n+1; even dimensions are
    rejected rather than silently renormalized.  The scalar curvature is
    evaluated pointwise at p.
    """
    if metric.dim % 2 == 0:
        raise DimensionError(
            f"concircular tensor needs odd dimension, got {metric.dim}"
        )
    data = curvature_arrays(metric.g.evaluator, metric.dim, p)
    m = metric.dim
    coef = data["scalar"] / ((m - 1) * m)
    g0 = data["g"]
    eye = np.eye(m)
    basis = np.einsum("jk,li->lijk", g0, eye) - np.einsum(
        "ik,lj->lijk", g0, eye
    )
    return MultiArray.from_array(data["riemann13"] - coef * basis)


def lie_derivative_metric(metric: MetricField, vfield: SmoothMap, p):
    """(Lie_V g)(d_i, d_j) as a symmetric matrix at a point."""
    pt = [float(x) for x in p]
    pool = GenPool()
    m = metric.dim
    g0 = dense(metric.g.evaluator(pt), (m, m))
    _validate_metric(g0)
    gam = dense(christoffel_in_chart(metric.g.evaluator, m, pt, pool),
                (m,) * 3)
    v0, dv = field_jets(vfield.evaluator, pt, 1, pool)
    v0 = dense(v0, (m,))
    dv = dense(dv, (m, m))
    covd = dv + np.einsum("aib,b->ia", gam, v0)
    lie = np.einsum("ia,aj->ij", covd, g0)
    return MultiArray.from_array(lie + lie.T)
