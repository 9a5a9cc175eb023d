"""Dense tensor components, smooth maps, and exact jet evaluation.

A ``MultiArray`` carries tensor components at a point as a flat row-major
list plus a shape.  A ``SmoothMap`` is a chart-to-chart rule whose component
functions are written against polymorphic arithmetic so they evaluate on
plain floats and on truncated-polynomial numbers alike; ``eval_jet``
exploits that to return exact derivative tables up to order four.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import (
    DegenerateFrameError,
    NumericDomainError,
    ShapeError,
    UnsupportedOrderError,
)
from .nilpotent import GenPool, NilArray, field_jets

MAX_ORDER = 4


@dataclass(frozen=True)
class MultiArray:
    """Dense multi-index real array in row-major layout."""

    shape: Tuple[int, ...]
    components: Tuple[float, ...]

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        comps = tuple(float(c) for c in self.components)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "components", comps)
        if any(s <= 0 for s in shape):
            raise ShapeError(f"non-positive extent in shape {shape}")
        if len(comps) != math.prod(shape):
            raise ShapeError(
                f"{len(comps)} components do not fill shape {shape}"
            )
        if not np.all(np.isfinite(comps)):
            raise NumericDomainError("non-finite tensor component")

    @classmethod
    def from_array(cls, arr) -> "MultiArray":
        a = np.asarray(arr, dtype=float)
        return cls(tuple(a.shape), tuple(a.reshape(-1).tolist()))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.components, dtype=float).reshape(self.shape)

    @property
    def rank(self) -> int:
        return len(self.shape)


@dataclass(frozen=True)
class SmoothMap:
    """A chart-defined map with derivative access.

    ``evaluator`` takes a list of scalar-like coordinates and returns the
    value as a flat list, an ndarray, or an engine array; its component
    expressions must be built from arithmetic and the ``j*`` math helpers so
    that evaluation on truncated-polynomial numbers yields exact
    derivatives.  ``codomain_shape`` defaults to a flat vector.
    """

    domain_dim: int
    codomain_dim: int
    evaluator: Callable = field(repr=False)
    name: str = ""
    codomain_shape: Optional[Tuple[int, ...]] = None

    @property
    def value_shape(self) -> Tuple[int, ...]:
        if self.codomain_shape is not None:
            return tuple(self.codomain_shape)
        return (self.codomain_dim,)


@dataclass(frozen=True)
class Jet:
    """Value and mixed partial derivatives of a smooth map at a point.

    Partials are keyed by non-decreasing coordinate multi-indices; Schwarz
    symmetry makes that canonical form lossless.
    """

    value: MultiArray
    partials: Dict[Tuple[int, ...], MultiArray]

    def partial(self, *index) -> MultiArray:
        key = tuple(sorted(int(i) for i in index))
        if not key:
            return self.value
        return self.partials[key]

    @property
    def order(self) -> int:
        return max((len(k) for k in self.partials), default=0)


def eval_jet(smap: SmoothMap, point, order: int) -> Jet:
    """Evaluate a smooth map and its derivative tables at a point."""
    if order > MAX_ORDER or order < 0:
        raise UnsupportedOrderError(
            f"derivative order {order} outside supported range 0..{MAX_ORDER}"
        )
    pt = [float(c) for c in point]
    if len(pt) != smap.domain_dim:
        raise ShapeError(
            f"point has {len(pt)} coordinates, map domain is "
            f"{smap.domain_dim}"
        )
    pool = GenPool()
    tables = field_jets(smap.evaluator, pt, order, pool)
    vshape = smap.value_shape
    k = smap.domain_dim
    full = []
    for r, t in enumerate(tables):
        arr = np.broadcast_to(np.asarray(t, dtype=float), (k,) * r + vshape)
        if not np.all(np.isfinite(arr)):
            raise NumericDomainError(
                f"non-finite value in order-{r} derivative of "
                f"{smap.name or 'map'} at {pt}"
            )
        full.append(arr)
    partials: Dict[Tuple[int, ...], MultiArray] = {}
    for r in range(1, order + 1):
        for multi in combinations_with_replacement(range(k), r):
            partials[multi] = MultiArray.from_array(full[r][multi])
    return Jet(value=MultiArray.from_array(full[0]), partials=partials)


def contract(a: MultiArray, i: int, j: int) -> MultiArray:
    """Sum over a pair of equal-extent axes."""
    arr = a.array
    rank = arr.ndim
    if not (0 <= i < rank and 0 <= j < rank) or i == j:
        raise ShapeError(
            f"cannot contract axes ({i}, {j}) of a rank-{rank} array"
        )
    if arr.shape[i] != arr.shape[j]:
        raise ShapeError(
            f"axis extents {arr.shape[i]} and {arr.shape[j]} differ"
        )
    return MultiArray.from_array(np.trace(arr, axis1=i, axis2=j))


def orthonormal_frames(metric, tangent_vectors, residual_tol: float = 1e-10):
    """Orthonormalize tangent vectors and complete to a full frame.

    Gram-Schmidt runs over ``tangent_vectors`` in input order with inner
    products taken against ``metric``; the normal complement is built by
    processing chart basis vectors in ascending coordinate order and
    discarding those whose projection residual norm falls below
    ``residual_tol``.
    """
    g = metric.array if isinstance(metric, MultiArray) else np.asarray(
        metric, dtype=float
    )
    m = g.shape[0]
    if g.shape != (m, m):
        raise ShapeError(f"metric shape {g.shape} is not square")

    def ip(u, v):
        return float(u @ g @ v)

    frame = []

    def residual(v):
        w = np.asarray(v, dtype=float)
        for e in frame:
            w = w - ip(e, w) * e
        return w

    def orthonormalize(v):
        # A second projection pass restores orthogonality lost to
        # cancellation when v is nearly inside the current span.
        w = residual(v)
        nrm = math.sqrt(max(ip(w, w), 0.0))
        if nrm < residual_tol:
            return None
        w = residual(w / nrm)
        nrm = math.sqrt(max(ip(w, w), 0.0))
        if nrm < residual_tol:
            return None
        return w / nrm

    tangent_onb = []
    for v in tangent_vectors:
        e = orthonormalize(np.asarray(v, dtype=float))
        if e is None:
            raise DegenerateFrameError(
                "tangent vectors are linearly dependent"
            )
        frame.append(e)
        tangent_onb.append(e)
    normal_onb = []
    for i in range(m):
        if len(frame) == m:
            break
        e = orthonormalize(np.eye(m)[i])
        if e is None:
            continue
        frame.append(e)
        normal_onb.append(e)
    if len(frame) < m:
        raise DegenerateFrameError(
            "could not complete an orthonormal frame; metric may be "
            "degenerate"
        )
    return tangent_onb, normal_onb
