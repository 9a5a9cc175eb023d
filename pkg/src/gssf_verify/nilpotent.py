"""Forward-mode derivative engine on arrays of truncated polynomials.

The scalar ring is R[e_0, e_1, ...] with every generator squaring to zero.
A ``NilArray`` stores, for each subset of generators (encoded as a bitmask),
the numpy array of coefficients of the corresponding monomial.  Because each
generator is nilpotent of order two, the coefficient of e_{b1}...e_{br} in
f(x + sum_a e_a v_a) is exactly the mixed directional derivative
D^r f(v_{b1}, ..., v_{br}); seeding one generator per differentiation
direction turns a single evaluation into a full table of mixed partials.

Coefficient arrays carry ``ndir`` leading direction axes, one per allocated
generator bit, followed by ``vrank`` value axes.  Axis b enumerates the
coordinate direction that generator bit b was seeded with, so the
coefficient of a subset S is constant (a singleton axis) along every
direction axis outside S.  Generators are allocated and released in stack
order through a ``GenPool``, which keeps the axis-to-bit correspondence
stable across nested differentiation.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateMetricError, NumericDomainError

__all__ = [
    "GenPool",
    "NilArray",
    "nil_stack",
    "ncontract",
    "nunary",
    "nil_matinv",
    "field_jets",
    "jsin",
    "jcos",
    "jsqrt",
    "jexp",
    "jlog",
    "real_part",
]


class GenPool:
    """Stack allocator for generator bits.

    ``alloc(r)`` hands out the next ``r`` bit positions; ``free`` must be
    called with exactly the bits of the most recent live allocation.
    """

    def __init__(self):
        self.live = 0

    def alloc(self, r):
        base = self.live
        self.live += r
        return list(range(base, base + r))

    def free(self, bits):
        expect = list(range(self.live - len(bits), self.live))
        if list(bits) != expect:
            raise RuntimeError(
                "generator bits released out of stack order: "
                f"got {list(bits)}, expected {expect}"
            )
        self.live -= len(bits)


class NilArray:
    """Array over the truncated polynomial ring."""

    __slots__ = ("parts", "ndir", "vrank")

    # defer all numpy binary ops to the reflected methods below
    __array_ufunc__ = None

    def __init__(self, parts, ndir, vrank):
        self.parts = parts
        self.ndir = ndir
        self.vrank = vrank

    @staticmethod
    def lift(x):
        """Wrap a plain scalar or ndarray as a constant element."""
        if isinstance(x, NilArray):
            return x
        a = np.asarray(x, dtype=float)
        return NilArray({0: a}, 0, a.ndim)

    @property
    def real(self):
        """Coefficient of the empty subset with direction axes dropped."""
        a = self.parts.get(0)
        if a is None:
            return np.zeros((1,) * self.vrank)
        return a.reshape(a.shape[self.ndir:])

    def vshape(self):
        """Logical value shape: broadcast of all coefficient value shapes."""
        shapes = [a.shape[self.ndir:] for a in self.parts.values()]
        return np.broadcast_shapes(*shapes) if shapes else (1,) * self.vrank

    # -- alignment ------------------------------------------------------

    def _expand(self, ndir, vrank):
        """Insert singleton axes to reach the requested ranks.

        New direction axes go after the existing direction prefix (newer
        generators, which this value is constant along); new value axes go
        before the existing value axes, matching numpy's right-aligned
        broadcasting.
        """
        if ndir == self.ndir and vrank == self.vrank:
            return self.parts
        dpad = (1,) * (ndir - self.ndir)
        vpad = (1,) * (vrank - self.vrank)
        out = {}
        for m, a in self.parts.items():
            out[m] = a.reshape(
                a.shape[: self.ndir] + dpad + vpad + a.shape[self.ndir:]
            )
        return out

    def _align(self, other):
        other = NilArray.lift(other)
        ndir = max(self.ndir, other.ndir)
        vrank = max(self.vrank, other.vrank)
        return self._expand(ndir, vrank), other._expand(ndir, vrank), ndir, vrank

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        pa, pb, ndir, vrank = self._align(other)
        out = dict(pa)
        for m, b in pb.items():
            cur = out.get(m)
            out[m] = b if cur is None else cur + b
        return NilArray(out, ndir, vrank)

    __radd__ = __add__

    def __neg__(self):
        return NilArray(
            {m: -a for m, a in self.parts.items()}, self.ndir, self.vrank
        )

    def __sub__(self, other):
        return self + (-NilArray.lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pa, pb, ndir, vrank = self._align(other)
        out = {}
        for ma, a in pa.items():
            for mb, b in pb.items():
                if ma & mb:
                    continue
                m = ma | mb
                prod = a * b
                cur = out.get(m)
                out[m] = prod if cur is None else cur + prod
        return NilArray(out, ndir, vrank)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, NilArray):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = NilArray.lift(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- analytic scalar functions ---------------------------------------

    def _nilpotent(self):
        return NilArray(
            {m: a for m, a in self.parts.items() if m != 0},
            self.ndir,
            self.vrank,
        )

    def _liftcoef(self, c):
        """Shape a Taylor coefficient so it broadcasts against parts."""
        c = np.asarray(c, dtype=float)
        pad = self.ndir + self.vrank - c.ndim
        return NilArray(
            {0: c.reshape((1,) * pad + c.shape)}, self.ndir, self.vrank
        )

    def _taylor(self, coef):
        """sum_r coef(r) * (self - real)^r; terminates by nilpotency.

        ``coef(r)`` returns the r-th Taylor coefficient f^(r)(x0)/r!.
        """
        c0 = np.asarray(coef(0), dtype=float)
        if not np.all(np.isfinite(c0)):
            raise NumericDomainError(
                "analytic function evaluated outside its domain"
            )
        out = self._liftcoef(c0)
        nil = self._nilpotent()
        power = nil
        r = 1
        while power.parts:
            cr = np.asarray(coef(r), dtype=float)
            if not np.all(np.isfinite(cr)):
                raise NumericDomainError(
                    "analytic function derivative is non-finite"
                )
            out = out + power * self._liftcoef(cr)
            power = power * nil
            r += 1
        return out

    def reciprocal(self):
        x0 = self.parts.get(0)
        if x0 is None:
            raise NumericDomainError("division by zero in jet arithmetic")
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / x0
        if not np.all(np.isfinite(inv)):
            raise NumericDomainError("division by zero in jet arithmetic")
        cache = {0: inv}

        def coef(r):
            # r-th Taylor coefficient of 1/x: (-1)^r x0^-(r+1)
            if r not in cache:
                cache[r] = -cache[r - 1] * inv
            return cache[r]

        return self._taylor(coef)

    def _powseries(self, p):
        x0 = self.parts.get(0)
        if x0 is None:
            raise NumericDomainError(
                "fractional power of a value with zero real part"
            )
        with np.errstate(invalid="ignore", divide="ignore"):
            c0 = np.power(x0, p)
            invx0 = 1.0 / x0
        cache = {0: c0}

        def coef(r):
            # binomial series: c_r = c_{r-1} (p - r + 1) / (r x0)
            if r not in cache:
                cache[r] = coef(r - 1) * ((p - (r - 1)) / r) * invx0
            return cache[r]

        return self._taylor(coef)

    def sqrt(self):
        return self._powseries(0.5)

    def _trig(self, table):
        fact = [1.0]

        def coef(r):
            while len(fact) <= r:
                fact.append(fact[-1] * len(fact))
            return table[r % 4] / fact[r]

        return self._taylor(coef)

    def sin(self):
        x0 = self.parts.get(0, np.zeros((1,) * (self.ndir + self.vrank)))
        return self._trig((np.sin(x0), np.cos(x0), -np.sin(x0), -np.cos(x0)))

    def cos(self):
        x0 = self.parts.get(0, np.zeros((1,) * (self.ndir + self.vrank)))
        return self._trig((np.cos(x0), -np.sin(x0), -np.cos(x0), np.sin(x0)))

    def exp(self):
        x0 = self.parts.get(0, np.zeros((1,) * (self.ndir + self.vrank)))
        e0 = np.exp(x0)
        fact = [1.0]

        def coef(r):
            while len(fact) <= r:
                fact.append(fact[-1] * len(fact))
            return e0 / fact[r]

        return self._taylor(coef)

    def log(self):
        x0 = self.parts.get(0)
        if x0 is None:
            raise NumericDomainError("log of a value with zero real part")
        with np.errstate(invalid="ignore", divide="ignore"):
            c0 = np.log(x0)
            invx0 = 1.0 / x0
        cache = {0: c0, 1: invx0}

        def coef(r):
            # c_r = (-1)^(r-1) x0^-r / r
            if r not in cache:
                cache[r] = -cache[r - 1] * invx0 * ((r - 1) / r)
            return cache[r]

        return self._taylor(coef)

    # -- value-axis indexing ----------------------------------------------

    def vindex(self, idx):
        """Index the first value axis, honoring broadcast singletons."""
        out = {}
        for m, a in self.parts.items():
            j = idx if a.shape[self.ndir] > 1 else 0
            out[m] = a[(slice(None),) * self.ndir + (j,)]
        return NilArray(out, self.ndir, self.vrank - 1)


def real_part(x):
    if isinstance(x, NilArray):
        return x.real
    return np.asarray(x, dtype=float)


def dense(x, shape):
    """Real part of x materialized to the given logical shape."""
    return np.array(np.broadcast_to(real_part(x), shape))


def nil_stack(items):
    """Stack elements along a new leading value axis.

    Accepts a mix of NilArray and plain scalars or arrays.
    """
    elems = [NilArray.lift(x) for x in items]
    ndir = max(e.ndir for e in elems)
    vrank = max(e.vrank for e in elems)
    parts_list = [e._expand(ndir, vrank) for e in elems]
    vshapes = [a.shape[ndir:] for p in parts_list for a in p.values()]
    vcommon = np.broadcast_shapes(*vshapes) if vshapes else ()
    masks = set()
    for p in parts_list:
        masks.update(p.keys())
    out = {}
    for m in sorted(masks):
        dshapes = [p[m].shape[:ndir] for p in parts_list if m in p]
        target = np.broadcast_shapes(*dshapes) + vcommon
        layers = []
        for p in parts_list:
            a = p.get(m)
            layers.append(
                np.zeros(target) if a is None else np.broadcast_to(a, target)
            )
        out[m] = np.stack(layers, axis=ndir)
    if not out:
        out[0] = np.zeros((1,) * ndir + (len(elems),) + vcommon)
    return NilArray(out, ndir, vrank + 1)


def _labeled_sizes(sizes, parts, letters, ndir):
    for a in parts.values():
        for i, ch in enumerate(letters):
            sizes[ch] = max(sizes.get(ch, 1), a.shape[ndir + i])


def _broadcast_labeled(a, letters, sizes, ndir):
    want = a.shape[:ndir] + tuple(sizes[ch] for ch in letters)
    return np.broadcast_to(a, want)


def ncontract(spec, x, y):
    """Binary einsum over value axes; direction axes broadcast alongside.

    ``spec`` names only value axes, e.g. ``"ij,jk->ik"``.  Inputs may be
    NilArray, ndarray, or scalar; value ranks must match the spec.
    """
    x = NilArray.lift(x)
    y = NilArray.lift(y)
    lhs, rhs = spec.split("->")
    sx, sy = lhs.split(",")
    if x.vrank != len(sx) or y.vrank != len(sy):
        raise ValueError(
            f"ncontract spec {spec!r} does not match value ranks "
            f"{x.vrank}, {y.vrank}"
        )
    ndir = max(x.ndir, y.ndir)
    px = x._expand(ndir, x.vrank)
    py = y._expand(ndir, y.vrank)
    sizes = {}
    _labeled_sizes(sizes, px, sx, ndir)
    _labeled_sizes(sizes, py, sy, ndir)
    espec = "..." + sx + ",..." + sy + "->..." + rhs
    out = {}
    for ma, a in px.items():
        af = _broadcast_labeled(a, sx, sizes, ndir)
        for mb, b in py.items():
            if ma & mb:
                continue
            bf = _broadcast_labeled(b, sy, sizes, ndir)
            prod = np.einsum(espec, af, bf)
            m = ma | mb
            cur = out.get(m)
            out[m] = prod if cur is None else cur + prod
    return NilArray(out, ndir, len(rhs))


def nunary(spec, x):
    """Unary einsum over value axes (trace, transpose, diagonal)."""
    x = NilArray.lift(x)
    lhs, rhs = spec.split("->")
    if x.vrank != len(lhs):
        raise ValueError(
            f"nunary spec {spec!r} does not match value rank {x.vrank}"
        )
    sizes = {}
    _labeled_sizes(sizes, x.parts, lhs, x.ndir)
    espec = "..." + lhs + "->..." + rhs
    out = {}
    for m, a in x.parts.items():
        out[m] = np.einsum(espec, _broadcast_labeled(a, lhs, sizes, x.ndir))
    return NilArray(out, x.ndir, len(rhs))


def nil_matinv(a, size, cond_limit=1e12):
    """Invert a square matrix over the truncated polynomial ring.

    Inverts the real part with plain linear algebra, then corrects by the
    geometric series, which terminates because the remainder is nilpotent.
    """
    a = NilArray.lift(a)
    if a.vrank != 2:
        raise ValueError("nil_matinv expects a matrix-valued input")
    a0 = np.broadcast_to(a.real, (size, size))
    if not np.all(np.isfinite(a0)):
        raise NumericDomainError("matrix entries are non-finite")
    if np.linalg.cond(a0) > cond_limit:
        raise DegenerateMetricError(
            "matrix is singular or too ill-conditioned to invert"
        )
    a0inv = np.linalg.inv(a0)
    nil = a._nilpotent()
    step = ncontract("ij,jk->ik", NilArray.lift(-a0inv), nil)
    x = NilArray.lift(a0inv)
    term = x
    while True:
        term = ncontract("ij,jk->ik", step, term)
        if not term.parts:
            break
        x = x + term
    return x


def field_jets(fn, point, order, pool):
    """Derivative tables of a field along its input coordinates.

    ``fn`` maps a list of k scalar-like inputs to a value: a NilArray, an
    ndarray, a scalar, or a flat list of these.  Returns ``tables[r]`` for
    r = 0..order, the r-th derivative table with r leading direction axes
    of size k (symmetric in them), as a plain ndarray when the inputs carry
    no live generators and as a NilArray over the surviving generators
    otherwise.
    """
    k = len(point)
    n0 = pool.live
    bits = pool.alloc(order)
    seeded = []
    for i in range(k):
        x = NilArray.lift(point[i])
        for b in bits:
            onehot = np.zeros((1,) * b + (k,))
            onehot[(0,) * b + (i,)] = 1.0
            x = x + NilArray({1 << b: onehot}, b + 1, 0)
        seeded.append(x)
    out = fn(seeded)
    if isinstance(out, (list, tuple)):
        out = nil_stack(out)
    else:
        out = NilArray.lift(out)
    vrank = out.vrank
    vcommon = out.vshape()
    parts = out._expand(n0 + order, vrank)
    low = (1 << n0) - 1
    tables = []
    for r in range(order + 1):
        want = (1 << r) - 1
        sub = {}
        for m, a in parts.items():
            if (m >> n0) != want:
                continue
            for ax in range(n0 + r, n0 + order):
                if a.shape[ax] != 1:
                    raise RuntimeError(
                        "coefficient varies along a generator outside "
                        "its subset; internal invariant broken"
                    )
            a2 = a.reshape(a.shape[: n0 + r] + a.shape[n0 + order:])
            tgt = a2.shape[:n0] + (k,) * r + a2.shape[n0 + r:]
            a2 = np.broadcast_to(a2, tgt)
            outer = m & low
            cur = sub.get(outer)
            sub[outer] = a2 if cur is None else cur + a2
        if n0 == 0:
            arr = sub.get(0)
            if arr is None:
                arr = np.zeros((k,) * r + vcommon)
            tables.append(np.asarray(arr))
        else:
            tables.append(NilArray(sub, n0, r + vrank))
    pool.free(bits)
    return tables


def jsin(x):
    return x.sin() if isinstance(x, NilArray) else np.sin(x)


def jcos(x):
    return x.cos() if isinstance(x, NilArray) else np.cos(x)


def jsqrt(x):
    return x.sqrt() if isinstance(x, NilArray) else np.sqrt(x)


def jexp(x):
    return x.exp() if isinstance(x, NilArray) else np.exp(x)


def jlog(x):
    return x.log() if isinstance(x, NilArray) else np.log(x)
