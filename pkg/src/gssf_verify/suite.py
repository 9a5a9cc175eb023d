"""Catalog-wide verification suite.

Maps stable check identifiers onto the residual operations of the other
modules, runs them over sampled points, assigns one of four mutually
exclusive statuses per (target, check) pair, and renders deterministic
reports.  Every check record carries a paper_ref citation string (an
equation or theorem number with a verbatim quote fragment) so report
consumers can audit the verified statement against its source text.

Status semantics:

* ``pass``   the measured residual is consistent with the statement
  under its hypotheses (both directions for equivalences).
* ``fail``   the statement is contradicted at sample scale.
* ``hypothesis-fails``   the statement's hypotheses do not hold on this
  target (wrong submanifold class, f1 = f3, excluded scalar curvature,
  or a soliton equation that does not hold); the residual is still
  computed and reported, but a pass would be vacuous or misleading.
* ``skipped``   the check needs objects this target does not carry
  (for example induced shifted-connection objects on a non-invariant
  submanifold); nothing is computed.

Totally geodesic targets are detected numerically, with the same
tolerance the classifier uses for Reeb tangency.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import CatalogKind, catalog_entries
from .contact import check_acs_axioms, fit_gssf, gssf_identity_suite, structure_arrays
from .errors import NotFoundError
from .nilpotent import GenPool, dense
from .riemann import curvature_of_connection
from .soliton import (
    ConnectionKind,
    _domain_reeb_jets,
    _induced_alpha,
    einstein_residual,
    pseudo_eta_einstein_residual,
    soliton_fit,
)
from .ssmc import (
    RecurrenceKind,
    _dense_ssmc_state,
    _ssmc_state,
    alpha_tensor,
    recurrence_residual,
    ssmc_curvature_suite,
    ssmc_induced,
)
from .subman import (
    DefectKind,
    SamplingPlan,
    SubmanifoldKind,
    _dense_state,
    classify,
    defect,
    induced_curvature,
    invariant_identity_suite,
    second_fundamental_form,
)

__all__ = [
    "SuiteConfig",
    "CheckRecord",
    "VerificationReport",
    "REPORT_SCHEMA_VERSION",
    "check_ids",
    "check_info",
    "run_suite",
    "emit_report",
]

REPORT_SCHEMA_VERSION = 1

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_HYP = "hypothesis-fails"
STATUS_SKIP = "skipped"

# Thresholds for the discrete hypotheses (totally geodesic detection,
# f1 != f3, excluded scalar curvature).  These gate status assignment
# only; they are independent of the residual tolerance so that a very
# tight --tol cannot silently reclassify a target.
_TG_TOL = 1e-8
_HYP_TOL = 1e-8


def _sup(arr) -> float:
    a = arr.array if hasattr(arr, "array") else np.asarray(arr, float)
    return float(np.abs(a).max()) if a.size else 0.0


def _fmt(x: float) -> str:
    v = float(x)
    if abs(v) < 1e-12:
        v = 0.0
    return format(v, ".6g")


@dataclass(frozen=True)
class SuiteConfig:
    """One verification run: which targets, which checks, how sampled.

    Empty ``targets`` or ``checks`` mean "all catalog entries" and "all
    applicable checks".  Identical configs produce byte-identical JSON
    reports.
    """

    targets: tuple = ()
    checks: tuple = ()
    points: int = 20
    seed: int = 42
    tolerance: float = 1e-7
    format: str = "text"
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "checks", tuple(self.checks))
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        if self.format not in ("text", "json"):
            raise ValueError("format must be 'text' or 'json'")


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check on one target."""

    check_id: str
    paper_ref: str
    target: str
    samples: int
    max_residual: float
    tolerance: float
    status: str
    notes: str

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "target": self.target,
            "samples": int(self.samples),
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "status": self.status,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class VerificationReport:
    """All records of one run plus the config echo and version stamp."""

    records: tuple
    config: SuiteConfig
    version: str

    @property
    def summary(self) -> dict:
        counts = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_HYP: 0, STATUS_SKIP: 0}
        for rec in self.records:
            counts[rec.status] += 1
        counts["total"] = len(self.records)
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if any(r.status == STATUS_FAIL for r in self.records) else 0

    def as_payload(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "version": self.version,
            "config": {
                "targets": list(self.config.targets),
                "checks": list(self.config.checks),
                "points": self.config.points,
                "seed": self.config.seed,
                "tolerance": self.config.tolerance,
                "format": self.config.format,
                "output": self.config.output,
            },
            "records": [r.as_dict() for r in self.records],
            "summary": self.summary,
        }


# ---------------------------------------------------------------------------
# Per-target evaluation context with memoized intermediates.


class _AmbientContext:
    def __init__(self, name, model, expectations, config: SuiteConfig):
        self.name = name
        self.model = model
        self.expectations = expectations
        self.config = config
        rng = np.random.default_rng(config.seed)
        self.points = rng.uniform(-1.0, 1.0, (config.points, model.dim))
        self._memo = {}

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def fits(self):
        return self.memo(
            "fits", lambda: [fit_gssf(self.model, p) for p in self.points]
        )

    def first_f(self):
        ft = self.fits()[0]
        return (ft.f1, ft.f2, ft.f3)

    def acs_report(self):
        return self.memo(
            "acs",
            lambda: _merge(check_acs_axioms(self.model, p) for p in self.points),
        )

    def identity_report(self):
        def build():
            reports = []
            for ft, p in zip(self.fits(), self.points):
                reports.append(
                    gssf_identity_suite(self.model, (ft.f1, ft.f2, ft.f3), p)
                )
            return _merge(reports)

        return self.memo("identity", build)

    def ssmc_report(self):
        def build():
            reports = []
            for ft, p in zip(self.fits(), self.points):
                reports.append(
                    ssmc_curvature_suite(self.model, (ft.f1, ft.f2, ft.f3), p)
                )
            return _merge(reports)

        return self.memo("ssmc", build)

    def alpha_context(self):
        return self.memo(
            "alpha", lambda: alpha_tensor(self.model, self.points[0])
        )

    def scalar_first(self) -> float:
        def build():
            from .riemann import curvature_arrays

            return float(
                curvature_arrays(
                    self.model.metric.g.evaluator,
                    self.model.dim,
                    self.points[0],
                    GenPool(),
                )["scalar"]
            )

        return self.memo("scalar", build)


class _SubmanifoldContext:
    def __init__(self, name, imm, expectations, config: SuiteConfig):
        self.name = name
        self.imm = imm
        self.expectations = expectations
        self.config = config
        rng = np.random.default_rng(config.seed)
        self.k = imm.map.domain_dim
        self.points = rng.uniform(-1.0, 1.0, (config.points, self.k))
        self.n_sub = (self.k - 1) // 2
        self._memo = {}

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    # -- classification and ambient coefficients

    def classification(self):
        plan = replace(SamplingPlan(), seed=self.config.seed)
        return self.memo("cls", lambda: classify(self.imm, plan))

    @property
    def invariant(self) -> bool:
        return self.classification().kind is SubmanifoldKind.INVARIANT

    def ambient_fit(self):
        def build():
            u0 = [float(x) for x in self.points[0]]
            image = [float(x) for x in self.imm.map.evaluator(u0)]
            return fit_gssf(self.imm.ambient, image)

        return self.memo("ambient_fit", build)

    @property
    def f13(self) -> float:
        ft = self.ambient_fit()
        return float(ft.f1 - ft.f3)

    # -- fundamental forms and defect functionals

    def forms(self):
        return self.memo(
            "forms",
            lambda: [second_fundamental_form(self.imm, u) for u in self.points],
        )

    def tg_sup(self) -> float:
        return self.memo(
            "tg_sup", lambda: max(ff.tg_residual for ff in self.forms())
        )

    @property
    def is_tg(self) -> bool:
        return self.tg_sup() < _TG_TOL

    def defect_sup(self, kind: DefectKind) -> float:
        return self.memo(
            ("defect", kind),
            lambda: max(
                defect(self.imm, u, kind).sup_residual for u in self.points
            ),
        )

    def scalars(self):
        return self.memo(
            "scalars",
            lambda: [
                float(induced_curvature(self.imm, u)["scalar"])
                for u in self.points
            ],
        )

    def invariant_report(self):
        def build():
            ft = self.ambient_fit()
            f = (ft.f1, ft.f2, ft.f3)
            cls = self.classification()
            return _merge(
                invariant_identity_suite(self.imm, u, f, classification=cls)
                for u in self.points
            )

        return self.memo("inv_report", build)

    def ssmc_induced_report(self):
        def build():
            cls = self.classification()
            return _merge(
                ssmc_induced(self.imm, u, classification=cls)
                for u in self.points
            )

        return self.memo("ssmc_induced", build)

    def recurrence(self, kind: RecurrenceKind):
        def build():
            residual = 0.0
            min_norm = False
            for u in self.points:
                sol = recurrence_residual(self.imm, u, kind)
                residual = max(residual, sol.residual)
                min_norm = min_norm or sol.minimum_norm
            return residual, min_norm

        return self.memo(("rec", kind), build)

    # -- soliton layer

    def soliton(self, kind: ConnectionKind):
        return self.memo(
            ("sol", kind),
            lambda: [soliton_fit(self.imm, u, kind) for u in self.points],
        )

    def soliton_sup(self, kind: ConnectionKind) -> float:
        return max(ft.residual for ft in self.soliton(kind))

    def einstein_sup(self) -> float:
        return self.memo(
            "einstein",
            lambda: max(
                einstein_residual(ft)
                for ft in self.soliton(ConnectionKind.LEVI_CIVITA)
            ),
        )

    def pseudo_sup(self) -> float:
        def build():
            fits = self.soliton(ConnectionKind.SEMI_SYMMETRIC_METRIC)
            return max(
                pseudo_eta_einstein_residual(self.imm, u, ft).residual
                for u, ft in zip(self.points, fits)
            )

        return self.memo("pseudo", build)

    def lie_sup(self) -> float:
        return max(
            _sup(ft.lie_derivative)
            for ft in self.soliton(ConnectionKind.LEVI_CIVITA)
        )

    def shifted_reeb_sup(self) -> float:
        def build():
            worst = 0.0
            for u in self.points:
                worst = max(worst, self._shifted_reeb_residual(u))
            return worst

        return self.memo("sol54", build)

    def _shifted_reeb_residual(self, u) -> float:
        imm = self.imm
        k = self.k
        pool = GenPool()
        xi_d, dxi_d = _domain_reeb_jets(imm, u, pool)
        xi_d = np.asarray(xi_d, float).reshape(k)
        dxi_d = np.asarray(dxi_d, float).reshape(k, k)
        st = _dense_state(imm, [float(x) for x in u])
        sts = _dense_ssmc_state(imm, u)
        amb = structure_arrays(imm.ambient, [float(x) for x in st["val"]])
        eta_d = st["jac"] @ sts["eta_amb"]
        phi_dom = np.einsum("sa,ab,ib->si", st["coef"], amb["phi"], st["jac"])
        lhs = dxi_d + np.einsum("sit,t->is", sts["gamma_ind_s"], xi_d)
        rhs = (
            np.eye(k)
            - np.einsum("i,s->is", eta_d, xi_d)
            - self.f13 * phi_dom.T
        )
        return _sup(lhs - rhs)

    def shifted_lie_sup(self) -> float:
        def build():
            worst = 0.0
            fits = self.soliton(ConnectionKind.SEMI_SYMMETRIC_METRIC)
            for u, ft in zip(self.points, fits):
                st = _dense_state(self.imm, [float(x) for x in u])
                eta_d = st["jac"] @ _dense_ssmc_state(self.imm, u)["eta_amb"]
                G = ft.metric.array
                want = 2.0 * (G - np.outer(eta_d, eta_d))
                worst = max(worst, _sup(ft.lie_derivative.array - want))
            return worst

        return self.memo("sol55", build)

    def shifted_ricci_transform(self):
        """Direct Ricci of the induced shifted connection versus the
        transformation formula, in the shifted reading (alpha - g,
        a - dim).  Returns (residual sup, alpha trace at first point)."""

        def build():
            worst = 0.0
            first_a = None
            for u in self.points:
                pool = GenPool()

                def conn_eval(q, pool=pool):
                    return _ssmc_state(self.imm, q, pool)["gamma_ind_s"]

                r13 = dense(
                    curvature_of_connection(conn_eval, u, pool), (self.k,) * 4
                )
                ricci_direct = np.einsum("aajk->jk", r13)
                curv = induced_curvature(self.imm, u)
                sts = _dense_ssmc_state(self.imm, u)
                _, alpha, a_ind = _induced_alpha(
                    self.imm, u, curv, sts["gamma_ind_s"]
                )
                if first_a is None:
                    first_a = a_ind
                G = curv["g"]
                want = (
                    curv["ricci"]
                    - (2 * self.n_sub - 1) * (alpha - G)
                    - (a_ind - self.k) * G
                )
                worst = max(worst, _sup(ricci_direct - want))
            return worst, first_a

        return self.memo("sol56", build)


def _merge(reports):
    merged = None
    for rep in reports:
        merged = rep if merged is None else merged.merged(rep)
    return merged


# ---------------------------------------------------------------------------
# Check runners.  Each returns (max_residual, status, notes, samples).


def _residual_status(residual, tol):
    return STATUS_PASS if residual < tol else STATUS_FAIL


def _run_acs(ctx, tol, label):
    residual = ctx.acs_report().residual(label)
    return residual, _residual_status(residual, tol), "", ctx.config.points


def _run_fit(ctx, tol):
    fits = ctx.fits()
    residual = max(ft.residual for ft in fits)
    pin = ctx.expectations.get("fit_f")
    notes = "fitted f = ({}, {}, {})".format(*[_fmt(v) for v in ctx.first_f()])
    if pin is not None:
        dev = max(
            abs(getattr(ft, name) - want)
            for ft in fits
            for name, want in zip(("f1", "f2", "f3"), pin.value)
        )
        residual = max(residual, dev)
        notes += ", matching the catalog pin"
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _run_identity(ctx, tol, label, notes_fn=None):
    residual = ctx.identity_report().residual(label)
    notes = notes_fn(ctx) if notes_fn else ""
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _conc_notes(ctx):
    ft = ctx.fits()[0]
    n = (ctx.model.dim - 1) // 2
    coef = ft.f1 - ft.f3 - ctx.scalar_first() / (2 * n * (2 * n + 1))
    return "Reeb coefficient f1 - f3 - r/(2n(2n+1)) = " + _fmt(coef)


def _run_ssmc_ambient(ctx, tol, labels, notes_fn=None):
    rep = ctx.ssmc_report()
    residual = max(rep.residual(label) for label in labels)
    notes = notes_fn(ctx) if notes_fn else ""
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _alpha_notes(ctx):
    return "alpha trace a = " + _fmt(ctx.alpha_context().a)


def _scalar_notes(ctx):
    a = ctx.alpha_context().a
    n = (ctx.model.dim - 1) // 2
    r_t = ctx.scalar_first() - 4 * n * a
    return "alpha trace a = {}, transformed scalar curvature = {}".format(
        _fmt(a), _fmt(r_t)
    )


def _reeb_reading_notes(ctx):
    return "uses the zero-offset Reeb derivative reading"


def _run_class(ctx, tol):
    cls = ctx.classification()
    pin = ctx.expectations.get("classification")
    residual = max(cls.xi_tangency_residual, cls.cos_theta_stddev)
    cos_pin = ctx.expectations.get("cos_theta")
    if cos_pin is not None:
        residual = max(residual, abs(cls.cos_theta - cos_pin.value))
    notes = "classified {} with cos theta = {}".format(
        cls.kind.value, _fmt(cls.cos_theta)
    )
    plan = replace(SamplingPlan(), seed=ctx.config.seed)
    if pin is not None:
        notes += ", expected " + str(pin.value)
        if cls.kind.value != pin.value:
            return residual, STATUS_FAIL, notes, plan.points
    return residual, _residual_status(residual, tol), notes, plan.points


def _run_h(ctx, tol):
    residual = 0.0
    h_max = 0.0
    hnorm_max = 0.0
    for u, ff in zip(ctx.points, ctx.forms()):
        h = ff.h.array
        ops = ff.shape_ops.array
        G = _dense_state(ctx.imm, [float(x) for x in u])["G"]
        residual = max(residual, _sup(h - h.transpose(1, 0, 2)))
        residual = max(residual, _sup(np.einsum("msi,sj->ijm", ops, G) - h))
        h_max = max(h_max, ff.tg_residual)
        hnorm_max = max(hnorm_max, float(np.linalg.norm(ff.H.array)))
    pin = ctx.expectations.get("h_sup")
    if pin is not None:
        residual = max(residual, abs(h_max - pin.value))
    pin = ctx.expectations.get("mean_curvature_norm")
    if pin is not None:
        residual = max(residual, abs(hnorm_max - pin.value))
    notes = "sup |h| = {}, |H| = {}".format(_fmt(h_max), _fmt(hnorm_max))
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _skip_invariant(ctx):
    notes = "needs an invariant target; classified {}".format(
        ctx.classification().kind.value
    )
    return 0.0, STATUS_SKIP, notes, 0


def _run_prop21(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual = ctx.invariant_report().sup_residual
    return residual, _residual_status(residual, tol), "", ctx.config.points


_CONCIRCULAR_KINDS = (
    DefectKind.CONCIRCULAR_SEMIPARALLEL,
    DefectKind.CONCIRCULAR_TWO_SEMIPARALLEL,
)


def _scalar_hits_excluded(ctx) -> bool:
    crit = 2 * ctx.n_sub * (2 * ctx.n_sub + 1) * ctx.f13
    return any(abs(r - crit) < _HYP_TOL for r in ctx.scalars())


def _run_defect(ctx, tol, kind):
    residual = ctx.defect_sup(kind)
    samples = ctx.config.points
    if ctx.is_tg:
        if residual < tol:
            return residual, STATUS_PASS, "totally geodesic; the defect vanishes", samples
        return residual, STATUS_FAIL, "totally geodesic yet the defect persists", samples
    if not ctx.invariant:
        notes = "scope is invariant targets; classified {}; residual reported".format(
            ctx.classification().kind.value
        )
        return residual, STATUS_HYP, notes, samples
    if abs(ctx.f13) < _HYP_TOL:
        notes = "needs f1 != f3; fitted f1 - f3 = " + _fmt(ctx.f13)
        return residual, STATUS_HYP, notes, samples
    if kind in _CONCIRCULAR_KINDS and _scalar_hits_excluded(ctx):
        notes = "induced scalar curvature meets the excluded value 2n(2n+1)(f1 - f3)"
        return residual, STATUS_HYP, notes, samples
    if residual >= tol:
        notes = "not totally geodesic and the defect stays nonzero, as the equivalence requires"
        return residual, STATUS_PASS, notes, samples
    notes = "not totally geodesic yet the defect vanishes"
    return residual, STATUS_FAIL, notes, samples


def _run_ssmc_induced(ctx, tol, labels):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    rep = ctx.ssmc_induced_report()
    residual = max(rep.residual(label) for label in labels)
    return residual, _residual_status(residual, tol), "", ctx.config.points


def _run_recurrence(ctx, tol, kind):
    residual, min_norm = ctx.recurrence(kind)
    samples = ctx.config.points
    suffix = "; underdetermined fit solved at minimum norm" if min_norm else ""
    if ctx.is_tg:
        if residual < tol:
            notes = "totally geodesic; recurrence holds with the zero form" + suffix
            return residual, STATUS_PASS, notes, samples
        return residual, STATUS_FAIL, "totally geodesic yet the relation fails", samples
    if not ctx.invariant:
        notes = (
            "scope is invariant targets; classified {}; best-fit residual reported".format(
                ctx.classification().kind.value
            )
            + suffix
        )
        return residual, STATUS_HYP, notes, samples
    if residual >= tol:
        notes = "not totally geodesic and no recurrence form fits, as the equivalence requires"
        return residual, STATUS_PASS, notes, samples
    notes = "not totally geodesic yet a recurrence form fits exactly" + suffix
    return residual, STATUS_FAIL, notes, samples


def _run_soliton_equation(ctx, tol, kind):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual = ctx.soliton_sup(kind)
    lam = ctx.soliton(kind)[0].lam
    samples = ctx.config.points
    if residual < tol:
        notes = "lambda = {}; the soliton equation holds at sample scale".format(
            _fmt(lam)
        )
        return residual, STATUS_PASS, notes, samples
    notes = "the soliton equation does not hold at sample scale; best-fit lambda = {}".format(
        _fmt(lam)
    )
    return residual, STATUS_HYP, notes, samples


def _run_killing(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual = ctx.lie_sup()
    return residual, _residual_status(residual, tol), "", ctx.config.points


def _run_shifted_reeb(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual = ctx.shifted_reeb_sup()
    notes = "fitted f1 - f3 = " + _fmt(ctx.f13)
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _run_shifted_lie(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual = ctx.shifted_lie_sup()
    return residual, _residual_status(residual, tol), "", ctx.config.points


def _run_shifted_ricci(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    residual, a_ind = ctx.shifted_ricci_transform()
    notes = "alpha trace a = {}; shifted-trace reading".format(_fmt(a_ind))
    return residual, _residual_status(residual, tol), notes, ctx.config.points


def _run_equiv_defects(ctx, tol):
    residual = max(ctx.defect_sup(kind) for kind in DefectKind)
    samples = ctx.config.points
    if not ctx.invariant:
        notes = "scope is invariant targets; classified {}".format(
            ctx.classification().kind.value
        )
        return residual, STATUS_HYP, notes, samples
    if abs(ctx.f13) < _HYP_TOL:
        notes = "needs f1 != f3; fitted f1 - f3 = " + _fmt(ctx.f13)
        return residual, STATUS_HYP, notes, samples
    if _scalar_hits_excluded(ctx):
        notes = "induced scalar curvature meets the excluded value 2n(2n+1)(f1 - f3)"
        return residual, STATUS_HYP, notes, samples
    vanish = all(ctx.defect_sup(kind) < tol for kind in DefectKind)
    if ctx.is_tg and vanish:
        return residual, STATUS_PASS, "totally geodesic and all five defects vanish", samples
    if not ctx.is_tg and not any(ctx.defect_sup(k) < tol for k in DefectKind):
        notes = "not totally geodesic and every defect stays nonzero"
        return residual, STATUS_PASS, notes, samples
    return residual, STATUS_FAIL, "the equivalence chain is contradicted", samples


def _run_equiv_recurrence(ctx, tol):
    residual = max(ctx.recurrence(kind)[0] for kind in RecurrenceKind)
    samples = ctx.config.points
    if not ctx.invariant:
        notes = "scope is invariant targets; classified {}".format(
            ctx.classification().kind.value
        )
        return residual, STATUS_HYP, notes, samples
    witness = "(f1 - f3)^2 + 1 = " + _fmt(ctx.f13 ** 2 + 1)
    vanish = all(ctx.recurrence(kind)[0] < tol for kind in RecurrenceKind)
    if ctx.is_tg and vanish:
        notes = "totally geodesic and all three recurrence residuals vanish; " + witness
        return residual, STATUS_PASS, notes, samples
    if not ctx.is_tg and not any(
        ctx.recurrence(kind)[0] < tol for kind in RecurrenceKind
    ):
        notes = "not totally geodesic and no recurrence form fits; " + witness
        return residual, STATUS_PASS, notes, samples
    return residual, STATUS_FAIL, "the equivalence chain is contradicted", samples


def _run_equiv_soliton(ctx, tol):
    if not ctx.invariant:
        return _skip_invariant(ctx)
    samples = ctx.config.points
    lc_holds = ctx.soliton_sup(ConnectionKind.LEVI_CIVITA) < tol
    sm_holds = ctx.soliton_sup(ConnectionKind.SEMI_SYMMETRIC_METRIC) < tol
    einstein = ctx.einstein_sup()
    pseudo = ctx.pseudo_sup()
    if not lc_holds and not sm_holds:
        notes = "no soliton at sample scale for either connection; conclusion residuals reported"
        return max(einstein, pseudo), STATUS_HYP, notes, samples
    residual = 0.0
    legs = []
    ok = True
    if lc_holds:
        residual = max(residual, einstein)
        ok = ok and einstein < tol
        legs.append("Einstein residual = " + _fmt(einstein))
    if sm_holds:
        residual = max(residual, pseudo)
        ok = ok and pseudo < tol
        legs.append("pseudo eta-Einstein splitting residual = " + _fmt(pseudo))
    notes = "; ".join(legs)
    return residual, STATUS_PASS if ok else STATUS_FAIL, notes, samples


# ---------------------------------------------------------------------------
# Registry.


@dataclass(frozen=True)
class _CheckSpec:
    paper_ref: str
    scope: CatalogKind
    runner: object = field(compare=False)


def _spec(paper_ref, scope, runner):
    return _CheckSpec(paper_ref=paper_ref, scope=scope, runner=runner)


_AMB = CatalogKind.AMBIENT
_SUB = CatalogKind.SUBMANIFOLD

_ACS_REFS = {
    "acs.2.1": ('Eq (2.1): "phi^2(X) = -X+eta(X)xi, phi xi=0"', "phi-square"),
    "acs.2.2": (
        'Eq (2.2): "eta(xi) = 1, g(X,xi) = eta(X), eta(phi X) = 0"',
        "reeb-pairing",
    ),
    "acs.2.3": (
        'Eq (2.3): "g(phi X,phi Y) = g(X,Y)-eta(X)eta(Y)"',
        "phi-compatibility",
    ),
    "acs.2.4": ('Eq (2.4): "g(phi X,Y) = -g(X,phi Y)"', "phi-antisymmetry"),
    "acs.2.5": (
        'Eq (2.5): "(nabla_X eta)(Y) = g(nabla_X xi,Y)"',
        "eta-xi-duality",
    ),
}

_IDENTITY_REFS = {
    "gssf.id.2.6": (
        'Eq (2.6): "(nabla_X phi)(Y) = (f_1-f_3)[g(X,Y)xi - eta(Y)X]"',
        "nabla-phi",
        None,
    ),
    "gssf.id.2.7": (
        'Eq (2.7): "nabla_X xi = -(f_1-f_3) phi X"',
        "nabla-xi",
        None,
    ),
    "gssf.id.2.8": (
        'Eq (2.8): "QX = (2nf_1+3f_2-f_3)X-{3f_2+(2n-1)f_3}eta(X)xi"',
        "ricci-operator",
        None,
    ),
    "gssf.id.2.9": (
        'Eq (2.9): "S(X,Y) = (2nf_1+3f_2-f_3)g(X,Y)-{3f_2+(2n-1)f_3}eta(X)eta(Y)"',
        "ricci-form",
        None,
    ),
    "gssf.id.2.10": (
        'Eq (2.10): "r = 2n(2n+1)f_1 + 6nf_2 - 4nf_3"',
        "scalar-value",
        None,
    ),
    "gssf.id.2.11": (
        'Eq (2.11): "R(X,Y)xi = (f_1 - f_3){eta(Y)X - eta(X)Y}"',
        "curvature-reeb-argument",
        None,
    ),
    "gssf.id.2.12": (
        'Eq (2.12): "R(xi,X)Y = (f_1 - f_3){g(X,Y)xi - eta(Y)X}"',
        "curvature-reeb-first",
        None,
    ),
    "gssf.id.2.13": (
        'Eq (2.13): "eta(R(X,Y)Z) = (f_1 - f_3){g(Y,Z)eta(X) - g(X,Z)eta(Y)}"',
        "eta-of-curvature",
        None,
    ),
    "gssf.id.2.14": (
        'Eq (2.14): "S(X,xi) = 2n(f_1 - f_3)eta(X)"',
        "ricci-reeb",
        None,
    ),
    "gssf.id.2.15": (
        'Eq (2.15): "S(xi,xi) = 2n(f_1 - f_3)"',
        "ricci-reeb-reeb",
        None,
    ),
    "conc.2.26": (
        'Eq (2.26): "C(X,Y)xi = [f_1-f_3-r/(2n(2n+1))][eta(Y)X-eta(X)Y]"',
        "concircular-reeb-argument",
        _conc_notes,
    ),
    "conc.2.27": (
        'Eq (2.27): "C(xi,X)Y = [f_1-f_3-r/(2n(2n+1))][g(X,Y)xi-eta(Y)X]"',
        "concircular-reeb-first",
        _conc_notes,
    ),
}

_SSMC_AMBIENT_REFS = {
    "ssmc.torsion": (
        'Sect. 2: "tau(X,Y)=eta(Y)X-eta(X)Y" with Eq (2.41)',
        ("torsion",),
        None,
    ),
    "ssmc.metricity": (
        'Sect. 2: semi-symmetric metric connection satisfies "nabla g=0"',
        ("metricity",),
        None,
    ),
    "ssmc.2.42": (
        'Eq (2.42): "R(X,Y)Z-alpha(Y,Z)X+alpha(X,Z)Y + g(Y,Z)LX +g(X,Z)LY"',
        ("curvature-transformation",),
        None,
    ),
    "ssmc.2.43": (
        'Eq (2.43): "alpha(X,Y)=(nabla_X eta)(Y)+1/2 g(X,Y)" and "g(LX,Y)=alpha(X,Y)"',
        ("eta-derivative-shift", "alpha-raising"),
        _alpha_notes,
    ),
    "ssmc.2.44": (
        'Eq (2.44): "S(X,Y)=S(X,Y)-(2n-1)alpha(X,Y)-ag(X,Y)"',
        ("ricci-contraction",),
        None,
    ),
    "ssmc.2.45": (
        'Eq (2.45): "r=r-4na" where "a=trace(alpha)"',
        ("scalar-contraction",),
        _scalar_notes,
    ),
    "ssmc.2.46": (
        'Eq (2.46): "R(X,Y)xi = (f_1-f_3)[eta(Y)X-eta(X)Y] - eta(Y)LX+eta(X)LY"',
        ("curvature-reeb-argument",),
        _reeb_reading_notes,
    ),
    "ssmc.2.47": (
        'Eq (2.47): "R(xi,X)Y = (f_1-f_3)[g(X,Y)xi-eta(Y)X] - alpha(X,Y)xi+eta(Y)LX"',
        ("curvature-reeb-first",),
        _reeb_reading_notes,
    ),
    "ssmc.2.48": (
        'Eq (2.48): "S(X,xi) = [2n(f_1-f_3)-a]eta(X)"',
        ("ricci-reeb",),
        _reeb_reading_notes,
    ),
}

_DEFECT_REFS = {
    "defect.parallel": (
        'Theorem 3.1: "totally geodesic if and only if its second fundamental form is parallel" (f_1 != f_3)',
        DefectKind.PARALLEL,
    ),
    "defect.semi": (
        'Corollary 3.3: "M is totally geodesic if and only if M is semiparallel" (f_1 != f_3)',
        DefectKind.SEMIPARALLEL,
    ),
    "defect.2semi": (
        'Corollary 3.6: "M is totally geodesic if and only if M is 2-semiparallel" (f_1 != f_3)',
        DefectKind.TWO_SEMIPARALLEL,
    ),
    "defect.conc-semi": (
        'Theorem 3.2: "totally geodesic if and only if M is concircularly semiparallel" (f_1 != f_3, r != 2n(2n+1)(f_1-f_3))',
        DefectKind.CONCIRCULAR_SEMIPARALLEL,
    ),
    "defect.conc-2semi": (
        'Theorem 3.3: "totally geodesic if and only if M is concircularly 2-semiparallel" (f_1 != f_3, r != 2n(2n+1)(f_1-f_3))',
        DefectKind.CONCIRCULAR_TWO_SEMIPARALLEL,
    ),
}

_REC_REFS = {
    "ssmc.rec.4.7": (
        'Eq (4.7): "(nabla_X h)(Y,Z)=D(X)h(Y,Z)"; Theorem 4.3: recurrent iff totally geodesic',
        RecurrenceKind.RECURRENT,
    ),
    "ssmc.rec.4.7a": (
        'Eq (4.7a): "(nabla^2 h)(Z,W,X,Y)=psi(X,Y)h(Z,W)"; Theorem 4.4: 2-recurrent iff totally geodesic',
        RecurrenceKind.TWO_RECURRENT,
    ),
    "ssmc.rec.4.11": (
        'Eq (4.11): "psi(X,Y)h(Z,W)+rho(X)(nabla_Y h)(Z,W)"; Corollary 4.4: generalized 2-recurrent iff totally geodesic',
        RecurrenceKind.GENERALIZED_TWO_RECURRENT,
    ),
}


def _build_registry():
    reg = {}
    for cid, (ref, label) in _ACS_REFS.items():
        reg[cid] = _spec(
            ref, _AMB, lambda ctx, tol, label=label: _run_acs(ctx, tol, label)
        )
    reg["gssf.fit"] = _spec(
        'Eq (1.3): "R(X,Y)Z = f_1{g(Y,Z)X-g(X,Z)Y} + f_2{...} + f_3{...}"',
        _AMB,
        _run_fit,
    )
    for cid, (ref, label, notes_fn) in _IDENTITY_REFS.items():
        reg[cid] = _spec(
            ref,
            _AMB,
            lambda ctx, tol, label=label, nf=notes_fn: _run_identity(
                ctx, tol, label, nf
            ),
        )
    reg["sub.class"] = _spec(
        'Examples 2.1-2.4: "invariant", "anti-invariant", "slant angle theta = arccos(2/3)", "arccos(1/3)"',
        _SUB,
        _run_class,
    )
    reg["sub.h"] = _spec(
        'Eqs (2.16), (2.18), (2.29a): "g(h(X,Y),V) = g(A_VX,Y)"',
        _SUB,
        _run_h,
    )
    reg["sub.prop2.1"] = _spec(
        'Proposition 2.1 with Eqs (2.18), (2.30)-(2.36): "h(X,phi Y)= phi h(X,Y)"',
        _SUB,
        _run_prop21,
    )
    for cid, (ref, kind) in _DEFECT_REFS.items():
        reg[cid] = _spec(
            ref,
            _SUB,
            lambda ctx, tol, kind=kind: _run_defect(ctx, tol, kind),
        )
    for cid, (ref, labels, notes_fn) in _SSMC_AMBIENT_REFS.items():
        reg[cid] = _spec(
            ref,
            _AMB,
            lambda ctx, tol, labels=labels, nf=notes_fn: _run_ssmc_ambient(
                ctx, tol, labels, nf
            ),
        )
    reg["ssmc.4.3"] = _spec(
        'Eq (4.3): "nabla_X Y=nabla_X Y+eta(Y)X-g(X,Y)xi"; Theorem 4.1(i): M admits the connection',
        _SUB,
        lambda ctx, tol: _run_ssmc_induced(ctx, tol, ("induced-connection-shift",)),
    )
    reg["ssmc.4.4"] = _spec(
        'Eq (4.4): "h(X,Y)=h(X,Y)"; Theorems 4.1(ii), 4.2: the second fundamental forms and "H=H" agree',
        _SUB,
        lambda ctx, tol: _run_ssmc_induced(
            ctx,
            tol,
            (
                "second-form-match",
                "mean-curvature-match",
                "normal-connection-match",
            ),
        ),
    )
    for cid, (ref, kind) in _REC_REFS.items():
        reg[cid] = _spec(
            ref,
            _SUB,
            lambda ctx, tol, kind=kind: _run_recurrence(ctx, tol, kind),
        )
    reg["sol.5.1"] = _spec(
        'Eq (5.1): "(Lie_xi g)(Y,Z)+2S(Y,Z)+2lambda g(Y,Z)=0"',
        _SUB,
        lambda ctx, tol: _run_soliton_equation(
            ctx, tol, ConnectionKind.LEVI_CIVITA
        ),
    )
    reg["sol.5.2"] = _spec(
        'Eq (5.2): "(Lie_xi g)(Y,Z) = g(nabla_Y xi,Z)+g(Y,nabla_Z xi) = 0"',
        _SUB,
        _run_killing,
    )
    reg["sol.5.3"] = _spec(
        'Eq (5.3): "(Lie_xi g)(Y,Z)+2S(Y,Z)+2lambda g(Y,Z)=0" for the semi-symmetric metric connection',
        _SUB,
        lambda ctx, tol: _run_soliton_equation(
            ctx, tol, ConnectionKind.SEMI_SYMMETRIC_METRIC
        ),
    )
    reg["sol.5.4"] = _spec(
        'Eq (5.4): "nabla_X xi = X-eta(X)xi-(f_1-f_3)phi X"',
        _SUB,
        _run_shifted_reeb,
    )
    reg["sol.5.5"] = _spec(
        'Eq (5.5): "(Lie_xi g)(Y,Z) = 2[g(Y,Z)-eta(Y)eta(Z)]"',
        _SUB,
        _run_shifted_lie,
    )
    reg["sol.5.6"] = _spec(
        'Eq (5.6): "S(Y,Z)=S(Y,Z)-(2n-1)alpha(X,Y)-ag(X,Y)"',
        _SUB,
        _run_shifted_ricci,
    )
    reg["equiv.6.1"] = _spec(
        'Theorem 6.1: "(i) M is totally geodesic, (ii) M is parallel with f_1 != f_3, ... (vi) concircularly 2-semiparallel"',
        _SUB,
        _run_equiv_defects,
    )
    reg["equiv.6.2"] = _spec(
        'Theorem 6.2: "such that (f_1-f_3)^2+1 != 0 ... (ii) h is recurrent ... (iv) generalized 2-recurrent"',
        _SUB,
        _run_equiv_recurrence,
    )
    reg["equiv.6.3"] = _spec(
        'Theorem 6.3: "Riemannian -> Einstein; semi-symmetric metric -> pseudo eta-Einstein"',
        _SUB,
        _run_equiv_soliton,
    )
    return reg


_REGISTRY = _build_registry()


def check_ids() -> tuple:
    """All check identifiers, in registry order."""
    return tuple(_REGISTRY)


def check_info() -> tuple:
    """(check_id, paper_ref, scope) triples for catalog listings."""
    return tuple(
        (cid, spec.paper_ref, spec.scope.value)
        for cid, spec in _REGISTRY.items()
    )


# ---------------------------------------------------------------------------
# Orchestration.


def _entries_by_name():
    return {entry.name: entry for entry in catalog_entries()}


def _resolve_targets(config: SuiteConfig) -> tuple:
    known = _entries_by_name()
    if not config.targets:
        return tuple(sorted(known))
    for name in config.targets:
        if name not in known:
            raise NotFoundError(name, sorted(known))
    return tuple(sorted(set(config.targets)))


def _resolve_checks(config: SuiteConfig) -> tuple:
    if not config.checks:
        return tuple(_REGISTRY)
    for cid in config.checks:
        if cid not in _REGISTRY:
            raise NotFoundError(cid, list(_REGISTRY))
    requested = set(config.checks)
    return tuple(cid for cid in _REGISTRY if cid in requested)


def _context_for(entry, config: SuiteConfig):
    if entry.kind is CatalogKind.AMBIENT:
        return _AmbientContext(entry.name, entry.payload, entry.expectations, config)
    return _SubmanifoldContext(entry.name, entry.payload, entry.expectations, config)


def _records_for_target(config: SuiteConfig, name: str, checks: tuple) -> list:
    entry = _entries_by_name()[name]
    ctx = _context_for(entry, config)
    records = []
    for cid in checks:
        spec = _REGISTRY[cid]
        if spec.scope is not entry.kind:
            continue
        residual, status, notes, samples = spec.runner(ctx, config.tolerance)
        records.append(
            CheckRecord(
                check_id=cid,
                paper_ref=spec.paper_ref,
                target=name,
                samples=samples,
                max_residual=float(residual),
                tolerance=config.tolerance,
                status=status,
                notes=notes,
            )
        )
    return records


def _records_task(args):
    return _records_for_target(*args)


def run_suite(config: SuiteConfig, parallel: bool = False) -> VerificationReport:
    """Run every requested check on every requested target.

    With ``parallel`` the targets fan out over worker processes; the
    merged report is byte-identical to the serial one because each
    target's evaluation is self-contained and records are sorted.
    """
    targets = _resolve_targets(config)
    checks = _resolve_checks(config)
    echoed = replace(config, targets=targets, checks=checks)
    if parallel and len(targets) > 1:
        tasks = [(echoed, name, checks) for name in targets]
        with ProcessPoolExecutor(max_workers=min(4, len(targets))) as pool:
            chunks = list(pool.map(_records_task, tasks))
        records = [rec for chunk in chunks for rec in chunk]
    else:
        records = []
        for name in targets:
            records.extend(_records_for_target(echoed, name, checks))
    records.sort(key=lambda r: (r.target, r.check_id))
    from . import __version__

    return VerificationReport(
        records=tuple(records), config=echoed, version=__version__
    )


# ---------------------------------------------------------------------------
# Emission.


def emit_report(report: VerificationReport, format: str | None = None) -> bytes:
    """Render a report as UTF-8 bytes, JSON or fixed-width text.

    JSON output sorts keys and relies on shortest round-trip float
    repr, so equal reports serialize to equal bytes.
    """
    fmt = format or report.config.format
    if fmt == "json":
        text = json.dumps(
            report.as_payload(), sort_keys=True, indent=2, ensure_ascii=False
        )
        return (text + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError("format must be 'text' or 'json'")
    return _render_text(report).encode("utf-8")


_TEXT_COLUMNS = (
    ("check", 18),
    ("target", 19),
    ("status", 17),
    ("residual", 13),
    ("tolerance", 10),
    ("samples", 8),
)


def _render_text(report: VerificationReport) -> str:
    lines = []
    header = "".join(name.ljust(width) for name, width in _TEXT_COLUMNS) + "notes"
    lines.append(header)
    lines.append("-" * len(header))
    for rec in report.records:
        cells = (
            rec.check_id.ljust(18),
            rec.target.ljust(19),
            rec.status.ljust(17),
            format(rec.max_residual, ".3e").ljust(13),
            format(rec.tolerance, ".1e").ljust(10),
            str(rec.samples).ljust(8),
        )
        lines.append("".join(cells) + rec.notes)
    summary = report.summary
    lines.append("")
    lines.append(
        "pass {}  fail {}  hypothesis-fails {}  skipped {}  total {}".format(
            summary[STATUS_PASS],
            summary[STATUS_FAIL],
            summary[STATUS_HYP],
            summary[STATUS_SKIP],
            summary["total"],
        )
    )
    cfg = report.config
    lines.append(
        "points {}  seed {}  tolerance {}  version {}".format(
            cfg.points, cfg.seed, format(cfg.tolerance, "g"), report.version
        )
    )
    return "\n".join(lines) + "\n"
