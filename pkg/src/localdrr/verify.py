"""Named, seeded verification suites producing structured reports.

Each suite draws its inputs from ``random.Random(f"{suite}:{seed}:{index}")``,
so a case depends only on its index and reports are reproducible.  Every
comparison is exact; a check on truncated series passes only when both sides
agree on all commonly known coefficients and that common precision reaches a
stated minimum.

The group-level identity between the determinant cocycle and the cup-product
combination holds up to a coboundary, so no suite compares the two pointwise
on the group.  It is established from three ingredients instead: the
Lie-level identity (``lie_identity``), triviality on the positive subgroup
(``gplus_trivial``) and the cocycle conditions (``cocycle_laws``).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import laurent as lr
from .ccsymbol import cc, cc_by_reduction, cc_exact, cc_explog
from .cocycles import (
    LAMBDA,
    LGM,
    OMEGA,
    ONE_COCYCLES,
    delta,
    eval_one_cocycle,
    named_two_cocycle,
    one_cocycle,
    perturbed,
    universal_pullback,
)
from .detext import (
    DET_D,
    block_window,
    closed_form,
    d_window,
    det_cocycle_report,
    lie_extract,
    lie_trace,
    reach_bound,
    solve_direct_sum,
)
from .groupg import (
    GroupElem,
    LieElem,
    g_act,
    g_inv,
    g_mul,
    lie_bracket,
    membership,
    random_group_elem,
    random_lie_elem,
    random_series,
)
from .laurent import LaurentSeries, working_precision
from .nilring import QQ, RingSpec, exp_nil, invert_unit, log_one_plus_nil, random_elem
from .ringmat import mat_mul, minor

GROUP_RING = RingSpec(("e1", "e2"), (3, 2))
SMALL_RING = RingSpec(("e",), (2,))
LIE_RING = RingSpec(("e1", "e2"), (2, 2))


@dataclass
class Failure:
    index: int
    check: str
    inputs: Dict[str, str]
    lhs: str
    rhs: str

    def as_json(self) -> dict:
        return {"index": self.index, "inputs": {"check": self.check, **self.inputs}, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class SuiteReport:
    suite: str
    ring: str
    seed: int
    cases: int
    failures: List[Failure] = field(default_factory=list)
    millis: int = 0
    checks: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_json(self, timing: bool = True) -> dict:
        return {
            "suite": self.suite,
            "ring": self.ring,
            "seed": self.seed,
            "cases": self.cases,
            "failures": [f.as_json() for f in self.failures],
            "millis": self.millis if timing else 0,
        }

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} FAILED"
        return f"{self.suite}: {status} ({self.cases} cases, {self.checks} checks, {self.millis} ms, ring {self.ring})"


class Case:
    """Collects the checks of one case."""

    def __init__(self, report: SuiteReport, index: int, inputs: Dict[str, object]):
        self.report = report
        self.index = index
        self.inputs = {k: str(v) for k, v in inputs.items()}

    def add_input(self, **kw):
        self.inputs.update({k: str(v) for k, v in kw.items()})

    def check(self, label: str, lhs, rhs, ok: Optional[bool] = None) -> bool:
        if ok is None:
            ok = lhs == rhs
        self.report.checks += 1
        if not ok:
            self.report.failures.append(Failure(self.index, label, dict(self.inputs), str(lhs), str(rhs)))
        return ok

    def series(self, label: str, lhs: LaurentSeries, rhs: LaurentSeries, min_prec: int = 1) -> bool:
        """Agreement on all common coefficients, which must reach ``min_prec``.

        Too little common precision is not a failure: the runner repeats the
        case at a higher working precision.
        """
        common = min(lhs.prec, rhs.prec)
        if common < min_prec:
            raise lr.PrecisionError(f"{label}: only known below t^{common}", required=None)
        return self.check(label, lhs, rhs, lhs.agrees(rhs))


def _rng(suite: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{suite}:{seed}:{index}")


def _elem(ring, rng, shape="G0") -> GroupElem:
    return random_group_elem(ring, shape, seed=rng.randrange(1 << 30))


def _unit_series(ring, rng, lo=-1, hi=3, shape="general") -> LaurentSeries:
    return random_group_elem(ring, shape, seed=rng.randrange(1 << 30), neg_depth=-lo, pos_degree=hi).h


def _lie(ring, rng) -> LieElem:
    return random_lie_elem(ring, seed=rng.randrange(1 << 30))


# -- suites ---------------------------------------------------------------------------


def suite_nilring_laws(case: Case, ring: RingSpec, rng: random.Random):
    a = random_elem(ring, rng, unit=True)
    n1 = random_elem(ring, rng, nilpotent=True)
    n2 = random_elem(ring, rng, nilpotent=True)
    case.add_input(a=a, n1=n1, n2=n2)
    case.check("invert_unit(a) * a = 1", invert_unit(a) * a, ring.one)
    case.check("exp(n1 + n2) = exp(n1) exp(n2)", exp_nil(n1 + n2), exp_nil(n1) * exp_nil(n2))
    case.check("exp(log(1 + n1)) = 1 + n1", exp_nil(log_one_plus_nil(n1)), ring.one + n1)
    idx = n1.nil_index()
    case.check("nil_index(n1) <= dim", idx, ring.dim, idx <= ring.dim)
    case.check("unit iff nonzero constant term", a.is_unit() and n1.is_nilpotent(), True)


def suite_laurent_laws(case: Case, ring: RingSpec, rng: random.Random):
    h = _unit_series(ring, rng)
    g = _elem(ring, rng).phi
    k = _elem(ring, rng).phi
    f = random_series(ring, rng, -2, 3, nilpotent_below=0)
    case.add_input(h=h, g=g, k=k, f=f)
    one, t = LaurentSeries.one(ring), LaurentSeries.t(ring)
    case.series("invert(h) * h = 1", lr.invert(h) * h, one, min_prec=8)
    psi = lr.comp_inverse(g)
    case.series("g o comp_inverse(g) = t", lr.compose(g, psi), t, min_prec=6)
    case.series("comp_inverse(g) o g = t", lr.compose(psi, g), t, min_prec=6)
    case.series("(f o g) o k = f o (g o k)", lr.compose(lr.compose(f, g), k), lr.compose(f, lr.compose(g, k)),
                min_prec=4)
    f2 = random_series(ring, rng, -3, 3)
    exact_form = f * lr.derivative(f2) + f2 * lr.derivative(f)
    case.check("res(f dg + g df) = 0", lr.residue(exact_form), ring.zero)
    fac = lr.factorize_unit(h)
    case.series("factorize_unit recomposes", fac.recompose(), h, min_prec=8)
    case.check("v_minus in V_minus", lr.in_v_minus(fac.v_minus), True)
    case.check("v_plus in V_plus", lr.in_v_plus(fac.v_plus), True)
    plus, minus = lr.factorize_aut(g)
    case.series("factorize_aut recomposes", lr.compose(minus, plus), g, min_prec=6)
    case.check("phi_plus in Aut_plus", lr.is_aut_plus(plus), True)
    case.check("phi_minus in Aut_minus", lr.is_aut_minus(minus), True)
    plus2, minus2 = lr.factorize_aut(g, start=LaurentSeries.monomial(ring, 1, g[1]))
    case.series("factorize_aut unique (phi_plus)", plus2, plus, min_prec=6)
    case.check("factorize_aut unique (phi_minus)", minus2, minus)


def suite_group_laws(case: Case, ring: RingSpec, rng: random.Random):
    x, y, z = (_elem(ring, rng, "general") for _ in range(3))
    f, k = random_series(ring, rng, -2, 3), random_series(ring, rng, -1, 2)
    case.add_input(x=x, y=y, z=z, f=f, k=k)
    lhs, rhs = g_mul(g_mul(x, y), z), g_mul(x, g_mul(y, z))
    case.series("(xy)z = x(yz): h", lhs.h, rhs.h, min_prec=6)
    case.series("(xy)z = x(yz): phi", lhs.phi, rhs.phi, min_prec=6)
    e = g_mul(x, g_inv(x))
    case.series("x x^-1 = 1: h", e.h, LaurentSeries.one(ring), min_prec=6)
    case.series("x x^-1 = 1: phi", e.phi, LaurentSeries.t(ring), min_prec=6)
    case.series("(xy).f = x.(y.f)", g_act(g_mul(x, y), f), g_act(x, g_act(y, f)), min_prec=4)
    phi = x.phi
    case.series("(fk) o phi = (f o phi)(k o phi)", lr.compose(f * k, phi),
                lr.compose(f, phi) * lr.compose(k, phi), min_prec=4)
    u, v, w = _lie(ring, rng), _lie(ring, rng), _lie(ring, rng)
    case.add_input(u=u, v=v, w=w)
    uv, vu = lie_bracket(u, v), lie_bracket(v, u)
    case.check("[u,v] = -[v,u]", uv, vu.scale(-1), uv.s == -vu.s and uv.r == -vu.r)
    jac = lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) + lie_bracket(w, lie_bracket(u, v))
    case.check("Jacobi identity", jac, 0, jac.s.is_zero() and jac.r.is_zero())
    _commutant_witnesses(case, ring)


def _commutant_witnesses(case: Case, ring: RingSpec):
    d_dt = LieElem.vector_field(LaurentSeries.one(ring))
    t_fn = LieElem.function(LaurentSeries.t(ring))
    t_dt = LieElem.vector_field(LaurentSeries.t(ring))
    b1 = lie_bracket(d_dt, t_fn)
    case.check("[d/dt, t] = 1", b1, "(s = 1; r = 0)", b1.s.is_one() and b1.r.is_zero())
    b2 = lie_bracket(d_dt, t_dt)
    case.check("[d/dt, t d/dt] = d/dt", b2, "(s = 0; r = 1)", b2.s.is_zero() and b2.r.is_one())


def suite_cc_axioms(case: Case, ring: RingSpec, rng: random.Random):
    t = LaurentSeries.t(ring)
    f, f2, g = (_unit_series(ring, rng) for _ in range(3))
    a = random_elem(ring, rng, unit=True)
    phi = _elem(ring, rng).phi
    case.add_input(f=f, f2=f2, g=g, a=a, phi=phi)
    case.check("CC(t, t) = -1", cc(t, t), ring.const(-1))
    case.check("CC(a, g) = a^nu(g)", cc(LaurentSeries.const(ring, a), g), a ** lr.order_nu(g))
    fg = cc(f, g)
    case.check("CC(f f2, g) = CC(f, g) CC(f2, g)", cc(f * f2, g), fg * cc(f2, g))
    case.check("CC(f, g) CC(g, f) = 1", fg * cc(g, f), ring.one)
    p1 = LaurentSeries.const(ring, random_elem(ring, rng, unit=True)) * _unit_series(ring, rng, 0, 3, "Gplus")
    p2 = LaurentSeries.const(ring, random_elem(ring, rng, unit=True)) * _unit_series(ring, rng, 0, 3, "Gplus")
    case.add_input(p1=p1, p2=p2)
    case.check("CC = 1 on (Gm x V_plus)^2", cc(p1, p2), ring.one)
    m1, m2 = (_minus_unit(ring, rng) for _ in range(2))
    case.add_input(m1=m1, m2=m2)
    case.check("CC = 1 on (Gm x V_minus)^2", cc(m1, m2), ring.one)

    def invariance():
        return cc(lr.compose(f, phi), lr.compose(g, phi))

    from .cocycles import adaptive

    case.check("CC(f o phi, g o phi) = CC(f, g)", adaptive(invariance), fg)
    case.check("product formula = exp/log reduction", cc_by_reduction(f, g), fg)


def _minus_unit(ring: RingSpec, rng: random.Random) -> LaurentSeries:
    coeffs = {0: random_elem(ring, rng, unit=True)}
    for d in range(-3, 0):
        if rng.random() < 0.7:
            coeffs[d] = random_elem(ring, rng, nilpotent=True)
    return LaurentSeries(ring, coeffs)


def suite_consistency(case: Case, ring: RingSpec, rng: random.Random):
    # cc_exact against cc_explog on V_plus V_minus
    f = _minus_unit(ring, rng)
    f = f.scale(invert_unit(f[0])) * _unit_series(ring, rng, 0, 3, "Gplus")
    f = f.scale(invert_unit(lr.factorize_unit(f, prec=1).a0))
    g = _unit_series(ring, rng)
    case.add_input(f=f, g=g)
    case.check("cc_exact = cc_explog", cc_exact(f, g), cc_explog(f, g))
    # trace formula against generic extraction over the rationals
    z, w = _lie(QQ, rng), _lie(QQ, rng)
    case.add_input(z=z, w=w)
    case.check("lie_trace = lie_extract(D)", lie_trace(z, w), lie_extract(DET_D, z, w))
    # block identity d_xy = c_x b_y + d_x d_y
    x, y = _elem(ring, rng), _elem(ring, rng)
    case.add_input(x=x, y=y)
    lhs, rhs = _block_identity(x, y, L=6)
    case.check("d_xy = c_x b_y + d_x d_y", lhs, rhs)
    _commutant_witnesses(case, ring)


def _block_identity(x: GroupElem, y: GroupElem, L: int):
    ring = x.ring
    Bx, By = reach_bound(x), reach_bound(y)
    S = L + Bx + 1
    K = max(By, 1)
    dd = minor(mat_mul(d_window(x, S), d_window(y, S), ring), L)
    cb = mat_mul(_c_rows(x, L, K), _b_cols(y, L, K), ring)
    rhs = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(cb, dd)]

    def product():
        xy = g_mul(x, y, prec=lr.default_precision())
        return d_window(xy, L)

    from .cocycles import adaptive

    lhs = adaptive(product, start=3 * S + 8)
    return lhs, rhs


def _c_rows(x: GroupElem, L: int, K: int):
    from .detext import _window_matrix

    return _window_matrix(x, tuple(range(L)), tuple(range(-1, -K - 1, -1)))


def _b_cols(y: GroupElem, L: int, K: int):
    from .detext import _window_matrix

    return _window_matrix(y, tuple(range(-1, -K - 1, -1)), tuple(range(L)))


def suite_cocycle_laws(case: Case, ring: RingSpec, rng: random.Random, state: dict):
    g1, g2, g3 = (_elem(ring, rng) for _ in range(3))
    case.add_input(g1=g1, g2=g2, g3=g3)
    for tag in ONE_COCYCLES:
        v = delta(1, one_cocycle(tag), (g1, g2), LGM)
        case.series(f"delta_1 {tag} = 1", v, LaurentSeries.one(ring), min_prec=1)
        pulled = universal_pullback(tag, g1)
        for inner in ONE_COCYCLES:
            want = eval_one_cocycle(tag, g1) if inner == LAMBDA else eval_one_cocycle(OMEGA, g1)
            case.check(f"pullback along Phi_{tag} of {inner}", eval_one_cocycle(inner, pulled), want)
    for name in ("LL", "LO", "OO", "D"):
        case.check(f"delta_2 {name} = 1", delta(2, named_two_cocycle(name), (g1, g2, g3)), ring.one)
    control = delta(2, perturbed(named_two_cocycle("LL")), (g1, g2, g3))
    if control != 1 and "witness" not in state:
        state["witness"] = (case.index, str(control))


def _finish_cocycle_laws(report: SuiteReport, state: dict):
    if "witness" in state:
        idx, value = state["witness"]
        report.notes.append(f"negative control: perturbed cochain has delta_2 = {value} on case {idx}")
    else:
        report.failures.append(Failure(-1, "perturbed cochain fails delta_2", {}, "no witness", "some delta_2 != 1"))


def suite_gplus_trivial(case: Case, ring: RingSpec, rng: random.Random):
    x, y = _elem(ring, rng, "Gplus"), _elem(ring, rng, "Gplus")
    case.add_input(x=x, y=y)
    case.check("x, y in G_plus", membership(x).in_Gplus and membership(y).in_Gplus, True)
    for name in ("D", "LL", "LO", "OO"):
        case.check(f"{name}(x, y) = 1", named_two_cocycle(name)(x, y), ring.one)


def suite_direct_sum(case: Case, ring: RingSpec, rng: random.Random):
    x = _elem(ring, rng)
    f = random_series(ring, rng, -3, 4)
    case.add_input(x=x, f=f)
    u, v = solve_direct_sum(x, f)
    case.check("u has only negative degrees", u, u, all(d < 0 for d in u.coeffs))
    case.check("v has only nonnegative degrees", v, v, all(d >= 0 for d in v.coeffs))
    gv = g_act(x, v)
    residual = f - u - gv
    case.check("f - u - x(v) = 0", residual, 0, residual.is_known_zero() and residual.prec >= 0)


def suite_det_windows(case: Case, ring: RingSpec, rng: random.Random):
    x, y = _elem(ring, rng), _elem(ring, rng)
    case.add_input(x=x, y=y)
    rep = det_cocycle_report(x, y)
    rep4 = det_cocycle_report(x, y, window=rep.L + 4)
    case.check("D at L = D at L + 4", rep.value, rep4.value)
    lhs, rhs = _block_identity(x, y, L=6)
    case.check("d_xy = c_x b_y + d_x d_y", lhs, rhs)
    w = block_window(x, "d", 8).matrix
    tri = all(
        (w[j][k].constant_term == 0) if j < k else (w[j][k].is_unit() if j == k else True)
        for j in range(8)
        for k in range(8)
    )
    case.check("d-window mod nil is unit lower triangular", tri, True)


def suite_lie_identity(case: Case, ring: RingSpec, rng: random.Random):
    z, w = _lie(ring, rng), _lie(ring, rng)
    case.add_input(z=z, w=w)
    vals = {name: lie_extract(named_two_cocycle(name), z, w) for name in ("D", "LL", "LO", "OO")}
    lhs = vals["D"].scale(12)
    rhs = vals["LL"].scale(6) - vals["LO"].scale(6) + vals["OO"]
    case.check("12 D = 6 LL - 6 LO + OO", lhs, rhs)


def suite_lie_closed_forms(case: Case, ring: RingSpec, rng: random.Random):
    z, w = _lie(ring, rng), _lie(ring, rng)
    case.add_input(z=z, w=w)
    for name in ("LL", "LO", "OO", "D"):
        case.check(f"lie_extract({name}) = closed form", lie_extract(named_two_cocycle(name), z, w),
                   closed_form(name, z, w))


def table_value(kind: str, n: int, m: int) -> int:
    """The expected value of 12 * D on the basis pairs."""
    if n + m != 0:
        return 0
    if kind == "ee":
        return 12 * m
    if kind == "ed":
        return 6 * (-m - m * m)
    if kind == "dd":
        return 2 * (m - m ** 3)
    raise ValueError(kind)


def lie_table_pair(kind: str, ring: RingSpec, n: int, m: int) -> Tuple[LieElem, LieElem]:
    first = LieElem.e(ring, n) if kind in ("ee", "ed") else LieElem.d(ring, n)
    second = LieElem.e(ring, m) if kind == "ee" else LieElem.d(ring, m)
    return first, second


def run_lie_tables(ring: RingSpec, seed: int, bound: int) -> SuiteReport:
    report = SuiteReport("lie_tables", str(ring), seed, 0)
    index = 0
    for kind in ("ee", "ed", "dd"):
        for n in range(-bound, bound + 1):
            for m in range(-bound, bound + 1):
                z, w = lie_table_pair(kind, ring, n, m)
                case = Case(report, index, {"table": kind, "n": n, "m": m})
                want = ring.const(table_value(kind, n, m))
                _guarded(case, lambda: (
                    case.check("12 lie_trace = table", lie_trace(z, w).scale(12), want),
                    case.check("12 lie_extract(D) = table", lie_extract(DET_D, z, w).scale(12), want),
                ))
                index += 1
    report.cases = index
    return report


def suite_cli_roundtrip(case: Case, ring: RingSpec, rng: random.Random):
    from .parser import parse_value, render_value

    x = _elem(ring, rng, rng.choice(("G0", "Gplus", "general")))
    f = random_series(ring, rng, -3, 4, prec=rng.choice((lr.INF, 7)))
    z = _lie(ring, rng)
    case.add_input(x=x, f=f, z=z)
    for kind, value in (("series", f), ("group", x), ("lie", z), ("ring", ring)):
        text = render_value(value)
        back = parse_value(text, kind, ring)
        case.check(f"{kind} round trip", back, value)


# -- registry ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteInfo:
    name: str
    run: Callable
    default_ring: RingSpec
    default_cases: int
    covers: Tuple[str, ...]
    stateful: bool = False


REGISTRY: Dict[str, SuiteInfo] = {}


def _register(name, run, ring, cases, covers, stateful=False):
    REGISTRY[name] = SuiteInfo(name, run, ring, cases, tuple(covers), stateful)


_register("nilring_laws", suite_nilring_laws, GROUP_RING, 50, (
    "nilring: unit iff constant term nonzero, nilpotent iff constant term zero",
    "nilring: invert_unit(a) * a = 1",
    "nilring: exp_nil(a + b) = exp_nil(a) exp_nil(b)",
    "nilring: nil_index(a) <= dim A",
))
_register("laurent_laws", suite_laurent_laws, GROUP_RING, 25, (
    "laurent: invert(h) h = 1 and comp_inverse(g) o g = t",
    "laurent: composition is associative",
    "laurent: residue of an exact form vanishes",
    "laurent: factorize_unit round trip and subgroup membership",
    "laurent: factorize_aut round trip, shapes, uniqueness from two starts",
))
_register("group_laws", suite_group_laws, GROUP_RING, 25, (
    "groupg: associativity and inverses",
    "groupg: action axiom and multiplicativity of substitution",
    "groupg: bracket antisymmetry and Jacobi identity",
    "groupg: commutant witnesses [d/dt, t] = 1, [d/dt, t d/dt] = d/dt",
))
_register("cc_axioms", suite_cc_axioms, GROUP_RING, 100, (
    "ccsymbol: CC(t, t) = -1 and CC(a, g) = a^nu(g)",
    "ccsymbol: bimultiplicativity and antisymmetry",
    "ccsymbol: vanishing on (Gm x V_plus)^2 and (Gm x V_minus)^2",
    "ccsymbol: invariance under a common substitution",
    "ccsymbol: product formula agrees with the exp/log route",
))
_register("consistency", suite_consistency, SMALL_RING, 50, (
    "ccsymbol: cc_exact = cc_explog on V_plus V_minus",
    "detext: lie_extract(D) = lie_trace",
    "detext: d_xy = c_x b_y + d_x d_y",
    "groupg: commutant witnesses",
))
_register("cocycle_laws", suite_cocycle_laws, GROUP_RING, 25, (
    "cocycles: delta_1 Lambda = delta_1 Omega = 1",
    "cocycles: delta_2 = 1 for LL, LO, OO, D",
    "cocycles: perturbed control has a delta_2 witness",
    "cocycles: pullbacks along Phi_lambda",
), stateful=True)
_register("gplus_trivial", suite_gplus_trivial, GROUP_RING, 25, (
    "D, LL, LO, OO are identically 1 on G_plus",
))
_register("direct_sum", suite_direct_sum, GROUP_RING, 25, (
    "detext: f = u + x(v) with zero residual",
))
_register("det_windows", suite_det_windows, GROUP_RING, 25, (
    "detext: window stability L vs L + 4",
    "detext: d_xy = c_x b_y + d_x d_y on padded windows",
    "detext: d-window is unit lower triangular modulo the nilradical",
))
_register("lie_identity", suite_lie_identity, LIE_RING, 50, (
    "12 LieD = 6 Lie<L,L> - 6 Lie<L,O> + Lie<O,O> via generic extraction",
))
_register("lie_closed_forms", suite_lie_closed_forms, LIE_RING, 50, (
    "detext: lie_extract(LL, LO, OO, D) = residue and trace closed forms",
))
_register("lie_tables", run_lie_tables, QQ, 8, (
    "the three basis tables for 12 LieD",
))
_register("cli_roundtrip", suite_cli_roundtrip, GROUP_RING, 25, (
    "cli: printing then parsing gives a structurally equal value",
))

SUITES = tuple(REGISTRY)


def _guarded(case: Case, fn):
    try:
        fn()
    except (ArithmeticError, ValueError) as exc:
        case.check(f"evaluation ({type(exc).__name__})", str(exc), "a value", False)


START_PREC = lr.DEFAULT_PREC
MAX_PREC = 384


def _run_case(info: SuiteInfo, report: SuiteReport, ring: RingSpec, seed: int, index: int, state: dict):
    """One case, repeated at doubled working precision while it runs short."""
    prec = START_PREC
    while True:
        trial = SuiteReport(report.suite, report.ring, seed, 1)
        case = Case(trial, index, {})
        rng = _rng(info.name, seed, index)
        args = (case, ring, rng, state) if info.stateful else (case, ring, rng)
        try:
            with working_precision(prec):
                info.run(*args)
        except lr.PrecisionError as exc:
            if 2 * prec <= MAX_PREC:
                prec *= 2
                continue
            case.check(f"evaluation (PrecisionError at working precision {prec})", str(exc), "a value", False)
        except (ArithmeticError, ValueError) as exc:
            case.check(f"evaluation ({type(exc).__name__})", str(exc), "a value", False)
        report.checks += trial.checks
        report.failures.extend(trial.failures)
        return


def run_suite(name: str, ring: Optional[RingSpec] = None, seed: int = 0, cases: Optional[int] = None) -> SuiteReport:
    """Run one suite; for ``lie_tables`` the case count is the bound on |n|, |m|."""
    info = REGISTRY.get(name)
    if info is None:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ring = info.default_ring if ring is None else ring
    count = info.default_cases if cases is None else cases
    start = time.perf_counter()
    if name == "lie_tables":
        report = run_lie_tables(ring, seed, count)
    else:
        report = SuiteReport(name, str(ring), seed, count)
        state: dict = {}
        for index in range(count):
            _run_case(info, report, ring, seed, index, state)
        if name == "cocycle_laws":
            _finish_cocycle_laws(report, state)
    report.millis = int((time.perf_counter() - start) * 1000)
    return report
