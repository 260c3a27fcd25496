"""The determinant 2-cocycle D on G0 and its Lie-algebra shadow.

A group element g = (h, phi) acts on A((t)) = t^-1 A[t^-1] + A[[t]] by
f -> h f(phi); in that decomposition it is a 2x2 block operator (a b; c d).
For x, y in G0 the operator d_x d_y d_xy^-1 on A[[t]] differs from the
identity only in finitely many columns, and D(x, y) is its determinant.

Window sizes come from a slope bound.  Let beta be the largest ratio
``drop / weight`` over the nilpotent terms c t^k of x (drop = -k for terms of
h, 1 - k for terms of the nilpotent part of phi; weight = lowest monomial
degree of c).  Then the matrix entry of g(t^k) at t^j has weight at least
(k - j) / beta.  That inequality survives products and inverses, so with M the
nilpotency index of the ring, entries with k - j > (M - 1) beta vanish.  This
gives the reach B = floor((M - 1) beta), the number n = B of columns where
d_x d_y d_xy^-1 can differ from the identity, and the padding S = L + B that
makes an S x S window exact in its top-left L x L corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Dict, Optional, Tuple

from .cocycles import TwoCocycle, adaptive
from .groupg import GroupElem, LieElem, g_act, g_mul, lie_to_group
from .laurent import (
    INF,
    LaurentSeries,
    PowerTable,
    PrecisionError,
    derivative,
    order_nu,
    res_form,
    residue,
)
from .nilring import RingElem, RingSpec, adjoin_duals, extract_coeff
from .ringmat import Matrix, is_identity_block, mat_det, mat_inverse, mat_mul, minor


class NotInG0Error(ValueError):
    pass


class WindowError(ArithmeticError):
    """The identity-outside-the-block certificate failed (an internal error)."""


class ShapeError(ArithmeticError):
    """A commutator of dual-number embeddings was not of the form 1 + a e1 e2."""


# -- slopes and reach -------------------------------------------------------------


def _require_g0(x: GroupElem):
    if order_nu(x.h) != 0:
        raise NotInG0Error(f"{x} is not in G0 (h has order {order_nu(x.h)})")


def slope(x: GroupElem) -> Fraction:
    """Largest drop/weight ratio over the nilpotent terms of x (0 if none)."""
    best = Fraction(0)
    phi_nil = x.phi - x.phi.mod_nil()
    for series, shift in ((x.h, 0), (phi_nil, 1)):
        for d, c in series.coeffs.items():
            drop = shift - d
            if drop <= 0:
                continue
            c_nil = c.nil_part()
            if c_nil.is_zero():
                continue
            best = max(best, Fraction(drop, int(c_nil.weight())))
    return best


def reach_from_slope(beta: Fraction, ring: RingSpec) -> int:
    return floor((ring.nil_index - 1) * beta)


def reach_bound(x: GroupElem) -> int:
    """B with g(t^k) in t^(k-B) A[[t]] for every k >= 0."""
    _require_g0(x)
    return reach_from_slope(slope(x), x.ring)


# -- windows ----------------------------------------------------------------------

BLOCKS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class BlockWindow:
    which: str
    matrix: Matrix
    row_degrees: Tuple[int, ...]
    col_degrees: Tuple[int, ...]
    reach: int

    def entry(self, row_degree: int, col_degree: int) -> RingElem:
        return self.matrix[self.row_degrees.index(row_degree)][self.col_degrees.index(col_degree)]


def _degrees(which_half: str, L: int) -> Tuple[int, ...]:
    return tuple(range(L)) if which_half == "plus" else tuple(range(-1, -L - 1, -1))


def _columns(x: GroupElem, col_degrees, row_lo: int, row_hi: int) -> Dict[int, LaurentSeries]:
    """g(t^k) known below ``row_hi`` for each k; rows start at ``row_lo``."""
    lowest = min(col_degrees, default=0)
    cap = PowerTable.cap_for(x.phi, row_hi, lowest) + max(0, -x.h.min_deg)
    table = PowerTable(x.phi, cap)
    out = {}
    for k in col_degrees:
        col = x.h.mul(table.power(k), cap=row_hi)
        if col.prec < row_hi:
            raise PrecisionError(
                f"column t^{k} of the window is only known below t^{col.prec}, need t^{row_hi}",
                required=row_hi + (row_hi - col.prec),
            )
        out[k] = col
    return out


def _window_matrix(x: GroupElem, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Matrix:
    ring = x.ring
    row_hi = max(rows) + 1 if rows else 0
    columns = _columns(x, cols, min(rows, default=0), row_hi)
    zero = ring.zero
    return [[columns[k].coeffs.get(j, zero) for k in cols] for j in rows]


def block_window(x: GroupElem, which: str, L: int) -> BlockWindow:
    """Rows and columns t^0..t^(L-1) for the A[[t]] side, t^-1..t^-L for the other."""
    if which not in BLOCKS:
        raise ValueError(f"block must be one of {BLOCKS}")
    if L < 1:
        raise ValueError("window size must be >= 1")
    B = reach_bound(x)
    row_half = "minus" if which in ("a", "b") else "plus"
    col_half = "minus" if which in ("a", "c") else "plus"
    rows, cols = _degrees(row_half, L), _degrees(col_half, L)
    return BlockWindow(which, _window_matrix(x, rows, cols), rows, cols, B)


def d_window(x: GroupElem, size: int) -> Matrix:
    deg = tuple(range(size))
    return _window_matrix(x, deg, deg)


# -- the determinant cocycle -----------------------------------------------------


@dataclass
class DReport:
    value: RingElem
    beta: Fraction
    reach: int
    n: int
    L: int
    S: int
    block: Matrix = field(repr=False, default_factory=list)


def _product_precision(x: GroupElem, y: GroupElem, S: int) -> int:
    depth = 0
    for g in (x, y):
        for s in (g.h, g.phi):
            if s.coeffs:
                depth = max(depth, -min(s.coeffs))
    M = x.ring.nil_index
    return S + (M + 1) * (depth + 2) + 4


def det_cocycle_report(x: GroupElem, y: GroupElem, window: Optional[int] = None) -> DReport:
    x.h._check(y.h)
    _require_g0(x)
    _require_g0(y)
    ring = x.ring
    beta = max(slope(x), slope(y))
    B = reach_from_slope(beta, ring)
    n = B
    L = max(window or 0, n)
    if L == 0:
        return DReport(ring.one, beta, B, 0, 0, 0, [])
    S = L + B + 1
    dx, dy = d_window(x, S), d_window(y, S)

    def product_window():
        P = _product_precision(x, y, S)
        return d_window(g_mul(x, y, prec=P), S)

    dxy = adaptive(product_window, start=_product_precision(x, y, S))
    m = mat_mul(mat_mul(dx, dy, ring), mat_inverse(dxy, ring), ring)
    if not is_identity_block(m, range(L), range(n, L)):
        raise WindowError(f"columns {n}..{L - 1} of d_x d_y d_xy^-1 are not the identity")
    block = minor(m, n)
    return DReport(mat_det(block, ring), beta, B, n, L, S, block)


def det_cocycle_D(x: GroupElem, y: GroupElem, window: Optional[int] = None) -> RingElem:
    return det_cocycle_report(x, y, window).value


DET_D = TwoCocycle("detD", det_cocycle_D)


# -- direct sum -------------------------------------------------------------------


def solve_direct_sum(x: GroupElem, f: LaurentSeries, prec: Optional[int] = None) -> Tuple[LaurentSeries, LaurentSeries]:
    """f = u + x(v) with u in t^-1 A[t^-1] and v in A[[t]]."""
    _require_g0(x)
    x.h._check(f)
    ring = x.ring
    B = reach_bound(x)
    depth = max([0] + [-d for s in (x.h, x.phi) for d in s.coeffs])
    target = prec if prec is not None else max(8, 2 * B + 4)
    if f.prec != INF:
        target = min(target, f.prec - B)
    if target <= B:
        raise PrecisionError("f is too coarse to separate the two summands", required=2 * B + 2)
    S = target + B + 1
    pr = [f.coeffs.get(j, ring.zero) if j < f.prec else None for j in range(S)]
    inv = mat_inverse(d_window(x, S), ring)
    v_coeffs = {}
    for j in range(target):
        acc = ring.zero
        for k, fk in enumerate(pr):
            a = inv[j][k]
            if not a:
                continue
            if fk is None:
                raise PrecisionError("f is too coarse", required=S)
            if fk:
                acc = acc + a * fk
        v_coeffs[j] = acc
    for candidate_prec in (INF, target):
        v = LaurentSeries(ring, v_coeffs, candidate_prec)
        gv = g_act(x, v, prec=target + depth * ring.nil_index + 2)
        try:
            u = (f - gv).negative_part()
        except PrecisionError:
            continue
        residual = f - u - gv
        if candidate_prec == INF:
            if residual.is_zero():
                return u, v
            continue
        if not residual.is_known_zero():
            raise ArithmeticError("direct-sum residual does not vanish")
        return u, v
    raise PrecisionError("could not certify the direct-sum decomposition", required=2 * target)


# -- Lie algebra level ----------------------------------------------------------------


def _b_block(z: LieElem) -> Dict[Tuple[int, int], RingElem]:
    """Entries (j < 0, k >= 0) of the operator f -> s f + r f'."""
    out = {}
    s, r = z.s, z.r
    lo = min(s.min_deg, r.min_deg - 1)
    K = int(max(0, -s.min_deg, 1 - r.min_deg)) if (s.coeffs or r.coeffs) else 0
    for k in range(K):
        for j in range(int(lo) + k, 0):
            c = s[j - k] + r[j - k + 1].scale(k)
            if c:
                out[(j, k)] = c
    return out


def _c_entry(w: LieElem, k: int, j: int) -> RingElem:
    """Coefficient of t^k (k >= 0) in w(t^j) (j < 0)."""
    return w.s[k - j] + w.r[k - j + 1].scale(j)


def _trace_cb(c_of: LieElem, b_of: LieElem) -> RingElem:
    total = c_of.ring.zero
    for (j, k), b in _b_block(b_of).items():
        c = _c_entry(c_of, k, j)
        if c:
            total = total + c * b
    return total


def lie_trace(z: LieElem, w: LieElem) -> RingElem:
    """tr(c_w b_z - c_z b_w)."""
    z.s._check(w.s)
    return _trace_cb(w, z) - _trace_cb(z, w)


def _fresh_names(ring: RingSpec, want=("e1", "e2")) -> Tuple[str, str]:
    names = []
    for base in want:
        name, i = base, 0
        while name in ring.generators or name in names:
            i += 1
            name = f"{base}_{i}"
        names.append(name)
    return names[0], names[1]


def lie_extract(coc: TwoCocycle, z: LieElem, w: LieElem) -> RingElem:
    """a with coc(x, y) coc(y, x)^-1 = 1 + a e1 e2 for the dual-number embeddings."""
    base = z.ring
    z.s._check(w.s)
    e1, e2 = _fresh_names(base)
    ext = adjoin_duals(base, (e1, e2))
    x = lie_to_group(z, e1, ext)
    y = lie_to_group(w, e2, ext)
    q = coc(x, y) * coc(y, x) ** -1
    a = extract_coeff(q, {e1: 1, e2: 1}, base)
    expected = ext.one + ext.coerce(a) * ext.gen(e1) * ext.gen(e2)
    if q != expected:
        raise ShapeError(f"{coc.tag}: commutator {q} is not of the form 1 + a {e1}*{e2}")
    return a


def closed_form(name: str, z: LieElem, w: LieElem) -> RingElem:
    """Explicit Lie 2-cocycles: LL, LO, OO and D (the trace formula)."""
    if name == "LL":
        return res_form(z.s, w.s).scale(2)
    if name == "LO":
        return residue(z.s * derivative(derivative(w.r)) - w.s * derivative(derivative(z.r)))
    if name == "OO":
        return res_form(derivative(z.r), derivative(w.r)).scale(2)
    if name == "D":
        return lie_trace(z, w)
    raise ValueError(f"unknown Lie cocycle {name!r}")


def lie_rr_combination(z: LieElem, w: LieElem) -> RingElem:
    """(6 LL - 6 LO + OO) / 12, which should equal the trace formula."""
    v = closed_form("LL", z, w).scale(6) - closed_form("LO", z, w).scale(6) + closed_form("OO", z, w)
    return v.scale(Fraction(1, 12))
