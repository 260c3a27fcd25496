"""The Contou-Carrere symbol of two invertible Laurent series.

Two independent evaluations are provided:

* :func:`cc_exact` uses the closed product formula over the decompositions
  ``v_plus = prod_i (1 - a_i t^i)`` and ``v_minus = prod_i (1 - a_{-i} t^{-i})``.
  Only finitely many factors differ from 1 because the negative-degree
  coefficients are nilpotent; the needed range is worked out per input.
* :func:`cc_explog` computes ``exp res(log f * dg/g)`` for f in V_plus V_minus.

:func:`cc` returns the product-formula value and can cross-check it against
the exp/log route through bimultiplicativity.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Dict

from .laurent import (
    INF,
    LaurentSeries,
    PrecisionError,
    derivative,
    factorize_unit,
    invert,
    log_one_plus,
    residue,
)
from .nilring import RingElem, exp_nil, invert_unit


class SymbolMismatchError(ArithmeticError):
    """The two evaluation routes disagreed (a bug, never a user error)."""


def minus_decomposition(v_minus: LaurentSeries) -> Dict[int, RingElem]:
    """Coefficients c_j (j > 0) with v_minus = prod_j (1 - c_j t^{-j}).

    Peels one factor per degree, from t^-1 downwards; terminates because the
    remaining negative coefficients get deeper in the nilradical.
    """
    ring = v_minus.ring
    rem = v_minus
    out: Dict[int, RingElem] = {}
    j = 0
    while not rem.is_one():
        j += 1
        if j > 10_000:
            raise ArithmeticError("negative product decomposition did not terminate")
        c = -rem[-j]
        if not c:
            continue
        out[j] = c
        # divide by (1 - c t^-j): multiply by the finite sum of (c t^-j)^k
        geo = {0: ring.one}
        p = ring.one
        k = 0
        while True:
            k += 1
            p = p * c
            if not p:
                break
            geo[-j * k] = p
        rem = rem * LaurentSeries(ring, geo)
    return out


def plus_decomposition(v_plus: LaurentSeries, upto: int) -> Dict[int, RingElem]:
    """Coefficients c_i (1 <= i <= upto) with v_plus = prod_i (1 - c_i t^i)."""
    ring = v_plus.ring
    if upto >= v_plus.prec:
        raise PrecisionError(f"need the t^{upto} coefficient of the positive part", required=upto + 1)
    rem = v_plus.truncate(upto + 1)
    out: Dict[int, RingElem] = {}
    for i in range(1, upto + 1):
        c = -rem[i]
        if not c:
            continue
        out[i] = c
        geo = {}
        p = ring.one
        k = 0
        while i * k <= upto:
            geo[i * k] = p
            k += 1
            p = p * c
        rem = rem.mul(LaurentSeries(ring, geo), cap=upto + 1)
    return out


def _needed_positive_degree(minus: Dict[int, RingElem]) -> int:
    """Largest i whose a_i can meet a nonzero b_{-j}: i < j * nil_index(b_{-j})."""
    return max((j * c.nil_index() - 1 for j, c in minus.items()), default=0)


def _cross_product(pos: Dict[int, RingElem], neg: Dict[int, RingElem], ring) -> RingElem:
    """prod over i, j > 0 of (1 - pos_i^{j/(i,j)} neg_j^{i/(i,j)})^{(i,j)}."""
    out = ring.one
    for j, b in neg.items():
        m = b.nil_index()
        for i, a in pos.items():
            d = gcd(i, j)
            if i // d >= m:
                continue
            term = (a ** (j // d)) * (b ** (i // d))
            if term:
                out = out * (ring.one - term) ** d
    return out


@dataclass(frozen=True)
class _Parts:
    nu: int
    a0: RingElem
    minus: Dict[int, RingElem]
    inv_minus_depth: int


def _parts(f: LaurentSeries) -> _Parts:
    fac = factorize_unit(f, prec=1)
    minus = minus_decomposition(fac.v_minus)
    depth = -invert(fac.v_minus, prec=INF).min_deg
    return _Parts(fac.n, fac.a0, minus, max(depth, 0))


def _plus_coeffs(f: LaurentSeries, parts: _Parts, upto: int, name: str) -> Dict[int, RingElem]:
    if upto <= 0:
        return {}
    fac = factorize_unit(f, prec=upto + 1)
    try:
        return plus_decomposition(fac.v_plus, upto)
    except PrecisionError:
        need = upto + 1 + parts.nu + parts.inv_minus_depth
        raise PrecisionError(
            f"{name} must be known below t^{need} (currently O(t^{f.prec}))", required=need
        ) from None


def cc_exact(f: LaurentSeries, g: LaurentSeries) -> RingElem:
    """The symbol via the closed product formula."""
    f._check(g)
    ring = f.ring
    pf, pg = _parts(f), _parts(g)
    a_plus = _plus_coeffs(f, pf, _needed_positive_degree(pg.minus), "f")
    b_plus = _plus_coeffs(g, pg, _needed_positive_degree(pf.minus), "g")
    num = _cross_product(a_plus, pg.minus, ring)
    den = _cross_product(b_plus, pf.minus, ring)
    sign = -1 if (pf.nu * pg.nu) % 2 else 1
    value = (pf.a0 ** pg.nu) * num * invert_unit((pg.a0 ** pf.nu) * den)
    return value.scale(sign)


def _log_parts(f: LaurentSeries, prec: int):
    fac = factorize_unit(f, prec=prec)
    one = LaurentSeries.one(f.ring)
    log_minus = log_one_plus(fac.v_minus - one)
    log_plus = log_one_plus(fac.v_plus - one, prec=prec) if not fac.v_plus.is_one() else None
    return fac, log_minus, log_plus


def cc_explog(f: LaurentSeries, g: LaurentSeries) -> RingElem:
    """exp res(log f * dg/g), for f with nu(f) = 0 and constant factor 1."""
    f._check(g)
    pre = factorize_unit(f, prec=1)
    if pre.n != 0 or pre.a0 != 1:
        raise ValueError("exp/log evaluation needs f in V_plus * V_minus")
    ring = f.ring
    depth_f = max(0, -log_one_plus(pre.v_minus - LaurentSeries.one(ring)).min_deg)
    dg = derivative(g)
    dlog_g = dg * invert(g, prec=depth_f + 2 - min(dg.min_deg, 0) if dg.coeffs else depth_f + 2)
    fac, log_minus, log_plus = _log_parts(f, max(1, 1 - dlog_g.min_deg))
    log_f = log_minus if log_plus is None else log_minus + log_plus
    try:
        r = residue(log_f * dlog_g)
    except PrecisionError as exc:
        raise PrecisionError(f"not enough precision for the residue: {exc}") from None
    return exp_nil(r)


def cc_by_reduction(f: LaurentSeries, g: LaurentSeries) -> RingElem:
    """Bimultiplicative reduction to the exp/log route.

    With f = a0 t^nu w (w in V_plus V_minus) and g of order mu with constant
    factor b0: CC(f, g) = a0^mu * ((-1)^mu / b0)^nu * CC_explog(w, g).
    """
    ff = factorize_unit(f, prec=1)
    gg = factorize_unit(g, prec=1)
    w = f.shift(-ff.n).scale(invert_unit(ff.a0))
    mu = gg.n
    value = cc_explog(w, g) * (ff.a0 ** mu)
    t_part = invert_unit(gg.a0).scale(-1 if mu % 2 else 1)
    return value * (t_part ** ff.n)


def cc(f: LaurentSeries, g: LaurentSeries, check: bool = False) -> RingElem:
    value = cc_exact(f, g)
    if check:
        other = cc_by_reduction(f, g)
        if other != value:
            raise SymbolMismatchError(f"product formula gave {value}, exp/log gave {other}")
    return value
