"""Truncated Laurent series over a nilpotent ring.

A series stores finitely many coefficients together with an absolute precision
``prec``: every coefficient of degree ``>= prec`` is unknown.  ``prec = inf``
means the stored support is the whole series.  All operations propagate
precision pessimistically and never invent coefficients they cannot know.

Most entry points accept ``prec=`` as a target precision for results that are
infinite series; when omitted the ambient :func:`working_precision` is used.
Results that happen to be exact (finite support) are returned exactly.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple, Union

import flint
from gmpy2 import mpq

from .nilring import RingElem, RingError, RingSpec, ZERO, invert_unit, to_mpq

INF = math.inf
Prec = Union[int, float]

DEFAULT_PREC = 24
_default_prec: contextvars.ContextVar[int] = contextvars.ContextVar("default_prec", default=DEFAULT_PREC)


class PrecisionError(ArithmeticError):
    """A coefficient beyond the known precision was needed.

    ``required`` is, when known, a precision that would have sufficed.
    """

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


class NotInvertibleError(ValueError):
    pass


class NotAdmissibleError(ValueError):
    """Raised when a substitution parameter does not have order exactly one."""


def default_precision() -> int:
    return _default_prec.get()


@contextmanager
def working_precision(prec: int):
    token = _default_prec.set(int(prec))
    try:
        yield
    finally:
        _default_prec.reset(token)


def _target(prec: Optional[Prec]) -> Prec:
    return default_precision() if prec is None else prec


# products of at least this many coefficient pairs go through FLINT polynomials
_FAST_MUL_MIN = 64


def _split_components(ring: RingSpec, terms, lo: int, hi: int):
    """Per basis monomial, the rational polynomial sum_d c_d x^(d - lo) over lo <= d < hi."""
    n = ring.dim
    nums = [[0] * (hi - lo) for _ in range(n)]
    dens = [1] * n
    used = [False] * n
    for d, c in terms:
        if d >= hi:
            break
        for i, q in enumerate(c.c):
            if q:
                used[i] = True
                den = int(q.denominator)
                if den != 1:
                    dens[i] = dens[i] * den // math.gcd(dens[i], den)
    polys = [None] * n
    for i in range(n):
        if not used[i]:
            continue
        L = int(dens[i])
        row = nums[i]
        for d, c in terms:
            if d >= hi:
                break
            q = c.c[i]
            if q:
                row[d - lo] = int(q.numerator * (L // q.denominator))
        polys[i] = flint.fmpq_poly(row, L) if L != 1 else flint.fmpq_poly(row)
    return polys


def _flint_product(ring: RingSpec, a, b, prec) -> Dict[int, RingElem]:
    lo_a, lo_b = a[0][0], b[0][0]
    lo = lo_a + lo_b
    hi_a = a[-1][0] + 1 if prec == INF else min(a[-1][0] + 1, prec - lo_b)
    hi_b = b[-1][0] + 1 if prec == INF else min(b[-1][0] + 1, prec - lo_a)
    pa = _split_components(ring, a, lo_a, hi_a)
    pb = _split_components(ring, b, lo_b, hi_b)
    n = ring.dim
    acc = [None] * n
    for i, row in enumerate(ring._table):
        x = pa[i]
        if x is None:
            continue
        for j, k in row:
            y = pb[j]
            if y is None:
                continue
            acc[k] = x * y if acc[k] is None else acc[k] + x * y
    top = hi_a + hi_b - 1 - lo if prec == INF else min(hi_a + hi_b - 1, prec) - lo
    cols = [[ZERO] * top for _ in range(n)]
    for k, poly in enumerate(acc):
        if poly is None:
            continue
        col = cols[k]
        for e, q in enumerate(poly.coeffs()[:top]):
            if q:
                col[e] = mpq(int(q.p), int(q.q))
    out: Dict[int, RingElem] = {}
    for e in range(top):
        vec = tuple(col[e] for col in cols)
        if any(vec):
            out[lo + e] = RingElem(ring, vec)
    return out


class LaurentSeries:
    """An element of A((t)) known below degree ``prec``."""

    __slots__ = ("ring", "coeffs", "prec")

    def __init__(self, ring: RingSpec, coeffs: Optional[Dict[int, RingElem]] = None, prec: Prec = INF):
        self.ring = ring
        if prec != INF:
            prec = int(prec)
        self.prec = prec
        clean: Dict[int, RingElem] = {}
        for d, c in (coeffs or {}).items():
            if d >= prec:
                continue
            if not isinstance(c, RingElem):
                c = ring.const(c)
            elif c.spec is not ring and c.spec != ring:
                raise RingError(f"coefficient from {c.spec} in a series over {ring}")
            if c:
                clean[int(d)] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec, prec: Prec = INF) -> "LaurentSeries":
        return cls(ring, {}, prec)

    @classmethod
    def one(cls, ring: RingSpec) -> "LaurentSeries":
        return cls(ring, {0: ring.one})

    @classmethod
    def monomial(cls, ring: RingSpec, degree: int, coeff=1) -> "LaurentSeries":
        c = coeff if isinstance(coeff, RingElem) else ring.const(coeff)
        return cls(ring, {degree: c})

    @classmethod
    def t(cls, ring: RingSpec) -> "LaurentSeries":
        return cls.monomial(ring, 1)

    @classmethod
    def const(cls, ring: RingSpec, value) -> "LaurentSeries":
        return cls.monomial(ring, 0, value)

    @classmethod
    def from_rationals(cls, ring: RingSpec, values: Dict[int, object], prec: Prec = INF) -> "LaurentSeries":
        return cls(ring, {d: ring.const(v) for d, v in values.items()}, prec)

    # -- inspection --------------------------------------------------------

    @property
    def min_deg(self) -> Prec:
        """Lowest stored degree; equals ``prec`` when nothing is stored."""
        return min(self.coeffs) if self.coeffs else self.prec

    @property
    def max_deg(self) -> Prec:
        return max(self.coeffs) if self.coeffs else -INF

    ord = min_deg

    def is_exact(self) -> bool:
        return self.prec == INF

    def is_zero(self) -> bool:
        """True for the exact zero series."""
        return not self.coeffs and self.prec == INF

    def is_known_zero(self) -> bool:
        """True if every known coefficient vanishes."""
        return not self.coeffs

    def __getitem__(self, degree: int) -> RingElem:
        if degree >= self.prec:
            raise PrecisionError(f"coefficient of t^{degree} is beyond precision {self.prec}", required=degree + 1)
        c = self.coeffs.get(degree)
        return c if c is not None else self.ring.zero

    def items(self) -> Iterable[Tuple[int, RingElem]]:
        return sorted(self.coeffs.items())

    def degrees(self) -> Tuple[int, ...]:
        return tuple(sorted(self.coeffs))

    # -- truncations and parts ---------------------------------------------

    def truncate(self, prec: Prec) -> "LaurentSeries":
        """Forget everything at degrees ``>= prec`` (never raises precision)."""
        if prec >= self.prec:
            return self
        return LaurentSeries(self.ring, self.coeffs, prec)

    def with_prec(self, prec: Prec) -> "LaurentSeries":
        """Same stored coefficients, declared precision ``prec`` (unchecked)."""
        return LaurentSeries(self.ring, self.coeffs, prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k."""
        return LaurentSeries(self.ring, {d + k: c for d, c in self.coeffs.items()}, self.prec + k)

    def negative_part(self) -> "LaurentSeries":
        """Terms of degree < 0; exact as soon as all of them are known."""
        if self.prec < 0:
            raise PrecisionError("negative part needs precision >= 0", required=0)
        return LaurentSeries(self.ring, {d: c for d, c in self.coeffs.items() if d < 0})

    def nonnegative_part(self) -> "LaurentSeries":
        return LaurentSeries(self.ring, {d: c for d, c in self.coeffs.items() if d >= 0}, self.prec)

    def positive_part(self) -> "LaurentSeries":
        return LaurentSeries(self.ring, {d: c for d, c in self.coeffs.items() if d > 0}, self.prec)

    def mod_nil(self) -> "LaurentSeries":
        """Reduction modulo the nilradical, kept in the same ring."""
        ring = self.ring
        return LaurentSeries(
            ring, {d: ring.const(c.constant_term) for d, c in self.coeffs.items() if c.constant_term}, self.prec
        )

    def nil_part(self) -> "LaurentSeries":
        return LaurentSeries(self.ring, {d: c.nil_part() for d, c in self.coeffs.items()}, self.prec)

    def rational_coeffs(self) -> Dict[int, mpq]:
        return {d: c.constant_term for d, c in self.coeffs.items() if c.constant_term}

    def map_coeffs(self, fn, ring: Optional[RingSpec] = None) -> "LaurentSeries":
        return LaurentSeries(ring or self.ring, {d: fn(c) for d, c in self.coeffs.items()}, self.prec)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "LaurentSeries"):
        if other.ring is not self.ring and other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _lift(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            self._check(other)
            return other
        if isinstance(other, RingElem) or isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return LaurentSeries.const(self.ring, self.ring.coerce(other))
        raise TypeError(f"cannot combine a series with {type(other).__name__}")

    def __add__(self, other):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        out = dict(self.coeffs)
        for d, c in o.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return LaurentSeries(self.ring, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.ring, {d: -c for d, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "LaurentSeries":
        if isinstance(c, RingElem):
            c = self.ring.coerce(c)
            return LaurentSeries(self.ring, {d: a * c for d, a in self.coeffs.items()}, self._scaled_prec(c))
        q = to_mpq(c)
        if q == 0:
            return LaurentSeries(self.ring, {}, INF)
        return LaurentSeries(self.ring, {d: a.scale(q) for d, a in self.coeffs.items()}, self.prec)

    def _scaled_prec(self, c: RingElem) -> Prec:
        return INF if c.is_zero() else self.prec

    def mul(self, other: "LaurentSeries", cap: Optional[Prec] = None) -> "LaurentSeries":
        """Product, optionally discarding everything at degrees ``>= cap``."""
        self._check(other)
        prec = min(self.prec + other.min_deg, other.prec + self.min_deg)
        if cap is not None:
            prec = min(prec, cap)
        a = sorted(self.coeffs.items())
        b = sorted(other.coeffs.items())
        if len(a) * len(b) >= _FAST_MUL_MIN:
            return LaurentSeries(self.ring, _flint_product(self.ring, a, b, prec), prec)
        out: Dict[int, RingElem] = {}
        for d1, c1 in a:
            for d2, c2 in b:
                d = d1 + d2
                if d >= prec:
                    break
                p = c1 * c2
                if d in out:
                    out[d] = out[d] + p
                else:
                    out[d] = p
        return LaurentSeries(self.ring, out, prec)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return self.mul(other)
        if isinstance(other, RingElem):
            return self.scale(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, LaurentSeries):
            return other.mul(self)
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result = LaurentSeries.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return self * invert(other)
        if isinstance(other, RingElem):
            return self.scale(invert_unit(self.ring.coerce(other)))
        return self.scale(1 / to_mpq(other))

    # -- comparison and display ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentSeries):
            return self.ring == other.ring and self.prec == other.prec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.prec, tuple(sorted(self.coeffs.items()))))

    def agrees(self, other: "LaurentSeries") -> bool:
        """Equal on every degree known to both."""
        self._check(other)
        p = min(self.prec, other.prec)
        return self.truncate(p).coeffs == other.truncate(p).coeffs

    def is_one(self) -> bool:
        return self.prec == INF and set(self.coeffs) == {0} and self.coeffs[0] == 1

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        return format_series(self)


def format_series(f: LaurentSeries, var: str = "t") -> str:
    terms = []
    for d, c in f.items():
        tpow = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        cs = str(c)
        if not tpow:
            terms.append(cs)
            continue
        if c == 1:
            terms.append(tpow)
        elif c == -1:
            terms.append(f"-{tpow}")
        elif len(c.coeffs) == 1:
            terms.append(f"{cs}*{tpow}")
        else:
            terms.append(f"({cs})*{tpow}")
    if f.prec != INF:
        terms.append(f"O({var}^{f.prec})")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def series_arith(f: LaurentSeries, g: LaurentSeries, op: str) -> LaurentSeries:
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown series operation {op!r}")


def derivative(f: LaurentSeries) -> LaurentSeries:
    out = {d - 1: c.scale(d) for d, c in f.coeffs.items() if d}
    return LaurentSeries(f.ring, out, f.prec - 1)


def residue(f: LaurentSeries) -> RingElem:
    return f[-1]


def res_form(f: LaurentSeries, g: LaurentSeries) -> RingElem:
    """res(f dg)."""
    return residue(f * derivative(g))


# -- order and invertibility ------------------------------------------------------


def order_nu(h: LaurentSeries) -> int:
    """Lowest degree whose coefficient is a unit."""
    for d, c in h.items():
        if c.is_unit():
            return d
    if h.prec == INF:
        raise NotInvertibleError(f"{h} has no unit coefficient")
    raise PrecisionError(f"no unit coefficient below precision {h.prec}")


def is_invertible(h: LaurentSeries) -> bool:
    try:
        order_nu(h)
    except NotInvertibleError:
        return False
    return True


def _rational_inverse(a: Dict[int, mpq], n: int) -> list:
    """First n coefficients of 1/(a_0 + a_1 t + ...) with a_0 != 0."""
    inv0 = 1 / a[0]
    q = [inv0]
    for k in range(1, n):
        s = ZERO
        for i in range(1, k + 1):
            ai = a.get(i)
            if ai:
                s += ai * q[k - i]
        q.append(-s * inv0)
    return q


def invert(h: LaurentSeries, prec: Optional[Prec] = None) -> LaurentSeries:
    """Multiplicative inverse.

    Inverts the reduction modulo the nilradical classically, then corrects by
    the finite geometric sum in the nilpotent remainder.
    """
    if h.is_known_zero():
        raise NotInvertibleError("zero is not invertible")
    nu = order_nu(h)
    target = _target(prec)
    ring = h.ring
    M = ring.nil_index
    k = h.shift(-nu)
    k0 = k.mod_nil()
    n = k - k0
    depth = max(0, -n.min_deg) if n.coeffs else 0
    inner = target + nu + (M - 1) * depth + 1
    rat = k0.rational_coeffs()
    if k0.prec == INF and set(rat) == {0}:
        q = LaurentSeries.const(ring, 1 / rat[0])
    else:
        top = min(k0.prec, inner)
        if top == INF:
            raise PrecisionError("the inverse is an infinite series; give a finite precision")
        top = int(top)
        vals = _rational_inverse(rat, max(top, 1))
        q = LaurentSeries(ring, {d: ring.const(v) for d, v in enumerate(vals) if v}, top)
    if n.is_zero():
        result = q
    else:
        cap = None if q.is_exact() and n.is_exact() else inner
        qn = q.mul(n, cap)
        result, term = q, q
        for _ in range(M - 1):
            term = -term.mul(qn, cap)
            if term.is_zero():
                break
            result = result + term
    result = result.shift(-nu)
    if not result.is_exact():
        result = result.truncate(target)
    return result


# -- substitution -------------------------------------------------------------------


def _split_parameter(g: LaurentSeries) -> Tuple[LaurentSeries, LaurentSeries]:
    try:
        nu = order_nu(g)
    except NotInvertibleError:
        raise NotAdmissibleError(f"{g} is not invertible, so it is not a parameter")
    if nu != 1:
        raise NotAdmissibleError(f"substitution needs order 1, got {nu}")
    g0 = g.mod_nil()
    return g0, g - g0


class PowerTable:
    """Powers g^k for integer k of a parameter g = g0 + u, via the binomial
    expansion in the nilpotent part u (finite because u is nilpotent).

    ``cap`` bounds the degrees kept in intermediate products; ``None`` keeps
    everything and is only used when all involved series are exact and the
    mod-nil part is a monomial (so every power stays finite).
    """

    def __init__(self, g: LaurentSeries, cap: Optional[Prec]):
        self.g0, self.u = _split_parameter(g)
        self.ring = g.ring
        self.cap = cap
        self.M = g.ring.nil_index
        self._pos = {0: LaurentSeries.one(self.ring)}
        self._neg = {0: LaurentSeries.one(self.ring)}
        self._g0inv: Optional[LaurentSeries] = None
        self._upow = [LaurentSeries.one(self.ring)]
        self._cache: Dict[int, LaurentSeries] = {}

    @staticmethod
    def cap_for(g: LaurentSeries, target: Prec, lowest_power: int) -> Prec:
        """An internal cap that keeps powers >= ``lowest_power`` correct below ``target``."""
        u = g - g.mod_nil()
        depth = max(0, -u.min_deg) if u.coeffs else 0
        M = g.ring.nil_index
        return target + (M - 1) * (depth + 1) + max(0, M - lowest_power) + 2

    def _mul(self, a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
        return a.mul(b, self.cap)

    def g0_power(self, k: int) -> LaurentSeries:
        if k >= 0:
            table, base = self._pos, self.g0
        else:
            if self._g0inv is None:
                self._g0inv = invert(self.g0, prec=INF if self.cap is None else self.cap)
            table, base, k = self._neg, self._g0inv, -k
        top = max(table)
        while top < k:
            table[top + 1] = self._mul(table[top], base)
            top += 1
        return table[k]

    def u_power(self, i: int) -> LaurentSeries:
        while len(self._upow) <= i:
            self._upow.append(self._mul(self._upow[-1], self.u))
        return self._upow[i]

    def nil_terms(self) -> int:
        """Number of binomial terms that can be nonzero."""
        return 1 if self.u.is_zero() else self.M

    def power(self, k: int) -> LaurentSeries:
        got = self._cache.get(k)
        if got is not None:
            return got
        total = LaurentSeries.zero(self.ring)
        terms = self.nil_terms() if k < 0 else min(self.nil_terms(), k + 1)
        for i in range(terms):
            ui = self.u_power(i)
            if ui.is_zero():
                break
            total = total + self._mul(self.g0_power(k - i), ui).scale(math.comb(k, i) if k >= 0 else _binom(k, i))
        if self.cap is not None:
            total = total.truncate(self.cap)
        self._cache[k] = total
        return total


def _binom(k: int, i: int) -> int:
    """Generalized binomial coefficient for any integer k."""
    out = 1
    for j in range(i):
        out = out * (k - j)
    return out // math.factorial(i)


def _exact_substitution(f: LaurentSeries, g0: LaurentSeries, u: LaurentSeries) -> bool:
    """Every power needed is a finite sum: g0 is a monomial, or f has no negative degrees."""
    if not (f.is_exact() and g0.is_exact() and u.is_exact()):
        return False
    if set(g0.coeffs) == {1}:
        return True
    return not f.coeffs or min(f.coeffs) >= 0


def compose(f: LaurentSeries, g: LaurentSeries, prec: Optional[Prec] = None) -> LaurentSeries:
    """The substitution f(g(t)) for a parameter g of order one."""
    f._check(g)
    target = _target(prec)
    g0, u = _split_parameter(g)
    if g.prec != INF:
        return _compose_inexact(f, g, target)
    if _exact_substitution(f, g0, u):
        cap = None
    else:
        cap = PowerTable.cap_for(g, target, min(f.coeffs, default=0))
    table = PowerTable(g, cap)
    result = LaurentSeries.zero(g.ring)
    for d, c in f.items():
        result = result + table.power(d).scale(c)
    if f.prec != INF:
        # the unknown tail of f contributes at degrees >= f.prec - (depth of u powers)
        tail_start = f.prec
        worst = tail_start
        for i in range(table.nil_terms()):
            ui = table.u_power(i)
            if ui.is_zero():
                break
            worst = min(worst, tail_start - i + ui.min_deg)
        result = result.truncate(worst)
    if not result.is_exact():
        result = result.truncate(target)
    return result


def _compose_inexact(f: LaurentSeries, g: LaurentSeries, target: Prec) -> LaurentSeries:
    """f(g) for g known below Pg: substitute the known polynomial gp, then bound
    the effect of the unknown tail d = O(t^Pg) by Taylor expansion,
    f(gp + d) - f(gp) = f'(gp) d + O(t^(2 Pg + ord f - 2 - S)),
    where every power gp^m has order >= m - S, S = (M - 1)(depth of u + 1).
    """
    Pg = g.prec
    gp = g.with_prec(INF)
    if target == INF:
        target = Pg + max(0, -f.min_deg) + 1 if f.coeffs else Pg
    result = compose(f, gp, prec=target)
    fk = f.with_prec(INF)
    if not fk.coeffs or set(fk.coeffs) == {0}:
        return result
    u = gp - gp.mod_nil()
    depth = max(0, -u.min_deg) if u.coeffs else 0
    S = (g.ring.nil_index - 1) * (depth + 1)
    d1 = compose(derivative(fk), gp, prec=max(1, target - Pg + 1))
    o1 = d1.min_deg if d1.coeffs else d1.prec
    bound = min(Pg + o1, 2 * Pg + fk.min_deg - 2 - S)
    return result.truncate(bound)


def comp_inverse(g: LaurentSeries, prec: Optional[Prec] = None) -> LaurentSeries:
    """Compositional inverse psi with g(psi(t)) = t."""
    target = _target(prec)
    g0, u = _split_parameter(g)
    ring = g.ring
    t = LaurentSeries.t(ring)
    c1 = g0[1]
    if g0.is_exact() and set(g0.coeffs) == {1}:
        psi = LaurentSeries.monomial(ring, 1, ring.const(1 / c1.constant_term))
    elif u.is_zero():
        return _reversion_mod_nil(g0, target)
    else:
        psi = LaurentSeries.zero(ring, prec=0)
    if u.is_zero():
        return psi
    dg = derivative(g)
    if g.is_exact() and set(g0.coeffs) == {1}:
        # monomial g0 and nilpotent u: Newton terminates on an exact Laurent polynomial
        for _ in range(ring.nil_index + 2):
            err = compose(g, psi) - t
            if err.is_zero():
                return psi
            psi = psi - err * invert(compose(dg, psi), prec=INF)
        raise ArithmeticError("nil-lifting of the compositional inverse did not terminate")
    # Newton on exact polynomial iterates at an inflated precision P.  Once
    # g(psi) = t + e with e = O(t^P), psi - g^-1 = g^-1(t + e) - g^-1(t) has
    # order >= P - 1 + min(ord psi, 1), which fixes the certified precision.
    M = ring.nil_index
    depth = max(0, -u.min_deg)
    if target == INF:
        raise PrecisionError("the compositional inverse of a non-monomial parameter is an infinite series",
                             required=None)
    P = target + (M - 1) * (depth + 1) + 2
    if psi.prec < P:
        psi = _reversion_mod_nil(g0, P)
    psi = psi.with_prec(INF)
    # psi is exact and kept below Q > P: a truncation at Q disturbs g(psi) only
    # from degree P on.  err and the inverse derivative are taken further still
    # to make up for the negative degrees they get multiplied by.
    spread = (M - 1) * (depth + 1)
    Q = P + spread + 2
    P2 = Q + 2 * spread + 2
    for _ in range(4 * (M + 2) + P.bit_length()):
        err = compose(g, psi, prec=P2) - t
        if err.truncate(P).is_known_zero():
            err = err.truncate(P)
            break
        corr = err.mul(invert(compose(dg, psi, prec=P2), prec=P2), cap=Q)
        if corr.is_known_zero():
            raise PrecisionError("compositional inverse stalled; the parameter is too coarse", required=2 * P)
        psi = (psi - corr).truncate(Q).with_prec(INF)
    else:
        raise ArithmeticError("nil-lifting of the compositional inverse did not terminate")
    lowest = min(psi.min_deg, 1) if psi.coeffs else 1
    return psi.truncate(min(target, err.prec - 1 + lowest))


def _reversion_mod_nil(g0: LaurentSeries, target: Prec) -> LaurentSeries:
    """Newton reversion of a rational power series with g0 = c1 t + O(t^2)."""
    ring = g0.ring
    if g0.coeffs and min(g0.coeffs) < 1:
        raise NotAdmissibleError("mod-nil part of a parameter must start at t")
    t = LaurentSeries.t(ring)
    c1 = g0[1].constant_term
    dg0 = derivative(g0)
    goal = int(min(target, g0.prec))
    psi = LaurentSeries.monomial(ring, 1, ring.const(1 / c1))
    p = 2
    while p < goal:
        p = min(2 * p, goal)
        exact_psi = psi.with_prec(INF)
        err = compose(g0, exact_psi, prec=p) - t
        den = compose(dg0, exact_psi, prec=p)
        psi = (exact_psi - err * invert(den, prec=p)).truncate(p)
    err = (compose(g0, psi.with_prec(INF), prec=goal) - t).truncate(goal)
    if not err.is_known_zero():
        raise ArithmeticError("reversion failed to converge")
    return psi.truncate(min(goal, err.prec))


# -- canonical factorizations -----------------------------------------------------


@dataclass(frozen=True)
class UnitFactorization:
    """h = v_minus * a0 * t^n * v_plus."""

    n: int
    a0: RingElem
    v_minus: LaurentSeries
    v_plus: LaurentSeries

    def recompose(self) -> LaurentSeries:
        return (self.v_minus * self.v_plus).scale(self.a0).shift(self.n)


def factorize_unit(h: LaurentSeries, prec: Optional[Prec] = None) -> UnitFactorization:
    """h = v_minus * a0 * t^nu * v_plus; ``prec`` targets the precision of v_plus."""
    nu = order_nu(h)
    target = _target(prec)
    ring = h.ring
    k = h.shift(-nu)
    v_minus = LaurentSeries.one(ring)
    inv_minus = LaurentSeries.one(ring)
    for _ in range(2 * ring.nil_index + 2):
        w = k * inv_minus
        neg = w.negative_part()
        if neg.is_zero():
            break
        # only the negative part of the correction is kept, so it is exact
        corr = (neg * invert(w.nonnegative_part(), prec=1 - neg.min_deg)).negative_part()
        step = LaurentSeries.one(ring) + corr
        v_minus = v_minus * step
        inv_minus = inv_minus * invert(step, prec=INF)
    else:
        raise ArithmeticError("negative-part factorization did not converge")
    w = k * inv_minus
    a0 = w[0]
    v_plus = w.scale(invert_unit(a0))
    if not v_plus.is_exact():
        v_plus = v_plus.truncate(max(target, 1))
    return UnitFactorization(nu, a0, v_minus, v_plus)


def in_v_minus(f: LaurentSeries) -> bool:
    if f.prec < 1:
        return False
    return f[0] == 1 and all(d <= 0 and (d == 0 or c.is_nilpotent()) for d, c in f.coeffs.items())


def in_v_plus(f: LaurentSeries) -> bool:
    return f.prec >= 1 and f[0] == 1 and all(d >= 0 for d in f.coeffs)


def is_aut_plus(phi: LaurentSeries) -> bool:
    if phi.prec < 2 or any(d < 0 for d in phi.coeffs):
        return False
    return phi[0].is_nilpotent() and phi[1].is_unit()


def is_aut_minus(phi: LaurentSeries) -> bool:
    if not phi.is_exact():
        return False
    for d, c in phi.coeffs.items():
        if d == 1:
            if c != 1:
                return False
        elif d > 0 or d == 0 or not c.is_nilpotent():
            return False
    return 1 in phi.coeffs


def _peel_negative(r: LaurentSeries, phi0: LaurentSeries) -> LaurentSeries:
    """The negative-degree d with negative_part(d o phi0) = r (r has only negative degrees).

    Triangular in the degree: d_j t^-j o phi0 starts with d_j c^-j t^-j, c = phi0[1].
    """
    ring = r.ring
    c = phi0[1].constant_term
    out = LaurentSeries.zero(ring)
    rest = r
    while not rest.is_zero():
        j = -rest.min_deg
        term = LaurentSeries.monomial(ring, -j, rest[-j].scale(c ** j))
        out = out + term
        rest = rest - compose(term, phi0, prec=0).negative_part()
        if not rest.is_zero() and -rest.min_deg >= j:
            raise ArithmeticError("peeling of the negative part did not progress")
    return out


def factorize_aut(phi: LaurentSeries, prec: Optional[Prec] = None,
                  start: Optional[LaurentSeries] = None) -> Tuple[LaurentSeries, LaurentSeries]:
    """Split phi = phi_minus o phi_plus (phi_minus applied last).

    phi_plus has no negative terms, nilpotent constant term and unit linear
    term; phi_minus = t + n with n of negative degree and nilpotent
    coefficients.  ``start`` is the initial guess for phi_plus (default: the
    nonnegative part of phi).

    The candidate (plus, n) is kept exact and corrected from the residual
    R = phi - plus - n(plus): its negative part fixes the correction of n by
    peeling against phi0 = phi mod nilpotents, the rest goes into plus.  Each
    round pushes R one step deeper into the nilradical.  The loop stops once R
    vanishes below P; a perturbation of order P changes the true factors by
    O(t^(P - s)) with s = M (depth + 2), which leaves phi_minus exact and fixes
    the precision of phi_plus.
    """
    _split_parameter(phi)
    target = _target(prec)
    ring = phi.ring
    t = LaurentSeries.t(ring)
    if phi.negative_part().is_zero() and start is None:
        return phi.nonnegative_part(), t
    M = ring.nil_index
    depth = max(0, -phi.min_deg)
    s = M * (depth + 2)
    if phi.prec != INF:
        target = min(target, phi.prec - s)
        if target < 1:
            raise PrecisionError("phi is too coarse to factor", required=2 * s + depth + 4)
    if target == INF:
        raise PrecisionError("phi_plus is an infinite series here; give a precision", required=None)
    spread = (M - 1) * (depth + 1)
    checked = target + s
    P = checked + spread + 2
    phi0 = phi.mod_nil()
    plus = (phi.nonnegative_part() if start is None else start).truncate(P).with_prec(INF)
    n = LaurentSeries.zero(ring)
    for _ in range(M + 4):
        R = phi - plus - compose(n, plus, prec=P) if n.coeffs else phi - plus
        R = R.truncate(P)
        if R.truncate(checked).is_known_zero():
            if phi.is_exact() and compose(t + n, plus) == phi:
                return plus, t + n
            return plus.truncate(target), t + n
        dn = _peel_negative(R.negative_part(), phi0)
        step = (R - compose(dn, phi0, prec=P)).nonnegative_part() if dn.coeffs else R.nonnegative_part()
        plus = (plus + step).truncate(P).with_prec(INF)
        n = n + dn
    raise ArithmeticError("automorphism factorization did not converge")


# -- logarithms ---------------------------------------------------------------------


def log_one_plus(x: LaurentSeries, prec: Optional[Prec] = None) -> LaurentSeries:
    """log(1 + x) where x has nilpotent coefficients or positive order."""
    ring = x.ring
    nil = all(c.is_nilpotent() for c in x.coeffs.values())
    if nil and (x.is_exact() or prec is None):
        terms, cap = ring.nil_index - 1, None if x.is_exact() else x.prec
    elif x.min_deg >= 1:
        target = _target(prec)
        terms, cap = int(min(target, x.prec)), target
    else:
        raise ValueError("log(1 + x) needs nilpotent coefficients or positive order")
    result = LaurentSeries.zero(ring)
    power = LaurentSeries.one(ring)
    for k in range(1, terms + 1):
        power = power.mul(x, cap)
        if power.is_zero():
            break
        result = result + power.scale(mpq(1 if k % 2 else -1, k))
    if cap is not None:
        result = result.truncate(cap)
    return result
