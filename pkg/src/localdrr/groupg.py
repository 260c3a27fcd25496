"""Pairs (h, phi) acting on Laurent series by f -> h * f(phi), and their Lie algebra.

The automorphism is stored only through phi = phi(t).  Products follow
``(h1, phi1) * (h2, phi2) = (h1 * h2(phi1), phi2(phi1))``, so the composite
automorphism substitutes phi1 into phi2.  Every other module goes through
:func:`g_mul` for this convention.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Optional

from gmpy2 import mpq

from .laurent import (
    INF,
    LaurentSeries,
    NotAdmissibleError,
    Prec,
    comp_inverse,
    compose,
    derivative,
    invert,
    is_aut_minus,
    is_aut_plus,
    is_invertible,
    order_nu,
)
from .nilring import RingError, RingSpec, extract_coeff, random_elem


@dataclass(frozen=True)
class GroupElem:
    h: LaurentSeries
    phi: LaurentSeries

    def __post_init__(self):
        self.h._check(self.phi)
        if not is_invertible(self.h):
            raise ValueError(f"h = {self.h} is not invertible")
        if order_nu(self.phi) != 1:
            raise NotAdmissibleError(f"phi = {self.phi} does not have order one")

    @property
    def ring(self) -> RingSpec:
        return self.h.ring

    @classmethod
    def identity(cls, ring: RingSpec) -> "GroupElem":
        return cls(LaurentSeries.one(ring), LaurentSeries.t(ring))

    @classmethod
    def multiplier(cls, h: LaurentSeries) -> "GroupElem":
        return cls(h, LaurentSeries.t(h.ring))

    @classmethod
    def automorphism(cls, phi: LaurentSeries) -> "GroupElem":
        return cls(LaurentSeries.one(phi.ring), phi)

    def is_identity(self) -> bool:
        return self.h.is_one() and self.phi == LaurentSeries.t(self.ring)

    def is_exact(self) -> bool:
        return self.h.is_exact() and self.phi.is_exact()

    def agrees(self, other: "GroupElem") -> bool:
        return self.h.agrees(other.h) and self.phi.agrees(other.phi)

    def map_coeffs(self, fn, ring: RingSpec) -> "GroupElem":
        return GroupElem(self.h.map_coeffs(fn, ring), self.phi.map_coeffs(fn, ring))

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        return g_mul(self, other)

    def __str__(self):
        return f"(h = {self.h}; phi = {self.phi})"


def g_mul(x: GroupElem, y: GroupElem, prec: Optional[Prec] = None) -> GroupElem:
    x.h._check(y.h)
    h = x.h * compose(y.h, x.phi, prec=prec)
    phi = compose(y.phi, x.phi, prec=prec)
    return GroupElem(h, phi)


def g_inv(x: GroupElem, prec: Optional[Prec] = None) -> GroupElem:
    psi = comp_inverse(x.phi, prec=prec)
    return GroupElem(compose(invert(x.h, prec=prec), psi, prec=prec), psi)


def g_act(x: GroupElem, f: LaurentSeries, prec: Optional[Prec] = None) -> LaurentSeries:
    x.h._check(f)
    return x.h * compose(f, x.phi, prec=prec)


@dataclass(frozen=True)
class Membership:
    in_G0: bool
    in_Gplus: bool
    h_in_power_series: bool
    in_AutPlus_part: bool
    in_AutMinus_part: bool
    nu: int

    def as_dict(self) -> Dict[str, object]:
        return dict(self.__dict__)


def membership(x: GroupElem) -> Membership:
    nu = order_nu(x.h)
    h_plus = all(d >= 0 for d in x.h.coeffs) and x.h.prec >= 1 and x.h[0].is_unit()
    aut_plus = is_aut_plus(x.phi)
    return Membership(
        in_G0=nu == 0,
        in_Gplus=h_plus and aut_plus,
        h_in_power_series=h_plus,
        in_AutPlus_part=aut_plus,
        in_AutMinus_part=is_aut_minus(x.phi),
        nu=nu,
    )


# -- Lie algebra ------------------------------------------------------------------


@dataclass(frozen=True)
class LieElem:
    """s + r d/dt."""

    s: LaurentSeries
    r: LaurentSeries

    def __post_init__(self):
        self.s._check(self.r)

    @property
    def ring(self) -> RingSpec:
        return self.s.ring

    @classmethod
    def function(cls, s: LaurentSeries) -> "LieElem":
        return cls(s, LaurentSeries.zero(s.ring))

    @classmethod
    def vector_field(cls, r: LaurentSeries) -> "LieElem":
        return cls(LaurentSeries.zero(r.ring), r)

    @classmethod
    def e(cls, ring: RingSpec, n: int) -> "LieElem":
        """The function t^n."""
        return cls.function(LaurentSeries.monomial(ring, n))

    @classmethod
    def d(cls, ring: RingSpec, n: int) -> "LieElem":
        """The vector field t^(n+1) d/dt."""
        return cls.vector_field(LaurentSeries.monomial(ring, n + 1))

    def __add__(self, other: "LieElem") -> "LieElem":
        return LieElem(self.s + other.s, self.r + other.r)

    def __sub__(self, other: "LieElem") -> "LieElem":
        return LieElem(self.s - other.s, self.r - other.r)

    def scale(self, c) -> "LieElem":
        return LieElem(self.s.scale(c), self.r.scale(c))

    def is_zero(self) -> bool:
        return self.s.is_known_zero() and self.r.is_known_zero()

    def apply(self, f: LaurentSeries) -> LaurentSeries:
        """The action f -> s f + r f'."""
        return self.s * f + self.r * derivative(f)

    def __str__(self):
        return f"(s = {self.s}; r = {self.r})"


def lie_bracket(z: LieElem, w: LieElem) -> LieElem:
    s = z.r * derivative(w.s) - w.r * derivative(z.s)
    r = z.r * derivative(w.r) - w.r * derivative(z.r)
    return LieElem(s, r)


def lie_to_group(z: LieElem, eps: str, ring: RingSpec) -> GroupElem:
    """(1 + s eps, t + r eps) over ``ring``, which must contain ``eps``."""
    if eps not in ring.generators:
        raise RingError(f"{ring} has no generator {eps!r}")
    e = ring.gen(eps)
    s = z.s.map_coeffs(ring.coerce, ring)
    r = z.r.map_coeffs(ring.coerce, ring)
    h = LaurentSeries.one(ring) + s.scale(e)
    phi = LaurentSeries.t(ring) + r.scale(e)
    return GroupElem(h, phi)


def reduce_to(x: GroupElem, base: RingSpec) -> GroupElem:
    """Set every adjoined generator to zero."""
    return x.map_coeffs(lambda c: extract_coeff(c, {}, base), base)


# -- random elements -------------------------------------------------------------

SHAPES = ("G0", "Gplus", "general")


def _poly(ring: RingSpec, rng: random.Random, lo: int, hi: int, nilpotent_below: int = 0,
          density: float = 0.6) -> Dict[int, object]:
    out = {}
    for d in range(lo, hi + 1):
        if rng.random() < density:
            out[d] = random_elem(ring, rng, nilpotent=d < nilpotent_below, density=0.5, span=2)
    return out


def random_group_elem(spec: RingSpec, shape: str = "G0", seed: int = 0, neg_depth: int = 1,
                      pos_degree: int = 2, max_nu: int = 2) -> GroupElem:
    """A small exact group element determined by its arguments.

    Negative-degree coefficients are nilpotent and reach down to ``-neg_depth``;
    positive degrees go up to ``pos_degree``.  ``shape`` picks G0 (nu(h) = 0),
    Gplus (no negative terms, nilpotent phi(0)) or general (nu(h) in
    [-max_nu, max_nu]).
    """
    if shape not in SHAPES:
        raise ValueError(f"shape must be one of {SHAPES}")
    if neg_depth < 0 or pos_degree < 1 or max_nu < 0:
        raise ValueError("bounds must be nonnegative (pos_degree >= 1)")
    rng = random.Random(f"{shape}:{seed}")
    ring = spec
    depth = 0 if shape == "Gplus" else neg_depth
    nilpotent_only = ring.dim > 1

    a0 = ring.const(mpq(rng.choice((1, -1, 2, -2, 3)), rng.choice((1, 1, 2))))
    h = LaurentSeries.const(ring, a0)
    h_pos = {0: ring.one, **_poly(ring, rng, 1, pos_degree)}
    h = h * LaurentSeries(ring, h_pos)
    if depth and nilpotent_only:
        h_neg = {0: ring.one}
        for d in range(-depth, 0):
            if rng.random() < 0.8:
                h_neg[d] = random_elem(ring, rng, nilpotent=True, density=0.6, span=2)
        h = h * LaurentSeries(ring, h_neg)
    if shape == "general":
        h = h.shift(rng.randint(-max_nu, max_nu))

    c1 = ring.const(mpq(rng.choice((1, 1, -1, 2)), rng.choice((1, 1, 2)))) + random_elem(
        ring, rng, nilpotent=True, density=0.5, span=2)
    phi = {1: c1, **_poly(ring, rng, 2, pos_degree)}
    if nilpotent_only:
        phi[0] = random_elem(ring, rng, nilpotent=True, density=0.5, span=2)
        for d in range(-depth, 0):
            if rng.random() < 0.8:
                phi[d] = random_elem(ring, rng, nilpotent=True, density=0.6, span=2)
    return GroupElem(h, LaurentSeries(ring, phi))


def random_lie_elem(spec: RingSpec, seed: int = 0, lo: int = -3, hi: int = 3) -> LieElem:
    rng = random.Random(f"lie:{seed}")
    s = LaurentSeries(spec, {d: random_elem(spec, rng, span=3) for d in range(lo, hi + 1) if rng.random() < 0.6})
    r = LaurentSeries(spec, {d: random_elem(spec, rng, span=3) for d in range(lo, hi + 1) if rng.random() < 0.6})
    return LieElem(s, r)


def random_series(spec: RingSpec, rng: random.Random, lo: int, hi: int, prec: Prec = INF,
                  nilpotent_below: int = 0) -> LaurentSeries:
    return LaurentSeries(spec, _poly(spec, rng, lo, hi, nilpotent_below), prec)
