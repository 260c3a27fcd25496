"""1-cocycles Lambda and Omega, their cup products through the symbol, and coboundaries.

Group elements act on Laurent series through their automorphism only:
``x . f = f(x.phi)``.  With that action

* Lambda(h, phi) = h and Omega(h, phi) = phi' are 1-cocycles with values in
  the units of A((t));
* the cup product <l1, l2>(x, y) = CC(l1(x), x . l2(y)) is a 2-cocycle with
  trivial coefficients in the units of A.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .ccsymbol import cc
from .groupg import GroupElem, g_mul
from .laurent import LaurentSeries, PrecisionError, compose, derivative, invert, working_precision, default_precision
from .nilring import RingElem, invert_unit

LAMBDA = "Lambda"
OMEGA = "Omega"
ONE_COCYCLES = (LAMBDA, OMEGA)
PAIRS = {"LL": (LAMBDA, LAMBDA), "LO": (LAMBDA, OMEGA), "OO": (OMEGA, OMEGA)}

MAX_PREC = 4096


def adaptive(fn: Callable[[], object], start: Optional[int] = None, limit: int = MAX_PREC):
    """Run ``fn`` under growing working precision until it stops running out."""
    prec = start or default_precision()
    seen = set()
    while True:
        try:
            with working_precision(prec):
                return fn()
        except PrecisionError as exc:
            # the same complaint twice means an input, not the working
            # precision, is too coarse; let an outer caller deal with it
            key = (str(exc), exc.required)
            if key in seen:
                raise
            seen.add(key)
            nxt = max(2 * prec, (exc.required or 0) + 8)
            if nxt > limit:
                raise
            prec = nxt


def eval_one_cocycle(tag: str, x: GroupElem) -> LaurentSeries:
    if tag == LAMBDA:
        return x.h
    if tag == OMEGA:
        return derivative(x.phi)
    raise ValueError(f"unknown 1-cocycle {tag!r}")


@dataclass(frozen=True)
class OneCocycle:
    tag: str
    fn: Callable[[GroupElem], LaurentSeries]

    def __call__(self, x: GroupElem) -> LaurentSeries:
        return self.fn(x)


@dataclass(frozen=True)
class TwoCocycle:
    tag: str
    fn: Callable[[GroupElem, GroupElem], RingElem]

    def __call__(self, x: GroupElem, y: GroupElem) -> RingElem:
        return self.fn(x, y)


def one_cocycle(tag: str) -> OneCocycle:
    if tag not in ONE_COCYCLES:
        raise ValueError(f"unknown 1-cocycle {tag!r}")
    return OneCocycle(tag, lambda x: eval_one_cocycle(tag, x))


def cup_cocycle(tag1: str, tag2: str, x: GroupElem, y: GroupElem) -> RingElem:
    """CC(l1(x), l2(y)(x.phi))."""

    def run():
        first = eval_one_cocycle(tag1, x)
        second = compose(eval_one_cocycle(tag2, y), x.phi)
        return cc(first, second)

    return adaptive(run)


def cup(tag1: str, tag2: str) -> TwoCocycle:
    name = "cup" + tag1[0] + tag2[0]
    return TwoCocycle(name, lambda x, y: cup_cocycle(tag1, tag2, x, y))


def named_two_cocycle(name: str) -> TwoCocycle:
    """``LL``, ``LO``, ``OO`` (cup products) or ``D`` (determinant cocycle)."""
    if name in PAIRS:
        return cup(*PAIRS[name])
    if name == "D":
        from .detext import det_cocycle_D

        return TwoCocycle("detD", det_cocycle_D)
    raise ValueError(f"unknown 2-cocycle {name!r}")


# -- coboundaries ---------------------------------------------------------------------

TRIVIAL = "trivial_Gm"
LGM = "LGm_with_action"


def act(x: GroupElem, f: LaurentSeries) -> LaurentSeries:
    """The action on the units of A((t)) through the automorphism part."""
    return compose(f, x.phi)


def _series_inverse(f: LaurentSeries) -> LaurentSeries:
    return invert(f)


def _known_to_constant(value: LaurentSeries) -> LaurentSeries:
    # a verdict on "= 1" needs at least the constant term
    if value.prec < 1:
        raise PrecisionError(f"coboundary only known below t^{value.prec}", required=None)
    return value


def delta(q: int, cochain: Callable, elems: Sequence[GroupElem], module: str = TRIVIAL):
    """Value of the coboundary of a q-cochain on q+1 group elements.

    Trivial coefficients return a unit of A; ``LGm_with_action`` returns a
    Laurent series (identity = 1 up to its precision).
    """
    if len(elems) != q + 1:
        raise ValueError(f"delta_{q} needs {q + 1} group elements")
    if module not in (TRIVIAL, LGM):
        raise ValueError(f"unknown coefficient module {module!r}")

    def run():
        if q == 1:
            g1, g2 = elems
            g12 = g_mul(g1, g2)
            if module == TRIVIAL:
                return cochain(g2) * invert_unit(cochain(g12)) * cochain(g1)
            return _known_to_constant(act(g1, cochain(g2)) * _series_inverse(cochain(g12)) * cochain(g1))
        if q == 2:
            g1, g2, g3 = elems
            g12 = g_mul(g1, g2)
            g23 = g_mul(g2, g3)
            if module == TRIVIAL:
                num = cochain(g2, g3) * cochain(g1, g23)
                den = cochain(g12, g3) * cochain(g1, g2)
                return num * invert_unit(den)
            num = act(g1, cochain(g2, g3)) * cochain(g1, g23)
            den = cochain(g12, g3) * cochain(g1, g2)
            return _known_to_constant(num * _series_inverse(den))
        raise ValueError("only q = 1 and q = 2 are supported")

    return adaptive(run)


def is_module_identity(value) -> bool:
    if isinstance(value, LaurentSeries):
        one = LaurentSeries.one(value.ring)
        return value.agrees(one) and value.prec > 0
    return value == 1


def perturbed(c: TwoCocycle) -> TwoCocycle:
    """c(x, y) times the constant factor of x.h: not a cocycle in general.

    Its coboundary is F(y) / F(xy) for F(x) = constant factor of x.h, which is
    nontrivial as soon as that factor is not multiplicative.
    """
    from .laurent import factorize_unit

    def fn(x, y):
        return c(x, y) * factorize_unit(x.h, prec=1).a0

    return TwoCocycle(c.tag + "+perturbed", fn)


def universal_pullback(tag: str, x: GroupElem) -> GroupElem:
    """Phi_l(h, phi) = (l(h, phi), phi)."""
    return GroupElem(eval_one_cocycle(tag, x), x.phi)
