"""Finite-dimensional commutative Q-algebras with nilpotent generators.

A ring is ``Q[x_1, ..., x_k] / (x_i^{e_i}, optional total-degree cap)``.  The
quotient is by a monomial ideal, so the surviving monomials form an explicit
basis and every element is a dense vector of exact rationals over that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction, "mpq"]

ZERO = mpq(0)
ONE = mpq(1)


class RingError(ValueError):
    """Raised for mismatched rings or illegal ring operations."""


class NotUnitError(RingError):
    pass


class NotNilpotentError(RingError):
    pass


def to_mpq(value) -> mpq:
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def format_rational(q: mpq, parens: bool = True) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    text = f"{q.numerator}/{q.denominator}"
    return f"({text})" if parens else text


@dataclass(frozen=True)
class RingSpec:
    """Q[gens]/(g_i^{e_i}) with an optional cap on total degree.

    ``cap_generators`` restricts which generators count towards the cap; it is
    ``None`` (all of them) for every ring written by hand and only differs for
    rings produced by :func:`adjoin_duals` over a capped base.
    """

    generators: Tuple[str, ...] = ()
    exponents: Tuple[int, ...] = ()
    cap: Optional[int] = None
    cap_generators: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if len(self.generators) != len(self.exponents):
            raise RingError("one nilpotency exponent is needed per generator")
        if len(set(self.generators)) != len(self.generators):
            raise RingError("generator names must be distinct")
        if any(e < 1 for e in self.exponents):
            raise RingError("nilpotency exponents must be >= 1")
        if self.cap is not None and self.cap < 1:
            raise RingError("degree cap must be >= 1")
        if self.cap_generators is not None:
            cg = tuple(self.cap_generators)
            if not set(cg) <= set(self.generators):
                raise RingError("cap generators must be ring generators")
            if self.cap is None:
                raise RingError("cap generators given without a cap")
            object.__setattr__(self, "cap_generators", cg)

    # -- basis -------------------------------------------------------------

    @cached_property
    def _cap_mask(self) -> Tuple[bool, ...]:
        if self.cap_generators is None:
            return tuple(True for _ in self.generators)
        return tuple(g in self.cap_generators for g in self.generators)

    def _alive(self, mono: Monomial) -> bool:
        if any(a >= e for a, e in zip(mono, self.exponents)):
            return False
        if self.cap is not None:
            deg = sum(a for a, m in zip(mono, self._cap_mask) if m)
            if deg >= self.cap:
                return False
        return True

    @cached_property
    def basis(self) -> Tuple[Monomial, ...]:
        monos = [m for m in product(*(range(e) for e in self.exponents)) if self._alive(m)]
        monos.sort(key=lambda m: (sum(m), tuple(-a for a in m)))
        return tuple(monos)

    @cached_property
    def index(self) -> Dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(sum(m) for m in self.basis)

    @cached_property
    def nil_index(self) -> int:
        """Least M with N^M = 0 for the maximal ideal N."""
        return max(self.degrees) + 1

    @cached_property
    def _table(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        rows = []
        for a in self.basis:
            row = []
            for j, b in enumerate(self.basis):
                m = tuple(x + y for x, y in zip(a, b))
                k = self.index.get(m)
                if k is not None:
                    row.append((j, k))
            rows.append(tuple(row))
        return tuple(rows)

    # -- constructors ------------------------------------------------------

    def const(self, value: Scalar) -> "RingElem":
        c = [ZERO] * self.dim
        c[0] = to_mpq(value)
        return RingElem(self, tuple(c))

    @property
    def zero(self) -> "RingElem":
        return RingElem(self, (ZERO,) * self.dim)

    @property
    def one(self) -> "RingElem":
        return self.const(1)

    def gen(self, name: str) -> "RingElem":
        if name not in self.generators:
            raise RingError(f"unknown generator {name!r}")
        mono = tuple(1 if g == name else 0 for g in self.generators)
        return self.monomial(mono)

    def monomial(self, mono: Monomial, coeff: Scalar = 1) -> "RingElem":
        c = [ZERO] * self.dim
        k = self.index.get(tuple(mono))
        if k is not None:
            c[k] = to_mpq(coeff)
        return RingElem(self, tuple(c))

    def elem(self, coeffs: Dict[Monomial, Scalar]) -> "RingElem":
        c = [ZERO] * self.dim
        for mono, q in coeffs.items():
            mono = tuple(mono)
            if len(mono) != len(self.generators):
                raise RingError(f"monomial {mono} has the wrong arity")
            k = self.index.get(mono)
            if k is not None:
                c[k] += to_mpq(q)
        return RingElem(self, tuple(c))

    def coerce(self, value) -> "RingElem":
        """Bring a scalar or an element of a subring into this ring."""
        if isinstance(value, RingElem):
            if value.spec == self:
                return value
            return _embed(value, self)
        return self.const(value)

    def monomial_str(self, mono: Monomial) -> str:
        parts = []
        for g, a in zip(self.generators, mono):
            if a == 1:
                parts.append(g)
            elif a > 1:
                parts.append(f"{g}^{a}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.generators:
            return "Q"
        gens = ", ".join(f"{g}^{e}=0" for g, e in zip(self.generators, self.exponents))
        if self.cap is not None:
            if self.cap_generators is None:
                gens += f"; cap={self.cap}"
            else:
                gens += f"; cap({','.join(self.cap_generators)})={self.cap}"
        return f"Q[{gens}]"


QQ = RingSpec()


class RingElem:
    """An element of a :class:`RingSpec`, stored densely over its basis."""

    __slots__ = ("spec", "c")

    def __init__(self, spec: RingSpec, c: Tuple[mpq, ...]):
        self.spec = spec
        self.c = c

    # -- inspection --------------------------------------------------------

    @property
    def coeffs(self) -> Dict[Monomial, mpq]:
        return {m: q for m, q in zip(self.spec.basis, self.c) if q}

    @property
    def constant_term(self) -> mpq:
        return self.c[0]

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def is_unit(self) -> bool:
        return self.c[0] != 0

    def is_nilpotent(self) -> bool:
        return self.c[0] == 0

    def weight(self) -> float:
        """Lowest total degree among the monomials present (inf for zero)."""
        degs = self.spec.degrees
        return min((degs[i] for i, q in enumerate(self.c) if q), default=float("inf"))

    def nil_part(self) -> "RingElem":
        return RingElem(self.spec, (ZERO,) + self.c[1:])

    def nil_index(self) -> int:
        """Least k with self**k == 0; raises for units."""
        if self.is_unit():
            raise NotNilpotentError("a unit is not nilpotent")
        k, p = 1, self
        while p:
            p = p * self
            k += 1
        return k

    # -- arithmetic --------------------------------------------------------

    def _other(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.spec is not self.spec and other.spec != self.spec:
                raise RingError(f"ring mismatch: {self.spec} vs {other.spec}")
            return other
        return self.spec.const(other)

    def __add__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        o = self._other(other)
        return RingElem(self.spec, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        o = self._other(other)
        return RingElem(self.spec, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self._other(other) - self

    def __neg__(self):
        return RingElem(self.spec, tuple(-a for a in self.c))

    def scale(self, q) -> "RingElem":
        q = to_mpq(q)
        return RingElem(self.spec, tuple(a * q for a in self.c))

    def __mul__(self, other):
        if not isinstance(other, RingElem):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            return self.scale(other)
        o = self._other(other)
        n = len(self.c)
        if n == 1:
            return RingElem(self.spec, (self.c[0] * o.c[0],))
        res = [ZERO] * n
        table = self.spec._table
        oc = o.c
        for i, a in enumerate(self.c):
            if a:
                for j, k in table[i]:
                    b = oc[j]
                    if b:
                        res[k] += a * b
        return RingElem(self.spec, tuple(res))

    def __rmul__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            return invert_unit(self) ** (-k)
        result, base = self.spec.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, RingElem):
            return self * invert_unit(other)
        return self.scale(1 / to_mpq(other))

    def __rtruediv__(self, other):
        return self.spec.const(other) * invert_unit(self)

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.spec == other.spec and self.c == other.c
        try:
            q = to_mpq(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c[0] == q and not any(self.c[1:])

    def __hash__(self):
        return hash((self.spec, self.c))

    def __repr__(self):
        return f"RingElem({self})"

    def __str__(self):
        terms = []
        for mono, q in zip(self.spec.basis, self.c):
            if not q:
                continue
            name = self.spec.monomial_str(mono)
            if not name:
                terms.append(format_rational(q))
            elif q == 1:
                terms.append(name)
            elif q == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{format_rational(q)}*{name}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


_SCALARS = (int, Fraction, type(ONE), RingElem)


def ring_arith(a: RingElem, b: RingElem, op: str) -> RingElem:
    if a.spec != b.spec:
        raise RingError(f"ring mismatch: {a.spec} vs {b.spec}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise RingError(f"unknown ring operation {op!r}")


def invert_unit(a: RingElem) -> RingElem:
    c = a.constant_term
    if c == 0:
        raise NotUnitError(f"{a} is not a unit")
    # a = c(1 + m) with m nilpotent; 1/(1+m) is a finite geometric sum
    m = a.nil_part().scale(1 / c)
    result = a.spec.one
    term = a.spec.one
    while True:
        term = -(term * m)
        if not term:
            break
        result = result + term
    return result.scale(1 / c)


def exp_nil(a: RingElem) -> RingElem:
    if a.is_unit():
        raise NotNilpotentError(f"exp_nil needs a nilpotent argument, got {a}")
    result = a.spec.one
    term = a.spec.one
    k = 0
    while True:
        k += 1
        term = (term * a).scale(mpq(1, k))
        if not term:
            return result
        result = result + term


def log_one_plus_nil(a: RingElem) -> RingElem:
    """log(1 + a) for nilpotent a."""
    if a.is_unit():
        raise NotNilpotentError(f"log_one_plus_nil needs a nilpotent argument, got {a}")
    result = a.spec.zero
    power = a.spec.one
    k = 0
    while True:
        k += 1
        power = power * a
        if not power:
            return result
        sign = 1 if k % 2 else -1
        result = result + power.scale(mpq(sign, k))


def exp_log(a: RingElem, op: str) -> RingElem:
    if op == "exp_nil":
        return exp_nil(a)
    if op == "log_one_plus_nil":
        return log_one_plus_nil(a)
    raise RingError(f"unknown operation {op!r}")


# -- base change --------------------------------------------------------------


def adjoin_duals(
    spec: RingSpec, names: Sequence[str], exponents: Optional[Sequence[int]] = None
) -> RingSpec:
    """Adjoin new nilpotent generators (default: square-zero) to ``spec``."""
    names = tuple(names)
    exponents = tuple(exponents) if exponents is not None else (2,) * len(names)
    clash = set(names) & set(spec.generators)
    if clash:
        raise RingError(f"generator names already in use: {sorted(clash)}")
    if len(exponents) != len(names):
        raise RingError("one exponent per adjoined generator")
    cap_gens = None
    if spec.cap is not None:
        cap_gens = spec.cap_generators or spec.generators
    return RingSpec(spec.generators + names, spec.exponents + exponents, spec.cap, cap_gens)


def _embed(x: RingElem, target: RingSpec) -> RingElem:
    src = x.spec
    pos = []
    for g in src.generators:
        if g not in target.generators:
            raise RingError(f"{src} is not a subring of {target}")
        pos.append(target.generators.index(g))
    out: Dict[Monomial, mpq] = {}
    for mono, q in x.coeffs.items():
        m = [0] * len(target.generators)
        for p, a in zip(pos, mono):
            m[p] = a
        m = tuple(m)
        if m not in target.index:
            raise RingError(f"monomial {mono} of {src} dies in {target}")
        out[m] = q
    return target.elem(out)


def coerce(x: RingElem, target: RingSpec) -> RingElem:
    return target.coerce(x)


def extract_coeff(x: RingElem, monomial: Dict[str, int], base: RingSpec) -> RingElem:
    """Coefficient over ``base`` of the monomial in the adjoined generators.

    ``monomial`` maps each generator of ``x.spec`` that is not in ``base`` to its
    exponent (missing names mean exponent 0).
    """
    ext = x.spec
    extra = [g for g in ext.generators if g not in base.generators]
    unknown = set(monomial) - set(extra)
    if unknown:
        raise RingError(f"{sorted(unknown)} are not adjoined generators")
    want = tuple(monomial.get(g, 0) for g in extra)
    base_pos = [ext.generators.index(g) for g in base.generators]
    extra_pos = [ext.generators.index(g) for g in extra]
    out: Dict[Monomial, mpq] = {}
    for mono, q in x.coeffs.items():
        if tuple(mono[p] for p in extra_pos) == want:
            out[tuple(mono[p] for p in base_pos)] = q
    return base.elem(out)


def random_elem(spec: RingSpec, rng, nilpotent: bool = False, unit: bool = False,
                density: float = 0.7, span: int = 3) -> RingElem:
    """Small random element; ``rng`` is a ``random.Random``."""
    c = [ZERO] * spec.dim
    for i in range(1, spec.dim):
        if rng.random() < density:
            c[i] = mpq(rng.randint(-span, span), rng.choice((1, 1, 2)))
    if unit:
        c[0] = mpq(rng.choice([v for v in range(-span, span + 1) if v]), rng.choice((1, 1, 2)))
    elif not nilpotent:
        c[0] = mpq(rng.randint(-span, span), rng.choice((1, 1, 2)))
    return RingElem(spec, tuple(c))
