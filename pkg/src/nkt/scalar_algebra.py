"""Exact scalar arithmetic: rationals and multivariate rational functions.

Everything downstream (curvature components, coefficient presets, the
classification formulas) is computed in the fraction field of the polynomial
ring Q[n, kappa, lambda, r, mu, a, c, a0, a1, s] modulo the single rewrite
rule s*s -> n, so ``s`` behaves as sqrt(n).  With ``n`` kept symbolic the
quotient is a field, which is what makes division safe everywhere.

Canonical form of a :class:`RationalExpr`:

* the denominator is s-free (an ``s`` in a denominator is cleared by
  multiplying with the conjugate),
* numerator and denominator share no polynomial factor (multivariate GCD),
* the denominator has integer, jointly coprime coefficients and a positive
  leading coefficient in the fixed monomial order.

Two expressions are equal as field elements iff their canonical forms are
identical, so ``==`` is decidable equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Optional, Union

Rational = Fraction

VARIABLES = ("n", "kappa", "lambda", "r", "mu", "a", "c", "a0", "a1", "s")

_NVARS = len(VARIABLES)
_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_N = _VAR_INDEX["n"]
_S = _VAR_INDEX["s"]

RationalLike = Union[int, Fraction, str]


class ScalarAlgebraError(Exception):
    """Base class for errors raised by this module."""


class ZeroDenominator(ScalarAlgebraError, ZeroDivisionError):
    """The denominator polynomial is identically zero."""


class DivisionByZero(ScalarAlgebraError, ZeroDivisionError):
    """Division by zero: either by the zero expression, or a denominator
    vanished at an evaluation point (a side condition was violated)."""


class UnboundIndeterminate(ScalarAlgebraError):
    """An evaluation point does not bind every indeterminate that occurs."""


class NonlinearInVariable(ScalarAlgebraError):
    """solve_linear was given an expression of degree >= 2 in the variable."""


class ExprSyntaxError(ScalarAlgebraError, ValueError):
    """parse_expr could not parse its input."""


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExprSyntaxError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _reduce_exps(exps: tuple) -> tuple:
    # apply s*s -> n
    es = exps[_S]
    if es < 2:
        return exps
    lst = list(exps)
    lst[_N] += es // 2
    lst[_S] = es % 2
    return tuple(lst)


_ZERO_MONO = (0,) * _NVARS


class Poly:
    """Multivariate polynomial over Q in the fixed indeterminate set.

    Terms map exponent tuples to nonzero Fraction coefficients; exponent
    tuples are always reduced under s*s -> n.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[tuple, Fraction]] = None):
        clean: dict = {}
        if terms:
            for exps, coeff in terms.items():
                exps = _reduce_exps(exps)
                acc = clean.get(exps, 0) + coeff
                if acc:
                    clean[exps] = acc
                elif exps in clean:
                    del clean[exps]
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: RationalLike) -> "Poly":
        value = as_rational(value)
        return cls({_ZERO_MONO: value}) if value else cls()

    @classmethod
    def variable(cls, name: str) -> "Poly":
        if name not in _VAR_INDEX:
            raise ExprSyntaxError(
                f"unknown indeterminate {name!r}; expected one of {VARIABLES}"
            )
        exps = [0] * _NVARS
        exps[_VAR_INDEX[name]] = 1
        return cls({tuple(exps): Fraction(1)})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {_ZERO_MONO: Fraction(1)}

    def variables(self) -> frozenset:
        out = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    out.add(VARIABLES[i])
        return frozenset(out)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, 0) + coeff
            if acc:
                out[exps] = acc
            elif exps in out:
                del out[exps]
        poly = Poly.__new__(Poly)
        poly.terms = out
        return poly

    def __neg__(self) -> "Poly":
        poly = Poly.__new__(Poly)
        poly.terms = {e: -c for e, c in self.terms.items()}
        return poly

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = _reduce_exps(tuple(a + b for a, b in zip(e1, e2)))
                acc = out.get(exps, 0) + c1 * c2
                if acc:
                    out[exps] = acc
                elif exps in out:
                    del out[exps]
        poly = Poly.__new__(Poly)
        poly.terms = out
        return poly

    def scale(self, factor: Fraction) -> "Poly":
        if not factor:
            return Poly()
        poly = Poly.__new__(Poly)
        poly.terms = {e: c * factor for e, c in self.terms.items()}
        return poly

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out

    # -- structure ---------------------------------------------------------

    def leading(self) -> tuple:
        """(monomial, coefficient) of the lex-largest monomial."""
        exps = max(self.terms)
        return exps, self.terms[exps]

    def degree(self, name: str) -> int:
        idx = _VAR_INDEX[name]
        return max((e[idx] for e in self.terms), default=0)

    def coefficients_in(self, name: str) -> dict:
        """Split into {power: coefficient Poly} with respect to one variable."""
        idx = _VAR_INDEX[name]
        buckets: dict = {}
        for exps, coeff in self.terms.items():
            power = exps[idx]
            rest = list(exps)
            rest[idx] = 0
            buckets.setdefault(power, {})[tuple(rest)] = coeff
        return {p: Poly(t) for p, t in buckets.items()}

    def split_s(self) -> tuple:
        """Write the polynomial as A + B*s with A, B s-free."""
        a_terms: dict = {}
        b_terms: dict = {}
        for exps, coeff in self.terms.items():
            if exps[_S]:
                rest = list(exps)
                rest[_S] = 0
                b_terms[tuple(rest)] = coeff
            else:
                a_terms[exps] = coeff
        return Poly(a_terms), Poly(b_terms)

    def content(self) -> Fraction:
        """gcd of numerators over lcm of denominators, signed by the leading
        coefficient; dividing by it leaves coprime integer coefficients with
        a positive leading one."""
        if not self.terms:
            return Fraction(1)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = _gcd_int(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _gcd_int(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        if self.leading()[1] < 0:
            content = -content
        return content

    def primitive(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(1 / self.content())

    def evaluate(self, bindings: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            value = coeff
            for i, e in enumerate(exps):
                if not e:
                    continue
                name = VARIABLES[i]
                if name not in bindings:
                    raise UnboundIndeterminate(
                        f"no value supplied for indeterminate {name!r}"
                    )
                value *= bindings[name] ** e
            total += value
        return total

    # -- rendering -----------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, reverse=True):
            coeff = self.terms[exps]
            mono = "*".join(
                f"{VARIABLES[i]}^{e}" if e > 1 else VARIABLES[i]
                for i, e in enumerate(exps)
                if e
            )
            if not mono:
                body = _frac_str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{_frac_str(abs(coeff))}*{mono}"
            pieces.append(("-" if coeff < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly({self})"


def _frac_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _joint_content(*polys: "Poly") -> Fraction:
    num_gcd = 0
    den_lcm = 1
    for poly in polys:
        for c in poly.terms.values():
            num_gcd = _gcd_int(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // _gcd_int(den_lcm, c.denominator)
    return Fraction(num_gcd, den_lcm) if num_gcd else Fraction(1)


# ---------------------------------------------------------------------------
# multivariate GCD (s-free polynomials only)


def _div_exact(num: Poly, den: Poly) -> Poly:
    """Exact multivariate division; raises ArithmeticError on a remainder."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if den.is_one() or num.is_zero():
        return num
    den_lm, den_lc = den.leading()
    if len(den.terms) == 1:
        out: dict = {}
        for exps, coeff in num.terms.items():
            diff = tuple(a - b for a, b in zip(exps, den_lm))
            if any(d < 0 for d in diff):
                raise ArithmeticError("inexact polynomial division")
            out[diff] = coeff / den_lc
        return Poly(out)
    quotient: dict = {}
    rest = num
    while rest.terms:
        lm, lc = rest.leading()
        diff = tuple(a - b for a, b in zip(lm, den_lm))
        if any(d < 0 for d in diff):
            raise ArithmeticError("inexact polynomial division")
        coeff = lc / den_lc
        quotient[diff] = quotient.get(diff, 0) + coeff
        rest = rest - Poly({diff: coeff}) * den
    return Poly(quotient)


def _prem(num: Poly, den: Poly, name: str) -> Poly:
    """Pseudo-remainder of num by den with respect to one variable."""
    deg_d = den.degree(name)
    lead_d = den.coefficients_in(name)[deg_d]
    var = Poly.variable(name)
    rest = num
    while not rest.is_zero() and rest.degree(name) >= deg_d:
        deg_r = rest.degree(name)
        lead_r = rest.coefficients_in(name)[deg_r]
        rest = lead_d * rest - lead_r * (var ** (deg_r - deg_d)) * den
    return rest


def _divides(den: Poly, num: Poly) -> bool:
    # trial division with a step budget: give up (soundly) rather than grind
    # on a near-miss between two large polynomials
    if den.is_one():
        return True
    den_lm, den_lc = den.leading()
    rest = num
    for _ in range(4 * len(num.terms) + 16):
        if rest.is_zero():
            return True
        lm, lc = rest.leading()
        diff = tuple(a - b for a, b in zip(lm, den_lm))
        if any(d < 0 for d in diff):
            return False
        coeff = lc / den_lc
        rest = rest - Poly({diff: coeff}) * den
    return False


def _univariate_gcd_degree(first: list, second: list) -> int:
    """Degree of gcd of two univariate rational polynomials (dense lists)."""

    def degree_of(coeffs):
        d = len(coeffs) - 1
        while d >= 0 and not coeffs[d]:
            d -= 1
        return d

    a, b = list(first), list(second)
    da, db = degree_of(a), degree_of(b)
    if da < db:
        a, b, da, db = b, a, db, da
    while db >= 0:
        lead = b[db]
        while da >= db:
            factor = a[da] / lead
            for i in range(db + 1):
                a[da - db + i] -= factor * b[i]
            a[da] = Fraction(0)
            da = degree_of(a)
        a, b, da, db = b, a, db, da
    return da


def _gcd_degree_bound(a: Poly, b: Poly, name: str) -> int:
    """Upper bound for the gcd degree in ``name`` from a random evaluation.

    A point where neither leading coefficient vanishes maps the gcd into a
    divisor of the univariate image gcd, so a coprime image certifies a
    trivial gcd.  Fixed seeds keep the routine deterministic.
    """
    import random

    others = sorted((a.variables() | b.variables()) - {name})
    da, db = a.degree(name), b.degree(name)
    lead_a = a.coefficients_in(name)[da]
    lead_b = b.coefficients_in(name)[db]
    for seed in range(5):
        rng = random.Random(0x5EED + seed)
        point = {v: Fraction(rng.randint(2, 997)) for v in others}
        if lead_a.evaluate(point) == 0 or lead_b.evaluate(point) == 0:
            continue
        image_a = [Fraction(0)] * (da + 1)
        for power, coeff in a.coefficients_in(name).items():
            image_a[power] = coeff.evaluate(point)
        image_b = [Fraction(0)] * (db + 1)
        for power, coeff in b.coefficients_in(name).items():
            image_b[power] = coeff.evaluate(point)
        return _univariate_gcd_degree(image_a, image_b)
    return min(da, db)


def poly_gcd(first: Poly, second: Poly) -> Poly:
    """Primitive GCD in Q[vars] via the subresultant PRS; inputs s-free."""
    if first.is_zero():
        return second.primitive()
    if second.is_zero():
        return first.primitive()
    names = [v for v in VARIABLES if v != "s" and (first.degree(v) or second.degree(v))]
    if not names:
        return Poly.constant(1)
    # cheap wins first: equal inputs and direct divisibility are the common
    # cases in canonical-form reduction
    prim_first = first.primitive()
    prim_second = second.primitive()
    if prim_first == prim_second:
        return prim_first
    if len(first.terms) <= len(second.terms) and _divides(prim_first, second):
        return prim_first
    if len(second.terms) < len(first.terms) and _divides(prim_second, first):
        return prim_second
    name = names[0]
    # certify the main-variable gcd degree from a random evaluation before
    # paying for content extraction or the PRS; the content is x-free, so a
    # zero bound reduces the answer to the gcd of contents
    bound = 1
    if first.degree(name) >= 1 and second.degree(name) >= 1:
        bound = _gcd_degree_bound(first, second, name)
    cont_a, a = _content_wrt(first, name)
    cont_b, b = _content_wrt(second, name)
    scalar = poly_gcd(cont_a, cont_b)
    if bound == 0:
        return scalar.primitive()
    if a.degree(name) < b.degree(name):
        a, b = b, a
    g = Poly.constant(1)
    h = Poly.constant(1)
    while True:
        delta = a.degree(name) - b.degree(name)
        rem = _prem(a, b, name)
        if rem.is_zero():
            break
        if rem.degree(name) == 0:
            return scalar.primitive()
        a, b = b, _div_exact(rem, g * h ** delta)
        g = a.coefficients_in(name)[a.degree(name)]
        if delta == 0:
            pass  # h unchanged: h^(1-0) * g^0
        elif delta == 1:
            h = g
        else:
            h = _div_exact(g ** delta, h ** (delta - 1))
    return (scalar * _content_wrt(b, name)[1].primitive()).primitive()


def _content_wrt(poly: Poly, name: str) -> tuple:
    """(content, primitive part) with respect to one variable."""
    coeffs = poly.coefficients_in(name)
    content = Poly()
    for c in coeffs.values():
        content = poly_gcd(content, c)
        if content.is_one():
            return content, poly
    return content, _div_exact(poly, content)


def poly_sqrt(poly: Poly) -> Optional[Poly]:
    """Square root of an s-free polynomial, or None if it is not a square.

    The returned root has a positive leading coefficient.
    """
    if poly.is_zero():
        return Poly()
    names = [v for v in VARIABLES if v != "s" and poly.degree(v)]
    if not names:
        value = poly.terms[_ZERO_MONO]
        root = _frac_sqrt(value)
        return None if root is None else Poly.constant(root)
    lm, lc = poly.leading()
    if any(e % 2 for e in lm):
        return None
    lead_root = _frac_sqrt(lc)
    if lead_root is None:
        return None
    root = Poly({tuple(e // 2 for e in lm): lead_root})
    rest = poly - root * root
    top = root.leading()
    for _ in range(10000):
        if rest.is_zero():
            return root
        lm_r, lc_r = rest.leading()
        diff = tuple(a - b for a, b in zip(lm_r, top[0]))
        if any(d < 0 for d in diff):
            return None
        term = Poly({diff: lc_r / (2 * top[1])})
        root = root + term
        rest = poly - root * root
    return None


def _frac_sqrt(value: Fraction) -> Optional[Fraction]:
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# rational expressions


def _gcd_against_sfree(num: Poly, den: Poly) -> Poly:
    """gcd of a possibly s-carrying polynomial with an s-free one."""
    a, b = num.split_s()
    return poly_gcd(poly_gcd(a, b), den)


def _div_with_s(num: Poly, divisor: Poly) -> Poly:
    a, b = num.split_s()
    out = _div_exact(a, divisor)
    if not b.is_zero():
        out = out + _div_exact(b, divisor) * Poly.variable("s")
    return out


class RationalExpr:
    """A multivariate rational function in canonical form (see module docs)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = Poly.constant(1)
        if den.is_zero():
            raise ZeroDenominator("denominator is the zero polynomial")
        if num.is_zero():
            self.num = Poly()
            self.den = Poly.constant(1)
            return
        den_a, den_b = den.split_s()
        if not den_b.is_zero():
            # clear s from the denominator with the conjugate; the norm
            # A^2 - n*B^2 cannot vanish while n stays symbolic
            s = Poly.variable("s")
            conj = den_a - den_b * s
            num = num * conj
            den = den * conj
            if num.is_zero():
                self.num = Poly()
                self.den = Poly.constant(1)
                return
        num_a, num_b = num.split_s()
        common = poly_gcd(poly_gcd(num_a, num_b), den)
        if not common.is_one():
            num_a = _div_exact(num_a, common)
            num_b = _div_exact(num_b, common)
            den = _div_exact(den, common)
            num = num_a + num_b * Poly.variable("s")
        # joint content: integer coefficients overall, coprime across the
        # fraction, denominator's leading coefficient positive
        factor = _joint_content(num, den)
        if den.leading()[1] < 0:
            factor = -factor
        if factor != 1:
            den = den.scale(1 / factor)
            num = num.scale(1 / factor)
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, value: RationalLike) -> "RationalExpr":
        return cls(Poly.constant(value))

    @classmethod
    def variable(cls, name: str) -> "RationalExpr":
        return cls(Poly.variable(name))

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.variables()

    def as_rational(self) -> Fraction:
        if not self.is_constant():
            raise UnboundIndeterminate(f"{self} is not constant")
        if self.num.is_zero():
            return Fraction(0)
        return self.num.terms[_ZERO_MONO] / self.den.terms[_ZERO_MONO]

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalExpr.constant(other)
        if not isinstance(other, RationalExpr):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- field operations -------------------------------------------------

    @staticmethod
    def _coerce(value) -> "RationalExpr":
        if isinstance(value, RationalExpr):
            return value
        if isinstance(value, (int, Fraction)):
            return RationalExpr.constant(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # add over the lcm of the denominators so a shared factor never
        # inflates the numerator handed to canonical reduction
        shared = poly_gcd(self.den, other.den)
        if shared.is_one():
            num = self.num * other.den + other.num * self.den
            den = self.den * other.den
        else:
            self_co = _div_exact(self.den, shared)
            other_co = _div_exact(other.den, shared)
            num = self.num * other_co + other.num * self_co
            den = self.den * other_co
        return RationalExpr(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # cancel across the two fractions before multiplying out
        a_num, a_den = self.num, self.den
        b_num, b_den = other.num, other.den
        g = _gcd_against_sfree(a_num, b_den)
        if not g.is_one():
            a_num = _div_with_s(a_num, g)
            b_den = _div_exact(b_den, g)
        g = _gcd_against_sfree(b_num, a_den)
        if not g.is_one():
            b_num = _div_with_s(b_num, g)
            a_den = _div_exact(a_den, g)
        return RationalExpr(a_num * b_num, a_den * b_den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZero("division by the zero expression")
        return self * RationalExpr(other.den, other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return RationalExpr.constant(1) / self ** (-exponent)
        return RationalExpr(self.num ** exponent, self.den ** exponent)

    # -- rendering ------------------------------------------------------

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        if self.is_constant():
            return _frac_str(self.as_rational())
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalExpr({self})"


ExprLike = Union[RationalExpr, int, Fraction, str]


def expr(value: ExprLike) -> RationalExpr:
    """Coerce an int, Fraction, infix string or RationalExpr to an expression."""
    if isinstance(value, RationalExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalExpr.constant(value)
    if isinstance(value, str):
        return parse_expr(value)
    raise TypeError(f"cannot interpret {value!r} as an expression")


def normalize(value: RationalExpr) -> RationalExpr:
    """Recompute the canonical form (idempotent by construction)."""
    return RationalExpr(value.num, value.den)


def eval_at(value: RationalExpr, bindings: Mapping[str, RationalLike]) -> Fraction:
    """Exact value at a rational point; every occurring indeterminate must
    be bound and the denominator must not vanish there."""
    point = {name: as_rational(v) for name, v in bindings.items()}
    den = value.den.evaluate(point)
    if den == 0:
        raise DivisionByZero(f"denominator of {value} vanishes at {bindings}")
    return value.num.evaluate(point) / den


def substitute(value: RationalExpr, name: str, replacement: ExprLike) -> RationalExpr:
    """Substitute an expression for one indeterminate."""
    replacement = expr(replacement)
    if name not in _VAR_INDEX:
        raise ExprSyntaxError(f"unknown indeterminate {name!r}")
    num = _subs_poly(value.num, name, replacement)
    den = _subs_poly(value.den, name, replacement)
    if den.is_zero():
        raise DivisionByZero(
            f"denominator of {value} vanishes identically after {name} substitution"
        )
    return num / den


def _subs_poly(poly: Poly, name: str, replacement: RationalExpr) -> RationalExpr:
    out = RationalExpr.constant(0)
    for power, coeff in poly.coefficients_in(name).items():
        out = out + RationalExpr(coeff) * replacement ** power
    return out


# ---------------------------------------------------------------------------
# linear solver


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of solving a degree-<=1 equation ``expression = 0``.

    ``unique``      one root, valid where the side condition (the leading
                    coefficient) does not vanish;
    ``identity``    the expression is identically zero;
    ``no_solution`` the expression is nonzero and free of the variable.
    """

    kind: str
    root: Optional[RationalExpr] = None
    side_condition: Optional[RationalExpr] = None

    @classmethod
    def unique(cls, root: RationalExpr, side_condition: RationalExpr) -> "LinearSolution":
        return cls("unique", root, side_condition)

    @classmethod
    def identity(cls) -> "LinearSolution":
        return cls("identity")

    @classmethod
    def no_solution(cls) -> "LinearSolution":
        return cls("no_solution")

    @property
    def is_unique(self) -> bool:
        return self.kind == "unique"

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    def __str__(self) -> str:
        if self.kind == "unique":
            return str(self.root)
        return "any value" if self.kind == "identity" else "no solution"


def solve_linear(value: RationalExpr, name: str) -> LinearSolution:
    """Solve ``value = 0`` for one indeterminate appearing at degree <= 1.

    Zero-ness of a fraction is decided by its numerator, so only the
    numerator polynomial is examined.
    """
    if name not in _VAR_INDEX:
        raise ExprSyntaxError(f"unknown indeterminate {name!r}")
    coeffs = value.num.coefficients_in(name)
    degree = max(coeffs, default=0)
    if degree >= 2:
        raise NonlinearInVariable(f"{value} has degree {degree} in {name}")
    linear = coeffs.get(1, Poly())
    constant = coeffs.get(0, Poly())
    if linear.is_zero():
        return LinearSolution.identity() if constant.is_zero() else LinearSolution.no_solution()
    root = RationalExpr(constant).__neg__() / RationalExpr(linear)
    return LinearSolution.unique(root, RationalExpr(linear))


# ---------------------------------------------------------------------------
# square roots in the s-extension


def sqrt_expr(value: RationalExpr) -> Optional[RationalExpr]:
    """A square root of ``value`` inside Q(vars)[s]/(s^2 - n), or None.

    Handles rational squares, perfect squares of polynomials, odd powers of
    ``n`` absorbed into ``s``, and squares of ``A + B*s`` elements.  The
    returned root is one of the two; callers pick the branch they need.
    """
    if value.is_zero():
        return RationalExpr.constant(0)
    # sqrt(num/den) = sqrt(num*den)/den
    target = value.num * value.den
    root = _poly_sqrt_with_s(target)
    if root is None:
        return None
    return RationalExpr(root, value.den)


def _poly_sqrt_with_s(poly: Poly) -> Optional[Poly]:
    u, v = poly.split_s()
    s = Poly.variable("s")
    if v.is_zero():
        plain = poly_sqrt(u)
        if plain is not None:
            return plain
        # try u = n * w with w a square, giving root sqrt(w)*s
        try:
            w = _div_exact(u, Poly.variable("n"))
        except ArithmeticError:
            return None
        w_root = poly_sqrt(w)
        return None if w_root is None else w_root * s
    # u + v*s = (f + g*s)^2 needs f*g = v/2 and f^2 + n*g^2 = u;
    # the norm (f^2 - n*g^2)^2 = u^2 - n*v^2 pins both squares down
    norm = u * u - Poly.variable("n") * v * v
    w = poly_sqrt(norm)
    if w is None:
        return None
    for signed in (w, -w):
        f_sq = (u + signed).scale(Fraction(1, 2))
        f = poly_sqrt(f_sq)
        if f is None or f.is_zero():
            continue
        try:
            g = _div_exact(v.scale(Fraction(1, 2)), f)
        except ArithmeticError:
            continue
        candidate = f + g * s
        if candidate * candidate == poly:
            return candidate
    return None


# ---------------------------------------------------------------------------
# parsing


def parse_expr(text: str) -> RationalExpr:
    """Parse the deterministic infix form produced by ``str(expr)``.

    Grammar: ``+ - * / ^`` with usual precedence, parentheses, integer
    literals and the fixed indeterminate names.
    """
    tokens = _tokenize(text)
    parser = _Parser(tokens, text)
    value = parser.parse_sum()
    parser.expect_end()
    return value


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ExprSyntaxError(f"unexpected character {ch!r} in {text!r}")
    return tokens


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def take(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_end(self):
        if self.pos != len(self.tokens):
            raise ExprSyntaxError(f"trailing input in {self.text!r}")

    def parse_sum(self):
        value = self.parse_product()
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.parse_product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_product(self):
        value = self.parse_unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            rhs = self.parse_unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def parse_unary(self):
        if self.peek() == "-":
            self.take()
            return -self.parse_unary()
        if self.peek() == "+":
            self.take()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek() == "^":
            self.take()
            negative = False
            while self.peek() == "-":
                self.take()
                negative = not negative
            kind, text = self.take() if self.peek() == "int" else (None, None)
            if kind != "int":
                raise ExprSyntaxError(f"exponent must be an integer in {self.text!r}")
            exponent = int(text)
            return base ** (-exponent if negative else exponent)
        return base

    def parse_atom(self):
        if self.peek() == "(":
            self.take()
            value = self.parse_sum()
            if self.peek() != ")":
                raise ExprSyntaxError(f"missing ')' in {self.text!r}")
            self.take()
            return value
        if self.peek() == "int":
            return RationalExpr.constant(int(self.take()[1]))
        if self.peek() == "name":
            return RationalExpr.variable(self.take()[1])
        raise ExprSyntaxError(f"could not parse {self.text!r}")


# convenient named generators (``lambda`` is a keyword, hence LAM)
N = RationalExpr.variable("n")
KAPPA = RationalExpr.variable("kappa")
LAM = RationalExpr.variable("lambda")
R = RationalExpr.variable("r")
MU = RationalExpr.variable("mu")
A = RationalExpr.variable("a")
C = RationalExpr.variable("c")
A0 = RationalExpr.variable("a0")
A1 = RationalExpr.variable("a1")
S = RationalExpr.variable("s")

ZERO = RationalExpr.constant(0)
ONE = RationalExpr.constant(1)
