"""
Exact Laurent polynomials in v = q^(1/2) over arbitrary-precision integers

Every character value and every Hecke coefficient in the calculator is a
LaurentPoly. The exponent key n stands for v^n = q^(n/2).
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from src.errors import ParseError, ZeroPolynomialError

Scalar = Union[int, "LaurentPoly"]

_V = sympy.Symbol("v", positive=True)
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class LaurentPoly:
    """Immutable Laurent polynomial sum c_n v^n with no zero coefficients stored"""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] = None):
        canonical: Dict[int, int] = {}
        for exponent, coeff in (terms or {}).items():
            coeff = int(coeff)
            if coeff:
                canonical[int(exponent)] = coeff
        object.__setattr__(self, "_terms", canonical)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, coeff: int, exponent: int) -> "LaurentPoly":
        """c * v^n"""
        return cls({exponent: coeff})

    @classmethod
    def q_power(cls, k: int, coeff: int = 1) -> "LaurentPoly":
        """c * q^k, i.e. c * v^(2k)"""
        return cls({2 * k: coeff})

    @classmethod
    def v(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def q(cls) -> "LaurentPoly":
        return cls({2: 1})

    @classmethod
    def coerce(cls, value) -> "LaurentPoly":
        """Accept a LaurentPoly, an integer, a JSON pair list, or a text expression"""
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, bool):
            raise ParseError("polynomial", f"boolean {value!r} is not a polynomial")
        if isinstance(value, int):
            return cls({0: value})
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, (list, tuple)):
            return cls.from_json(value)
        raise ParseError("polynomial", f"unsupported value {value!r}")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Tuple[Tuple[int, int], ...]:
        """(exponent, coefficient) pairs sorted by exponent"""
        return tuple(sorted(self._terms.items()))

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integral_in_q(self) -> bool:
        """True when every exponent is even, i.e. only integer powers of q occur"""
        return all(exponent % 2 == 0 for exponent in self._terms)

    def leading(self) -> Tuple[int, int]:
        """Term of maximal v-exponent as (exponent, coefficient)"""
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        exponent = max(self._terms)
        return exponent, self._terms[exponent]

    def trailing(self) -> Tuple[int, int]:
        if not self._terms:
            raise ZeroPolynomialError("the zero polynomial has no trailing term")
        exponent = min(self._terms)
        return exponent, self._terms[exponent]

    def degree(self) -> int:
        return self.leading()[0]

    def valuation(self) -> int:
        return self.trailing()[0]

    def evaluate(self, v_value: int) -> Fraction:
        """Exact specialization v -> v_value (an integer, nonzero when negative powers occur)"""
        total = Fraction(0)
        for exponent, coeff in self._terms.items():
            if exponent < 0 and v_value == 0:
                raise ZeroDivisionError("cannot specialize v = 0 with negative exponents present")
            total += coeff * Fraction(v_value) ** exponent
        return total

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Scalar) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        result = dict(self._terms)
        for exponent, coeff in other._terms.items():
            result[exponent] = result.get(exponent, 0) + coeff
        return LaurentPoly(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(result)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            # only monomials c v^n with c = +-1 are units
            if not self.is_monomial() or abs(self.leading()[1]) != 1:
                raise ValueError("only monomials with coefficient +-1 can be inverted")
            exponent, coeff = self.leading()
            return LaurentPoly({exponent * k: coeff ** (-k)})
        result = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> List[List]:
        """[[exponent, "coefficient"], ...] sorted by exponent"""
        return [[exponent, str(coeff)] for exponent, coeff in self.terms]

    @classmethod
    def from_json(cls, data: Iterable) -> "LaurentPoly":
        terms: Dict[int, int] = {}
        for position, pair in enumerate(data):
            try:
                exponent, coeff = pair
                exponent = int(exponent)
                coeff = int(coeff)
            except (TypeError, ValueError) as exc:
                raise ParseError("polynomial", f"bad term #{position} {pair!r}: {exc}")
            if exponent in terms:
                raise ParseError("polynomial", f"duplicate exponent {exponent}")
            terms[exponent] = coeff
        return cls(terms)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse text such as '2*q^2 - 1', 'v^3 - v^-1' or 'q^(1/2)' (q is read as v^2)"""
        try:
            expr = parse_expr(
                text,
                local_dict={"q": _V ** 2, "v": _V, "sqrt": sympy.sqrt},
                transformations=_TRANSFORMATIONS,
            )
        except Exception as exc:
            raise ParseError("polynomial", f"{text!r}: {exc}")
        expr = sympy.expand(sympy.sympify(expr))
        if expr.free_symbols - {_V}:
            raise ParseError("polynomial", f"{text!r}: unknown symbols {expr.free_symbols - {_V}}")
        terms: Dict[int, int] = {}
        for monomial, coeff in expr.as_coefficients_dict().items():
            if not coeff.is_Integer:
                raise ParseError("polynomial", f"{text!r}: non-integer coefficient {coeff}")
            if monomial == 1:
                exponent = 0
            elif monomial == _V:
                exponent = 1
            elif monomial.is_Pow and monomial.base == _V and monomial.exp.is_Integer:
                exponent = int(monomial.exp)
            else:
                raise ParseError("polynomial", f"{text!r}: term {monomial} is not a power of v")
            terms[exponent] = terms.get(exponent, 0) + int(coeff)
        return cls(terms)

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        in_q = self.is_integral_in_q()
        pieces = []
        for exponent, coeff in sorted(self._terms.items(), reverse=True):
            power = exponent // 2 if in_q else exponent
            variable = "q" if in_q else "v"
            if power == 0:
                body = str(abs(coeff))
            else:
                symbol = variable if power == 1 else f"{variable}^{power}"
                body = symbol if abs(coeff) == 1 else f"{abs(coeff)}*{symbol}"
            if not pieces:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"


def _as_poly(value) -> "LaurentPoly":
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return LaurentPoly({0: value})
    return NotImplemented


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    """Exact add/sub/mul/neg; neg ignores b"""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"Unknown operation: {op}")


def lp_monomial(coeff: int, exponent: int) -> LaurentPoly:
    return LaurentPoly.monomial(coeff, exponent)


def lp_leading(a: LaurentPoly) -> Tuple[int, int]:
    return a.leading()


Q = LaurentPoly.q()
ONE = LaurentPoly.one()
ZERO = LaurentPoly.zero()
