"""
Finite field arithmetic over GF(p^m).

Elements are plain integers in ``[0, q)`` whose base-``p`` digits (least
significant first) are the polynomial coefficients modulo the field modulus, so
that GF(8) elements are written ``0..7`` in matrix files. Extension fields up to
``q = 256`` are tabulated with numpy on first use; larger fields fall back to
polynomial arithmetic with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import FieldError

__all__ = [
    "DEFAULT_MODULI",
    "FieldElement",
    "FieldSpec",
    "field_arith",
    "field_for_order",
    "field_make",
    "is_prime",
]

# Little-endian coefficient lists c0..cm of the shipped irreducible moduli.
DEFAULT_MODULI: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
    (3, 3): (1, 2, 0, 1),  # x^3 + 2x + 1
    (5, 2): (2, 0, 1),  # x^2 + 2
    (7, 2): (1, 0, 1),  # x^2 + 1
}

_TABLE_MAX_ORDER = 256


def is_prime(value: int) -> bool:
    """Deterministic trial-division primality test for small characteristics."""
    if value < 2:
        return False
    if value % 2 == 0:
        return value == 2
    divisor = 3
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 2
    return True


def _poly_remainder(dividend: Sequence[int], divisor: Sequence[int], p: int) -> List[int]:
    """Remainder of ``dividend`` by the monic ``divisor`` over F_p (little-endian)."""
    rem = [c % p for c in dividend]
    deg = len(divisor) - 1
    for top in range(len(rem) - 1, deg - 1, -1):
        coeff = rem[top]
        if coeff:
            shift = top - deg
            for idx, d in enumerate(divisor):
                rem[shift + idx] = (rem[shift + idx] - coeff * d) % p
    return rem[:deg]


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    degree = len(modulus) - 1
    for d in range(1, degree // 2 + 1):
        for tail in product(range(p), repeat=d):
            if not any(_poly_remainder(modulus, (*tail, 1), p)):
                return False
    return True


def _format_poly(coeffs: Sequence[int]) -> str:
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if not c:
            continue
        base = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
        if not base:
            terms.append(str(c))
        else:
            terms.append(base if c == 1 else f"{c}{base}")
    return " + ".join(terms) or "0"


@dataclass(frozen=True)
class FieldSpec:
    """
    The finite field GF(p^m).

    ``modulus`` holds the ``m + 1`` little-endian coefficients of a monic
    irreducible polynomial; it is normalised to an empty tuple for prime fields.
    """

    p: int
    m: int = 1
    modulus: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"characteristic p = {self.p} is not prime")
        if self.m < 1:
            raise FieldError(f"extension degree m = {self.m} must be at least 1")
        if self.m == 1:
            object.__setattr__(self, "modulus", ())
            return
        modulus = tuple(int(c) for c in self.modulus)
        if len(modulus) != self.m + 1:
            raise FieldError(
                f"modulus for GF({self.p}^{self.m}) needs {self.m + 1} coefficients, "
                f"got {len(modulus)}"
            )
        if any(c < 0 or c >= self.p for c in modulus):
            raise FieldError(f"modulus coefficients must lie in [0, {self.p})")
        if modulus[-1] != 1:
            raise FieldError(f"modulus {_format_poly(modulus)} is not monic")
        if not _is_irreducible(modulus, self.p):
            raise FieldError(f"modulus {_format_poly(modulus)} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", modulus)

    # ------------------------------------------------------------------ Metadata
    @property
    def q(self) -> int:
        return self.p**self.m

    def describe(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.q}) = GF({self.p})[x]/({_format_poly(self.modulus)})"

    def elements(self) -> Iterator[FieldElement]:
        for value in range(self.q):
            yield FieldElement(self, value)

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def check(self, value: int) -> int:
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element of {self.describe()}")
        return value

    # ------------------------------------------------------------------ Digits
    def _digits(self, value: int) -> List[int]:
        digits = []
        for _ in range(self.m):
            value, d = divmod(value, self.p)
            digits.append(d)
        return digits

    def _from_digits(self, digits: Sequence[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.p + d
        return value

    def _poly_mul(self, a: int, b: int) -> int:
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._from_digits(_poly_remainder(prod, self.modulus, self.p))

    # ------------------------------------------------------------------ Tables
    @property
    def tabulated(self) -> bool:
        return self.m > 1 and self.q <= _TABLE_MAX_ORDER

    @cached_property
    def _powers(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.m)], dtype=np.int64)

    @cached_property
    def _digit_matrix(self) -> np.ndarray:
        return (np.arange(self.q, dtype=np.int64)[:, None] // self._powers) % self.p

    @cached_property
    def add_table(self) -> np.ndarray:
        digits = self._digit_matrix
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        return summed @ self._powers

    @cached_property
    def mul_table(self) -> np.ndarray:
        digits = self._digit_matrix
        reduction = np.array(self.modulus[: self.m], dtype=np.int64)
        # shifted[i] holds the digits of x^i * b for every b
        shifted = [digits]
        for _ in range(1, self.m):
            prev = shifted[-1]
            carry = prev[:, -1:]
            moved = np.concatenate([np.zeros_like(carry), prev[:, :-1]], axis=1)
            shifted.append((moved - carry * reduction) % self.p)
        stacked = np.stack(shifted)  # (m, q, m)
        product_digits = np.einsum("ai,ibk->abk", digits, stacked) % self.p
        return product_digits @ self._powers

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((self.p - self._digit_matrix) % self.p) @ self._powers

    @cached_property
    def inv_table(self) -> np.ndarray:
        inverse = np.argmax(self.mul_table == 1, axis=1).astype(np.int64)
        inverse[0] = 0
        return inverse

    @cached_property
    def _add_rows(self) -> List[List[int]]:
        return self.add_table.tolist()

    @cached_property
    def _mul_rows(self) -> List[List[int]]:
        return self.mul_table.tolist()

    @cached_property
    def _neg_list(self) -> List[int]:
        return self.neg_table.tolist()

    @cached_property
    def _inv_list(self) -> List[int]:
        return self.inv_table.tolist()

    # ------------------------------------------------------------------ Scalars
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        if self.tabulated:
            return self._add_rows[a][b]
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        if self.tabulated:
            return self._neg_list[a]
        return self._from_digits([(-x) % self.p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if self.tabulated:
            return self._mul_rows[a][b]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError(f"zero has no inverse in {self.describe()}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self.tabulated:
            return self._inv_list[a]
        return self.power(a, self.q - 2)

    def power(self, a: int, exponent: int) -> int:
        if exponent < 0:
            return self.power(self.inv(a), -exponent)
        result, base = 1, a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    # ------------------------------------------------------------------ Vectors
    def scale(self, c: int, vec: np.ndarray) -> np.ndarray:
        """Multiply every entry of ``vec`` by the scalar ``c``."""
        vec = np.asarray(vec, dtype=np.int64)
        if self.m == 1:
            return (c * vec) % self.p
        if self.tabulated:
            return self.mul_table[c, vec]
        return np.array([self.mul(c, int(v)) for v in vec.ravel()], dtype=np.int64).reshape(
            vec.shape
        )

    def combine(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Entry-wise field sum of two equally shaped arrays."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(u, v)
        if self.m == 1:
            return (u + v) % self.p
        if self.tabulated:
            return self.add_table[u, v]
        flat = [self.add(int(a), int(b)) for a, b in zip(u.ravel(), v.ravel())]
        return np.array(flat, dtype=np.int64).reshape(u.shape)

    def negate(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.int64)
        if self.p == 2:
            return vec.copy()
        if self.m == 1:
            return (-vec) % self.p
        if self.tabulated:
            return self.neg_table[vec]
        return np.array([self.neg(int(a)) for a in vec.ravel()], dtype=np.int64).reshape(
            vec.shape
        )


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific field; arithmetic refuses to mix fields."""

    spec: FieldSpec
    value: int

    def __post_init__(self) -> None:
        self.spec.check(self.value)

    def _operand(self, other: Union[FieldElement, int]) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError(
                    f"cannot combine {self.spec.describe()} with {other.spec.describe()}"
                )
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.spec.check(int(other))
        raise FieldError(f"unsupported operand {other!r}")

    def __add__(self, other: Union[FieldElement, int]) -> FieldElement:
        return FieldElement(self.spec, self.spec.add(self.value, self._operand(other)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __sub__(self, other: Union[FieldElement, int]) -> FieldElement:
        return FieldElement(self.spec, self.spec.sub(self.value, self._operand(other)))

    def __mul__(self, other: Union[FieldElement, int]) -> FieldElement:
        return FieldElement(self.spec, self.spec.mul(self.value, self._operand(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[FieldElement, int]) -> FieldElement:
        divisor = self.spec.inv(self._operand(other))
        return FieldElement(self.spec, self.spec.mul(self.value, divisor))

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(self.spec, self.spec.power(self.value, exponent))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.spec.q})({self.value})"


def field_make(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldSpec:
    """
    Build a validated field specification.

    Args:
        p: Prime characteristic
        m: Extension degree
        modulus: Little-endian coefficients of a monic irreducible degree-m
            polynomial; taken from ``DEFAULT_MODULI`` when omitted

    Raises:
        FieldError: For a non-prime ``p``, a bad modulus, or a missing default
    """
    if m > 1 and modulus is None:
        if not is_prime(p):
            raise FieldError(f"characteristic p = {p} is not prime")
        try:
            modulus = DEFAULT_MODULI[(p, m)]
        except KeyError:
            raise FieldError(
                f"no default modulus for GF({p}^{m}); pass the coefficients explicitly"
            ) from None
    return FieldSpec(p, m, tuple(modulus or ()))


def field_for_order(q: int) -> FieldSpec:
    """Return the default field with ``q`` elements."""
    if q < 2:
        raise FieldError(f"q = {q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise FieldError(f"q = {q} is not a prime power")
    return field_make(p, m)


_OPERATIONS = {"add", "neg", "sub", "mul", "inv"}


def field_arith(
    spec: FieldSpec,
    op: str,
    a: Union[FieldElement, int],
    b: Optional[Union[FieldElement, int]] = None,
) -> FieldElement:
    """Apply one of ``add``, ``neg``, ``sub``, ``mul``, ``inv`` within ``spec``."""
    if op not in _OPERATIONS:
        raise FieldError(f"unknown field operation '{op}'")
    left = a if isinstance(a, FieldElement) else FieldElement(spec, int(a))
    if left.spec != spec:
        raise FieldError(f"operand belongs to {left.spec.describe()}, not {spec.describe()}")
    if op == "neg":
        return -left
    if op == "inv":
        return left.inverse()
    if b is None:
        raise FieldError(f"operation '{op}' needs two operands")
    dispatch: Dict[str, Any] = {
        "add": left.__add__,
        "sub": left.__sub__,
        "mul": left.__mul__,
    }
    return dispatch[op](b)
